"""Problem descriptions as JSON: parsing, validation, and solver dispatch.

A problem object names the drivers, the constants and the solution mode:

    {"g": <derivator>, "h": <derivator>, "c": 0.5, "T": 1.5, "L": 2.5,
     "mode": "ivp", "ivp": {...}}

with the mode payload nested under the mode's own name.  Two-variable modes
replace the "g"/"h" pair with {"G": {"kind": "sum"|"product", "g": ..,
"h": ..}} and use mode "gpoly-series" or "product-eigen".  Complex scalars
are written as [re, im] pairs.
"""

import json
import math
from dataclasses import dataclass

from .derivators import Derivator
from .errors import SchemaError
from .heat1d import (
    HeatProblem,
    dirichlet_solution,
    general_solution,
    neumann_solution,
    periodic_solution,
    solve_ivp,
)
from .heat2d import (
    ProductDerivator,
    SumDerivator,
    gpoly_series_solution,
    solve_product_case,
)

SEPARATED_MODES = ("ivp", "periodic", "dirichlet", "neumann", "general")
TWO_VAR_MODES = ("gpoly-series", "product-eigen")


def _is_number(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _number(obj, path):
    if not _is_number(obj):
        raise SchemaError(f"{path} must be a number, got {obj!r}")
    return float(obj)


def _scalar(obj, path):
    """A real number, or a [re, im] pair for a complex value."""
    if _is_number(obj):
        return float(obj)
    if isinstance(obj, list) and len(obj) == 2 and all(_is_number(v) for v in obj):
        z = complex(obj[0], obj[1])
        return z.real if z.imag == 0.0 else z
    raise SchemaError(f"{path} must be a number or an [re, im] pair, got {obj!r}")


def _field(obj, key, path):
    if not isinstance(obj, dict):
        raise SchemaError(f"{path} must be an object")
    if key not in obj:
        raise SchemaError(f"{path} is missing the field {key!r}")
    return obj[key]


def _derivator(obj, path):
    try:
        return Derivator.from_json(obj)
    except SchemaError as e:
        raise SchemaError(f"{path}: {e}") from e


def alpha_stream(spec, path="alpha"):
    """Coefficient stream from its JSON description.

    Kinds: "list" (finite support; zero beyond the end), "geometric"
    (scale * ratio^n), "inv-sqrt-factorial", "inv-factorial".
    """
    if not isinstance(spec, dict):
        raise SchemaError(f"{path} must be an object with a 'kind' field")
    kind = spec.get("kind")
    if kind == "list":
        vals = _field(spec, "values", path)
        if not isinstance(vals, list) or not vals:
            raise SchemaError(f"{path}.values must be a nonempty list")
        return [_scalar(v, f"{path}.values[{i}]") for i, v in enumerate(vals)]
    if kind == "geometric":
        ratio = _number(_field(spec, "ratio", path), f"{path}.ratio")
        scale = _number(spec.get("scale", 1.0), f"{path}.scale")
        return lambda n: scale * ratio**n
    if kind == "inv-sqrt-factorial":
        return lambda n: math.exp(-0.5 * math.lgamma(n + 1))
    if kind == "inv-factorial":
        return lambda n: math.exp(-math.lgamma(n + 1))
    raise SchemaError(
        f"{path}.kind must be one of 'list', 'geometric', 'inv-sqrt-factorial',"
        f" 'inv-factorial', got {kind!r}"
    )


def _term_triple(obj, path):
    lam = _scalar(_field(obj, "lam", path), f"{path}.lam")
    a = _scalar(_field(obj, "a", path), f"{path}.a")
    b = _scalar(_field(obj, "b", path), f"{path}.b")
    return lam, a, b


@dataclass
class ParsedProblem:
    """Validated problem: drivers, constants, mode and its raw payload."""

    mode: str
    c: float
    T: float
    L: float
    payload: dict
    problem: HeatProblem = None  # separated modes
    G: object = None  # two-variable modes
    raw: dict = None  # the full validated description

    @property
    def g(self):
        return self.problem.g if self.problem is not None else self.G.g

    @property
    def h(self):
        return self.problem.h if self.problem is not None else self.G.h


def load_problem(obj):
    """Parse and validate a problem description (dict or JSON text)."""
    if isinstance(obj, (str, bytes)):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as e:
            raise SchemaError(f"invalid JSON: {e}") from e
    if not isinstance(obj, dict):
        raise SchemaError("problem description must be an object")
    mode = obj.get("mode")
    if mode not in SEPARATED_MODES + TWO_VAR_MODES:
        raise SchemaError(
            f"mode must be one of {SEPARATED_MODES + TWO_VAR_MODES}, got {mode!r}"
        )
    c = _number(_field(obj, "c", "problem"), "c")
    T = _number(_field(obj, "T", "problem"), "T")
    L = _number(_field(obj, "L", "problem"), "L")
    payload = obj.get(mode, {})
    if not isinstance(payload, dict):
        raise SchemaError(f"payload {mode!r} must be an object")

    if mode in TWO_VAR_MODES:
        Gspec = _field(obj, "G", "problem")
        kind = _field(Gspec, "kind", "G")
        g = _derivator(_field(Gspec, "g", "G"), "G.g")
        h = _derivator(_field(Gspec, "h", "G"), "G.h")
        if kind == "sum":
            G = SumDerivator(g, h)
        elif kind == "product":
            G = ProductDerivator(g, h)
        else:
            raise SchemaError(f"G.kind must be 'sum' or 'product', got {kind!r}")
        if mode == "gpoly-series" and kind != "sum":
            raise SchemaError("mode 'gpoly-series' requires G.kind 'sum'")
        if mode == "product-eigen" and kind != "product":
            raise SchemaError("mode 'product-eigen' requires G.kind 'product'")
        return ParsedProblem(mode=mode, c=c, T=T, L=L, payload=payload, G=G, raw=obj)

    g = _derivator(_field(obj, "g", "problem"), "g")
    h = _derivator(_field(obj, "h", "problem"), "h")
    problem = HeatProblem(g, h, c, T, L)
    return ParsedProblem(
        mode=mode, c=c, T=T, L=L, payload=payload, problem=problem, raw=obj
    )


def _parse_ivp(payload):
    spec = {
        "a0": _scalar(payload.get("a0", 0.0), "ivp.a0"),
        "b0": _scalar(payload.get("b0", 0.0), "ivp.b0"),
    }
    modes = payload.get("modes", [])
    if not isinstance(modes, list):
        raise SchemaError("ivp.modes must be a list")
    spec["modes"] = [
        _term_triple(m, f"ivp.modes[{i}]") for i, m in enumerate(modes)
    ]
    return spec


def solve(parsed, tol=None):
    """Solve per mode.

    Returns (solution, info) where info carries mode-specific reports
    (currently the gate report of "gpoly-series").
    """
    mode, payload = parsed.mode, parsed.payload
    if mode == "ivp":
        return solve_ivp(parsed.problem, _parse_ivp(payload)), {}
    if mode == "general":
        terms = _field(payload, "terms", "general")
        if not isinstance(terms, list) or not terms:
            raise SchemaError("general.terms must be a nonempty list")
        triples = [_term_triple(t, f"general.terms[{i}]") for i, t in enumerate(terms)]
        return general_solution(parsed.problem, triples), {}
    if mode == "periodic":
        lam = _scalar(_field(payload, "lam", "periodic"), "periodic.lam")
        kw = {} if tol is None else {"tol": tol}
        return periodic_solution(parsed.problem, lam, **kw), {}
    if mode == "dirichlet":
        lam = _number(_field(payload, "lam", "dirichlet"), "dirichlet.lam")
        a = _scalar(_field(payload, "a", "dirichlet"), "dirichlet.a")
        N = int(payload.get("N", 60))
        return dirichlet_solution(parsed.problem, lam, a, N=N), {}
    if mode == "neumann":
        lam = _number(_field(payload, "lam", "neumann"), "neumann.lam")
        b = _scalar(_field(payload, "b", "neumann"), "neumann.b")
        N = int(payload.get("N", 60))
        return neumann_solution(parsed.problem, lam, b, N=N), {}
    if mode == "gpoly-series":
        alpha = alpha_stream(_field(payload, "alpha", "gpoly-series"), "gpoly-series.alpha")
        N = int(payload.get("N", 40))
        n_probe = payload.get("n_probe")
        sol, gate = gpoly_series_solution(
            parsed.G, alpha, parsed.c, parsed.T, parsed.L, N,
            n_probe=None if n_probe is None else int(n_probe),
        )
        return sol, {"gate": gate}
    if mode == "product-eigen":
        lam = _number(_field(payload, "lam", "product-eigen"), "product-eigen.lam")
        v_at_0 = _scalar(payload.get("v0", 1.0), "product-eigen.v0")
        dv_at_0 = _scalar(payload.get("dv0", 0.0), "product-eigen.dv0")
        kw = {} if tol is None else {"tol": tol}
        sol = solve_product_case(
            parsed.G, lam, parsed.c, v_at_0, dv_at_0, parsed.T, parsed.L, **kw
        )
        return sol, {}
    raise SchemaError(f"unhandled mode {mode!r}")
