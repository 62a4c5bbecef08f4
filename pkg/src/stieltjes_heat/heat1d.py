"""Heat equation with one derivator per axis: d_g u = c^2 d_h^2 u.

Solutions are superpositions of separated terms w(t) v(x), with
w = exp_g(lam c^2; 0, .) and v drawn from the exp_h family (or affine in h
when lam = 0).  Every term carries closed-form g/h derivatives, so residuals
can be checked both symbolically and against the numeric quotients.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .derivators import Derivator, regular_points
from .errors import DivergenceError, DomainError, GateError, InvariantError
from .gderiv import heat_residual
from .ode import solve_periodic_first_order
from .special import (
    gcos_series,
    gexp,
    gexp_right_limit,
    gsin_gcos,
    gsin_series,
)

__all__ = [
    "HeatProblem",
    "SeparatedTerm",
    "HeatSolution",
    "SeriesDiagnostics",
    "PeriodicSolution",
    "general_solution",
    "solve_ivp",
    "series_solution",
    "find_periodic_eigenvalues",
    "periodic_solution",
    "check_sin_condition",
    "check_cos_condition",
    "dirichlet_solution",
    "neumann_solution",
]


def _tidy(z):
    # collapse exact-real complex results (conjugate coefficient pairs)
    if isinstance(z, complex) and z.imag == 0.0:
        return z.real
    return z


@dataclass(frozen=True)
class HeatProblem:
    """Rectangle [0, T] x [0, L] with time derivator g and space derivator h."""

    g: Derivator
    h: Derivator
    c: float
    T: float
    L: float

    def __post_init__(self):
        if not self.c > 0:
            raise DomainError(f"diffusion constant must be positive, got {self.c}")
        if not (self.T > 0 and self.L > 0):
            raise DomainError(f"need T, L > 0, got T={self.T}, L={self.L}")
        for d, end, label in ((self.g, self.T, "T"), (self.h, self.L, "L")):
            if d.lo > 0.0 or d.hi < end:
                raise DomainError(
                    f"derivator domain [{d.lo}, {d.hi}] does not cover "
                    f"[0, {end}] required by {label}"
                )
            # terminal instants inside a jump or a constancy run make the
            # endpoint derivative one-sided in a degenerate way; warn, and
            # leave pointwise operations to their own domain checks
            if d.is_atom(end) or d.constancy_run(end) is not None:
                warnings.warn(
                    f"{label}={end} lies in the jump/constancy set of its "
                    "derivator; endpoint derivatives are not two-sided there",
                    UserWarning,
                    stacklevel=3,
                )


class SeparatedTerm:
    """One closed-form product solution w(t) * v(x).

    For lam != 0, v = a exp_h(sqrt(lam)) + b exp_h(-sqrt(lam)); for lam = 0,
    v = a + b h(x).  Real negative lam is routed through sin_h/cos_h so that
    conjugate coefficient pairs produce exactly real values.  The derivative
    rules w'_g = lam c^2 w and v''_h = lam v hold pointwise everywhere,
    including at atoms, where they coincide with the jump quotients.
    """

    def __init__(self, problem: HeatProblem, lam, a, b):
        self.problem = problem
        self.lam = lam
        self.a = a
        self.b = b
        self.rate = lam * problem.c**2
        z = complex(lam)
        if z == 0:
            self._kind = "affine"
            self._s = 0.0
        elif z.imag == 0.0 and z.real < 0.0:
            self._kind = "osc"
            self._s = math.sqrt(-z.real)
        else:
            self._kind = "exp"
            self._s = math.sqrt(z.real) if z.imag == 0.0 else cmath.sqrt(z)

    # -- time factor ---------------------------------------------------------

    def w(self, t):
        if self.lam == 0:
            return 1.0
        return gexp(self.problem.g, self.rate, 0.0, t)

    def w_right(self, t):
        if self.lam == 0:
            return 1.0
        return gexp_right_limit(self.problem.g, self.rate, 0.0, t)

    # -- space factor ----------------------------------------------------------

    def _osc_parts(self, x, shifted=False):
        h = self.problem.h
        s = self._s
        if shifted:
            sn, cs = gsin_gcos(h, s, x)
            gap = h.jump(x)
            sn, cs = sn + s * gap * cs, cs - s * gap * sn
        else:
            sn, cs = gsin_gcos(h, s, x)
        return sn, cs

    def v(self, x):
        h = self.problem.h
        if self._kind == "affine":
            return _tidy(self.a + self.b * h.eval(x))
        if self._kind == "osc":
            sn, cs = self._osc_parts(x)
            return _tidy((self.a + self.b) * cs + 1j * (self.a - self.b) * sn)
        ep = gexp(h, self._s, 0.0, x)
        em = gexp(h, -self._s, 0.0, x)
        return _tidy(self.a * ep + self.b * em)

    def dv(self, x):
        h = self.problem.h
        if self._kind == "affine":
            return self.b
        if self._kind == "osc":
            s = self._s
            sn, cs = self._osc_parts(x)
            return _tidy(s * (1j * (self.a - self.b) * cs - (self.a + self.b) * sn))
        ep = gexp(h, self._s, 0.0, x)
        em = gexp(h, -self._s, 0.0, x)
        return _tidy(self._s * (self.a * ep - self.b * em))

    def dv_right(self, x):
        """Right limit of dv at x (differs from dv only at atoms of h)."""
        h = self.problem.h
        if self._kind == "affine":
            return self.b
        if self._kind == "osc":
            s = self._s
            sn, cs = self._osc_parts(x, shifted=True)
            return _tidy(s * (1j * (self.a - self.b) * cs - (self.a + self.b) * sn))
        ep = gexp_right_limit(h, self._s, 0.0, x)
        em = gexp_right_limit(h, -self._s, 0.0, x)
        return _tidy(self._s * (self.a * ep - self.b * em))

    def d2v(self, x):
        if self._kind == "affine":
            return 0.0
        return _tidy(self.lam * self.v(x))

    # -- assembled values ------------------------------------------------------

    def u(self, t, x):
        return _tidy(self.w(t) * self.v(x))

    def dgt(self, t, x):
        return _tidy(self.rate * self.w(t) * self.v(x))

    def dhx(self, t, x):
        return _tidy(self.w(t) * self.dv(x))

    def dhx2(self, t, x):
        if self._kind == "affine":
            return 0.0
        return _tidy(self.lam * self.w(t) * self.v(x))


def _as_term(problem, term):
    if isinstance(term, SeparatedTerm):
        return term
    lam, a, b = term
    return SeparatedTerm(problem, lam, a, b)


class HeatSolution:
    """Finite superposition of separated terms with closed-form partials."""

    def __init__(self, problem: HeatProblem, terms):
        self.problem = problem
        self.terms = tuple(_as_term(problem, tm) for tm in terms)

    def __call__(self, t, x):
        return _tidy(sum((tm.u(t, x) for tm in self.terms), 0.0))

    def initial(self, x):
        return self(0.0, x)

    def dgt_rule(self, t, x):
        return _tidy(sum((tm.dgt(t, x) for tm in self.terms), 0.0))

    def dhx_rule(self, t, x):
        return _tidy(sum((tm.dhx(t, x) for tm in self.terms), 0.0))

    def dhx2_rule(self, t, x):
        return _tidy(sum((tm.dhx2(t, x) for tm in self.terms), 0.0))

    def residual_rule(self, t, x):
        return self.dgt_rule(t, x) - self.problem.c**2 * self.dhx2_rule(t, x)

    def residual_numeric(self, t, x, **kw):
        p = self.problem
        return heat_residual(self, t, x, p.g, p.h, p.c, **kw)

    def jump_residual_t(self, t, x):
        """Exact atom-row residual in time: jump quotient minus c^2 d_h^2 u."""
        g = self.problem.g
        gap = g.jump(t)
        if gap == 0.0:
            raise DomainError(f"t={t} is not an atom of the time derivator")
        up = sum((tm.w_right(t) * tm.v(x) for tm in self.terms), 0.0)
        quot = (up - self(t, x)) / gap
        return _tidy(quot - self.problem.c**2 * self.dhx2_rule(t, x))

    def jump_residual_x(self, t, x):
        """Exact atom-row residual in space: d_g u minus c^2 times the jump
        quotient of the first h-derivative."""
        h = self.problem.h
        gap = h.jump(x)
        if gap == 0.0:
            raise DomainError(f"x={x} is not an atom of the space derivator")
        dplus = sum((tm.w(t) * tm.dv_right(x) for tm in self.terms), 0.0)
        quot = (dplus - self.dhx_rule(t, x)) / gap
        return _tidy(self.dgt_rule(t, x) - self.problem.c**2 * quot)


def general_solution(problem: HeatProblem, terms) -> HeatSolution:
    """Superpose separated terms; terms may be SeparatedTerm or (lam, a, b)."""
    return HeatSolution(problem, terms)


def solve_ivp(problem: HeatProblem, u0_spec) -> HeatSolution:
    """Solution with u(0, x) = a0 + b0 h(x) + sum a_n exp_h(sqrt(lam_n);0,x)
    + b_n exp_h(-sqrt(lam_n);0,x).

    u0_spec: {"a0": .., "b0": .., "modes": [(lam_n, a_n, b_n), ...]}.  The
    initial condition holds by construction: every time factor equals 1 at
    t = 0.  lam_n = 0 in the mode list is rejected (fold it into a0/b0).
    """
    a0 = u0_spec.get("a0", 0.0)
    b0 = u0_spec.get("b0", 0.0)
    modes = u0_spec.get("modes", ())
    terms = []
    if a0 != 0 or b0 != 0:
        terms.append(SeparatedTerm(problem, 0.0, a0, b0))
    for lam, a, b in modes:
        if lam == 0:
            raise DomainError(
                "mode eigenvalue 0 is not allowed; fold constants into a0/b0"
            )
        terms.append(SeparatedTerm(problem, lam, a, b))
    return HeatSolution(problem, terms)


@dataclass(frozen=True)
class SeriesDiagnostics:
    """Sup-norm tail estimates for a truncated separated series.

    Tails are trailing five-term sup-norm sums on a regular probe grid, for
    the value and for each differentiated series.  `contracting` applies the
    trailing ratio < 0.9 heuristic; it is a diagnostic, not a proof of
    convergence of the infinite series.
    """

    truncation: int
    value_tail: float
    dgt_tail: float
    dhx_tail: float
    dhx2_tail: float
    tail_ratio: float
    contracting: bool


def _stream(s, n):
    return s(n) if callable(s) else s[n]


def series_solution(problem, a_stream, b_stream, lam_stream, N, probe=(7, 7)):
    """Truncated series sum_{n<=N} w_n v_n with contraction diagnostics.

    Streams are sequences or callables; index 0 feeds the lam = 0 term
    (a0 + b0 h(x)) and indices 1..N feed modes with eigenvalue lam_stream(n).
    Returns (HeatSolution, SeriesDiagnostics); warns when the trailing
    sup-norm ratios fail to contract.
    """
    if N < 1:
        raise DomainError(f"need N >= 1 series terms, got {N}")
    terms = [SeparatedTerm(problem, 0.0, _stream(a_stream, 0), _stream(b_stream, 0))]
    for n in range(1, N + 1):
        lam = _stream(lam_stream, n)
        if lam == 0:
            raise DomainError(f"lam_stream({n}) = 0; index 0 owns the constant term")
        terms.append(
            SeparatedTerm(problem, lam, _stream(a_stream, n), _stream(b_stream, n))
        )
    sol = HeatSolution(problem, terms)

    nt, nx = probe
    ts = [0.0] + regular_points(problem.g, 0.0, problem.T, nt)
    xs = [0.0] + regular_points(problem.h, 0.0, problem.L, nx)
    sup_value, sup_dgt, sup_dhx, sup_dhx2 = [], [], [], []
    for tm in terms:
        wmax = max(abs(tm.w(t)) for t in ts)
        vmax = max(abs(tm.v(x)) for x in xs)
        dvmax = max(abs(tm.dv(x)) for x in xs)
        sup_value.append(wmax * vmax)
        sup_dgt.append(abs(tm.rate) * wmax * vmax)
        sup_dhx.append(wmax * dvmax)
        sup_dhx2.append(abs(tm.lam) * wmax * vmax)
    arrays = (sup_value, sup_dgt, sup_dhx, sup_dhx2)
    if not all(math.isfinite(s) for arr in arrays for s in arr):
        raise DivergenceError("series terms are non-finite on the probe grid")

    k0 = max(1, N - 4)
    tails = [sum(arr[k0:]) for arr in arrays]
    ratios = [
        sup_value[n] / sup_value[n - 1]
        for n in range(k0, N + 1)
        if sup_value[n - 1] > 0.0
    ]
    tail_ratio = sum(ratios) / len(ratios) if ratios else 0.0
    contracting = tail_ratio < 0.9
    if not contracting:
        warnings.warn(
            f"series tails do not contract (trailing ratio {tail_ratio:.3g}); "
            "the truncation is reported, not certified",
            UserWarning,
            stacklevel=2,
        )
    diag = SeriesDiagnostics(N, *tails, tail_ratio=tail_ratio, contracting=contracting)
    return sol, diag


# -- periodic boundary machinery -----------------------------------------------


def _periodic_gate(h, s, L):
    return gexp(h, complex(0.0, -s), 0.0, L)


def find_periodic_eigenvalues(problem, lam_range, count=8):
    """Real eigenvalues lam <= 0 with exp_h(-sqrt(lam); 0, L) = 1.

    Scans s = sqrt(-lam) on a log grid (2048 points per decade), brackets
    sign changes of Im exp_h(-is; 0, L), bisects to 1e-12 bracket width and
    keeps roots with |exp_h(-is;0,L) - 1| < 1e-9.  lam = 0 always satisfies
    the gate and is included when the range allows.  Returns up to `count`
    eigenvalues ordered by |lam|.
    """
    h, L = problem.h, problem.L
    lam_lo, lam_hi = sorted(lam_range)
    if lam_lo >= 0 or lam_hi > 0:
        raise DomainError(
            f"scan range must satisfy lam_lo < 0 and lam_hi <= 0, got {lam_range}"
        )
    out = []
    if lam_hi == 0:
        out.append(0.0)
    s_max = math.sqrt(-lam_lo)
    s_min = math.sqrt(-lam_hi) if lam_hi < 0 else s_max * 1e-4
    f = lambda s: _periodic_gate(h, s, L).imag

    def bisect(s1, s2, f1):
        while s2 - s1 > 1e-12:
            mid = 0.5 * (s1 + s2)
            fm = f(mid)
            if fm == 0.0:
                return mid
            if (f1 < 0) == (fm < 0):
                s1, f1 = mid, fm
            else:
                s2 = mid
        return 0.5 * (s1 + s2)

    n_grid = max(2, int(2048 * math.log10(s_max / s_min)) + 1)
    grid = np.geomspace(s_min, s_max, n_grid)
    prev_s, prev_f = grid[0], f(grid[0])
    for s in grid[1:]:
        if len(out) >= count:
            break
        fs = f(s)
        root = None
        if fs == 0.0:
            root = s
        elif (prev_f < 0) != (fs < 0):
            root = bisect(prev_s, s, prev_f)
        if root is not None and abs(_periodic_gate(h, root, L) - 1.0) < 1e-9:
            out.append(float(-root * root))
        prev_s, prev_f = s, fs
    return out[:count]


class PeriodicSolution:
    """u(t, x) = w(t) v(x) with v periodic on [0, L].

    v comes from the first-order splitting: u1 = exp_h(-sqrt(lam); 0, .)
    solves v'_h + sqrt(lam) v = 0 with v(0) = v(L), and v solves
    v'_h - sqrt(lam) v = u1 periodically, whence v''_h = lam v.
    """

    def __init__(self, problem, lam, v):
        self.problem = problem
        self.lam = lam
        self.rate = lam * problem.c**2
        self.v = v

    def w(self, t):
        return gexp(self.problem.g, self.rate, 0.0, t)

    def __call__(self, t, x):
        return self.w(t) * self.v(x)

    def dgt_rule(self, t, x):
        return self.rate * self(t, x)

    def dhx_rule(self, t, x):
        return self.w(t) * self.v.derivative(x)

    def dhx2_rule(self, t, x):
        return self.lam * self(t, x)

    def residual_rule(self, t, x):
        return self.dgt_rule(t, x) - self.problem.c**2 * self.dhx2_rule(t, x)

    def residual_numeric(self, t, x, **kw):
        p = self.problem
        return heat_residual(self, t, x, p.g, p.h, p.c, **kw)


def periodic_solution(problem, lam, tol=1e-10):
    """Separated solution of the periodic problem for eigenvalue lam <= 0.

    Requires |exp_h(-sqrt(lam); 0, L) - 1| < 1e-9 (gate).  Builds v by the
    two-stage first-order splitting and verifies u(t,0) = u(t,L) and
    d_h u(t,0) = d_h u(t,L) within 1e-6 at 11 regular times.
    """
    if isinstance(lam, complex) or lam > 0:
        raise DomainError(f"periodic eigenvalues are real and <= 0, got {lam!r}")
    if lam == 0:
        return HeatSolution(problem, [(0.0, 1.0, 0.0)])
    h, L = problem.h, problem.L
    s = math.sqrt(-lam)
    gate = _periodic_gate(h, s, L)
    if abs(gate - 1.0) >= 1e-9:
        raise GateError(
            f"exp_h(-sqrt(lam); 0, L) = {gate!r} is not 1 (defect "
            f"{abs(gate - 1.0):.3e}); lam = {lam} is not a periodic eigenvalue"
        )
    sq = complex(0.0, s)  # sqrt(lam), principal branch

    def u1(x):
        return gexp(h, -sq, 0.0, x)

    v = solve_periodic_first_order(h, -sq, u1, L, tol=tol)
    sol = PeriodicSolution(problem, lam, v)

    dev_u = dev_du = 0.0
    for t in regular_points(problem.g, 0.0, problem.T, 11):
        dev_u = max(dev_u, abs(sol(t, 0.0) - sol(t, L)))
        dev_du = max(dev_du, abs(sol.dhx_rule(t, 0.0) - sol.dhx_rule(t, L)))
    if dev_u > 1e-6 or dev_du > 1e-6:
        raise InvariantError(
            f"periodic boundary check failed: |u(t,0)-u(t,L)| = {dev_u:.3e}, "
            f"|u'_h(t,0)-u'_h(t,L)| = {dev_du:.3e} exceed 1e-6"
        )
    return sol


# -- Dirichlet / Neumann series conditions ---------------------------------------


def check_sin_condition(h, lam, L, N=60):
    """Partial sum of sum (-1)^n (sqrt(-lam))^(2n+1) h_{2n+1}(L)/(2n+1)!.

    Returns (value, certified tail bound, bool); true when the series
    vanishes within tail + 1e-9, which makes sin_h(sqrt(-lam); 0, .) vanish
    at both 0 and L.
    """
    if not lam < 0:
        raise DomainError(f"series condition is for real lam < 0, got {lam!r}")
    value, tail = gsin_series(h, math.sqrt(-lam), L, order=N)
    return value, tail, bool(abs(value) <= tail + 1e-9)


def check_cos_condition(h, lam, L, N=60):
    """Even analogue of check_sin_condition with target value 1."""
    if not lam < 0:
        raise DomainError(f"series condition is for real lam < 0, got {lam!r}")
    value, tail = gcos_series(h, math.sqrt(-lam), L, order=N)
    return value, tail, bool(abs(value - 1.0) <= tail + 1e-9)


def _boundary_verify(sol, problem, quantity, label):
    dev = 0.0
    for t in [0.0] + regular_points(problem.g, 0.0, problem.T, 7):
        for x in (0.0, problem.L):
            dev = max(dev, abs(quantity(t, x)))
    if dev > 1e-6:
        raise InvariantError(
            f"{label} boundary values reach {dev:.3e} > 1e-6; the series "
            "condition holds but the boundary data do not vanish"
        )


def dirichlet_solution(problem, lam, a, N=60):
    """u = a exp_g(lam c^2; 0, t) sin_h(sqrt(-lam); 0, x) with u(t,0)=u(t,L)=0.

    Gate: the sine series condition at (lam, L).  The boundary values are
    re-verified directly (within 1e-6) after construction.
    """
    value, tail, ok = check_sin_condition(problem.h, lam, problem.L, N)
    if not ok:
        raise GateError(
            f"sine series condition fails at L={problem.L}: partial sum "
            f"{value!r} exceeds certified tail {tail:.3e} + 1e-9"
        )
    # a sin_h = (a / 2i) exp_h(sqrt(lam)) - (a / 2i) exp_h(-sqrt(lam))
    sol = HeatSolution(problem, [(lam, -0.5j * a, 0.5j * a)])
    _boundary_verify(sol, problem, sol, "Dirichlet")
    return sol


def neumann_solution(problem, lam, b, N=60):
    """u = b exp_g(lam c^2; 0, t) cos_h(sqrt(-lam); 0, x) with vanishing
    boundary h-derivatives.

    Gate: the cosine series condition at (lam, L).  Since the h-derivative of
    cos_h is -sqrt(-lam) sin_h, the flux vanishes at L only when sin_h(L) = 0
    as well; that is re-verified directly and a failure is raised rather than
    returning a solution with nonzero flux.
    """
    value, tail, ok = check_cos_condition(problem.h, lam, problem.L, N)
    if not ok:
        raise GateError(
            f"cosine series condition fails at L={problem.L}: partial sum "
            f"{value!r} is not 1 within certified tail {tail:.3e} + 1e-9"
        )
    half = 0.5 * b
    sol = HeatSolution(problem, [(lam, half, half)])
    _boundary_verify(sol, problem, sol.dhx_rule, "Neumann flux")
    return sol
