"""Numeric Stieltjes derivatives.

Difference quotients are taken in measure units: sample points are chosen so
that g(s) - g(t) hits a prescribed step, which makes flat stretches invisible
and keeps the quotient well conditioned.  Steps are clipped so samples never
cross an atom; at atoms the derivative is the exact jump quotient.  A Neville
table extrapolates the quotients to step zero with a convergence check.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, replace

from .errors import DomainError, NonConvergenceError

_TINY = 1e-15


@dataclass(frozen=True)
class DiffConfig:
    step0: float = 0.05  # initial step, in g-units
    shrink: float = 0.5
    max_levels: int = 10
    min_levels: int = 3
    tol: float = 1e-8


DEFAULT = DiffConfig()
# second derivatives: wider steps (noise from the inner derivative divides by
# the outer step) and a looser target
DEFAULT_OUTER = DiffConfig(step0=0.25, tol=5e-7)
DEFAULT_INNER = DiffConfig(step0=0.05, tol=1e-10)


def _extrapolate(pairs, tol, min_levels):
    """Neville extrapolation to step 0 over (step, quotient) pairs."""
    xs = []
    prev_row = []
    prev_diag = None
    last_two = (None, None)
    for x, y in pairs:
        xs.append(x)
        row = [y]
        for j in range(1, len(xs)):
            ratio = xs[-1 - j] / xs[-1]
            row.append(row[j - 1] + (row[j - 1] - prev_row[j - 1]) / (ratio - 1.0))
        prev_row = row
        diag = row[-1]
        if prev_diag is not None:
            err = abs(diag - prev_diag)
            last_two = (prev_diag, diag)
            if len(xs) >= min_levels and err <= tol * (1.0 + abs(diag)):
                return diag
        prev_diag = diag
    raise NonConvergenceError(
        "difference quotients did not converge", estimates=last_two
    )


def _next_breakpoint(d, t):
    i = bisect.bisect_right(d._bk_list, t)
    return d._bk_list[i] if i < len(d._bk_list) else d.hi


def _limit_cfg(cfg):
    """Tighter settings for one-point limits: jump quotients divide by an
    exact gap, so the limit itself should carry near machine accuracy."""
    return replace(cfg, tol=min(cfg.tol * 1e-3, 1e-11), max_levels=max(cfg.max_levels, 12))


def right_limit_of(f, t, d, cfg=None):
    """f(t+) by extrapolating samples inside the segment right of t."""
    cfg = cfg or DEFAULT
    t = float(t)
    nb = _next_breakpoint(d, t)
    if not nb > t:
        raise DomainError(f"no room right of t={t} inside the domain")
    eps0 = 0.45 * (nb - t)

    def pairs():
        eps = eps0
        for _ in range(cfg.max_levels):
            yield eps, f(t + eps)
            eps *= cfg.shrink

    return _extrapolate(pairs(), cfg.tol, cfg.min_levels)


def _forward_sample(d, base, gb, eta):
    na = d.next_atom(base)
    cap = d.eval(na) if na is not None else d.eval(d.hi)
    room = cap - gb
    if room <= _TINY * (1.0 + abs(gb)):
        return None
    e = min(eta, room)
    s = d.advance_to_value(gb + e)
    if s is None or s <= base:
        return None
    actual = d.eval(s) - gb
    return (s, actual) if actual > 0.0 else None


def _backward_sample(d, base, gb, eta):
    pa = d.prev_atom(base)
    if pa is not None:
        floor = d.eval(pa) + d.jump(pa)  # open: that value is a right limit
        room = gb - floor
        e = min(eta, 0.95 * room)
    else:
        room = gb - d.eval(d.lo)
        e = min(eta, room)
    if room <= _TINY * (1.0 + abs(gb)) or e <= 0.0:
        return None
    s = d.advance_to_value(gb - e)
    if s is None or s >= base:
        return None
    actual = gb - d.eval(s)
    return (s, actual) if actual > 0.0 else None


def _room_forward(d, base, gb):
    na = d.next_atom(base)
    cap = d.eval(na) if na is not None else d.eval(d.hi)
    return cap - gb


def _room_backward(d, base, gb):
    pa = d.prev_atom(base)
    if pa is not None:
        return gb - (d.eval(pa) + d.jump(pa))
    return gb - d.eval(d.lo)


def _one_sided(f, base, d, cfg, side):
    gb = d.eval(base)
    fb = f(base)
    sampler = _forward_sample if side > 0 else _backward_sample
    probe = sampler(d, base, gb, cfg.step0)
    if probe is None:
        raise DomainError(
            f"no measure room on side {side:+d} of t={base} for a one-sided quotient"
        )
    room = (_room_forward if side > 0 else _room_backward)(d, base, gb)
    # start below the room: clipped levels all land on the same sample and
    # poison the extrapolation table
    eta0 = min(cfg.step0, 0.9 * room)

    def pairs():
        eta = eta0
        for _ in range(cfg.max_levels):
            got = sampler(d, base, gb, eta)
            if got is not None:
                s, actual = got
                yield actual, (f(s) - fb) / (actual * side)
            eta *= cfg.shrink

    return _extrapolate(pairs(), cfg.tol, cfg.min_levels)


def _central(f, t, d, cfg):
    gb = d.eval(t)
    eta0 = min(
        cfg.step0,
        0.9 * _room_forward(d, t, gb),
        0.9 * _room_backward(d, t, gb),
    )

    def pairs():
        eta = eta0
        for _ in range(cfg.max_levels):
            fwd = _forward_sample(d, t, gb, eta)
            bwd = _backward_sample(d, t, gb, eta)
            if fwd is not None and bwd is not None:
                sp, ap = fwd
                sm, am = bwd
                yield 0.5 * (ap + am), (f(sp) - f(sm)) / (ap + am)
            eta *= cfg.shrink

    return _extrapolate(pairs(), cfg.tol, cfg.min_levels)


def gderiv(f, t, d, cfg=None):
    """Stieltjes derivative of f at t with respect to the derivator d.

    Atoms use the exact jump quotient (f(t+) extrapolated, gap exact);
    constancy points defer to the right end of their run; regular points use
    two-sided quotients, falling back to one side when the other has no
    measure room.
    """
    cfg = cfg or DEFAULT
    t = float(t)
    d._check_domain(t)
    if d.is_atom(t):
        fplus = right_limit_of(f, t, d, _limit_cfg(cfg))
        return (fplus - f(t)) / d.jump(t)
    run = d.constancy_run(t)
    if run is not None:
        b = run[1]
        if d.is_atom(b):
            fplus = right_limit_of(f, b, d, _limit_cfg(cfg))
            return (fplus - f(b)) / d.jump(b)
        if b >= d.hi:
            raise DomainError(
                f"constancy run ending at the domain edge t={b} has no derivative data"
            )
        return _one_sided(f, b, d, cfg, +1)
    gb = d.eval(t)
    has_fwd = _forward_sample(d, t, gb, cfg.step0) is not None
    has_bwd = _backward_sample(d, t, gb, cfg.step0) is not None
    if has_fwd and has_bwd:
        return _central(f, t, d, cfg)
    if has_fwd:
        return _one_sided(f, t, d, cfg, +1)
    if has_bwd:
        return _one_sided(f, t, d, cfg, -1)
    raise DomainError(f"no measure room around t={t} for a difference quotient")


def gderiv2(f, t, d, cfg=None, inner_cfg=None):
    """Second Stieltjes derivative: the derivative machinery applied to
    s -> gderiv(f, s).  At atoms this is the exact jump quotient of the
    first-derivative function."""
    cfg = cfg or DEFAULT_OUTER
    inner = inner_cfg or DEFAULT_INNER

    def D(s):
        return gderiv(f, s, d, inner)

    return gderiv(D, t, d, cfg)


def heat_residual(u, t, x, g, h, c, cfg=None, cfg2=None, inner_cfg=None):
    """Pointwise residual d_g u - c^2 d_h^2 u from raw difference quotients."""
    du = gderiv(lambda s: u(s, x), t, g, cfg)
    d2 = gderiv2(lambda y: u(t, y), x, h, cfg2, inner_cfg)
    return du - c * c * d2


def make_config(**kw):
    """Tweaked copy of the default configuration."""
    return replace(DEFAULT, **kw)
