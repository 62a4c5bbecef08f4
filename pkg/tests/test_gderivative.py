"""Derivatives with respect to a driver: quotients, atoms, rests."""

import math

import pytest

from stieltjes_heat import (
    Derivator,
    DiffConfig,
    DomainError,
    gderiv,
    gderiv2,
    gexp,
    heat_residual,
    identity,
    regular_points,
)


def test_matches_closed_form_on_affine_pieces(jump_g):
    # on a slope-1 affine piece d/dg f = f'
    f = lambda t: math.sin(2.0 * t)
    for t in (0.1, 0.25, 0.4, 0.7, 1.1, 1.4):
        assert abs(gderiv(f, t, jump_g) - 2.0 * math.cos(2.0 * t)) < 1e-8


def test_slope_scaling(mixed):
    # slope s rescales the quotient: d/dg f = f' / s
    f = lambda t: t * t
    assert gderiv(f, 0.2, mixed) == pytest.approx(2 * 0.2 / 2.0, abs=1e-8)
    assert gderiv(f, 0.8, mixed) == pytest.approx(2 * 0.8 / 0.5, abs=1e-8)
    assert gderiv(f, 1.8, mixed) == pytest.approx(2 * 1.8 / 1.0, abs=1e-8)


def test_atom_uses_exact_jump_quotient(jump_g):
    f = lambda t: t * t + 3.0
    # at an atom the derivative is (f(t+) - f(t)) / gap, no limits involved
    want = (f(0.5) - f(0.5)) / 1.0  # f continuous: zero
    assert gderiv(f, 0.5, jump_g) == pytest.approx(want, abs=1e-12)

    g2 = Derivator.from_pieces(
        [("affine", 0.0, 1.0, 1.0, 0.0), ("affine", 1.0, 2.0, 1.0, 2.0)]
    )
    step = lambda t: 5.0 if t > 1.0 else 1.0
    assert gderiv(step, 1.0, g2) == pytest.approx((5.0 - 1.0) / 2.0)


def test_constancy_run_differentiates_at_right_end(plateau_h):
    # inside (1, 1.5] the driver rests; the quotient is taken at t* = 1.5,
    # so any f that is flat there differentiates to the value at the exit
    f = lambda t: gexp(plateau_h, 0.5, 0.0, t)
    v = gderiv(f, 1.2, plateau_h)
    w = gderiv(f, 1.45, plateau_h)
    assert v == pytest.approx(w, rel=1e-9)
    # the exit of the rest carries an atom, so the quotient is the exact
    # jump quotient at t* = 1.5: (f(1.5+) - f(1.5)) / gap
    from stieltjes_heat import gexp_right_limit

    want = (gexp_right_limit(plateau_h, 0.5, 0.0, 1.5) - f(1.5)) / 1.0
    assert v == pytest.approx(want, rel=1e-10)


def test_exponential_is_own_derivative(jump_g, mixed, flatstep):
    for d in (jump_g, mixed, flatstep):
        lam = 0.8
        f = lambda t: gexp(d, lam, d.lo, t)
        for t in regular_points(d, d.lo, d.hi, 7):
            assert abs(gderiv(f, t, d) - lam * f(t)) < 1e-7 * (1 + abs(f(t)))


def test_near_edge_points_still_converge(jump_g, mixed):
    # quotient ladders must shrink into the available room near atoms and
    # segment edges instead of clipping; these points sit within 1% of one
    f = lambda t: math.cos(1.3 * t)
    for d, pts in ((jump_g, (0.004, 0.496, 0.504, 1.492)), (mixed, (0.496, 0.504))):
        for t in pts:
            got = gderiv(f, t, d)
            slope = next(
                s.slope for s in d.segments if s.kind == "affine" and s.lo <= t < s.hi
            )
            assert abs(got - (-1.3 * math.sin(1.3 * t)) / slope) < 1e-6


def test_second_derivative(plateau_h):
    f = lambda x: gexp(plateau_h, 0.3, 0.0, x)
    for x in regular_points(plateau_h, 0.0, 2.5, 5):
        got = gderiv2(f, x, plateau_h)
        assert abs(got - 0.09 * f(x)) < 1e-5 * (1 + abs(f(x)))


def test_identity_driver_reduces_to_ordinary_derivative():
    d = identity(0.0, 2.0)
    f = lambda t: math.exp(0.5 * t) * math.sin(t)
    fp = lambda t: math.exp(0.5 * t) * (0.5 * math.sin(t) + math.cos(t))
    for t in (0.2, 0.7, 1.3, 1.8):
        assert abs(gderiv(f, t, d) - fp(t)) < 1e-8


def test_domain_errors(jump_g):
    with pytest.raises(DomainError):
        gderiv(lambda t: t, -0.5, jump_g)
    with pytest.raises(DomainError):
        gderiv(lambda t: t, 2.0, jump_g)


def test_quotient_config_is_respected(jump_g):
    # a deliberately coarse ladder still converges on smooth data
    cfg = DiffConfig(step0=1e-2, tol=1e-9)
    f = lambda t: t**3
    assert gderiv(f, 0.25, jump_g, cfg=cfg) == pytest.approx(3 * 0.25**2, abs=1e-6)


def test_heat_residual_vanishes_on_true_solution(prob_jumpy):
    g, h, c = prob_jumpy.g, prob_jumpy.h, prob_jumpy.c
    lam = 0.6
    u = lambda t, x: gexp(g, lam * c * c, 0.0, t) * gexp(h, lam**0.5, 0.0, x)
    for t in regular_points(g, 0.0, 1.0, 4):
        for x in regular_points(h, 0.0, 2.0, 4):
            r = heat_residual(u, t, x, g, h, c)
            assert abs(r) < 1e-6 * (1 + abs(u(t, x)))
