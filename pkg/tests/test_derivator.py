"""Driver construction, queries, and serialization."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stieltjes_heat import Derivator, DomainError, SchemaError, identity, regular_points
from stieltjes_heat.derivators import Segment


def test_left_continuity_at_atom(jump_g):
    # value at the jump point comes from the left
    assert jump_g.eval(0.5) == 0.5
    assert jump_g.right_limit(0.5) == 1.5
    assert jump_g.jump(0.5) == 1.0
    assert jump_g.is_atom(0.5)
    assert not jump_g.is_atom(0.25)


def test_left_continuity_at_breakpoint_without_atom(plateau_h):
    # h is continuous at 1 (affine meets the flat level), atomic at 3/2
    assert plateau_h.eval(1.0) == 3.0
    assert plateau_h.jump(1.0) == 0.0
    assert plateau_h.eval(1.5) == 3.0
    assert plateau_h.right_limit(1.5) == 4.0


def test_eval_array_matches_scalar(plateau_h):
    ts = [0.0, 0.3, 1.0, 1.2, 1.5, 1.7, 2.5]
    out = plateau_h.eval_array(ts)
    assert list(out) == [plateau_h.eval(t) for t in ts]


def test_domain_is_enforced(jump_g):
    with pytest.raises(DomainError):
        jump_g.eval(-0.1)
    with pytest.raises(DomainError):
        jump_g.eval(1.6)
    with pytest.raises(DomainError):
        jump_g.right_limit(1.5)  # nothing beyond the upper edge


def test_atoms_in_is_half_open(jump_g, staircase):
    assert jump_g.atoms_in(0.0, 0.5) == ()
    assert jump_g.atoms_in(0.0, 0.50001) == ((0.5, 1.0),)
    assert jump_g.atoms_in(0.5, 1.5) == ((0.5, 1.0),)
    assert [t for t, _ in staircase.atoms_in(1.0, 3.0)] == [1.5, 2.5]


def test_measure_and_continuous_measure(plateau_h):
    # [0, 2): total rise 5 - 2 = 3, one atom of gap 1 inside
    assert plateau_h.measure(0.0, 2.0) == 3.0
    assert plateau_h.continuous_measure(0.0, 2.0) == 2.0
    # the flat run carries no measure
    assert plateau_h.measure(1.1, 1.4) == 0.0
    with pytest.raises(DomainError):
        plateau_h.measure(1.0, 0.5)


def test_constancy_run_and_t_star(plateau_h, mixed):
    assert plateau_h.constancy_run(1.2) == (1.0, 1.5)
    assert plateau_h.constancy_run(0.7) is None
    assert plateau_h.t_star(1.2) == 1.5
    assert plateau_h.t_star(0.7) == 0.7
    assert mixed.constancy_run(1.25) == (1.0, 1.5)


def test_atom_stepping(staircase):
    assert staircase.next_atom(0.0) == 0.5
    assert staircase.next_atom(0.5) == 1.5
    assert staircase.next_atom(3.5) is None
    assert staircase.prev_atom(1.0) == 0.5
    assert staircase.prev_atom(0.25) is None


def test_advance_to_value_inverts_eval(mixed):
    for y in (0.1, 0.9, 1.4, 1.9):
        s = mixed.advance_to_value(y)
        assert s is not None
        assert math.isclose(mixed.eval(s), y, abs_tol=1e-12)
    # values strictly inside the gap at 1/2 are never attained
    assert mixed.advance_to_value(1.1) is None
    # the flat level resolves to the right end of the rest
    assert mixed.advance_to_value(1.55) == 1.5


def test_translation_condition(staircase, flatstep, jump_g, ident):
    ok, dev = staircase.check_translation_condition(1.0)
    assert ok and dev <= 1e-12
    ok, dev = flatstep.check_translation_condition(1.0)
    assert ok and dev <= 1e-12
    ok, dev = jump_g.check_translation_condition(0.5)
    assert not ok and dev > 1e-3
    ok, _ = ident.check_translation_condition(1.0)
    assert ok


def test_json_round_trip(plateau_h, mixed):
    for d in (plateau_h, mixed):
        assert Derivator.from_json(d.to_json()) == d


def test_from_json_rejects_bad_shapes():
    with pytest.raises(SchemaError):
        Derivator.from_json("{not json")
    with pytest.raises(SchemaError):
        Derivator.from_json([1, 2])
    with pytest.raises(SchemaError):
        Derivator.from_json({"segments": []})
    with pytest.raises(SchemaError):
        Derivator.from_json({"segments": [{"from": 0, "to": 1, "kind": "weird"}]})
    with pytest.raises(SchemaError):
        Derivator.from_json(
            {"segments": [{"from": 0, "to": 1, "kind": "affine", "slope": 1,
                           "intercept": 0}],
             "domain": [0, 2]}
        )


def test_construction_rejects_invalid_invariants():
    # decreasing piece
    with pytest.raises(Exception):
        Derivator([Segment.affine(0.0, 1.0, -1.0, 0.0)])
    # undeclared boundary jump
    with pytest.raises(Exception):
        Derivator(
            [Segment.affine(0.0, 1.0, 1.0, 0.0), Segment.affine(1.0, 2.0, 1.0, 5.0)]
        )


def test_regular_points_avoid_atoms_and_rests(plateau_h):
    pts = regular_points(plateau_h, 0.0, 2.5, 25)
    assert len(pts) == 25
    for p in pts:
        assert not plateau_h.is_atom(p)
        assert plateau_h.constancy_run(p) is None
        assert 0.0 < p < 2.5
    assert pts == sorted(pts)


def test_regular_points_needs_affine_interior():
    rest = Derivator.from_pieces([("flat", 0.0, 1.0, 2.0)])
    with pytest.raises(DomainError):
        regular_points(rest, 0.0, 1.0, 3)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.0, max_value=4.0), st.floats(min_value=0.0, max_value=4.0))
def test_measure_additivity(staircase, a, b):
    a, b = min(a, b), max(a, b)
    mid = 0.5 * (a + b)
    total = staircase.measure(a, b)
    assert math.isclose(
        total, staircase.measure(a, mid) + staircase.measure(mid, b), abs_tol=1e-12
    )
    assert total >= -1e-15


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.0, max_value=2.0))
def test_right_limit_dominates_value(mixed, t):
    # nondecreasing plus left continuity: g(t) <= g(t+)
    if t < mixed.hi:
        assert mixed.right_limit(t) >= mixed.eval(t)
