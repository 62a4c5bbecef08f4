"""Shared fixtures: the derivators every suite exercises.

`jump_g`/`plateau_h` are the canonical worked-example drivers (one interior
atom each, `plateau_h` also has a flat stretch).  `staircase` and `flatstep`
satisfy the translation condition exactly; `mixed` stacks every segment kind.
"""

import pytest

from stieltjes_heat import Derivator, HeatProblem, identity


@pytest.fixture(scope="session")
def jump_g():
    # g(t) = t below 1/2, t + 1 above: unit atom at 1/2
    return Derivator.from_pieces(
        [("affine", 0.0, 0.5, 1.0, 0.0), ("affine", 0.5, 1.5, 1.0, 1.0)]
    )


@pytest.fixture(scope="session")
def plateau_h():
    # h(x) = x + 2, then flat at 3 on (1, 3/2], then 2x + 1: atom at 3/2
    return Derivator.from_pieces(
        [
            ("affine", 0.0, 1.0, 1.0, 2.0),
            ("flat", 1.0, 1.5, 3.0),
            ("affine", 1.5, 2.5, 2.0, 1.0),
        ]
    )


@pytest.fixture(scope="session")
def ident():
    return identity(0.0, 3.0)


@pytest.fixture(scope="session")
def staircase():
    # slope-1 everywhere, gap 1/2 at each half-integer: every window
    # [x, x+1) holds exactly one atom, so g(t+1) - g(t) is constant
    return Derivator.from_pieces(
        [
            ("affine", 0.0, 0.5, 1.0, 0.0),
            ("affine", 0.5, 1.5, 1.0, 0.5),
            ("affine", 1.5, 2.5, 1.0, 1.0),
            ("affine", 2.5, 3.5, 1.0, 1.5),
            ("affine", 3.5, 4.0, 1.0, 2.0),
        ]
    )


@pytest.fixture(scope="session")
def flatstep():
    # period-1 pattern rise / jump / rise / rest with the atom at k + 0.3;
    # mu_g([x, x+1)) = 0.8 for every x
    pieces = []
    for k in range(3):
        pieces.append(("affine", float(k), k + 0.3, 1.0, -0.2 * k))
        pieces.append(("affine", k + 0.3, k + 0.6, 1.0, -0.2 * k + 0.2))
        pieces.append(("flat", k + 0.6, k + 1.0, 0.8 * k + 0.8))
    return Derivator.from_pieces(pieces)


@pytest.fixture(scope="session")
def mixed():
    # slopes 2, 1/2, a rest, slope 1; atom of gap 0.3 at 1/2
    return Derivator.from_pieces(
        [
            ("affine", 0.0, 0.5, 2.0, 0.0),
            ("affine", 0.5, 1.0, 0.5, 1.05),
            ("flat", 1.0, 1.5, 1.55),
            ("affine", 1.5, 2.0, 1.0, 0.05),
        ]
    )


@pytest.fixture(scope="session")
def prob_jumpy(jump_g, plateau_h):
    """The worked example: c^2 = 1/4 on [0,1] x [0,2]."""
    return HeatProblem(jump_g, plateau_h, 0.5, 1.0, 2.0)


@pytest.fixture(scope="session")
def prob_classical():
    return HeatProblem(identity(0.0, 2.0), identity(0.0, 2.0), 1.0, 1.0, 1.0)
