"""Shared fixtures: the small reference configurations used across the suite."""

from fractions import Fraction

import pytest

from zonotopal import build_configuration, validate_assignment

# Two unit axes in the plane with depth-2 value on the full flat.
PLANE_AXES = [(1, 0), (0, 1)]
PLANE_AXES_VALUES = [((), 1), ((0,), 1), ((1,), 1), ((0, 1), 2)]

# Three columns with a repeated direction; values from the worked Hilbert table.
REPEATED = [(1, 0), (0, 1), (0, 1)]
REPEATED_VALUES = [((), 1), ((0,), 1), ((1,), 2), ((0, 1), 2)]

# Four pairwise-independent directions with explicit offsets (0, 0, 1, 5).
FOUR_DIRECTIONS = [(0, 1), (1, 0), (1, -1), (1, 1)]
FOUR_OFFSETS = [0, 0, 1, 5]


@pytest.fixture(scope="session")
def plane_axes_assignment():
    return validate_assignment(PLANE_AXES, PLANE_AXES_VALUES)


@pytest.fixture(scope="session")
def plane_axes_config(plane_axes_assignment):
    return build_configuration(2, PLANE_AXES, assignment=plane_axes_assignment, seed=0)


@pytest.fixture(scope="session")
def repeated_assignment():
    return validate_assignment(REPEATED, REPEATED_VALUES)


@pytest.fixture(scope="session")
def repeated_config(repeated_assignment):
    return build_configuration(2, REPEATED, assignment=repeated_assignment, seed=0)


@pytest.fixture(scope="session")
def four_directions_config():
    return build_configuration(
        2, FOUR_DIRECTIONS, y_columns=[], offsets=FOUR_OFFSETS
    )


def frac(value) -> Fraction:
    return Fraction(value)
