from fractions import Fraction

import pytest

from zonotopal import (
    Assignment,
    arrangement_vertices,
    bases,
    build_configuration,
    external_bases,
    vertex_of,
    vertex_set,
)
from zonotopal.errors import ValidationError
from zonotopal.groundset import Configuration
from zonotopal.linalg import vector

from conftest import PLANE_AXES


def test_zero_offsets_give_origin():
    cfg = Configuration(2, tuple(vector(v) for v in PLANE_AXES), (), (0, 0))
    vert = vertex_of(cfg, {0, 1})
    assert vert.point == (Fraction(0), Fraction(0))


def test_four_directions_vertices(four_directions_config):
    cfg = four_directions_config
    expected = {
        frozenset({0, 1}): (0, 0),
        frozenset({0, 2}): (1, 0),
        frozenset({0, 3}): (5, 0),
        frozenset({1, 2}): (0, -1),
        frozenset({1, 3}): (0, 5),
        frozenset({2, 3}): (3, 2),
    }
    for basis, point in expected.items():
        assert vertex_of(cfg, basis).point == vector(point)


def test_vertex_zero_pattern(four_directions_config):
    # an affine form vanishes at a vertex exactly when its element is in the basis
    cfg = four_directions_config
    for vert in arrangement_vertices(cfg):
        for z in range(cfg.ground_count):
            value = cfg.q_form(z).evaluate(vert.point)
            assert (value == 0) == (z in vert.basis)


def test_selected_vertices_plane_axes(plane_axes_config, plane_axes_assignment):
    cfg, a = plane_axes_config, plane_axes_assignment
    family = external_bases(cfg, a)
    selected = vertex_set(cfg, family.bases)
    assert len(selected) == 8
    everything = arrangement_vertices(cfg)
    assert len(everything) == 10
    excluded = {v.basis for v in everything} - {v.basis for v in selected}
    # exactly the two bases pairing a user column with the last completion element
    assert excluded == {frozenset({0, 4}), frozenset({1, 4})}


def test_constant_zero_single_basis_vertices():
    a = Assignment.constant(PLANE_AXES, 0)
    cfg = build_configuration(2, PLANE_AXES, assignment=a, seed=4)
    family = external_bases(cfg, a)
    assert len(vertex_set(cfg, family.bases)) == 4


def test_central_family_vertices(four_directions_config):
    cfg = four_directions_config
    central = bases(cfg.vectors, 2)
    assert len(vertex_set(cfg, central)) == 6


def test_vertex_collision_detected():
    cfg = Configuration(2, tuple(vector(v) for v in PLANE_AXES), (vector((1, 1)),), (0, 0, 0))
    with pytest.raises(ValidationError, match="genericity"):
        vertex_set(cfg, bases(cfg.vectors, 2))
