import random
from fractions import Fraction

import pytest

from zonotopal import (
    Assignment,
    Poly,
    annihilation_check,
    apply_diff,
    bases,
    build_configuration,
    coherence_check,
    d_space,
    duality_gram,
    external_bases,
    homogeneous_basis,
    ideal_generators,
    kernel_dimension,
    least_space,
    p_space,
    validate_assignment,
    vertex_set,
)
from zonotopal.errors import ValidationError
from zonotopal.linalg import rank
from zonotopal.matroid import ExternalFamily, canonical_subsets
from zonotopal.pspaces import space_from_spanning

from conftest import PLANE_AXES, REPEATED


def t(i, n=2):
    return Poly.variable(n, i)


def test_least_space_single_point():
    space = least_space([(3, 4)], 2)
    assert space.dim == 1
    assert space.basis == (Poly.constant(2, 1),)


def test_least_space_two_points_on_a_line():
    space = least_space([(0, 0), (1, 0)], 2)
    assert space.dim == 2
    assert set(space.basis) == {Poly.constant(2, 1), t(0)}


def test_least_space_duplicate_points_rejected():
    with pytest.raises(ValidationError, match="duplicate"):
        least_space([(1, 2), (1, 2)], 2)


def test_least_space_of_central_vertices(four_directions_config):
    # the least space of the arrangement vertices of the four directions
    cfg = four_directions_config
    points = [v.point for v in vertex_set(cfg, bases(cfg.vectors, 2))]
    space = least_space(points, 2)
    assert space.dim == 6
    assert space.hilbert == {0: 1, 1: 2, 2: 3}


def test_least_space_interpolation_law():
    rng = random.Random(20260810)
    for trial in range(25):
        n = rng.randrange(1, 4)
        count = rng.randrange(1, 9)
        points = set()
        while len(points) < count:
            points.add(
                tuple(
                    Fraction(rng.randrange(-6, 7), rng.randrange(1, 4))
                    for _ in range(n)
                )
            )
        pts = sorted(points)
        space = least_space(pts, n)
        assert space.dim == count
        evaluation = [[p.evaluate(pt) for p in space.basis] for pt in pts]
        assert rank(evaluation) == count


def test_least_space_closed_under_differentiation():
    rng = random.Random(7)
    for trial in range(5):
        pts = {(rng.randrange(-4, 5), rng.randrange(-4, 5)) for _ in range(5)}
        space = least_space(sorted(pts), 2)
        cap = max(p.degree for p in space.basis)
        from zonotopal.polynomials import coefficient_vector, monomials_upto

        monos = monomials_upto(2, cap)
        rows = [coefficient_vector(p, monos) for p in space.basis]
        for p in space.basis:
            for i in range(2):
                derivative = apply_diff(t(i), p)
                augmented = rows + [coefficient_vector(derivative, monos)]
                assert rank(augmented) == len(rows)


def test_d_space_plane_axes(plane_axes_config, plane_axes_assignment):
    space = d_space(plane_axes_config, plane_axes_assignment)
    assert space.dim == 8


def test_d_space_repeated_matches_p_table(repeated_config, repeated_assignment):
    space = d_space(repeated_config, repeated_assignment)
    assert space.dim == 13
    assert space.hilbert == p_space(REPEATED, 2, repeated_assignment).hilbert


def test_d_space_constant_zero():
    a = Assignment.constant(PLANE_AXES, 0)
    cfg = build_configuration(2, PLANE_AXES, assignment=a, seed=5)
    assert d_space(cfg, a).dim == 4  # one per independent set


def test_ideal_generators_single_basis(plane_axes_config, plane_axes_assignment):
    only = frozenset({0, 1})
    family = ExternalFamily((only,), ((only, (only,)),))
    gens = ideal_generators(plane_axes_config, family)
    assert gens.index_sets == (frozenset({0}), frozenset({1}))


def test_ideal_generators_central_four(four_directions_config):
    cfg = four_directions_config
    central = bases(cfg.vectors, 2)
    family = ExternalFamily(canonical_subsets(central), ())
    gens = ideal_generators(cfg, family)
    # hitting all six pairs of four pairwise-independent directions needs
    # any three of the four elements
    assert all(len(z) == 3 for z in gens.index_sets)
    assert len(gens.index_sets) == 4


def test_ideal_generators_cap_too_small(four_directions_config):
    cfg = four_directions_config
    central = bases(cfg.vectors, 2)
    family = ExternalFamily(canonical_subsets(central), ())
    with pytest.raises(ValidationError, match="cap too small"):
        ideal_generators(cfg, family, size_cap=2)


def test_annihilation_plane_axes(plane_axes_config, plane_axes_assignment):
    cfg, a = plane_axes_config, plane_axes_assignment
    family = external_bases(cfg, a)
    space = d_space(cfg, a, family)
    gens = ideal_generators(cfg, family)
    assert annihilation_check(space, gens) is None


def test_annihilation_detects_junk(plane_axes_config, plane_axes_assignment):
    cfg, a = plane_axes_config, plane_axes_assignment
    family = external_bases(cfg, a)
    space = d_space(cfg, a, family)
    gens = ideal_generators(cfg, family)
    junk = space_from_spanning(
        list(space.basis) + [Poly.monomial(2, (6, 6))], homogeneous=True
    )
    witness = annihilation_check(junk, gens)
    assert witness is not None
    assert witness[1] == Poly.monomial(2, (6, 6))


def test_coherence_plane_axes(plane_axes_config, plane_axes_assignment):
    report = coherence_check(plane_axes_config, plane_axes_assignment)
    assert report.count == report.enumerated == report.vertex_count == 8
    assert report.least_dim == 8
    assert report.kernel_dim == 8
    assert report.coherent and report.certified


def test_coherence_repeated(repeated_config, repeated_assignment):
    report = coherence_check(repeated_config, repeated_assignment)
    assert report.count == report.least_dim == 13
    assert report.kernel_dim == 13 and report.coherent


def test_non_solid_kernel_can_exceed_count():
    # k jumps down on the full flat: not solid, and the kernel is strictly
    # larger than the family because the selection misses low-degree bases
    a = validate_assignment(PLANE_AXES, [((), 2), ((0,), 0), ((1,), 0), ((0, 1), 0)])
    assert not a.solid
    cfg = build_configuration(2, PLANE_AXES, assignment=a, y_count=4, seed=0)
    family = external_bases(cfg, a)
    report = coherence_check(cfg, a, family, kernel=True)
    assert not report.solid
    assert report.least_dim == report.count
    assert report.kernel_dim > report.count
    assert report.coherent is False
    # the least space still sits inside the kernel
    space = d_space(cfg, a, family)
    gens = ideal_generators(cfg, family)
    assert annihilation_check(space, gens) is None


def test_kernel_dimension_central(four_directions_config):
    cfg = four_directions_config
    central = bases(cfg.vectors, 2)
    family = ExternalFamily(canonical_subsets(central), ())
    gens = ideal_generators(cfg, family)
    assert kernel_dimension(gens, 2, cfg.ground_count - 2) == 6


def test_duality_gram_trivial():
    one = Poly.constant(2, 1)
    gram, nonsingular = duality_gram([one], [one])
    assert gram == ((Fraction(1),),)
    assert nonsingular


def test_duality_gram_repeated(repeated_config, repeated_assignment):
    cfg, a = repeated_config, repeated_assignment
    family = external_bases(cfg, a)
    p_basis = homogeneous_basis(cfg, a, family)
    dsp = d_space(cfg, a, family)
    gram, nonsingular = duality_gram(p_basis, dsp.basis)
    assert len(gram) == 13 and nonsingular


def test_duality_gram_dimension_mismatch():
    a = validate_assignment(PLANE_AXES, [((), 0), ((0,), 1), ((1,), 1), ((0, 1), 4)])
    cfg = build_configuration(2, PLANE_AXES, assignment=a, seed=0)
    family = external_bases(cfg, a)
    space = p_space(PLANE_AXES, 2, a)
    dsp = d_space(cfg, a, family)
    assert space.dim == 15 and dsp.dim == 6
    with pytest.raises(ValidationError, match="dimension mismatch"):
        duality_gram(space.basis, dsp.basis)
