"""Explicit Lagrange interpolants on the selected vertex set.

For each selected basis the product of offset forms over its prefix
complement already vanishes at most other vertices; the survivors are cut
down by one corrective linear factor built from the next completion element
expanded in the basis.  Every step is re-verified: the survivor set is
computed both by evaluation and by its combinatorial characterization, and
the final interpolants are checked against every vertex and for membership
in the external space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Mapping, Sequence

from .arrangement import Vertex, vertex_set
from .errors import InternalConsistencyError, ValidationError
from .linalg import solve
from .matroid import Assignment, ExternalFamily, y_prefix_length
from .polynomials import Poly
from .pspaces import PSpaceChecker

if TYPE_CHECKING:
    from .groundset import Configuration

IndexSet = frozenset[int]


@dataclass(frozen=True)
class LagrangeDatum:
    """One interpolant and the intermediate data that certifies it."""

    basis: IndexSet
    prefix_support: IndexSet  # user columns plus the basis's prefix
    q_poly: Poly  # product of offset forms over prefix_support minus basis
    survivors: tuple[IndexSet, ...]  # bases where q_poly does not vanish
    strict_shrinkers: IndexSet  # members of the user part whose removal drops the value
    coefficients: dict[int, Fraction]  # expansion of the corrective element in the basis
    correction: Poly  # linear factor killing the extra survivors
    poly: Poly  # q_poly times correction


def _vertex_lookup(
    config: "Configuration", family: ExternalFamily, vertices
) -> dict[IndexSet, Vertex]:
    if vertices is None:
        vertices = vertex_set(config, family.bases)
    return {v.basis: v for v in vertices}


def survivor_bases(
    config: "Configuration",
    assignment: Assignment,
    family: ExternalFamily,
    basis: IndexSet,
    vertices: Sequence[Vertex] | Mapping[IndexSet, Vertex] | None = None,
) -> tuple[IndexSet, ...]:
    """Family members whose vertex the prefix product misses.

    Computed twice: directly, by evaluating the product at every vertex, and
    combinatorially, by the four conditions that characterize a survivor
    (user part contained with equal value, prefix part preserved, and the gap
    filled by the next completion elements).  The two answers must agree.
    """
    if not assignment.solid:
        raise ValidationError("survivor analysis requires a solid assignment")
    n = config.dim
    x_set = frozenset(config.x_indices)
    lookup = (
        dict(vertices)
        if isinstance(vertices, Mapping)
        else _vertex_lookup(config, family, vertices)
    )
    ipart = basis & x_set
    jpart = basis - ipart
    m = y_prefix_length(ipart, assignment, n)
    support = (x_set | config.y_prefix(m)) - basis
    q_poly = config.q_product(support)

    by_evaluation = {
        candidate
        for candidate in family.bases
        if q_poly.evaluate(lookup[candidate].point) != 0
    }

    k_value = assignment.value(ipart)
    by_conditions = set()
    for candidate in family.bases:
        cand_i = candidate & x_set
        if not cand_i <= ipart:
            continue
        if candidate & config.y_prefix(m) != jpart:
            continue
        if assignment.value(cand_i) != k_value:
            continue
        m_cand = y_prefix_length(cand_i, assignment, n)
        gap = config.y_prefix(m_cand) - config.y_prefix(m)
        if (candidate - basis) - x_set != gap:
            continue
        by_conditions.add(candidate)

    if by_evaluation != by_conditions:
        raise InternalConsistencyError(
            f"survivor mismatch for basis {sorted(basis)}: evaluation gives "
            f"{sorted(map(sorted, by_evaluation))}, the four conditions give "
            f"{sorted(map(sorted, by_conditions))}"
        )
    return tuple(sorted(by_evaluation, key=lambda s: tuple(sorted(s))))


def build_lagrange(
    config: "Configuration",
    assignment: Assignment,
    family: ExternalFamily,
    basis: IndexSet,
    vertices: Sequence[Vertex] | Mapping[IndexSet, Vertex] | None = None,
) -> LagrangeDatum:
    """Construct the interpolant of one selected basis.

    When the prefix product survives only at its own vertex no correction is
    needed and the linear factor is 1.  Otherwise the next completion element
    past the prefix is expanded in the basis, and the correction subtracts
    the offset forms of the prefix part and of the strict shrinkers (members
    whose removal lowers the value), weighted by those coordinates; all other
    survivors lie on the zero sets of the subtracted forms or of the next
    element itself.
    """
    if not assignment.solid:
        raise ValidationError("the interpolant construction requires a solid assignment")
    n = config.dim
    x_set = frozenset(config.x_indices)
    lookup = (
        dict(vertices)
        if isinstance(vertices, Mapping)
        else _vertex_lookup(config, family, vertices)
    )
    basis = frozenset(basis)
    ipart = basis & x_set
    jpart = basis - ipart
    m = y_prefix_length(ipart, assignment, n)
    support = (x_set | config.y_prefix(m)) - basis
    q_poly = config.q_product(support)
    survivors = survivor_bases(config, assignment, family, basis, lookup)

    k_value = assignment.value(ipart)
    shrinkers = frozenset(
        x for x in ipart if assignment.value(ipart - {x}) < k_value
    )

    if survivors == (basis,):
        correction = Poly.constant(n, 1)
        coefficients: dict[int, Fraction] = {}
    else:
        if m + 1 > config.y_count:
            raise ValidationError(
                "completion sequence too short for the corrective element: "
                f"need position {m + 1}, have {config.y_count}"
            )
        next_y = config.y_global(m + 1)
        ordered = sorted(basis)
        columns = [[config.vectors[b][row] for b in ordered] for row in range(n)]
        coords = solve(columns, config.vectors[next_y])
        coefficients = dict(zip(ordered, coords))
        correction = config.q_form(next_y)
        for x in sorted(shrinkers | jpart):
            correction = correction - coefficients[x] * config.q_form(x)

    poly = q_poly * correction
    own_value = poly.evaluate(lookup[basis].point)
    if own_value == 0:
        raise InternalConsistencyError(
            f"interpolant of basis {sorted(basis)} vanishes at its own vertex"
        )
    return LagrangeDatum(
        basis=basis,
        prefix_support=frozenset(x_set | config.y_prefix(m)),
        q_poly=q_poly,
        survivors=survivors,
        strict_shrinkers=shrinkers,
        coefficients=coefficients,
        correction=correction,
        poly=poly,
    )


def lagrange_family(
    config: "Configuration",
    assignment: Assignment,
    family: ExternalFamily,
    vertices: Sequence[Vertex] | Mapping[IndexSet, Vertex] | None = None,
) -> tuple[LagrangeDatum, ...]:
    lookup = (
        dict(vertices)
        if isinstance(vertices, Mapping)
        else _vertex_lookup(config, family, vertices)
    )
    return tuple(
        build_lagrange(config, assignment, family, basis, lookup)
        for basis in family.bases
    )


def evaluation_matrix(
    data: Sequence[LagrangeDatum], vertices: Mapping[IndexSet, Vertex]
) -> tuple[tuple[Fraction, ...], ...]:
    """Rows: interpolants; columns: vertices, in family order."""
    order = [datum.basis for datum in data]
    return tuple(
        tuple(datum.poly.evaluate(vertices[b].point) for b in order) for datum in data
    )


def verify_lagrange(
    config: "Configuration",
    assignment: Assignment,
    data: Sequence[LagrangeDatum],
    vertices: Sequence[Vertex] | Mapping[IndexSet, Vertex],
    checker: PSpaceChecker | None = None,
):
    """Full verification of an interpolant family.

    Checks that the evaluation matrix is diagonal with nonzero diagonal, that
    each offset form subtracted in a correction vanishes at every survivor
    vertex, and that every interpolant lies in the external space.  Returns
    None on success or a witness tuple.
    """
    lookup = dict(vertices) if isinstance(vertices, Mapping) else {
        v.basis: v for v in vertices
    }
    if checker is None:
        checker = PSpaceChecker(config.x_vectors, config.dim, assignment)
    for datum in data:
        for other, vert in lookup.items():
            value = datum.poly.evaluate(vert.point)
            if other == datum.basis:
                if value == 0:
                    return ("zero diagonal", tuple(sorted(datum.basis)))
            elif value != 0:
                return (
                    "off-diagonal",
                    tuple(sorted(datum.basis)),
                    tuple(sorted(other)),
                    value,
                )
        jpart = datum.basis - frozenset(config.x_indices)
        for x in sorted(datum.strict_shrinkers | jpart):
            form = config.q_form(x)
            for survivor in datum.survivors:
                if form.evaluate(lookup[survivor].point) != 0:
                    return ("survivor form", x, tuple(sorted(survivor)))
        if not checker.contains(datum.poly):
            return ("not in the external space", tuple(sorted(datum.basis)))
    return None
