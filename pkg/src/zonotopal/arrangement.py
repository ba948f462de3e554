"""Vertices of the hyperplane arrangement of the ground configuration.

Each basis determines the unique common zero of its affine forms; with
generic offsets distinct bases give distinct points, and an affine form
vanishes at a vertex exactly when its element belongs to the basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

from . import matroid
from .errors import InternalConsistencyError, ValidationError
from .linalg import NoSolutionError, UnderdeterminedError, Vector, solve

if TYPE_CHECKING:
    from .groundset import Configuration

IndexSet = frozenset[int]


@dataclass(frozen=True)
class Vertex:
    point: Vector
    basis: IndexSet


def vertex_of(config: "Configuration", basis: Iterable[int]) -> Vertex:
    """Solve the n-by-n affine system of a basis for its vertex."""
    members = tuple(sorted(basis))
    rows = [config.vectors[i] for i in members]
    rhs = [config.offsets[i] for i in members]
    try:
        point = solve(rows, rhs)
    except (NoSolutionError, UnderdeterminedError) as exc:
        raise InternalConsistencyError(
            f"singular system for claimed basis {members}"
        ) from exc
    return Vertex(point, frozenset(members))


def vertex_set(
    config: "Configuration", bases: Sequence[Iterable[int]]
) -> tuple[Vertex, ...]:
    """Vertices of the given bases; rejects coincidences as non-generic."""
    out = []
    seen: dict[Vector, IndexSet] = {}
    for basis in bases:
        vert = vertex_of(config, basis)
        if vert.point in seen:
            raise ValidationError(
                f"genericity violated: bases {sorted(seen[vert.point])} and "
                f"{sorted(vert.basis)} share the vertex {vert.point}"
            )
        seen[vert.point] = vert.basis
        out.append(vert)
    return tuple(out)


def arrangement_vertices(config: "Configuration") -> tuple[Vertex, ...]:
    """All vertices of the full arrangement, one per basis of the ground set."""
    return vertex_set(config, matroid.bases(config.vectors, config.dim))
