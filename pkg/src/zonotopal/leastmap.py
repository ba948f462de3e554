"""The least map, the differential kernel space, and duality certificates.

The least space of a finite point set is spanned by the lowest-degree
homogeneous components of the exponentials with those frequencies.  Applied
to the selected vertex set it produces the kernel-side space; hitting-set
generators of the companion ideal then allow annihilation, coherence and
duality to be certified exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import TYPE_CHECKING, Sequence

from . import matroid
from .arrangement import vertex_set
from .errors import InternalConsistencyError, ValidationError
from .linalg import Matrix, RowReducer, Vector, rank, rref, vector
from .matroid import Assignment, ExternalFamily, count_external_bases, external_bases
from .polynomials import (
    Poly,
    apply_diff,
    coefficient_vector,
    monomials_upto,
    pairing,
)
from .pspaces import PolySpace, space_from_spanning

if TYPE_CHECKING:
    from .groundset import Configuration

IndexSet = frozenset[int]


def _power_row(point: Vector, monomials) -> list[Fraction]:
    powers = [[Fraction(1)] for _ in point]
    for var, column in enumerate(powers):
        top = max(mono[var] for mono in monomials)
        while len(column) <= top:
            column.append(column[-1] * point[var])
    return [
        math.prod((powers[var][exp] for var, exp in enumerate(mono)), start=Fraction(1))
        for mono in monomials
    ]


def least_space(points: Sequence[Sequence], n: int) -> PolySpace:
    """Homogeneous basis of the least space of a distinct point set.

    Each point contributes the coefficient row of its exponential over the
    monomials of degree at most d, scaled column-wise by the factorials (the
    scaling is diagonal and degree-preserving, so echelon structure and least
    terms are unaffected and the factorials are divided back out at the end).
    The rows are brought to reduced echelon form under the graded order and
    the least term of each row is extracted: the pivot entries make those
    least terms independent, and each is the least term of a genuine element
    of the exponential span because all lower-degree components vanish.

    The cut-off degree d starts at the smallest value with enough monomials
    and grows until the row rank equals the number of points; d = #points - 1
    always suffices, since polynomials of that degree interpolate freely on
    distinct points, and reaching it without full rank is an internal error.
    """
    pts = [vector(p) for p in points]
    if not pts:
        raise ValueError("least space of an empty point set")
    if any(len(p) != n for p in pts):
        raise ValueError("point dimension mismatch")
    if len(set(pts)) != len(pts):
        raise ValidationError("duplicate points in a least-space computation")
    count = len(pts)
    degree = 0
    while len(monomials_upto(n, degree)) < count:
        degree += 1
    while True:
        monos = monomials_upto(n, degree)
        rows = [_power_row(p, monos) for p in pts]
        reduced, pivots, rk = rref(rows)
        if rk == count:
            break
        if degree >= count - 1:
            raise InternalConsistencyError(
                "least-space rank assertion failed: truncated exponentials are dependent"
            )
        degree += 1
    basis = []
    for row in reduced[:rk]:
        least_degree = min(sum(m) for m, e in zip(monos, row) if e != 0)
        coeffs = {
            mono: entry / math.prod(math.factorial(e) for e in mono)
            for mono, entry in zip(monos, row)
            if entry != 0 and sum(mono) == least_degree
        }
        basis.append(Poly(n, coeffs))
    space = space_from_spanning(basis, homogeneous=True)
    if space.dim != count:
        raise InternalConsistencyError("least terms failed to be independent")
    return space


def d_space(
    config: "Configuration",
    assignment: Assignment,
    family: ExternalFamily | None = None,
) -> PolySpace:
    """Least space of the selected vertex set."""
    if family is None:
        family = external_bases(config, assignment)
    points = [v.point for v in vertex_set(config, family.bases)]
    return least_space(points, config.dim)


@dataclass(frozen=True)
class IdealGenerators:
    """Minimal hitting sets of a basis family with their form products.

    Every listed index set meets every basis of the family and no proper
    subset does; products over larger hitting sets are polynomial multiples
    of these, so annihilation by the listed products certifies annihilation
    by the whole ideal.
    """

    index_sets: tuple[IndexSet, ...]
    polys: tuple[Poly, ...]


def ideal_generators(
    config: "Configuration",
    family: ExternalFamily,
    size_cap: int | None = None,
) -> IdealGenerators:
    """Enumerate all inclusion-minimal hitting sets up to ``size_cap``."""
    ground = config.ground_count
    cap = ground if size_cap is None else min(size_cap, ground)
    basis_masks = [sum(1 << i for i in basis) for basis in family.bases]
    minimal_masks: list[int] = []
    minimal_sets: list[IndexSet] = []
    for size in range(1, cap + 1):
        for combo in combinations(range(ground), size):
            mask = sum(1 << i for i in combo)
            if any(prev & mask == prev for prev in minimal_masks):
                continue
            if all(mask & bm for bm in basis_masks):
                minimal_masks.append(mask)
                minimal_sets.append(frozenset(combo))
    if basis_masks and not minimal_sets:
        raise ValidationError(f"cap too small: no hitting set of size <= {cap}")
    ordered = matroid.canonical_subsets(minimal_sets)
    polys = tuple(config.p_product(z) for z in ordered)
    return IdealGenerators(ordered, polys)


def annihilation_check(space: PolySpace, generators: IdealGenerators):
    """Check that every generator kills every basis element under p(D).

    Returns None on success, else a witness ``(index_set, poly)`` naming the
    first generator and space element with a nonzero derivative.
    """
    for zset, zpoly in zip(generators.index_sets, generators.polys):
        for f in space.basis:
            if len(zset) > f.degree:
                continue
            if not apply_diff(zpoly, f).is_zero:
                return (zset, f)
    return None


def kernel_dimension(
    generators: IdealGenerators, n: int, top_degree: int
) -> int:
    """Dimension of the joint differential kernel of the generators.

    The ideal is homogeneous, so the kernel is graded; in each degree its
    dimension is the codimension of the degree slice of the ideal, because
    the apolarity pairing is perfect on homogeneous polynomials of one
    degree.  ``top_degree`` must bound the kernel's top degree.
    """
    total = 0
    for degree in range(top_degree + 1):
        monos = [m for m in monomials_upto(n, degree) if sum(m) == degree]
        reducer = RowReducer(len(monos))
        for zset, zpoly in zip(generators.index_sets, generators.polys):
            codegree = degree - len(zset)
            if codegree < 0:
                continue
            for mono in monomials_upto(n, codegree):
                if sum(mono) != codegree:
                    continue
                row = zpoly * Poly.monomial(n, mono)
                reducer.add(coefficient_vector(row, monos))
        total += len(monos) - reducer.rank
    return total


@dataclass(frozen=True)
class CoherenceReport:
    """Comparison of the kernel-side dimensions against the family size."""

    count: int  # closed-form family size
    enumerated: int  # enumerated family size
    vertex_count: int  # distinct vertices
    least_dim: int  # dimension of the least space of the vertices
    kernel_dim: int | None  # differential kernel dimension, when computed
    solid: bool
    lower_bound_ok: bool  # kernel dim >= family size (unconditional bound)
    coherent: bool | None  # kernel dim == family size, when computed

    @property
    def certified(self) -> bool:
        return bool(self.solid and self.least_dim == self.count)


_KERNEL_MONOMIAL_GATE = 220
_KERNEL_GENERATOR_GATE = 80


def coherence_check(
    config: "Configuration",
    assignment: Assignment,
    family: ExternalFamily | None = None,
    generators: IdealGenerators | None = None,
    kernel: bool | None = None,
) -> CoherenceReport:
    """Certify coherence of the selected family.

    Always compares the least-space dimension of the vertex set with the
    closed-form count.  The kernel dimension is computed directly when small
    enough (or on request): for a solid assignment it must equal the count,
    and a mismatch there is an internal error; without solidity the strict
    inequality is simply reported.
    """
    if family is None:
        family = external_bases(config, assignment)
    count = count_external_bases(config.x_vectors, config.dim, assignment)
    vertices = vertex_set(config, family.bases)
    least = least_space([v.point for v in vertices], config.dim)
    if generators is None:
        generators = ideal_generators(config, family)
    top = config.ground_count - config.dim
    if kernel is None:
        kernel = (
            len(monomials_upto(config.dim, top)) <= _KERNEL_MONOMIAL_GATE
            and len(generators.index_sets) <= _KERNEL_GENERATOR_GATE
        )
    kdim = kernel_dimension(generators, config.dim, top) if kernel else None
    coherent = None if kdim is None else kdim == len(family.bases)
    if kdim is not None and assignment.solid and not coherent:
        raise InternalConsistencyError(
            f"coherence failed for a solid assignment: kernel dim {kdim} != {len(family.bases)}"
        )
    return CoherenceReport(
        count=count,
        enumerated=len(family.bases),
        vertex_count=len(vertices),
        least_dim=least.dim,
        kernel_dim=kdim,
        solid=assignment.solid,
        lower_bound_ok=(kdim is None or kdim >= len(family.bases)),
        coherent=coherent,
    )


def duality_gram(
    p_basis: Sequence[Poly], d_basis: Sequence[Poly]
) -> tuple[Matrix, bool]:
    """Gram matrix of the apolarity pairing between two bases.

    Nonsingularity certifies that the pairing restricted to the two spaces is
    perfect.  Raises on a dimension mismatch, which is the correct outcome
    when the spaces genuinely differ in dimension.
    """
    if len(p_basis) != len(d_basis):
        raise ValidationError(
            f"dimension mismatch: {len(p_basis)} versus {len(d_basis)}"
        )
    gram = tuple(tuple(pairing(p, d) for d in d_basis) for p in p_basis)
    if not gram:
        return gram, True
    return gram, rank(gram) == len(p_basis)
