"""The explicit polynomial spaces: spans of products of linear forms.

The central space of a column multiset is spanned by products over its short
complements; the external space attached to an assignment adds a bounded-
degree factor per subset.  Both are graded, so dimensions and Hilbert tables
come from exact per-degree rank computations over the monomial basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

from . import matroid
from .errors import AssignmentError, InternalConsistencyError
from .linalg import RowReducer, Vector, vector
from .matroid import Assignment, ExternalFamily, y_prefix_length
from .polynomials import (
    Poly,
    coefficient_vector,
    forms_product,
    monomials_upto,
)

if TYPE_CHECKING:
    from .groundset import Configuration


@dataclass(frozen=True)
class PolySpace:
    """A finite-dimensional polynomial space given by a spanning list.

    ``basis`` is a maximal independent sublist of ``spanning``; ``hilbert``
    maps degree to dimension when every spanning element is homogeneous.
    """

    spanning: tuple[Poly, ...]
    basis: tuple[Poly, ...]
    dim: int
    hilbert: dict[int, int] | None
    homogeneous: bool


def space_from_spanning(polys: Iterable[Poly], homogeneous: bool = False) -> PolySpace:
    """Rank-select a basis from a spanning list, exactly.

    With ``homogeneous`` set, every element must be homogeneous; the rank is
    then computed degree by degree and the per-degree counts form the Hilbert
    table.
    """
    span = tuple(p for p in polys)
    nonzero = [p for p in span if not p.is_zero]
    if not nonzero:
        return PolySpace(span, (), 0, {} if homogeneous else None, homogeneous)
    nvars = nonzero[0].nvars
    if homogeneous:
        if any(not p.is_homogeneous for p in nonzero):
            raise ValueError("spanning list is not homogeneous")
        by_degree: dict[int, list[Poly]] = {}
        for p in nonzero:
            by_degree.setdefault(p.degree, []).append(p)
        basis: list[Poly] = []
        hilbert: dict[int, int] = {}
        for degree in sorted(by_degree):
            monos = [m for m in monomials_upto(nvars, degree) if sum(m) == degree]
            reducer = RowReducer(len(monos))
            picked = 0
            for p in by_degree[degree]:
                if reducer.add(coefficient_vector(p, monos)) is not None:
                    basis.append(p)
                    picked += 1
            hilbert[degree] = picked
        return PolySpace(span, tuple(basis), len(basis), hilbert, True)
    cap = max(p.degree for p in nonzero)
    monos = monomials_upto(nvars, cap)
    reducer = RowReducer(len(monos))
    basis = [p for p in nonzero if reducer.add(coefficient_vector(p, monos)) is not None]
    return PolySpace(span, tuple(basis), len(basis), None, False)


def central_hilbert(
    x_vectors: Sequence[Vector], n: int, position=None
) -> dict[int, int]:
    """Degree census of the greedy sets over all bases of the columns."""
    xs = tuple(vector(v) for v in x_vectors)
    if position is None:
        position = lambda i: i
    census: dict[int, int] = {}
    for basis in matroid.bases(xs, n):
        size = len(matroid.greedy_set(xs, basis, range(len(xs)), position))
        census[size] = census.get(size, 0) + 1
    return census


def central_basis(x_vectors: Sequence[Vector], n: int, position=None) -> PolySpace:
    """Homogeneous basis of the central space: one product per basis.

    Each basis contributes the product of linear forms over its greedy set.
    A rank-deficient column set has no bases; the central space is then zero
    dimensional and returned as such.
    """
    xs = tuple(vector(v) for v in x_vectors)
    if position is None:
        position = lambda i: i
    all_bases = matroid.bases(xs, n)
    polys = [
        forms_product(
            [xs[i] for i in sorted(matroid.greedy_set(xs, b, range(len(xs)), position))],
            n,
        )
        for b in all_bases
    ]
    space = space_from_spanning(polys, homogeneous=True)
    if space.dim != len(all_bases):
        raise InternalConsistencyError(
            "central basis is not independent; greedy construction violated"
        )
    return space


def _mask_value(assignment: Assignment, mask: int, n_cols: int) -> int:
    return assignment.value({i for i in range(n_cols) if mask >> i & 1})


def pk_generators(
    x_vectors: Sequence[Vector], n: int, assignment: Assignment
) -> list[Poly]:
    """Spanning set of the external space: complement products times monomials.

    For every subset Z of the columns the generators are the product of the
    forms outside Z multiplied by all monomials of degree at most the value
    at Z.  A subset is skipped when a strict superset absorbs it: Z is
    redundant whenever some Z' > Z has value(Z') >= value(Z) + #(Z' - Z),
    because the dropped factors can be re-absorbed into the degree budget.
    """
    xs = tuple(vector(v) for v in x_vectors)
    count = len(xs)
    if count > 16:
        raise ValueError("generator enumeration is limited to 16 columns")
    values = [_mask_value(assignment, mask, count) for mask in range(1 << count)]
    sizes = [bin(mask).count("1") for mask in range(1 << count)]
    redundant = [False] * (1 << count)
    for mask in range(1 << count):
        rest = ((1 << count) - 1) & ~mask
        sub = rest
        while sub:
            sup = mask | sub
            if values[sup] >= values[mask] + sizes[sup] - sizes[mask]:
                redundant[mask] = True
                break
            sub = (sub - 1) & rest
    gens: list[Poly] = []
    seen: set[Poly] = set()
    for mask in range(1 << count):
        if redundant[mask]:
            continue
        complement = [xs[i] for i in range(count) if not mask >> i & 1]
        base = forms_product(complement, n)
        if base.is_zero:
            continue
        for mono in monomials_upto(n, values[mask]):
            gen = base * Poly.monomial(n, mono)
            if gen not in seen:
                seen.add(gen)
                gens.append(gen)
    return gens


def p_space(x_vectors: Sequence[Vector], n: int, assignment: Assignment) -> PolySpace:
    """The external space with its exact dimension and Hilbert table."""
    return space_from_spanning(pk_generators(x_vectors, n, assignment), homogeneous=True)


def degree_cap(x_vectors: Sequence[Vector], assignment: Assignment) -> int:
    """No spanning element exceeds column count plus the largest value."""
    return len(tuple(x_vectors)) + assignment.max_value


class PSpaceChecker:
    """Span-membership oracle for one external space, reused across queries."""

    def __init__(
        self,
        x_vectors: Sequence[Vector],
        n: int,
        assignment: Assignment,
        cap: int | None = None,
    ):
        self.nvars = n
        self.cap = degree_cap(x_vectors, assignment) if cap is None else cap
        self.monomials = monomials_upto(n, self.cap)
        self._reducer = RowReducer(len(self.monomials))
        for gen in pk_generators(x_vectors, n, assignment):
            self._reducer.add(coefficient_vector(gen, self.monomials))

    @property
    def dim(self) -> int:
        return self._reducer.rank

    def contains(self, poly: Poly) -> bool:
        if poly.is_zero:
            return True
        if poly.degree > self.cap:
            return False
        return self._reducer.contains(coefficient_vector(poly, self.monomials))


def membership(
    f: Poly, x_vectors: Sequence[Vector], n: int, assignment: Assignment
) -> bool:
    """Exact test whether ``f`` lies in the external space."""
    return PSpaceChecker(x_vectors, n, assignment).contains(f)


def homogeneous_basis(
    config: "Configuration",
    assignment: Assignment,
    family: ExternalFamily,
    checker: PSpaceChecker | None = None,
) -> list[Poly]:
    """Greedy-set products for the selected bases; independent by pivots.

    Requires a solid assignment: solidity is what keeps every product inside
    the external space, and each member is re-verified there.  The list is a
    basis exactly when the space dimension equals the family size.
    """
    if not assignment.solid:
        raise AssignmentError("homogeneous basis requires a certified-solid assignment")
    if checker is None:
        checker = PSpaceChecker(config.x_vectors, config.dim, assignment)
    polys = []
    for basis in family.bases:
        greedy = matroid.greedy_set(
            config.vectors, basis, range(config.ground_count), config.order_position
        )
        poly = config.p_product(greedy)
        if not checker.contains(poly):
            raise InternalConsistencyError(
                f"not in the external space: greedy product of basis {sorted(basis)}"
            )
        polys.append(poly)
    if space_from_spanning(polys, homogeneous=True).dim != len(polys):
        raise InternalConsistencyError("greedy products failed to be independent")
    return polys


def inhomogeneous_basis(
    config: "Configuration",
    assignment: Assignment,
    family: ExternalFamily,
    checker: PSpaceChecker | None = None,
) -> list[Poly]:
    """Offset-form products over the prefix complements of the selected bases.

    Requires a solid and incremental assignment.  Each member is verified to
    lie in the external space and the whole list is verified to span it; a
    rank deficit would contradict the theory and is flagged, never accepted.
    """
    if not (assignment.solid and assignment.incremental):
        raise AssignmentError(
            "inhomogeneous basis requires a solid and incremental assignment"
        )
    if checker is None:
        checker = PSpaceChecker(config.x_vectors, config.dim, assignment)
    n = config.dim
    x_set = frozenset(config.x_indices)
    polys = []
    for basis in family.bases:
        ipart = basis & x_set
        m = y_prefix_length(ipart, assignment, n)
        support = (x_set | config.y_prefix(m)) - basis
        poly = config.q_product(support)
        if not checker.contains(poly):
            raise InternalConsistencyError(
                f"not in the external space: offset product of basis {sorted(basis)}"
            )
        polys.append(poly)
    rank = space_from_spanning(polys).dim
    if rank < checker.dim:
        raise InternalConsistencyError(
            f"span deficiency: offset products reach rank {rank} < dim {checker.dim}"
        )
    return polys


def hilbert_by_formula(
    config: "Configuration", assignment: Assignment
) -> dict[int, int]:
    """Hilbert table of the external space from the combinatorial formula.

    The degree-j count is the central census plus, for every non-basis
    independent set I whose greedy-set size lies in [j - value(I), j], the
    number of ways to finish a degree-j greedy set inside the prefix:
    C(j - #greedy(I) + n - #I - 1, n - #I - 1).  Valid for solid and
    incremental assignments.
    """
    if not (assignment.solid and assignment.incremental):
        raise AssignmentError(
            "the Hilbert formula requires a solid and incremental assignment"
        )
    xs = config.x_vectors
    n = config.dim
    position = config.order_position
    h_central = central_hilbert(xs, n, position)
    base_set = set(matroid.bases(xs, n))
    table: dict[int, int] = dict(h_central)
    max_degree = len(xs) + assignment.max_value + n
    for indep in matroid.independent_sets(xs):
        if indep in base_set:
            continue
        greedy_size = len(matroid.greedy_set(xs, indep, range(len(xs)), position))
        k = assignment.value(indep)
        slots = n - len(indep) - 1
        for j in range(greedy_size, min(greedy_size + k, max_degree) + 1):
            table[j] = table.get(j, 0) + math.comb(j - greedy_size + slots, slots)
    return {j: c for j, c in sorted(table.items()) if c}


def external_dim_check(
    x_vectors: Sequence[Vector], n: int, constant: int
) -> tuple[int, int]:
    """Direct dimension and closed form for a constant assignment.

    Returns ``(direct, closed_form)`` where the closed form is the sum of
    C(n + c - #I, c) over the independent sets; for c = 0 this is their
    count.
    """
    xs = tuple(vector(v) for v in x_vectors)
    assignment = Assignment.constant(xs, constant)
    direct = p_space(xs, n, assignment).dim
    closed = sum(
        math.comb(n + constant - len(indep), constant)
        for indep in matroid.independent_sets(xs)
    )
    return direct, closed
