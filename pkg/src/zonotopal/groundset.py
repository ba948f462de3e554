"""Configuration building: user columns, completion sequence, offsets.

The full ground set consists of the user columns X followed by an ordered
completion sequence Y in general position, with one rational offset per
element.  Generation is deterministic in the seed and every generated object
is re-verified; user-supplied sequences and offsets are verified, never
trusted.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from . import matroid
from .errors import GenerationExhaustedError, ValidationError
from .linalg import (
    NoSolutionError,
    RowReducer,
    UnderdeterminedError,
    Vector,
    rank,
    scalar,
    solve,
    vector,
)
from .polynomials import Poly, affine_form, linear_form, product

_GENERATION_ROUNDS = 64


@dataclass(frozen=True)
class GroundElement:
    """One ground element: a vector, its part, and its affine offset."""

    part: str  # "x" for user columns, "y" for the completion sequence
    position: int  # 0-based within its part
    vector: Vector
    offset: Fraction


class Configuration:
    """Immutable ground configuration over exact rationals.

    ``vectors`` lists the user columns first and the completion sequence
    after them.  The total order puts every user column before every
    completion element; the user columns may carry a custom order, the
    completion sequence is always ordered by its own index.
    """

    def __init__(
        self,
        dim: int,
        x_vectors: Sequence[Vector],
        y_vectors: Sequence[Vector],
        offsets: Sequence[Fraction],
        seed: int = 0,
        x_order: Sequence[int] | None = None,
    ):
        self.dim = int(dim)
        self.x_vectors = tuple(vector(v) for v in x_vectors)
        self.y_vectors = tuple(vector(v) for v in y_vectors)
        self.vectors = self.x_vectors + self.y_vectors
        self.offsets = tuple(scalar(o) for o in offsets)
        self.seed = int(seed)
        if any(len(v) != self.dim for v in self.vectors):
            raise ValidationError("all columns must have the ambient dimension")
        if len(self.offsets) != len(self.vectors):
            raise ValidationError("need exactly one offset per ground element")
        order = tuple(x_order) if x_order is not None else tuple(range(self.x_count))
        if sorted(order) != list(range(self.x_count)):
            raise ValidationError("x_order must be a permutation of the user columns")
        self.x_order = order
        positions = [0] * self.ground_count
        for pos, idx in enumerate(order):
            positions[idx] = pos
        for j in range(self.y_count):
            positions[self.x_count + j] = self.x_count + j
        self._positions = tuple(positions)

    @property
    def x_count(self) -> int:
        return len(self.x_vectors)

    @property
    def y_count(self) -> int:
        return len(self.y_vectors)

    @property
    def ground_count(self) -> int:
        return len(self.vectors)

    @property
    def x_indices(self) -> range:
        return range(self.x_count)

    @property
    def y_indices(self) -> range:
        return range(self.x_count, self.ground_count)

    def element(self, index: int) -> GroundElement:
        if index < self.x_count:
            return GroundElement("x", index, self.vectors[index], self.offsets[index])
        return GroundElement(
            "y", index - self.x_count, self.vectors[index], self.offsets[index]
        )

    def order_position(self, index: int) -> int:
        return self._positions[index]

    def y_global(self, position: int) -> int:
        """Global index of the completion element with 1-based position."""
        if not 1 <= position <= self.y_count:
            raise IndexError(f"no completion element at position {position}")
        return self.x_count + position - 1

    def y_prefix(self, length: int) -> frozenset[int]:
        """Global indices of the first ``length`` completion elements."""
        if length <= 0:
            return frozenset()
        length = min(length, self.y_count)
        return frozenset(range(self.x_count, self.x_count + length))

    def p_form(self, index: int) -> Poly:
        return linear_form(self.vectors[index])

    def q_form(self, index: int) -> Poly:
        return affine_form(self.vectors[index], self.offsets[index])

    def p_product(self, indices: Iterable[int]) -> Poly:
        return product((self.p_form(i) for i in sorted(indices)), self.dim)

    def q_product(self, indices: Iterable[int]) -> Poly:
        return product((self.q_form(i) for i in sorted(indices)), self.dim)

    def forms_product(self, indices: Iterable[int], use_offsets: bool) -> Poly:
        return self.q_product(indices) if use_offsets else self.p_product(indices)


def required_y_size(x_vectors, n: int, assignment) -> int:
    """Smallest completion length making every prefix budget realizable."""
    return matroid.required_y_size(x_vectors, n, assignment)


def verify_general_position(
    x_vectors: Sequence[Vector], y_vectors: Sequence[Vector], n: int
):
    """Check that no completion element is spanned by n-1 other elements.

    Returns None on success, otherwise a witness pair
    ``(y_position, other_indices)`` with the offending element (0-based within
    the completion sequence) and the indices (into X followed by Y) of a small
    subset whose span contains it.
    """
    xs = tuple(vector(v) for v in x_vectors)
    ys = tuple(vector(v) for v in y_vectors)
    all_vectors = xs + ys
    total = len(all_vectors)
    for ypos in range(len(ys)):
        yidx = len(xs) + ypos
        others = [i for i in range(total) if i != yidx]
        for subset in combinations(others, min(n - 1, len(others))):
            reducer = RowReducer(n)
            for i in subset:
                reducer.add(all_vectors[i])
            if reducer.contains(all_vectors[yidx]):
                return (ypos, tuple(subset))
    return None


def generate_y(
    x_vectors: Sequence[Vector], n: int, count: int, seed: int
) -> tuple[Vector, ...]:
    """Deterministically draw a completion sequence in general position.

    Candidates are taken on the moment curve ``t -> (1, t, t^2, ...)`` at
    integer parameters from a seeded stream; a candidate is kept only when
    the extended sequence passes verification.  Moment-curve points meet any
    proper subspace in few parameters, so rejection is rare.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    xs = tuple(vector(v) for v in x_vectors)
    rng = random.Random(f"zonotopal-y:{seed}")
    ys: list[Vector] = []
    used_params: set[int] = set()
    attempts = 0
    budget = 200 + 200 * count
    while len(ys) < count:
        attempts += 1
        if attempts > budget:
            raise GenerationExhaustedError(
                "generation exhausted while extending the completion sequence"
            )
        spread = 4 + attempts
        t = rng.randrange(-spread, spread + 1)
        if n > 1 and t in used_params:
            continue
        candidate = vector([t**j for j in range(n)])
        if verify_general_position(xs, ys + [candidate], n) is None:
            ys.append(candidate)
            used_params.add(t)
    return tuple(ys)


def verify_generic_offsets(
    vectors: Sequence[Vector], offsets: Sequence[Fraction], n: int
):
    """Certify genericity of the offsets.

    Passes when (a) no n+1 of the affine forms share a common zero and (b)
    distinct bases give distinct vertices.  Returns None on success or a
    witness: ``("common zero", indices)`` or ``("vertex collision", b1, b2)``.
    """
    vecs = tuple(vector(v) for v in vectors)
    offs = tuple(scalar(o) for o in offsets)
    if rank(vecs) != n:
        raise ValidationError("the ground set must have full rank")
    for subset in combinations(range(len(vecs)), n + 1):
        rows = [vecs[i] for i in subset]
        rhs = [offs[i] for i in subset]
        coeff_rank = rank(rows)
        augmented = [list(r) + [b] for r, b in zip(rows, rhs)]
        if rank(augmented) == coeff_rank:
            return ("common zero", subset)
    seen: dict[Vector, tuple[int, ...]] = {}
    for basis in matroid.bases(vecs, n):
        key = tuple(sorted(basis))
        try:
            point = solve([vecs[i] for i in key], [offs[i] for i in key])
        except (NoSolutionError, UnderdeterminedError):  # pragma: no cover
            return ("singular basis", key)
        if point in seen:
            return ("vertex collision", seen[point], key)
        seen[point] = key
    return None


def generate_offsets(
    vectors: Sequence[Vector], n: int, seed: int
) -> tuple[Fraction, ...]:
    """Deterministically draw verified-generic integer offsets."""
    vecs = tuple(vector(v) for v in vectors)
    rng = random.Random(f"zonotopal-offsets:{seed}")
    for attempt in range(_GENERATION_ROUNDS):
        spread = 8 + 8 * attempt
        candidate = tuple(Fraction(rng.randrange(-spread, spread + 1)) for _ in vecs)
        if verify_generic_offsets(vecs, candidate, n) is None:
            return candidate
    raise GenerationExhaustedError("generation exhausted while drawing offsets")


def build_configuration(
    n: int,
    x_columns: Sequence[Sequence],
    assignment=None,
    y_columns: Sequence[Sequence] | None = None,
    offsets: Sequence | None = None,
    seed: int = 0,
    x_order: Sequence[int] | None = None,
    y_count: int | None = None,
) -> Configuration:
    """Assemble and verify a full configuration.

    The completion sequence is generated at the minimal sufficient length for
    the assignment unless supplied (or its length overridden); offsets are
    generated unless supplied.  Supplied data is verified and rejected with a
    witness on failure.
    """
    xs = tuple(vector(c) for c in x_columns)
    if any(len(v) != n for v in xs):
        raise ValidationError("user columns must have the ambient dimension")
    if y_columns is None:
        if y_count is None:
            if assignment is None:
                raise ValidationError(
                    "cannot size the completion sequence without an assignment"
                )
            y_count = required_y_size(xs, n, assignment)
        ys = generate_y(xs, n, y_count, seed)
    else:
        ys = tuple(vector(c) for c in y_columns)
        if any(len(v) != n for v in ys):
            raise ValidationError("completion columns must have the ambient dimension")
        witness = verify_general_position(xs, ys, n)
        if witness is not None:
            raise ValidationError(
                f"completion sequence fails general position: element {witness[0]} "
                f"is spanned by {witness[1]}"
            )
    all_vectors = xs + ys
    if not all_vectors or rank(all_vectors) != n:
        raise ValidationError("the ground set X union Y must have full rank")
    if offsets is None:
        offs = generate_offsets(all_vectors, n, seed)
    else:
        offs = tuple(scalar(o) for o in offsets)
        if len(offs) != len(all_vectors):
            raise ValidationError("need exactly one offset per ground element")
        witness = verify_generic_offsets(all_vectors, offs, n)
        if witness is not None:
            raise ValidationError(f"offsets fail genericity: {witness}")
    return Configuration(n, xs, ys, offs, seed=seed, x_order=x_order)
