"""Linear matroid enumeration, flat assignments and the external basis family.

Ground elements are referred to by integer index into a vector list.  The
configuration order puts every user column before every generated column, and
all subset outputs are canonically sorted so runs are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

from .errors import AssignmentError, InternalConsistencyError
from .linalg import RowReducer, Vector, vector

if TYPE_CHECKING:
    from .groundset import Configuration

IndexSet = frozenset[int]


def _key(subset: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(subset))


def canonical_subsets(subsets: Iterable[Iterable[int]]) -> tuple[IndexSet, ...]:
    """Sort subsets by (size, elements) and freeze them."""
    frozen = {frozenset(s) for s in subsets}
    return tuple(sorted(frozen, key=lambda s: (len(s), _key(s))))


def subset_rank(vectors: Sequence[Vector], subset: Iterable[int]) -> int:
    if not vectors:
        return 0
    reducer = RowReducer(len(vectors[0]))
    for i in sorted(subset):
        reducer.add(vectors[i])
    return reducer.rank


def is_independent(vectors: Sequence[Vector], subset: Iterable[int]) -> bool:
    subset = list(subset)
    return subset_rank(vectors, subset) == len(subset)


def closure(
    vectors: Sequence[Vector],
    subset: Iterable[int],
    universe: Iterable[int] | None = None,
) -> IndexSet:
    """All universe elements contained in the span of ``subset``."""
    if universe is None:
        universe = range(len(vectors))
    width = len(vectors[0]) if vectors else 0
    reducer = RowReducer(width)
    for i in sorted(subset):
        reducer.add(vectors[i])
    return frozenset(i for i in universe if reducer.contains(vectors[i]))


def independent_sets(
    vectors: Sequence[Vector], universe: Iterable[int] | None = None
) -> tuple[IndexSet, ...]:
    """Every independent subset of the given elements, canonically ordered."""
    if universe is None:
        universe = range(len(vectors))
    universe = sorted(universe)
    n = len(vectors[0]) if vectors else 0
    found: list[IndexSet] = []
    for size in range(min(n, len(universe)) + 1):
        for combo in combinations(universe, size):
            if is_independent(vectors, combo):
                found.append(frozenset(combo))
    return canonical_subsets(found)


def bases(
    vectors: Sequence[Vector], n: int, universe: Iterable[int] | None = None
) -> tuple[IndexSet, ...]:
    """All n-element subsets spanning the ambient space (empty if rank < n)."""
    if universe is None:
        universe = range(len(vectors))
    universe = sorted(universe)
    out = [
        frozenset(combo)
        for combo in combinations(universe, n)
        if subset_rank(vectors, combo) == n
    ]
    return canonical_subsets(out)


def flats(vectors: Sequence[Vector], universe: Iterable[int] | None = None) -> tuple[IndexSet, ...]:
    """The lattice of flats: closures of all independent subsets."""
    seen = {closure(vectors, ind, universe) for ind in independent_sets(vectors, universe)}
    return canonical_subsets(seen)


class Assignment:
    """Natural-number assignment on subsets of the user columns.

    The standard mode stores one value per flat and extends to arbitrary
    subsets through the closure, so the assignment factors through spans.  A
    raw mode keeps genuinely per-subset values for experimentation; operations
    that need span-factoring refuse such assignments.
    """

    def __init__(
        self,
        x_vectors: Sequence[Vector],
        flat_values: Mapping[IndexSet, int],
        solid: bool,
        incremental: bool,
        solid_witness=None,
        incremental_witness=None,
        subset_values: Mapping[IndexSet, int] | None = None,
    ):
        self.x_vectors = tuple(vector(v) for v in x_vectors)
        self.flat_values = {frozenset(f): int(v) for f, v in flat_values.items()}
        self.solid = solid
        self.incremental = incremental
        self.solid_witness = solid_witness
        self.incremental_witness = incremental_witness
        self.subset_values = (
            None
            if subset_values is None
            else {frozenset(s): int(v) for s, v in subset_values.items()}
        )
        self._closure_cache: dict[IndexSet, IndexSet] = {}

    @property
    def factors_through_spans(self) -> bool:
        return self.subset_values is None

    @property
    def x_count(self) -> int:
        return len(self.x_vectors)

    @property
    def max_value(self) -> int:
        if self.subset_values is not None:
            return max(self.subset_values.values(), default=0)
        return max(self.flat_values.values(), default=0)

    def value(self, subset: Iterable[int]) -> int:
        key = frozenset(subset)
        if not all(0 <= i < self.x_count for i in key):
            raise ValueError("subset contains indices outside the user columns")
        if self.subset_values is not None:
            try:
                return self.subset_values[key]
            except KeyError:
                raise AssignmentError(f"missing value for subset {_key(key)}") from None
        flat = self._closure_cache.get(key)
        if flat is None:
            flat = closure(self.x_vectors, key)
            self._closure_cache[key] = flat
        return self.flat_values[flat]

    @classmethod
    def constant(cls, x_vectors: Sequence[Vector], value: int) -> "Assignment":
        pairs = [(f, value) for f in flats(tuple(vector(v) for v in x_vectors))]
        return validate_assignment(x_vectors, pairs)

    @classmethod
    def from_subset_values(
        cls, x_vectors: Sequence[Vector], values: Mapping[Iterable[int], int]
    ) -> "Assignment":
        """Raw per-subset assignment; must cover every subset of the columns."""
        xs = tuple(vector(v) for v in x_vectors)
        if len(xs) > 12:
            raise AssignmentError("raw subset mode is limited to 12 columns")
        table = {frozenset(s): int(v) for s, v in values.items()}
        if any(v < 0 for v in table.values()):
            raise AssignmentError("assignment values must be natural numbers")
        universe = range(len(xs))
        for size in range(len(xs) + 1):
            for combo in combinations(universe, size):
                if frozenset(combo) not in table:
                    raise AssignmentError(f"missing value for subset {combo}")
        solid, sw = _check_solid_raw(xs, table)
        incremental, iw = _check_incremental_raw(xs, table)
        return cls(xs, {}, solid, incremental, sw, iw, subset_values=table)


def _check_solid_raw(xs, table):
    items = sorted(table, key=_key)
    spans = {s: closure(xs, s) for s in items}
    for za in items:
        for zb in items:
            if spans[za] <= spans[zb] and table[za] > table[zb]:
                return False, (_key(za), _key(zb))
    return True, None


def _check_incremental_raw(xs, table):
    for z in sorted(table, key=_key):
        for x in range(len(xs)):
            if table[z | {x}] > table[z] + 1:
                return False, (_key(z), x)
    return True, None


def validate_assignment(
    x_vectors: Sequence[Vector], pairs: Iterable[tuple[Iterable[int], int]]
) -> Assignment:
    """Build a certified assignment from raw (subset, value) input.

    Each supplied subset labels its closure.  Two subsets with equal closure
    and different values are rejected, as is a missing flat; there is no
    defaulting.  Solidity (monotone under span inclusion) and incrementality
    (one-step growth) are checked exhaustively over the flat lattice and
    recorded as flags with witnesses, never assumed.
    """
    xs = tuple(vector(v) for v in x_vectors)
    all_flats = flats(xs)
    values: dict[IndexSet, int] = {}
    label: dict[IndexSet, tuple[int, ...]] = {}
    for subset, value in pairs:
        subset = frozenset(subset)
        if not all(0 <= i < len(xs) for i in subset):
            raise AssignmentError(f"subset {_key(subset)} has out-of-range indices")
        value = int(value)
        if value < 0:
            raise AssignmentError(f"subset {_key(subset)}: values must be natural numbers")
        flat = closure(xs, subset)
        if flat in values and values[flat] != value:
            raise AssignmentError(
                "not a function of the span: subsets "
                f"{label[flat]} and {_key(subset)} share a span but got values "
                f"{values[flat]} and {value}"
            )
        values.setdefault(flat, value)
        label.setdefault(flat, _key(subset))
    for flat in all_flats:
        if flat not in values:
            raise AssignmentError(f"missing flat {_key(flat)}")

    solid, solid_witness = True, None
    for fa in all_flats:
        for fb in all_flats:
            if fa < fb and values[fa] > values[fb]:
                solid, solid_witness = False, (_key(fa), _key(fb))
                break
        if not solid:
            break

    incremental, inc_witness = True, None
    for flat in all_flats:
        for x in range(len(xs)):
            if x in flat:
                continue
            upper = closure(xs, set(flat) | {x})
            if values[upper] > values[flat] + 1:
                incremental, inc_witness = False, (_key(flat), x)
                break
        if not incremental:
            break

    return Assignment(xs, values, solid, incremental, solid_witness, inc_witness)


def y_prefix_length(indep: Iterable[int], assignment: Assignment, n: int) -> int:
    """Length of the completion prefix for an independent set: k(I) + n - #I."""
    indep = frozenset(indep)
    return assignment.value(indep) + n - len(indep)


@dataclass(frozen=True)
class ExternalFamily:
    """The selected bases of the full configuration, grouped by X-part."""

    bases: tuple[IndexSet, ...]
    groups: tuple[tuple[IndexSet, tuple[IndexSet, ...]], ...]
    tag: str = "external"

    def __len__(self) -> int:
        return len(self.bases)

    def group_of(self, indep: Iterable[int]) -> tuple[IndexSet, ...]:
        key = frozenset(indep)
        for indep_set, members in self.groups:
            if indep_set == key:
                return members
        raise KeyError(_key(key))


def external_bases(config: "Configuration", assignment: Assignment) -> ExternalFamily:
    """Enumerate the bases whose generated part fits inside its prefix budget.

    A basis of the full configuration qualifies when its generated elements
    all lie in the prefix of length ``k(I) + n - #I`` determined by its user
    part ``I``.  The result is also grouped by ``I``: each independent set is
    extended by choosing the remaining elements from its prefix.
    """
    n = config.dim
    required = required_y_size(config.x_vectors, n, assignment)
    if config.y_count < required:
        raise AssignmentError(
            f"completion sequence too short: need {required} elements, have {config.y_count}"
        )
    x_set = frozenset(config.x_indices)
    selected: list[IndexSet] = []
    groups: dict[IndexSet, list[IndexSet]] = {}
    for basis in bases(config.vectors, n):
        ipart = basis & x_set
        m = y_prefix_length(ipart, assignment, n)
        if (basis - ipart) <= config.y_prefix(m):
            selected.append(basis)
            groups.setdefault(ipart, []).append(basis)
    ordered_groups = tuple(
        (ind, canonical_subsets(groups[ind]))
        for ind in sorted(groups, key=lambda s: (len(s), _key(s)))
    )
    return ExternalFamily(canonical_subsets(selected), ordered_groups)


def count_external_bases(
    x_vectors: Sequence[Vector], n: int, assignment: Assignment
) -> int:
    """Closed-form size of the external family: sum of C(m(I), k(I))."""
    xs = tuple(vector(v) for v in x_vectors)
    total = 0
    for indep in independent_sets(xs):
        k = assignment.value(indep)
        total += math.comb(y_prefix_length(indep, assignment, n), k)
    return total


def required_y_size(
    x_vectors: Sequence[Vector], n: int, assignment: Assignment
) -> int:
    """Smallest completion-sequence length that realizes every selected basis."""
    xs = tuple(vector(v) for v in x_vectors)
    return max(
        y_prefix_length(indep, assignment, n) for indep in independent_sets(xs)
    )


def greedy_set(
    vectors: Sequence[Vector],
    members: Iterable[int],
    universe: Iterable[int],
    position,
) -> IndexSet:
    """Elements outside ``members`` not spanned by the earlier member part.

    ``position`` maps an element index to its rank in the fixed total order.
    An element belongs to the result when it does not lie in the span of the
    members strictly preceding it.
    """
    members = frozenset(members)
    out = []
    for z in universe:
        if z in members:
            continue
        earlier = [vectors[b] for b in members if position(b) < position(z)]
        reducer = RowReducer(len(vectors[z]))
        for row in earlier:
            reducer.add(row)
        if not reducer.contains(vectors[z]):
            out.append(z)
    return frozenset(out)


@dataclass
class SplitNode:
    """Node of the deletion/restriction tree over a basis family.

    ``avoided`` collects the elements belonging to no member and ``required``
    the elements belonging to every member; both are maximal for the node's
    family.  Internal nodes carry the splitting element and two children.
    """

    family: tuple[IndexSet, ...]
    avoided: IndexSet
    required: IndexSet
    element: int | None = None
    deletion: "SplitNode | None" = None
    restriction: "SplitNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.element is None

    def leaves(self) -> list["SplitNode"]:
        if self.is_leaf:
            return [self]
        return self.deletion.leaves() + self.restriction.leaves()

    @property
    def leaf_count(self) -> int:
        return len(self.leaves())

    @property
    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.deletion.depth, self.restriction.depth)

    def internal_nodes(self) -> list["SplitNode"]:
        if self.is_leaf:
            return []
        return (
            [self] + self.deletion.internal_nodes() + self.restriction.internal_nodes()
        )


def _exchangeable(family_set, element: int, basis: IndexSet) -> bool:
    """One-element exchange: some member of ``basis`` can be swapped for ``element``."""
    if element in basis:
        return True
    return any((basis - {a}) | {element} in family_set for a in basis)


def split_tree(
    config: "Configuration", assignment: Assignment, family: ExternalFamily
) -> SplitNode:
    """Decompose the family into singletons by verified placable splits.

    At each node the maximal avoided/required sets are recomputed and the
    smallest remaining element in the configuration order is used to split.
    User columns are exhausted first; afterwards the node family extends a
    single independent set and the generated elements of its prefix are used.
    Every split is re-verified against the exchange definition instead of
    trusting the theory, and a failure is reported as an internal error.
    """
    if not assignment.solid:
        raise AssignmentError("split tree requires a certified-solid assignment")
    ground = sorted(range(config.ground_count), key=config.order_position)

    def build(members: tuple[IndexSet, ...]) -> SplitNode:
        family_set = set(members)
        avoided = frozenset(
            z for z in range(config.ground_count) if all(z not in b for b in members)
        )
        required = frozenset(
            z for z in range(config.ground_count) if all(z in b for b in members)
        )
        node = SplitNode(members, avoided, required)
        if len(members) == 1:
            return node
        candidates = [z for z in ground if z not in avoided and z not in required]
        if not candidates:
            raise InternalConsistencyError("split failed: no candidate element")
        x = candidates[0]
        for basis in members:
            if not _exchangeable(family_set, x, basis):
                raise InternalConsistencyError(
                    f"split failed: element {x} is not placable at a node of size {len(members)}"
                )
        low = tuple(b for b in members if x not in b)
        high = tuple(b for b in members if x in b)
        if not low or not high:
            raise InternalConsistencyError("split failed: trivial partition")
        node.element = x
        node.deletion = build(canonical_subsets(low))
        node.restriction = build(canonical_subsets(high))
        return node

    return build(family.bases)


def verify_split_tree(root: SplitNode, family: ExternalFamily):
    """Re-verify the whole tree by the exchange definition.

    Returns None when every internal node splits non-trivially by a placable
    element and the leaves biject with the family; otherwise returns a witness
    describing the first violation.
    """
    if set(root.family) != set(family.bases):
        return ("root family mismatch",)
    leaves = root.leaves()
    leaf_bases = [leaf.family[0] for leaf in leaves]
    if any(len(leaf.family) != 1 for leaf in leaves):
        return ("non-singleton leaf",)
    if set(leaf_bases) != set(family.bases) or len(leaf_bases) != len(family.bases):
        return ("leaves do not biject with the family",)
    for node in root.internal_nodes():
        family_set = set(node.family)
        low = set(node.deletion.family)
        high = set(node.restriction.family)
        if low | high != family_set or low & high:
            return ("children do not partition", node.element)
        if not low or not high:
            return ("trivial split", node.element)
        if {b for b in node.family if node.element in b} != high:
            return ("restriction mismatch", node.element)
        for basis in node.family:
            if not _exchangeable(family_set, node.element, basis):
                return ("exchange failed", node.element, _key(basis))
    return None
