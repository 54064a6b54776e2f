from typing import Dict, Hashable, Iterable, List, Optional, Sequence

import numpy as np

from .strings import shortlex_key


class UnionFind:
    """Disjoint sets with path compression and union by size.

    find is idempotent; unions are confined to the carrier given at construction.
    """

    def __init__(self, items: Iterable[Hashable] = ()):
        self.parents: Dict[Hashable, Hashable] = {}
        self.sizes: Dict[Hashable, int] = {}

        for item in items:
            self.parents[item] = item
            self.sizes[item] = 1

    def find(self, item: Hashable) -> Hashable:
        if item not in self.parents:
            raise KeyError(f"Lookup failed: '{item}' is not in the carrier.")

        # path compression
        path = [item]
        root = self.parents[item]
        while root != path[-1]:
            path.append(root)
            root = self.parents[root]
        for node in path:
            self.parents[node] = root
        return root

    def union(self, first: Hashable, second: Hashable) -> bool:
        """Merges the sets of both items. Returns whether they were distinct."""
        a, b = self.find(first), self.find(second)
        if a == b:
            return False
        if self.sizes[a] < self.sizes[b]:
            a, b = b, a
        self.parents[b] = a
        self.sizes[a] += self.sizes[b]
        return True

    def __contains__(self, item: Hashable) -> bool:
        return item in self.parents

    def __iter__(self):
        return iter(self.parents)

    def __len__(self) -> int:
        return len(self.parents)


class StringPartition:
    """An equivalence on a finite set of strings, kept as a union-find.

    Attributes:
        carrier (frozenset): The strings partitioned.
        alphabet (Sequence[str]): Ξ, used to order classes deterministically.
    """

    def __init__(self, carrier: Iterable[str], alphabet: Sequence[str]):
        self.carrier = frozenset(carrier)
        self.alphabet = tuple(alphabet)
        self.parent = UnionFind(sorted(self.carrier))

    def find(self, word: str) -> str:
        return self.parent.find(word)

    def union(self, u: str, w: str) -> bool:
        return self.parent.union(u, w)

    def same(self, u: str, w: str) -> bool:
        return self.find(u) == self.find(w)

    def classes(self) -> List[List[str]]:
        """Classes with members in shortlex order, classes ordered by their first member."""
        key = shortlex_key(self.alphabet)
        groups: Dict[str, List[str]] = {}
        for word in self.carrier:
            groups.setdefault(self.find(word), []).append(word)
        result = [sorted(group, key=key) for group in groups.values()]
        return sorted(result, key=lambda group: key(group[0]))

    def copy(self) -> "StringPartition":
        clone = StringPartition(self.carrier, self.alphabet)
        for word in self.carrier:
            clone.union(word, self.find(word))
        return clone

    def __eq__(self, other: object) -> bool:
        return isinstance(other, StringPartition) and self.carrier == other.carrier and self.classes() == other.classes()

    def __repr__(self) -> str:
        return f"StringPartition({self.classes()})"


def shuffled(items: Sequence, rng: Optional[np.random.Generator]) -> List:
    """A copy of `items`, permuted by `rng` when one is given."""
    items = list(items)
    if rng is None:
        return items
    return [items[i] for i in rng.permutation(len(items))]
