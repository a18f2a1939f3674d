"""Finite security lattices: order queries, least upper bounds, chain distances.

A lattice is built once from a set of labels and declared ``lo <= hi`` pairs.
Construction computes and validates everything up front (reflexive-transitive
closure, antisymmetry, a least upper bound for every pair, Hasse cover edges,
shortest-chain distances), so that per-request queries are pure table lookups
and a malformed lattice fails at load time rather than at decision time.
Instances are immutable after construction and safe for concurrent reads.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable

from .errors import CycleError, NoSupError, NotComparableError, UnknownLabelError


class SecurityLattice:
    """Partially ordered set of security labels with unique least upper bounds.

    Labels are non-empty strings, unique within the lattice. The order is the
    reflexive-transitive closure of the declared pairs; every unordered pair
    of labels must have exactly one least upper bound (join-semilattice).
    """

    __slots__ = (
        "elements",
        "order_pairs",
        "cover_edges",
        "level_count",
        "is_chain",
        "_uppers",
        "_sup",
        "_dist",
    )

    def __init__(self, elements: Iterable[str], order_pairs: Iterable[tuple[str, str]]):
        names = frozenset(elements)
        if not names:
            raise ValueError("lattice needs at least one element")
        for name in names:
            if not isinstance(name, str) or not name:
                raise ValueError(f"label must be a non-empty string, got {name!r}")

        declared = frozenset((lo, hi) for lo, hi in order_pairs)
        for lo, hi in declared:
            for label in (lo, hi):
                if label not in names:
                    raise UnknownLabelError(
                        f"order pair ({lo!r}, {hi!r}) references unknown label {label!r}"
                    )

        self.elements = names
        self.order_pairs = declared
        self.level_count = len(names)

        self._uppers = self._close(names, declared)
        self._check_antisymmetry()
        self.cover_edges = self._find_covers()
        self._sup = self._build_sup_table()
        self._dist = self._measure_distances()
        self.is_chain = all(
            b in self._uppers[a] or a in self._uppers[b]
            for a in names
            for b in names
        )

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def _close(names: frozenset[str], declared: frozenset[tuple[str, str]]):
        """Reflexive-transitive closure: label -> frozenset of labels above it."""
        succ: dict[str, set[str]] = {a: set() for a in names}
        for lo, hi in declared:
            succ[lo].add(hi)
        uppers = {}
        for start in names:
            seen = {start}
            queue = deque([start])
            while queue:
                for nxt in succ[queue.popleft()]:
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
            uppers[start] = frozenset(seen)
        return uppers

    def _check_antisymmetry(self) -> None:
        for a in self.elements:
            for b in self._uppers[a]:
                if b != a and a in self._uppers[b]:
                    raise CycleError(f"ordering cycle through {a!r} and {b!r}")

    def _find_covers(self) -> frozenset[tuple[str, str]]:
        covers = set()
        for a in self.elements:
            strict = self._uppers[a] - {a}
            for b in strict:
                # b covers a iff nothing sits strictly between them
                if all(b not in self._uppers[c] for c in strict if c != b):
                    covers.add((a, b))
        return frozenset(covers)

    def _build_sup_table(self) -> dict[tuple[str, str], str]:
        table: dict[tuple[str, str], str] = {}
        ordered = sorted(self.elements)
        for i, a in enumerate(ordered):
            for b in ordered[i:]:
                common = self._uppers[a] & self._uppers[b]
                if not common:
                    raise NoSupError(f"pair ({a!r}, {b!r}) has no upper bound")
                least = [u for u in common if all(v in self._uppers[u] for v in common)]
                if not least:
                    raise NoSupError(
                        f"pair ({a!r}, {b!r}) has no unique least upper bound"
                    )
                table[(a, b)] = table[(b, a)] = least[0]
        return table

    def _measure_distances(self) -> dict[str, dict[str, int]]:
        """Shortest-chain edge counts upward along the cover edges, per label."""
        succ: dict[str, list[str]] = {a: [] for a in self.elements}
        for lo, hi in self.cover_edges:
            succ[lo].append(hi)
        dist = {}
        for start in self.elements:
            reached = {start: 0}
            queue = deque([start])
            while queue:
                cur = queue.popleft()
                for nxt in succ[cur]:
                    if nxt not in reached:
                        reached[nxt] = reached[cur] + 1
                        queue.append(nxt)
            dist[start] = reached
        return dist

    # -- queries -------------------------------------------------------------

    def _require(self, label: str) -> None:
        if label not in self.elements:
            raise UnknownLabelError(f"label {label!r} is not in the lattice")

    def leq(self, lower: str, upper: str) -> bool:
        """True iff ``lower <= upper`` in the closure (reflexive)."""
        self._require(lower)
        self._require(upper)
        return upper in self._uppers[lower]

    def sup(self, a: str, b: str) -> str:
        """The unique least upper bound of ``a`` and ``b``."""
        self._require(a)
        self._require(b)
        return self._sup[(a, b)]

    def chain_distance(self, lower: str, upper: str) -> int:
        """Edge count of the shortest chain from ``lower`` up to ``upper``.

        Zero iff the labels are equal. Raises NotComparableError unless
        ``lower <= upper``.
        """
        if not self.leq(lower, upper):
            raise NotComparableError(f"{lower!r} is not below {upper!r}")
        return self._dist[lower][upper]

    def upper_set(self, label: str) -> frozenset[str]:
        """All labels at or above ``label`` (used by oracles and validation)."""
        self._require(label)
        return self._uppers[label]

    def chain_rank(self, label: str) -> int:
        """Position of ``label`` in a totally ordered lattice, bottom = 0."""
        if not self.is_chain:
            raise ValueError("rank is only defined on a totally ordered lattice")
        self._require(label)
        return self.level_count - len(self._uppers[label])

    def __len__(self) -> int:
        return self.level_count

    def __contains__(self, label: str) -> bool:
        return label in self.elements

    def __repr__(self) -> str:
        return (
            f"SecurityLattice({self.level_count} elements, "
            f"{len(self.order_pairs)} declared pairs)"
        )
