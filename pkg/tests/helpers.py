"""Shared test fixtures: reference lattices and an independent sup oracle."""

from itertools import combinations

from policyfuse.lattice import SecurityLattice

# Four-level chain used by the linear worked example.
CHAIN4_ELEMENTS = ["0", "1", "2", "3"]
CHAIN4_ORDER = [("0", "1"), ("1", "2"), ("2", "3")]

# Eight-level branching lattice used by the nonlinear worked example:
# three incomparable level-1 labels, two incomparable level-2 labels,
# rejoining at level 3.
BRANCH8_ELEMENTS = ["0", "1a", "1b", "1c", "2ab", "2c", "3", "4"]
BRANCH8_ORDER = [
    ("0", "1a"),
    ("0", "1b"),
    ("0", "1c"),
    ("1a", "2ab"),
    ("1b", "2ab"),
    ("1c", "2c"),
    ("2ab", "3"),
    ("2c", "3"),
    ("3", "4"),
]


def make_chain(length: int) -> SecurityLattice:
    labels = [f"L{i}" for i in range(length)]
    return SecurityLattice(labels, [(labels[i], labels[i + 1]) for i in range(length - 1)])


def make_boolean(ground: str) -> SecurityLattice:
    """Boolean lattice of all subsets of the characters of ``ground``.

    A subset is labelled by its sorted characters; the empty set is "e".
    Order pairs declare immediate one-element extensions (the cover relation).
    """
    def name(subset):
        return "".join(sorted(subset)) or "e"

    subsets = []
    for size in range(len(ground) + 1):
        subsets.extend(frozenset(c) for c in combinations(ground, size))
    pairs = [
        (name(small), name(big))
        for small in subsets
        for big in subsets
        if small < big and len(big) == len(small) + 1
    ]
    return SecurityLattice([name(s) for s in subsets], pairs)


def brute_force_sup(lattice: SecurityLattice, a: str, b: str) -> str | None:
    """Independent least-upper-bound oracle.

    Enumerates every common upper bound of ``a`` and ``b`` via the closure and
    returns the one that sits below all the others, or None if no such single
    element exists. Deliberately ignores the lattice's precomputed sup table.
    """
    uppers = [u for u in lattice.elements if lattice.leq(a, u) and lattice.leq(b, u)]
    least = [u for u in uppers if all(lattice.leq(u, v) for v in uppers)]
    if len(least) == 1:
        return least[0]
    return None
