"""Per-policy clearance levels and the leakage-probability map.

A clearance level is a real number in [-m, m]: positive means the policy is
confident the access is safe, negative that it should be refused, with the
magnitude expressing confidence. The mandatory policy derives its clearance
from lattice labels, the discretionary policy from the access matrix. All
functions here are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import OutOfRangeError
from .lattice import SecurityLattice

# slack for float dust when a combined value lands exactly on the range edge
_RANGE_EPS = 1e-9


@dataclass(frozen=True)
class ClearanceScale:
    """Granularity parameter m: clearances live in [-m, m]."""

    m: int

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError(f"scale m must be a positive integer, got {self.m!r}")


@dataclass(frozen=True)
class AccessRequest:
    """One access request: a subject asking for a set of access types on an object."""

    subject: str
    object: str
    access: frozenset[str]

    def __post_init__(self):
        if not self.access:
            raise ValueError("request must name at least one access type")
        object.__setattr__(self, "access", frozenset(self.access))


@dataclass(frozen=True)
class AccessMatrix:
    """Discretionary state: (subject, object) -> granted access types.

    A missing cell means no access is granted (fail-safe default).
    """

    entries: Mapping[tuple[str, str], frozenset[str]] = field(default_factory=dict)

    def granted(self, subject: str, obj: str) -> frozenset[str]:
        return frozenset(self.entries.get((subject, obj), frozenset()))


def mandatory_clearance(
    lattice: SecurityLattice,
    subject_label: str,
    object_label: str,
    scale: ClearanceScale,
) -> float:
    """Clearance of the mandatory policy from the two security labels.

    Comparable labels yield the signed chain distance scaled by m over the
    lattice's level count (positive when the subject's label dominates). On a
    totally ordered lattice this is exactly the rank difference times m/l.
    Incomparable labels yield minus the absolute difference of the two
    distances to their least upper bound, with the same scaling.
    """
    factor = scale.m / lattice.level_count
    if lattice.leq(object_label, subject_label):
        return lattice.chain_distance(object_label, subject_label) * factor + 0.0
    if lattice.leq(subject_label, object_label):
        return -lattice.chain_distance(subject_label, object_label) * factor + 0.0
    top = lattice.sup(subject_label, object_label)
    spread = abs(
        lattice.chain_distance(subject_label, top)
        - lattice.chain_distance(object_label, top)
    )
    return -spread * factor + 0.0


def discretionary_clearance(
    request: AccessRequest,
    matrix: AccessMatrix,
    universe_size: int,
    scale: ClearanceScale,
) -> float:
    """Clearance of the discretionary policy from the access matrix.

    If any requested type is not granted, the clearance is -k * m/M where k
    counts the denied types. Otherwise it is +h * m/M where h counts granted
    but unrequested types (the cell's slack).
    """
    granted = matrix.granted(request.subject, request.object)
    denied = request.access - granted
    if denied:
        return -len(denied) * scale.m / universe_size + 0.0
    surplus = granted - request.access
    return len(surplus) * scale.m / universe_size + 0.0


def leakage_probability(clearance: float, scale: ClearanceScale) -> float:
    """Linear map from clearance to the probability of information leakage.

    0.5 at clearance zero, 0 at +m, 1 at -m; strictly decreasing in between.
    """
    if abs(clearance) > scale.m + _RANGE_EPS:
        raise OutOfRangeError(
            f"clearance {clearance} outside [-{scale.m}, {scale.m}]"
        )
    return 0.5 - clearance / (2 * scale.m)
