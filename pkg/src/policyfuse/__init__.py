"""policyfuse: fuse conflicting access-control policy verdicts into one decision.

Instead of letting one policy veto or dominate outright, each policy reports
a clearance level in [-m, m]; the levels are fused by a dominance-weighted
sum (two policies) or a two-level pairwise-comparison tree (four policies),
and the fused value grants iff strictly positive.
"""

from .clearance import (
    AccessMatrix,
    AccessRequest,
    ClearanceScale,
    discretionary_clearance,
    leakage_probability,
    mandatory_clearance,
)
from .combine import (
    AhpGoalFirstConfig,
    AhpModelFirstConfig,
    ClearanceQuad,
    Verdict,
    WeightedConfig,
    ahp_combine_goal_first,
    ahp_combine_model_first,
    ahp_weights_goal_first,
    ahp_weights_model_first,
    decide,
    pairwise_weights,
    weighted_combine,
)
from .engine import (
    AuditRecord,
    Decision,
    EngineConfig,
    Mode,
    PolicyBlock,
    SweepPoint,
    SweepResult,
    append_audit,
    evaluate,
    load_config,
    serialize_decision,
    sweep,
)
from .lattice import SecurityLattice

__version__ = "0.1.0"

__all__ = [
    "AccessMatrix",
    "AccessRequest",
    "AhpGoalFirstConfig",
    "AhpModelFirstConfig",
    "AuditRecord",
    "ClearanceQuad",
    "ClearanceScale",
    "Decision",
    "EngineConfig",
    "Mode",
    "PolicyBlock",
    "SecurityLattice",
    "SweepPoint",
    "SweepResult",
    "Verdict",
    "WeightedConfig",
    "ahp_combine_goal_first",
    "ahp_combine_model_first",
    "ahp_weights_goal_first",
    "ahp_weights_model_first",
    "append_audit",
    "decide",
    "discretionary_clearance",
    "evaluate",
    "leakage_probability",
    "load_config",
    "mandatory_clearance",
    "pairwise_weights",
    "serialize_decision",
    "sweep",
    "weighted_combine",
]
