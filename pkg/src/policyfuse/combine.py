"""Fusing per-policy clearances into one decision value.

Two policies are fused by a dominance-weighted sum. Four policies (the
discretionary/mandatory x integrity/confidentiality grid) are fused through a
two-level tree of pairwise comparisons: every comparison is a 2x2 reciprocal
matrix, which is always perfectly consistent, so its weight vector is just
the normalized first column (no eigenvector iteration needed).

Two tree orientations are supported and named by their wire-format tokens:

* ``ahp_fig1`` compares the access-control models at the root (discretionary
  vs mandatory, ratio ``r``), then the protection goals inside each model
  (``r1`` within discretionary, ``r2`` within mandatory). Its top-level
  weights land on the goals (integrity vs confidentiality).
* ``ahp_fig2`` compares the protection goals at the root (integrity vs
  confidentiality, ratio ``x``), then the models inside each goal (``x1``,
  ``x2``). Its top-level weights land on the models.

All ratios are arbitrary positive reals; every combiner output is a nested
convex combination of its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError


class Verdict(str, Enum):
    GRANT = "grant"
    DENY = "deny"


def decide(clearance: float) -> Verdict:
    """Grant iff the combined clearance is strictly positive; ties deny."""
    return Verdict.GRANT if clearance > 0 else Verdict.DENY


def pairwise_weights(ratio: float) -> tuple[float, float]:
    """Weights from one 2x2 reciprocal comparison with the given ratio.

    Returns ``(w_low, w_high) = (1/(1+ratio), ratio/(1+ratio))``: the
    normalized first column of ``[[1, 1/ratio], [ratio, 1]]``. The two
    weights always sum to one.
    """
    if not (isinstance(ratio, (int, float)) and math.isfinite(ratio) and ratio > 0):
        raise DomainError(f"comparison ratio must be a positive finite real, got {ratio!r}")
    return 1.0 / (1.0 + ratio), ratio / (1.0 + ratio)


def _require_positive(name: str, value: float) -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be a positive finite real, got {value!r}")


@dataclass(frozen=True)
class WeightedConfig:
    """Two-policy mode: ``r`` is how many times policy 1 outweighs policy 2."""

    r: float

    def __post_init__(self):
        _require_positive("r", self.r)


@dataclass(frozen=True)
class AhpModelFirstConfig:
    """Model-first tree (``ahp_fig1``): r = mandatory over discretionary,
    r1/r2 = confidentiality over integrity within each model."""

    r: float
    r1: float
    r2: float

    def __post_init__(self):
        _require_positive("r", self.r)
        _require_positive("r1", self.r1)
        _require_positive("r2", self.r2)


@dataclass(frozen=True)
class AhpGoalFirstConfig:
    """Goal-first tree (``ahp_fig2``): x = confidentiality over integrity,
    x1/x2 = mandatory over discretionary within each goal."""

    x: float
    x1: float
    x2: float

    def __post_init__(self):
        _require_positive("x", self.x)
        _require_positive("x1", self.x1)
        _require_positive("x2", self.x2)


@dataclass(frozen=True)
class ClearanceQuad:
    """The four sub-policy clearances of a two-goal, two-model system."""

    dsp_int: float
    msp_int: float
    dsp_conf: float
    msp_conf: float


def weighted_combine(p1: float, p2: float, cfg: WeightedConfig) -> float:
    """Dominance-weighted sum: ``r/(r+1) * p1 + 1/(r+1) * p2``.

    The result always lies in the closed interval between p1 and p2; as r
    grows it approaches p1.
    """
    w_minor, w_major = pairwise_weights(cfg.r)
    return w_major * p1 + w_minor * p2


def ahp_weights_model_first(cfg: AhpModelFirstConfig) -> tuple[float, float]:
    """Top-level goal weights (w_int, w_conf) of the model-first tree.

    Each goal's weight blends its within-model weights by the model weights;
    the pair sums to one and both lie in (0, 1).
    """
    w_dsp, w_msp = pairwise_weights(cfg.r)
    dsp_int, dsp_conf = pairwise_weights(cfg.r1)
    msp_int, msp_conf = pairwise_weights(cfg.r2)
    w_int = dsp_int * w_dsp + msp_int * w_msp
    w_conf = dsp_conf * w_dsp + msp_conf * w_msp
    return w_int, w_conf


def ahp_combine_model_first(quad: ClearanceQuad, cfg: AhpModelFirstConfig) -> float:
    """Fuse the quad through the model-first tree.

    Blends discretionary/mandatory clearances per goal with the model
    weights, then blends the two goal clearances with the goal weights.
    """
    w_dsp, w_msp = pairwise_weights(cfg.r)
    p_int = w_dsp * quad.dsp_int + w_msp * quad.msp_int
    p_conf = w_dsp * quad.dsp_conf + w_msp * quad.msp_conf
    w_int, w_conf = ahp_weights_model_first(cfg)
    return w_int * p_int + w_conf * p_conf


def ahp_weights_goal_first(cfg: AhpGoalFirstConfig) -> tuple[float, float]:
    """Top-level model weights (w_dsp, w_msp) of the goal-first tree."""
    w_int, w_conf = pairwise_weights(cfg.x)
    int_dsp, int_msp = pairwise_weights(cfg.x1)
    conf_dsp, conf_msp = pairwise_weights(cfg.x2)
    w_dsp = int_dsp * w_int + conf_dsp * w_conf
    w_msp = int_msp * w_int + conf_msp * w_conf
    return w_dsp, w_msp


def ahp_combine_goal_first(quad: ClearanceQuad, cfg: AhpGoalFirstConfig) -> float:
    """Fuse the quad through the goal-first tree."""
    w_int, w_conf = pairwise_weights(cfg.x)
    f_dsp = w_int * quad.dsp_int + w_conf * quad.dsp_conf
    f_msp = w_int * quad.msp_int + w_conf * quad.msp_conf
    w_dsp, w_msp = ahp_weights_goal_first(cfg)
    return w_dsp * f_dsp + w_msp * f_msp
