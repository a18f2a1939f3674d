"""Policy engine: config loading, request evaluation, sweeps, audit trail.

The engine owns the JSON config format, validates everything at load time
(lattices are built and their sup tables materialized, every label and access
type resolved), and evaluates requests as pure functions of the immutable
config. Decisions carry a full derivation trace; every decision can be
appended to a line-oriented audit file together with the config fingerprint.

Config file shape (UTF-8 JSON)::

    {
      "scale": {"m": 4},
      "access_types": ["r", "w", "a", "f"],
      "mode": "weighted",                      # or "ahp_fig1" / "ahp_fig2"
      "combiner": {"r": 3},                    # {"r","r1","r2"} / {"x","x1","x2"}
      "confidentiality": {
        "lattice": {"elements": [...], "order": [[lo, hi], ...]},
        "subject_labels": {"s": "1"},
        "object_labels": {"o": "2"},
        "matrix": {"s:o": ["r", "w", "a"]}
      },
      "integrity": { ...same shape..., "invert_direction": true },  # ahp modes
      "overrides": {"s:o": 2}                  # pinned discretionary clearance
    }

The integrity block is required for the ahp modes. ``invert_direction``
swaps the roles of the two labels in that block's mandatory check, negating
the sign for comparable labels (an integrity reading of the lattice).
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from enum import Enum
from typing import IO, Mapping, Sequence

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
from .errors import (
    ModeMismatchError,
    ParseError,
    SinkError,
    UnknownAccessTypeError,
    UnknownObjectError,
    UnknownParameterError,
    UnknownSubjectError,
    ValidationError,
)
from .lattice import SecurityLattice


class Mode(str, Enum):
    """Combination mode; values are the wire-format tokens."""

    WEIGHTED = "weighted"
    AHP_MODEL_FIRST = "ahp_fig1"
    AHP_GOAL_FIRST = "ahp_fig2"


_COMBINER_KEYS = {
    Mode.WEIGHTED: ("r",),
    Mode.AHP_MODEL_FIRST: ("r", "r1", "r2"),
    Mode.AHP_GOAL_FIRST: ("x", "x1", "x2"),
}

_TOP_KEYS = {"scale", "access_types", "mode", "combiner", "confidentiality", "integrity", "overrides"}
_BLOCK_KEYS = {"lattice", "subject_labels", "object_labels", "matrix"}


@dataclass(frozen=True)
class PolicyBlock:
    """One policy's state: lattice, label assignments, access matrix."""

    lattice: SecurityLattice
    subject_labels: Mapping[str, str]
    object_labels: Mapping[str, str]
    matrix: AccessMatrix
    invert_direction: bool = False


@dataclass(frozen=True)
class EngineConfig:
    scale: ClearanceScale
    access_types: tuple[str, ...]
    mode: Mode
    combiner: WeightedConfig | AhpModelFirstConfig | AhpGoalFirstConfig
    confidentiality: PolicyBlock
    integrity: PolicyBlock | None
    overrides: Mapping[tuple[str, str], float]
    fingerprint: str


@dataclass(frozen=True)
class Decision:
    """A grant/deny verdict with its full numeric derivation."""

    verdict: Verdict
    combined: float
    components: Mapping[str, float]
    weights_used: Mapping[str, float]
    leakage: float
    trace: tuple[str, ...]


@dataclass(frozen=True)
class SweepPoint:
    value: float
    combined: float
    verdict: Verdict


@dataclass(frozen=True)
class SweepResult:
    parameter: str
    points: tuple[SweepPoint, ...]
    flip_value: float | None


@dataclass(frozen=True)
class AuditRecord:
    """One audited decision: when, under which config, for which request."""

    timestamp: str
    fingerprint: str
    request: AccessRequest
    decision: Decision

    @classmethod
    def create(cls, cfg: EngineConfig, request: AccessRequest, decision: Decision) -> "AuditRecord":
        stamp = datetime.now(timezone.utc).isoformat(timespec="milliseconds")
        return cls(timestamp=stamp, fingerprint=cfg.fingerprint, request=request, decision=decision)

    def to_line(self) -> str:
        return f"{self.timestamp}\t{self.fingerprint}\t{serialize_decision(self.decision)}\n"


# -- number rendering ---------------------------------------------------------

def _round12(x: float) -> float:
    """Clip a float to at most 12 significant decimal digits."""
    return float(f"{x:.12g}")


def _fmt(x: float) -> str:
    """Render a number exactly as it will appear in the JSON serialization."""
    return repr(_round12(x))


def serialize_decision(decision: Decision) -> str:
    """Canonical compact JSON form of a decision (stable across runs)."""
    payload = {
        "verdict": decision.verdict.value,
        "combined": _round12(decision.combined),
        "components": {k: _round12(v) for k, v in decision.components.items()},
        "weights_used": {k: _round12(v) for k, v in decision.weights_used.items()},
        "leakage": _round12(decision.leakage),
        "trace": list(decision.trace),
    }
    return json.dumps(payload, separators=(",", ":"))


# -- config loading -----------------------------------------------------------

def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise ValidationError(message)


def _positive_number(raw, what: str) -> float:
    _expect(isinstance(raw, (int, float)) and not isinstance(raw, bool), f"{what} must be a number")
    value = float(raw)
    _expect(math.isfinite(value) and value > 0, f"{what} must be positive and finite")
    return value


def _split_cell(key: str, what: str) -> tuple[str, str]:
    _expect(isinstance(key, str) and ":" in key, f"{what} key {key!r} must look like 'subject:object'")
    subject, obj = key.split(":", 1)
    _expect(bool(subject) and bool(obj), f"{what} key {key!r} must name both subject and object")
    return subject, obj


def _parse_block(raw, name: str, universe: frozenset[str], allow_direction: bool) -> PolicyBlock:
    _expect(isinstance(raw, dict), f"{name} block must be an object")
    allowed = _BLOCK_KEYS | ({"invert_direction"} if allow_direction else set())
    unknown = set(raw) - allowed
    _expect(not unknown, f"{name} block has unknown keys: {sorted(unknown)}")
    for key in _BLOCK_KEYS:
        _expect(key in raw, f"{name} block is missing {key!r}")

    lat_raw = raw["lattice"]
    _expect(isinstance(lat_raw, dict) and set(lat_raw) == {"elements", "order"},
            f"{name} lattice must be an object with 'elements' and 'order'")
    elements = lat_raw["elements"]
    order = lat_raw["order"]
    _expect(isinstance(elements, list) and all(isinstance(e, str) for e in elements),
            f"{name} lattice elements must be a list of strings")
    _expect(len(set(elements)) == len(elements), f"{name} lattice elements must be unique")
    _expect(isinstance(order, list) and all(
        isinstance(p, list) and len(p) == 2 and all(isinstance(e, str) for e in p) for p in order
    ), f"{name} lattice order must be a list of [lo, hi] string pairs")
    try:
        lattice = SecurityLattice(elements, [(lo, hi) for lo, hi in order])
    except Exception as err:
        raise ValidationError(f"{name} lattice: {err}") from err

    def parse_labels(mapping, kind):
        _expect(isinstance(mapping, dict), f"{name} {kind} must be an object")
        out = {}
        for entity, label in mapping.items():
            _expect(isinstance(entity, str) and entity, f"{name} {kind}: empty {kind[:-7]} id")
            _expect(":" not in entity, f"{name} {kind}: id {entity!r} must not contain ':'")
            _expect(isinstance(label, str) and label in lattice,
                    f"{name} {kind}: {entity!r} references unknown label {label!r}")
            out[entity] = label
        return out

    subject_labels = parse_labels(raw["subject_labels"], "subject_labels")
    object_labels = parse_labels(raw["object_labels"], "object_labels")

    matrix_raw = raw["matrix"]
    _expect(isinstance(matrix_raw, dict), f"{name} matrix must be an object")
    entries = {}
    for key, types in matrix_raw.items():
        cell = _split_cell(key, f"{name} matrix")
        _expect(isinstance(types, list) and all(isinstance(t, str) for t in types),
                f"{name} matrix cell {key!r} must list access types")
        for t in types:
            _expect(t in universe, f"{name} matrix cell {key!r} has unknown access type {t!r}")
        entries[cell] = frozenset(types)

    invert = raw.get("invert_direction", False)
    _expect(isinstance(invert, bool), f"{name} invert_direction must be a boolean")
    return PolicyBlock(
        lattice=lattice,
        subject_labels=subject_labels,
        object_labels=object_labels,
        matrix=AccessMatrix(entries),
        invert_direction=invert,
    )


def _parse_combiner(mode: Mode, raw):
    _expect(isinstance(raw, dict), "combiner must be an object")
    expected = _COMBINER_KEYS[mode]
    if set(raw) != set(expected):
        raise ModeMismatchError(
            f"mode {mode.value!r} requires combiner parameters {list(expected)}, got {sorted(raw)}"
        )
    values = {key: _positive_number(raw[key], f"combiner parameter {key!r}") for key in expected}
    if mode is Mode.WEIGHTED:
        return WeightedConfig(**values)
    if mode is Mode.AHP_MODEL_FIRST:
        return AhpModelFirstConfig(**values)
    return AhpGoalFirstConfig(**values)


def load_config(source: bytes | str | IO[bytes]) -> EngineConfig:
    """Parse and fully validate a config; returns it with its fingerprint.

    Raises ParseError for malformed text (position in the message),
    ValidationError for structural problems, and ModeMismatchError when the
    combiner parameters do not match the selected mode.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, str):
        data = source.encode("utf-8")
    else:
        data = bytes(source)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as err:
        raise ParseError(f"config is not valid UTF-8 at byte {err.start}") from err
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(f"invalid JSON at line {err.lineno} column {err.colno}: {err.msg}") from err

    _expect(isinstance(raw, dict), "config top level must be an object")
    unknown = set(raw) - _TOP_KEYS
    _expect(not unknown, f"unknown top-level keys: {sorted(unknown)}")
    for key in ("scale", "access_types", "mode", "combiner", "confidentiality"):
        _expect(key in raw, f"config is missing {key!r}")

    scale_raw = raw["scale"]
    _expect(isinstance(scale_raw, dict) and set(scale_raw) == {"m"}, "scale must be an object {'m': int}")
    m = scale_raw["m"]
    _expect(isinstance(m, int) and not isinstance(m, bool) and m >= 1, "scale m must be a positive integer")
    scale = ClearanceScale(m)

    types_raw = raw["access_types"]
    _expect(isinstance(types_raw, list) and types_raw, "access_types must be a non-empty list")
    _expect(all(isinstance(t, str) and t for t in types_raw), "access types must be non-empty strings")
    _expect(len(set(types_raw)) == len(types_raw), "access types must be unique")
    access_types = tuple(types_raw)
    universe = frozenset(access_types)

    mode_raw = raw["mode"]
    try:
        mode = Mode(mode_raw)
    except ValueError:
        raise ValidationError(
            f"unknown mode {mode_raw!r}; expected one of {[m.value for m in Mode]}"
        ) from None

    combiner = _parse_combiner(mode, raw["combiner"])

    confidentiality = _parse_block(raw["confidentiality"], "confidentiality", universe, allow_direction=False)
    integrity = None
    if mode is not Mode.WEIGHTED:
        _expect("integrity" in raw, f"mode {mode.value!r} requires an integrity block")
    if "integrity" in raw:
        integrity = _parse_block(raw["integrity"], "integrity", universe, allow_direction=True)

    overrides = {}
    for key, value in (raw.get("overrides") or {}).items():
        cell = _split_cell(key, "overrides")
        _expect(isinstance(value, (int, float)) and not isinstance(value, bool),
                f"override for {key!r} must be a number")
        _expect(abs(value) <= m, f"override for {key!r} must lie within [-{m}, {m}]")
        overrides[cell] = float(value)

    return EngineConfig(
        scale=scale,
        access_types=access_types,
        mode=mode,
        combiner=combiner,
        confidentiality=confidentiality,
        integrity=integrity,
        overrides=overrides,
        fingerprint=hashlib.sha256(data).hexdigest(),
    )


# -- evaluation ---------------------------------------------------------------

def _block_mandatory(block: PolicyBlock, name: str, request: AccessRequest,
                     scale: ClearanceScale, trace: list[str]) -> float:
    try:
        subject_label = block.subject_labels[request.subject]
    except KeyError:
        raise UnknownSubjectError(
            f"subject {request.subject!r} has no label in the {name} block"
        ) from None
    try:
        object_label = block.object_labels[request.object]
    except KeyError:
        raise UnknownObjectError(
            f"object {request.object!r} has no label in the {name} block"
        ) from None

    cs, co = subject_label, object_label
    if block.invert_direction:
        cs, co = co, cs
    value = mandatory_clearance(block.lattice, cs, co, scale)
    lat = block.lattice
    if lat.leq(cs, co) or lat.leq(co, cs):
        relation = "comparable"
    else:
        top = lat.sup(cs, co)
        relation = (
            f"incomparable, join {top!r} at distances "
            f"{lat.chain_distance(cs, top)}/{lat.chain_distance(co, top)}"
        )
    flag = " (direction inverted)" if block.invert_direction else ""
    trace.append(
        f"{name} mandatory: subject label {subject_label!r} vs object label "
        f"{object_label!r}{flag}, {relation} -> clearance {_fmt(value)}"
    )
    return value


def _block_discretionary(cfg: EngineConfig, block: PolicyBlock, name: str,
                         request: AccessRequest, trace: list[str]) -> float:
    cell = (request.subject, request.object)
    if cell in cfg.overrides:
        value = cfg.overrides[cell]
        trace.append(
            f"{name} discretionary: override pinned for "
            f"{request.subject}:{request.object} -> clearance {_fmt(value)}"
        )
        return value
    granted = block.matrix.granted(request.subject, request.object)
    value = discretionary_clearance(request, block.matrix, len(cfg.access_types), cfg.scale)
    denied = len(request.access - granted)
    surplus = len(granted - request.access)
    trace.append(
        f"{name} discretionary: granted {{{','.join(sorted(granted))}}} "
        f"denied={denied} surplus={surplus} -> clearance {_fmt(value)}"
    )
    return value


def _check_request(cfg: EngineConfig, request: AccessRequest) -> None:
    unknown = request.access - set(cfg.access_types)
    if unknown:
        raise UnknownAccessTypeError(
            f"unknown access type(s) {sorted(unknown)}; universe is {list(cfg.access_types)}"
        )


def evaluate(cfg: EngineConfig, request: AccessRequest) -> Decision:
    """Evaluate one request against the loaded config.

    Weighted mode fuses the confidentiality block's mandatory and
    discretionary clearances; the ahp modes compute all four sub-policy
    clearances across the confidentiality and integrity blocks and fuse them
    through the configured tree. The trace records every intermediate value
    in evaluation order.
    """
    _check_request(cfg, request)
    trace: list[str] = [
        f"request: subject={request.subject} object={request.object} "
        f"access={{{','.join(sorted(request.access))}}}"
    ]

    if cfg.mode is Mode.WEIGHTED:
        w_disc, w_mand = pairwise_weights(cfg.combiner.r)
        trace.append(
            f"mode weighted: r={_fmt(cfg.combiner.r)} -> weights "
            f"mandatory={_fmt(w_mand)} discretionary={_fmt(w_disc)}"
        )
        p_mand = _block_mandatory(cfg.confidentiality, "confidentiality", request, cfg.scale, trace)
        p_disc = _block_discretionary(cfg, cfg.confidentiality, "confidentiality", request, trace)
        combined = weighted_combine(p_mand, p_disc, cfg.combiner)
        trace.append(
            f"combined = {_fmt(w_mand)}*{_fmt(p_mand)} + {_fmt(w_disc)}*{_fmt(p_disc)}"
            f" = {_fmt(combined)}"
        )
        components = {"mandatory": p_mand, "discretionary": p_disc}
        weights = {"mandatory": w_mand, "discretionary": w_disc}
    else:
        assert cfg.integrity is not None  # guaranteed by load_config
        quad = ClearanceQuad(
            dsp_int=_block_discretionary(cfg, cfg.integrity, "integrity", request, trace),
            msp_int=_block_mandatory(cfg.integrity, "integrity", request, cfg.scale, trace),
            dsp_conf=_block_discretionary(cfg, cfg.confidentiality, "confidentiality", request, trace),
            msp_conf=_block_mandatory(cfg.confidentiality, "confidentiality", request, cfg.scale, trace),
        )
        components = {
            "dsp_int": quad.dsp_int,
            "msp_int": quad.msp_int,
            "dsp_conf": quad.dsp_conf,
            "msp_conf": quad.msp_conf,
        }
        if cfg.mode is Mode.AHP_MODEL_FIRST:
            w_dsp, w_msp = pairwise_weights(cfg.combiner.r)
            w_int, w_conf = ahp_weights_model_first(cfg.combiner)
            p_int = w_dsp * quad.dsp_int + w_msp * quad.msp_int
            p_conf = w_dsp * quad.dsp_conf + w_msp * quad.msp_conf
            combined = ahp_combine_model_first(quad, cfg.combiner)
            trace.append(
                f"mode ahp_fig1 (model-first): model weights dsp={_fmt(w_dsp)} "
                f"msp={_fmt(w_msp)}, goal weights int={_fmt(w_int)} conf={_fmt(w_conf)}"
            )
            trace.append(
                f"goal blends: int = {_fmt(p_int)}, conf = {_fmt(p_conf)}"
            )
            trace.append(
                f"combined = {_fmt(w_int)}*{_fmt(p_int)} + {_fmt(w_conf)}*{_fmt(p_conf)}"
                f" = {_fmt(combined)}"
            )
            weights = {"dsp": w_dsp, "msp": w_msp, "int": w_int, "conf": w_conf}
        else:
            w_int, w_conf = pairwise_weights(cfg.combiner.x)
            w_dsp, w_msp = ahp_weights_goal_first(cfg.combiner)
            f_dsp = w_int * quad.dsp_int + w_conf * quad.dsp_conf
            f_msp = w_int * quad.msp_int + w_conf * quad.msp_conf
            combined = ahp_combine_goal_first(quad, cfg.combiner)
            trace.append(
                f"mode ahp_fig2 (goal-first): goal weights int={_fmt(w_int)} "
                f"conf={_fmt(w_conf)}, model weights dsp={_fmt(w_dsp)} msp={_fmt(w_msp)}"
            )
            trace.append(
                f"model blends: dsp = {_fmt(f_dsp)}, msp = {_fmt(f_msp)}"
            )
            trace.append(
                f"combined = {_fmt(w_dsp)}*{_fmt(f_dsp)} + {_fmt(w_msp)}*{_fmt(f_msp)}"
                f" = {_fmt(combined)}"
            )
            weights = {"int": w_int, "conf": w_conf, "dsp": w_dsp, "msp": w_msp}

    leakage = leakage_probability(combined, cfg.scale)
    verdict = decide(combined)
    trace.append(f"leakage probability = {_fmt(leakage)}")
    trace.append(f"verdict: {verdict.value}")
    return Decision(
        verdict=verdict,
        combined=combined,
        components=components,
        weights_used=weights,
        leakage=leakage,
        trace=tuple(trace),
    )


def sweep(cfg: EngineConfig, request: AccessRequest, parameter: str,
          grid: Sequence[float]) -> SweepResult:
    """Re-evaluate the request across a grid of values for one combiner parameter.

    The config is never mutated; each grid point evaluates a transient copy.
    The flip value is the smallest grid value whose verdict differs from the
    first grid point's verdict, or None when the verdict never changes.
    """
    valid = _COMBINER_KEYS[cfg.mode]
    if parameter not in valid:
        raise UnknownParameterError(
            f"mode {cfg.mode.value!r} has no parameter {parameter!r}; expected one of {list(valid)}"
        )
    points = []
    for value in grid:
        probe = replace(cfg, combiner=replace(cfg.combiner, **{parameter: float(value)}))
        decision = evaluate(probe, request)
        points.append(SweepPoint(value=float(value), combined=decision.combined,
                                 verdict=decision.verdict))
    flipped = [p.value for p in points if p.verdict != points[0].verdict]
    return SweepResult(
        parameter=parameter,
        points=tuple(points),
        flip_value=min(flipped) if flipped else None,
    )


def append_audit(sink: IO[str], record: AuditRecord) -> str:
    """Append one audit line to a writable text sink; returns the line.

    Raises SinkError on any I/O failure; the caller still holds the decision.
    """
    line = record.to_line()
    try:
        sink.write(line)
        sink.flush()
    except (OSError, ValueError) as err:
        raise SinkError(f"audit append failed: {err}") from err
    return line
