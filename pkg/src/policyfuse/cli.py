"""Command-line front door: validate configs, decide requests, sweep parameters.

Exit codes are a function of outcomes only:
  0 success (validate OK / all requests granted / sweep done)
  1 I/O error
  2 parse error (config text, request line, grid syntax)
  3 validation error (config structure, unresolvable request)
  4 clean run with at least one denial (scripting affordance)
  5 unknown sweep parameter
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .clearance import AccessRequest
from .combine import Verdict
from .engine import (
    AuditRecord,
    Decision,
    EngineConfig,
    SweepResult,
    append_audit,
    evaluate,
    load_config,
    serialize_decision,
    sweep,
)
from .errors import (
    DomainError,
    ParseError,
    RequestError,
    SinkError,
    UnknownParameterError,
    ValidationError,
)

EXIT_OK = 0
EXIT_IO = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_DENY = 4
EXIT_UNKNOWN_PARAMETER = 5


def parse_request_line(line: str, lineno: int = 1) -> AccessRequest | None:
    """Parse 'subject object type[,type...]'; None for blank/comment lines."""
    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return None
    parts = stripped.split()
    if len(parts) != 3:
        raise ParseError(
            f"request line {lineno}: expected 'subject object type[,type...]', got {stripped!r}"
        )
    subject, obj, spec = parts
    access = frozenset(t for t in spec.split(",") if t)
    if not access:
        raise ParseError(f"request line {lineno}: no access types named")
    return AccessRequest(subject=subject, object=obj, access=access)


def parse_grid(text: str) -> list[float]:
    """Parse 'lo:hi:step' into an inclusive list of positive grid values."""
    pieces = text.split(":")
    if len(pieces) != 3:
        raise ParseError(f"grid must look like 'lo:hi:step', got {text!r}")
    try:
        lo, hi, step = (float(p) for p in pieces)
    except ValueError:
        raise ParseError(f"grid bounds must be numbers, got {text!r}") from None
    if lo <= 0 or step <= 0:
        raise ParseError("grid bounds and step must be positive")
    if hi < lo:
        raise ParseError("grid upper bound must not be below the lower bound")
    count = int((hi - lo) / step + 1e-9) + 1
    return [lo + i * step for i in range(count)]


def _load(path: str) -> EngineConfig:
    return load_config(Path(path).read_bytes())


def _audit_path(args) -> Path:
    if args.audit:
        return Path(args.audit)
    return Path(str(args.config) + ".audit")


def _audit_decisions(args, cfg: EngineConfig, results) -> None:
    """Append one audit line per decision; failures warn but never block."""
    path = _audit_path(args)
    try:
        with open(path, "a", encoding="utf-8") as sink:
            for request, decision in results:
                append_audit(sink, AuditRecord.create(cfg, request, decision))
    except (OSError, SinkError) as err:
        print(f"warning: audit append failed: {err}", file=sys.stderr)


def _render_human(request: AccessRequest, decision: Decision) -> str:
    rows = [("verdict", decision.verdict.value), ("combined", _num(decision.combined))]
    rows += [(name, _num(value)) for name, value in decision.components.items()]
    rows += [(f"weight[{name}]", _num(value)) for name, value in decision.weights_used.items()]
    rows.append(("leakage", _num(decision.leakage)))
    width = max(len(key) for key, _ in rows)
    lines = [f"request: {request.subject} {request.object} {','.join(sorted(request.access))}"]
    lines += [f"  {key.ljust(width)}  {value}" for key, value in rows]
    lines.append("  trace:")
    lines += [f"    {step}" for step in decision.trace]
    return "\n".join(lines)


def _num(x: float) -> str:
    return f"{x:.12g}"


# -- commands -----------------------------------------------------------------

def cmd_validate(args) -> int:
    cfg = _load(args.config)
    parts = [
        f"mode={cfg.mode.value}",
        f"m={cfg.scale.m}",
        f"access_types={len(cfg.access_types)}",
    ]
    print("OK: " + " ".join(parts))
    for name, block in (("confidentiality", cfg.confidentiality), ("integrity", cfg.integrity)):
        if block is None:
            continue
        lat = block.lattice
        print(
            f"{name}: {lat.level_count} lattice elements, {len(lat.cover_edges)} cover edges, "
            f"{len(block.subject_labels)} subjects, {len(block.object_labels)} objects, "
            f"{len(block.matrix.entries)} matrix cells"
        )
    print(f"fingerprint: {cfg.fingerprint}")
    return EXIT_OK


def _gather_requests(args) -> list[AccessRequest]:
    if args.requests:
        requests = []
        for lineno, line in enumerate(Path(args.requests).read_text(encoding="utf-8").splitlines(), 1):
            request = parse_request_line(line, lineno)
            if request is not None:
                requests.append(request)
        return requests
    if not args.request:
        raise ParseError("no request given: pass 'subject object types' or --requests FILE")
    request = parse_request_line(" ".join(args.request))
    if request is None:
        raise ParseError("no request given: the inline request is empty")
    return [request]


def cmd_decide(args) -> int:
    cfg = _load(args.config)
    requests = _gather_requests(args)
    results = [(request, evaluate(cfg, request)) for request in requests]
    _audit_decisions(args, cfg, results)

    if args.format == "json":
        for _, decision in results:
            print(serialize_decision(decision))
    elif args.format == "csv":
        print("subject,object,verdict,combined,leakage")
        for request, decision in results:
            print(
                f"{request.subject},{request.object},{decision.verdict.value},"
                f"{_num(decision.combined)},{_num(decision.leakage)}"
            )
    else:
        for request, decision in results:
            print(_render_human(request, decision))
    if any(decision.verdict is Verdict.DENY for _, decision in results):
        return EXIT_DENY
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _load(args.config)
    request = parse_request_line(" ".join(args.request))
    if request is None:
        raise ParseError("no request given")
    grid = parse_grid(args.grid)
    result = sweep(cfg, request, args.parameter, grid)

    if args.format == "csv":
        print("param,combined,verdict")
        for point in result.points:
            print(f"{_num(point.value)},{_num(point.combined)},{point.verdict.value}")
    else:
        width = max(len(_num(p.value)) for p in result.points)
        print(f"sweep of {result.parameter!r} for request "
              f"'{request.subject} {request.object} {','.join(sorted(request.access))}'")
        for point in result.points:
            print(f"  {result.parameter}={_num(point.value).ljust(width)}  "
                  f"combined={_num(point.combined):>14}  {point.verdict.value}")
        if result.flip_value is None:
            print("no verdict flip within the grid")
        else:
            print(f"verdict flips at {result.parameter}={_num(result.flip_value)}")

    if args.plot:
        from .plotting import render_sweep_figure

        render_sweep_figure(result, args.plot)
        print(f"figure written to {args.plot}", file=sys.stderr)
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import run_server

    run_server(args.config, args.bind, args.port, args.audit)
    return EXIT_OK


# -- wiring -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", required=True, help="path to the policy config (JSON)")
    shared.add_argument("--format", choices=("human", "json", "csv"), default="human",
                        help="output format (default: human)")
    shared.add_argument("--audit", default=None,
                        help="audit file path (default: <config>.audit)")

    parser = argparse.ArgumentParser(
        prog="policyfuse",
        description="Policy-combination decision engine: fuse conflicting access-control verdicts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", parents=[shared], help="check a config file")
    p_validate.set_defaults(func=cmd_validate)

    p_decide = sub.add_parser("decide", parents=[shared], help="evaluate access requests")
    p_decide.add_argument("request", nargs="*",
                          help="inline request: subject object type[,type...]")
    p_decide.add_argument("--requests", default=None,
                          help="file with one request per line ('#' comments allowed)")
    p_decide.set_defaults(func=cmd_decide)

    p_sweep = sub.add_parser("sweep", parents=[shared],
                             help="re-evaluate one request across a parameter grid")
    p_sweep.add_argument("request", nargs="+",
                         help="inline request: subject object type[,type...]")
    p_sweep.add_argument("--parameter", required=True, help="combiner parameter to sweep")
    p_sweep.add_argument("--grid", required=True, help="grid as lo:hi:step (inclusive)")
    p_sweep.add_argument("--plot", default=None,
                         help="also render the sweep as a figure to this file")
    p_sweep.set_defaults(func=cmd_sweep)

    p_serve = sub.add_parser("serve", parents=[shared], help="run the HTTP decision point")
    p_serve.add_argument("--bind", default="127.0.0.1", help="bind address (default 127.0.0.1)")
    p_serve.add_argument("--port", type=int, default=8181, help="port (default 8181)")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except UnknownParameterError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_UNKNOWN_PARAMETER
    except (ValidationError, RequestError, DomainError) as err:
        print(f"validation error: {err}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
