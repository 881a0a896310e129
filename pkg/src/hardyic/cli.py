"""Command-line front end.

Every subcommand prints a report ``{command, inputs, result, version}``.
Exit status: 0 success, 2 usage error, 3 validation or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from collections.abc import Sequence
from typing import Any

import numpy as np

from . import __version__
from .box import EPS, VertexId, resolve_box, validate
from .errors import HardyICError
from .ic_bounds import (
    ic_stats,
    max_cabello_under_ic,
    max_cabello_under_ns,
    max_chsh_under_ic,
    max_hardy_under_ic,
    max_hardy_under_ns,
    violates_ic_sufficient,
)
from .ic_game import GameConfig, play, sweep_E_plane
from .nonlocality import (
    cabello_success,
    chsh_value,
    correlator,
    hardy_check,
    hardy_success,
)
from .polytope import (
    all_vertex_ids,
    cabello_vertex_set,
    decompose,
    enumerate_vertices,
    hardy_face_vertices,
)
from .quantum import (
    OptimizerConfig,
    grid_search_cabello,
    grid_search_hardy,
    optimize_cabello_quantum,
    optimize_hardy_quantum,
)

SIG_DIGITS = 12


class ReportedFailure(Exception):
    """A report that should still be printed, but with exit status 3."""

    def __init__(self, result: dict, message: str):
        super().__init__(message)
        self.result = result


def _clean(obj: Any) -> Any:
    """JSON-ready copy with floats rounded to 12 significant digits."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(f"{float(obj):.{SIG_DIGITS}g}")
        return 0.0 if x == 0 else x
    return obj


def dumps(report: dict) -> str:
    return json.dumps(_clean(report), indent=2, sort_keys=True) + "\n"


def _flatten(obj: Any, prefix: str = "") -> list[tuple[str, Any]]:
    if isinstance(obj, dict):
        rows = []
        for k in sorted(obj):
            rows += _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
        return rows
    if isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        rows = []
        for i, v in enumerate(obj):
            rows += _flatten(v, f"{prefix}[{i}]")
        return rows
    return [(prefix, obj)]


def _box_report(B) -> dict:
    return {"name": B.name, "table": B.table}


# subcommand handlers: each returns (inputs, result)


def cmd_vertices(args):
    face = set(hardy_face_vertices())
    cab = set(cabello_vertex_set())
    rows = [
        {"id": str(v), "table": B.table, "hardy_face": v in face, "cabello_set": v in cab}
        for v, B in enumerate_vertices()
    ]
    return {}, {"count": len(rows), "vertices": rows}


def cmd_validate(args):
    B = resolve_box(args.box)
    cert = validate(B, args.eps)
    result = {"certificate": cert.as_dict(), "certified": cert.ok(args.eps), "box": _box_report(B)}
    if not result["certified"]:
        raise ReportedFailure(result, "ValidationError: behavior is not a no-signalling box")
    return {"box": args.box, "eps": args.eps}, result


def _support(text: str) -> list[VertexId]:
    if text == "all":
        return all_vertex_ids()
    if text == "hardy":
        return hardy_face_vertices()
    if text == "cabello":
        return cabello_vertex_set()
    return [VertexId.parse(s.strip()) for s in text.split(",")]


def cmd_decompose(args):
    B = resolve_box(args.box)
    d = decompose(B, _support(args.support), args.eps)
    resid = float(np.max(np.abs(d.behavior().table - B.table)))
    return {"box": args.box, "support": args.support}, {"weights": d.to_json(), "max_residual": resid}


def cmd_check(args):
    B = resolve_box(args.box)
    cert = hardy_check(B, args.eps)
    result = {
        "certificate": cert.as_dict(),
        "hardy_success": hardy_success(B),
        "cabello_success": cabello_success(B),
        "no_signalling": validate(B).ok(args.eps),
    }
    return {"box": args.box, "eps": args.eps}, result


def cmd_chsh(args):
    B = resolve_box(args.box)
    E = {f"E{X}{Y}": correlator(B, X, Y) for X in (0, 1) for Y in (0, 1)}
    return {"box": args.box}, {"chsh": chsh_value(B), "correlators": E}


def cmd_ic_stats(args):
    B = resolve_box(args.box)
    return {"box": args.box}, {**ic_stats(B).as_dict(), "violates_ic_sufficient": violates_ic_sufficient(B)}


def _bound_report(res) -> dict:
    W = res.witness()
    return {
        "value": res.value,
        "witness": {k: v for k, v in res.witness_weights.to_json().items() if v != 0.0},
        "witness_table": W.table,
        "witness_Q": ic_stats(W).Q,
        "saturates_ic": res.saturates_ic,
        "details": res.details,
    }


def cmd_hardy_max(args):
    res = max_hardy_under_ic() if args.constraint == "ic" else max_hardy_under_ns()
    return {"constraint": args.constraint}, _bound_report(res)


def cmd_cabello_max(args):
    res = max_cabello_under_ic(seed=args.seed) if args.constraint == "ic" else max_cabello_under_ns()
    return {"constraint": args.constraint, "seed": args.seed}, _bound_report(res)


def cmd_chsh_max(args):
    radius = 1.0 if args.constraint == "ic" else math.sqrt(2.0)
    value, (E1, E2) = max_chsh_under_ic(radius)
    return {"constraint": args.constraint}, {"value": value, "E1": E1, "E2": E2}


def cmd_quantum_max(args):
    cfg = OptimizerConfig(starts=args.starts, seed=args.seed, full_bloch=args.full_bloch)
    if args.argument == "hardy":
        opt = optimize_hardy_quantum(cfg)
        oracle_value, _ = grid_search_hardy()
    else:
        opt = optimize_cabello_quantum(cfg)
        oracle_value, _ = grid_search_cabello()
    S = opt.scenario
    result = {
        "value": opt.value,
        "oracle_value": oracle_value,
        "schmidt_alpha": float(opt.params[0]),
        "angles": S.to_json(),
        "residuals": opt.residuals,
        "feasible_starts": opt.feasible_starts,
        "start_index": opt.start_index,
        "behavior": opt.behavior().table,
    }
    inputs = {"argument": args.argument, "starts": args.starts, "seed": args.seed, "full_bloch": args.full_bloch}
    return inputs, result


def _game_rows(E1, E2, res) -> list[dict]:
    return [
        {"E1": E1, "E2": E2, "K": K, "success": s, "info_bits": i, "total_I": res.total_I}
        for K, (s, i) in enumerate(zip(res.per_index_success, res.per_index_information))
    ]


def cmd_game(args):
    B = resolve_box(args.box)
    if args.mc is not None:
        cfg = GameConfig(args.levels, B, mode="monte_carlo", samples=args.mc, seed=args.seed)
    else:
        cfg = GameConfig(args.levels, B)
    res = play(cfg)
    st = ic_stats(B)
    inputs = {"box": args.box, "levels": args.levels, "mode": cfg.mode, "samples": args.mc, "seed": args.seed}
    result = {
        "total_I": res.total_I,
        "m": res.m,
        "violates_ic": res.violates_ic,
        "per_index_success": res.per_index_success,
        "per_index_information": res.per_index_information,
        "E1": st.E1,
        "E2": st.E2,
        "Q": st.Q,
        "rows": _game_rows(st.E1, st.E2, res),
    }
    return inputs, result


def cmd_sweep(args):
    points = sweep_E_plane(args.grid, args.levels)
    rows = []
    for pt in points:
        rows += _game_rows(pt.E1, pt.E2, pt.result)
    grid = [{"E1": p.E1, "E2": p.E2, "total_I": p.total_I} for p in points]
    return {"levels": args.levels, "grid": args.grid}, {"points": grid, "rows": rows}


CSV_COLUMNS = ["E1", "E2", "K", "success", "info_bits", "total_I"]


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return dumps(report)
    clean = _clean(report)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        rows = clean["result"].get("rows") if isinstance(clean.get("result"), dict) else None
        if rows is not None:
            w.writerow(CSV_COLUMNS)
            for r in rows:
                w.writerow([r[c] for c in CSV_COLUMNS])
        else:
            w.writerow(["key", "value"])
            for k, v in _flatten(clean):
                w.writerow([k, json.dumps(v)])
        return buf.getvalue()
    return "".join(f"{k} = {json.dumps(v)}\n" for k, v in _flatten(clean))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")

    parser = argparse.ArgumentParser(prog="hardyic", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=func)
        return p

    def box_arg(p):
        p.add_argument("--box", required=True, help="pr, white, hardy-witness, local:abgd, nonlocal:abg, or a JSON file")

    add("vertices", cmd_vertices, "list the 24 polytope vertices")
    p = add("validate", cmd_validate, "no-signalling certificate of a box")
    box_arg(p)
    p.add_argument("--eps", type=float, default=EPS)
    p = add("decompose", cmd_decompose, "convex decomposition over polytope vertices")
    box_arg(p)
    p.add_argument("--support", default="all", help="all, hardy, cabello, or comma-separated vertex ids")
    p.add_argument("--eps", type=float, default=EPS)
    p = add("check", cmd_check, "Hardy/Cabello certificate")
    box_arg(p)
    p.add_argument("--eps", type=float, default=EPS)
    box_arg(add("chsh", cmd_chsh, "CHSH value and correlators"))
    box_arg(add("ic-stats", cmd_ic_stats, "P1, P2, E1, E2, Q and the IC violation flag"))
    for name, func in (("hardy-max", cmd_hardy_max), ("cabello-max", cmd_cabello_max), ("chsh-max", cmd_chsh_max)):
        p = add(name, func, f"{name.split('-')[0]} maximum under a constraint")
        p.add_argument("--constraint", choices=["ns", "ic"], default="ic")
        if name == "cabello-max":
            p.add_argument("--seed", type=int, default=0, help="seed for the numeric cross-check")
    p = add("quantum-max", cmd_quantum_max, "two-qubit numerical maximum")
    p.add_argument("argument", choices=["hardy", "cabello"])
    p.add_argument("--starts", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--full-bloch", action="store_true")
    p = add("game", cmd_game, "simulate the IC game")
    box_arg(p)
    p.add_argument("--levels", type=int, default=1)
    p.add_argument("--mc", type=int, default=None, metavar="SAMPLES", help="Monte Carlo instead of exact")
    p.add_argument("--seed", type=int, default=0)
    p = add("sweep", cmd_sweep, "game value over a grid of (E1, E2)")
    p.add_argument("--levels", type=int, default=1)
    p.add_argument("--grid", type=int, default=5)
    return parser


def _inputs(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("func", "format", "command")}


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    report = {"command": args.command, "version": __version__}
    status = 0
    try:
        inputs, result = args.func(args)
    except ReportedFailure as exc:
        inputs, result, status = _inputs(args), exc.result, 3
        result = {**result, "error": {"type": "ValidationError", "message": str(exc)}}
        print(str(exc), file=sys.stderr)
    except HardyICError as exc:
        inputs, status = _inputs(args), 3
        result = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
    report["inputs"] = inputs
    report["result"] = result
    out.write(_render(report, args.format))
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
