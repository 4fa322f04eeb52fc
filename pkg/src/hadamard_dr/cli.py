"""``hadamard-dr`` command line.

Exit codes: 0 success, 1 invalid config or failed oracle comparison, 2 solver abort.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench
from .solvers import SolverAbort


def _out(text: str, path) -> None:
    if path:
        bench._atomic_write(Path(path), text)
    else:
        sys.stdout.write(text)


def cmd_run(args) -> int:
    cfg = bench.load_config(args.config)
    fmt = args.format or cfg.format
    out = args.out or cfg.out
    trace, row = bench.run_experiment(cfg)
    text = bench.render_trace(trace, fmt, cfg.resolved())
    _out(text, out)
    print(f"{row.label}: {row.iterations} iterations, E(n) = {row.stop_metric:.4e}, "
          f"{row.wall_time:.4f} s, {row.status}", file=sys.stderr)
    return 0


def cmd_validate(args) -> int:
    cfg = bench.load_config(args.config)
    print(json.dumps(cfg.resolved(), indent=1))
    print("config ok", file=sys.stderr)
    return 0


def cmd_oracle(args) -> int:
    cfg = bench.load_config(args.config)
    rep = bench.oracle_compare(cfg)
    doc = {
        "verdict": rep.verdict, "mode": rep.mode, "tolerance": rep.tolerance,
        "solver_objective": rep.solver_objective, "oracle_objective": rep.oracle_objective,
        "point_distance": rep.point_distance, "notes": rep.notes,
    }
    _out(json.dumps(doc, indent=1) + "\n", args.out)
    return 0 if rep.verdict == "pass" else 1


def cmd_reproduce(args) -> int:
    results = bench.reproduce(args.table, jobs=args.jobs)
    fmt = args.format or "text"
    if fmt == "csv":
        text = bench.summary_csv(results)
    elif fmt == "json":
        text = json.dumps([
            {"case": r.case, "label": row.label, "iterations": row.iterations, "reference": ref,
             "stop_metric": row.stop_metric, "wall_time_s": row.wall_time, "status": row.status}
            for r in results for row, ref in zip(r.rows, r.reference)], indent=1) + "\n"
    else:
        text = bench.format_summary(results) + "\n"
    _out(text, args.out)
    if args.trace_dir:
        d = Path(args.trace_dir)
        for r in results:
            for cfg, trace in zip(r.configs, r.traces):
                bench.emit_trace(trace, "csv", d / f"{r.case}_{cfg.method}.csv", cfg.resolved())
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hadamard-dr", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, config=True, formats=("csv", "json")):
        if config:
            p.add_argument("--config", required=True, help="experiment config file")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=formats)

    p = sub.add_parser("run", help="run one experiment and write its trace")
    common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("validate", help="check a config and print it resolved")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("oracle-compare", help="check the solver's solution against a reference")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("reproduce", help="rerun a published iteration-count table")
    p.add_argument("table", choices=sorted(bench.TABLES))
    common(p, config=False, formats=("text", "csv", "json"))
    p.add_argument("--jobs", type=int, default=1, help="run the methods of a case concurrently")
    p.add_argument("--trace-dir", help="also write one CSV trace per run here")
    p.set_defaults(func=cmd_reproduce)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except bench.ConfigError as exc:
        for err in exc.errors:
            print(f"error: {err}", file=sys.stderr)
        return 1
    except SolverAbort as exc:
        print(f"solver aborted: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
