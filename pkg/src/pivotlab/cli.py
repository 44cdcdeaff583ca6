"""Command-line interface: ``pivotlab {generate,solve,bench,verify,export-samples}``.

Exit status is 0 on success and 2 when any benchmark cell, solve or check is
flagged (non-optimal, limit hit, failed verification).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import graph_export, instances
from .bench import emit_tables, run_benchmark
from .lp_model import GeneralLP, LPFormatError, read_instance_json, reformulate, write_instance_json
from .mps import read_mps_file
from .oracle import acquire_oracle, check_monotone, cube_brute_force, oracle_from_outcome
from .rules import RULES
from .simplex import SolverConfig, SolveStatus, make_state, solve, solve_with_basis

EXIT_OK, EXIT_FLAGGED = 0, 2

SIZED = {"km_dantzig": "n", "avis_chvatal": "n", "cube": "n"}


def _parse_params(items: Sequence[str]) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"--param expects key=value, got {item!r}")
        out[key] = json.loads(val)
    return out


def _specs(args) -> list[instances.GenSpec]:
    params = _parse_params(args.param)
    if args.n is not None:
        params[SIZED.get(args.family, "n")] = args.n
    return [instances.GenSpec(args.family, dict(params), args.seed + k) for k in range(args.count)]


def _config(args) -> SolverConfig:
    return SolverConfig(max_iters=args.max_iters, time_limit_s=args.time_limit, seed=args.seed)


def _load(path: str) -> GeneralLP:
    p = Path(path)
    if p.suffix.lower() in (".mps", ".free", ".fixed"):
        return read_mps_file(p)
    return read_instance_json(p)


def _instance_paths(items: Sequence[str]) -> list[Path]:
    """Files as given; directories expand to their instance files.  Manifests are skipped."""
    paths: list[Path] = []
    for item in items:
        p = Path(item)
        found = sorted(q for q in p.iterdir() if q.suffix.lower() in (".json", ".mps")) if p.is_dir() else [p]
        paths += [q for q in found if q.name != "manifest.json" and not q.name.endswith(".manifest.json")]
    return paths


def _instance_set(args) -> list[tuple[str, GeneralLP]]:
    if args.instances:
        return [(p.stem, _load(str(p))) for p in _instance_paths(args.instances)]
    return [(f"{s.family}_{s.seed}", instances.generate(s)) for s in _specs(args)]


def cmd_generate(args) -> int:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    manifest = []
    for spec in _specs(args):
        name = f"{spec.family}_{spec.seed}.json"
        write_instance_json(instances.generate(spec), out / name)
        manifest.append(instances.manifest_entry(spec, name))
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"wrote {len(manifest)} instances to {out}")
    return EXIT_OK


def cmd_solve(args) -> int:
    glp = _load(args.file)
    lp = reformulate(glp)
    config = _config(args)
    oracle = None
    if RULES[args.rule].needs_oracle:
        oracle = acquire_oracle(lp, config).sta_star
    if args.basis:
        basis = [int(t) for t in args.basis.split(",")]
        out = solve_with_basis(lp, make_state(lp, basis, config=config), args.rule, config, oracle=oracle)
    else:
        out = solve(lp, args.rule, config, oracle=oracle)
    summary = out.summary()
    summary["objective_with_offset"] = out.objective + lp.obj_offset if np.isfinite(out.objective) else None
    text = json.dumps(summary, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    if args.trace:
        Path(args.trace).write_text(out.trace.to_csv())
    return EXIT_OK if out.status is SolveStatus.OPTIMAL else EXIT_FLAGGED


def cmd_bench(args) -> int:
    rules = [r.strip() for r in args.rule.split(",")] if args.rule else list(RULES)
    result = run_benchmark(_instance_set(args), rules, _config(args), workers=args.workers)
    files = emit_tables(result, args.format)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            (out / name).write_text(text)
    for name, text in files.items():
        print(f"== {name}")
        print(text, end="")
    return EXIT_FLAGGED if result.any_flagged else EXIT_OK


def _verify_km(n_max: int, config: SolverConfig) -> dict[str, Any]:
    rows = []
    for n in range(1, n_max + 1):
        glp, start = instances.gen_km_dantzig(n)
        lp = reformulate(glp)
        d = solve_with_basis(lp, make_state(lp, start), "dantzig", config)
        oracle = oracle_from_outcome(solve_with_basis(lp, make_state(lp, start), "se", config)).sta_star
        experts = {}
        for r in ("exp", "exp2", "nolocal"):
            o = solve_with_basis(lp, make_state(lp, start), r, config, oracle=oracle)
            rep = check_monotone(o.trace, oracle)
            experts[r] = {"pivots": o.phase2_pivots, "deltas": rep.deltas,
                          "ok": o.phase2_pivots <= n and rep.all_minus_two}
        rows.append({"n": n, "dantzig_pivots": d.phase2_pivots, "dantzig_ok": d.phase2_pivots == 2**n - 1,
                     "experts": experts})
    ok = all(r["dantzig_ok"] and all(e["ok"] for e in r["experts"].values()) for r in rows)
    return {"check": "km", "passed": ok, "rows": rows}


def cmd_verify(args) -> int:
    config = _config(args)
    reports = []
    if args.family in (None, "cube"):
        for n in range(1, min(args.n or 6, 6) + 1):
            rep = cube_brute_force(n)
            reports.append({"check": "cube", "n": n, "passed": rep.passed, "checks": rep.checks})
    if args.family in (None, "km_dantzig"):
        reports.append(_verify_km(args.n or 10, config))
    if not reports:
        print(f"no verification defined for family {args.family!r}", file=sys.stderr)
        return EXIT_FLAGGED
    text = json.dumps(reports, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return EXIT_OK if all(r["passed"] for r in reports) else EXIT_FLAGGED


def cmd_export(args) -> int:
    samples = graph_export.collect_samples(_instance_set(args), args.rule, _config(args), args.cap)
    if args.out:
        with open(args.out, "w") as fh:
            count = graph_export.write_jsonl(samples, fh)
        manifest = {"samples": args.out, "count": count, "rule": args.rule, "cap": args.cap,
                    "instances": [instances.manifest_entry(s, f"{s.family}_{s.seed}") for s in _specs(args)]
                    if not args.instances else list(args.instances)}
        Path(args.out + ".manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
        print(f"wrote {count} samples to {args.out}")
    else:
        graph_export.write_jsonl(samples, sys.stdout)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pivotlab", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, family_required=False):
        sp.add_argument("--family", choices=sorted(instances.FAMILIES), required=family_required)
        sp.add_argument("--n", type=int, help="size parameter for km_dantzig, avis_chvatal and cube")
        sp.add_argument("--param", action="append", default=[], metavar="KEY=JSON",
                        help="extra generator parameter, e.g. rows=100")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--count", type=int, default=1)
        sp.add_argument("--max-iters", type=int, default=SolverConfig.max_iters)
        sp.add_argument("--time-limit", type=float, default=SolverConfig.time_limit_s)
        sp.add_argument("--out")

    g = sub.add_parser("generate", help="write generated instances as JSON plus a manifest")
    common(g, family_required=True)
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="solve one instance file (.json or .mps)")
    s.add_argument("file")
    s.add_argument("--rule", choices=list(RULES), default="se")
    s.add_argument("--basis", help="comma-separated start basis columns; skips Phase I")
    s.add_argument("--trace", help="write the per-pivot trace CSV here")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-iters", type=int, default=SolverConfig.max_iters)
    s.add_argument("--time-limit", type=float, default=SolverConfig.time_limit_s)
    s.add_argument("--out", help="write the JSON summary here")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="run a rule x instance grid")
    common(b)
    b.add_argument("--rule", help="comma-separated rules (default: all)")
    b.add_argument("--instances", nargs="*", help="instance files or directories instead of a generated family")
    b.add_argument("--format", choices=("csv", "md"), default="csv")
    b.add_argument("--workers", type=int, default=1)
    b.set_defaults(func=cmd_bench)

    v = sub.add_parser("verify", help="cube identities and Klee-Minty path lengths")
    common(v)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("export-samples", help="write per-pivot graph samples as JSON Lines")
    common(e)
    e.add_argument("--rule", choices=list(RULES), default="exp")
    e.add_argument("--cap", type=int, default=50, help="samples per instance")
    e.add_argument("--instances", nargs="*")
    e.set_defaults(func=cmd_export)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    if args.command in ("bench", "export-samples") and not args.instances and not args.family:
        build_parser().error(f"{args.command} needs --family or --instances")
    try:
        return args.func(args)
    except (LPFormatError, OSError, ValueError) as e:
        print(f"pivotlab: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
