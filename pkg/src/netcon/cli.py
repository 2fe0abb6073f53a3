"""Command line front end: generate, solve, oracle, bench, and report."""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .graph import GraphError
from .instances import (
    FAMILIES,
    GeneratorSpec,
    InstanceFormatError,
    generate,
    instance_to_dict,
    read_instance,
    write_instance,
)
from .local_search import mst_heuristic, mst_loc
from .metaheuristics import ILS, TS, SearchConfig, default_config, run
from .model import (
    IT_VARIANTS,
    VARIANTS,
    ModelError,
    UndefinedGapError,
    format_gap,
    gap,
)
from .neighborhoods import NET, SCH
from .tree_solvers import SizeGuardError, brute_force_instance

ALGORITHMS = (
    "mst",
    "mst-loc-net",
    "mst-loc-sch",
    "ils-net",
    "ils-sch",
    "ts-net",
    "ts-sch",
    "oracle",
)

CSV_COLUMNS = (
    "instance",
    "variant",
    "family",
    "n",
    "algorithm",
    "seed",
    "objective",
    "wall_ms",
    "params",
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3


@dataclass(frozen=True)
class RunRecord:
    instance: str
    variant: str
    family: str
    n: int
    algorithm: str
    seed: int
    objective: int | None
    wall_ms: int
    params: dict

    def csv_row(self) -> dict:
        row = {
            "instance": self.instance,
            "variant": self.variant,
            "family": self.family,
            "n": self.n,
            "algorithm": self.algorithm,
            "seed": self.seed,
            "objective": "" if self.objective is None else self.objective,
            "wall_ms": self.wall_ms,
            "params": json.dumps(self.params, sort_keys=True),
        }
        return row


def _run_algorithm(inst, algorithm: str, time_limit: float, seed: int, max_iters):
    """Returns (objective, solution-or-None, params dict)."""
    if algorithm == "mst":
        sol = mst_heuristic(inst)
        return sol.objective, sol, {}
    if algorithm in ("mst-loc-net", "mst-loc-sch"):
        kind = NET if algorithm.endswith("net") else SCH
        sol = mst_loc(inst, kind)
        return sol.objective, sol, {"kind": kind}
    if algorithm == "oracle":
        obj, sched = brute_force_instance(inst)
        from .solution import Solution

        sol = Solution(sched.tree, sched, obj)
        return obj, sol, {}
    meta, kind = algorithm.split("-")
    cfg = default_config(
        inst.variant,
        ILS if meta == "ils" else TS,
        kind.upper(),
        time_limit=time_limit,
        seed=seed,
        max_iters=max_iters,
    )
    sol = run(inst, cfg)
    params: dict = {"time_limit": cfg.time_limit}
    if cfg.algorithm == ILS:
        params["shake_p"] = cfg.shake_p
        params["accept"] = cfg.accept
    else:
        params["tenure_min"] = cfg.tenure_min
        params["tenure_max"] = cfg.tenure_max
    if cfg.max_iters is not None:
        params["max_iters"] = cfg.max_iters
    return sol.objective, sol, params


def _solve_one(path: str, algorithm: str, time_limit: float, seed: int, max_iters) -> RunRecord:
    inst = read_instance(path)
    family = _read_family(path)
    start = time.monotonic()
    objective, _, params = _run_algorithm(inst, algorithm, time_limit, seed, max_iters)
    wall_ms = int((time.monotonic() - start) * 1000)
    return RunRecord(
        instance=str(path),
        variant=inst.variant,
        family=family,
        n=inst.net.n,
        algorithm=algorithm,
        seed=seed,
        objective=objective,
        wall_ms=wall_ms,
        params=params,
    )


def _read_family(path) -> str:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return doc.get("family", "")


def cmd_generate(args) -> int:
    spec = GeneratorSpec(
        family=args.family, n=args.n, seed=args.seed, variant=args.variant
    )
    inst = generate(spec)
    if args.output:
        write_instance(inst, args.output, family=args.family)
        print(args.output)
    else:
        print(json.dumps(instance_to_dict(inst, args.family), sort_keys=True, indent=2))
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = read_instance(args.instance)
    start = time.monotonic()
    objective, sol, params = _run_algorithm(
        inst, args.algo, args.time_limit, args.seed, args.max_iters
    )
    wall_ms = int((time.monotonic() - start) * 1000)
    doc = {
        "instance": str(args.instance),
        "variant": inst.variant,
        "n": inst.net.n,
        "algorithm": args.algo,
        "seed": args.seed,
        "objective": objective,
        "order": list(sol.schedule.order),
        "tree": sorted(sol.tree.edge_ids),
        "params": params,
    }
    # timing stays off stdout so identical runs emit identical bytes
    print(json.dumps(doc, sort_keys=True))
    print(f"wall_ms={wall_ms}", file=sys.stderr)
    if args.csv:
        record = RunRecord(
            instance=str(args.instance),
            variant=inst.variant,
            family=_read_family(args.instance),
            n=inst.net.n,
            algorithm=args.algo,
            seed=args.seed,
            objective=objective,
            wall_ms=wall_ms,
            params=params,
        )
        _append_csv(args.csv, [record])
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = read_instance(args.instance)
    start = time.monotonic()
    objective, sched = brute_force_instance(inst)
    wall_ms = int((time.monotonic() - start) * 1000)
    doc = {
        "instance": str(args.instance),
        "variant": inst.variant,
        "n": inst.net.n,
        "algorithm": "oracle",
        "objective": objective,
        "order": list(sched.order),
        "tree": sorted(sched.tree.edge_ids),
    }
    print(json.dumps(doc, sort_keys=True))
    print(f"wall_ms={wall_ms}", file=sys.stderr)
    return EXIT_OK


def _append_csv(path, records):
    path = Path(path)
    new_file = not path.exists() or path.stat().st_size == 0
    with open(path, "a", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        if new_file:
            writer.writeheader()
        for rec in records:
            writer.writerow(rec.csv_row())


def cmd_bench(args) -> int:
    instances = sorted(Path(args.instances_dir).glob("*.json"))
    if not instances:
        raise InstanceFormatError(args.instances_dir, "no *.json instances found")
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    for a in algos:
        if a not in ALGORITHMS:
            raise InstanceFormatError("algos", f"unknown algorithm {a!r}")
    seeds = [int(s) for s in args.seeds.split(",") if s.strip()]
    tasks = [
        (str(path), algo, args.time_limit, seed, args.max_iters)
        for path in instances
        for algo in algos
        for seed in seeds
    ]
    if args.jobs == 1:
        records = [_solve_one(*t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(_solve_one_star, tasks))
    records.sort(key=lambda r: (r.instance, r.algorithm, r.seed))
    _append_csv(args.out, records)
    print(args.out)
    return EXIT_OK


def _solve_one_star(task):
    return _solve_one(*task)


def cmd_report(args) -> int:
    rows = _read_results(args.results)
    if args.best:
        rows += _read_results(args.best)
    # best value per instance over everything supplied
    best: dict[str, int] = {}
    missing = []
    by_instance: dict[str, list[dict]] = {}
    for row in rows:
        by_instance.setdefault(row["instance"], []).append(row)
    for name, group in sorted(by_instance.items()):
        objectives = [r["objective"] for r in group if r["objective"] is not None]
        if not objectives:
            missing.append(name)
        else:
            best[name] = min(objectives)
    if missing:
        raise InstanceFormatError(
            "results", "no completed run for instances: " + ", ".join(missing)
        )
    d_min_cache: dict[str, int] = {}

    def d_min_of(row) -> int:
        name = row["instance"]
        if name not in d_min_cache:
            d_min_cache[name] = read_instance(name).d_min()
        return d_min_cache[name]

    groups: dict[tuple, dict[str, list]] = {}
    for row in rows:
        if row["objective"] is None:
            continue
        key = (row["variant"], row["family"], row["n"])
        algo_rows = groups.setdefault(key, {}).setdefault(row["algorithm"], [])
        algo_rows.append(row)
    out_rows = []
    for key in sorted(groups):
        variant, family, n = key
        for algo in sorted(groups[key]):
            algo_rows = groups[key][algo]
            gaps: list[Fraction | None] = []
            n_best = 0
            for row in algo_rows:
                b = best[row["instance"]]
                if row["objective"] == b:
                    n_best += 1
                d_min = d_min_of(row) if variant not in ("USRT", "SWRT") else 0
                try:
                    gaps.append(gap(row["objective"], b, d_min, variant))
                except UndefinedGapError:
                    gaps.append(None)
            defined = [g for g in gaps if g is not None]
            if defined and len(defined) == len(gaps):
                avg = format_gap(sum(defined) / len(defined))
                worst = format_gap(max(defined))
            elif defined:
                avg = "n/a"
                worst = format_gap(max(defined))
            else:
                avg = worst = "n/a"
            out_rows.append(
                {
                    "variant": variant,
                    "family": family,
                    "n": n,
                    "algorithm": algo,
                    "runs": len(algo_rows),
                    "num_best": n_best,
                    "avg_gap": avg,
                    "max_gap": worst,
                }
            )
    fieldnames = [
        "variant",
        "family",
        "n",
        "algorithm",
        "runs",
        "num_best",
        "avg_gap",
        "max_gap",
    ]
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(out_rows)
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def _read_results(path) -> list[dict]:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or set(CSV_COLUMNS) - set(reader.fieldnames):
            raise InstanceFormatError(str(path), "missing required CSV columns")
        for k, raw in enumerate(reader):
            try:
                rows.append(
                    {
                        "instance": raw["instance"],
                        "variant": raw["variant"],
                        "family": raw["family"],
                        "n": int(raw["n"]),
                        "algorithm": raw["algorithm"],
                        "seed": int(raw["seed"]),
                        "objective": int(raw["objective"]) if raw["objective"] else None,
                    }
                )
            except ValueError as exc:
                raise InstanceFormatError(f"{path}:{k + 2}", str(exc)) from exc
    return rows


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netcon", description="Network construction scheduling toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a benchmark instance")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--variant", required=True, choices=VARIANTS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="run one algorithm on one instance")
    p.add_argument("instance")
    p.add_argument("--algo", required=True, choices=ALGORITHMS)
    p.add_argument("--time-limit", type=float, default=600.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--csv", help="append the run record to this CSV file")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exact optimum by exhaustive search (size-guarded)")
    p.add_argument("instance")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="run an algorithm grid over an instance directory")
    p.add_argument("--instances-dir", required=True)
    p.add_argument("--algos", required=True, help="comma-separated algorithm labels")
    p.add_argument("--time-limit", type=float, default=600.0)
    p.add_argument("--seeds", default="0", help="comma-separated seeds")
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("report", help="per-group gap table from a results CSV")
    p.add_argument("--results", required=True)
    p.add_argument("--best", help="extra CSV contributing best-known values")
    p.add_argument("--out", help="write the table here instead of stdout")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InstanceFormatError, ModelError, GraphError, SizeGuardError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
