"""``natcomp`` command line.

Subcommands: list, run, compare, manifest, metadata. Errors exit 2 (usage) or
3 (runtime) with one line on stderr starting ``usage-error:`` or
``runtime-error:``.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

import natcomp
from natcomp import taxonomy
from natcomp.algorithms import ROSTER, algorithm_class, default_params, make_algorithm
from natcomp.benchmarks import BENCHMARKS, get_benchmark, random_search
from natcomp.core import InvalidArgument, fmt_float, run

OUT_ENV = "NATCOMP_OUT"
DEFAULT_OUT = "runs"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --- configuration ----------------------------------------------------------

def parse_seeds(text: str) -> list[int]:
    """``"0..30"`` is the half-open range 0-29; ``"1,2,5"`` an explicit list."""
    try:
        if ".." in text:
            lo, hi = (int(s) for s in text.split("..", 1))
            seeds = list(range(lo, hi))
        else:
            seeds = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"bad seed list {text!r}; use '0..30' or '1,2,5'") from None
    if not seeds or min(seeds) < 0:
        raise UsageError(f"seed list {text!r} is empty or negative")
    return seeds


def parse_overrides(items: list[str]) -> dict[str, str]:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise UsageError(f"--param expects key=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


@dataclass
class ExperimentConfig:
    algorithm: str
    benchmark: str
    dims: int
    budget: int
    seeds: list[int]
    overrides: dict[str, str] = field(default_factory=dict)
    out: str = DEFAULT_OUT
    format: str = "csv"

    def resolve(self):
        """Check ids and parameters before anything runs."""
        algorithm_class(self.algorithm)
        get_benchmark(self.benchmark).space(self.dims)
        if self.budget < 1:
            raise InvalidArgument("budget must be >= 1")
        return self.params()

    def params(self):
        return default_params(self.algorithm).replace(**self.overrides)

    def header(self, seed: int) -> dict:
        return {
            "algorithm": self.algorithm, "benchmark": self.benchmark, "dims": self.dims,
            "budget": self.budget, "seed": seed, "seeds": self.seeds,
            "params": dataclasses.asdict(self.params()), "version": natcomp.__version__,
        }

    def filename(self, seed: int) -> str:
        ext = "json" if self.format == "json" else "csv"
        return f"{self.algorithm}_{self.benchmark}_d{self.dims}_b{self.budget}_s{seed}.{ext}"


def run_seed(config: ExperimentConfig, seed: int):
    bench = get_benchmark(config.benchmark)
    algo = make_algorithm(config.algorithm, config.params())
    return run(algo, bench, bench.space(config.dims), config.budget, seed)


def _run_and_write(config: ExperimentConfig, seed: int) -> tuple[int, float, str]:
    trace = run_seed(config, seed)
    header = config.header(seed)
    body = trace.to_json(header) if config.format == "json" else trace.to_csv(header)
    path = Path(config.out) / config.filename(seed)
    path.write_text(body)
    return seed, trace.final_best, str(path)


def _final_best(config: ExperimentConfig, seed: int) -> float:
    return run_seed(config, seed).final_best


def _map(fn, jobs: int, tasks):
    if jobs <= 1:
        return [fn(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, *zip(*tasks)))


# --- subcommands ------------------------------------------------------------

def cmd_list(args) -> str:
    rows = []
    for a in ROSTER:
        m = taxonomy.METADATA[a]
        rows.append([a, m.citations, str(m.year), algorithm_class(a).summary])
    if args.format == "csv":
        return _csv(["acronym", "citations", "year", "summary"], rows)
    if args.format == "json":
        return json.dumps([dict(zip(["acronym", "citations", "year", "summary"], r)) for r in rows],
                          indent=2) + "\n"
    return _table(["id", "citations", "year", "summary"], rows)


def cmd_run(args) -> str:
    if len(args.algo) != 1:
        raise UsageError("run takes exactly one --algo")
    config = ExperimentConfig(args.algo[0], args.benchmark, args.dims, args.budget,
                              parse_seeds(args.seeds), parse_overrides(args.param),
                              args.out, "json" if args.format == "json" else "csv")
    config.resolve()
    Path(config.out).mkdir(parents=True, exist_ok=True)
    results = _map(_run_and_write, args.jobs, [(config, s) for s in config.seeds])
    return "".join(f"seed {s}: best {fmt_float(b)} -> {p}\n" for s, b, p in results)


def cmd_compare(args) -> str:
    if not args.algo:
        raise UsageError("compare needs at least one --algo")
    seeds = parse_seeds(args.seeds)
    overrides = parse_overrides(args.param)
    configs = [ExperimentConfig(a, args.benchmark, args.dims, args.budget, seeds, overrides)
               for a in args.algo]
    used = set()
    for c in configs:
        # shared overrides apply to the algorithms that have the parameter
        names = {f.name for f in dataclasses.fields(algorithm_class(c.algorithm).Params)}
        c.overrides = {k: v for k, v in overrides.items() if k.partition(".")[0] in names}
        used |= set(c.overrides)
        c.resolve()
    if set(overrides) - used:
        raise UsageError(f"no compared algorithm has parameter(s) {sorted(set(overrides) - used)}")
    bench = get_benchmark(args.benchmark)
    space = bench.space(args.dims)
    rows = []
    for c in configs:
        finals = _map(_final_best, args.jobs, [(c, s) for s in seeds])
        rows.append([c.algorithm, *_summary(finals)])
    oracle = [random_search(bench, space, args.budget, s).final_best for s in seeds]
    rows.append(["oracle", *_summary(oracle)])
    head = ["algorithm", "median", "iqr", "q25", "q75", "seeds"]
    table = [[r[0], *(fmt_float(x) for x in r[1:5]), str(r[5])] for r in rows]
    if args.format == "csv":
        text = _csv(head, table)
    elif args.format == "json":
        text = json.dumps({"benchmark": args.benchmark, "dims": args.dims, "budget": args.budget,
                           "seeds": seeds, "rows": [dict(zip(head, r)) for r in rows]},
                          indent=2) + "\n"
    else:
        text = _table(head, [[r[0], *(f"{x:.4g}" for x in r[1:5]), str(r[5])] for r in rows])
    if args.out_file:
        Path(args.out_file).write_text(text)
    return text


def _summary(finals) -> tuple[float, float, float, float, int]:
    q25, med, q75 = np.percentile(finals, [25, 50, 75])
    return float(med), float(q75 - q25), float(q25), float(q75), len(finals)


def cmd_manifest(args) -> str:
    target = args.target
    ids = list(ROSTER) if target == "all" else [target]
    if target != "all" and target not in taxonomy.METADATA:
        raise InvalidArgument(f"unknown algorithm {target!r}; valid ids: all, {', '.join(ROSTER)}")
    mans = [taxonomy.manifest_of(a) for a in ids]
    index = taxonomy.inverted_index() if target == "all" else {}
    if args.format == "json":
        doc = {"manifests": [{"acronym": m.algorithm, "concepts": [t.value for t in m.concepts],
                              "features": [t.value for t in m.features]} for m in mans]}
        if index:
            doc["index"] = {k: list(v) for k, v in index.items()}
        return json.dumps(doc, indent=2) + "\n"
    if args.format == "csv":
        rows = [["manifest", m.algorithm, ";".join(t.value for t in (*m.concepts, *m.features))]
                for m in mans]
        rows += [["index", tag, ",".join(members)] for tag, members in index.items()]
        return _csv(["kind", "key", "members"], rows)
    lines = []
    for m in mans:
        lines.append(f"{m.algorithm}")
        lines.append("  concepts: " + ", ".join(t.value for t in m.concepts))
        lines.append("  features: " + (", ".join(t.value for t in m.features) or "-"))
    if index:
        lines.append("")
        lines.append("tag index")
        lines.extend(f"  {tag}: {','.join(members)}" for tag, members in index.items())
    return "\n".join(lines) + "\n"


def cmd_metadata(args) -> str:
    records = taxonomy.export_metadata()
    if args.format == "json":
        return taxonomy.metadata_json(records)
    if args.format == "csv":
        return taxonomy.metadata_csv(records)
    return _table(["acronym", "name", "year", "citations", "note"],
                  [[r["acronym"], r["name"], str(r["year"]), r["citations"], r["note"]] for r in records])


# --- formatting -------------------------------------------------------------

def _csv(head, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(head)
    w.writerows(rows)
    return buf.getvalue()


def _table(head, rows) -> str:
    widths = [max(len(str(x)) for x in col) for col in zip(head, *rows)]
    fmt = lambda r: "  ".join(str(x).ljust(w) for x, w in zip(r, widths)).rstrip()
    return "\n".join([fmt(head), *(fmt(r) for r in rows)]) + "\n"


# --- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="natcomp", description="Run and compare the metaheuristic roster.")
    parser.add_argument("--version", action="version", version=natcomp.__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def fmt(p, default="text"):
        p.add_argument("--format", choices=("csv", "json", "text"), default=default)

    def experiment(p):
        p.add_argument("--algo", action="append", default=[],
                       help="algorithm id; repeat or comma-separate for several")
        p.add_argument("--benchmark", default="sphere", help=f"one of {', '.join(BENCHMARKS)}")
        p.add_argument("--dims", type=int, default=2)
        p.add_argument("--budget", type=int, default=2000, help="objective evaluations per run")
        p.add_argument("--seeds", default="0..30", help="'0..30' (half-open) or '1,2,5'")
        p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                       help="parameter override; schedules take KEY.FIELD=VALUE")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for seeds")

    fmt(sub.add_parser("list", help="roster with summaries and citation bands"))
    p = sub.add_parser("run", help="write one trace file per seed")
    experiment(p)
    p.add_argument("--out", default=os.environ.get(OUT_ENV, DEFAULT_OUT),
                   help=f"output directory (default ${OUT_ENV} or ./{DEFAULT_OUT})")
    fmt(p, "csv")
    p = sub.add_parser("compare", help="median/IQR of final best against the random-search oracle")
    experiment(p)
    p.add_argument("--out", dest="out_file", default=None, help="also write the table here")
    fmt(p)
    p = sub.add_parser("manifest", help="tags of one algorithm, or all plus the tag index")
    p.add_argument("target", help="algorithm id or 'all'")
    fmt(p)
    fmt(sub.add_parser("metadata", help="names, years and citation bands"))
    return parser


COMMANDS = {"list": cmd_list, "run": cmd_run, "compare": cmd_compare,
            "manifest": cmd_manifest, "metadata": cmd_metadata}


def main(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand; one of " + ", ".join(COMMANDS))
        if hasattr(args, "algo"):
            args.algo = [a for item in args.algo for a in item.split(",") if a]
            if args.command == "run" and not args.algo:
                raise UsageError("run needs --algo")
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be >= 1")
        stdout.write(COMMANDS[args.command](args))
        return 0
    except (UsageError, InvalidArgument) as e:
        print(f"usage-error: {_one_line(e)}", file=sys.stderr)
        return 2
    except Exception as e:  # noqa: BLE001 - any failure maps to the runtime exit code
        print(f"runtime-error: {type(e).__name__}: {_one_line(e)}", file=sys.stderr)
        return 3


def _one_line(e: Exception) -> str:
    return " ".join(str(e).split())


if __name__ == "__main__":
    sys.exit(main())
