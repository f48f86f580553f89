"""Command-line interface: generate, inject, cluster, evaluate, bench, analyze.

Exit codes: 0 success, 1 runtime or I/O failure, 2 usage or validation error.
Relative output paths resolve under the directory named by the SIGBENCH_OUT
environment variable when it is set; input dataset paths are taken as given.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
import time
from pathlib import Path

from . import __version__
from .bench import (
    PAPER_GRID,
    SweepSpec,
    aggregate_by_parameter,
    enumerate_grid,
    extract_poor_combinations,
    load_records,
    run_sweep,
    timing_summary,
    write_parameter_csv,
    write_poor_csv,
    write_timing_csv,
)
from .dbscan import DbscanConfig, dbscan, suggest_config
from .encoding import encode
from .errors import (
    DatasetFormatError,
    InvalidParameterError,
    ResultsFileError,
    SweepSpecError,
)
from .generator import GenerationParams, generate_dataset, inject_signatures
from .io import read_dataset, read_header, write_dataset
from .metrics import adjusted_rand_index, pair_counts, rand_index

# (flag, params field, Table-2 default = grid minimum, help range text)
_PARAM_FLAGS = (
    ("--signatures", "num_signatures", 10, "number of planted signatures (grid 10-40)"),
    ("--events-per-signature", "events_per_signature", 10,
     "events in each signature (grid 10-40)"),
    ("--objects-per-event", "objects_per_event", 5, "objects per event (grid 5-15)"),
    ("--similarity", "similarity_pct", 20,
     "percent of each signature event's objects common to the whole signature (grid 20-80)"),
    ("--total-events", "total_events", 10000, "total events in the log (grid 10000-40000)"),
    ("--unique-objects", "num_unique_objects", 100,
     "size of the object universe (grid 100-400)"),
    ("--repetitions", "repetitions", 1, "times each signature is repeated (grid 1-4)"),
)


def _out_path(raw: str) -> Path:
    path = Path(raw)
    base = os.environ.get("SIGBENCH_OUT")
    if base and not path.is_absolute():
        return Path(base) / path
    return path


def _add_param_flags(parser: argparse.ArgumentParser, skip: tuple[str, ...] = ()) -> None:
    for flag, dest, default, help_text in _PARAM_FLAGS:
        if dest in skip:
            continue
        parser.add_argument(
            flag, dest=dest, type=int, default=default,
            help=f"{help_text} (default: {default})",
        )
    parser.add_argument("--seed", type=int, default=0, help="RNG seed (default: 0)")


def _params_from(args: argparse.Namespace, **overrides) -> GenerationParams:
    fields = {dest: getattr(args, dest) for _, dest, _, _ in _PARAM_FLAGS if dest not in overrides}
    return GenerationParams(seed=args.seed, **fields, **overrides)


def cmd_generate(args: argparse.Namespace) -> int:
    params = _params_from(args)
    t0 = time.perf_counter()
    dataset, truth = generate_dataset(params)
    out = _out_path(args.output)
    write_dataset(dataset, truth, out, params=params, strip_labels=args.strip_labels)
    elapsed_ms = (time.perf_counter() - t0) * 1000.0
    print(
        f"wrote {out}: events={len(dataset)} signatures={truth.signature_count} "
        f"noise={truth.noise_count} elapsed_ms={elapsed_ms:.0f}"
    )
    return 0


def cmd_inject(args: argparse.Namespace) -> int:
    base, _ = read_dataset(args.dataset)
    t0 = time.perf_counter()
    injected = (
        args.num_signatures * args.events_per_signature * args.repetitions
    )
    params = _params_from(
        args,
        total_events=len(base) + injected,
        num_unique_objects=len(base.object_universe),
    )
    dataset, truth = inject_signatures(base, params)
    out = _out_path(args.output)
    write_dataset(dataset, truth, out, strip_labels=args.strip_labels)
    elapsed_ms = (time.perf_counter() - t0) * 1000.0
    print(
        f"wrote {out}: events={len(dataset)} signatures={truth.signature_count} "
        f"injected={injected} noise={truth.noise_count} elapsed_ms={elapsed_ms:.0f}"
    )
    return 0


def _resolve_config(args: argparse.Namespace, encoded, params_hint) -> DbscanConfig:
    if args.auto:
        return suggest_config(encoded, params_hint=params_hint)
    if args.eps is None or args.min_samples is None:
        raise InvalidParameterError("give both --eps and --min-samples, or use --auto")
    return DbscanConfig(eps=args.eps, min_samples=args.min_samples)


def cmd_cluster(args: argparse.Namespace) -> int:
    dataset, truth = read_dataset(args.dataset)
    header = read_header(args.dataset)
    hint = GenerationParams(**header["params"]) if header.get("params") else None
    encoded = encode(dataset, include_type_id=args.include_type_id)
    config = _resolve_config(args, encoded, hint)
    result = dbscan(encoded, config)
    out = _out_path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("".join(f"{label}\n" for label in result.labels), encoding="utf-8")
    print(
        f"wrote {out}: clusters={result.cluster_count} noise={result.noise_count} "
        f"eps={config.eps:.6g} min_samples={config.min_samples}"
    )
    if truth is not None:
        counts = pair_counts(truth, result.labels, noise_as_cluster=args.noise_as_cluster)
        ari = adjusted_rand_index(truth, result.labels, noise_as_cluster=args.noise_as_cluster)
        print(f"ari={ari:.6f} ri={rand_index(counts):.6f}")
    else:
        print("no ground truth in dataset; metrics omitted")
    return 0


def _read_labels(path: str | Path) -> tuple[int, ...]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    try:
        return tuple(int(line) for line in lines if line.strip())
    except ValueError as exc:
        raise DatasetFormatError(f"labels file {path}: {exc}") from exc


def cmd_evaluate(args: argparse.Namespace) -> int:
    dataset, truth = read_dataset(args.dataset)
    if truth is None:
        raise DatasetFormatError(f"{args.dataset} carries no ground truth to evaluate against")
    labels = _read_labels(args.labels)
    if len(labels) != len(dataset):
        raise DatasetFormatError(
            f"labels file has {len(labels)} labels for {len(dataset)} events"
        )
    counts = pair_counts(truth, labels, noise_as_cluster=args.noise_as_cluster)
    ari = adjusted_rand_index(truth, labels, noise_as_cluster=args.noise_as_cluster)
    print(f"ari={ari:.6f} ri={rand_index(counts):.6f}")
    return 0


def _bench_spec(args: argparse.Namespace) -> SweepSpec:
    if args.paper_grid == (args.spec is not None):
        raise SweepSpecError("give exactly one of --paper-grid or --spec FILE")
    spec = PAPER_GRID if args.paper_grid else SweepSpec.from_file(args.spec)
    if args.eps is not None or args.min_samples is not None:
        if args.eps is None or args.min_samples is None:
            raise SweepSpecError("give both --eps and --min-samples for a fixed config")
        spec = dataclasses.replace(
            spec, config=DbscanConfig(eps=args.eps, min_samples=args.min_samples)
        )
    return spec


def cmd_bench(args: argparse.Namespace) -> int:
    spec = _bench_spec(args)
    if args.dry_run:
        feasible = len(enumerate_grid(spec))
        total = spec.cell_count
        print(f"{total} planned cells ({feasible} feasible, {total - feasible} infeasible)")
        return 0
    results = _out_path(args.results)

    def progress(done: int, total: int) -> None:
        if done == total or done % 25 == 0:
            sys.stderr.write(f"\r{done}/{total} cells")
            sys.stderr.flush()
            if done == total:
                sys.stderr.write("\n")

    records = run_sweep(spec, results, workers=args.workers, progress=progress)
    ok = sum(1 for r in records if r.status == "ok")
    failed = sum(1 for r in records if r.status == "failed")
    skipped = len(records) - ok - failed
    print(f"wrote {results}: {ok} ok, {skipped} skipped, {failed} failed")
    return 1 if failed else 0


def cmd_analyze(args: argparse.Namespace) -> int:
    records = load_records(_out_path(args.results))
    out_dir = _out_path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    params_csv = write_parameter_csv(aggregate_by_parameter(records), out_dir / "ari_by_parameter.csv")
    groups = extract_poor_combinations(records, threshold=args.poor_threshold)
    poor_csv = write_poor_csv(groups, out_dir / "poor_groups.csv")
    timing_csv = write_timing_csv(timing_summary(records), out_dir / "generation_timing.csv")
    ok = [r for r in records if r.status == "ok"]
    below = sum(1 for r in ok if r.ari < args.poor_threshold)
    print(f"wrote {params_csv}, {poor_csv}, {timing_csv}")
    print(
        f"{len(ok)} cells scored; {below} below ARI {args.poor_threshold:g} "
        f"({below / len(ok):.1%}) in {len(groups)} parameter groups"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sigbench",
        description="Synthetic event-log generation and signature-clustering benchmark.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a synthetic dataset with ground truth")
    _add_param_flags(p)
    p.add_argument("output", help="dataset file to write")
    p.add_argument("--strip-labels", action="store_true",
                   help="omit ground-truth labels from the file")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("inject", help="inject signatures into an existing dataset")
    p.add_argument("dataset", help="base dataset file (its events become noise)")
    p.add_argument("output", help="dataset file to write")
    _add_param_flags(p, skip=("total_events", "num_unique_objects"))
    p.add_argument("--strip-labels", action="store_true",
                   help="omit ground-truth labels from the file")
    p.set_defaults(func=cmd_inject)

    p = sub.add_parser("cluster", help="cluster a dataset and write predicted labels")
    p.add_argument("dataset", help="dataset file to cluster")
    p.add_argument("output", help="labels file to write (one label per line)")
    p.add_argument("--eps", type=float, default=None,
                   help="neighborhood radius in (0, 1]")
    p.add_argument("--min-samples", type=int, default=None,
                   help="points (self included) required for a core point")
    p.add_argument("--auto", action="store_true",
                   help="derive eps and min_samples from the data instead")
    p.add_argument("--include-type-id", action="store_true",
                   help="add event type as an extra feature dimension")
    p.add_argument("--noise-as-cluster", action=argparse.BooleanOptionalAction, default=True,
                   help="score noise as one cluster rather than singletons")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("evaluate", help="score a labels file against a dataset's ground truth")
    p.add_argument("dataset", help="dataset file with ground truth")
    p.add_argument("labels", help="labels file (one label per line)")
    p.add_argument("--noise-as-cluster", action=argparse.BooleanOptionalAction, default=True,
                   help="score noise as one cluster rather than singletons")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bench", help="run a parameter sweep, one scored record per cell")
    p.add_argument("--paper-grid", action="store_true",
                   help="use the full published 12,288-cell grid")
    p.add_argument("--spec", default=None, help="sweep spec JSON file")
    p.add_argument("--results", default="results.jsonl",
                   help="results file; an existing one resumes the sweep")
    p.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    p.add_argument("--eps", type=float, default=None,
                   help="fixed eps for every cell (with --min-samples)")
    p.add_argument("--min-samples", type=int, default=None,
                   help="fixed min_samples for every cell (with --eps)")
    p.add_argument("--dry-run", action="store_true",
                   help="print the planned cell count and exit")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("analyze", help="aggregate a results file into CSV tables")
    p.add_argument("--results", default="results.jsonl", help="results file to read")
    p.add_argument("--out-dir", default=".", help="directory for the CSV outputs")
    p.add_argument("--poor-threshold", type=float, default=0.95,
                   help="ARI below this counts as a poor cell")
    p.set_defaults(func=cmd_analyze)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InvalidParameterError, SweepSpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DatasetFormatError, ResultsFileError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 130


if __name__ == "__main__":
    sys.exit(main())
