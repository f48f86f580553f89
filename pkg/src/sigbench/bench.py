"""Benchmark harness: sweep a parameter grid, score every cell, aggregate.

A sweep enumerates the Cartesian product of per-parameter value lists (times
seeds), runs generate -> encode -> cluster -> score per cell, and persists one
JSON record per line. Records are appended as cells finish, so an interrupted
sweep resumes by recomputing only the missing cells (keyed by a content hash
of the cell parameters); on completion the file is rewritten in canonical
cell order, making the final bytes independent of scheduling.

Record fields, exactly: params, ari, ri, gen_time_ms, cluster_time_ms,
cluster_count, noise_count, status. Status is "ok", "skipped" (parameter
combination infeasible), or "failed" (generation or clustering raised); the
numeric fields are null unless status is "ok".
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import logging
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from pathlib import Path

from .dbscan import DbscanConfig, dbscan, suggest_config
from .encoding import encode
from .errors import InvalidParameterError, ResultsFileError, SweepSpecError
from .generator import GenerationParams, generate_dataset
from .metrics import adjusted_rand_index, pair_counts, rand_index

__all__ = [
    "SweepSpec",
    "BenchRecord",
    "PoorGroup",
    "TimingStats",
    "PAPER_GRID",
    "cell_key",
    "enumerate_grid",
    "run_cell",
    "run_sweep",
    "load_records",
    "aggregate_by_parameter",
    "extract_poor_combinations",
    "timing_summary",
    "write_parameter_csv",
    "write_poor_csv",
    "write_timing_csv",
]

log = logging.getLogger(__name__)

PARAMETER_NAMES = (
    "num_signatures",
    "events_per_signature",
    "objects_per_event",
    "similarity_pct",
    "total_events",
    "num_unique_objects",
    "repetitions",
)

# The four parameters that drive poor scores; grouping key for
# extract_poor_combinations.
GROUP_KEYS = ("num_signatures", "events_per_signature", "total_events", "repetitions")

_RECORD_FIELDS = (
    "params",
    "ari",
    "ri",
    "gen_time_ms",
    "cluster_time_ms",
    "cluster_count",
    "noise_count",
    "status",
)

_STATUSES = ("ok", "skipped", "failed")


@dataclass(frozen=True)
class SweepSpec:
    """Value lists for the seven parameters, seeds per cell, and the
    clustering config policy (a fixed DbscanConfig, or None to derive one per
    cell via suggest_config)."""

    num_signatures: tuple[int, ...]
    events_per_signature: tuple[int, ...]
    objects_per_event: tuple[int, ...]
    similarity_pct: tuple[int, ...]
    total_events: tuple[int, ...]
    num_unique_objects: tuple[int, ...]
    repetitions: tuple[int, ...]
    seeds: tuple[int, ...] = (0,)
    config: DbscanConfig | None = None

    def __post_init__(self):
        for name in PARAMETER_NAMES + ("seeds",):
            values = getattr(self, name)
            try:
                values = tuple(values)
            except TypeError:
                raise SweepSpecError(f"{name} must be a list of integers") from None
            if not values:
                raise SweepSpecError(f"{name} must not be empty")
            for v in values:
                if not isinstance(v, int) or isinstance(v, bool):
                    raise SweepSpecError(f"{name} contains a non-integer: {v!r}")
            if len(set(values)) != len(values):
                raise SweepSpecError(f"{name} contains duplicate values")
            object.__setattr__(self, name, tuple(sorted(values)))
        if self.config is not None and not isinstance(self.config, DbscanConfig):
            raise SweepSpecError("config must be a DbscanConfig or None")

    @property
    def cell_count(self) -> int:
        count = len(self.seeds)
        for name in PARAMETER_NAMES:
            count *= len(getattr(self, name))
        return count

    @classmethod
    def from_file(cls, path: str | Path) -> "SweepSpec":
        """Load a sweep spec from a JSON file.

        Keys: the seven parameter names (lists of integers), optional
        "seeds" (default [0]), optional "config" {"eps": .., "min_samples": ..}.
        """
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise SweepSpecError(f"sweep spec is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise SweepSpecError("sweep spec must be a JSON object")
        unknown = set(raw) - set(PARAMETER_NAMES) - {"seeds", "config"}
        if unknown:
            raise SweepSpecError(f"unknown sweep spec keys: {', '.join(sorted(unknown))}")
        missing = [name for name in PARAMETER_NAMES if name not in raw]
        if missing:
            raise SweepSpecError(f"sweep spec is missing {missing[0]!r}")
        config = None
        if raw.get("config") is not None:
            cfg = raw["config"]
            if not isinstance(cfg, dict) or set(cfg) != {"eps", "min_samples"}:
                raise SweepSpecError("config must hold exactly eps and min_samples")
            try:
                config = DbscanConfig(eps=cfg["eps"], min_samples=cfg["min_samples"])
            except InvalidParameterError as exc:
                raise SweepSpecError(f"invalid config: {exc}") from exc
        kwargs = {name: raw[name] for name in PARAMETER_NAMES}
        return cls(seeds=tuple(raw.get("seeds", (0,))), config=config, **kwargs)


# The full published parameter grid: 4 x 4 x 3 x 4 x 4 x 4 x 4 = 12,288 cells.
PAPER_GRID = SweepSpec(
    num_signatures=(10, 20, 30, 40),
    events_per_signature=(10, 20, 30, 40),
    objects_per_event=(5, 10, 15),
    similarity_pct=(20, 40, 60, 80),
    total_events=(10000, 20000, 30000, 40000),
    num_unique_objects=(100, 200, 300, 400),
    repetitions=(1, 2, 3, 4),
)


@dataclass(frozen=True)
class BenchRecord:
    """One sweep cell. ``params`` is a GenerationParams for ok/failed cells
    and a plain field dict for skipped (infeasible) ones."""

    params: GenerationParams | dict
    ari: float | None
    ri: float | None
    gen_time_ms: float | None
    cluster_time_ms: float | None
    cluster_count: int | None
    noise_count: int | None
    status: str

    def __post_init__(self):
        if self.status not in _STATUSES:
            raise InvalidParameterError(f"unknown record status {self.status!r}")
        if self.ari is not None and not -1.0 <= self.ari <= 1.0:
            raise InvalidParameterError(f"ari {self.ari} outside [-1, 1]")
        for name in ("gen_time_ms", "cluster_time_ms"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise InvalidParameterError(f"{name} must be non-negative")

    @property
    def params_dict(self) -> dict:
        if isinstance(self.params, GenerationParams):
            return dataclasses.asdict(self.params)
        return dict(self.params)


def cell_key(params: GenerationParams | dict) -> str:
    """Content hash identifying one cell (the seven parameters plus seed)."""
    if isinstance(params, GenerationParams):
        params = dataclasses.asdict(params)
    canonical = json.dumps(params, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _raw_cells(spec: SweepSpec):
    """All parameter combinations in lexicographic (field-order) order."""
    axes = [getattr(spec, name) for name in PARAMETER_NAMES] + [spec.seeds]
    names = PARAMETER_NAMES + ("seed",)
    for combo in product(*axes):
        yield dict(zip(names, combo))


def enumerate_grid(spec: SweepSpec) -> list[GenerationParams]:
    """Feasible cells of the sweep, in deterministic lexicographic order.

    Combinations violating the generation invariants (e.g. more objects per
    event than unique objects) are omitted here; run_sweep records them as
    skipped cells.
    """
    cells = []
    for raw in _raw_cells(spec):
        try:
            cells.append(GenerationParams(**raw))
        except InvalidParameterError:
            continue
    return cells


def run_cell(params: GenerationParams, config: DbscanConfig | None = None) -> BenchRecord:
    """Generate, encode, cluster, and score one cell.

    ``config`` None derives the clustering config per cell via suggest_config
    with the generation parameters as hint. Generation wall time and
    clustering wall time (encoding + config derivation + dbscan) are recorded
    separately. Any exception becomes a failed-cell record rather than
    propagating, so a sweep never aborts.
    """
    try:
        t0 = time.perf_counter()
        dataset, truth = generate_dataset(params)
        t1 = time.perf_counter()
        encoded = encode(dataset)
        cfg = config if config is not None else suggest_config(encoded, params_hint=params)
        result = dbscan(encoded, cfg)
        t2 = time.perf_counter()
        counts = pair_counts(truth, result.labels)
        return BenchRecord(
            params=params,
            ari=adjusted_rand_index(truth, result.labels),
            ri=rand_index(counts),
            gen_time_ms=(t1 - t0) * 1000.0,
            cluster_time_ms=(t2 - t1) * 1000.0,
            cluster_count=result.cluster_count,
            noise_count=result.noise_count,
            status="ok",
        )
    except Exception:
        log.exception("cell %s failed", cell_key(params)[:12])
        return BenchRecord(
            params=params,
            ari=None,
            ri=None,
            gen_time_ms=None,
            cluster_time_ms=None,
            cluster_count=None,
            noise_count=None,
            status="failed",
        )


def _record_to_json(record: BenchRecord) -> str:
    payload = {name: getattr(record, name) for name in _RECORD_FIELDS}
    payload["params"] = record.params_dict
    return json.dumps(payload, separators=(",", ":"))


def _record_from_json(line: str, lineno: int, path) -> BenchRecord:
    try:
        payload = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ResultsFileError(f"{path}: not valid JSON: {exc}", line=lineno) from exc
    if not isinstance(payload, dict) or set(payload) != set(_RECORD_FIELDS):
        raise ResultsFileError(
            f"{path}: record must hold exactly the fields {', '.join(_RECORD_FIELDS)}",
            line=lineno,
        )
    params = payload["params"]
    if not isinstance(params, dict):
        raise ResultsFileError(f"{path}: params must be an object", line=lineno)
    if payload["status"] != "skipped":
        try:
            params = GenerationParams(**params)
        except (TypeError, InvalidParameterError) as exc:
            raise ResultsFileError(f"{path}: bad params: {exc}", line=lineno) from exc
    try:
        return BenchRecord(
            params=params,
            ari=payload["ari"],
            ri=payload["ri"],
            gen_time_ms=payload["gen_time_ms"],
            cluster_time_ms=payload["cluster_time_ms"],
            cluster_count=payload["cluster_count"],
            noise_count=payload["noise_count"],
            status=payload["status"],
        )
    except InvalidParameterError as exc:
        raise ResultsFileError(f"{path}: {exc}", line=lineno) from exc


def load_records(path: str | Path, *, allow_partial_tail: bool = False) -> list[BenchRecord]:
    """Read a results file. Raises ResultsFileError (with line number) on
    corruption, or if the file is missing or empty.

    ``allow_partial_tail`` silently drops a final line without a trailing
    newline (an interrupted append); resume uses this.
    """
    path = Path(path)
    if not path.exists():
        raise ResultsFileError(f"results file {path} does not exist")
    text = path.read_text(encoding="utf-8")
    complete, _, partial = text.rpartition("\n")
    if partial and not allow_partial_tail:
        raise ResultsFileError(
            f"{path}: truncated final record", line=text.count("\n") + 1
        )
    records = []
    for lineno, line in enumerate(complete.splitlines(), start=1):
        if line.strip():
            records.append(_record_from_json(line, lineno, path))
    if not records:
        raise ResultsFileError(f"results file {path} is empty")
    return records


def _sort_key(record: BenchRecord):
    d = record.params_dict
    return tuple(d[name] for name in PARAMETER_NAMES) + (d["seed"],)


def _run_cell_worker(args) -> str:
    raw, config = args
    return _record_to_json(run_cell(GenerationParams(**raw), config))


def run_sweep(
    spec: SweepSpec,
    results_path: str | Path,
    *,
    workers: int = 1,
    progress=None,
) -> list[BenchRecord]:
    """Run every cell of the sweep, persisting records to ``results_path``.

    Existing records for the same cells are kept, so re-running after an
    interruption computes only the missing cells. Cells run on a worker pool
    when ``workers`` > 1; records append in completion order and the file is
    rewritten sorted by cell parameters at close, so the final bytes do not
    depend on scheduling. ``progress``, if given, is called as
    progress(done_cells, total_cells) after every cell.
    """
    if not isinstance(workers, int) or isinstance(workers, bool) or workers < 1:
        raise InvalidParameterError(f"workers must be a positive integer, got {workers!r}")
    results_path = Path(results_path)

    existing: dict[str, BenchRecord] = {}
    if results_path.exists() and results_path.stat().st_size > 0:
        for record in load_records(results_path, allow_partial_tail=True):
            existing[cell_key(record.params_dict)] = record

    planned: list[dict] = list(_raw_cells(spec))
    pending: list[dict] = []
    records: dict[str, BenchRecord] = {}
    for raw in planned:
        key = cell_key(raw)
        if key in existing:
            records[key] = existing[key]
        else:
            pending.append(raw)

    total = len(planned)
    done = total - len(pending)
    results_path.parent.mkdir(parents=True, exist_ok=True)
    with open(results_path, "a", encoding="utf-8", newline="\n") as out:
        def take(line: str) -> None:
            out.write(line + "\n")
            out.flush()
            record = _record_from_json(line, 0, results_path)
            records[cell_key(record.params_dict)] = record

        def feasible(raw: dict):
            try:
                GenerationParams(**raw)
                return True
            except InvalidParameterError:
                return False

        runnable = []
        for raw in pending:
            if feasible(raw):
                runnable.append(raw)
            else:
                skipped = BenchRecord(
                    params=raw, ari=None, ri=None, gen_time_ms=None,
                    cluster_time_ms=None, cluster_count=None,
                    noise_count=None, status="skipped",
                )
                take(_record_to_json(skipped))
                done += 1
                if progress is not None:
                    progress(done, total)

        if workers == 1:
            for raw in runnable:
                take(_record_to_json(run_cell(GenerationParams(**raw), spec.config)))
                done += 1
                if progress is not None:
                    progress(done, total)
        elif runnable:
            jobs = [(raw, spec.config) for raw in runnable]
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for line in pool.map(_run_cell_worker, jobs, chunksize=4):
                    take(line)
                    done += 1
                    if progress is not None:
                        progress(done, total)

    final = sorted(records.values(), key=_sort_key)
    tmp = results_path.with_name(results_path.name + ".tmp")
    try:
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            for record in final:
                fh.write(_record_to_json(record) + "\n")
        os.replace(tmp, results_path)
    except BaseException:
        tmp.unlink(missing_ok=True)
        raise
    return final


def _ok_records(records) -> list[BenchRecord]:
    return [r for r in records if r.status == "ok"]


def aggregate_by_parameter(records) -> dict[str, dict[int, tuple[float, float, float]]]:
    """Per-parameter ARI spread: {parameter: {value: (min, median, max)}}.

    Covers the seven generation parameters; only ok records contribute. The
    median of an even count is the mean of the two middle values.
    """
    ok = _ok_records(records)
    if not ok:
        raise InvalidParameterError("no successful records to aggregate")
    out: dict[str, dict[int, tuple[float, float, float]]] = {}
    for name in PARAMETER_NAMES:
        buckets: dict[int, list[float]] = {}
        for record in ok:
            buckets.setdefault(record.params_dict[name], []).append(record.ari)
        out[name] = {
            value: (min(aris), float(statistics.median(aris)), max(aris))
            for value, aris in sorted(buckets.items())
        }
    return out


@dataclass(frozen=True)
class PoorGroup:
    """Cells below the ARI threshold, grouped by the four significant
    parameters."""

    num_signatures: int
    events_per_signature: int
    total_events: int
    repetitions: int
    avg_ari: float
    min_ari: float
    max_ari: float
    cell_count: int


def extract_poor_combinations(records, threshold: float = 0.95) -> list[PoorGroup]:
    """Group below-threshold cells by (S, L, N, r), ascending by average ARI."""
    buckets: dict[tuple, list[float]] = {}
    for record in _ok_records(records):
        if record.ari < threshold:
            d = record.params_dict
            key = tuple(d[name] for name in GROUP_KEYS)
            buckets.setdefault(key, []).append(record.ari)
    groups = [
        PoorGroup(
            num_signatures=key[0],
            events_per_signature=key[1],
            total_events=key[2],
            repetitions=key[3],
            avg_ari=sum(aris) / len(aris),
            min_ari=min(aris),
            max_ari=max(aris),
            cell_count=len(aris),
        )
        for key, aris in buckets.items()
    ]
    groups.sort(key=lambda g: (g.avg_ari,) + tuple(getattr(g, k) for k in GROUP_KEYS))
    return groups


@dataclass(frozen=True)
class TimingStats:
    """Boxplot statistics for one group: median, inclusive quartiles, and
    Tukey whiskers (most extreme data within 1.5 x IQR of the quartiles)."""

    count: int
    median: float
    q1: float
    q3: float
    whisker_low: float
    whisker_high: float


def _box_stats(values: list[float]) -> TimingStats:
    data = sorted(values)
    med = float(statistics.median(data))
    if len(data) == 1:
        q1 = q3 = med
    else:
        q1, _, q3 = statistics.quantiles(data, n=4, method="inclusive")
    iqr = q3 - q1
    low_fence = q1 - 1.5 * iqr
    high_fence = q3 + 1.5 * iqr
    inside = [v for v in data if low_fence <= v <= high_fence]
    return TimingStats(
        count=len(data),
        median=med,
        q1=float(q1),
        q3=float(q3),
        whisker_low=float(inside[0]),
        whisker_high=float(inside[-1]),
    )


def timing_summary(records, field: str = "gen_time_ms") -> dict[int, TimingStats]:
    """Boxplot statistics of a timing field, grouped by total_events."""
    if field not in ("gen_time_ms", "cluster_time_ms"):
        raise InvalidParameterError(f"unknown timing field {field!r}")
    buckets: dict[int, list[float]] = {}
    for record in _ok_records(records):
        buckets.setdefault(record.params_dict["total_events"], []).append(
            getattr(record, field)
        )
    if not buckets:
        raise InvalidParameterError("no successful records to summarize")
    return {n: _box_stats(values) for n, values in sorted(buckets.items())}


def write_parameter_csv(aggregates, path: str | Path) -> Path:
    """CSV of aggregate_by_parameter output: parameter, value, min, median, max."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["parameter", "value", "min", "median", "max"])
        for name in PARAMETER_NAMES:
            for value, (lo, med, hi) in aggregates.get(name, {}).items():
                writer.writerow([name, value, f"{lo:.6f}", f"{med:.6f}", f"{hi:.6f}"])
    return path


def write_poor_csv(groups, path: str | Path) -> Path:
    """CSV of extract_poor_combinations output, one row per group."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(GROUP_KEYS) + ["avg_ari", "min_ari", "max_ari", "cell_count"])
        for g in groups:
            writer.writerow(
                [g.num_signatures, g.events_per_signature, g.total_events, g.repetitions,
                 f"{g.avg_ari:.6f}", f"{g.min_ari:.6f}", f"{g.max_ari:.6f}", g.cell_count]
            )
    return path


def write_timing_csv(summary, path: str | Path) -> Path:
    """CSV of timing_summary output, one row per total_events group."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["total_events", "count", "median", "q1", "q3", "whisker_low", "whisker_high"]
        )
        for n, s in summary.items():
            writer.writerow(
                [n, s.count, f"{s.median:.3f}", f"{s.q1:.3f}", f"{s.q3:.3f}",
                 f"{s.whisker_low:.3f}", f"{s.whisker_high:.3f}"]
            )
    return path
