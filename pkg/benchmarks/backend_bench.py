"""Compare the compiled clustering kernels against the numpy fallback.

Each workload is clustered in two child processes, one with
``SIGBENCH_KERNEL=cython`` and one with ``SIGBENCH_KERNEL=numpy``, so the
backend choice is made by the normal import-time selection. The parent checks
that both backends emit identical labels and prints per-workload timings and
the speedup.

Usage:
    python3 benchmarks/backend_bench.py [--repeats N] [--seed SEED]
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import subprocess
import sys
import time

WORKLOADS = [
    # (name, S, L, m, sim, N, U, r)
    ("small", 10, 10, 10, 60, 10_000, 200, 2),
    ("medium", 10, 10, 10, 60, 20_000, 200, 2),
    ("large", 20, 20, 10, 60, 40_000, 200, 2),
]


def run_child(name: str, backend: str, repeats: int, seed: int) -> dict:
    env = dict(os.environ, SIGBENCH_KERNEL=backend)
    proc = subprocess.run(
        [sys.executable, os.path.abspath(__file__),
         "--child", name, "--repeats", str(repeats), "--seed", str(seed)],
        env=env, capture_output=True, text=True,
    )
    if proc.returncode != 0:
        raise RuntimeError(
            f"{backend} child failed for workload {name}:\n{proc.stderr}")
    return json.loads(proc.stdout.splitlines()[-1])


def child_main(name: str, repeats: int, seed: int) -> None:
    from sigbench import (DbscanConfig, GenerationParams, dbscan, encode,
                          generate_dataset, suggest_config)
    from sigbench._kernels import BACKEND

    spec = {w[0]: w[1:] for w in WORKLOADS}[name]
    S, L, m, sim, N, U, r = spec
    params = GenerationParams(
        num_signatures=S, events_per_signature=L, objects_per_event=m,
        similarity_pct=sim, total_events=N, num_unique_objects=U,
        repetitions=r, seed=seed,
    )
    dataset, _ = generate_dataset(params)

    t0 = time.perf_counter()
    encoded = encode(dataset)
    encode_s = time.perf_counter() - t0

    config = suggest_config(encoded, params)
    times = []
    labels = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = dbscan(encoded, config)
        times.append(time.perf_counter() - t0)
        labels = result.labels
    digest = hashlib.sha256(",".join(map(str, labels)).encode()).hexdigest()
    print(json.dumps({
        "backend": BACKEND,
        "encode_s": encode_s,
        "cluster_s": min(times),
        "clusters": result.cluster_count,
        "noise": result.noise_count,
        "labels_sha256": digest,
    }))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=3,
                        help="clustering repetitions per backend, best kept (default: 3)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--child", metavar="WORKLOAD", help=argparse.SUPPRESS)
    args = parser.parse_args(argv)

    if args.child:
        child_main(args.child, args.repeats, args.seed)
        return 0

    header = (f"{'workload':<8} {'events':>7} {'cython (s)':>11} "
              f"{'numpy (s)':>10} {'speedup':>8}  agreement")
    print(header)
    print("-" * len(header))
    for name, *spec in WORKLOADS:
        n_events = spec[4]
        rows = {}
        for backend in ("cython", "numpy"):
            try:
                rows[backend] = run_child(name, backend, args.repeats, args.seed)
            except RuntimeError as exc:
                print(f"{name:<8} {backend} backend unavailable: {exc}",
                      file=sys.stderr)
                return 1
        assert rows["cython"]["backend"] == "cython"
        assert rows["numpy"]["backend"] == "numpy"
        agree = rows["cython"]["labels_sha256"] == rows["numpy"]["labels_sha256"]
        fast, slow = rows["cython"]["cluster_s"], rows["numpy"]["cluster_s"]
        print(f"{name:<8} {n_events:>7} {fast:>11.3f} {slow:>10.3f} "
              f"{slow / fast:>7.1f}x  {'identical labels' if agree else 'MISMATCH'}")
        if not agree:
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
