"""Compare the compiled extension kernels against the pure-Python fallbacks.

Times the two enumeration scans and the recursive search on identical random
instances with both engines and prints per-kernel speedups.  Run directly:

    python3 benchmarks/bench_kernels.py --trials 5
"""

import argparse
import statistics
import time

from one3probe import kernels
from one3probe.formula import generate_random
from one3probe.preprocess import expand
from one3probe.search import SearchConfig, two_dib_search


def _time(fn, trials):
    samples = []
    for _ in range(trials):
        start = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - start)
    return statistics.median(samples)


def bench_scan_one_in_three(psi, trials):
    return {
        engine: _time(
            lambda e=engine: kernels.scan_one_in_three(
                psi.num_vars, psi.clauses, engine=e
            ),
            trials,
        )
        for engine in ("pure", "kernel")
    }


def bench_scan_target_sum(ef, trials):
    return {
        engine: _time(
            lambda e=engine: kernels.scan_target_sum(ef.k, ef.enc, ef.target, engine=e),
            trials,
        )
        for engine in ("pure", "kernel")
    }


def bench_search(ef, trials):
    cfg = SearchConfig(mode="repaired")
    return {
        engine: _time(
            lambda e=engine: two_dib_search(ef, cfg=cfg, engine=e), trials
        )
        for engine in ("pure", "kernel")
    }


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--scan-k", type=int, default=20,
                        help="variable count for the enumeration scans")
    parser.add_argument("--search-k1", type=int, default=10,
                        help="input variable count for the search benchmark")
    args = parser.parse_args()

    if not kernels.HAVE_KERNEL:
        print("compiled kernel not available; nothing to compare")
        return 1

    scan_psi = generate_random(args.scan_k, args.scan_k // 2, args.seed)
    scan_ef = expand(generate_random(7, (args.scan_k - 7) // 3, args.seed)).ef
    search_ef = expand(generate_random(args.search_k1, 8, args.seed)).ef

    rows = [
        ("scan_one_in_three", f"k={args.scan_k}", bench_scan_one_in_three(scan_psi, args.trials)),
        ("scan_target_sum", f"k={scan_ef.k}", bench_scan_target_sum(scan_ef, args.trials)),
        ("search_2dib", f"k={search_ef.k}", bench_search(search_ef, args.trials)),
    ]
    print(f"{'kernel':<20} {'size':<8} {'pure (s)':>12} {'compiled (s)':>14} {'speedup':>9}")
    for name, size, t in rows:
        speedup = t["pure"] / t["kernel"] if t["kernel"] > 0 else float("inf")
        print(f"{name:<20} {size:<8} {t['pure']:>12.6f} {t['kernel']:>14.6f} {speedup:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
