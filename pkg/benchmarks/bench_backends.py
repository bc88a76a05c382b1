"""Compare the compiled core against the pure-Python fallback.

Usage: python benchmarks/bench_backends.py [--repeat N]

Times the three hot primitives on representative workloads and checks that
both backends return identical results while timing them.
"""

from __future__ import annotations

import argparse
import time

from qbtrials import _core_py

try:
    from qbtrials import _core
except ImportError:
    _core = None


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_kernel_direct(core):
    def run():
        acc = 0
        for m in range(0, 13):
            for r in range(0, 13):
                for nx in range(1, 6):
                    for xcode, xp in ((1, 3), (3, 2)):
                        poly = core.kernel_direct_poly(
                            False, nx - 1, nx, m, r, xcode, xp, 2, 0,
                            10_000_000)
                        acc += sum(poly)
        return acc

    return run


def bench_kernel_eval(core):
    def run():
        memo: dict = {}
        acc = 0
        for m in range(0, 13):
            for r in range(0, 13):
                for nx in range(1, 7):
                    poly = core.kernel_eval_poly(
                        False, nx, nx, m, r, 3, 2, 3, 3, memo)
                    acc += sum(poly)
        return acc

    return run


def bench_oracle_counts(core):
    def run():
        acc = 0
        for n in range(2, 17):
            counts = core.waiting_stop_counts(n, n, False, 2, False, 3, False)
            acc += sum(counts.values())
        return acc

    return run


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    benches = [
        ("kernel_direct_poly grid", bench_kernel_direct),
        ("kernel_eval_poly grid", bench_kernel_eval),
        ("waiting_stop_counts n<=16", bench_oracle_counts),
    ]
    print(f"{'benchmark':32} {'pure (s)':>10} {'compiled (s)':>13} {'speedup':>8}")
    for name, make in benches:
        t_py, out_py = _time(make(_core_py), args.repeat)
        if _core is None:
            print(f"{name:32} {t_py:10.4f} {'n/a':>13} {'n/a':>8}")
            continue
        t_c, out_c = _time(make(_core), args.repeat)
        assert out_py == out_c, f"backend disagreement in {name}"
        print(f"{name:32} {t_py:10.4f} {t_c:13.4f} {t_py / t_c:7.1f}x")
    if _core is None:
        print("compiled extension not built; showing pure-Python timings only")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
