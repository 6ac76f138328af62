"""Time the compiled and pure-Python kernels on the same capacity workloads.

    python3 benchmarks/bench_kernels.py [--K 5000] [--repeat 3]
"""

import argparse
import time

from toricembed import kernels

WORKLOADS = {
    "ball (1:)": (1, []),
    "E(1,2) (2:1,1)": (2, [1, 1]),
    "(5:2,2,2,2,2)": (5, [2, 2, 2, 2, 2]),
    "(22:13,9,4,4,1x5)": (22, [13, 9, 4, 4, 1, 1, 1, 1, 1]),
}


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--K", type=int, default=5000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])
    print(f"compiled kernel available: {kernels.BACKEND == 'cython'}; K = {args.K}")
    print(f"{'workload':24s}" + "".join(f"{b:>12s}" for b in backends) + "   speedup  agree")
    for name, (B, cuts) in WORKLOADS.items():
        results = {}
        for b in backends:
            results[b] = best_of(lambda: kernels.convex_capacities_scaled(B, cuts, args.K, b), args.repeat)
        row = f"{name:24s}" + "".join(f"{results[b][0]:12.4f}" for b in backends)
        if len(backends) == 2:
            speed = results["python"][0] / max(results["cython"][0], 1e-9)
            agree = results["python"][1] == results["cython"][1]
            row += f"   {speed:7.1f}x  {agree}"
        print(row)


if __name__ == "__main__":
    main()
