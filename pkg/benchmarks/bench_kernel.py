"""Compare the pure-Python and compiled DP kernels on a few workloads.

    python3 benchmarks/bench_kernel.py [--repeat 3]
"""
import argparse
import itertools
import time

from icsched import crosscheck, dp
from icsched.instances import reduce_bin_packing
from icsched.oracle import BinPackingInstance


def workloads():
    small = reduce_bin_packing(BinPackingInstance(3, (1, 2, 2, 3), 3)).instance
    hard = reduce_bin_packing(BinPackingInstance(7, (4, 4, 3, 3, 3, 3, 2), 3)).instance
    grid = [reduce_bin_packing(BinPackingInstance(v, items, 3)).instance
            for items in itertools.product(range(1, 4), repeat=5)
            for v in (3, 5, 7)]
    suite = list(crosscheck.random_suite(1, 500))
    return [
        ("3-bin reduction", [small]),
        ("7-item reduction", [hard]),
        ("5-item grid (729)", grid),
        ("random suite (500)", suite),
    ]


def run(instances, backend):
    entries = 0
    began = time.perf_counter()
    for inst in instances:
        res = dp.solve(inst, coloring=False, budget=2 ** 62, backend=backend)
        entries += res.stats.memo_entries
    return time.perf_counter() - began, entries


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    backends = dp.available_backends()
    if "cython" not in backends:
        print("compiled kernel not built; timing the Python kernel only")
    print(f"{'workload':<22}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}{'entries':>12}")
    for name, instances in workloads():
        best = {}
        for backend in backends:
            times = []
            for _ in range(args.repeat):
                seconds, entries = run(instances, backend)
                times.append(seconds)
            best[backend] = min(times)
        speed = best["python"] / best["cython"] if "cython" in best else float("nan")
        print(f"{name:<22}" + "".join(f"{best[b]:>11.3f}s" for b in backends)
              + f"{speed:>9.1f}x{entries:>12}")


if __name__ == "__main__":
    main()
