"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--number 20000]

Reports per-call microseconds for the hot geometry kernels and wall time for
full solver runs (the table configs) under each backend.
"""

import argparse
import importlib
import os
import timeit

import numpy as np


def kernel_cases(mod, rng):
    x, y = rng.normal(size=2), rng.normal(size=2)
    p, q = np.exp(rng.normal(size=20)), np.exp(rng.normal(size=20))
    X = np.exp(rng.normal(size=(11, 20)))
    return {
        "rb_dist": lambda: mod.rb_dist(x, y),
        "rb_geodesic": lambda: mod.rb_geodesic(x, y, 0.3),
        "rb_dr_map": lambda: mod.rb_dr_map(1.0, 2.0, 1.0, x),
        "lo_dist (m=20)": lambda: mod.lo_dist(p, q),
        "lo_geodesic (m=20)": lambda: mod.lo_geodesic(p, q, 0.3),
        "lo_mean (11x20)": lambda: mod.lo_mean(X),
    }


def solver_seconds(backend, tables, repeat):
    os.environ["HADAMARD_DR_PURE_PYTHON"] = "1" if backend == "python" else "0"
    from hadamard_dr import bench, kernels
    importlib.reload(kernels)
    assert kernels.BACKEND == backend
    best = {}
    for table in tables:
        best[table] = min(timeit.repeat(lambda: bench.reproduce(table), number=1, repeat=repeat))
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=20000)
    args = ap.parse_args()

    from hadamard_dr import kernels
    found = kernels.backends()
    if "cython" not in found:
        print("compiled extension not built; only the Python backend is available")
    rng = np.random.default_rng(0)

    print(f"{'kernel':<22}" + "".join(f"{name:>14}" for name in found) + (f"{'speedup':>10}" if len(found) > 1 else ""))
    for label in kernel_cases(found["python"], rng):
        row = {}
        for name, mod in found.items():
            fn = kernel_cases(mod, np.random.default_rng(0))[label]
            row[name] = min(timeit.repeat(fn, number=args.number, repeat=args.repeat)) / args.number * 1e6
        line = f"{label:<22}" + "".join(f"{row[n]:>12.3f}us" for n in found)
        if len(found) > 1:
            line += f"{row['python'] / row['cython']:>9.1f}x"
        print(line)

    tables = ("table1", "table2", "table3", "table4")
    print()
    print(f"{'solver runs':<22}" + "".join(f"{name:>14}" for name in found))
    timings = {name: solver_seconds(name, tables, max(1, args.repeat // 2)) for name in found}
    for table in tables:
        print(f"{table:<22}" + "".join(f"{timings[n][table]:>13.3f}s" for n in found))


if __name__ == "__main__":
    main()
