"""Time the compiled and pure-Python state-sum kernels on the same diagrams.

    python3 bench/benchmark.py [--repeat 3] [--max-crossings 16]
"""
import argparse
import statistics
import time

from kbskein.diagram import Multicurve, SurfaceKind, build_product_diagram, closed_braid
from kbskein.statesum import available_backends, state_histogram


def workloads(max_crossings):
    T = Multicurve.torus
    cases = [
        ("product (2,1)x(1,3)", build_product_diagram(T(2, 1), T(1, 3))),
        ("product (1,0)^2x(0,1)^3", build_product_diagram(T(1, 0, 2), T(0, 1, 3))),
        ("disk braid s1^10", closed_braid(SurfaceKind.DISK, 2, [(0, 1)] * 10)),
        ("torus braid 12", closed_braid(SurfaceKind.TORUS, 3, [(0, 1), (1, -1), (2, 1)] * 4)),
        ("annulus braid 14", closed_braid(SurfaceKind.ANNULUS, 3, [(0, 1), (1, 1)] * 7)),
        ("torus braid 16", closed_braid(SurfaceKind.TORUS, 2, [(0, 1), (1, -1)] * 8)),
    ]
    return [(name, d) for name, d in cases if d.ncrossings <= max_crossings]


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times), statistics.mean(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--max-crossings", type=int, default=16)
    args = ap.parse_args()
    backends = available_backends()
    if "compiled" not in backends:
        print("compiled backend not built; only the fallback is timed")
    print(f"{'workload':28s} {'k':>3s} " + " ".join(f"{b + ' (s)':>14s}" for b in backends) + "   speedup")
    for name, d in workloads(args.max_crossings):
        results = {}
        for b in backends:
            results[b] = state_histogram(d, backend=b)
        assert len({frozenset(r.items()) for r in results.values()}) == 1, name
        best = {b: best_time(lambda b=b: state_histogram(d, backend=b), args.repeat)[0] for b in backends}
        speed = f"{best['python'] / best['compiled']:8.1f}x" if "compiled" in best else "       -"
        print(f"{name:28s} {d.ncrossings:3d} " + " ".join(f"{best[b]:14.4f}" for b in backends) + f"  {speed}")


if __name__ == "__main__":
    main()
