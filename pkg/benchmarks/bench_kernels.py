"""Benchmark the compiled geometry kernels against the pure-Python fallback.

Both kernel modules are imported side by side and timed on identical
workloads: raw box primitives, region set operations, and a batch of full
space merges.  Run with ``python3 benchmarks/bench_kernels.py``.
"""

import argparse
import subprocess
import sys
import time

import numpy as np

from decspace.geometry import _kernels_py


def _load_compiled():
    try:
        from decspace.geometry import _kernels_cy
        return _kernels_cy
    except ImportError:
        return None


def _random_box(rng, m=2):
    out = []
    for _ in range(m):
        lo = float(rng.integers(0, 8))
        hi = float(rng.integers(int(lo) + 1, 9))
        out.append((lo, hi, True, bool(rng.integers(0, 2))))
    return tuple(out)


def bench_primitives(kernel, boxes, points):
    start = time.perf_counter()
    for a, b in zip(boxes, boxes[1:]):
        kernel.box_intersect(a, b)
        kernel.box_subtract(a, b)
    owners = list(range(64))
    pool = boxes[:64]
    for pt in points:
        kernel.locate(pool, owners, pt)
    return time.perf_counter() - start


def bench_set_ops(kernel, boxes):
    start = time.perf_counter()
    for i in range(0, len(boxes) - 8, 8):
        xs, ys = boxes[i : i + 4], boxes[i + 4 : i + 8]
        kernel.coalesce(kernel.boxes_intersect(xs, ys))
        kernel.coalesce(kernel.boxes_subtract(xs, ys))
    return time.perf_counter() - start


_MERGE_CODE = """\
import time, numpy as np
from decspace.sampling import random_space
from decspace.operators import merge
from decspace import geometry
rng = np.random.default_rng(0)
pairs = [(random_space(rng), random_space(rng)) for _ in range({trials})]
start = time.perf_counter()
for x, y in pairs:
    merge(x, y)
print(geometry.KERNEL_BACKEND, time.perf_counter() - start)
"""

_LAWS_CODE = """\
import time
from decspace.laws import run_all
from decspace import geometry
start = time.perf_counter()
run_all(trials={trials}, seed=0)
print(geometry.KERNEL_BACKEND, time.perf_counter() - start)
"""


def bench_subprocess(template, pure, trials):
    """Time a library workload with each backend, in a subprocess so the
    import-time kernel choice applies."""
    import os

    env = {"DECSPACE_PURE_PYTHON": "1"} if pure else {}
    res = subprocess.run(
        [sys.executable, "-c", template.format(trials=trials)],
        env={**os.environ, **env},
        capture_output=True, text=True, check=True,
    )
    backend, elapsed = res.stdout.split()
    return backend, float(elapsed)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--ops", type=int, default=20000,
                        help="number of primitive operations")
    parser.add_argument("--merges", type=int, default=200,
                        help="number of full space merges")
    parser.add_argument("--laws", type=int, default=50,
                        help="number of randomized law-suite trials")
    args = parser.parse_args()

    compiled = _load_compiled()
    rng = np.random.default_rng(1)
    boxes = [_random_box(rng) for _ in range(args.ops)]
    points = [tuple(map(float, rng.uniform(0, 8, size=2)))
              for _ in range(args.ops // 4)]

    rows = []
    t_py = bench_primitives(_kernels_py, boxes, points)
    rows.append(("box primitives", "python", t_py, 1.0))
    if compiled is not None:
        t_cy = bench_primitives(compiled, boxes, points)
        rows.append(("box primitives", "cython", t_cy, t_py / t_cy))

    t_py = bench_set_ops(_kernels_py, boxes)
    rows.append(("region set ops", "python", t_py, 1.0))
    if compiled is not None:
        t_cy = bench_set_ops(compiled, boxes)
        rows.append(("region set ops", "cython", t_cy, t_py / t_cy))

    for label, template, trials in (
        (f"{args.merges} space merges", _MERGE_CODE, args.merges),
        (f"{args.laws} law trials", _LAWS_CODE, args.laws),
    ):
        backend, t_pure = bench_subprocess(template, pure=True, trials=trials)
        assert backend == "python"
        rows.append((label, "python", t_pure, 1.0))
        if compiled is not None:
            backend, t_fast = bench_subprocess(template, pure=False,
                                               trials=trials)
            rows.append((label, backend, t_fast, t_pure / t_fast))

    print(f"{'workload':<22} {'backend':<8} {'seconds':>9} {'speedup':>8}")
    for name, backend, secs, speedup in rows:
        print(f"{name:<22} {backend:<8} {secs:>9.4f} {speedup:>7.1f}x")
    if compiled is None:
        print("note: compiled kernels unavailable; showing pure Python only")


if __name__ == "__main__":
    main()
