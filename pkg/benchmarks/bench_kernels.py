"""Benchmark the compiled kernels against the pure-Python fallback.

Times the three hot per-iteration calls (fourth-power gain, its gradient,
and the curvature bound) on realistic problem sizes, then times a full
continuous solve with each backend. Run from the repo root:

    python benchmarks/bench_kernels.py
"""

import os
import subprocess
import sys
import time

import numpy as np

from mawpcn import kernels
from mawpcn._kernels_py import (
    curvature_bound as py_curvature,
    gain4_value as py_gain4,
    gain4_value_gradient as py_gain4_grad,
)

WAVENUMBER = 2.0 * np.pi / 0.06


def random_inputs(num_paths, seed):
    rng = np.random.default_rng(seed)
    weights = rng.standard_normal(num_paths) + 1j * rng.standard_normal(num_paths)
    dir_x = rng.uniform(-1.0, 1.0, num_paths)
    dir_y = rng.uniform(-1.0, 1.0, num_paths)
    return np.ascontiguousarray(weights), dir_x, dir_y


def time_call(fn, args, repeats):
    # warm up, then take the best of three timed batches
    for _ in range(10):
        fn(*args)
    best = np.inf
    for _ in range(3):
        start = time.perf_counter()
        for _ in range(repeats):
            fn(*args)
        best = min(best, (time.perf_counter() - start) / repeats)
    return best


def bench_kernels(num_paths=10, repeats=20000):
    weights, dir_x, dir_y = random_inputs(num_paths, seed=7)
    x, y = 0.0123, -0.0456
    cases = [
        ("gain4", kernels.gain4_value, py_gain4, (weights, dir_x, dir_y, x, y, WAVENUMBER)),
        (
            "gain4+grad",
            kernels.gain4_value_gradient,
            py_gain4_grad,
            (weights, dir_x, dir_y, x, y, WAVENUMBER),
        ),
        ("curvature", kernels.curvature_bound, py_curvature, (weights, dir_x, dir_y, WAVENUMBER)),
    ]
    print(f"kernel timings, L={num_paths} paths ({repeats} calls each):")
    for name, fast, slow, args in cases:
        t_fast = time_call(fast, args, repeats)
        t_slow = time_call(slow, args, repeats)
        label = kernels.BACKEND
        print(
            f"  {name:<12} {label}: {t_fast * 1e6:8.2f} us   "
            f"python: {t_slow * 1e6:8.2f} us   speedup: {t_slow / t_fast:5.1f}x"
        )


SOLVE_SNIPPET = """
import time
import numpy as np
from mawpcn import default_params, generate_realization, solve_continuous
from mawpcn import kernels

params = default_params()
times = []
for seed in range(5):
    real = generate_realization(seed, params)
    start = time.perf_counter()
    solve_continuous(real, params)
    times.append(time.perf_counter() - start)
print(kernels.BACKEND, min(times))
"""


def bench_solve():
    print("full continuous solve (best of 5 seeded instances):")
    results = {}
    for pure in ("0", "1"):
        env = dict(os.environ, MAWPCN_PURE_PYTHON=pure)
        out = subprocess.run(
            [sys.executable, "-c", SOLVE_SNIPPET],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        backend, seconds = out.stdout.split()
        results[backend] = float(seconds)
        print(f"  {backend}: {float(seconds) * 1e3:8.1f} ms")
    if "compiled" in results and "python" in results:
        print(f"  end-to-end speedup: {results['python'] / results['compiled']:.1f}x")


if __name__ == "__main__":
    print(f"active backend: {kernels.BACKEND}")
    bench_kernels()
    bench_solve()
