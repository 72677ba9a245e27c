"""Benchmark the compiled product-moment kernel against the NumPy fallback.

Usage: python benchmarks/bench_kernels.py

The kernel accumulates the inner-integral power table of the nested
product-moment quadrature, which dominates the cost of building normal
order-statistic moments.  Both implementations are timed on the same
inputs, first in isolation and then inside a full moment build.
"""

import time

import numpy as np

from jointblup import QuadratureSettings, build_moment_set, normal_model, unit_rule
from jointblup import _kernels_py
from jointblup import moments as moments_module

try:
    from jointblup import _kernels
except ImportError:
    _kernels = None


def _best_of(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_inputs(n):
    u, w = unit_rule(QuadratureSettings())
    psi_w = normal_model().quantile(np.outer(u, u)) * w[None, :]
    return psi_w, u, 1.0 - u, n - 1, n - 1


def bench_kernel():
    print(f"{'n':>4} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for n in (10, 20, 50):
        args = kernel_inputs(n)
        t_py = _best_of(lambda: _kernels_py.pair_power_table(*args))
        if _kernels is None:
            print(f"{n:>4} {t_py * 1e3:>10.1f}ms {'absent':>12} {'-':>9}")
            continue
        t_cy = _best_of(lambda: _kernels.pair_power_table(*args))
        got = _kernels.pair_power_table(*args)
        want = _kernels_py.pair_power_table(*args)
        scale = np.max(np.abs(want))
        assert np.allclose(got, want, rtol=1e-10, atol=1e-12 * scale)
        print(f"{n:>4} {t_py * 1e3:>10.1f}ms {t_cy * 1e3:>10.1f}ms {t_py / t_cy:>8.2f}x")


def bench_end_to_end(n=20):
    print(f"\nfull normal moment build, n={n}:")
    for label, kernel in (("python", _kernels_py), ("compiled", _kernels)):
        if kernel is None:
            print(f"  {label:>8}: absent")
            continue
        original = moments_module._kernel
        moments_module._kernel = kernel
        try:
            t = _best_of(lambda: build_moment_set(normal_model(), n), repeats=3)
        finally:
            moments_module._kernel = original
        print(f"  {label:>8}: {t * 1e3:.1f}ms")


if __name__ == "__main__":
    print("product-moment kernel, standard rule "
          f"({len(unit_rule(QuadratureSettings())[0])} nodes):")
    bench_kernel()
    bench_end_to_end()
