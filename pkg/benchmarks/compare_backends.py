"""Head-to-head timings of the two kernel backends.

Imports both implementations directly (ignoring ACFLOW_BACKEND), checks that
they agree to roundoff on identical inputs, and reports the best wall time
per call plus the numba speedup.  Run from the repository root:

    python3 benchmarks/compare_backends.py
    python3 benchmarks/compare_backends.py --sizes 128,512 --repeats 9
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from acflow import geometry as G
from acflow.kernels import _numpy_impl

try:
    from acflow.kernels import _numba_impl
except Exception as exc:  # pragma: no cover - host without a jit toolchain
    _numba_impl = None
    _NUMBA_ERR = exc


def best_wall(fn, setup, repeats):
    best = float("inf")
    for _ in range(repeats):
        args = setup()
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def periodic_case(n, rng):
    u = rng.standard_normal((n, n))
    inv = float(n * n)
    return lambda impl: (lambda: (u, np.empty_like(u), inv, inv),
                         impl.lap_periodic)


def polar_case(n, rng):
    chart = G.make_chart(G.unit_sphere(), n, 2 * n)
    u = rng.standard_normal(chart.shape)
    rad_coef = 1.0 / (chart.warp_center * chart.h1**2)
    ang_coef = 1.0 / (chart.warp_center**2 * chart.h2**2)
    return lambda impl: (
        lambda: (u, np.empty_like(u), chart.warp_face, rad_coef, ang_coef,
                 False, 0.0),
        impl.lap_polar)


def tridiag_case(n, rng):
    # synthetic diagonally dominant factorization, one system per mode
    n1, nm = n, n // 2 + 1
    lam = np.linspace(0.0, 3.0, nm)
    diag = 2.5 + 0.1 * rng.random((n1, nm)) + lam[None, :]
    lower = -(0.5 + 0.3 * rng.random(n1))
    cup = np.ascontiguousarray(-(0.5 + 0.3 * rng.random(n1 - 1)))
    w = np.zeros((n1, nm))
    beta = np.empty((n1, nm))
    beta[0] = diag[0]
    for i in range(1, n1):
        w[i] = lower[i] / beta[i - 1]
        beta[i] = diag[i] - w[i] * cup[i - 1]
    binv = 1.0 / beta
    rhs = (rng.standard_normal((n1, nm))
           + 1j * rng.standard_normal((n1, nm)))
    return lambda impl: (lambda: (w, binv, cup, rhs.copy()),
                         impl.tridiag_solve_modes)


CASES = [
    ("lap_periodic", periodic_case),
    ("lap_polar", polar_case),
    ("tridiag_solve_modes", tridiag_case),
]


def agreement(make):
    setup, fn = make(_numpy_impl)
    out_np = fn(*setup())
    setup, fn = make(_numba_impl)
    out_nb = fn(*setup())
    scale = max(1.0, float(np.abs(out_np).max()))
    return float(np.abs(out_np - out_nb).max()) / scale


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="128,256,512",
                    help="comma-separated grid sizes")
    ap.add_argument("--repeats", type=int, default=7,
                    help="timing repeats; best wall time wins")
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    rng = np.random.default_rng(42)

    if _numba_impl is None:
        print(f"numba backend unavailable ({_NUMBA_ERR}); timing numpy only")
    header = (f"{'kernel':<22}{'grid':>10}{'numpy':>12}{'numba':>12}"
              f"{'speedup':>9}{'rel diff':>11}")
    print(header)
    print("-" * len(header))
    for name, case in CASES:
        for n in sizes:
            make = case(n, rng)
            setup, fn = make(_numpy_impl)
            t_np = best_wall(fn, setup, args.repeats)
            if _numba_impl is None:
                print(f"{name:<22}{n:>10}{t_np * 1e3:>10.3f}ms"
                      f"{'-':>12}{'-':>9}{'-':>11}")
                continue
            setup, fn = make(_numba_impl)
            fn(*setup())  # compile outside the timed region
            t_nb = best_wall(fn, setup, args.repeats)
            rel = agreement(make)
            print(f"{name:<22}{n:>10}{t_np * 1e3:>10.3f}ms"
                  f"{t_nb * 1e3:>10.3f}ms{t_np / t_nb:>8.1f}x{rel:>11.1e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
