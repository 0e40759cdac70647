"""Benchmark the covariance kernel backends.

Times the full-diagonal kernel and one complete snapshot per backend on the
production bath parameters:

    python -m starbath.bench --n 2000 --repeats 3
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from . import kernels
from .config import ExperimentConfig
from .evolve import initial_coefficients, mode_basis, snapshot_at
from .model import discretize_ohmic_bath


def _time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description="starbath kernel benchmark")
    parser.add_argument("--n", type=int, default=2000, help="bath modes")
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--block", type=int, default=None, help="kernel row-block size")
    parser.add_argument("--t-us", type=float, default=200.0, help="evaluation time")
    args = parser.parse_args(argv)

    cfg = ExperimentConfig(n_modes=args.n)
    model = discretize_ohmic_bath(cfg.bath_spec(), cfg.omega1)
    init = cfg.initial_temperatures()

    print(f"N = {args.n}, diagonalizing ({args.n + 1} x {args.n + 1}) ...")
    t0 = time.perf_counter()
    basis = mode_basis(model)
    print(f"  eigh: {time.perf_counter() - t0:.2f} s")

    t = args.t_us * 1e-6
    phi = basis.eigenvalues * t
    cosphi, sinphi = np.cos(phi), np.sin(phi)
    c0 = initial_coefficients(basis.frequencies, init)
    n = basis.dimension
    flops = 4.0 * n**3  # two dgemms per snapshot diagonal

    reference = None
    previous = kernels.get_backend()
    try:
        for backend in kernels.available_backends():
            kernels.set_backend(backend)
            run = lambda: kernels.covariance_rows(
                basis.vectors, basis.vectors_t, cosphi, sinphi, c0, block=args.block
            )
            out = run()  # warm-up (and JIT compile for numba)
            if reference is None:
                reference = out
                drift = 0.0
            else:
                drift = float(np.max(np.abs(out - reference)))
            best = _time(run, args.repeats)
            snap = _time(lambda: snapshot_at(basis, init, t, block=args.block), args.repeats)
            print(
                f"  backend={backend:<6} diagonal: {best:8.3f} s "
                f"({flops / best / 1e9:6.1f} GFLOP/s)   full snapshot: {snap:8.3f} s"
                f"   max diff vs first backend: {drift:.2e}"
            )
    finally:
        kernels.set_backend(previous)
    return 0


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
