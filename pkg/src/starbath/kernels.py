"""Hot covariance kernels: numba fast path with a pure-numpy fallback.

Evaluating one snapshot is dominated by forming row blocks of
C = Q cos(Lt) Q^T and S = Q sin(Lt) Q^T and accumulating the weighted
square sums c_j = sum_m (C_jm^2 + S_jm^2) c0_m.  Both backends share the
blocked formulation (the matrix products stay in BLAS either way; the
numba path fuses the square-accumulate pass and avoids the intermediate
squared arrays).

Backend selection: environment variable ``STARBATH_KERNEL`` set to
``numpy`` or ``numba`` forces a backend; unset or ``auto`` prefers numba
when it is importable.  ``set_backend`` overrides at runtime (used by the
benchmark and the kernel tests).
"""

from __future__ import annotations

import os

import numpy as np

__all__ = ["covariance_rows", "get_backend", "set_backend", "available_backends"]

# Row-block size chosen so the two (block x n) scratch blocks stay near 64 MB.
_BLOCK_BYTES = 32 * 2**20


def _default_block(n: int) -> int:
    return max(16, _BLOCK_BYTES // (8 * max(n, 1)))


def _covariance_rows_numpy(Q, QT, cosphi, sinphi, c0, row_start, row_stop, block):
    out = np.empty(row_stop - row_start)
    for lo in range(row_start, row_stop, block):
        hi = min(lo + block, row_stop)
        cj = (Q[lo:hi] * cosphi) @ QT
        sj = (Q[lo:hi] * sinphi) @ QT
        np.square(cj, out=cj)
        np.square(sj, out=sj)
        cj += sj
        out[lo - row_start : hi - row_start] = cj @ c0
    return out


_BACKENDS = {"numpy": _covariance_rows_numpy}

try:  # pragma: no cover - exercised when numba is installed
    import numba

    @numba.njit(cache=True)
    def _covariance_rows_numba_impl(Q, QT, cosphi, sinphi, c0, row_start, row_stop, block, out):
        n = Q.shape[1]
        for lo in range(row_start, row_stop, block):
            hi = min(lo + block, row_stop)
            cj = np.dot(Q[lo:hi] * cosphi, QT)
            sj = np.dot(Q[lo:hi] * sinphi, QT)
            for i in range(hi - lo):
                acc = 0.0
                for m in range(n):
                    acc += (cj[i, m] * cj[i, m] + sj[i, m] * sj[i, m]) * c0[m]
                out[lo - row_start + i] = acc

    def _covariance_rows_numba(Q, QT, cosphi, sinphi, c0, row_start, row_stop, block):
        out = np.empty(row_stop - row_start)
        _covariance_rows_numba_impl(Q, QT, cosphi, sinphi, c0, row_start, row_stop, block, out)
        return out

    _BACKENDS["numba"] = _covariance_rows_numba
except ImportError:  # pragma: no cover
    pass


def _resolve(requested: str) -> str:
    if requested in ("", "auto"):
        return "numba" if "numba" in _BACKENDS else "numpy"
    if requested not in _BACKENDS:
        raise ValueError(
            f"unknown kernel backend {requested!r}; available: {sorted(_BACKENDS)}"
        )
    return requested


_active = _resolve(os.environ.get("STARBATH_KERNEL", "auto").lower())


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def get_backend() -> str:
    return _active


def set_backend(name: str) -> str:
    """Select the kernel backend at runtime; returns the previous one."""
    global _active
    previous = _active
    _active = _resolve(name.lower())
    return previous


def covariance_rows(
    Q: np.ndarray,
    QT: np.ndarray,
    cosphi: np.ndarray,
    sinphi: np.ndarray,
    c0: np.ndarray,
    row_start: int = 0,
    row_stop: int | None = None,
    block: int | None = None,
) -> np.ndarray:
    """Diagonal covariance coefficients c_j(t) for rows [row_start, row_stop).

    Q holds orthonormal eigenvectors as columns, QT its contiguous
    transpose, cosphi/sinphi the eigenvalue phases cos(lambda*t) and
    sin(lambda*t), and c0 the initial diagonal coefficients.
    """
    n = Q.shape[0]
    if row_stop is None:
        row_stop = n
    if not 0 <= row_start <= row_stop <= n:
        raise ValueError("row range out of bounds")
    if row_start == row_stop:
        return np.empty(0)
    if block is None:
        block = _default_block(n)
    return _BACKENDS[_active](Q, QT, cosphi, sinphi, c0, row_start, row_stop, block)
