"""Exact unitary evolution of the Gaussian covariance data.

The full quadrature matrices carry a 2x2-identity block structure, so the
dynamics closes on the (N+1)-dimensional mode space.  With C = Q cos(Lt) Q^T
and S = Q sin(Lt) Q^T built from the eigendecomposition of the reduced
arrowhead matrix, the surviving covariance data are

    c_j(t) = sum_m (C_jm^2 + S_jm^2) c_m(0)        (diagonal coefficients)
    x_j(t) = sum_m c_m(0) (S_1m C_mj - C_1m S_mj)  (system-bath cross terms)

evaluated exactly at each output time; no time-stepping error accumulates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import ReducedHamiltonian, StarModel, build_reduced, thermal_coefficient

__all__ = [
    "InitialTemperatures",
    "ModeBasis",
    "CovarianceSnapshot",
    "diagonalize",
    "mode_basis",
    "initial_coefficients",
    "snapshot_at",
    "snapshot_series",
    "system_coefficient_series",
    "coefficient_rows_series",
    "cross_term_series",
]


@dataclass(frozen=True)
class InitialTemperatures:
    """Initial Gibbs temperatures of the system (T_A0) and the bath (T_B0)."""

    T_A0: float
    T_B0: float

    def __post_init__(self) -> None:
        if self.T_A0 <= 0 or self.T_B0 <= 0:
            raise ValueError("initial temperatures must be positive")


@dataclass(frozen=True, eq=False)
class ModeBasis:
    """Eigendecomposition of the reduced arrowhead matrix.

    Immutable after construction and shared read-only; snapshot evaluations
    at distinct times are independent.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray  # orthonormal eigenvectors as columns
    vectors_t: np.ndarray  # contiguous transpose, kept for the kernels
    frequencies: np.ndarray  # bare oscillator frequencies, system first
    model: StarModel | None = None

    def __post_init__(self) -> None:
        for name in ("eigenvalues", "vectors", "vectors_t", "frequencies"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dimension(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True, eq=False)
class CovarianceSnapshot:
    """Reduced covariance data at one time: the N+1 diagonal coefficients
    c_j(t) and the N system-bath cross terms x_j(t) = sigma_{1,2j}(t)."""

    time: float
    c: np.ndarray
    x: np.ndarray
    model: StarModel | None = None

    def __post_init__(self) -> None:
        for name in ("c", "x"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if len(self.x) != len(self.c) - 1:
            raise ValueError("expected one cross term per bath mode")


def diagonalize(reduced: ReducedHamiltonian, model: StarModel | None = None) -> ModeBasis:
    """Full real-symmetric eigendecomposition of the arrowhead matrix,
    eigenvalues ascending.  LAPACK non-convergence propagates as
    ``numpy.linalg.LinAlgError``."""
    eigenvalues, vectors = np.linalg.eigh(reduced.as_matrix())
    return ModeBasis(
        eigenvalues=eigenvalues,
        vectors=vectors,
        vectors_t=vectors.T,
        frequencies=reduced.diagonal,
        model=model,
    )


def mode_basis(model: StarModel) -> ModeBasis:
    """Diagonalize ``model``'s reduced matrix, keeping the model reference."""
    return diagonalize(build_reduced(model), model=model)


def initial_coefficients(frequencies: np.ndarray, init: InitialTemperatures) -> np.ndarray:
    """Initial diagonal coefficients c_m(0): the system mode at T_A0,
    every bath mode at T_B0, all cross terms zero."""
    temperatures = np.full(len(frequencies), init.T_B0)
    temperatures[0] = init.T_A0
    return thermal_coefficient(frequencies, temperatures)


def _phases(basis: ModeBasis, t: float) -> tuple[np.ndarray, np.ndarray]:
    phi = basis.eigenvalues * t
    return np.cos(phi), np.sin(phi)


def _cross_terms(basis: ModeBasis, c0: np.ndarray, cosphi: np.ndarray, sinphi: np.ndarray) -> np.ndarray:
    # Row 1 of C and S, then x = [C (c0*S_1) - S (c0*C_1)] on the bath rows.
    Q, QT = basis.vectors, basis.vectors_t
    crow = (Q[0] * cosphi) @ QT
    srow = (Q[0] * sinphi) @ QT
    ca = Q @ (cosphi * (QT @ (c0 * srow)))
    sb = Q @ (sinphi * (QT @ (c0 * crow)))
    return (ca - sb)[1:]


def snapshot_at(
    basis: ModeBasis,
    init: InitialTemperatures,
    t: float,
    block: int | None = None,
) -> CovarianceSnapshot:
    """Evaluate the covariance data exactly at time ``t`` (t >= 0)."""
    if t < 0:
        raise ValueError("time must be non-negative")
    cosphi, sinphi = _phases(basis, t)
    c0 = initial_coefficients(basis.frequencies, init)
    c = kernels.covariance_rows(basis.vectors, basis.vectors_t, cosphi, sinphi, c0, block=block)
    x = _cross_terms(basis, c0, cosphi, sinphi)
    return CovarianceSnapshot(time=float(t), c=c, x=x, model=basis.model)


def _validated_grid(times) -> np.ndarray:
    grid = np.asarray(times, dtype=float)
    if grid.ndim != 1 or len(grid) == 0:
        raise ValueError("time grid must be a non-empty 1-d sequence")
    if grid[0] < 0:
        raise ValueError("time grid must be non-negative")
    if np.any(np.diff(grid) < 0):
        raise ValueError("time grid must be sorted ascending")
    return grid


def snapshot_series(
    basis: ModeBasis,
    init: InitialTemperatures,
    times,
    block: int | None = None,
) -> list[CovarianceSnapshot]:
    """One snapshot per grid point; each evaluation is independent."""
    return [snapshot_at(basis, init, t, block=block) for t in _validated_grid(times)]


def system_coefficient_series(basis: ModeBasis, init: InitialTemperatures, times) -> np.ndarray:
    """Fast path for the system coefficient c_1(t) alone (one kernel row
    per time instead of the full diagonal)."""
    grid = _validated_grid(times)
    c0 = initial_coefficients(basis.frequencies, init)
    out = np.empty(len(grid))
    for i, t in enumerate(grid):
        cosphi, sinphi = _phases(basis, t)
        out[i] = kernels.covariance_rows(
            basis.vectors, basis.vectors_t, cosphi, sinphi, c0, 0, 1
        )[0]
    return out


def coefficient_rows_series(
    basis: ModeBasis,
    init: InitialTemperatures,
    times,
    row_start: int,
    row_stop: int,
) -> np.ndarray:
    """c_j(t) restricted to oscillator rows [row_start, row_stop), shape
    (len(times), row_stop - row_start).  Lets near-resonant mode windows be
    tracked without paying for the full diagonal."""
    grid = _validated_grid(times)
    c0 = initial_coefficients(basis.frequencies, init)
    out = np.empty((len(grid), row_stop - row_start))
    for i, t in enumerate(grid):
        cosphi, sinphi = _phases(basis, t)
        out[i] = kernels.covariance_rows(
            basis.vectors, basis.vectors_t, cosphi, sinphi, c0, row_start, row_stop
        )
    return out


def cross_term_series(basis: ModeBasis, init: InitialTemperatures, times) -> np.ndarray:
    """Cross terms x_j(t) for every grid time, shape (len(times), N).

    Costs O(n^2) per time, so energy-flux series stay cheap even when the
    full diagonal is not needed.
    """
    grid = _validated_grid(times)
    c0 = initial_coefficients(basis.frequencies, init)
    out = np.empty((len(grid), basis.dimension - 1))
    for i, t in enumerate(grid):
        cosphi, sinphi = _phases(basis, t)
        out[i] = _cross_terms(basis, c0, cosphi, sinphi)
    return out
