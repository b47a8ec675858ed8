"""Dense complex eigenvalues: balance, Hessenberg reduction, shifted QR.

The pipeline is self-contained (no LAPACK).  For the tridiagonal model
Hamiltonians isolated eigenvalues are then Newton-polished on the
characteristic polynomial, and the spectrum is cross-checked two ways: the
characteristic polynomial is evaluated at every eigenvalue with the
three-term determinant recurrence, and one step of inverse iteration is run
from each eigenvalue to measure an eigen-residual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .model import Hamiltonian

# Deflation threshold is SAFETY * u with u the unit roundoff.
DEFLATION_SAFETY = 2.0
ITERATION_CAP_FACTOR = 30
INVERSE_ITERATION_SHIFT = 10.0 * _kernels.UNIT_ROUNDOFF
# Newton polishing: at most this many steps, and never further than this
# fraction of the distance to the nearest other eigenvalue.
POLISH_STEPS = 3
POLISH_GAP_FRACTION = 1e-3


@dataclass(frozen=True, eq=False)
class EigenReport:
    """Eigenvalues of one matrix plus solver diagnostics."""

    values: np.ndarray
    iterations: int
    max_residual: float
    converged: bool

    def __len__(self) -> int:
        return len(self.values)


class NotConvergedError(RuntimeError):
    """A downstream consumer was handed an unconverged :class:`EigenReport`."""


def _as_square(m) -> np.ndarray:
    a = np.array(m, dtype=np.complex128, order="C", copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def sort_values(values) -> np.ndarray:
    """Sort complex values by real part, then imaginary part."""
    v = np.asarray(values, dtype=np.complex128)
    return v[np.lexsort((v.imag, v.real))]


def balance(m) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(D^-1 M D, d)`` where ``D = diag(d)`` has power-of-two entries."""
    a = _as_square(m)
    d = np.ones(a.shape[0])
    _kernels.balance_inplace(a, d)
    return a, d


def hessenberg_reduce(m) -> np.ndarray:
    """Unitarily similar upper-Hessenberg form of ``m``.

    Columns that are already Hessenberg are left untouched, so a tridiagonal
    input comes back unchanged.
    """
    a = _as_square(m)
    _kernels.hessenberg_inplace(a)
    return a


def qr_eigenvalues(h) -> EigenReport:
    """All eigenvalues of an upper-Hessenberg matrix by shifted QR with deflation.

    Non-convergence (more than ``30*N`` iterations spent on one eigenvalue) is
    reported through ``converged=False``; ``values`` is still filled.
    """
    a = _as_square(h)
    n = a.shape[0]
    if np.any(np.tril(a, -2)):
        raise ValueError("qr_eigenvalues expects an upper-Hessenberg matrix")
    w = np.zeros(n, dtype=np.complex128)
    if n == 0:
        return EigenReport(w, 0, float("nan"), True)
    its, ok = _kernels.hessenberg_qr_inplace(
        a, w, ITERATION_CAP_FACTOR * n, DEFLATION_SAFETY * _kernels.UNIT_ROUNDOFF
    )
    return EigenReport(sort_values(w), int(its), float("nan"), bool(ok))


def eigvals(m, *, balanced: bool = True) -> EigenReport:
    """Eigenvalues of an arbitrary dense complex matrix (no residual check)."""
    a = _as_square(m)
    if balanced:
        a, _ = balance(a)
    return qr_eigenvalues(hessenberg_reduce(a))


def _tridiagonal_parts(h) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    m = h.matrix if isinstance(h, Hamiltonian) else np.asarray(h, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] > 2 and (np.any(np.tril(m, -2)) or np.any(np.triu(m, 2))):
        raise ValueError("matrix is not tridiagonal")
    return (
        np.ascontiguousarray(np.diag(m, -1), dtype=np.complex128),
        np.ascontiguousarray(np.diag(m), dtype=np.complex128),
        np.ascontiguousarray(np.diag(m, 1), dtype=np.complex128),
    )


def determinant(h) -> complex:
    """Determinant of a tridiagonal matrix by LU with partial pivoting."""
    dl, d, du = _tridiagonal_parts(h)
    return complex(_kernels.tridiag_det(dl, d, du))


def validate_spectrum(h, values) -> float:
    """Largest validation residual of ``values`` as eigenvalues of tridiagonal ``h``.

    For each value this takes the max of two relative residuals: the Newton
    correction ``|p(lam) / p'(lam)| / ||H||`` of the characteristic polynomial
    ``p``, and ``||Hv - lam v|| / ||H||`` after one inverse-iteration step.
    """
    dl, d, du = _tridiagonal_parts(h)
    vals = np.asarray(values, dtype=np.complex128).ravel()
    if len(vals) != len(d):
        raise ValueError(f"expected {len(d)} values, got {len(vals)}")
    norm = float(np.sqrt(np.sum(np.abs(d) ** 2) + np.sum(np.abs(dl) ** 2) + np.sum(np.abs(du) ** 2)))
    worst = 0.0
    for lam in vals:
        poly = _kernels.charpoly_newton_step(dl, d, du, lam) / max(norm, _kernels.TINY)
        vec = _kernels.inverse_iteration_residual(dl, d, du, lam, INVERSE_ITERATION_SHIFT, norm)
        worst = max(worst, poly, vec)
    return float(worst)


def polish(h, values) -> np.ndarray:
    """Newton-refine eigenvalues of tridiagonal ``h`` on its characteristic polynomial.

    QR delivers eigenvalues to an absolute accuracy of about ``u * ||H||``; the
    exponentially small edge-mode energies need relative accuracy, which the
    three-term recurrence provides.  Isolated eigenvalues only.
    """
    dl, d, du = _tridiagonal_parts(h)
    w = np.array(values, dtype=np.complex128).ravel()
    if len(w) != len(d):
        raise ValueError(f"expected {len(d)} values, got {len(w)}")
    _kernels.newton_polish_inplace(dl, d, du, w, POLISH_STEPS, POLISH_GAP_FRACTION)
    return sort_values(w)


def eigenvalues(h: Hamiltonian) -> EigenReport:
    """Sorted, polished and validated eigenvalues of a model Hamiltonian."""
    report = eigvals(h.matrix)
    values = polish(h, report.values) if report.converged else report.values
    residual = validate_spectrum(h, values)
    return EigenReport(values, report.iterations, residual, report.converged)


def require_converged(report: EigenReport) -> EigenReport:
    if not report.converged:
        raise NotConvergedError(
            f"QR iteration did not converge after {report.iterations} iterations"
        )
    return report


def match_distance(a, b) -> float:
    """Largest gap after greedy minimum-distance pairing of two multisets.

    Repeatedly pairs the globally closest remaining ``(a_i, b_j)``; returns
    ``inf`` for multisets of different size.
    """
    a = np.asarray(a, dtype=np.complex128).ravel()
    b = np.asarray(b, dtype=np.complex128).ravel()
    if len(a) != len(b):
        return float("inf")
    if len(a) == 0:
        return 0.0
    dist = np.abs(a[:, None] - b[None, :])
    worst = 0.0
    for _ in range(len(a)):
        i, j = np.unravel_index(np.argmin(dist), dist.shape)
        worst = max(worst, float(dist[i, j]))
        dist[i, :] = np.inf
        dist[:, j] = np.inf
    return worst
