"""Effective Hamiltonians of a dimerized coupled-cavity array with gain and loss.

The array has ``N`` single-mode cavities with alternating photon hopping
``J1 = 1 - delta*cos(phi)`` (bonds starting on odd sites, 1-based) and
``J2 = 1 + delta*cos(phi)`` (bonds starting on even sites).  Energies are in
units of the mean hopping ``J = 1``.  A uniform real on-site energy
``epsilon`` shifts every eigenvalue by ``epsilon``; a passive cavity adds
``-i*kappa`` and an active cavity ``+i*kappa`` on its site.

Sites are labelled ``1..N`` everywhere in the public API.  The dense matrix
stored on :class:`Hamiltonian` is indexed from zero, as numpy arrays are.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np


class GainLossLayout(enum.Enum):
    """Where the passive (``-i*kappa``) and active (``+i*kappa``) cavities sit."""

    HERMITIAN = "hermitian"
    END_PAIR = "end-pair"  # loss on site 1, gain on site N
    INNER_PAIR = "inner-pair"  # loss on site 2, gain on site N-1
    STAGGERED = "staggered"  # loss on odd sites, gain on even sites

    @classmethod
    def parse(cls, name: str) -> GainLossLayout:
        key = name.strip().lower().replace("_", "-")
        for member in cls:
            if member.value == key:
                return member
        valid = ", ".join(m.value for m in cls)
        raise ValueError(f"unknown layout {name!r}; expected one of: {valid}")


class InvalidParameters(ValueError):
    """Raised when a :class:`ModelParams` violates the model's validity range."""


@dataclass(frozen=True)
class ModelParams:
    """One lattice instance.

    Parameters
    ----------
    n_sites : int
        Number of cavities ``N`` (at least 2; at least 4 for the inner-pair layout).
    delta : float
        Modulation strength, ``|delta| <= 1``.
    phi : float
        Cyclic modulation angle in radians, ``0 <= phi <= 2*pi``.
    kappa : float
        Effective loss rate of the passive cavity (equal to the gain rate of the
        active one), ``kappa >= 0``.
    epsilon : float
        Uniform real on-site energy.
    layout : GainLossLayout
    """

    n_sites: int
    delta: float = 0.5
    phi: float = 0.0
    kappa: float = 0.0
    epsilon: float = 0.0
    layout: GainLossLayout = GainLossLayout.END_PAIR

    def __post_init__(self) -> None:
        if isinstance(self.layout, str):
            object.__setattr__(self, "layout", GainLossLayout.parse(self.layout))
        self.validate()

    def validate(self) -> None:
        n = self.n_sites
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
            raise InvalidParameters(f"n_sites must be an integer, got {n!r}")
        if n < 2:
            raise InvalidParameters(f"n_sites must be >= 2, got {n}")
        if self.layout is GainLossLayout.INNER_PAIR and n < 4:
            raise InvalidParameters(f"inner-pair layout needs n_sites >= 4, got {n}")
        for name in ("delta", "phi", "kappa", "epsilon"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameters(f"{name} must be finite")
        if abs(self.delta) > 1.0:
            raise InvalidParameters(f"|delta| must be <= 1, got {self.delta}")
        if not 0.0 <= self.phi <= 2.0 * math.pi:
            raise InvalidParameters(f"phi must lie in [0, 2*pi], got {self.phi}")
        if self.kappa < 0.0:
            raise InvalidParameters(f"kappa must be >= 0, got {self.kappa}")

    def with_(self, **changes) -> ModelParams:
        """Copy with some fields replaced (re-validated)."""
        return replace(self, **changes)


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """Dense ``N x N`` complex matrix together with the parameters it came from."""

    matrix: np.ndarray
    params: ModelParams

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self.matrix).copy()

    @property
    def hoppings(self) -> np.ndarray:
        """Bond amplitudes ``H(i, i+1)`` for ``i = 1..N-1``."""
        return np.diag(self.matrix, 1).copy()


def coupling_strengths(delta: float, phi: float) -> tuple[float, float]:
    """Return the alternating hoppings ``(J1, J2)`` in units of ``J``."""
    c = delta * math.cos(phi)
    return 1.0 - c, 1.0 + c


def onsite_gain_loss(layout: GainLossLayout, n_sites: int, kappa: float) -> np.ndarray:
    """Imaginary on-site terms of ``layout`` (zero-based array of length ``n_sites``)."""
    terms = np.zeros(n_sites, dtype=complex)
    if layout is GainLossLayout.END_PAIR:
        terms[0], terms[-1] = -1j * kappa, 1j * kappa
    elif layout is GainLossLayout.INNER_PAIR:
        terms[1], terms[-2] = -1j * kappa, 1j * kappa
    elif layout is GainLossLayout.STAGGERED:
        # zero-based even index == 1-based odd site
        terms[0::2] = -1j * kappa
        terms[1::2] = 1j * kappa
    return terms


def build_hamiltonian(params: ModelParams) -> Hamiltonian:
    """Assemble the tridiagonal, complex-symmetric Hamiltonian for ``params``."""
    params.validate()
    n = params.n_sites
    j1, j2 = coupling_strengths(params.delta, params.phi)
    bonds = np.where(np.arange(n - 1) % 2 == 0, j1, j2)

    h = np.zeros((n, n), dtype=complex)
    idx = np.arange(n - 1)
    h[idx, idx + 1] = bonds
    h[idx + 1, idx] = bonds
    h[np.arange(n), np.arange(n)] = params.epsilon + onsite_gain_loss(
        params.layout, n, params.kappa
    )
    return Hamiltonian(matrix=h, params=params)


def pt_residual(h: Hamiltonian | np.ndarray) -> float:
    """Largest entry of ``|P conj(H) P - H|`` with ``P`` the site reversal.

    Zero exactly when ``H`` is invariant under parity (``i -> N+1-i``)
    combined with complex conjugation.
    """
    m = h.matrix if isinstance(h, Hamiltonian) else np.asarray(h)
    mirrored = np.conj(m)[::-1, ::-1]
    return float(np.max(np.abs(mirrored - m)))
