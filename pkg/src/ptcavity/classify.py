"""Label eigenvalues as real, purely imaginary, genuinely complex or zero.

A spectrum is in the unbroken PT phase when every eigenvalue is real (or
zero) within the classification tolerance.  Non-real eigenvalues of a
PT-symmetric chain come as conjugate pairs ``+-ib`` or as quartets
``+-a +-ib``; :func:`pairing_structure` recovers that grouping.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .eigen import sort_values

CLASS_TOL_FACTOR = 1e-7
DEFAULT_ZERO_TOL = 1e-6
PAIR_TOL_FACTOR = 1e-6


class EigClass(enum.Enum):
    REAL = "Real"
    PURELY_IMAGINARY = "PurelyImaginary"
    GENUINELY_COMPLEX = "GenuinelyComplex"
    ZERO = "Zero"

    @property
    def is_real(self) -> bool:
        return self in (EigClass.REAL, EigClass.ZERO)


class Phase(enum.Enum):
    UNBROKEN = "unbroken"
    BROKEN = "broken"


class Counts(NamedTuple):
    real: int
    imag: int
    complex: int
    zero: int


def _radius(values) -> float:
    v = np.asarray(values, dtype=np.complex128)
    return float(np.max(np.abs(v))) if v.size else 0.0


def default_tolerance(values) -> float:
    """``1e-7 * (1 + spectral radius)``."""
    return CLASS_TOL_FACTOR * (1.0 + _radius(values))


def classify_value(z: complex, tol: float) -> EigClass:
    re_small = abs(z.real) <= tol
    im_small = abs(z.imag) <= tol
    if re_small and im_small:
        return EigClass.ZERO
    if im_small:
        return EigClass.REAL
    if re_small:
        return EigClass.PURELY_IMAGINARY
    return EigClass.GENUINELY_COMPLEX


@dataclass(frozen=True, eq=False)
class Spectrum:
    values: np.ndarray
    classes: tuple[EigClass, ...]
    tol: float
    phase: Phase
    counts: Counts

    def __len__(self) -> int:
        return len(self.values)

    @property
    def broken(self) -> bool:
        return self.phase is Phase.BROKEN

    def of_class(self, cls: EigClass) -> np.ndarray:
        return self.values[[c is cls for c in self.classes]]


def classify_spectrum(values, tol: float | None = None) -> Spectrum:
    """Sort ``values`` and label each one; ``tol=None`` picks :func:`default_tolerance`."""
    v = sort_values(np.asarray(values, dtype=np.complex128).ravel())
    if tol is None:
        tol = default_tolerance(v)
    if not tol > 0:
        raise ValueError(f"classification tolerance must be > 0, got {tol}")
    classes = tuple(classify_value(z, tol) for z in v)
    counts = Counts(
        real=classes.count(EigClass.REAL),
        imag=classes.count(EigClass.PURELY_IMAGINARY),
        complex=classes.count(EigClass.GENUINELY_COMPLEX),
        zero=classes.count(EigClass.ZERO),
    )
    phase = Phase.UNBROKEN if counts.imag == counts.complex == 0 else Phase.BROKEN
    return Spectrum(values=v, classes=classes, tol=float(tol), phase=phase, counts=counts)


@dataclass(frozen=True)
class PairingReport:
    """Grouping of the non-real eigenvalues of one spectrum.

    ``mirror_unmatched`` counts eigenvalues (of any class) with no partner
    under ``lam -> -conj(lam)``; it is zero for every layout at ``epsilon = 0``.
    """

    quartets: tuple[tuple[complex, complex, complex, complex], ...] = ()
    pairs: tuple[tuple[complex, complex], ...] = ()
    unmatched: tuple[complex, ...] = ()
    mirror_unmatched: int = 0
    tol: float = field(default=0.0, compare=False)

    @property
    def imaginary_pairs(self) -> int:
        """Conjugate pairs whose members are both (numerically) on the imaginary axis."""
        return sum(1 for a, b in self.pairs if abs(a.real) <= self.tol and abs(b.real) <= self.tol)


def _take_partner(pool: list[int], values: np.ndarray, target: complex, tol: float) -> int | None:
    best = None
    best_dist = tol
    for idx in pool:
        dist = abs(values[idx] - target)
        if dist <= best_dist:
            best, best_dist = idx, dist
    if best is not None:
        pool.remove(best)
    return best


def _mirror_unmatched(values: np.ndarray, tol: float) -> int:
    pool = list(range(len(values)))
    lonely = 0
    while pool:
        i = pool.pop(0)
        target = -np.conj(values[i])
        if abs(target - values[i]) <= tol:
            continue  # on the imaginary axis: its own mirror image
        if _take_partner(pool, values, target, tol) is None:
            lonely += 1
    return lonely


def pairing_structure(spec: Spectrum, pair_tol: float | None = None) -> PairingReport:
    """Group non-real eigenvalues into quartets, then conjugate pairs.

    Quartets ``{lam, conj lam, -lam, -conj lam}`` are matched first, seeded in
    order of increasing ``|Re lam|``; the remaining non-real values are paired
    with their conjugates.  Matching is greedy by distance within ``pair_tol``
    (default ``1e-6 * (1 + spectral radius)``).
    """
    values = spec.values
    if pair_tol is None:
        pair_tol = PAIR_TOL_FACTOR * (1.0 + _radius(values))
    nonreal = [i for i, c in enumerate(spec.classes) if not c.is_real]

    complex_pool = sorted(
        (i for i in nonreal if spec.classes[i] is EigClass.GENUINELY_COMPLEX),
        key=lambda i: (abs(values[i].real), values[i].real, values[i].imag),
    )
    quartets = []
    leftovers = []
    while complex_pool:
        seed = complex_pool.pop(0)
        lam = values[seed]
        trial = list(complex_pool)
        partners = [_take_partner(trial, values, t, pair_tol) for t in (np.conj(lam), -lam, -np.conj(lam))]
        if all(p is not None for p in partners):
            complex_pool = trial
            quad = [lam] + [values[p] for p in partners]
            quartets.append(tuple(complex(q) for q in sorted(quad, key=lambda z: (z.real, z.imag))))
        else:
            leftovers.append(seed)

    pool = sorted(
        leftovers + [i for i in nonreal if spec.classes[i] is EigClass.PURELY_IMAGINARY],
        key=lambda i: (abs(values[i].real), values[i].real, values[i].imag),
    )
    pairs = []
    unmatched = []
    while pool:
        i = pool.pop(0)
        j = _take_partner(pool, values, np.conj(values[i]), pair_tol)
        if j is None:
            unmatched.append(complex(values[i]))
        else:
            a, b = sorted((complex(values[i]), complex(values[j])), key=lambda z: (z.imag, z.real))
            pairs.append((a, b))

    return PairingReport(
        quartets=tuple(quartets),
        pairs=tuple(pairs),
        unmatched=tuple(sorted(unmatched, key=lambda z: (z.real, z.imag))),
        mirror_unmatched=_mirror_unmatched(values, pair_tol),
        tol=spec.tol,
    )


def count_zero_modes(spec: Spectrum, zero_tol: float = DEFAULT_ZERO_TOL) -> int:
    """Number of eigenvalues with ``|lam| <= zero_tol``."""
    if not zero_tol > 0:
        raise ValueError(f"zero-mode tolerance must be > 0, got {zero_tol}")
    return int(np.count_nonzero(np.abs(spec.values) <= zero_tol))
