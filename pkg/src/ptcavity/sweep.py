"""Spectra over parameter grids and the kappa thresholds between PT phases.

Thresholds are found by scanning ``kappa`` on a coarse grid that starts at
the bracket tolerance, locating the first grid interval where a predicate on
the classifier counts flips, and bisecting that interval.  Predicates:

* first transition: the phase becomes broken;
* second transition: after quartets ``+-a +-ib`` have appeared, no genuinely
  complex eigenvalue is left and at least one is purely imaginary;
* odd-chain events: at ``cos(phi) = 0`` a purely imaginary pair appears next
  to the zero mode; elsewhere the number of purely imaginary eigenvalues goes
  from one to three.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .classify import Counts, Spectrum, classify_spectrum
from .eigen import EigenReport, NotConvergedError, eigenvalues
from .model import ModelParams, build_hamiltonian

DEFAULT_SCAN_POINTS = 64
DEFAULT_BRACKET_TOL = 1e-3
BOUNDARY_COS_TOL = 1e-9


class Transition(enum.Enum):
    FIRST = "first"
    SECOND = "second"


class Status(enum.Enum):
    OK = "ok"
    ZERO = "zero"
    NONE = "none"


@dataclass(frozen=True, eq=False)
class SweepRow:
    point: float
    spectrum: Spectrum
    report: EigenReport

    @property
    def converged(self) -> bool:
        return self.report.converged


@dataclass(frozen=True, eq=False)
class SweepTable:
    axis: str
    grid: np.ndarray
    rows: tuple[SweepRow, ...]
    base: ModelParams

    @property
    def converged(self) -> bool:
        return all(r.converged for r in self.rows)

    def counts(self) -> list[Counts]:
        return [r.spectrum.counts for r in self.rows]


@dataclass(frozen=True)
class Threshold:
    """Result of one threshold search at fixed ``phi``.

    ``kappa`` is the midpoint of the final bracket for ``Status.OK``, exactly 0
    for ``Status.ZERO`` and ``None`` for ``Status.NONE``.
    """

    phi: float
    status: Status
    kappa: float | None = None
    bracket: tuple[float, float] | None = None
    diagnostics: tuple[str, ...] = ()
    evaluations: int = 0

    @property
    def width(self) -> float:
        return 0.0 if self.bracket is None else self.bracket[1] - self.bracket[0]


@dataclass(frozen=True, eq=False)
class CriticalCurve:
    phi_grid: np.ndarray
    thresholds: tuple[Threshold, ...]
    which: Transition
    bracket_tol: float

    @property
    def kappa_values(self) -> np.ndarray:
        """Thresholds as floats: 0 for the zero marker, NaN where none was found."""
        return np.array([np.nan if t.kappa is None else t.kappa for t in self.thresholds])


@dataclass(frozen=True)
class OddEvent:
    kind: str  # "pair" at cos(phi) = 0, "split" elsewhere
    threshold: Threshold


def solve(params: ModelParams, class_tol: float | None = None) -> tuple[Spectrum, EigenReport]:
    report = eigenvalues(build_hamiltonian(params))
    return classify_spectrum(report.values, class_tol), report


def ordered_map(fn: Callable, items: Sequence, threads: int) -> list:
    """``[fn(x) for x in items]``, optionally on a thread pool; order is preserved."""
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _check_grid(grid: Iterable[float]) -> np.ndarray:
    g = np.asarray(list(grid), dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise ValueError("grid must be a non-empty 1-d sequence")
    if np.any(np.diff(g) <= 0):
        raise ValueError("grid must be strictly increasing")
    return g


def _sweep(base: ModelParams, axis: str, grid, class_tol, threads) -> SweepTable:
    g = _check_grid(grid)
    params = [base.with_(**{axis: float(x)}) for x in g]

    def row(args):
        x, p = args
        spectrum, report = solve(p, class_tol)
        return SweepRow(float(x), spectrum, report)

    rows = ordered_map(row, list(zip(g, params)), threads)
    return SweepTable(axis=axis, grid=g, rows=tuple(rows), base=base)


def sweep_phi(base: ModelParams, grid, class_tol: float | None = None, threads: int = 1) -> SweepTable:
    """One eigensolve per ``phi`` in ``grid`` at fixed ``base.kappa``."""
    return _sweep(base, "phi", grid, class_tol, threads)


def sweep_kappa(base: ModelParams, grid, class_tol: float | None = None, threads: int = 1) -> SweepTable:
    """One eigensolve per ``kappa`` in ``grid`` at fixed ``base.phi``."""
    return _sweep(base, "kappa", grid, class_tol, threads)


class _Probe:
    """Evaluates classifier counts at ``kappa`` for fixed ``phi``; counts calls."""

    def __init__(self, base: ModelParams, phi: float, class_tol: float | None):
        self.base = base.with_(phi=phi)
        self.class_tol = class_tol
        self.calls = 0

    def __call__(self, kappa: float) -> Counts:
        self.calls += 1
        spectrum, report = solve(self.base.with_(kappa=float(kappa)), self.class_tol)
        if not report.converged:
            raise NotConvergedError(f"eigensolver did not converge at phi={self.base.phi}, kappa={kappa}")
        return spectrum.counts


def _is_broken(c: Counts) -> bool:
    return c.imag + c.complex > 0


def _has_quartets(c: Counts) -> bool:
    return c.complex > 0


def _collapsed(c: Counts) -> bool:
    return c.complex == 0 and c.imag > 0


def _check_search(kappa_max: float, tol: float, scan_points: int) -> None:
    if not tol > 0:
        raise ValueError(f"bracket tolerance must be > 0, got {tol}")
    if not kappa_max > tol:
        raise ValueError(f"kappa_max must exceed the bracket tolerance, got {kappa_max}")
    if scan_points < 2:
        raise ValueError("scan_points must be >= 2")


def _sign_changes(flags: Sequence[bool]) -> int:
    return sum(1 for a, b in zip(flags, flags[1:]) if a != b)


def _bisect(probe: _Probe, pred: Callable[[Counts], bool], lo: float, hi: float, tol: float) -> tuple[float, float]:
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(probe(mid)):
            hi = mid
        else:
            lo = mid
    return lo, hi


def _search(
    probe: _Probe,
    pred: Callable[[Counts], bool],
    kappa_max: float,
    tol: float,
    scan_points: int,
    after: Callable[[Counts], bool] | None = None,
    missing_after: str = "",
) -> Threshold:
    phi = probe.base.phi
    grid = np.linspace(tol, kappa_max, scan_points)
    counts = [probe(k) for k in grid]
    start = 0
    diagnostics: list[str] = []
    if after is not None:
        seen = [i for i, c in enumerate(counts) if after(c)]
        if not seen:
            return Threshold(phi, Status.NONE, diagnostics=(missing_after,), evaluations=probe.calls)
        start = seen[0]
    flags = [pred(c) for c in counts[start:]]
    changes = _sign_changes(flags)
    if changes > 1:
        diagnostics.append(f"non-monotone predicate: {changes} sign changes on the coarse scan")
    if start == 0 and flags[0]:
        return Threshold(phi, Status.ZERO, 0.0, (0.0, float(grid[0])), tuple(diagnostics), probe.calls)
    hits = [i for i, f in enumerate(flags) if f]
    if not hits:
        diagnostics.append(f"predicate never true for kappa <= {kappa_max}")
        return Threshold(phi, Status.NONE, diagnostics=tuple(diagnostics), evaluations=probe.calls)
    i = start + hits[0]
    lo, hi = _bisect(probe, pred, float(grid[i - 1]), float(grid[i]), tol)
    return Threshold(phi, Status.OK, 0.5 * (lo + hi), (lo, hi), tuple(diagnostics), probe.calls)


def first_transition(
    base: ModelParams,
    phi: float,
    kappa_max: float = 4.0,
    tol: float = DEFAULT_BRACKET_TOL,
    scan_points: int = DEFAULT_SCAN_POINTS,
    class_tol: float | None = None,
) -> Threshold:
    """Smallest ``kappa`` at which the spectrum leaves the unbroken phase.

    ``Status.ZERO`` means the phase is already broken at the first probe
    ``kappa = tol``.
    """
    _check_search(kappa_max, tol, scan_points)
    return _search(_Probe(base, phi, class_tol), _is_broken, kappa_max, tol, scan_points)


def second_transition(
    base: ModelParams,
    phi: float,
    kappa_max: float = 4.0,
    tol: float = DEFAULT_BRACKET_TOL,
    scan_points: int = DEFAULT_SCAN_POINTS,
    class_tol: float | None = None,
) -> Threshold:
    """Smallest ``kappa`` past the first transition where the quartets have collapsed."""
    _check_search(kappa_max, tol, scan_points)
    return _search(
        _Probe(base, phi, class_tol),
        _collapsed,
        kappa_max,
        tol,
        scan_points,
        after=_has_quartets,
        missing_after=f"no genuinely complex eigenvalues for kappa <= {kappa_max}",
    )


def odd_chain_events(
    base: ModelParams,
    phi: float,
    kappa_max: float = 4.0,
    tol: float = DEFAULT_BRACKET_TOL,
    scan_points: int = DEFAULT_SCAN_POINTS,
    class_tol: float | None = None,
) -> list[OddEvent]:
    """Transitions specific to odd chains (which are not PT symmetric off ``cos(phi) = 0``)."""
    if base.n_sites % 2 == 0:
        raise ValueError(f"odd_chain_events needs an odd number of sites, got {base.n_sites}")
    _check_search(kappa_max, tol, scan_points)
    probe = _Probe(base, phi, class_tol)
    if abs(math.cos(phi)) <= BOUNDARY_COS_TOL:
        return [OddEvent("pair", _search(probe, lambda c: c.imag >= 2, kappa_max, tol, scan_points))]
    found = _search(probe, lambda c: c.imag >= 3, kappa_max, tol, scan_points)
    baseline = probe(tol)
    if baseline.imag != 1:
        note = f"expected one purely imaginary eigenvalue at kappa={tol}, found {baseline.imag}"
        found = Threshold(found.phi, found.status, found.kappa, found.bracket, found.diagnostics + (note,), found.evaluations)
    return [OddEvent("split", found)]


def critical_curve(
    base: ModelParams,
    phi_grid,
    which: Transition | str = Transition.FIRST,
    kappa_max: float = 4.0,
    tol: float = DEFAULT_BRACKET_TOL,
    scan_points: int = DEFAULT_SCAN_POINTS,
    class_tol: float | None = None,
    threads: int = 1,
) -> CriticalCurve:
    """Threshold of ``which`` transition at every ``phi`` in ``phi_grid``."""
    which = Transition(which)
    grid = _check_grid(phi_grid)
    finder = first_transition if which is Transition.FIRST else second_transition

    def one(phi):
        return finder(base, float(phi), kappa_max, tol, scan_points, class_tol)

    thresholds = ordered_map(one, list(grid), threads)
    widths = [t.width for t in thresholds if t.status is Status.OK]
    return CriticalCurve(grid, tuple(thresholds), which, max(widths, default=tol))
