import math

import numpy as np
import pytest

from ptcavity.classify import Counts, EigClass
from ptcavity.eigen import NotConvergedError, eigenvalues
from ptcavity.model import ModelParams
from ptcavity.sweep import (
    Status,
    Transition,
    critical_curve,
    first_transition,
    odd_chain_events,
    second_transition,
    solve,
    sweep_kappa,
    sweep_phi,
)

from conftest import PI

END50 = ModelParams(50, 0.5, layout="end-pair")
INNER50 = ModelParams(50, 0.5, layout="inner-pair")
STAG50 = ModelParams(50, 0.5, layout="staggered")


def test_sweep_phi_end_pair_small_kappa():
    table = sweep_phi(END50.with_(kappa=0.1), [0.0, PI / 2, PI])
    assert table.converged and len(table.rows) == 3
    at0, _, atpi = table.counts()
    assert at0 == Counts(48, 2, 0, 0)
    assert atpi == Counts(50, 0, 0, 0)
    assert all(len(r.spectrum) == 50 for r in table.rows)


def test_sweep_phi_two_imaginary_pairs():
    (row,) = sweep_phi(END50.with_(kappa=3.3), [PI]).counts()
    assert row == Counts(46, 4, 0, 0)


def test_sweep_kappa_nontrivial_breaks_immediately():
    table = sweep_kappa(END50, [0.0, 0.01, 0.5, 1.0])
    assert not table.rows[0].spectrum.broken
    assert all(r.spectrum.broken for r in table.rows[1:])


def test_sweep_kappa_unbroken_below_boundary_threshold():
    table = sweep_kappa(END50.with_(phi=PI / 2), np.linspace(0, 0.99, 12))
    assert not any(r.spectrum.broken for r in table.rows)


def test_sweep_kappa_staggered_fully_imaginary():
    (row,) = sweep_kappa(STAG50.with_(phi=PI), [2.5]).rows
    assert set(row.spectrum.classes) <= {EigClass.PURELY_IMAGINARY, EigClass.ZERO}


@pytest.mark.parametrize("grid", [[0.3, 0.2], [0.1, 0.1], []])
def test_sweep_rejects_bad_grid(grid):
    with pytest.raises(ValueError):
        sweep_kappa(END50, grid)


def test_threads_preserve_order():
    grid = np.linspace(0, 2 * PI, 17)
    one = sweep_phi(END50.with_(kappa=0.8), grid, threads=1)
    many = sweep_phi(END50.with_(kappa=0.8), grid, threads=4)
    for a, b in zip(one.rows, many.rows):
        assert a.point == b.point
        np.testing.assert_array_equal(a.spectrum.values, b.spectrum.values)


@pytest.mark.parametrize(
    "base, phi, expected, tol",
    [(END50, PI, 0.502, 0.01), (END50, PI / 2, 1.00, 0.01), (END50, 3 * PI / 2, 1.00, 0.01), (INNER50, 0.0, 0.474, 0.01)],
)
def test_first_transition(base, phi, expected, tol):
    t = first_transition(base, phi)
    assert t.status is Status.OK
    assert abs(t.kappa - expected) <= tol
    lo, hi = t.bracket
    assert hi - lo <= 1e-3 and lo <= t.kappa <= hi
    assert not solve(base.with_(phi=phi, kappa=lo))[0].broken
    assert solve(base.with_(phi=phi, kappa=hi))[0].broken


def test_first_transition_zero_marker():
    t = first_transition(END50, 0.3)
    assert t.status is Status.ZERO and t.kappa == 0.0


def test_first_transition_none_marker():
    t = first_transition(END50, PI, kappa_max=0.3)
    assert t.status is Status.NONE and t.kappa is None
    assert any("never" in d for d in t.diagnostics)


@pytest.mark.parametrize(
    "base, phi, expected", [(END50, PI, 2.91), (INNER50, 0.0, 3.08), (INNER50, PI, 3.08)]
)
def test_second_transition(base, phi, expected):
    t = second_transition(base, phi)
    assert t.status is Status.OK
    assert abs(t.kappa - expected) <= 0.02
    assert solve(base.with_(phi=phi, kappa=t.bracket[1]))[0].counts.complex == 0


def test_second_transition_none_without_quartets():
    assert second_transition(END50, 0.0).status is Status.NONE


def test_reflection_symmetry_of_thresholds():
    for phi in (2.0, 2.6):
        a = first_transition(END50, phi)
        b = first_transition(END50, 2 * PI - phi)
        assert a.status is b.status
        assert abs(a.kappa - b.kappa) <= 2e-3


def test_grid_refinement_is_stable():
    coarse = first_transition(END50, 2.5)
    fine = first_transition(END50, 2.5, scan_points=128)
    assert abs(coarse.kappa - fine.kappa) <= 1e-3


@pytest.mark.parametrize("bad", [dict(tol=0.0), dict(tol=-1e-3), dict(kappa_max=1e-4), dict(scan_points=1)])
def test_search_rejects(bad):
    with pytest.raises(ValueError):
        first_transition(END50, PI, **bad)


def test_critical_curve_end_pair():
    grid = np.linspace(PI / 2, 3 * PI / 2, 9)
    curve = critical_curve(END50, grid, Transition.FIRST, threads=2)
    k = curve.kappa_values
    assert abs(k[4] - 0.502) <= 0.01
    assert abs(k[0] - 1.0) <= 0.01 and abs(k[-1] - 1.0) <= 0.01
    assert np.argmin(k) == 4
    assert np.all(np.diff(k[:5]) < 0) and np.all(np.diff(k[4:]) > 0)
    assert curve.bracket_tol <= 1e-3


def test_critical_curve_none_is_nan():
    curve = critical_curve(END50, [0.0, PI], "second")
    assert math.isnan(curve.kappa_values[0]) and abs(curve.kappa_values[1] - 2.91) <= 0.02


def test_odd_chain_pair_event():
    (event,) = odd_chain_events(ModelParams(51, 0.5, layout="end-pair"), PI / 2)
    assert event.kind == "pair"
    assert abs(event.threshold.kappa - 1.01) <= 0.02


def test_odd_chain_split_event():
    (event,) = odd_chain_events(ModelParams(51, 0.5, layout="end-pair"), 2.5)
    assert event.kind == "split" and event.threshold.status is Status.OK
    below = solve(ModelParams(51, 0.5, 2.5, event.threshold.bracket[0], 0.0, "end-pair"))[0]
    above = solve(ModelParams(51, 0.5, 2.5, event.threshold.bracket[1], 0.0, "end-pair"))[0]
    assert below.counts.imag < 3 <= above.counts.imag


def test_odd_chain_rejects_even():
    with pytest.raises(ValueError):
        odd_chain_events(END50, PI)


def test_odd_chain_small_kappa_is_real_with_one_zero_mode():
    s, _ = solve(ModelParams(51, 0.5, PI / 2, 0.1, 0.0, "end-pair"))
    assert s.counts == Counts(50, 0, 0, 1)


def test_staggered_imaginary_count_monotone():
    table = sweep_kappa(STAG50.with_(phi=PI / 2), np.linspace(0, 3, 31))
    imag = [c.imag for c in table.counts()]
    assert all(a <= b for a, b in zip(imag, imag[1:]))
    assert imag[20] == 50


def test_large_kappa_trend():
    # trivial regime, strong gain/loss: the inner imaginary pair shrinks roughly as 1/kappa
    sizes = []
    for kappa in (5.0, 10.0, 20.0):
        s, _ = solve(END50.with_(phi=PI, kappa=kappa))
        assert s.counts == Counts(46, 4, 0, 0)
        sizes.append(np.min(np.abs(s.of_class(EigClass.PURELY_IMAGINARY).imag)))
    assert sizes[0] > sizes[1] > sizes[2]
    assert sizes[2] * 20 == pytest.approx(sizes[1] * 10, rel=0.05)


def test_probe_raises_on_nonconvergence(monkeypatch):
    import ptcavity.sweep as sweep_mod
    from ptcavity.eigen import EigenReport

    real = sweep_mod.eigenvalues

    def broken(h):
        r = real(h)
        return EigenReport(r.values, r.iterations, r.max_residual, False)

    monkeypatch.setattr(sweep_mod, "eigenvalues", broken)
    with pytest.raises(NotConvergedError):
        first_transition(END50, PI)
    assert not sweep_phi(END50, [0.0]).converged
