"""Command-line front end writing deterministic CSV.

Exit codes: 0 success, 2 configuration error, 3 eigensolver non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import re
import sys
from dataclasses import dataclass, field

import numpy as np

from .classify import DEFAULT_ZERO_TOL, count_zero_modes
from .eigen import NotConvergedError
from .model import GainLossLayout, InvalidParameters, ModelParams, build_hamiltonian, pt_residual
from .sweep import (
    DEFAULT_BRACKET_TOL,
    DEFAULT_SCAN_POINTS,
    Threshold,
    Transition,
    first_transition,
    odd_chain_events,
    ordered_map,
    second_transition,
    sweep_kappa,
    sweep_phi,
)

FORMAT_VERSION = "1"
EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NOT_CONVERGED = 3
PT_THRESHOLD = 1e-12
DEFAULT_PHI_POINTS = 501
DEFAULT_KAPPA_GRID = "0:4:401"

_ANGLE = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)?)\*?pi(?:/(\d+\.?\d*))?$")


class ConfigError(ValueError):
    """Invalid command-line configuration."""


def parse_angle(text: str) -> float:
    """Radians, or a multiple of pi such as ``pi/2``, ``pi``, ``3pi/2``, ``2pi``."""
    token = text.strip().lower().replace(" ", "")
    m = _ANGLE.match(token)
    if m:
        factor = m.group(1)
        if factor in ("", "+"):
            factor = "1"
        elif factor == "-":
            factor = "-1"
        value = float(factor) * math.pi
        if m.group(2):
            value /= float(m.group(2))
        return value
    try:
        return float(token)
    except ValueError:
        raise ConfigError(f"cannot parse angle {text!r}") from None


def parse_grid(text: str, angle: bool = False) -> np.ndarray:
    """``start:stop:count`` (inclusive linspace) or a comma-separated list."""
    conv = parse_angle if angle else _parse_float
    text = text.strip()
    if not text:
        raise ConfigError("empty grid")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range grid must be start:stop:count, got {text!r}")
        try:
            count = int(parts[2])
        except ValueError:
            raise ConfigError(f"grid count must be an integer, got {parts[2]!r}") from None
        if count < 1:
            raise ConfigError("grid count must be >= 1")
        return np.linspace(conv(parts[0]), conv(parts[1]), count)
    return np.array([conv(p) for p in text.split(",")], dtype=float)


def _parse_float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"cannot parse number {text!r}") from None


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: ModelParams
    phi_grid: np.ndarray = field(default_factory=lambda: np.zeros(0))
    kappa_grid: np.ndarray = field(default_factory=lambda: np.zeros(0))
    tol_class: float | None = None
    tol_zero: float = DEFAULT_ZERO_TOL
    tol_bracket: float = DEFAULT_BRACKET_TOL
    kappa_max: float = 4.0
    scan_points: int = DEFAULT_SCAN_POINTS
    which: str = "first"
    out: str | None = None
    threads: int = 1
    format_version: str = FORMAT_VERSION

    def validate(self) -> None:
        for name in ("tol_zero", "tol_bracket", "kappa_max"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"{name.replace('_', '-')} must be positive, got {value}")
        if self.tol_class is not None and not (math.isfinite(self.tol_class) and self.tol_class > 0):
            raise ConfigError(f"tol-class must be positive, got {self.tol_class}")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.scan_points < 2:
            raise ConfigError("scan-points must be >= 2")
        if self.format_version != FORMAT_VERSION:
            raise ConfigError(f"unsupported format version {self.format_version!r}")
        if self.command in ("spectrum", "critical", "zero-modes"):
            _check_axis(self.phi_grid, "phi", 0.0, 2.0 * math.pi)
        if self.command == "sweep":
            _check_axis(self.kappa_grid, "kappa", 0.0, math.inf)
        if self.command == "critical" and self.kappa_max <= self.tol_bracket:
            raise ConfigError("kappa-max must exceed tol-bracket")
        if self.command == "critical" and self.which == "odd-events" and self.params.n_sites % 2 == 0:
            raise ConfigError("--which odd-events needs an odd --n")


def _check_axis(grid: np.ndarray, name: str, lo: float, hi: float) -> None:
    if grid.size == 0:
        raise ConfigError(f"{name} grid is empty")
    if not np.all(np.isfinite(grid)):
        raise ConfigError(f"{name} grid has non-finite entries")
    if np.any(np.diff(grid) <= 0):
        raise ConfigError(f"{name} grid must be strictly increasing")
    if grid[0] < lo or grid[-1] > hi:
        raise ConfigError(f"{name} grid must lie within [{lo}, {hi}]")


def _fmt(x: float) -> str:
    return f"{float(x) + 0.0:.12g}"


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _spectrum_rows(table):
    for row in table.rows:
        for index, (z, cls) in enumerate(zip(row.spectrum.values, row.spectrum.classes), start=1):
            yield [_fmt(row.point), index, _fmt(z.real), _fmt(z.imag), cls.value]


def cmd_spectrum(cfg: RunConfig) -> tuple[str, int]:
    table = sweep_phi(cfg.params, cfg.phi_grid, cfg.tol_class, cfg.threads)
    status = EXIT_OK if table.converged else EXIT_NOT_CONVERGED
    return _csv(["phi", "index", "re", "im", "class"], _spectrum_rows(table)), status


def cmd_sweep(cfg: RunConfig) -> tuple[str, int]:
    table = sweep_kappa(cfg.params, cfg.kappa_grid, cfg.tol_class, cfg.threads)
    status = EXIT_OK if table.converged else EXIT_NOT_CONVERGED
    return _csv(["kappa", "index", "re", "im", "class"], _spectrum_rows(table)), status


def _threshold_row(t: Threshold, which: str) -> list[str]:
    kappa = "" if t.kappa is None else _fmt(t.kappa)
    return [_fmt(t.phi), which, kappa, t.status.value]


def cmd_critical(cfg: RunConfig) -> tuple[str, int]:
    args = (cfg.kappa_max, cfg.tol_bracket, cfg.scan_points, cfg.tol_class)
    if cfg.which == "odd-events":
        def one(phi):
            return [_threshold_row(e.threshold, f"odd-{e.kind}") for e in odd_chain_events(cfg.params, float(phi), *args)]
    else:
        finder = first_transition if Transition(cfg.which) is Transition.FIRST else second_transition

        def one(phi):
            return [_threshold_row(finder(cfg.params, float(phi), *args), cfg.which)]

    rows = [r for chunk in ordered_map(one, list(cfg.phi_grid), cfg.threads) for r in chunk]
    return _csv(["phi", "which", "kappa_c", "status"], rows), EXIT_OK


def cmd_zero_modes(cfg: RunConfig) -> tuple[str, int]:
    table = sweep_phi(cfg.params, cfg.phi_grid, cfg.tol_class, cfg.threads)
    rows = [[_fmt(r.point), count_zero_modes(r.spectrum, cfg.tol_zero)] for r in table.rows]
    status = EXIT_OK if table.converged else EXIT_NOT_CONVERGED
    return _csv(["phi", "zero_modes"], rows), status


def cmd_pt_check(cfg: RunConfig) -> tuple[str, int]:
    residual = pt_residual(build_hamiltonian(cfg.params))
    verdict = "symmetric" if residual <= PT_THRESHOLD else "asymmetric"
    return f"pt_residual: {_fmt(residual)}\nverdict: {verdict}\n", EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
    "critical": cmd_critical,
    "zero-modes": cmd_zero_modes,
    "pt-check": cmd_pt_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--layout", default="end-pair", choices=[m.value for m in GainLossLayout])
    common.add_argument("--n", type=int, default=50, help="number of cavities")
    common.add_argument("--delta", type=float, default=0.5)
    common.add_argument("--phi", help="single angle (radians or pi/2, pi, 3pi/2, ...)")
    common.add_argument("--phi-grid", help=f"start:stop:count or comma list (default 0:2pi:{DEFAULT_PHI_POINTS})")
    common.add_argument("--kappa", type=float, default=0.0)
    common.add_argument("--kappa-grid", help=f"start:stop:count or comma list (default {DEFAULT_KAPPA_GRID})")
    common.add_argument("--epsilon", type=float, default=0.0, help="uniform real on-site energy")
    common.add_argument("--tol-class", type=float, help="classification tolerance (default 1e-7*(1+radius))")
    common.add_argument("--tol-zero", type=float, default=DEFAULT_ZERO_TOL)
    common.add_argument("--tol-bracket", type=float, default=DEFAULT_BRACKET_TOL)
    common.add_argument("--kappa-max", type=float, default=4.0)
    common.add_argument("--scan-points", type=int, default=DEFAULT_SCAN_POINTS)
    common.add_argument("--which", default="first", choices=["first", "second", "odd-events"])
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--format-version", default=FORMAT_VERSION)

    parser = argparse.ArgumentParser(
        prog="ptcavity",
        description="Spectra and PT-breaking thresholds of non-Hermitian SSH cavity arrays.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "spectrum": "eigenvalues over a phi grid at fixed kappa",
        "sweep": "eigenvalues over a kappa grid at fixed phi",
        "critical": "transition thresholds kappa_c(phi)",
        "zero-modes": "count near-zero eigenvalues over a phi grid",
        "pt-check": "PT-symmetry residual of one Hamiltonian",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text, description=text)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    if ns.phi is not None and ns.phi_grid is not None:
        raise ConfigError("give at most one of --phi and --phi-grid")
    if ns.kappa_grid is not None and ns.command != "sweep":
        raise ConfigError("--kappa-grid only applies to the sweep command")
    fixed_phi = ns.command in ("sweep", "pt-check")
    if fixed_phi and ns.phi_grid is not None:
        raise ConfigError(f"{ns.command} takes a single --phi, not --phi-grid")
    if ns.phi_grid is not None:
        phi_grid = parse_grid(ns.phi_grid, angle=True)
    elif ns.phi is not None:
        phi_grid = np.array([parse_angle(ns.phi)])
    elif fixed_phi:
        phi_grid = np.array([0.0])
    else:
        phi_grid = np.linspace(0.0, 2.0 * math.pi, DEFAULT_PHI_POINTS)
    single_phi = float(phi_grid[0]) if fixed_phi else 0.0
    kappa_grid = parse_grid(ns.kappa_grid or DEFAULT_KAPPA_GRID) if ns.command == "sweep" else np.zeros(0)
    try:
        params = ModelParams(
            n_sites=ns.n,
            delta=ns.delta,
            phi=single_phi,
            kappa=ns.kappa,
            epsilon=ns.epsilon,
            layout=GainLossLayout.parse(ns.layout),
        )
    except InvalidParameters as exc:
        raise ConfigError(str(exc)) from None
    cfg = RunConfig(
        command=ns.command,
        params=params,
        phi_grid=phi_grid,
        kappa_grid=kappa_grid,
        tol_class=ns.tol_class,
        tol_zero=ns.tol_zero,
        tol_bracket=ns.tol_bracket,
        kappa_max=ns.kappa_max,
        scan_points=ns.scan_points,
        which=ns.which,
        out=ns.out,
        threads=ns.threads,
        format_version=ns.format_version,
    )
    cfg.validate()
    return cfg


def run(cfg: RunConfig) -> tuple[str, int]:
    try:
        return COMMANDS[cfg.command](cfg)
    except InvalidParameters as exc:
        raise ConfigError(str(exc)) from None


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        text, status = run(cfg)
    except ConfigError as exc:
        print(f"ptcavity: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NotConvergedError as exc:
        print(f"ptcavity: {exc}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    if cfg.out:
        with open(cfg.out, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if status == EXIT_NOT_CONVERGED:
        print("ptcavity: eigensolver did not converge for some grid points", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
