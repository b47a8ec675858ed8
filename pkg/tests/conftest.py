import math

import numpy as np
import pytest

from ptcavity.model import GainLossLayout, ModelParams, build_hamiltonian

PI = math.pi
LAYOUTS = list(GainLossLayout)
NON_HERMITIAN = [GainLossLayout.END_PAIR, GainLossLayout.INNER_PAIR, GainLossLayout.STAGGERED]


def ham(n, layout="end-pair", delta=0.5, phi=0.0, kappa=0.0, epsilon=0.0):
    return build_hamiltonian(ModelParams(n, delta, phi, kappa, epsilon, layout))


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240611)


def seeded_tuples(count=100, seed=2024):
    """Random model parameters with N <= 8 cycling through all four layouts."""
    gen = np.random.default_rng(seed)
    out = []
    for i in range(count):
        layout = LAYOUTS[i % len(LAYOUTS)]
        low = 4 if layout is GainLossLayout.INNER_PAIR else 2
        out.append(
            ModelParams(
                int(gen.integers(low, 9)),
                float(gen.uniform(-1, 1)),
                float(gen.uniform(0, 2 * math.pi)),
                float(gen.uniform(0, 3)),
                float(gen.uniform(-1, 1)),
                layout,
            )
        )
    return out


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
