import numpy as np
import pytest

from ptcavity.eigen import eigenvalues, eigvals, match_distance
from ptcavity.model import build_hamiltonian
from ptcavity.oracle import durand_kerner, faddeev_leverrier, oracle_eigenvalues, tridiagonal_charpoly

from conftest import ham, seeded_tuples


def test_durand_kerner_known_roots():
    # (x - 1)(x + 2)(x - 3i)
    roots = np.sort_complex(np.array([complex(r) for r in durand_kerner([1, 1 - 3j, -2 - 3j, 6j])]))
    np.testing.assert_allclose(roots, np.sort_complex(np.array([-2, 1, 3j])), atol=1e-30)


def test_charpoly_paths_agree():
    h = ham(7, "inner-pair", phi=1.1, kappa=0.6, epsilon=0.2).matrix
    a = [complex(c) for c in tridiagonal_charpoly(h)]
    b = [complex(c) for c in faddeev_leverrier(h)]
    np.testing.assert_allclose(a, b, atol=1e-13)


def test_oracle_dimer():
    np.testing.assert_allclose(oracle_eigenvalues(ham(2, kappa=0.3)), [-0.4, 0.4], atol=1e-15)


def test_oracle_dense_matrix(rng):
    m = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    assert match_distance(eigvals(m).values, oracle_eigenvalues(m)) <= 1e-12


@pytest.mark.parametrize("params", seeded_tuples(20, seed=7), ids=lambda p: f"{p.layout.value}-{p.n_sites}")
def test_solver_matches_oracle(params):
    h = build_hamiltonian(params)
    assert match_distance(eigenvalues(h).values, oracle_eigenvalues(h)) <= 1e-9
