"""Extended-precision reference eigenvalues via characteristic polynomials.

This path shares nothing with the QR solver: the characteristic polynomial is
expanded exactly (in mpmath arithmetic) either by the tridiagonal three-term
recurrence or by Faddeev-LeVerrier, and its roots are found simultaneously
with the Durand-Kerner (Weierstrass) iteration.
"""

from __future__ import annotations

import numpy as np
import mpmath

DEFAULT_DPS = 40


def _context(dps: int) -> mpmath.ctx_mp.MPContext:
    ctx = mpmath.MPContext()
    ctx.dps = dps
    return ctx


def _poly_mul_linear(ctx, p, root):
    """``(x - root) * p`` with coefficients stored low degree first."""
    out = [ctx.mpc(0)] * (len(p) + 1)
    for i, c in enumerate(p):
        out[i + 1] += c
        out[i] -= root * c
    return out


def tridiagonal_charpoly(m, dps: int = DEFAULT_DPS) -> list:
    """Monic ``det(x I - T)`` of a tridiagonal matrix, highest degree first."""
    ctx = _context(dps)
    a = np.asarray(m, dtype=np.complex128)
    n = a.shape[0]
    d = [ctx.mpc(complex(z)) for z in np.diag(a)]
    bc = [ctx.mpc(complex(a[k + 1, k])) * ctx.mpc(complex(a[k, k + 1])) for k in range(n - 1)]
    prev2 = [ctx.mpc(1)]
    prev1 = _poly_mul_linear(ctx, prev2, d[0])
    for k in range(1, n):
        cur = _poly_mul_linear(ctx, prev1, d[k])
        for i, c in enumerate(prev2):
            cur[i] -= bc[k - 1] * c
        prev2, prev1 = prev1, cur
    return prev1[::-1]


def faddeev_leverrier(m, dps: int = DEFAULT_DPS) -> list:
    """Monic characteristic polynomial of a dense matrix, highest degree first."""
    ctx = _context(dps)
    a = np.asarray(m, dtype=np.complex128)
    n = a.shape[0]
    A = ctx.matrix(n, n)
    for i in range(n):
        for j in range(n):
            A[i, j] = ctx.mpc(complex(a[i, j]))
    coeffs = [ctx.mpc(1)]
    M = ctx.zeros(n, n)
    for k in range(1, n + 1):
        M = A * M
        for i in range(n):
            M[i, i] += coeffs[-1]
        AM = A * M
        trace = ctx.fsum(AM[i, i] for i in range(n))
        coeffs.append(-trace / k)
    return coeffs


def durand_kerner(coeffs, dps: int = DEFAULT_DPS, maxiter: int = 5000) -> list:
    """All roots of a polynomial given highest degree first.

    Runs the simultaneous Weierstrass correction until every step is below
    ``10**(-dps + 8)`` relative to the root bound.
    """
    ctx = _context(dps)
    c = [ctx.mpc(z) for z in coeffs]
    while len(c) > 1 and c[0] == 0:
        c.pop(0)
    lead = c[0]
    c = [z / lead for z in c]
    n = len(c) - 1
    if n == 0:
        return []
    bound = 1 + max(abs(z) for z in c[1:])
    seed = ctx.mpc("0.4", "0.9")
    z = [bound * seed**k / abs(seed) ** k for k in range(n)]
    tol = bound * ctx.mpf(10) ** (-dps + 8)

    def peval(x):
        acc = ctx.mpc(0)
        for coef in c:
            acc = acc * x + coef
        return acc

    for _ in range(maxiter):
        biggest = ctx.mpf(0)
        for i in range(n):
            denom = ctx.mpc(1)
            for j in range(n):
                if j != i:
                    denom *= z[i] - z[j]
            if denom == 0:
                step = tol * (i + 1)
            else:
                step = peval(z[i]) / denom
            z[i] -= step
            biggest = max(biggest, abs(step))
        if biggest < tol:
            break
    return z


def _to_sorted_complex(roots) -> np.ndarray:
    v = np.array([complex(r) for r in roots], dtype=np.complex128)
    return v[np.lexsort((v.imag, v.real))]


def oracle_eigenvalues(m, dps: int = DEFAULT_DPS) -> np.ndarray:
    """Reference eigenvalues, rounded to complex128 and sorted by (re, im)."""
    a = np.asarray(getattr(m, "matrix", m), dtype=np.complex128)
    tridiagonal = a.shape[0] <= 2 or not (np.any(np.tril(a, -2)) or np.any(np.triu(a, 2)))
    coeffs = tridiagonal_charpoly(a, dps) if tridiagonal else faddeev_leverrier(a, dps)
    return _to_sorted_complex(durand_kerner(coeffs, dps))
