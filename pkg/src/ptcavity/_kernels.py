"""Compiled inner loops for the dense complex eigensolver.

Everything here works in place on contiguous ``complex128`` arrays and is
compiled with ``nogil=True`` so independent matrices can be processed from
worker threads.
"""

import numpy as np
from numba import njit

EPS = np.finfo(np.float64).eps
UNIT_ROUNDOFF = EPS / 2.0
TINY = np.finfo(np.float64).tiny


@njit(cache=True, nogil=True)
def _abs1(z):
    return abs(z.real) + abs(z.imag)


@njit(cache=True, nogil=True)
def balance_inplace(a, scale):
    """Parlett-Reinsch balancing with radix 2; ``a <- D^-1 a D``, ``scale`` holds diag(D)."""
    n = a.shape[0]
    radix = 2.0
    sqrdx = radix * radix
    done = False
    while not done:
        done = True
        for i in range(n):
            c = 0.0
            r = 0.0
            for j in range(n):
                if j != i:
                    c += _abs1(a[j, i])
                    r += _abs1(a[i, j])
            if c == 0.0 or r == 0.0:
                continue
            g = r / radix
            f = 1.0
            s = c + r
            while c < g:
                f *= radix
                c *= sqrdx
            g = r * radix
            while c > g:
                f /= radix
                c /= sqrdx
            if (c + r) / f < 0.95 * s:
                done = False
                g = 1.0 / f
                scale[i] *= f
                for j in range(n):
                    a[i, j] *= g
                for j in range(n):
                    a[j, i] *= f


@njit(cache=True, nogil=True)
def hessenberg_inplace(a):
    """Householder reduction to upper-Hessenberg form (a <- Q^H a Q)."""
    n = a.shape[0]
    v = np.empty(n, dtype=np.complex128)
    for k in range(n - 2):
        below = 0.0
        for i in range(k + 2, n):
            below += abs(a[i, k]) ** 2
        if below == 0.0:
            continue
        x0 = a[k + 1, k]
        alpha = np.sqrt(below + abs(x0) ** 2)
        phase = x0 / abs(x0) if x0 != 0 else 1.0 + 0.0j
        m = n - k - 1
        for i in range(m):
            v[i] = a[k + 1 + i, k]
        v[0] += phase * alpha
        vnorm2 = 0.0
        for i in range(m):
            vnorm2 += v[i].real ** 2 + v[i].imag ** 2
        beta = 2.0 / vnorm2

        # left: rows k+1.., columns k..
        for j in range(k, n):
            t = 0.0j
            for i in range(m):
                t += np.conj(v[i]) * a[k + 1 + i, j]
            t *= beta
            for i in range(m):
                a[k + 1 + i, j] -= v[i] * t
        # right: all rows, columns k+1..
        for i in range(n):
            t = 0.0j
            for jj in range(m):
                t += a[i, k + 1 + jj] * v[jj]
            t *= beta
            for jj in range(m):
                a[i, k + 1 + jj] -= t * np.conj(v[jj])

        a[k + 1, k] = -phase * alpha
        for i in range(k + 2, n):
            a[i, k] = 0.0


@njit(cache=True, nogil=True)
def _givens(x, y):
    ax = abs(x)
    ay = abs(y)
    r = np.hypot(ax, ay)
    if r == 0.0:
        return 1.0, 0.0j
    if ax == 0.0:
        return 0.0, np.conj(y) / ay
    alpha = x / ax
    return ax / r, alpha * np.conj(y) / r


@njit(cache=True, nogil=True)
def hessenberg_qr_inplace(h, w, itmax, deflate_tol):
    """Single-shift complex QR on an upper-Hessenberg matrix.

    Eigenvalues go to ``w``.  Returns ``(iterations, converged)``; on failure the
    unconverged diagonal entries are copied into ``w`` so it is always filled.
    """
    n = h.shape[0]
    smlnum = TINY * (n / EPS)
    total = 0
    ihi = n - 1
    while ihi >= 0:
        its = 0
        while True:
            l = ihi
            while l > 0:
                sub = _abs1(h[l, l - 1])
                tst = _abs1(h[l - 1, l - 1]) + _abs1(h[l, l])
                if tst == 0.0:
                    if l >= 2:
                        tst += abs(h[l - 1, l - 2].real)
                    if l + 1 <= ihi:
                        tst += abs(h[l + 1, l].real)
                if sub <= smlnum:
                    h[l, l - 1] = 0.0
                    break
                if sub <= deflate_tol * tst:
                    # second, conservative test (Ahues & Tisseur) keeps small
                    # eigenvalues accurate in a relative sense
                    ab = max(sub, _abs1(h[l - 1, l]))
                    ba = min(sub, _abs1(h[l - 1, l]))
                    aa = max(_abs1(h[l, l]), _abs1(h[l - 1, l - 1] - h[l, l]))
                    bb = min(_abs1(h[l, l]), _abs1(h[l - 1, l - 1] - h[l, l]))
                    s = aa + ab
                    if ba * (ab / s) <= max(smlnum, deflate_tol * (bb * (aa / s))):
                        h[l, l - 1] = 0.0
                        break
                l -= 1
            if l == ihi:
                w[ihi] = h[ihi, ihi]
                ihi -= 1
                break
            if its >= itmax:
                for i in range(ihi + 1):
                    w[i] = h[i, i]
                return total, False
            its += 1
            total += 1

            d = h[ihi, ihi]
            if its % 10 == 0:
                shift = d + 0.75 * abs(h[ihi, ihi - 1].real)
            else:
                a = h[ihi - 1, ihi - 1]
                mid = 0.5 * (a + d)
                half = 0.5 * (a - d)
                disc = np.sqrt(half * half + h[ihi - 1, ihi] * h[ihi, ihi - 1])
                e1 = mid + disc
                e2 = mid - disc
                shift = e1 if abs(e1 - d) <= abs(e2 - d) else e2

            # implicit single-shift sweep: the shift only enters the first rotation
            x = h[l, l] - shift
            y = h[l + 1, l]
            for k in range(l, ihi):
                if k > l:
                    x = h[k, k - 1]
                    y = h[k + 1, k - 1]
                c, s = _givens(x, y)
                if k > l:
                    h[k, k - 1] = c * x + s * y
                    h[k + 1, k - 1] = 0.0
                for j in range(k, ihi + 1):
                    t1 = h[k, j]
                    t2 = h[k + 1, j]
                    h[k, j] = c * t1 + s * t2
                    h[k + 1, j] = -np.conj(s) * t1 + c * t2
                top = min(k + 2, ihi)
                for i in range(l, top + 1):
                    t1 = h[i, k]
                    t2 = h[i, k + 1]
                    h[i, k] = c * t1 + np.conj(s) * t2
                    h[i, k + 1] = -s * t1 + c * t2
    return total, True


@njit(cache=True, nogil=True)
def tridiag_lu(dl, d, du):
    """LU with partial pivoting of a tridiagonal matrix (LAPACK gttrf layout).

    Works on copies; returns ``(dl, d, du, du2, ipiv)``.
    """
    n = d.shape[0]
    dl = dl.copy()
    d = d.copy()
    du = du.copy()
    du2 = np.zeros(max(n - 2, 0), dtype=np.complex128)
    ipiv = np.arange(n)
    for i in range(n - 1):
        if abs(d[i]) >= abs(dl[i]):
            if d[i] != 0:
                fact = dl[i] / d[i]
                dl[i] = fact
                d[i + 1] -= fact * du[i]
        else:
            fact = d[i] / dl[i]
            d[i] = dl[i]
            dl[i] = fact
            temp = du[i]
            du[i] = d[i + 1]
            d[i + 1] = temp - fact * d[i + 1]
            if i < n - 2:
                du2[i] = du[i + 1]
                du[i + 1] = -fact * du[i + 1]
            ipiv[i] = i + 1
    return dl, d, du, du2, ipiv


@njit(cache=True, nogil=True)
def tridiag_solve(dl, d, du, du2, ipiv, b):
    n = d.shape[0]
    x = b.copy()
    for i in range(n - 1):
        if ipiv[i] == i:
            x[i + 1] -= dl[i] * x[i]
        else:
            temp = x[i]
            x[i] = x[i + 1]
            x[i + 1] = temp - dl[i] * x[i]
    x[n - 1] /= d[n - 1]
    if n > 1:
        x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i]
    return x


@njit(cache=True, nogil=True)
def tridiag_det(dl, d, du):
    _, u, _, _, ipiv = tridiag_lu(dl, d, du)
    det = 1.0 + 0.0j
    for i in range(u.shape[0]):
        det *= u[i]
        if ipiv[i] != i:
            det = -det
    return det


@njit(cache=True, nogil=True)
def charpoly_newton_correction(dl, d, du, lam):
    """``p(lam) / p'(lam)`` for ``p(x) = det(T - x I)``, by the three-term recurrence."""
    n = d.shape[0]
    p2 = 1.0 + 0.0j
    q2 = 0.0j
    p1 = d[0] - lam
    q1 = -1.0 + 0.0j
    for k in range(1, n):
        bc = dl[k - 1] * du[k - 1]
        p = (d[k] - lam) * p1 - bc * p2
        q = (d[k] - lam) * q1 - p1 - bc * q2
        p2, p1 = p1, p
        q2, q1 = q1, q
        big = max(abs(p1), abs(q1))
        if big > 1e100 or (0.0 < big < 1e-100):
            p1 /= big
            p2 /= big
            q1 /= big
            q2 /= big
    if p1 == 0:
        return 0.0j
    if q1 == 0:
        return complex(np.inf)
    return p1 / q1


@njit(cache=True, nogil=True)
def charpoly_newton_step(dl, d, du, lam):
    """``|p(lam) / p'(lam)|``: estimated distance from ``lam`` to the nearest root.

    Unlike ``|p(lam)|`` itself this does not depend on the scale of ``T``.
    """
    return abs(charpoly_newton_correction(dl, d, du, lam))


@njit(cache=True, nogil=True)
def newton_polish_inplace(dl, d, du, w, max_steps, gap_fraction):
    """Refine each ``w[i]`` by Newton steps on the characteristic polynomial.

    A value is only moved while its total displacement stays below
    ``gap_fraction`` times the distance to its nearest neighbour in the input,
    so clustered or defective eigenvalues are left as they are.
    """
    n = w.shape[0]
    w0 = w.copy()
    for i in range(n):
        gap = np.inf
        for j in range(n):
            if j != i:
                gap = min(gap, abs(w0[j] - w0[i]))
        limit = gap_fraction * gap
        lam = w0[i]
        for _ in range(max_steps):
            step = charpoly_newton_correction(dl, d, du, lam)
            if not np.isfinite(step.real) or not np.isfinite(step.imag):
                break
            trial = lam - step
            if abs(trial - w0[i]) > limit:
                break
            lam = trial
            if abs(step) <= EPS * abs(lam):
                break
        w[i] = lam


@njit(cache=True, nogil=True)
def inverse_iteration_residual(dl, d, du, lam, shift_factor, norm):
    """One inverse-iteration step from ``lam``; returns ``||T v - lam v|| / ||T||``."""
    n = d.shape[0]
    sigma = lam * (1.0 + shift_factor)
    shifted = d - sigma
    ldl, ld, ldu, ldu2, ipiv = tridiag_lu(dl, shifted, du)
    floor = EPS * max(norm, TINY)
    for i in range(n):
        if abs(ld[i]) < floor:
            ld[i] = floor
    # back-substitute U x = 1 only; a fixed start vector fed through L^-1 can be
    # orthogonal to reflection-odd eigenvectors
    x = np.ones(n, dtype=np.complex128)
    x[n - 1] /= ld[n - 1]
    if n > 1:
        x[n - 2] = (x[n - 2] - ldu[n - 2] * x[n - 1]) / ld[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (x[i] - ldu[i] * x[i + 1] - ldu2[i] * x[i + 2]) / ld[i]
    vn = 0.0
    for i in range(n):
        vn += x[i].real ** 2 + x[i].imag ** 2
    vn = np.sqrt(vn)
    if vn == 0.0 or not np.isfinite(vn):
        return np.inf
    r2 = 0.0
    for i in range(n):
        t = (d[i] - lam) * x[i]
        if i > 0:
            t += dl[i - 1] * x[i - 1]
        if i < n - 1:
            t += du[i] * x[i + 1]
        r2 += t.real ** 2 + t.imag ** 2
    if norm == 0.0:
        return np.sqrt(r2) / vn
    return np.sqrt(r2) / vn / norm
