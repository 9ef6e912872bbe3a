"""Numba-compiled hot loops.

Each function here has a drop-in twin in ``_numpy`` with the same
signature and the same arithmetic order where that is practical.
"""

import math

import numpy as np
from numba import njit

EPS = 2.220446049250313e-16
NEG_INF = -np.inf
# log of the largest modulus we let Horner produce before switching to logs
LOG_OVERFLOW = 600.0
# components this far below the other one are flushed to zero; orbits that
# converge to a real cycle otherwise crawl through subnormal arithmetic
FLUSH = 1e-200


@njit(cache=True)
def _safe_log(x):
    if x > 0.0:
        return math.log(x)
    return NEG_INF


@njit(cache=True)
def _flush(w):
    re, im = w.real, w.imag
    if abs(im) < FLUSH * abs(re):
        return complex(re, 0.0)
    if abs(re) < FLUSH * abs(im):
        return complex(0.0, im)
    return w


@njit(cache=True)
def _horner2(c, z):
    n = c.shape[0] - 1
    p = c[n]
    dp = 0j
    for j in range(n - 1, -1, -1):
        dp = dp * z + p
        p = p * z + c[j]
    return p, dp


@njit(cache=True)
def _horner_abs(a, x):
    n = a.shape[0] - 1
    s = a[n]
    for j in range(n - 1, -1, -1):
        s = s * x + a[j]
    return s


@njit(cache=True)
def _newton_ratio(c, ac, rev, arev, z):
    """Return (p/p', |p| / sum |a_j||z|^j) evaluated stably at z."""
    n = c.shape[0] - 1
    az = abs(z)
    if az <= 1.0:
        p, dp = _horner2(c, z)
        s = _horner_abs(ac, az)
        rr = abs(p) / s if s > 0.0 else 0.0
        if p == 0:
            return 0j, rr
        if dp == 0:
            return p, rr
        return p / dp, rr
    y = 1.0 / z
    r, dr = _horner2(rev, y)
    s = _horner_abs(arev, 1.0 / az)
    rr = abs(r) / s if s > 0.0 else 0.0
    if r == 0:
        return 0j, rr
    den = y * (n - y * dr / r)
    if den == 0:
        return 0j, rr
    return 1.0 / den, rr


@njit(cache=True)
def aberth_batch(coeffs, init, max_sweeps, tol, polish):
    """Simultaneous Aberth-Ehrlich iteration for a stack of polynomials.

    ``coeffs`` is (m, n+1) with the constant term first and a nonzero last
    column; ``init`` is (m, n). Jacobi updates; a root freezes once its
    relative residual is below ``tol`` or its step is at rounding level.
    Returns roots, relative residuals and sweep counts.
    """
    m = coeffs.shape[0]
    n = coeffs.shape[1] - 1
    roots = init.copy()
    relres = np.zeros((m, n))
    sweeps = np.zeros(m, dtype=np.int64)
    corr = np.zeros(n, dtype=np.complex128)
    active = np.ones(n, dtype=np.bool_)
    for i in range(m):
        c = coeffs[i].copy()
        ac = np.abs(c)
        rev = c[::-1].copy()
        arev = ac[::-1].copy()
        z = roots[i]
        for k in range(n):
            active[k] = True
        for sweep in range(max_sweeps):
            nact = 0
            for k in range(n):
                corr[k] = 0j
                if not active[k]:
                    continue
                N, rr = _newton_ratio(c, ac, rev, arev, z[k])
                relres[i, k] = rr
                if rr <= tol:
                    active[k] = False
                    continue
                s = 0j
                for j in range(n):
                    if j != k:
                        dz = z[k] - z[j]
                        if dz != 0:
                            s += 1.0 / dz
                den = 1.0 - N * s
                if den != 0:
                    corr[k] = N / den
                else:
                    corr[k] = N
                nact += 1
            if nact == 0:
                break
            sweeps[i] = sweep + 1
            for k in range(n):
                if active[k]:
                    z[k] = z[k] - corr[k]
                    if abs(corr[k]) <= 4.0 * EPS * abs(z[k]):
                        active[k] = False
        for k in range(n):
            N, rr = _newton_ratio(c, ac, rev, arev, z[k])
            for _ in range(polish):
                if N == 0:
                    break
                zn = z[k] - N
                Nn, rn = _newton_ratio(c, ac, rev, arev, zn)
                if rn < rr:
                    z[k] = zn
                    N = Nn
                    rr = rn
                else:
                    break
            relres[i, k] = rr
    return roots, relres, sweeps


@njit(cache=True)
def escape_orbits(coeffs, pts, max_iter, R, T):
    """Forward orbits with derivative tracking for the escape-time kernel.

    Per point returns status (0 bounded by R for max_iter steps, 1 escaped
    past T, 2 passed R without reaching T), the escape step k, log|p^k(z)|
    and log|(p^k)'(z)|. Steps whose modulus would overflow are taken in
    log form.
    """
    d = coeffs.shape[0] - 1
    an = coeffs[d]
    log_an = math.log(abs(an))
    logd = math.log(d)
    # b[m] = a_{d-m}/a_d and bd[m] = (d-m) a_{d-m} / (d a_d), m = 0..d
    b = np.empty(d + 1, dtype=np.complex128)
    bd = np.empty(d + 1, dtype=np.complex128)
    for mm in range(d + 1):
        b[mm] = coeffs[d - mm] / an
        bd[mm] = (d - mm) * coeffs[d - mm] / (d * an)
    npts = pts.shape[0]
    status = np.zeros(npts, dtype=np.int8)
    steps = np.zeros(npts, dtype=np.int32)
    logmod = np.zeros(npts)
    logder = np.zeros(npts)
    for i in range(npts):
        w = pts[i]
        ld = 0.0
        exceeded = False
        st = 0
        k = 0
        L = 0.0
        while True:
            aw = abs(w)
            if aw > T:
                st = 1
                L = math.log(aw)
                break
            if k >= max_iter:
                break
            if aw > R:
                exceeded = True
                law = math.log(aw)
                if d * law + log_an > LOG_OVERFLOW:
                    u = 1.0 / w
                    s = 0j
                    sd = 0j
                    for mm in range(d, 0, -1):
                        s = (s + b[mm]) * u
                    for mm in range(d - 1, 0, -1):
                        sd = (sd + bd[mm]) * u
                    L = log_an + d * law + _safe_log(abs(1.0 + s))
                    ld += logd + log_an + (d - 1) * law + _safe_log(abs(1.0 + sd))
                    k += 1
                    st = 1
                    break
            pw, dpw = _horner2(coeffs, w)
            ld += _safe_log(abs(dpw))
            w = _flush(pw)
            k += 1
        if st == 0 and (exceeded or abs(w) > R):
            st = 2
        status[i] = st
        steps[i] = k
        logmod[i] = L
        logder[i] = ld
    return status, steps, logmod, logder


@njit(cache=True)
def leja_indices(cand, count, start, rtol):
    """Greedy Leja selection by summed log distances.

    Near-ties (within ``rtol`` relative) go to the smallest candidate
    index. Returns -1 entries if the candidates run out of distinct points.
    """
    N = cand.shape[0]
    s = np.zeros(N)
    chosen = np.zeros(N, dtype=np.bool_)
    out = np.full(count, -1, dtype=np.int64)
    out[0] = start
    chosen[start] = True
    for k in range(1, count):
        last = cand[out[k - 1]]
        best = NEG_INF
        for i in range(N):
            if chosen[i]:
                continue
            s[i] += _safe_log(abs(cand[i] - last))
            if s[i] > best:
                best = s[i]
        if best == NEG_INF:
            break
        thr = best - rtol * max(1.0, abs(best))
        for i in range(N):
            if not chosen[i] and s[i] >= thr:
                out[k] = i
                chosen[i] = True
                break
    return out


@njit(cache=True)
def log_dist_rowsums_lower(z):
    """r[k] = sum_{j<k} log|z_k - z_j|."""
    n = z.shape[0]
    r = np.zeros(n)
    for k in range(n):
        acc = 0.0
        for j in range(k):
            acc += _safe_log(abs(z[k] - z[j]))
        r[k] = acc
    return r


@njit(cache=True)
def offdiag_energy(z, w):
    """sum_{i != j} w_i w_j log|z_i - z_j| (unnormalised)."""
    n = z.shape[0]
    acc = 0.0
    for i in range(n):
        row = 0.0
        for j in range(i):
            row += w[j] * _safe_log(abs(z[i] - z[j]))
        acc += 2.0 * w[i] * row
    return acc
