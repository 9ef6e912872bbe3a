"""Vectorised numpy twins of the kernels in ``_numba``."""

import numpy as np

EPS = np.finfo(float).eps
LOG_OVERFLOW = 600.0
FLUSH = 1e-200
# cap on m*n*n complex entries materialised per Aberth chunk
_ABERTH_CHUNK = 2_000_000


def _log(x):
    with np.errstate(divide="ignore"):
        return np.log(x)


def _horner2(c, z):
    # c: (m, n+1), z: (m, k)
    n = c.shape[1] - 1
    p = np.broadcast_to(c[:, n:n + 1], z.shape).astype(complex)
    dp = np.zeros_like(p)
    for j in range(n - 1, -1, -1):
        dp = dp * z + p
        p = p * z + c[:, j:j + 1]
    return p, dp


def _horner_abs(a, x):
    n = a.shape[1] - 1
    s = np.broadcast_to(a[:, n:n + 1], x.shape).astype(float)
    for j in range(n - 1, -1, -1):
        s = s * x + a[:, j:j + 1]
    return s


def _newton_ratio(c, ac, rev, arev, z):
    n = c.shape[1] - 1
    az = np.abs(z)
    inner = az <= 1.0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        p, dp = _horner2(c, z)
        s = _horner_abs(ac, az)
        y = 1.0 / z
        r, dr = _horner2(rev, y)
        sr = _horner_abs(arev, 1.0 / az)
        rr_in = np.where(s > 0, np.abs(p) / s, 0.0)
        N_in = np.where(p == 0, 0j, np.where(dp == 0, p, p / dp))
        den = y * (n - y * dr / r)
        rr_out = np.where(sr > 0, np.abs(r) / sr, 0.0)
        N_out = np.where((r == 0) | (den == 0), 0j, 1.0 / den)
    N = np.where(inner, N_in, N_out)
    rr = np.where(inner, rr_in, rr_out)
    return N, rr


def _aberth_chunk(c, z, max_sweeps, tol, polish):
    m, n = z.shape
    ac = np.abs(c)
    rev = c[:, ::-1].copy()
    arev = ac[:, ::-1].copy()
    active = np.ones((m, n), dtype=bool)
    relres = np.zeros((m, n))
    sweeps = np.zeros(m, dtype=np.int64)
    eye = np.eye(n, dtype=bool)
    for sweep in range(max_sweeps):
        N, rr = _newton_ratio(c, ac, rev, arev, z)
        relres = np.where(active, rr, relres)
        active &= ~(rr <= tol)
        if not active.any():
            break
        dz = z[:, :, None] - z[:, None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = np.where(eye | (dz == 0), 0j, 1.0 / dz)
        s = inv.sum(axis=2)
        den = 1.0 - N * s
        with np.errstate(divide="ignore", invalid="ignore"):
            corr = np.where(den != 0, N / den, N)
        corr = np.where(active, corr, 0j)
        rows = active.any(axis=1)
        sweeps[rows] = sweep + 1
        z = z - corr
        active &= ~(np.abs(corr) <= 4.0 * EPS * np.abs(z))
    N, rr = _newton_ratio(c, ac, rev, arev, z)
    live = N != 0
    for _ in range(polish):
        if not live.any():
            break
        zn = z - N
        Nn, rn = _newton_ratio(c, ac, rev, arev, zn)
        better = live & (rn < rr)
        z = np.where(better, zn, z)
        N = np.where(better, Nn, N)
        rr = np.where(better, rn, rr)
        live = better & (N != 0)
    return z, rr, sweeps


def aberth_batch(coeffs, init, max_sweeps, tol, polish):
    m, n = init.shape
    step = max(1, _ABERTH_CHUNK // max(1, n * n))
    roots = np.empty_like(init)
    relres = np.empty(init.shape)
    sweeps = np.empty(m, dtype=np.int64)
    for lo in range(0, m, step):
        hi = min(m, lo + step)
        r, rr, sw = _aberth_chunk(coeffs[lo:hi], init[lo:hi].copy(),
                                  max_sweeps, tol, polish)
        roots[lo:hi], relres[lo:hi], sweeps[lo:hi] = r, rr, sw
    return roots, relres, sweeps


def escape_orbits(coeffs, pts, max_iter, R, T):
    d = coeffs.shape[0] - 1
    an = coeffs[d]
    log_an = np.log(abs(an))
    logd = np.log(d)
    b = np.array([coeffs[d - mm] / an for mm in range(d + 1)])
    bd = np.array([(d - mm) * coeffs[d - mm] / (d * an) for mm in range(d + 1)])

    npts = pts.shape[0]
    status = np.zeros(npts, dtype=np.int8)
    steps = np.zeros(npts, dtype=np.int32)
    logmod = np.zeros(npts)
    logder = np.zeros(npts)
    exceeded = np.zeros(npts, dtype=bool)

    idx = np.arange(npts)
    w = pts.astype(complex).copy()
    ld = np.zeros(npts)
    k = 0
    while idx.size:
        aw = np.abs(w)
        esc = aw > T
        if esc.any():
            e = idx[esc]
            status[e] = 1
            steps[e] = k
            logmod[e] = np.log(aw[esc])
            logder[e] = ld[esc]
            keep = ~esc
            idx, w, ld, aw = idx[keep], w[keep], ld[keep], aw[keep]
        if k >= max_iter or not idx.size:
            break
        big = aw > R
        exceeded[idx[big]] = True
        law = _log(aw)
        ovf = big & (d * law + log_an > LOG_OVERFLOW)
        if ovf.any():
            wo = w[ovf]
            lo = law[ovf]
            u = 1.0 / wo
            s = np.zeros_like(wo)
            sd = np.zeros_like(wo)
            for mm in range(d, 0, -1):
                s = (s + b[mm]) * u
            for mm in range(d - 1, 0, -1):
                sd = (sd + bd[mm]) * u
            e = idx[ovf]
            status[e] = 1
            steps[e] = k + 1
            logmod[e] = log_an + d * lo + _log(np.abs(1.0 + s))
            logder[e] = ld[ovf] + logd + log_an + (d - 1) * lo + _log(np.abs(1.0 + sd))
            keep = ~ovf
            idx, w, ld = idx[keep], w[keep], ld[keep]
        p = np.full(w.shape, coeffs[d], dtype=complex)
        dp = np.zeros_like(p)
        for j in range(d - 1, -1, -1):
            dp = dp * w + p
            p = p * w + coeffs[j]
        ld = ld + _log(np.abs(dp))
        re, im = p.real, p.imag
        re = np.where(np.abs(re) < FLUSH * np.abs(im), 0.0, re)
        im = np.where(np.abs(im) < FLUSH * np.abs(p.real), 0.0, im)
        w = re + 1j * im
        k += 1
    if idx.size:
        steps[idx] = k
        logder[idx] = ld
        st2 = exceeded[idx] | (np.abs(w) > R)
        status[idx[st2]] = 2
    return status, steps, logmod, logder


def leja_indices(cand, count, start, rtol):
    N = cand.shape[0]
    s = np.zeros(N)
    chosen = np.zeros(N, dtype=bool)
    out = np.full(count, -1, dtype=np.int64)
    out[0] = start
    chosen[start] = True
    for k in range(1, count):
        s += _log(np.abs(cand - cand[out[k - 1]]))
        masked = np.where(chosen, -np.inf, s)
        best = masked.max()
        if best == -np.inf:
            break
        thr = best - rtol * max(1.0, abs(best))
        pick = int(np.argmax(masked >= thr))
        out[k] = pick
        chosen[pick] = True
    return out


def log_dist_rowsums_lower(z, chunk=1024):
    n = z.shape[0]
    r = np.zeros(n)
    for lo in range(0, n, chunk):
        hi = min(n, lo + chunk)
        d = _log(np.abs(z[lo:hi, None] - z[None, :hi]))
        mask = np.arange(hi)[None, :] < np.arange(lo, hi)[:, None]
        r[lo:hi] = np.where(mask, d, 0.0).sum(axis=1)
    return r


def offdiag_energy(z, w, chunk=1024):
    n = z.shape[0]
    acc = 0.0
    for lo in range(0, n, chunk):
        hi = min(n, lo + chunk)
        d = _log(np.abs(z[lo:hi, None] - z[None, :hi]))
        mask = np.arange(hi)[None, :] < np.arange(lo, hi)[:, None]
        with np.errstate(invalid="ignore"):
            rows = np.where(mask, d * w[None, :hi], 0.0).sum(axis=1)
        acc += 2.0 * (w[lo:hi] * rows).sum()
    return acc
