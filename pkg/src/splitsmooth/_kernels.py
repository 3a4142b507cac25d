"""Compiled inner loops: tridiagonal sweeps and the taut-string walk.

Every kernel works on one row at a time; the *_rows drivers fan out over
rows with prange and write disjoint output slices, so results do not
depend on the thread count.
"""

import numpy as np
from numba import njit, prange


@njit(cache=True)
def thomas_kernel(lower, diag, upper, rhs, out):
    """Solve a tridiagonal system by forward elimination, no pivoting.

    Assumes the caller guarantees nonzero pivots (diagonal dominance).
    Returns 0 on success, 1 on a vanishing pivot.
    """
    n = diag.shape[0]
    cp = np.empty(n, np.float64)
    dp = np.empty(n, np.float64)
    piv = diag[0]
    if piv == 0.0:
        return 1
    cp[0] = upper[0] / piv if n > 1 else 0.0
    dp[0] = rhs[0] / piv
    for i in range(1, n):
        piv = diag[i] - lower[i - 1] * cp[i - 1]
        if piv == 0.0:
            return 1
        cp[i] = upper[i] / piv if i < n - 1 else 0.0
        dp[i] = (rhs[i] - lower[i - 1] * dp[i - 1]) / piv
    out[n - 1] = dp[n - 1]
    for i in range(n - 2, -1, -1):
        out[i] = dp[i] - cp[i] * out[i + 1]
    return 0


@njit(cache=True)
def wls_line(f, w, out):
    """Minimize sum (z-f)^2 + sum w_x (z_{x+1}-z_x)^2 along one line.

    The normal equations are tridiagonal with unit data diagonal, hence
    strictly diagonally dominant for w >= 0; elimination is inlined to
    avoid building the three bands.  Solving for the correction z - f
    keeps constant lines and zero weights exact in floating point.
    """
    n = f.shape[0]
    if n == 1:
        out[0] = f[0]
        return
    cp = np.empty(n, np.float64)
    dp = np.empty(n, np.float64)
    # right-hand side of A(z-f) = -grad: weighted neighbour pulls
    s0 = w[0] * (f[1] - f[0])
    piv = 1.0 + w[0]
    cp[0] = -w[0] / piv
    dp[0] = s0 / piv
    prev = s0
    for i in range(1, n):
        lo = -w[i - 1]
        di = 1.0 + w[i - 1]
        if i < n - 1:
            si = w[i] * (f[i + 1] - f[i])
            di += w[i]
        else:
            si = 0.0
        piv = di - lo * cp[i - 1]
        cp[i] = -w[i] / piv if i < n - 1 else 0.0
        dp[i] = ((si - prev) - lo * dp[i - 1]) / piv
        prev = si
    out[n - 1] = f[n - 1] + dp[n - 1]
    for i in range(n - 2, -1, -1):
        dp[i] = dp[i] - cp[i] * dp[i + 1]
        out[i] = f[i] + dp[i]


@njit(cache=True)
def taut_line(f, h, out):
    """Minimize sum (z-f)^2 + sum 2 h_x |z_{x+1}-z_x| along one line.

    Exact solution as the shortest path ("taut string") through the tube
    of half-width h around the running sums of f, pinned at both ends.
    A zero h_x pins the path and decouples the two sides.

    The funnel from the last decided vertex (the apex) is tracked with
    two slope-monotone chains: floor contacts force concave kinks and
    ceiling contacts convex ones.  Each tube point is pushed once and
    popped at most once, so a line costs O(n).

    Sums are taken of f - f[0] so constant lines stay exact and large
    offsets do not erode the tube geometry; the base is added back at
    the end.
    """
    n = f.shape[0]
    if n == 1:
        out[0] = f[0]
        return
    base = f[0]
    fxs = np.empty(n, np.float64)
    fvs = np.empty(n, np.float64)
    cxs = np.empty(n, np.float64)
    cvs = np.empty(n, np.float64)
    pxs = np.empty(n + 2, np.float64)
    pvs = np.empty(n + 2, np.float64)
    fh = 0
    ft = 0
    ch = 0
    ct = 0
    ax = 0.0
    av = 0.0
    pxs[0] = 0.0
    pvs[0] = 0.0
    m = 1
    r = 0.0
    for i in range(1, n + 1):
        r += f[i - 1] - base
        xi = float(i)
        if i < n:
            lo = r - h[i - 1]
            hi = r + h[i - 1]
        else:
            lo = r
            hi = r
        # ceiling point (xi, hi): chain slopes must increase
        while ct > ch:
            if ct - ch >= 2:
                bx = cxs[ct - 2]
                bv = cvs[ct - 2]
            else:
                bx = ax
                bv = av
            lx = cxs[ct - 1]
            lv = cvs[ct - 1]
            if (lv - bv) * (xi - lx) >= (hi - lv) * (lx - bx):
                ct -= 1
            else:
                break
        if ct == ch:
            # ceiling dipped below the floor chain: bend at floor contacts
            while ft > fh and (hi - av) * (fxs[fh] - ax) < (fvs[fh] - av) * (xi - ax):
                ax = fxs[fh]
                av = fvs[fh]
                fh += 1
                pxs[m] = ax
                pvs[m] = av
                m += 1
        cxs[ct] = xi
        cvs[ct] = hi
        ct += 1
        # floor point (xi, lo): chain slopes must decrease
        while ft > fh:
            if ft - fh >= 2:
                bx = fxs[ft - 2]
                bv = fvs[ft - 2]
            else:
                bx = ax
                bv = av
            lx = fxs[ft - 1]
            lv = fvs[ft - 1]
            if (lv - bv) * (xi - lx) <= (lo - lv) * (lx - bx):
                ft -= 1
            else:
                break
        if ft == fh:
            while ct > ch and (lo - av) * (cxs[ch] - ax) > (cvs[ch] - av) * (xi - ax):
                ax = cxs[ch]
                av = cvs[ch]
                ch += 1
                pxs[m] = ax
                pvs[m] = av
                m += 1
        fxs[ft] = xi
        fvs[ft] = lo
        ft += 1
    pxs[m] = float(n)
    pvs[m] = r
    m += 1
    # slopes of the decided path are the solution values
    for k in range(m - 1):
        x0 = int(pxs[k])
        x1 = int(pxs[k + 1])
        s = base + (pvs[k + 1] - pvs[k]) / (pxs[k + 1] - pxs[k])
        for j in range(x0, x1):
            out[j] = s


@njit(parallel=True, cache=True)
def wls_rows(fe, we, out):
    """Quadratic line solve applied to every row independently."""
    rows = fe.shape[0]
    for y in prange(rows):
        wls_line(fe[y], we[y], out[y])


@njit(parallel=True, cache=True)
def taut_rows(fe, he, out):
    """Taut-string line solve applied to every row independently."""
    rows = fe.shape[0]
    for y in prange(rows):
        taut_line(fe[y], he[y], out[y])
