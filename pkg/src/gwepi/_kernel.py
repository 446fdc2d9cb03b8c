"""Compiled inner loop of the convex-roof search."""

from __future__ import annotations

import math

import numba
import numpy as np

CONCURRENCE = 0
TSALLIS = 1
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@numba.njit(cache=True)
def _spectrum(red, dl, out):
    if dl == 1:
        out[0] = red[0, 0].real
    elif dl == 2:
        a = red[0, 0].real
        b = red[1, 1].real
        off = red[0, 1]
        mean = 0.5 * (a + b)
        rad = math.sqrt(0.25 * (a - b) ** 2 + off.real**2 + off.imag**2)
        out[0] = mean - rad
        out[1] = mean + rad
    elif dl == 3:
        a = red[0, 0].real
        b = red[1, 1].real
        c = red[2, 2].real
        d = red[0, 1]
        e = red[1, 2]
        f = red[0, 2]
        dd = d.real**2 + d.imag**2
        ee = e.real**2 + e.imag**2
        ff = f.real**2 + f.imag**2
        mean = (a + b + c) / 3.0
        p2 = (a - mean) ** 2 + (b - mean) ** 2 + (c - mean) ** 2 + 2.0 * (dd + ee + ff)
        p = math.sqrt(p2 / 6.0)
        if p == 0.0:
            out[:] = mean
            return
        ba = (a - mean) / p
        bb = (b - mean) / p
        bc = (c - mean) / p
        det = ba * bb * bc + 2.0 * (d * e * f.conjugate()).real / p**3
        det -= (ba * ee + bb * ff + bc * dd) / p**2
        half = min(max(det / 2.0, -1.0), 1.0)
        phi = math.acos(half) / 3.0
        hi = mean + 2.0 * p * math.cos(phi)
        lo = mean + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
        out[0] = lo
        out[1] = 3.0 * mean - hi - lo
        out[2] = hi
    else:
        out[:] = np.linalg.eigvalsh(red)


@numba.njit(cache=True)
def member_value(c, xs, tf, dl, mode, q, red, lam):
    """``p * E(c / sqrt(p))`` for one unnormalized member with coordinates ``c``."""
    r = c.shape[0]
    p = 0.0
    for a in range(r):
        p += c[a].real ** 2 + c[a].imag ** 2
    if p <= 1e-300:
        return 0.0
    if mode == CONCURRENCE:
        # |T (c x c)|^2 equals the sum of squared 2x2 minors of the member matrix
        acc = 0.0
        for i in range(r * r):
            v = 0j
            for a in range(r):
                for b in range(r):
                    v += tf[i, a * r + b] * c[a] * c[b]
            acc += v.real**2 + v.imag**2
        return 2.0 * math.sqrt(acc)
    red[:, :] = 0.0
    for a in range(r):
        for b in range(r):
            w = c[a] * c[b].conjugate()
            x = xs[a * r + b]
            for i in range(dl):
                for j in range(dl):
                    red[i, j] += w * x[i, j]
    _spectrum(red, dl, lam)
    total = 0.0
    if abs(q - 1.0) < 1e-6:
        for i in range(dl):
            x = min(max(lam[i] / p, 0.0), 1.0)
            if x > 0.0:
                total -= x * math.log(x)
        return p * total
    for i in range(dl):
        x = min(max(lam[i] / p, 0.0), 1.0)
        if x > 0.0:
            total += x**q
    return p * (1.0 - total) / (q - 1.0)


@numba.njit(cache=True)
def _pair_value(ck, cl, theta, phase, xs, tf, dl, mode, q, sign, nk, nl, red, lam):
    cs = math.cos(theta)
    sn = math.sin(theta)
    for a in range(ck.shape[0]):
        nk[a] = cs * ck[a] - phase * sn * cl[a]
        nl[a] = phase.conjugate() * sn * ck[a] + cs * cl[a]
    return sign * (member_value(nk, xs, tf, dl, mode, q, red, lam) + member_value(nl, xs, tf, dl, mode, q, red, lam))


@numba.njit(cache=True)
def search_restart(coef, xs, tf, dl, mode, q, sign, n_grid, golden_steps, iters, tol):
    """Refine one start in place; returns (signed objective, sweeps used)."""
    m, r = coef.shape
    red = np.zeros((dl, dl), dtype=np.complex128)
    lam = np.zeros(dl)
    terms = np.zeros(m)
    for k in range(m):
        terms[k] = sign * member_value(coef[k], xs, tf, dl, mode, q, red, lam)
    total = terms.sum()
    nk = np.zeros(r, dtype=np.complex128)
    nl = np.zeros(r, dtype=np.complex128)
    ck = np.zeros(r, dtype=np.complex128)
    cl = np.zeros(r, dtype=np.complex128)
    half = math.pi / n_grid
    sweeps = 0
    for _ in range(iters):
        sweeps += 1
        before = total
        for k in range(m - 1):
            for l in range(k + 1, m):
                for g in range(2):
                    phase = 1.0 + 0j if g == 0 else 1j
                    ck[:] = coef[k]
                    cl[:] = coef[l]
                    best_theta = 0.0
                    best_val = np.inf
                    for i in range(n_grid):
                        theta = -0.5 * math.pi + i * 2.0 * half
                        val = _pair_value(ck, cl, theta, phase, xs, tf, dl, mode, q, sign, nk, nl, red, lam)
                        if val < best_val:
                            best_val = val
                            best_theta = theta
                    lo = best_theta - half
                    hi = best_theta + half
                    x1 = hi - _GOLDEN * (hi - lo)
                    x2 = lo + _GOLDEN * (hi - lo)
                    f1 = _pair_value(ck, cl, x1, phase, xs, tf, dl, mode, q, sign, nk, nl, red, lam)
                    f2 = _pair_value(ck, cl, x2, phase, xs, tf, dl, mode, q, sign, nk, nl, red, lam)
                    for _ in range(golden_steps):
                        if f1 < f2:
                            hi = x2
                            x2 = x1
                            f2 = f1
                            x1 = hi - _GOLDEN * (hi - lo)
                            f1 = _pair_value(ck, cl, x1, phase, xs, tf, dl, mode, q, sign, nk, nl, red, lam)
                        else:
                            lo = x1
                            x1 = x2
                            f1 = f2
                            x2 = lo + _GOLDEN * (hi - lo)
                            f2 = _pair_value(ck, cl, x2, phase, xs, tf, dl, mode, q, sign, nk, nl, red, lam)
                    theta = x1 if f1 <= f2 else x2
                    if min(f1, f2) > best_val:
                        theta = best_theta
                    cs = math.cos(theta)
                    sn = math.sin(theta)
                    for a in range(r):
                        nk[a] = cs * ck[a] - phase * sn * cl[a]
                        nl[a] = phase.conjugate() * sn * ck[a] + cs * cl[a]
                    tk = sign * member_value(nk, xs, tf, dl, mode, q, red, lam)
                    tl = sign * member_value(nl, xs, tf, dl, mode, q, red, lam)
                    if tk + tl < terms[k] + terms[l]:
                        coef[k, :] = nk
                        coef[l, :] = nl
                        terms[k] = tk
                        terms[l] = tl
        total = terms.sum()
        if before - total < tol:
            break
    return total, sweeps


@numba.njit(cache=True)
def search_batch(coef, problem, xs, tf, dl, mode, q, sign, n_grid, golden_steps, iters, tol):
    """Run :func:`search_restart` on every start; ``problem[b]`` picks its tensors."""
    n = coef.shape[0]
    totals = np.zeros(n)
    sweeps = np.zeros(n, dtype=np.int64)
    for b in range(n):
        p = problem[b]
        totals[b], sweeps[b] = search_restart(
            coef[b], xs[p], tf[p], dl, mode, q, sign, n_grid, golden_steps, iters, tol
        )
    return totals, sweeps
