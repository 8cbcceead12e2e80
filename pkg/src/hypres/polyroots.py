"""Roots of small dense polynomials: companion matrix plus Newton polishing."""

import numpy as np


def _horner(coeffs, z):
    # coeffs in ascending order; returns p(z), p'(z)
    p = np.zeros_like(z, dtype=complex)
    dp = np.zeros_like(z, dtype=complex)
    for c in coeffs[::-1]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def polish(coeffs, roots, tol=1e-13, maxiter=8):
    """Newton-polish ``roots`` of the ascending-order polynomial ``coeffs``."""
    z = np.array(roots, dtype=complex)
    for _ in range(maxiter):
        p, dp = _horner(coeffs, z)
        ok = dp != 0
        step = np.zeros_like(z)
        step[ok] = p[ok] / dp[ok]
        z = z - step
        if np.all(np.abs(step) <= tol * np.maximum(1.0, np.abs(z))):
            break
    return z


def polynomial_roots(coeffs, polish_roots=True):
    """All roots of ``sum_j coeffs[j] z**j``.

    The variable is rescaled so the coefficients are balanced before the
    companion eigenvalue problem is solved; real coefficients yield exactly
    conjugate-symmetric roots.
    """
    c = np.asarray(coeffs)
    nz = np.nonzero(c)[0]
    if nz.size == 0:
        raise ValueError("zero polynomial")
    c = c[: nz[-1] + 1]
    deg = c.size - 1
    if deg == 0:
        return np.zeros(0, dtype=complex)
    # geometric-mean root size as the scale
    scale = abs(c[0] / c[-1]) ** (1.0 / deg) if c[0] != 0 else 1.0
    if not np.isfinite(scale) or not 1e-100 < scale < 1e100:
        scale = 1.0
    cs = c * scale ** np.arange(deg + 1)
    cs = cs / cs[-1]
    comp = np.zeros((deg, deg), dtype=cs.dtype)
    comp[1:, :-1] = np.eye(deg - 1)
    comp[:, -1] = -cs[:-1]
    z = np.linalg.eigvals(comp)
    if polish_roots:
        z = polish(cs, z)
        if np.isrealobj(c):
            z = _conjugate_symmetrize(z)
    return np.sort_complex(z * scale)


def _conjugate_symmetrize(z, tol=1e-10):
    # pair each upper-half root with its nearest mirror so the set is exactly closed under conj
    z = z.copy()
    used = np.zeros(z.size, dtype=bool)
    for i in np.argsort(-z.imag):
        if used[i]:
            continue
        used[i] = True
        if abs(z[i].imag) <= tol * max(1.0, abs(z[i])):
            z[i] = z[i].real
            continue
        cand = np.where(~used)[0]
        if cand.size == 0:
            break
        j = cand[np.argmin(np.abs(z[cand] - np.conj(z[i])))]
        used[j] = True
        m = 0.5 * (z[i] + np.conj(z[j]))
        z[i], z[j] = m, np.conj(m)
    return z


def cluster_roots(roots, rtol=1e-7):
    """Group numerically coincident roots; returns ``[(root, order), ...]``."""
    out = []
    remaining = list(np.asarray(roots, dtype=complex))
    while remaining:
        r = remaining.pop(0)
        group = [r]
        keep = []
        for s in remaining:
            if abs(s - r) <= rtol * max(1.0, abs(r)):
                group.append(s)
            else:
                keep.append(s)
        remaining = keep
        out.append((complex(np.mean(group)), len(group)))
    return out
