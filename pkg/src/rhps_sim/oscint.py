"""Closed-form oscillatory overlap integrals on a finite slab.

Everything here reduces to the entire function

    E(x) = int_0^1 exp(i x s) ds = (e^{ix} - 1)/(ix)

and its divided difference E1(p, r) = (E(p) - E(r))/(p - r), both evaluated
in a uniformly stable way for complex arguments (including the removable
singularities).  Built on these:

    sin_exp(alpha, q, d)   = int_0^d sin(q z) e^{i alpha z} dz
    j_direct(k, q, q', d)  = int_0^d int_0^d sin(q z) e^{ik|z-z'|} sin(q' z')
    j_sgn(k, q, q', d)     = same kernel times sgn(z - z')

j_direct vanishes identically for modes of opposite parity about d/2
(q = m pi/d, q' = m' pi/d with m+m' odd) and j_sgn for equal parity; the
matrix builders zero those entries exactly and use low-rank identities for
the rest, falling back to the divided-difference form near the light-line
degeneracies q ~ +-k where the low-rank pieces cancel catastrophically.
"""

from __future__ import annotations

import math

import numpy as np

_DEGEN_TOL = 1e-4  # |q -+ k| d below this uses the stable elementwise path


def cexpm1(z):
    """exp(z) - 1 for complex arrays, accurate near z = 0."""
    z = np.asarray(z, dtype=complex)
    re, im = z.real, z.imag
    return (np.expm1(re) * np.cos(im) - 2.0 * np.sin(im / 2) ** 2
            + 1j * np.exp(re) * np.sin(im))


def E0(x):
    """E(x) = int_0^1 e^{ixs} ds, entire in x."""
    x = np.asarray(x, dtype=complex)
    out = np.empty_like(x)
    small = np.abs(x) < 1e-6
    xs = x[small]
    out[small] = 1.0 + 1j * xs / 2 - xs * xs / 6
    xb = x[~small]
    out[~small] = cexpm1(1j * xb) / (1j * xb)
    return out


def _moment(x, n):
    """M_n(x) = int_0^1 s^n e^{ixs} ds for a flat complex array x."""
    x = np.asarray(x, dtype=complex)
    out = np.empty_like(x)
    small = np.abs(x) < 0.5
    xs = x[small]
    acc = np.zeros_like(xs)
    term = np.ones_like(xs)
    for j in range(24):
        acc = acc + term / (n + j + 1)
        term = term * (1j * xs) / (j + 1)
    out[small] = acc
    xb = x[~small]
    m = E0(xb)
    e = np.exp(1j * xb)
    for kk in range(1, n + 1):
        m = (e - kk * m) / (1j * xb)
    out[~small] = m
    return out


def E1(p, r):
    """Divided difference (E(p) - E(r))/(p - r), entire in both arguments."""
    p = np.asarray(p, dtype=complex)
    r = np.asarray(r, dtype=complex)
    p, r = np.broadcast_arrays(p, r)
    d = p - r
    scale = np.maximum(1.0, np.maximum(np.abs(p), np.abs(r)))
    near = np.abs(d) < 1e-3 * scale
    with np.errstate(invalid="ignore", divide="ignore"):
        out = (E0(p) - E0(r)) / np.where(near, 1.0, d)
    if np.any(near):
        c = (p[near] + r[near]) / 2
        h = d[near] / 2
        # symmetric expansion: E1 = E'(c) + E'''(c) h^2/6 + O(h^4)
        out[near] = 1j * _moment(c, 1) - 1j * _moment(c, 3) * h * h / 6
    return out


def sin_exp(alpha, q, d):
    """int_0^d sin(q z) e^{i alpha z} dz; broadcasts over q and alpha."""
    alpha = np.asarray(alpha, dtype=complex)
    q = np.asarray(q, dtype=float)
    return (d / 2j) * (E0((alpha + q) * d) - E0((alpha - q) * d))


def j_direct_element(k, q, qp, d):
    """Divided-difference form of the |z-z'| kernel double integral."""
    tot = 0j
    for s in (1.0, -1.0):
        for sp in (1.0, -1.0):
            a, b = s * q, sp * qp
            dd = -1j * d * d * (E1((a + b) * d, (a + k) * d)
                                + E1((a + b) * d, (b + k) * d))
            tot += -0.25 * s * sp * dd
    return complex(tot)


def j_sgn_element(k, q, qp, d):
    """Divided-difference form of the sgn(z-z') e^{ik|z-z'|} double integral."""
    tot = 0j
    for s in (1.0, -1.0):
        for sp in (1.0, -1.0):
            a, b = s * q, sp * qp
            dd = -1j * d * d * (E1((a + b) * d, (a + k) * d)
                                - E1((a + b) * d, (b + k) * d))
            tot += -0.25 * s * sp * dd
    return complex(tot)


def _degenerate_mask(k, qs, d):
    return np.minimum(np.abs(qs - k), np.abs(qs + k)) * d < _DEGEN_TOL


def j_direct_matrix(k, qs, d):
    """Matrix of j_direct over a mode grid qs = m pi/d.

    Low-rank identity (same-parity pairs only, opposite parity vanishes):
        J = I w'^T + w I^T + diag(-i d k / (q^2 - k^2))
    with I_m = sin_exp(k, q_m, d) and w_m = q_m/(q_m^2 - k^2).
    """
    qs = np.asarray(qs, dtype=float)
    n = len(qs)
    k = complex(k)
    ms = np.arange(1, n + 1)
    with np.errstate(invalid="ignore", divide="ignore"):
        w = qs / (qs * qs - k * k)
    I = sin_exp(k, qs, d)
    J = np.outer(I, w) + np.outer(w, I)
    J[np.diag_indices(n)] += -1j * d * k / (qs * qs - k * k)
    odd = (ms[:, None] + ms[None, :]) % 2 == 1
    J[odd] = 0.0
    bad = _degenerate_mask(k, qs, d)
    if np.any(bad):
        for i in np.nonzero(bad)[0]:
            for j in range(n):
                if (ms[i] + ms[j]) % 2 == 0:
                    v = j_direct_element(k, qs[i], qs[j], d)
                    J[i, j] = v
                    J[j, i] = v
    return J


def j_sgn_matrix(k, qs, d):
    """Matrix of j_sgn over a mode grid (opposite-parity pairs only).

    J_sgn = I w'^T - w I^T - 2 (q' w + q w') / (q^2 - q'^2) on odd pairs.
    """
    qs = np.asarray(qs, dtype=float)
    n = len(qs)
    k = complex(k)
    ms = np.arange(1, n + 1)
    with np.errstate(invalid="ignore", divide="ignore"):
        w = qs / (qs * qs - k * k)
        I = sin_exp(k, qs, d)
        J = np.outer(I, w) - np.outer(w, I)
        dq = qs[:, None] ** 2 - qs[None, :] ** 2
        cauchy = (qs[None, :] * w[:, None] + qs[:, None] * w[None, :])
        off = np.where(dq == 0.0, 1.0, dq)
        J -= 2.0 * cauchy / off
    even = (ms[:, None] + ms[None, :]) % 2 == 0
    J[even] = 0.0
    bad = _degenerate_mask(k, qs, d)
    if np.any(bad):
        for i in np.nonzero(bad)[0]:
            for j in range(n):
                if (ms[i] + ms[j]) % 2 == 1:
                    J[i, j] = j_sgn_element(k, qs[i], qs[j], d)
                    J[j, i] = j_sgn_element(k, qs[j], qs[i], d)
    return J


def sine_line_integral(j, d):
    """int_0^d sin(j pi z / d) dz for integer (array) j of either sign."""
    j = np.asarray(j)
    with np.errstate(invalid="ignore", divide="ignore"):
        vals = d * (1.0 - (-1.0) ** j) / (j * math.pi)
    return np.where(j == 0, 0.0, vals)
