"""Blocked evaluation of integer-frequency trigonometric sums.

Both routines split a frequency ``k = b*B + r`` into a block base ``b*B`` and an
offset ``r < B`` so that

    cos(k t + phi) = cos(bBt + phi) cos(rt) - sin(bBt + phi) sin(rt)

and the double sum over points and frequencies becomes two matrix products.
Trig calls drop from ``n*K`` to ``n*(B + K/B)``.
"""

import math

import numpy as np


def _block_size(K):
    return int(min(1024, max(8, math.ceil(math.sqrt(K)))))


def _tables(theta, phase, K):
    B = _block_size(K)
    nb = -(-K // B)
    offsets = np.outer(theta, np.arange(B))
    base = np.outer(np.arange(nb) * float(B), theta) + phase
    return B, nb, np.cos(offsets), np.sin(offsets), np.cos(base), np.sin(base)


def trig_analysis(theta, phase, weights, K):
    """Return ``(C, S)`` with ``C[k] = sum_i w_i cos(k t_i + phi_i)`` and
    ``S[k] = sum_i w_i sin(k t_i + phi_i)`` for ``k = 0..K-1``.

    ``weights`` may be 1-d (n,) or 2-d (n, q); the frequency axis is first in
    the output.
    """
    theta = np.asarray(theta, dtype=float)
    phase = np.broadcast_to(np.asarray(phase, dtype=float), theta.shape)
    w = np.asarray(weights, dtype=float)
    squeeze = w.ndim == 1
    if squeeze:
        w = w[:, None]
    B, nb, cr, sr, cb, sb = _tables(theta, phase, K)
    q = w.shape[1]
    C = np.empty((nb, B, q))
    S = np.empty((nb, B, q))
    for col in range(q):
        wc = cb * w[:, col]
        ws = sb * w[:, col]
        C[:, :, col] = wc @ cr - ws @ sr
        S[:, :, col] = ws @ cr + wc @ sr
    C = C.reshape(nb * B, q)[:K]
    S = S.reshape(nb * B, q)[:K]
    if squeeze:
        return C[:, 0], S[:, 0]
    return C, S


def trig_synthesis(theta, phase, cos_coeffs=None, sin_coeffs=None):
    """Return ``f_i = sum_k a_k cos(k t_i + phi_i) + b_k sin(k t_i + phi_i)``."""
    theta = np.asarray(theta, dtype=float)
    phase = np.broadcast_to(np.asarray(phase, dtype=float), theta.shape)
    K = max(len(c) for c in (cos_coeffs, sin_coeffs) if c is not None)
    B, nb, cr, sr, cb, sb = _tables(theta, phase, K)
    out = np.zeros(theta.shape)

    def blocks(c):
        padded = np.zeros(nb * B)
        padded[: len(c)] = c
        return padded.reshape(nb, B)

    if cos_coeffs is not None:
        A = blocks(np.asarray(cos_coeffs, dtype=float))
        out += np.einsum("bi,ib->i", cb, cr @ A.T) - np.einsum("bi,ib->i", sb, sr @ A.T)
    if sin_coeffs is not None:
        Bm = blocks(np.asarray(sin_coeffs, dtype=float))
        out += np.einsum("bi,ib->i", sb, cr @ Bm.T) + np.einsum("bi,ib->i", cb, sr @ Bm.T)
    return out
