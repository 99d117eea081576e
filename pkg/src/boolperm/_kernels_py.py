"""Pure-numpy kernel backend.

Same contract as the compiled module `_kernels_cy`: chained products
P . u[r1][c1] . u[r2][c2] ... P over a (n, n, d, d) generator grid,
with 0-based index arrays. Batch entry points chunk the work so the
stacked intermediates stay within a fixed memory budget.
"""

from __future__ import annotations

import numpy as np

BACKEND = "numpy"

# Rows per chunk in the batched entry points; 1 << 16 keeps a d = 16
# complex stack under ~270 MB and a d = 8 stack under 70 MB.
_CHUNK = 1 << 16


def chain_product(u: np.ndarray, P: np.ndarray, rows, cols) -> np.ndarray:
    """P @ u[rows[0], cols[0]] @ ... @ u[rows[-1], cols[-1]] @ P."""
    out = P
    for r, c in zip(rows, cols):
        out = out @ u[r, c]
    return np.asarray(out @ P)


def chain_maxabs_batch(u: np.ndarray, P: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """Max-abs entry of every chained product in the batch.

    rows, cols: integer arrays of shape (m, k); returns shape (m,).
    """
    rows = np.asarray(rows)
    cols = np.asarray(cols)
    m, k = rows.shape
    out = np.empty(m, dtype=float)
    for lo in range(0, m, _CHUNK):
        hi = min(lo + _CHUNK, m)
        acc = np.broadcast_to(P, (hi - lo, *P.shape))
        for t in range(k):
            acc = acc @ u[rows[lo:hi, t], cols[lo:hi, t]]
        acc = acc @ P
        out[lo:hi] = np.abs(acc).max(axis=(1, 2))
    return out


def weighted_chain_sum(u: np.ndarray, P: np.ndarray, rows: np.ndarray, cols: np.ndarray,
                       weights: np.ndarray) -> np.ndarray:
    """Sum over the batch of weights[t] * (P @ u[...] ... @ P)."""
    rows = np.asarray(rows)
    cols = np.asarray(cols)
    weights = np.asarray(weights, dtype=complex)
    m, k = rows.shape
    total = np.zeros_like(P, dtype=complex)
    for lo in range(0, m, _CHUNK):
        hi = min(lo + _CHUNK, m)
        acc = np.broadcast_to(P, (hi - lo, *P.shape))
        for t in range(k):
            acc = acc @ u[rows[lo:hi, t], cols[lo:hi, t]]
        acc = acc @ P
        total += np.einsum("t,tij->ij", weights[lo:hi], acc)
    return total
