"""Flattenings of binary tensors and their Gram determinants.

The slot-i principal flattening has rows indexed by slot i and columns
ordered lexicographically over the remaining slots in their original order.
For a 2-row flattening M the Gram determinant is det(M M^T); the package
computes it in the Cauchy-Schwarz form |v|^2 |w|^2 - <v,w>^2 and checks it
against the independent sum-of-squared-2x2-minors expansion.
"""
from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .tensor import BinaryTensor, GeneralTensor

# Gram determinants are sums of squares; values this close to zero from
# rounding are clamped rather than reported negative.
CLAMP_TOL = 1e-14


class GramTuple(NamedTuple):
    """All principal Gram determinants of one tensor plus its squared norm."""

    dets: tuple[float, ...]
    trace: float


def principal_flattening(t: BinaryTensor | GeneralTensor, slot: int) -> np.ndarray:
    """Matrix with rows indexed by `slot` (1-based), columns lexicographic."""
    if not 1 <= slot <= t.order:
        raise ValueError(f"slot must be in 1..{t.order}, got {slot}")
    arr = t.array
    return np.moveaxis(arr, slot - 1, 0).reshape(arr.shape[slot - 1], -1)


def subset_flattening(t: BinaryTensor, slots: Sequence[int]) -> np.ndarray:
    """Rows indexed lexicographically by the given slots, columns by the rest.

    slots must be a non-empty proper subset of 1..order; slots {1..j} give the
    j-th bond flattening of the tensor-train ordering.
    """
    subset = sorted(set(slots))
    if not subset or len(subset) != len(slots):
        raise ValueError(f"slots must be distinct and non-empty, got {slots}")
    if subset[0] < 1 or subset[-1] > t.order or len(subset) >= t.order:
        raise ValueError(f"slots must be a proper subset of 1..{t.order}, got {slots}")
    axes = [s - 1 for s in subset]
    arr = np.moveaxis(t.array, axes, range(len(axes)))
    return arr.reshape(1 << len(axes), -1)


def gram_matrix(t: BinaryTensor | GeneralTensor, slot: int) -> np.ndarray:
    m = principal_flattening(t, slot)
    return m @ m.T


def gram_det(t: BinaryTensor, slot: int) -> float:
    """det(M M^T) for the slot flattening, via |v|^2 |w|^2 - <v,w>^2."""
    v, w = principal_flattening(t, slot)
    val = float((v @ v) * (w @ w) - (v @ w) ** 2)
    trace = float(t.entries @ t.entries)
    if -CLAMP_TOL * trace * trace < val < 0.0:
        return 0.0
    return val


def minor_squares(t: BinaryTensor, slot: int) -> list[float]:
    """Squared 2x2 minors of the slot flattening, one per column pair."""
    v, w = principal_flattening(t, slot)
    out = []
    for a in range(v.size):
        for b in range(a + 1, v.size):
            out.append(float((v[a] * w[b] - v[b] * w[a]) ** 2))
    return out


def gram_det_minors(t: BinaryTensor, slot: int) -> float:
    """Independent Gram determinant route: sum of squared 2x2 minors."""
    v, w = principal_flattening(t, slot)
    cross = np.outer(v, w)
    return float(0.5 * np.sum((cross - cross.T) ** 2))


def gram_tuple(t: BinaryTensor) -> GramTuple:
    trace = float(t.entries @ t.entries)
    return GramTuple(tuple(gram_det(t, i) for i in range(1, t.order + 1)), trace)


def _det_cofactor(m: np.ndarray) -> float:
    k = m.shape[0]
    if k == 1:
        return float(m[0, 0])
    if k == 2:
        return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    total = 0.0
    for col in range(k):
        minor = np.delete(np.delete(m, 0, axis=0), col, axis=1)
        total += (-1.0) ** col * m[0, col] * _det_cofactor(minor)
    return float(total)


def gram_det_general(t: GeneralTensor | BinaryTensor, slot: int) -> float:
    """Gram determinant for arbitrary mode sizes.

    Cofactor expansion for Gram sizes up to 4, pivoted elimination above.
    """
    g = gram_matrix(t, slot)
    if g.shape[0] <= 4:
        return _det_cofactor(g)
    return float(np.linalg.det(g))


def gram_dets_batch(entries: np.ndarray, n: int) -> np.ndarray:
    """(B, n) principal Gram determinants for B flat tensors stacked as rows."""
    batch = entries.shape[0]
    arr = entries.reshape((batch,) + (2,) * n)
    out = np.empty((batch, n))
    for slot in range(n):
        m = np.moveaxis(arr, 1 + slot, 1).reshape(batch, 2, -1)
        v, w = m[:, 0, :], m[:, 1, :]
        out[:, slot] = (np.einsum("ij,ij->i", v, v) * np.einsum("ij,ij->i", w, w)
                        - np.einsum("ij,ij->i", v, w) ** 2)
    return np.maximum(out, 0.0)
