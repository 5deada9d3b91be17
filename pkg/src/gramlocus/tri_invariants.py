"""Order-3 orthogonal invariants and the equivalence search.

The degree-4 hyperdeterminant together with the three Gram determinants and
the trace is invariant under the per-slot O(2)^3 action, which makes the
5-vector (d1, d2, d3, t, hyperdet) a cheap pre-filter for orthogonal
equivalence of 2x2x2 tensors.
"""
from __future__ import annotations

import itertools
import math
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import minimize

from .flatten import gram_tuple
from .tensor import BinaryTensor, OrthoTuple, _SWAP

INVARIANT_TOL = 1e-6
RESIDUAL_THRESHOLD = 1e-6
REFINE_TOL = 1e-8


class InvariantVector(NamedTuple):
    d1: float
    d2: float
    d3: float
    trace: float
    hyperdet: float


class EquivResult(NamedTuple):
    transform: OrthoTuple
    residual: float


def hyperdet(t: BinaryTensor) -> float:
    """Degree-4 hyperdeterminant of a 2x2x2 tensor."""
    if t.order != 3:
        raise ValueError(f"hyperdeterminant is defined at order 3, got {t.order}")
    a = t.entries  # offsets 0..7 are a000, a001, a010, a011, a100, a101, a110, a111
    return float(
        (a[0] * a[7]) ** 2 + (a[1] * a[6]) ** 2 + (a[2] * a[5]) ** 2 + (a[3] * a[4]) ** 2
        + 4.0 * (a[0] * a[3] * a[5] * a[6] + a[1] * a[2] * a[4] * a[7])
        - 2.0 * (a[0] * a[1] * a[6] * a[7] + a[0] * a[2] * a[5] * a[7]
                 + a[0] * a[3] * a[4] * a[7] + a[1] * a[2] * a[5] * a[6]
                 + a[1] * a[3] * a[4] * a[6] + a[2] * a[3] * a[4] * a[5]))


def invariant_vector(t: BinaryTensor) -> InvariantVector:
    g = gram_tuple(t)
    return InvariantVector(g.dets[0], g.dets[1], g.dets[2], g.trace, hyperdet(t))


def _grid_rotations(grid: int) -> tuple[np.ndarray, np.ndarray]:
    angles = np.linspace(0.0, 2.0 * math.pi, grid, endpoint=False)
    c, s = np.cos(angles), np.sin(angles)
    rots = np.empty((grid, 2, 2))
    rots[:, 0, 0] = c
    rots[:, 0, 1] = -s
    rots[:, 1, 0] = s
    rots[:, 1, 1] = c
    return angles, rots


def _factor(angle: float, reflect: bool) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    rot = np.array([[c, -s], [s, c]])
    return rot @ _SWAP if reflect else rot


def _residual(source: np.ndarray, target: np.ndarray, angles: list[float],
              reflects: tuple[bool, bool, bool]) -> float:
    mats = [_factor(a, r) for a, r in zip(angles, reflects)]
    moved = np.einsum("ai,bj,cl,ijl->abc", mats[0], mats[1], mats[2], source)
    return float(np.linalg.norm((moved - target).ravel()))


def _refine(source: np.ndarray, target: np.ndarray, angles: list[float],
            reflects: tuple[bool, bool, bool]) -> tuple[list[float], float]:
    """Derivative-free polish of a grid candidate.

    Powell's direction-set method: successive line minimizations starting
    from the per-angle axes, with conjugate directions added so the narrow
    coupled valleys of the residual do not stall a purely cyclic sweep.
    """
    def f(x):
        return _residual(source, target, list(x), reflects) ** 2

    result = minimize(f, np.asarray(angles, dtype=float), method="Powell",
                      options={"xtol": 1e-12, "ftol": 1e-16, "maxiter": 200})
    return list(result.x), float(math.sqrt(max(result.fun, 0.0)))


def equiv_search(target: BinaryTensor, source: BinaryTensor, grid: int = 24,
                 threshold: float = RESIDUAL_THRESHOLD) -> Optional[EquivResult]:
    """Search O(2)^3 for Q with ortho_act(source, Q) == target.

    Invariant vectors are compared first; a mismatch beyond 1e-6 skips the
    search.  Otherwise all 8 reflection patterns are scanned on an
    angle-cube grid and the best candidate per pattern is polished by
    derivative-free line-search refinement over the three angles.  Returns
    None when the best residual stays above the threshold (grid granularity
    is a declared limitation; callers may retry with a doubled grid).
    """
    if target.order != 3 or source.order != 3:
        raise ValueError("equivalence search is defined for order-3 tensors")
    if grid < 4:
        raise ValueError(f"grid must be >= 4, got {grid}")
    inv_t = np.array(invariant_vector(target))
    inv_s = np.array(invariant_vector(source))
    if np.max(np.abs(inv_t - inv_s)) > INVARIANT_TOL:
        return None

    src = source.array
    tgt = target.array
    angles, rots = _grid_rotations(grid)
    best: Optional[tuple[float, list[float], tuple[bool, bool, bool]]] = None
    for reflects in itertools.product((False, True), repeat=3):
        mats = [rots @ _SWAP if r else rots for r in reflects]
        moved = np.einsum("gai,hbj,kcl,ijl->ghkabc", mats[0], mats[1], mats[2], src)
        res2 = ((moved - tgt) ** 2).sum(axis=(3, 4, 5))
        g, h, k = np.unravel_index(int(np.argmin(res2)), res2.shape)
        seed_angles = [float(angles[g]), float(angles[h]), float(angles[k])]
        refined, residual = _refine(src, tgt, seed_angles, reflects)
        if best is None or residual < best[0]:
            best = (residual, refined, reflects)
        if residual <= REFINE_TOL:
            break

    residual, found_angles, reflects = best
    if residual > threshold:
        return None
    q = OrthoTuple(tuple((a % (2.0 * math.pi), r)
                         for a, r in zip(found_angles, reflects)))
    return EquivResult(q, residual)
