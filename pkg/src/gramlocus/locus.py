"""Membership classifiers for the set of attainable Gram-determinant tuples.

For unit-norm binary tensors the n principal Gram determinants (d_1,...,d_n)
land in the cube [0, 1/4]^n and satisfy every facet inequality
d_i <= sum_{j != i} d_j.  Inside that polytope the attainable set is carved
out by the surface Q = Q1 - Q2:

    Q1(d) = prod_i ( sum_{j != i} d_j - d_i )
    Q2(d) = (1/2) P(d)^2,   P = prod over sign patterns (+,±,...,±) of
                                 sqrt(d_1) ± sqrt(d_2) ± ... ± sqrt(d_n)

At n = 3 the attainable set is known exactly: it is the union of
{Q >= 0} with the component of {Q < 0} on which every pair satisfies
(d_i - d_j)^2 + (d_i + d_j)/2 >= 3/16.  For n >= 4 the classifier implements
the conjectured description cube AND Q1 >= Q2.
"""
from __future__ import annotations

import itertools
import math
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .tensor import _rng

DEFAULT_TOL = 1e-9

STATUS_INSIDE = "Inside"
STATUS_BOUNDARY = "Boundary"
STATUS_OUTSIDE = "Outside"

REGION_HULL = "Hull-violation"
REGION_CUBE = "Cube-violation"
REGION_1 = "Region1"
REGION_2 = "Region2"
REGION_Q = "Q-surface"
REGION_FACE = "Cube-face"


class Membership(NamedTuple):
    status: str
    region: Optional[str]


class VolumeEstimate(NamedTuple):
    fraction: float
    stderr: float
    samples: int


def _as_floats(d: Sequence[float]) -> list[float]:
    vals = [float(x) for x in d]
    if len(vals) < 2:
        raise ValueError(f"need at least 2 coordinates, got {len(vals)}")
    return vals


def hull_margins(d: Sequence[float]) -> list[float]:
    """Facet slacks sum_{j != i} d_j - d_i, one per coordinate."""
    vals = _as_floats(d)
    total = sum(vals)
    return [total - 2.0 * x for x in vals]


def q1(d: Sequence[float]) -> float:
    """Product of the facet slacks; nonnegative exactly on the facet polytope."""
    return float(math.prod(hull_margins(d)))


def _sign_patterns(n: int) -> np.ndarray:
    """(2^(n-1), n) array of sign rows, first column +1."""
    rows = [(1,) + rest for rest in itertools.product((1, -1), repeat=n - 1)]
    return np.array(rows, dtype=float)


def q2(d: Sequence[float]) -> float:
    """Half the squared product of the signed sqrt sums."""
    vals = _as_floats(d)
    if any(x < 0.0 for x in vals):
        raise ValueError(f"coordinates must be nonnegative, got {vals}")
    roots = np.sqrt(np.array(vals))
    factors = _sign_patterns(len(vals)) @ roots
    p = float(np.prod(factors))
    return 0.5 * p * p


def q_surface(d: Sequence[float]) -> float:
    return q1(d) - q2(d)


def q2_closed_form_n3(d: Sequence[float]) -> float:
    """Order-3 polynomial form of q2, used as a cross-check."""
    a, b, c = _as_floats(d)
    p = a * a + b * b + c * c - 2.0 * (a * b + a * c + b * c)
    return 0.5 * p * p


def pair_curves(d: Sequence[float]) -> list[float]:
    """Slacks (d_i - d_j)^2 + (d_i + d_j)/2 - 3/16 for the three pairs, order 3."""
    vals = _as_floats(d)
    if len(vals) != 3:
        raise ValueError(f"pair curves are defined at order 3, got {len(vals)}")
    out = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        out.append((vals[i] - vals[j]) ** 2 + 0.5 * (vals[i] + vals[j]) - 3.0 / 16.0)
    return out


def hull_vertices(n: int) -> list[tuple[float, ...]]:
    """Vertices of the cube-with-facets polytope: origin plus every 0/(1/4)
    vector with at least two quarter coordinates (2^n - n in total)."""
    if n < 2:
        raise ValueError(f"order must be >= 2, got {n}")
    verts = [tuple(0.0 for _ in range(n))]
    for mask in range(1, 1 << n):
        if bin(mask).count("1") >= 2:
            verts.append(tuple(0.25 if mask & (1 << (n - 1 - i)) else 0.0
                               for i in range(n)))
    verts.sort(key=lambda v: (sum(x > 0 for x in v), tuple(-x for x in v)))
    return verts


def _cube_slacks(vals: list[float]) -> list[float]:
    out = []
    for x in vals:
        out.append(x)          # x >= 0
        out.append(0.25 - x)   # x <= 1/4
    return out


def hull_membership(d: Sequence[float], tol: float = DEFAULT_TOL) -> Membership:
    """Position relative to the cube-with-facets polytope.

    The region tag names the binding constraint family; Inside carries None.
    """
    vals = _as_floats(d)
    cube = min(_cube_slacks(vals))
    facet = min(hull_margins(vals))
    worst = min(cube, facet)
    if worst < -tol:
        return Membership(STATUS_OUTSIDE,
                          REGION_CUBE if cube < -tol else REGION_HULL)
    if worst <= tol:
        return Membership(STATUS_BOUNDARY,
                          REGION_FACE if cube <= tol else REGION_HULL)
    return Membership(STATUS_INSIDE, None)


def locus_membership_n3(d: Sequence[float], tol: float = DEFAULT_TOL) -> Membership:
    """Exact order-3 classifier for attainable Gram tuples.

    Outside the cube or the facet polytope is Outside.  Within them, the
    surface Q = 0 walls off three excluded lobes; a lobe is recognized by
    Q < 0 together with some pair curve < 0.  The Q = 0 wall between the two
    attainable components is interior, so points there with all pair curves
    positive stay Inside.  Not-Outside points within tol of a cube face are
    reported Boundary/Cube-face.
    """
    vals = _as_floats(d)
    if len(vals) != 3:
        raise ValueError(f"order-3 classifier got {len(vals)} coordinates")
    cube = min(_cube_slacks(vals))
    if cube < -tol:
        return Membership(STATUS_OUTSIDE, REGION_CUBE)
    facet = min(hull_margins(vals))
    if facet < -tol:
        return Membership(STATUS_OUTSIDE, REGION_HULL)

    q = q1(vals) - q2([max(x, 0.0) for x in vals])
    worst_pair = min(pair_curves(vals))
    if q < -tol and worst_pair < -tol:
        return Membership(STATUS_OUTSIDE, REGION_Q)
    if abs(q) <= tol and worst_pair < tol:
        # On the wall with an excluded lobe (or the face tangency) next door.
        return Membership(STATUS_BOUNDARY, REGION_Q)
    if cube <= tol:
        return Membership(STATUS_BOUNDARY, REGION_FACE)
    if facet <= tol:
        # Attainable facet points always sit on Q = 0 as well.
        return Membership(STATUS_BOUNDARY, REGION_Q)
    return Membership(STATUS_INSIDE, REGION_1 if q > 0.0 else REGION_2)


def locus_membership_conjecture(d: Sequence[float],
                                tol: float = DEFAULT_TOL) -> Membership:
    """Conjectured classifier for order >= 4: cube AND Q1 >= Q2.

    Points on a cube face with Q1 strictly above Q2 are Inside; Boundary is
    reported only within tol of the Q surface or just past a cube face.
    """
    vals = _as_floats(d)
    if len(vals) < 4:
        raise ValueError(f"conjecture classifier needs order >= 4, got {len(vals)}")
    cube = min(_cube_slacks(vals))
    if cube < -tol:
        return Membership(STATUS_OUTSIDE, REGION_CUBE)
    q = q1(vals) - q2([max(x, 0.0) for x in vals])
    if q < -tol:
        facet = min(hull_margins(vals))
        return Membership(STATUS_OUTSIDE, REGION_HULL if facet < -tol else REGION_Q)
    if q <= tol:
        return Membership(STATUS_BOUNDARY, REGION_Q)
    if cube < 0.0:
        return Membership(STATUS_BOUNDARY, REGION_FACE)
    return Membership(STATUS_INSIDE, REGION_1)


def branch_p(d: Sequence[float]) -> float:
    """d1 d2 d3 (d1-d2)(d1-d3)(d2-d3): vanishing locus of spurious branches."""
    a, b, c = _as_floats(d)
    return a * b * c * (a - b) * (a - c) * (b - c)


def branch_q(d: Sequence[float]) -> float:
    """prod (di-dj) * prod (di-1/4) * Q: the discriminant-bearing branch factor."""
    a, b, c = _as_floats(d)
    pairs = (a - b) * (a - c) * (b - c)
    faces = (a - 0.25) * (b - 0.25) * (c - 0.25)
    return pairs * faces * q_surface((a, b, c))


_VOLUME_CHUNK = 1 << 16


def volume_fraction_linear(n: int, samples: int, seed: int) -> VolumeEstimate:
    """Monte Carlo fraction of the cube satisfying all facet inequalities.

    The inequalities are scale invariant, so sampling [0,1)^n is equivalent
    to sampling the quarter cube.  Expected value: 1 - 1/(n-1)!.
    """
    if n < 2:
        raise ValueError(f"order must be >= 2, got {n}")
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    hits = 0
    done = 0
    stream = 0
    while done < samples:
        count = min(_VOLUME_CHUNK, samples - done)
        pts = _rng(seed, stream).uniform(size=(count, n))
        margins = pts.sum(axis=1, keepdims=True) - 2.0 * pts
        hits += int(np.count_nonzero(margins.min(axis=1) >= 0.0))
        done += count
        stream += 1
    frac = hits / samples
    stderr = math.sqrt(max(frac * (1.0 - frac), 1e-300) / samples)
    return VolumeEstimate(frac, stderr, samples)
