"""Higher-order singular values from Gram determinants and back.

A 2-row flattening with Gram determinant d and trace t has singular values
solving x^4 - t x^2 + d = 0, i.e. sigma^2 = (t +- sqrt(t^2 - 4 d)) / 2.
"""
from __future__ import annotations

import math
from typing import NamedTuple, Sequence

from .flatten import GramTuple

DISC_TOL = 1e-12


class SingularPair(NamedTuple):
    sigma_max: float
    sigma_min: float


def singular_pairs(g: GramTuple) -> list[SingularPair]:
    """Per-slot singular value pairs of the tensor behind a Gram tuple."""
    t = g.trace
    scale = max(t * t, 1.0)
    out = []
    for d in g.dets:
        disc = t * t - 4.0 * d
        if disc < -DISC_TOL * scale:
            raise ValueError(f"determinant {d} exceeds t^2/4 = {t * t / 4}")
        disc = math.sqrt(max(disc, 0.0))
        hi = (t + disc) / 2.0
        lo = (t - disc) / 2.0
        out.append(SingularPair(math.sqrt(max(hi, 0.0)), math.sqrt(max(lo, 0.0))))
    return out


def dets_from_sigma_max(t: float, sigmas: Sequence[float]) -> GramTuple:
    """Inverse map d_i = sigma_i^2 (t - sigma_i^2) for dominant singular values.

    Each sigma must satisfy t/2 <= sigma^2 <= t (up to a small tolerance),
    as dominant singular values of a trace-t flattening do.
    """
    if t <= 0.0:
        raise ValueError(f"trace must be positive, got {t}")
    dets = []
    for s in sigmas:
        s2 = float(s) * float(s)
        if not (t / 2.0 - DISC_TOL * t <= s2 <= t + DISC_TOL * t):
            raise ValueError(f"sigma^2 = {s2} outside [t/2, t] for t = {t}")
        dets.append(max(s2 * (t - s2), 0.0))
    return GramTuple(tuple(dets), t)
