"""Monte Carlo experiments, surface point clouds, and the worked-example report.

Fuzzing draws unit tensors in fixed-size chunks.  Each chunk owns its RNG
stream (seed, chunk index), so reports are identical for a given
(n, mode, samples, seed) regardless of thread count or chunk scheduling.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, TextIO

import numpy as np

from . import hosvd, locus
from .flatten import gram_dets_batch, gram_tuple
from .tensor import example_223, example_counter, sample_unit_batch, vertex_tensor
from .flatten import gram_det_general

FUZZ_MODES = ("hull", "n3", "conjecture")
VIOLATION_TOL = 1e-10
CHUNK = 1 << 14
SURFACE_ZERO_TOL = 1e-10
ROOT_TOL = 1e-12


@dataclass(frozen=True)
class FuzzReport:
    n: int
    mode: str
    samples: int
    seed: int
    violations: int
    near_boundary: int
    worst_margin: float
    elapsed: float

    def to_json(self) -> dict:
        return {"n": self.n, "mode": self.mode, "samples": self.samples,
                "seed": self.seed, "violations": self.violations,
                "near_boundary": self.near_boundary,
                "worst_margin": self.worst_margin, "elapsed": self.elapsed}


@dataclass(frozen=True)
class SurfacePoint:
    d: tuple[float, float, float]
    sigma: tuple[float, float, float]
    multiplicity: int  # 1 for a crossing of the surface, 2 for a tangency


def _batch_margin(dets: np.ndarray, mode: str) -> np.ndarray:
    """Per-sample predicate slack; negative beyond tolerance means violation."""
    cube = np.minimum(dets.min(axis=1), (0.25 - dets).min(axis=1))
    margins = dets.sum(axis=1, keepdims=True) - 2.0 * dets
    facet = margins.min(axis=1)
    if mode == "hull":
        return np.minimum(cube, facet)
    n = dets.shape[1]
    q1 = margins.prod(axis=1)
    roots = np.sqrt(dets)
    signs = locus._sign_patterns(n)
    p = (roots @ signs.T).prod(axis=1)
    q = q1 - 0.5 * p * p
    if mode == "conjecture":
        return np.minimum(cube, q)
    # order-3 exact region: inside cube+facets, a sample is attainable when
    # Q >= 0 or every pair curve is nonnegative; slack of the OR is the max.
    d1, d2, d3 = dets[:, 0], dets[:, 1], dets[:, 2]
    pc = np.minimum.reduce([
        (d1 - d2) ** 2 + 0.5 * (d1 + d2) - 3.0 / 16.0,
        (d1 - d3) ** 2 + 0.5 * (d1 + d3) - 3.0 / 16.0,
        (d2 - d3) ** 2 + 0.5 * (d2 + d3) - 3.0 / 16.0,
    ])
    return np.minimum.reduce([cube, facet, np.maximum(q, pc)])


def _fuzz_chunk(n: int, mode: str, seed: int, stream: int, count: int):
    entries = sample_unit_batch(n, seed, stream, count)
    dets = gram_dets_batch(entries, n)
    margin = _batch_margin(dets, mode)
    violations = int(np.count_nonzero(margin < -VIOLATION_TOL))
    near = int(np.count_nonzero(np.abs(margin) <= VIOLATION_TOL))
    return violations, near, float(margin.min())


def fuzz(n: int, mode: str, samples: int, seed: int,
         threads: Optional[int] = None) -> FuzzReport:
    """Sample unit tensors and count predicate violations beyond 1e-10 slack."""
    if mode not in FUZZ_MODES:
        raise ValueError(f"mode must be one of {FUZZ_MODES}, got {mode!r}")
    if mode == "n3" and n != 3:
        raise ValueError("mode 'n3' requires order 3")
    if mode == "conjecture" and n < 4:
        raise ValueError("mode 'conjecture' requires order >= 4")
    if n < 2:
        raise ValueError(f"order must be >= 2, got {n}")
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    start = time.perf_counter()
    chunks = [(stream, min(CHUNK, samples - stream * CHUNK))
              for stream in range((samples + CHUNK - 1) // CHUNK)]
    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(
                lambda sc: _fuzz_chunk(n, mode, seed, sc[0], sc[1]), chunks))
    else:
        results = [_fuzz_chunk(n, mode, seed, s, c) for s, c in chunks]
    violations = sum(r[0] for r in results)
    near = sum(r[1] for r in results)
    worst = min(r[2] for r in results)
    return FuzzReport(n=n, mode=mode, samples=samples, seed=seed,
                      violations=violations, near_boundary=near,
                      worst_margin=worst, elapsed=time.perf_counter() - start)


def _q_of_d3(d1: float, d2: float, x: np.ndarray | float):
    """Q(d1, d2, x) via the order-3 closed form; quartic polynomial in x."""
    m = (d2 + x - d1) * (d1 + x - d2) * (d1 + d2 - x)
    p = d1 * d1 + d2 * d2 + x * x - 2.0 * (d1 * d2 + d1 * x + d2 * x)
    return m - 0.5 * p * p


def _bisect_root(f, lo: float, hi: float) -> float:
    flo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= ROOT_TOL:
            return mid
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (flo < 0.0) != (fmid < 0.0):
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def _ternary_extremum(f, lo: float, hi: float, sign: float) -> tuple[float, float]:
    """Locate the minimum of sign*f on [lo, hi] by golden-section."""
    ratio = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - ratio * (b - a)
    x2 = a + ratio * (b - a)
    f1, f2 = sign * f(x1), sign * f(x2)
    for _ in range(80):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - ratio * (b - a)
            f1 = sign * f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + ratio * (b - a)
            f2 = sign * f(x2)
    x = x1 if f1 <= f2 else x2
    return x, f(x)


def _d3_roots(d1: float, d2: float, subdiv: int = 256) -> list[tuple[float, int]]:
    """Roots of Q(d1, d2, .) in [0, 1/4] with multiplicity 1 or 2 flags."""
    f = lambda x: float(_q_of_d3(d1, d2, x))
    xs = np.linspace(0.0, 0.25, subdiv + 1)
    fs = _q_of_d3(d1, d2, xs)
    roots: list[tuple[float, int]] = []

    def push(x: float, mult: int):
        for seen, _ in roots:
            if abs(seen - x) <= 1e-9:
                return
        roots.append((float(x), mult))

    for i in range(subdiv + 1):
        if fs[i] == 0.0:
            push(xs[i], 1)
    for i in range(subdiv):
        lo, hi = float(xs[i]), float(xs[i + 1])
        flo, fhi = float(fs[i]), float(fs[i + 1])
        if flo == 0.0 or fhi == 0.0:
            continue
        if (flo < 0.0) != (fhi < 0.0):
            push(_bisect_root(f, lo, hi), 1)
    # tangencies: interior extrema on one side of zero that still touch it
    for i in range(1, subdiv):
        prev, here, nxt = float(fs[i - 1]), float(fs[i]), float(fs[i + 1])
        if here == 0.0:
            continue
        if (here < prev and here < nxt and here > 0.0):
            x, val = _ternary_extremum(f, float(xs[i - 1]), float(xs[i + 1]), 1.0)
            if abs(val) <= SURFACE_ZERO_TOL:
                push(x, 2)
        elif (here > prev and here > nxt and here < 0.0):
            x, val = _ternary_extremum(f, float(xs[i - 1]), float(xs[i + 1]), -1.0)
            if abs(val) <= SURFACE_ZERO_TOL:
                push(x, 2)
    roots.sort(key=lambda r: r[0])
    return roots


def _sigma_of_det(d: float) -> float:
    return math.sqrt((1.0 + math.sqrt(max(1.0 - 4.0 * d, 0.0))) / 2.0)


def surface_grid(resolution: int, coords: str = "det") -> list[SurfacePoint]:
    """Point cloud of the separating surface Q = 0 over a (d1, d2) grid.

    For each grid cell the quartic in d3 is scanned on 256 subintervals;
    sign changes are bisected to 1e-12 and tangential touch points are
    refined through a local extremum and flagged with multiplicity 2.
    Sigma coordinates assume unit trace.
    """
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    if coords not in ("det", "sigma"):
        raise ValueError(f"coords must be 'det' or 'sigma', got {coords!r}")
    axis = np.linspace(0.0, 0.25, resolution)
    points: list[SurfacePoint] = []
    for d1 in axis:
        for d2 in axis:
            for d3, mult in _d3_roots(float(d1), float(d2)):
                d = (float(d1), float(d2), float(d3))
                sigma = tuple(_sigma_of_det(x) for x in d)
                points.append(SurfacePoint(d=d, sigma=sigma, multiplicity=mult))
    return points


def write_surface_csv(points: Iterable[SurfacePoint], coords: str,
                      out: TextIO) -> None:
    """Delimited output: header d1,d2,d3 or s1,s2,s3; 17 significant digits."""
    if coords == "det":
        out.write("d1,d2,d3\n")
        rows = ((p.d) for p in points)
    elif coords == "sigma":
        out.write("s1,s2,s3\n")
        rows = ((p.sigma) for p in points)
    else:
        raise ValueError(f"coords must be 'det' or 'sigma', got {coords!r}")
    for row in rows:
        out.write(",".join(f"{x:.17g}" for x in row) + "\n")


def _close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol


def boundary_examples_report() -> dict:
    """Recompute the worked boundary examples and check their published values.

    Returns a report dict with an "all_passed" flag; the CLI maps a failed
    check to a nonzero exit code.
    """
    checks: list[dict] = []

    def check(name: str, passed: bool, detail: str):
        checks.append({"name": name, "passed": bool(passed), "detail": detail})

    sqrt2 = math.sqrt(2.0)

    t_curve = example_counter()
    g = gram_tuple(t_curve)
    expected = (0.125, 0.125, (sqrt2 - 1.0) / 2.0)
    check("curve-point dets",
          all(_close(a, b, 1e-12) for a, b in zip(g.dets, expected)),
          f"dets={g.dets}")
    check("curve-point unit norm", _close(g.trace, 1.0, 1e-12), f"trace={g.trace}")
    qval = locus.q_surface(g.dets)
    check("curve-point on Q-surface", abs(qval) <= 1e-10, f"Q={qval}")
    member = locus.locus_membership_n3(g.dets)
    check("curve-point classified Boundary", member.status == "Boundary",
          f"membership={member}")
    pairs = hosvd.singular_pairs(g)
    printed = [((1.0 + sqrt2) / (2.0 * sqrt2), 0.5 - 1.0 / (2.0 * sqrt2)),
               ((1.0 + sqrt2) / (2.0 * sqrt2), 0.5 - 1.0 / (2.0 * sqrt2)),
               (1.0 / sqrt2, 1.0 - 1.0 / sqrt2)]
    sq_ok = all(_close(p.sigma_max ** 2, hi, 1e-12) and _close(p.sigma_min ** 2, lo, 1e-12)
                for p, (hi, lo) in zip(pairs, printed))
    check("curve-point sigma^2 values", sq_ok,
          f"pairs={[(p.sigma_max ** 2, p.sigma_min ** 2) for p in pairs]}")
    within = all(p.sigma_max - p.sigma_min > 1e-6 for p in pairs)
    check("sigma distinct within each flattening", within,
          f"gaps={[p.sigma_max - p.sigma_min for p in pairs]}")
    across = (_close(pairs[0].sigma_max, pairs[1].sigma_max, 1e-12)
              and abs(pairs[0].sigma_max - pairs[2].sigma_max) > 1e-6)
    check("sigma pattern across flattenings", across,
          "slots 1 and 2 share a pair, slot 3 differs")

    t223 = example_223()
    d223 = tuple(gram_det_general(t223, i) for i in (1, 2, 3))
    check("2x2x3 dets", all(_close(a, b, 1e-14) for a, b in zip(d223, (0.25, 0.0, 0.0))),
          f"dets={d223}")
    check("2x2x3 facet violation", d223[0] > d223[1] + d223[2] + 1e-6,
          f"d1={d223[0]} vs d2+d3={d223[1] + d223[2]}")

    vertex_checks = []
    for n, k in ((2, 2), (3, 2), (3, 3), (4, 3)):
        gv = gram_tuple(vertex_tensor(n, k))
        want = tuple(0.25 if i < k else 0.0 for i in range(n))
        vertex_checks.append(all(_close(a, b, 1e-14) for a, b in zip(gv.dets, want)))
    check("vertex tensors hit polytope vertices", all(vertex_checks),
          f"orders/ones {[(2, 2), (3, 2), (3, 3), (4, 3)]}")

    return {
        "curve_point": {"dets": list(g.dets), "trace": g.trace, "q": qval,
                        "membership": {"status": member.status, "region": member.region},
                        "sigma_pairs": [[p.sigma_max, p.sigma_min] for p in pairs]},
        "tensor_223": {"dets": list(d223)},
        "checks": checks,
        "all_passed": all(c["passed"] for c in checks),
    }
