import io
import math

import numpy as np
import pytest

from gramlocus import locus
from gramlocus.experiments import (FuzzReport, boundary_examples_report, fuzz,
                                   surface_grid, write_surface_csv,
                                   _batch_margin, _d3_roots)
from gramlocus.flatten import gram_dets_batch
from gramlocus.tensor import sample_unit_batch


def test_fuzz_validation():
    with pytest.raises(ValueError):
        fuzz(3, "bogus", 10, 1)
    with pytest.raises(ValueError):
        fuzz(4, "n3", 10, 1)
    with pytest.raises(ValueError):
        fuzz(3, "conjecture", 10, 1)
    with pytest.raises(ValueError):
        fuzz(1, "hull", 10, 1)
    with pytest.raises(ValueError):
        fuzz(3, "hull", 0, 1)


def test_fuzz_no_violations_small():
    for n, mode in ((3, "hull"), (3, "n3"), (4, "conjecture"), (5, "conjecture")):
        report = fuzz(n, mode, 20000, seed=2)
        assert report.violations == 0
        assert report.worst_margin >= -1e-10
        assert report.samples == 20000
        assert report.n == n and report.mode == mode


def test_fuzz_deterministic_across_threads():
    a = fuzz(4, "conjecture", 50000, seed=3, threads=1)
    b = fuzz(4, "conjecture", 50000, seed=3, threads=4)
    c = fuzz(4, "conjecture", 50000, seed=3)
    for x in (b, c):
        assert x.violations == a.violations
        assert x.near_boundary == a.near_boundary
        assert x.worst_margin == a.worst_margin
    d = fuzz(4, "conjecture", 50000, seed=4)
    assert d.worst_margin != a.worst_margin


def test_fuzz_report_json():
    report = fuzz(3, "hull", 1000, seed=1)
    doc = report.to_json()
    assert doc["n"] == 3 and doc["mode"] == "hull"
    assert set(doc) == {"n", "mode", "samples", "seed", "violations",
                        "near_boundary", "worst_margin", "elapsed"}
    assert isinstance(report, FuzzReport)


def test_batch_margin_matches_scalar_predicates():
    n = 3
    entries = sample_unit_batch(n, seed=10, stream=0, count=200)
    dets = gram_dets_batch(entries, n)
    margins = _batch_margin(dets, "n3")
    for row in range(0, 200, 7):
        d = dets[row]
        cube = min(min(d), 0.25 - max(d))
        facet = min(locus.hull_margins(d))
        q = locus.q_surface(d)
        pair = min(locus.pair_curves(d))
        expected = min(cube, facet, max(q, pair))
        assert margins[row] == pytest.approx(expected, abs=1e-12)
    hull = _batch_margin(dets, "hull")
    for row in range(0, 200, 7):
        d = dets[row]
        expected = min(min(d), 0.25 - max(d), min(locus.hull_margins(d)))
        assert hull[row] == pytest.approx(expected, abs=1e-12)


def test_batch_margin_conjecture_matches_q():
    n = 4
    entries = sample_unit_batch(n, seed=11, stream=0, count=100)
    dets = gram_dets_batch(entries, n)
    margins = _batch_margin(dets, "conjecture")
    for row in range(0, 100, 9):
        d = dets[row]
        cube = min(min(d), 0.25 - max(d))
        expected = min(cube, locus.q_surface(d))
        assert margins[row] == pytest.approx(expected, abs=1e-12)


def test_surface_grid_invariants():
    points = surface_grid(20)
    assert len(points) > 100
    for p in points:
        assert abs(locus.q_surface(p.d)) <= 1e-10
        for d, s in zip(p.d, p.sigma):
            assert 0.0 <= d <= 0.25 + 1e-12
            assert s == pytest.approx(
                math.sqrt((1.0 + math.sqrt(max(1.0 - 4.0 * d, 0.0))) / 2.0))
        assert p.multiplicity in (1, 2)


def test_surface_grid_hits_curve_point():
    # resolution 9 places a grid line exactly at 1/8
    points = surface_grid(9)
    target = (math.sqrt(2.0) - 1.0) / 2.0
    hits = [p for p in points
            if p.d[0] == 0.125 and p.d[1] == 0.125
            and abs(p.d[2] - target) < 1e-9]
    assert hits


def test_surface_grid_tangency_flag():
    # on the d1 = 1/4 face the surface touches the pair curve tangentially
    u = 0.3
    delta = math.sqrt(3.0 / 16.0 - u / 2.0)
    d2 = (u + delta) / 2.0
    roots = _d3_roots(0.25, d2)
    assert any(m == 2 and abs(x - (u - delta) / 2.0) < 1e-6 for x, m in roots)


def test_surface_grid_validation():
    with pytest.raises(ValueError):
        surface_grid(1)
    with pytest.raises(ValueError):
        surface_grid(10, coords="polar")


def test_write_surface_csv():
    points = surface_grid(6)
    buf = io.StringIO()
    write_surface_csv(points, "det", buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "d1,d2,d3"
    assert len(lines) == len(points) + 1
    first = [float(x) for x in lines[1].split(",")]
    assert first == pytest.approx(list(points[0].d))

    buf = io.StringIO()
    write_surface_csv(points, "sigma", buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "s1,s2,s3"
    # 17 significant digits survive a parse round trip
    val = lines[1].split(",")[0]
    assert float(val) == points[0].sigma[0]


def test_boundary_examples_report():
    report = boundary_examples_report()
    assert report["all_passed"]
    names = {c["name"] for c in report["checks"]}
    assert "curve-point dets" in names
    assert "2x2x3 facet violation" in names
    assert all(c["passed"] for c in report["checks"])
    assert report["curve_point"]["membership"]["status"] == "Boundary"
