import numpy as np
import pytest

from gramlocus.flatten import (gram_det, gram_det_general, gram_det_minors,
                               gram_dets_batch, gram_matrix, gram_tuple,
                               minor_squares, principal_flattening,
                               subset_flattening)
from gramlocus.tensor import (example_223, make_binary, make_general,
                              sample_unit, sample_unit_batch)


def _counting_tensor():
    return make_binary(3, range(1, 9))


def test_principal_flattening_layout():
    t = _counting_tensor()
    assert np.array_equal(principal_flattening(t, 1),
                          [[1, 2, 3, 4], [5, 6, 7, 8]])
    assert np.array_equal(principal_flattening(t, 2),
                          [[1, 2, 5, 6], [3, 4, 7, 8]])
    assert np.array_equal(principal_flattening(t, 3),
                          [[1, 3, 5, 7], [2, 4, 6, 8]])


def test_principal_flattening_slot_range():
    t = _counting_tensor()
    with pytest.raises(ValueError):
        principal_flattening(t, 0)
    with pytest.raises(ValueError):
        principal_flattening(t, 4)


def test_subset_flattening():
    t = _counting_tensor()
    assert np.array_equal(subset_flattening(t, [1]), principal_flattening(t, 1))
    assert np.array_equal(subset_flattening(t, [2, 3]),
                          [[1, 5], [2, 6], [3, 7], [4, 8]])
    # tensor-train bond flattening {1, 2}
    assert np.array_equal(subset_flattening(t, [1, 2]),
                          [[1, 2], [3, 4], [5, 6], [7, 8]])
    with pytest.raises(ValueError):
        subset_flattening(t, [])
    with pytest.raises(ValueError):
        subset_flattening(t, [1, 1])
    with pytest.raises(ValueError):
        subset_flattening(t, [1, 2, 3])


def test_gram_det_counting_tensor():
    t = _counting_tensor()
    assert gram_det(t, 1) == pytest.approx(320.0)
    assert sorted(minor_squares(t, 1)) == [16, 16, 16, 64, 64, 144]
    assert sum(minor_squares(t, 1)) == pytest.approx(320.0)
    assert gram_det_minors(t, 1) == pytest.approx(320.0)
    g = gram_matrix(t, 1)
    assert g.shape == (2, 2)
    assert np.linalg.det(g) == pytest.approx(320.0)


def test_cauchy_binet_agreement():
    # the quadratic-form route and the minor-expansion route must agree
    for n in (2, 3, 4, 5):
        for trial in range(50):
            t = sample_unit(n, seed=100 + trial, stream=n)
            for slot in range(1, n + 1):
                a = gram_det(t, slot)
                b = gram_det_minors(t, slot)
                assert abs(a - b) <= 1e-12


def test_trace_constant_across_flattenings():
    for n in (2, 3, 4):
        t = sample_unit(n, seed=3, stream=n)
        traces = [float(np.sum(principal_flattening(t, s) ** 2))
                  for s in range(1, n + 1)]
        assert max(traces) - min(traces) <= 1e-12


def test_gram_det_nonnegative_clamp():
    # rank-one tensors have exactly singular flattenings
    v = np.array([0.6, 0.8])
    w = np.array([1.0 / np.sqrt(2.0)] * 2)
    u = np.array([0.28, 0.96])
    t = make_binary(3, np.einsum("i,j,k->ijk", v, w, u).ravel())
    for slot in (1, 2, 3):
        d = gram_det(t, slot)
        assert 0.0 <= d <= 1e-14


def test_gram_det_scaling_and_bound():
    t = sample_unit(4, seed=9)
    scaled = make_binary(4, 3.0 * t.entries)
    for slot in range(1, 5):
        assert gram_det(scaled, slot) == pytest.approx(81.0 * gram_det(t, slot))
    g = gram_tuple(t)
    assert g.trace == pytest.approx(1.0)
    for d in g.dets:
        assert -1e-14 <= d <= 0.25 + 1e-12


def test_gram_tuple_shape():
    t = _counting_tensor()
    g = gram_tuple(t)
    assert len(g.dets) == 3
    assert g.trace == pytest.approx(float(np.sum(np.arange(1.0, 9.0) ** 2)))


def test_gram_det_general_matches_binary():
    t = sample_unit(3, seed=21)
    tg = make_general((2, 2, 2), t.entries)
    for slot in (1, 2, 3):
        assert gram_det_general(tg, slot) == pytest.approx(gram_det(t, slot), abs=1e-14)


def test_gram_det_general_223():
    t = example_223()
    dets = [gram_det_general(t, s) for s in (1, 2, 3)]
    assert dets[0] == pytest.approx(0.25, abs=1e-15)
    assert abs(dets[1]) <= 1e-15
    assert abs(dets[2]) <= 1e-15


def test_gram_det_general_against_numpy():
    rng = np.random.default_rng(17)
    for dims in ((3, 4, 2), (4, 3, 3), (5, 2, 4)):
        t = make_general(dims, rng.standard_normal(int(np.prod(dims))))
        for slot in range(1, 4):
            g = gram_matrix(t, slot)
            assert gram_det_general(t, slot) == pytest.approx(
                float(np.linalg.det(g)), rel=1e-10, abs=1e-10)


def test_gram_dets_batch_matches_scalar():
    n = 4
    entries = sample_unit_batch(n, seed=33, stream=0, count=64)
    batch = gram_dets_batch(entries, n)
    for row in range(8):
        t = make_binary(n, entries[row])
        for slot in range(1, n + 1):
            assert batch[row, slot - 1] == pytest.approx(gram_det(t, slot), abs=1e-14)
    assert batch.min() >= 0.0
