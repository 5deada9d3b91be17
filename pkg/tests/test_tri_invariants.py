import math

import numpy as np
import pytest

from gramlocus.flatten import gram_tuple
from gramlocus.tensor import (OrthoTuple, example_counter, make_binary,
                              ortho_act, sample_unit)
from gramlocus.tri_invariants import (equiv_search, hyperdet,
                                      invariant_vector)


def _diag_tensor():
    flat = np.zeros(8)
    flat[0] = 1.0
    flat[7] = 1.0
    return make_binary(3, flat)


def test_hyperdet_diagonal():
    assert hyperdet(_diag_tensor()) == pytest.approx(1.0)


def test_hyperdet_rank_one_vanishes():
    rng = np.random.default_rng(4)
    for _ in range(20):
        u, v, w = (rng.standard_normal(2) for _ in range(3))
        t = make_binary(3, np.einsum("i,j,k->ijk", u, v, w).ravel())
        assert abs(hyperdet(t)) <= 1e-12


def test_hyperdet_scaling():
    t = sample_unit(3, seed=8)
    scaled = make_binary(3, 2.0 * t.entries)
    assert hyperdet(scaled) == pytest.approx(16.0 * hyperdet(t))


def test_hyperdet_orthogonal_invariance():
    rng = np.random.default_rng(9)
    for trial in range(50):
        t = sample_unit(3, seed=400 + trial)
        q = OrthoTuple.random(3, rng)
        assert abs(hyperdet(ortho_act(t, q)) - hyperdet(t)) <= 1e-10


def test_hyperdet_order_validation():
    with pytest.raises(ValueError):
        hyperdet(sample_unit(4, seed=1))


def test_invariant_vector_counter_example():
    vec = invariant_vector(example_counter())
    assert vec.d1 == pytest.approx(0.125, abs=1e-12)
    assert vec.d2 == pytest.approx(0.125, abs=1e-12)
    assert vec.d3 == pytest.approx((math.sqrt(2.0) - 1.0) / 2.0, abs=1e-12)
    assert vec.trace == pytest.approx(1.0, abs=1e-12)
    assert vec.hyperdet == pytest.approx(hyperdet(example_counter()))


def test_invariant_vector_zero_tensor():
    vec = invariant_vector(make_binary(3, np.zeros(8)))
    assert vec == (0.0, 0.0, 0.0, 0.0, 0.0)


def test_invariant_vector_invariance():
    rng = np.random.default_rng(14)
    for trial in range(20):
        t = sample_unit(3, seed=500 + trial)
        q = OrthoTuple.random(3, rng)
        a = np.array(invariant_vector(t))
        b = np.array(invariant_vector(ortho_act(t, q)))
        assert np.allclose(a, b, atol=1e-10)


def test_equiv_search_identity():
    t = sample_unit(3, seed=77)
    result = equiv_search(t, t)
    assert result is not None
    assert result.residual <= 1e-8
    moved = ortho_act(t, result.transform)
    assert np.allclose(moved.entries, t.entries, atol=1e-6)


def test_equiv_search_planted():
    rng = np.random.default_rng(21)
    for trial in range(3):
        src = sample_unit(3, seed=600 + trial)
        planted = OrthoTuple.random(3, rng)
        tgt = ortho_act(src, planted)
        result = equiv_search(tgt, src)
        assert result is not None
        assert result.residual < 1e-6
        moved = ortho_act(src, result.transform)
        assert np.linalg.norm(moved.entries - tgt.entries) < 1e-6


def test_equiv_search_invariant_mismatch():
    a = sample_unit(3, seed=901)
    b = sample_unit(3, seed=902)
    # generic tensors have different hyperdeterminants
    assert abs(hyperdet(a) - hyperdet(b)) > 1e-6
    assert equiv_search(a, b) is None


def test_equiv_search_validation():
    t3 = sample_unit(3, seed=1)
    t4 = sample_unit(4, seed=1)
    with pytest.raises(ValueError):
        equiv_search(t3, t4)
    with pytest.raises(ValueError):
        equiv_search(t3, t3, grid=2)


def test_gram_tuple_invariance_under_action():
    rng = np.random.default_rng(31)
    t = sample_unit(3, seed=55)
    q = OrthoTuple.random(3, rng)
    g0 = gram_tuple(t)
    g1 = gram_tuple(ortho_act(t, q))
    assert np.allclose(g0.dets, g1.dets, atol=1e-12)
    assert g0.trace == pytest.approx(g1.trace, abs=1e-12)
