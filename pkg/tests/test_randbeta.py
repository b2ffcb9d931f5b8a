import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mlindex.errors import DimMismatch, InputError
from mlindex.generators import gen_identity, gen_matmul, gen_random
from mlindex.gf import field_make
from mlindex.mlmap import evaluate, make_map, zero_map
from mlindex.oracle import beta_brute
from mlindex.randbeta import (RandConfig, beta_randomized, guard_size, level_cap, level_tuples,
                              rand_report_json, recheck_witness, samples_per_level, test_level,
                              witness_matrix)


def digit_vectors():
    # index i in 0..3 has binary digits (i >> 1, i & 1); vector k picks the indices whose digit equals k
    hi = [[1, 1, 0, 0], [0, 0, 1, 1]]
    lo = [[1, 0, 1, 0], [0, 1, 0, 1]]
    return [hi, lo]


def test_witness_matrix_digit_vectors():
    ctx = field_make(5)
    w = witness_matrix(gen_identity(4, 2, ctx), digit_vectors(), 1)
    assert w.matrix.rows == 4 and w.full_rank
    rows = sorted(tuple(r) for r in w.matrix.to_rows())
    assert rows == sorted(tuple(int(i == k) for i in range(4)) for k in range(4))


def test_witness_matrix_level_zero():
    ctx = field_make(5)
    F = gen_random((2, 3), 2, "general", ctx, 0)
    vecs = [[[1, 2]], [[0, 1, 4]]]
    w = witness_matrix(F, vecs, 0)
    assert w.matrix.to_rows() == [evaluate(F, [[1, 2], [0, 1, 4]])]


def test_witness_matrix_alternating_empty():
    ctx = field_make(3)
    F = gen_random((3, 3, 3), 2, "alternating", ctx, 0)
    w = witness_matrix(F, [[[1, 0, 0], [0, 1, 0]]], 1)
    assert w.tuple_set == () and w.matrix.rows == 0


def test_witness_matrix_dim_mismatch():
    ctx = field_make(3)
    F = gen_identity(2, 2, ctx)
    with pytest.raises(DimMismatch):
        witness_matrix(F, [[[1, 0]], [[1, 0, 0]]], 0)
    with pytest.raises(DimMismatch):
        witness_matrix(F, [[[1, 0]], [[1, 0]]], 1)


@pytest.mark.parametrize("kind,c,d,size", [("general", 1, 3, 8), ("alternating", 3, 2, 6),
                                           ("symmetric", 2, 2, 6), ("alternating", 0, 2, 0)])
def test_level_tuple_counts(kind, c, d, size):
    assert len(level_tuples(kind, c, d)) == size


def test_level_identity_4_2():
    F = gen_identity(4, 2, field_make(17))
    w = test_level(F, 1, 8, seed=0)
    assert w is not None and recheck_witness(F, w)


def test_level_rows_exceed_codim():
    F = gen_identity(4, 2, field_make(17))
    assert test_level(F, 2, 50, seed=0) is None


def test_level_zero_map():
    F = zero_map(field_make(17), (3, 3), 3)
    for c in range(3):
        assert test_level(F, c, 5) is None


def test_level_bad_k():
    with pytest.raises(InputError):
        test_level(gen_identity(2, 2, field_make(5)), 0, 0)


def test_identity_8_3():
    F = gen_identity(8, 3, field_make(101))
    rep = beta_randomized(F, RandConfig(epsilon=0.01))
    assert rep.value == 2 and rep.witness is not None
    # 2dN = 6 * 32 exceeds 101
    assert "q-guard-failed" in rep.flags


def test_matmul_2():
    rep = beta_randomized(gen_matmul(2, field_make(37)), RandConfig(epsilon=0.01))
    assert rep.value == 2


def test_rank_one_map():
    F = make_map(field_make(17), (2, 2), 2, "general", [1] + [0] * 7)
    assert beta_randomized(F).value == 1


def test_guard_satisfied():
    F = gen_identity(4, 2, field_make(53))
    assert guard_size(F) == 12
    rep = beta_randomized(F)
    assert rep.stats["q_guard_ok"] and rep.value == 2 and not rep.flags


def test_zero_map_report():
    rep = beta_randomized(zero_map(field_make(5), (2, 2), 1))
    assert rep.value == 0 and rep.witness is None
    assert any("zero-map" in f for f in rep.flags)


def test_samples_per_level():
    assert samples_per_level(2, 0.05) == 6     # log2(40) = 5.32
    assert samples_per_level(1, 0.5) == 1
    assert level_cap(gen_identity(8, 3, field_make(5))) == 2
    assert level_cap(gen_identity(9, 2, field_make(5))) == 3


def test_config_checks():
    with pytest.raises(InputError):
        RandConfig(epsilon=0)
    with pytest.raises(InputError):
        RandConfig(epsilon=1.5)
    with pytest.raises(InputError):
        RandConfig(threads=0)


def test_deterministic_and_thread_independent():
    F = gen_random((3, 3), 6, "general", field_make(31), 5)
    a = beta_randomized(F, RandConfig(seed=9))
    b = beta_randomized(F, RandConfig(seed=9))
    c = beta_randomized(F, RandConfig(seed=9, threads=4))
    assert rand_report_json(a) == rand_report_json(b) == rand_report_json(c)


def test_report_json_keys():
    rep = beta_randomized(gen_identity(4, 2, field_make(53)))
    js = rand_report_json(rep)
    assert set(js) >= {"beta", "kind", "epsilon", "k_per_level", "q_guard_ok", "witness", "seed"}
    assert len(js["witness"]["vectors"]) == 2


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from(["general", "alternating", "symmetric"]))
def test_sound_against_brute(seed, kind):
    rng = np.random.default_rng(seed)
    ctx = field_make(5)
    F = gen_random((3, 3), int(rng.integers(1, 7)), kind, ctx, rng)
    rep = beta_randomized(F, RandConfig(seed=seed))
    assert rep.value <= beta_brute(F).value
    if rep.witness is not None:
        w = witness_matrix(F, rep.witness, rep.value - 1)
        assert recheck_witness(F, w)
