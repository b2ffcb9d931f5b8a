import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mlindex.errors import (ArityMismatch, DependentBasis, DimMismatch, InvalidMap, KindMismatch,
                            NotHomogeneous, SmallCharacteristic)
from mlindex.fqlinalg import rank_rows
from mlindex.generators import GraphSpec, gen_identity, gen_random, gen_tutte
from mlindex.gf import field_make
from mlindex.mlmap import (MultiMap, contract_to_matrix, diagonal_poly, direct_sum, evaluate,
                           make_map, map_from_json, map_to_json, polarize, restrict,
                           standard_basis, subspace, validate, zero_map)
from mlindex.oracle import beta_brute


def lin(ctx, a, u, b, v):
    return [ctx.add(ctx.mul(a, x), ctx.mul(b, y)) for x, y in zip(u, v)]


def test_identity_eval():
    F = gen_identity(2, 2, field_make(5))
    assert evaluate(F, [[1, 0], [1, 1]]) == [1, 0]


def test_zero_slot():
    F = gen_random((2, 3), 2, "general", field_make(5), 0)
    assert evaluate(F, [[0, 0], [1, 2, 3]]) == [0, 0]


def test_tutte_path_eval():
    F = gen_tutte(GraphSpec.from_edges(3, [(0, 1), (1, 2)]), field_make(3))
    # edge {1,2}: u_1 v_2 - u_2 v_1 = 1; edge {2,3}: 0
    assert evaluate(F, [[1, 0, 0], [0, 1, 0]]) == [1, 0]


def test_dim_mismatch():
    F = gen_identity(2, 2, field_make(5))
    with pytest.raises(DimMismatch):
        evaluate(F, [[1, 0, 0], [1, 1]])
    with pytest.raises(DimMismatch):
        evaluate(F, [[1, 0]])


def test_restrict_full_standard_bases():
    ctx = field_make(5)
    F = gen_random((2, 3), 2, "general", ctx, 3)
    G = restrict(F, [standard_basis(ctx, 2), standard_basis(ctx, 3)])
    assert G.coeffs == F.coeffs


def test_restrict_digit_construction():
    ctx = field_make(5)
    F = gen_identity(4, 2, ctx)
    # U_1 pairs indices by their high binary digit, U_2 by their low digit
    U1 = subspace(ctx, [[1, 1, 0, 0], [0, 0, 1, 1]])
    U2 = subspace(ctx, [[1, 0, 1, 0], [0, 1, 0, 1]])
    G = restrict(F, [U1, U2])
    rows = [evaluate(G, [a, b]) for a in ([1, 0], [0, 1]) for b in ([1, 0], [0, 1])]
    assert rank_rows(ctx, rows, 4) == 4
    assert beta_brute(G).value == 2


def test_restrict_same_subspace_both_modes():
    # span{e1+e3, e2+e4} in both modes only reaches two coordinates pairwise
    ctx = field_make(5)
    U = subspace(ctx, [[1, 0, 1, 0], [0, 1, 0, 1]])
    G = restrict(gen_identity(4, 2, ctx), [U, U])
    rows = [evaluate(G, [a, b]) for a in ([1, 0], [0, 1]) for b in ([1, 0], [0, 1])]
    assert rank_rows(ctx, rows, 4) == 2
    assert beta_brute(G).value == 1


def test_restrict_zero_dim():
    ctx = field_make(3)
    G = restrict(gen_identity(2, 2, ctx), [subspace(ctx, [], 2), subspace(ctx, [], 2)])
    assert G.dims == (0, 0)
    assert beta_brute(G).value == 0


def test_restrict_dependent():
    ctx = field_make(3)
    with pytest.raises(DependentBasis):
        subspace(ctx, [[1, 1], [2, 2]])


def test_direct_sum_with_zero():
    ctx = field_make(3)
    F = gen_random((2, 2), 2, "general", ctx, 1)
    S = direct_sum(F, zero_map(ctx, (1, 1), 1))
    for u in itertools.product(range(3), repeat=2):
        for v in itertools.product(range(3), repeat=2):
            assert evaluate(S, [list(u) + [0], list(v) + [0]]) == evaluate(F, [u, v]) + [0]


def test_direct_sum_identity_law():
    ctx = field_make(5)
    for r, s, d in [(1, 2, 2), (2, 3, 3), (3, 1, 2)]:
        S = direct_sum(gen_identity(r, d, ctx), gen_identity(s, d, ctx))
        # block-diagonal placement keeps the index order, so the stores agree exactly
        assert S.coeffs == gen_identity(r + s, d, ctx).coeffs


def test_direct_sum_scalar_maps():
    ctx = field_make(3)
    M1 = gen_identity(1, 2, ctx)
    S = direct_sum(M1, M1)
    assert S.dims == (2, 2)
    assert beta_brute(S).value == 1
    assert max(beta_brute(M1).value, beta_brute(M1).value) <= beta_brute(S).value


def test_direct_sum_errors():
    ctx = field_make(3)
    with pytest.raises(KindMismatch):
        direct_sum(gen_identity(2, 2, ctx), zero_map(ctx, (2, 2), 1, "alternating"))
    with pytest.raises(ArityMismatch):
        direct_sum(gen_identity(2, 2, ctx), gen_identity(2, 3, ctx))


def test_polarize_product_gf5():
    ctx = field_make(5)
    F = polarize([{(1, 1): 1}], 2, ctx)
    assert F.kind == "symmetric"
    # symmetric store order: (0,0), (0,1), (1,1)
    assert F.coeffs == (0, 3, 0)
    assert ctx.mul(2, 3) == 1
    for x in itertools.product(range(5), repeat=2):
        assert evaluate(F, [x, x]) == [x[0] * x[1] % 5]


def test_polarize_power():
    ctx = field_make(7)
    for d in (2, 3, 4):
        F = polarize([{(d, 0): 1}], 2, ctx)
        assert F.coeffs[0] == 1 and not any(F.coeffs[1:])


def test_polarize_small_char():
    with pytest.raises(SmallCharacteristic):
        polarize([{(1, 1): 1}], 2, field_make(2))


def test_polarize_not_homogeneous():
    with pytest.raises(NotHomogeneous):
        polarize([{(2, 0): 1, (1, 0): 1}], 2, field_make(5))


def test_validate_clean():
    assert validate(gen_identity(3, 2, field_make(5))) == []


def test_validate_alternating_too_short():
    F = make_map(field_make(3), (2, 2, 2), 1, "alternating", [])
    msgs = validate(F)
    assert any("no strictly increasing tuple exists" in m for m in msgs)
    assert len(F.coeffs) == 0 and F.is_zero


def test_validate_count_mismatch():
    F = MultiMap(field_make(3), 2, (2, 2), 1, "general", (1, 0, 0))
    assert any(m.startswith("CountMismatch") for m in validate(F))
    with pytest.raises(InvalidMap):
        make_map(field_make(3), (2, 2), 1, "general", [1, 0, 0])


def test_validate_unreduced():
    F = MultiMap(field_make(3), 2, (2, 2), 1, "general", (1, 0, 0, 7))
    assert any(m.startswith("UnreducedCoefficient") for m in validate(F))


def test_json_round_trip():
    for ctx in (field_make(5), field_make(2, 3)):
        for kind, dims in (("general", (2, 3)), ("alternating", (3, 3)), ("symmetric", (2, 2, 2))):
            F = gen_random(dims, 2, kind, ctx, 11)
            assert map_from_json(map_to_json(F)) == F


def test_contract_matches_evaluate():
    ctx = field_make(5)
    F = gen_random((2, 3, 2), 3, "general", ctx, 4)
    rng = np.random.default_rng(0)
    u, w = ctx.sample_vector(rng, 2), ctx.sample_vector(rng, 2)
    mat = contract_to_matrix(F, [u, None, w])
    for k in range(3):
        e = [int(i == k) for i in range(3)]
        assert [row[k] for row in mat] == evaluate(F, [u, e, w])


# -- properties -------------------------------------------------------------

KIND_DIMS = st.sampled_from([("general", (2, 3)), ("general", (2, 2, 2)), ("alternating", (3, 3)),
                             ("alternating", (4, 4, 4)), ("symmetric", (3, 3)), ("symmetric", (2, 2, 2))])
FIELDS = st.sampled_from([(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)])


@settings(max_examples=60, deadline=None)
@given(KIND_DIMS, FIELDS, st.integers(0, 2**32), st.data())
def test_multilinear(kd, pl, seed, data):
    kind, dims = kd
    ctx = field_make(*pl)
    F = gen_random(dims, 2, kind, ctx, seed)
    rng = np.random.default_rng(seed)
    args = [ctx.sample_vector(rng, n) for n in dims]
    slot = data.draw(st.integers(0, len(dims) - 1))
    u, v = ctx.sample_vector(rng, dims[slot]), ctx.sample_vector(rng, dims[slot])
    a, b = (data.draw(st.integers(0, ctx.q - 1)) for _ in range(2))
    mixed = list(args)
    mixed[slot] = lin(ctx, a, u, b, v)
    au, bv = list(args), list(args)
    au[slot], bv[slot] = u, v
    assert evaluate(F, mixed) == lin(ctx, a, evaluate(F, au), b, evaluate(F, bv))


@pytest.mark.parametrize("p,n,d", [(2, 3, 2), (3, 3, 2), (2, 4, 2), (3, 4, 2), (2, 3, 3), (3, 3, 3)])
def test_alternating_vanishes_on_repeats_exhaustive(p, n, d):
    ctx = field_make(p)
    F = gen_random((n,) * d, 2, "alternating", ctx, 5)
    vecs = list(itertools.product(range(p), repeat=n))
    rng = np.random.default_rng(1)
    for v in vecs:
        for slots in itertools.combinations(range(d), 2):
            args = [ctx.sample_vector(rng, n) for _ in range(d)]
            for s in slots:
                args[s] = list(v)
            assert evaluate(F, args) == [0, 0]


@settings(max_examples=40, deadline=None)
@given(FIELDS, st.integers(0, 2**32), st.sampled_from([2, 3]))
def test_symmetric_permutation_invariance(pl, seed, d):
    ctx = field_make(*pl)
    F = gen_random((3,) * d, 2, "symmetric", ctx, seed)
    rng = np.random.default_rng(seed)
    args = [ctx.sample_vector(rng, 3) for _ in range(d)]
    base = evaluate(F, args)
    for perm in itertools.permutations(range(d)):
        assert evaluate(F, [args[i] for i in perm]) == base


@settings(max_examples=40, deadline=None)
@given(FIELDS, st.integers(0, 2**32))
def test_restrict_commutes(pl, seed):
    ctx = field_make(*pl)
    F = gen_random((3, 3), 2, "general", ctx, seed)
    rng = np.random.default_rng(seed)
    bases = []
    for _ in range(2):
        while True:
            vecs = [ctx.sample_vector(rng, 3) for _ in range(2)]
            if rank_rows(ctx, vecs, 3) == 2:
                break
        bases.append(subspace(ctx, vecs))
    G = restrict(F, bases)
    c = [ctx.sample_vector(rng, 2) for _ in range(2)]
    expanded = [[0] * 3 for _ in range(2)]
    for k in range(2):
        for i, vec in enumerate(bases[k].vectors):
            expanded[k] = lin(ctx, 1, expanded[k], c[k][i], vec)
    assert evaluate(G, c) == evaluate(F, expanded)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([5, 7, 11]), st.integers(2, 4), st.integers(1, 3), st.integers(0, 2**32))
def test_polarize_round_trip(p, d, m, seed):
    ctx = field_make(p)
    if p <= d:
        return
    rng = np.random.default_rng(seed)
    monos = [e for e in itertools.product(range(d + 1), repeat=m) if sum(e) == d]
    polys = []
    for _ in range(2):
        P = {e: int(rng.integers(0, p)) for e in monos}
        polys.append({e: c for e, c in P.items() if c})
    if not any(polys):
        return
    if not all(polys):
        polys = [P for P in polys if P]
    F = polarize(polys, m, ctx)
    for j, P in enumerate(polys):
        assert diagonal_poly(F, j) == P
