import itertools
import math
from fractions import Fraction

import pytest

from mlindex.bounds import (adjustment_min, ar_bound, bracket_report, completeness_rank_bounds,
                            grobner_degree_bound, isotropy_check, lift_prime_map, nonzero_points_bound,
                            pr_lower_from_alpha, ramsey_lambda_lower)
from mlindex.errors import ExponentOverflow, InfeasibleRange, InputError
from mlindex.generators import gen_identity, gen_random
from mlindex.gf import field_make
from mlindex.mlmap import evaluate, zero_map
from mlindex.oracle import analytic_rank_exact
from mlindex.randbeta import RandConfig


def test_completeness_general_q3():
    out = completeness_rank_bounds(1, 2, "general", 3)
    assert out["ar_upper_strict"] == 8
    assert out["gr_upper_strict"] == 4


def test_completeness_beta_zero_infinite():
    out = completeness_rank_bounds(0, 2, "general")
    assert out["gr_upper_strict"] == 1 and "ar_upper_strict" not in out


def test_completeness_symmetric():
    out = completeness_rank_bounds(3, 3, "symmetric")
    assert out["height_upper_strict"] == 20 and out["lower"] == 3


def test_completeness_alternating():
    out = completeness_rank_bounds(3, 2, "alternating", 5)
    assert out["gr_upper_strict"] == 6
    assert out["ar_upper_strict"] == 2 + 6 + math.ceil(6 / 4)


def test_isotropy_identity_6_3():
    ok, implied = isotropy_check(6, 3, 6, 4)
    assert ok
    # 6 <= PR * 25 + 5 forces PR >= 1
    assert implied == 1


def test_isotropy_zero_map():
    for pr in (0, 1, 7):
        assert isotropy_check(4, 2, pr, 4)[0]


def test_isotropy_implied_lower():
    assert pr_lower_from_alpha(10, 2, 0) == 9
    ok, implied = isotropy_check(10, 2, 8, 0)
    assert not ok and implied == 9


def test_isotropy_alternating_vacuous_coef():
    # alpha_Lambda = 0 makes C(0, d-1) vanish, so no PR value helps when m > 0
    assert pr_lower_from_alpha(3, 2, 0, "alternating") is None


def test_ramsey():
    assert ramsey_lambda_lower(2, 3, 3) == (4, True, Fraction(4))
    assert ramsey_lambda_lower(2, 2, 1)[0] == 2
    assert ramsey_lambda_lower(3, 4, 4) == (5, True, Fraction(5))
    floor, exact, val = ramsey_lambda_lower(2, 4, 3)   # C(3,2)/3 * 2 + 4 = 6
    assert (floor, exact) == (6, True)
    floor, exact, val = ramsey_lambda_lower(3, 5, 4)   # C(4,3)/4 * 3 + 5 = 8
    assert exact and floor == 8
    floor, exact, val = ramsey_lambda_lower(2, 5, 3)   # C(4,2)/4 * 2 + 5 = 8
    assert val == Fraction(8)
    floor, exact, val = ramsey_lambda_lower(3, 6, 4)   # C(5,3)/5 * 3 + 6 = 12
    assert val == 12
    floor, exact, val = ramsey_lambda_lower(2, 3, 4)   # C(2,2)/2 * 5 + 3 = 5.5
    assert (floor, exact, val) == (5, False, Fraction(11, 2))


def test_ramsey_bad_args():
    with pytest.raises(InputError):
        ramsey_lambda_lower(2, 1, 3)


def test_adjustment_examples():
    assert adjustment_min(3, 3, 5) == ((3, 1, 1), 3)
    assert adjustment_min(4, 3, 4) == ((1, 1, 1, 1), 1)
    assert adjustment_min(2, 2, 4) == ((2, 2), 4)


def test_adjustment_infeasible():
    with pytest.raises(InfeasibleRange):
        adjustment_min(3, 2, 7)
    with pytest.raises(InfeasibleRange):
        adjustment_min(3, 2, 2)


@pytest.mark.parametrize("N", [1, 2, 3, 4])
@pytest.mark.parametrize("q", [1, 2, 3, 4])
def test_adjustment_exhaustive(N, q):
    for c in range(N, q * N + 1):
        best = min(math.prod(z) for z in itertools.product(range(1, q + 1), repeat=N) if sum(z) == c)
        z, prod = adjustment_min(N, q, c)
        assert prod == best and sum(z) == c and math.prod(z) == prod


def test_nonzero_points_examples():
    assert nonzero_points_bound(2, 2, 1) == (2, False)
    assert nonzero_points_bound(3, 2, 2) == (6, False)
    assert nonzero_points_bound(2, 3, 0) == (0, False)
    assert nonzero_points_bound(2, 2, 5) == (3, True)


def test_nonzero_points_quadrics_gf3():
    # all quadratic polynomials in two variables over GF(3)
    monos = [(a, b) for a in range(3) for b in range(3) if a + b <= 2]
    pts = list(itertools.product(range(3), repeat=2))
    worst = 0
    for cs in itertools.product(range(3), repeat=len(monos)):
        if not any(cs):
            continue
        zeros = sum(sum(c * x**a * y**b for c, (a, b) in zip(cs, monos)) % 3 == 0 for x, y in pts)
        worst = max(worst, zeros)
    assert worst <= nonzero_points_bound(3, 2, 2)[0]


def test_grobner():
    assert grobner_degree_bound(1, 2, 3) == (50, False)
    assert grobner_degree_bound(2, 2, 4)[0] == 2178
    for d, n in [(2, 3), (3, 2), (5, 4)]:
        assert grobner_degree_bound(0, d, n)[0] == 2 * d ** (2 ** (n - 1))
    assert grobner_degree_bound(3, 2, 4)[1] is False
    with pytest.raises(ExponentOverflow):
        grobner_degree_bound(1, 3, 30)
    with pytest.raises(InputError):
        grobner_degree_bound(3, 2, 3)


def test_ar_bound_formula():
    assert ar_bound(4, 2, 3) == 8
    assert ar_bound(8, 3, 5) == 3 + 8 + 4


def test_lift_preserves_values():
    F = gen_random((2, 2), 2, "general", field_make(2), 3)
    G = lift_prime_map(F, field_make(2, 3))
    for u in itertools.product(range(2), repeat=2):
        for v in itertools.product(range(2), repeat=2):
            assert evaluate(G, [u, v]) == evaluate(F, [u, v])


def test_bracket_identity_8_3_gf2():
    sub, gr = bracket_report(gen_identity(8, 3, field_make(2)))
    assert gr.details["lifted"] and gr.details["lifted_q"] > 2 * 3 * 32
    assert gr.lower == 2
    assert gr.consistent and sub.consistent


def test_bracket_zero_map():
    sub, gr = bracket_report(zero_map(field_make(5), (2, 2), 2))
    assert (sub.lower, sub.upper, gr.lower, gr.upper) == (0, 0, 0, 0)


def test_bracket_against_exact_ar():
    ctx = field_make(5)
    for seed in range(5):
        F = gen_random((2, 2), 4, "general", ctx, seed)
        sub, gr = bracket_report(F, RandConfig(seed=seed))
        ar = analytic_rank_exact(F).value
        q, k = 5, 3
        assert sub.lower <= ar / (1 - math.log(k, q))
        assert gr.lower <= gr.upper


def test_bracket_small_field_withholds_upper():
    sub, gr = bracket_report(gen_identity(2, 2, field_make(2, 2)))
    # no lift from an extension base field; q = 4 > k = 3 still allows the upper path
    assert "lift-unavailable: extension base field" in gr.guards
    sub, gr = bracket_report(gen_identity(2, 3, field_make(2, 2)))
    assert "q<=k: upper bound withheld" in gr.guards
