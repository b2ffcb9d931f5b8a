"""Reproducible verification suites.

Every suite returns a plain dict with a boolean ``pass`` and the numbers
behind it.  Nothing time-dependent goes into the dict, so two runs with the
same seed serialize to identical JSON.
"""

from __future__ import annotations

import math
from itertools import product
from typing import Callable

import numpy as np

from . import bounds
from .generators import (GraphSpec, gen_identity, gen_matmul, gen_random, gen_tutte,
                         independence_number, nonisomorphic_graphs)
from .gf import field_make, next_prime
from .height import height_bracket, parse_ideal
from .mlmap import direct_sum, zero_map
from .oracle import alpha_brute, analytic_rank_exact, beta_brute, subrank_brute
from .randbeta import (RandConfig, beta_randomized, guard_size, recheck_witness, trial_rng,
                       witness_matrix)


def _rng(seed: int, *tags: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed & (2**64 - 1), *tags]))


def _int_root(r: int, d: int) -> int:
    return max(k for k in range(r + 1) if k**d <= r)


# -- closed forms ---------------------------------------------------------------

def suite_closed_forms(seed: int = 0, threads: int = 1) -> dict:
    cases = []
    for q in (5, 7):
        ctx = field_make(q)
        for d in (2, 3):
            for r in range(1, 9):
                F = gen_identity(r, d, ctx)
                cases.append({"family": "identity", "q": q, "r": r, "d": d, "index": "beta",
                              "value": beta_brute(F).value, "expected": _int_root(r, d)})
                if r <= 5:
                    cases.append({"family": "identity", "q": q, "r": r, "d": d, "index": "alpha",
                                  "value": alpha_brute(F).value, "expected": r * (d - 1) // d})
    for q in (2, 3):
        ctx = field_make(q)
        M2, M3 = gen_matmul(2, ctx), gen_matmul(3, ctx)
        cases.append({"family": "matmul", "q": q, "n": 2, "index": "alpha",
                      "value": alpha_brute(M2).value, "expected": 2})
        cases.append({"family": "matmul", "q": q, "n": 2, "index": "beta",
                      "value": beta_brute(M2).value, "expected": 2})
        cases.append({"family": "matmul", "q": q, "n": 3, "index": "beta",
                      "value": beta_brute(M3).value, "expected": 3})
    ok = sum(c["value"] == c["expected"] for c in cases)
    return {"suite": "closed-forms", "cases": cases, "matched": ok, "total": len(cases),
            "pass": ok == len(cases)}


# -- randomized beta -------------------------------------------------------------

def random_instance(seed: int, idx: int):
    """Instance idx of the seeded corpus: d in {2,3}, dims <= 3, codim <= 8,
    q the smallest prime above 2dN."""
    rng = _rng(seed, 1, idx)
    d = int(rng.choice([2, 3]))
    kind = str(rng.choice(["general", "general", "general", "alternating", "symmetric"]))
    if kind == "general":
        dims = tuple(int(x) for x in rng.integers(1, 4, size=d))
    else:
        dims = (int(rng.integers(2, 4)),) * d
    codim = int(rng.integers(1, 9))
    N = sum(dims) + codim if kind == "general" else d * dims[0] + codim
    ctx = field_make(next_prime(2 * d * N))
    return gen_random(dims, codim, kind, ctx, rng)


def suite_randomized(seed: int = 0, threads: int = 1, count: int = 200, epsilon: float = 0.05) -> dict:
    rows = []
    for idx in range(count):
        F = random_instance(seed, idx)
        exact = beta_brute(F).value
        rep = beta_randomized(F, RandConfig(epsilon=epsilon, seed=seed * 100003 + idx, threads=threads))
        if rep.witness is not None:
            recheck = recheck_witness(F, witness_matrix(F, rep.witness, rep.value - 1))
        else:
            recheck = rep.value == 0
        rows.append({"idx": idx, "kind": F.kind, "d": F.d, "dims": list(F.dims), "codim": F.codim,
                     "q": F.ctx.q, "beta_brute": exact, "beta_hat": rep.value, "recheck": recheck,
                     "q_guard_ok": rep.stats["q_guard_ok"]})
    sound = sum(r["beta_hat"] <= r["beta_brute"] for r in rows)
    exact = sum(r["beta_hat"] == r["beta_brute"] for r in rows)
    rechecks = sum(r["recheck"] for r in rows)
    return {"suite": "randomized", "instances": rows, "sound": sound, "exact": exact,
            "rechecked": rechecks, "total": count,
            "pass": sound == count and rechecks == count and exact >= math.ceil(0.9 * count)}


# -- per-sample success ------------------------------------------------------------

def suite_schwartz_zippel(seed: int = 0, threads: int = 1, trials: int = 400) -> dict:
    F0 = gen_identity(4, 2, field_make(2))
    N = guard_size(F0)
    q = next_prime(2 * 2 * N)
    F = gen_identity(4, 2, field_make(q))
    hits = 0
    for i in range(trials):
        rng = trial_rng(seed, 1, i)
        vecs = [[F.ctx.sample_vector(rng, 4) for _ in range(2)] for _ in range(2)]
        hits += witness_matrix(F, vecs, 1).full_rank
    freq = hits / trials
    return {"suite": "schwartz-zippel", "q": q, "level": 1, "trials": trials, "full_rank": hits,
            "frequency": freq, "pass": freq >= 0.45}


# -- inequality chains ---------------------------------------------------------------

def _ineq_corpus(seed: int):
    out = []
    for q in (2, 3):
        ctx = field_make(q)
        for r in (1, 2, 3):
            out.append(("identity", gen_identity(r, 2, ctx)))
        out.append(("identity", gen_identity(2, 3, ctx)))
        out.append(("matmul", gen_matmul(1, ctx)))
    for idx in range(40):
        rng = _rng(seed, 4, idx)
        q = int(rng.choice([2, 3]))
        dims = tuple(int(x) for x in rng.integers(1, 4, size=2))
        codim = int(rng.integers(1, 7))
        out.append(("random", gen_random(dims, codim, "general", field_make(q), rng)))
    return out


def suite_inequalities(seed: int = 0, threads: int = 1) -> dict:
    ar_rows, chain_rows, iso_rows = [], [], []
    for name, F in _ineq_corpus(seed):
        if F.is_zero:
            continue
        b = beta_brute(F).value
        ar = analytic_rank_exact(F)
        bound = bounds.completeness_rank_bounds(b, F.d, F.kind, F.ctx.q)["ar_upper_strict"]
        ar_rows.append({"family": name, "q": F.ctx.q, "dims": list(F.dims), "codim": F.codim,
                        "beta": b, "zero_count": ar.zero_count, "total_dim": ar.total_dim,
                        "ar_bound": bound, "holds": ar.less_than(bound)})
        if F.ctx.q == 2 and max(F.dims) <= 3:
            q_low = 0
            for r in range(1, min(2, b) + 1):
                if subrank_brute(F, r) is None:
                    break
                q_low = r
            chain_rows.append({"family": name, "q": F.ctx.q, "dims": list(F.dims), "codim": F.codim, "beta": b,
                               "subrank_at_least": q_low, "holds": q_low >= min(b, 2)})
    for q in (2, 3):
        ctx = field_make(q)
        fams = [(f"identity r={r} d={d}", gen_identity(r, d, ctx), r)
                for r in range(1, 6) for d in (2, 3)]
        fams.append(("matmul n=2", gen_matmul(2, ctx), 4))
        for name, F, pr in fams:
            a = alpha_brute(F).value
            ok, implied = bounds.isotropy_check(min(F.dims), F.d, pr, a, "general")
            iso_rows.append({"family": name, "q": q, "alpha": a, "pr_upper": pr, "holds": ok,
                             "implied_pr_lower": implied})
    for g in [GraphSpec.from_edges(4, [(0, 1), (1, 2), (2, 3)]),
              GraphSpec.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
              GraphSpec.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])]:
        T = gen_tutte(g, field_make(3))
        a = alpha_brute(T).value
        pr = min(T.codim, T.dims[0])
        ok, implied = bounds.isotropy_check(T.dims[0], 2, pr, a, "alternating")
        iso_rows.append({"family": f"tutte {list(g.edges)}", "q": 3, "alpha": a, "pr_upper": pr,
                         "holds": ok, "implied_pr_lower": implied})
    passed = all(r["holds"] for r in ar_rows + chain_rows + iso_rows)
    return {"suite": "inequalities", "analytic_rank": ar_rows, "subrank_chain": chain_rows,
            "isotropy": iso_rows, "pass": passed}


# -- Tutte cross-check -------------------------------------------------------------

def suite_tutte(seed: int = 0, threads: int = 1, vertices: int = 5) -> dict:
    ctx = field_make(3)
    rows = []
    for g in nonisomorphic_graphs(vertices):
        if g.edges:
            a = alpha_brute(gen_tutte(g, ctx)).value
        else:
            a = alpha_brute(zero_map(ctx, (vertices, vertices), 0, "alternating")).value
        ind = independence_number(g)
        rows.append({"edges": [list(e) for e in g.edges], "alpha_lambda": a,
                     "independence": ind, "match": a == ind})
    ok = sum(r["match"] for r in rows)
    return {"suite": "tutte", "graphs": rows, "matched": ok, "total": len(rows),
            "pass": ok == len(rows)}


# -- direct sums --------------------------------------------------------------------

def suite_direct_sum(seed: int = 0, threads: int = 1, general_pairs: int = 50, alt_pairs: int = 20) -> dict:
    gen_rows, alt_rows = [], []
    for idx in range(general_pairs):
        rng = _rng(seed, 6, idx)
        ctx = field_make(int(rng.choice([2, 3])))
        maps = []
        for _ in range(2):
            dims = tuple(int(x) for x in rng.integers(1, 3, size=2))
            maps.append(gen_random(dims, int(rng.integers(1, 4)), "general", ctx, rng))
        F, G = maps
        S = direct_sum(F, G)
        aF, aG, aS = (alpha_brute(X).value for X in (F, G, S))
        bF, bG, bS = (beta_brute(X).value for X in (F, G, S))
        gen_rows.append({"idx": idx, "q": ctx.q, "alpha": [aF, aG, aS], "beta": [bF, bG, bS],
                         "holds": aF + aG <= aS and max(bF, bG) <= bS})
    for idx in range(alt_pairs):
        rng = _rng(seed, 7, idx)
        ctx = field_make(3)
        maps = []
        for _ in range(2):
            n = int(rng.integers(2, 4))
            maps.append(gen_random((n, n), int(rng.integers(1, 3)), "alternating", ctx, rng))
        F, G = maps
        aF, aG, aS = (alpha_brute(X).value for X in (F, G, direct_sum(F, G)))
        alt_rows.append({"idx": idx, "dims": [F.dims[0], G.dims[0]], "alpha_lambda": [aF, aG, aS],
                         "additive": aF + aG == aS})
    g_ok = sum(r["holds"] for r in gen_rows)
    a_ok = sum(r["additive"] for r in alt_rows)
    return {"suite": "direct-sum", "general": gen_rows, "alternating": alt_rows,
            "general_holds": g_ok, "alternating_exact": a_ok,
            "pass": g_ok == general_pairs and a_ok == alt_pairs}


# -- height ------------------------------------------------------------------------

def suite_height(seed: int = 0, threads: int = 1, seeds: int = 10) -> dict:
    ctx = field_make(7)
    rows = []
    for h in (1, 2, 3):
        m = max(h, 3)
        I = parse_ideal(", ".join(f"x{i}^2" for i in range(1, h + 1)), ctx, m)
        for s in range(seeds):
            rep = height_bracket(I, RandConfig(epsilon=0.05, seed=seed * 1000 + s, threads=threads))
            rows.append({"h": h, "num_vars": m, "seed": s, "lower": rep.lower, "upper": rep.upper,
                         "lifted_q": rep.details["lifted_q"], "contains": rep.lower <= h <= rep.upper})
    ok = sum(r["contains"] for r in rows)
    return {"suite": "height", "runs": rows, "contained": ok, "total": len(rows),
            "pass": ok == len(rows)}


# -- calculators -------------------------------------------------------------------

def _exhaustive_adjustment(N: int, q: int, c: int) -> int | None:
    best = None
    for z in product(range(1, q + 1), repeat=N):
        if sum(z) == c:
            p = math.prod(z)
            best = p if best is None else min(best, p)
    return best


def _max_zero_count(q: int, N: int, deg: int, rng: np.random.Generator) -> tuple[int, str]:
    """Largest zero count over nonzero polynomials of total degree <= deg,
    exhaustively when there are at most 10^5 of them, else 200 random ones."""
    monos = [e for e in product(range(min(deg, q - 1) + 1), repeat=N) if sum(e) <= deg]
    points = list(product(range(q), repeat=N))
    table = [[math.prod(pow(x, k, q) for x, k in zip(pt, e)) % q for e in monos] for pt in points]

    def zeros(coeffs):
        return sum(1 for row in table if sum(a * b for a, b in zip(row, coeffs)) % q == 0)

    if q ** len(monos) <= 10**5:
        it = (c for c in product(range(q), repeat=len(monos)) if any(c))
        mode = "exhaustive"
    else:
        it = ([int(x) for x in rng.integers(0, q, size=len(monos))] for _ in range(200))
        mode = "sampled"
    best = 0
    for c in it:
        if any(c):
            best = max(best, zeros(c))
    return best, mode


def suite_calculators(seed: int = 0, threads: int = 1) -> dict:
    adj = []
    for N in range(1, 5):
        for q in range(1, 5):
            for c in range(N, q * N + 1):
                z, prod_val = bounds.adjustment_min(N, q, c)
                adj.append({"N": N, "q": q, "c": c, "z": list(z), "product": prod_val,
                            "exhaustive": _exhaustive_adjustment(N, q, c)})
    nzp = []
    for q in (2, 3):
        for N in range(1, 4):
            for deg in range(0, 4):
                bound, clamped = bounds.nonzero_points_bound(q, N, deg)
                observed, mode = _max_zero_count(q, N, deg, _rng(seed, 8, q, N, deg))
                nzp.append({"q": q, "N": N, "deg": deg, "bound": bound, "clamped": clamped,
                            "max_zeros": observed, "mode": mode, "holds": observed <= bound})
    g1 = bounds.grobner_degree_bound(1, 2, 3)[0]
    g2 = bounds.grobner_degree_bound(2, 2, 4)[0]
    ram = bounds.ramsey_lambda_lower(2, 3, 3)
    adj_ok = all(r["product"] == r["exhaustive"] and sum(r["z"]) == r["c"] for r in adj)
    nzp_ok = all(r["holds"] for r in nzp)
    checks = {"adjustment": adj_ok, "nonzero_points": nzp_ok, "grobner_1_2_3": g1 == 50,
              "grobner_2_2_4": g2 == 2178, "ramsey_2_3_3": ram[0] == 4 and ram[1]}
    return {"suite": "calculators", "adjustment": adj, "nonzero_points": nzp,
            "grobner": {"1,2,3": g1, "2,2,4": g2}, "ramsey_2_3_3": {"floor": ram[0], "exact": ram[1]},
            "checks": checks, "pass": all(checks.values())}


SUITES: dict[str, Callable[..., dict]] = {
    "closed-forms": suite_closed_forms,
    "randomized": suite_randomized,
    "schwartz-zippel": suite_schwartz_zippel,
    "inequalities": suite_inequalities,
    "tutte": suite_tutte,
    "direct-sum": suite_direct_sum,
    "height": suite_height,
    "calculators": suite_calculators,
}


def run_suite(name: str, seed: int = 0, threads: int = 1) -> dict:
    if name == "all":
        results = {k: fn(seed=seed, threads=threads) for k, fn in SUITES.items()}
        return {"suite": "all", "results": results, "pass": all(r["pass"] for r in results.values())}
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](seed=seed, threads=threads)
