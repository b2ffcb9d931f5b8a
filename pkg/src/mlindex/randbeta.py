"""Randomized completeness-index computation with one-sided witnesses.

Level c asks whether some (c+1)-dimensional subspace tuple is complete.  The
witness matrix evaluated at random vectors has full row rank with
probability at least 1/2 when the answer is yes and q > 2dN, and can never
have full row rank when the answer is no, so a full-rank sample is a
certificate and repeated failure is strong evidence of the converse.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, product
from typing import Sequence

import numpy as np

from .errors import DimMismatch, InputError
from .fqlinalg import FqMatrix, rank, rank_rows
from .mlmap import MultiMap, evaluate
from .results import IndexReport


@dataclass(frozen=True)
class RandConfig:
    epsilon: float = 0.05
    seed: int = 0
    samples_override: int | None = None
    max_level: int | None = None
    threads: int = 1

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise InputError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.samples_override is not None and self.samples_override < 1:
            raise InputError("samples_override must be at least 1")
        if self.threads < 1:
            raise InputError("threads must be at least 1")


@dataclass(frozen=True)
class WitnessMatrix:
    """Evaluations of F on the level-c basis tuples of the sampled vectors.

    ``sample_vectors`` holds one family of c+1 vectors per mode for general
    maps and a single family for alternating/symmetric maps.
    """

    c: int
    tuple_set: tuple[tuple[int, ...], ...]
    matrix: FqMatrix
    sample_vectors: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def full_rank(self) -> bool:
        return rank(self.matrix) == len(self.tuple_set)

    def to_json(self) -> dict:
        return {"level": self.c, "vectors": [[list(v) for v in fam] for fam in self.sample_vectors]}


def level_tuples(kind: str, c: int, d: int) -> list[tuple[int, ...]]:
    if kind == "general":
        return list(product(range(c + 1), repeat=d))
    if kind == "alternating":
        return list(combinations(range(c + 1), d))
    return list(combinations_with_replacement(range(c + 1), d))


def _family_modes(F: MultiMap) -> list[int]:
    return list(F.dims) if F.kind == "general" else [F.dims[0]]


def witness_matrix(F: MultiMap, sample_vectors: Sequence[Sequence[Sequence[int]]], c: int) -> WitnessMatrix:
    modes = _family_modes(F)
    if len(sample_vectors) != len(modes):
        raise DimMismatch(f"expected {len(modes)} vector families, got {len(sample_vectors)}")
    for fam, n in zip(sample_vectors, modes):
        if len(fam) != c + 1:
            raise DimMismatch(f"level {c} needs {c + 1} vectors per mode, got {len(fam)}")
        for v in fam:
            if len(v) != n:
                raise DimMismatch(f"vector of length {len(v)} in a space of dimension {n}")
    tuples = level_tuples(F.kind, c, F.d)
    if F.kind == "general":
        rows = [evaluate(F, [sample_vectors[k][t[k]] for k in range(F.d)]) for t in tuples]
    else:
        fam = sample_vectors[0]
        rows = [evaluate(F, [fam[i] for i in t]) for t in tuples]
    mat = FqMatrix.from_rows(F.ctx, rows, F.codim) if rows else FqMatrix(F.ctx, 0, F.codim, ())
    vecs = tuple(tuple(tuple(int(x) for x in v) for v in fam) for fam in sample_vectors)
    return WitnessMatrix(c, tuple(tuples), mat, vecs)


def recheck_witness(F: MultiMap, w: WitnessMatrix) -> bool:
    """Independent recheck: recompute the matrix, require full row rank and
    linearly independent vectors in every mode."""
    again = witness_matrix(F, w.sample_vectors, w.c)
    if again.matrix != w.matrix or not again.full_rank:
        return False
    for fam, n in zip(w.sample_vectors, _family_modes(F)):
        if rank_rows(F.ctx, fam, n) != len(fam):
            return False
    return True


def trial_rng(seed: int, c: int, trial: int) -> np.random.Generator:
    """Per-trial stream derived from the root seed, the level and the trial index."""
    return np.random.default_rng(np.random.SeedSequence([seed & (2**64 - 1), c, trial]))


def _sample(F: MultiMap, c: int, rng: np.random.Generator):
    return [[F.ctx.sample_vector(rng, n) for _ in range(c + 1)] for n in _family_modes(F)]


def _trial(F: MultiMap, c: int, seed: int, i: int) -> WitnessMatrix | None:
    w = witness_matrix(F, _sample(F, c, trial_rng(seed, c, i)), c)
    if not w.full_rank:
        return None
    for fam, n in zip(w.sample_vectors, _family_modes(F)):
        if rank_rows(F.ctx, fam, n) != len(fam):
            return None
    return w


def test_level(F: MultiMap, c: int, k: int, seed: int = 0, threads: int = 1) -> WitnessMatrix | None:
    """Up to k independent trials at level c; the lowest-index full-rank one wins."""
    if k < 1:
        raise InputError("k must be at least 1")
    if F.is_zero or len(level_tuples(F.kind, c, F.d)) > F.codim or c + 1 > min(F.dims):
        return None
    if threads == 1:
        for i in range(k):
            w = _trial(F, c, seed, i)
            if w is not None:
                return w
        return None
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for start in range(0, k, threads):
            batch = range(start, min(k, start + threads))
            results = list(pool.map(lambda i: _trial(F, c, seed, i), batch))
            for w in results:
                if w is not None:
                    return w
    return None


# keep pytest from collecting the level test as a test function
test_level.__test__ = False


def level_cap(F: MultiMap) -> int:
    """Largest s the dimension count allows: s <= min dims and |tuples(s)| <= codim."""
    n = min(F.dims) if F.dims else 0
    s = 0
    while s < n and len(level_tuples(F.kind, s, F.d)) <= F.codim:
        s += 1
    return s


def guard_size(F: MultiMap) -> int:
    """N in the q > 2dN hypothesis: total dimension of the sampled space plus codim."""
    if F.kind == "general":
        return sum(F.dims) + F.codim
    return F.d * F.dims[0] + F.codim


def samples_per_level(m: int, epsilon: float) -> int:
    return max(1, math.ceil(math.log2(max(m, 1) / epsilon)))


def beta_randomized(F: MultiMap, cfg: RandConfig | None = None) -> IndexReport:
    """Randomized beta (beta_Lambda / beta_S per kind) with witness.

    The result never exceeds the true index.  When q > 2dN it equals the
    true index with probability at least 1 - epsilon; otherwise the report
    carries the flag ``q-guard-failed``.
    """
    cfg = cfg or RandConfig()
    N = guard_size(F)
    q_ok = F.ctx.q > 2 * F.d * N
    m = level_cap(F)
    if cfg.max_level is not None:
        m = min(m, cfg.max_level)
    k = cfg.samples_override or samples_per_level(m, cfg.epsilon)
    flags = [] if q_ok else ["q-guard-failed"]
    if F.kind == "alternating" and F.dims[0] < F.d:
        flags.append("vacuous: no strictly increasing tuple exists")
    stats = {"k_per_level": k, "q_guard_ok": q_ok, "seed": cfg.seed, "cap": m, "guard_n": N}
    if F.is_zero:
        return IndexReport("beta", F.kind, 0, "randomized", None, cfg.epsilon,
                           flags + ["zero-map convention: beta = 0"], stats)
    best, witness = 0, None
    for c in range(m):
        w = test_level(F, c, k, cfg.seed, cfg.threads)
        if w is None:
            break
        best, witness = c + 1, w
    wjson = [[list(v) for v in fam] for fam in witness.sample_vectors] if witness else None
    return IndexReport("beta", F.kind, best, "randomized", wjson, cfg.epsilon, flags, stats)


def rand_report_json(rep: IndexReport) -> dict:
    """Flat randomized-beta report."""
    return {
        "beta": rep.value,
        "kind": rep.kind,
        "epsilon": rep.epsilon,
        "k_per_level": rep.stats["k_per_level"],
        "q_guard_ok": rep.stats["q_guard_ok"],
        "witness": {"vectors": rep.witness} if rep.witness is not None else None,
        "seed": rep.stats["seed"],
        "flags": list(rep.flags),
    }
