"""Exhaustive desk-scale computation of isotropy/completeness indices and ranks.

Subspaces are enumerated through their reduced row echelon bases, so every
subspace is produced exactly once.  Rows are built from the largest pivot
down: a row with pivot ``c`` has zeros left of ``c`` and at every pivot
already chosen, and free entries elsewhere to its right.  Searches add rows
round-robin across modes and prune as soon as a partial basis tuple can no
longer be extended, which keeps the exhaustive (negative) levels tractable.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, product
from typing import Callable, Iterator, Sequence

from .errors import BudgetExceeded
from .fqlinalg import EchelonBasis, kernel_basis, FqMatrix, rank_rows, solve
from .mlmap import MultiMap, contract_to_matrix, evaluate
from .results import IndexReport

_SCRAMBLE = 0x9E3779B97F4A7C15


@dataclass(frozen=True)
class BudgetGuard:
    max_candidates: int = 10**7

    def __post_init__(self):
        if self.max_candidates <= 0:
            raise ValueError("max_candidates must be positive")


class _Counter:
    def __init__(self, guard: BudgetGuard, level: int, what: str):
        self.cap = guard.max_candidates
        self.level = level
        self.what = what
        self.n = 0

    def tick(self) -> None:
        self.n += 1
        if self.n > self.cap:
            raise BudgetExceeded(
                f"{self.what}: more than {self.cap} candidates at level {self.level}", self.level)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _scrambled_digits(q: int, f: int) -> Iterator[tuple[int, ...]]:
    # every tuple in GF(q)^f exactly once, in a dense-first affine order
    total = q**f
    if total == 1:
        yield ()
        return
    a = _SCRAMBLE % total
    while math.gcd(a, total) != 1:
        a += 1
    b = total // 3
    for k in range(total):
        idx = (k * a + b) % total
        digits = []
        for _ in range(f):
            idx, r = divmod(idx, q)
            digits.append(r)
        yield tuple(digits)


def _next_rows(q: int, n: int, pivots: Sequence[int], remaining: int):
    upper = min(pivots) if pivots else n
    taken = set(pivots)
    for piv in range(remaining, upper):
        free = [c for c in range(piv + 1, n) if c not in taken]
        for vals in _scrambled_digits(q, len(free)):
            row = [0] * n
            row[piv] = 1
            for c, v in zip(free, vals):
                row[c] = v
            yield piv, row


def _search(q: int, dims: Sequence[int], s: int,
            on_add: Callable[[int, list[int], list[list[list[int]]]], object],
            on_remove: Callable[[object], None], counter: _Counter):
    """Depth-first search for s-dimensional subspaces U_k of GF(q)^dims[k].

    ``on_add(mode, row, rows)`` returns an undo token, or ``None`` to prune.
    Returns the per-mode bases of the first accepted tuple, or None.
    """
    M = len(dims)
    rows: list[list[list[int]]] = [[] for _ in range(M)]
    pivots: list[list[int]] = [[] for _ in range(M)]
    if any(s > n for n in dims):
        return None

    def rec() -> bool:
        if all(len(r) == s for r in rows):
            return True
        m = min(range(M), key=lambda k: len(rows[k]))
        remaining = s - len(rows[m]) - 1
        for piv, row in _next_rows(q, dims[m], pivots[m], remaining):
            counter.tick()
            token = on_add(m, row, rows)
            if token is None:
                continue
            rows[m].append(row)
            pivots[m].append(piv)
            if rec():
                return True
            rows[m].pop()
            pivots[m].pop()
            on_remove(token)
        return False

    if s == 0 or M == 0:
        return [[] for _ in range(M)]
    return [list(r) for r in rows] if rec() else None


def _new_tuples_general(m: int, rows: Sequence[Sequence[list[int]]], new_row: list[int]):
    choices = [[new_row] if k == m else list(rows[k]) for k in range(len(rows))]
    return product(*choices)


def _new_tuples_single(kind: str, basis: Sequence[list[int]], new_row: list[int], d: int):
    k = len(basis)
    pool = list(basis) + [new_row]
    head = combinations(range(k), d - 1) if kind == "alternating" else \
        combinations_with_replacement(range(k + 1), d - 1)
    for t in head:
        yield [pool[i] for i in t] + [new_row]


# -- caps ----------------------------------------------------------------------

def _family_size(kind: str, s: int, d: int) -> int:
    if kind == "general":
        return s**d
    if kind == "alternating":
        return math.comb(s, d)
    return math.comb(s + d - 1, d)


def _space_dim(F: MultiMap) -> int:
    """Dimension of the tensor space the store spans: prod dims, C(n,d) or C(n+d-1,d)."""
    return len(F.tuples)


def beta_cap(F: MultiMap) -> int:
    """Largest s allowed by dim counting: family(s) <= dim span of the image."""
    r = F.image_rank()
    n = min(F.dims) if F.dims else 0
    s = 0
    while s < n and _family_size(F.kind, s + 1, F.d) <= r:
        s += 1
    return s


def alpha_cap(F: MultiMap) -> int:
    ker = _space_dim(F) - F.image_rank()
    n = min(F.dims) if F.dims else 0
    s = 0
    while s < n and _family_size(F.kind, s + 1, F.d) <= ker:
        s += 1
    return s


def _standard_witness(F: MultiMap, s: int) -> list[list[list[int]]]:
    def basis(n):
        return [[int(i == k) for i in range(n)] for k in range(s)]
    if F.kind == "general":
        return [basis(n) for n in F.dims]
    return [basis(F.dims[0])]


# -- isotropy index ------------------------------------------------------------

def _alpha_level(F: MultiMap, s: int, guard: BudgetGuard):
    ctx, d = F.ctx, F.d
    counter = _Counter(guard, s, "alpha_brute")
    if F.kind != "general":
        def on_add(m, row, rows):
            for args in _new_tuples_single(F.kind, rows[0], row, d):
                if any(evaluate(F, args)):
                    return None
            return 0
        found = _search(ctx.q, [F.dims[0]], s, on_add, lambda t: None, counter)
        return found, counter.n

    nd = F.dims[-1]
    cons = EchelonBasis(ctx, nd)
    if d == 1:
        for row in F.store_rows():
            cons.add(row)
        if nd - cons.rank < s:
            return None, 0
        kern = kernel_basis(FqMatrix.from_rows(ctx, cons.vectors() or [[0] * nd], nd))
        return [kern[:s]], 0

    def on_add(m, row, rows):
        mark = cons.mark()
        for args in _new_tuples_general(m, rows, row):
            for r in contract_to_matrix(F, list(args) + [None]):
                cons.add(r)
            if nd - cons.rank < s:
                cons.undo(mark)
                return None
        return mark

    found = _search(ctx.q, F.dims[:-1], s, on_add, cons.undo, counter)
    if found is None:
        return None, counter.n
    mats = cons.vectors() or [[0] * nd]
    kern = kernel_basis(FqMatrix.from_rows(ctx, mats, nd))
    return found + [kern[:s]], counter.n


def alpha_brute(F: MultiMap, guard: BudgetGuard | None = None) -> IndexReport:
    """Exact alpha (alpha_Lambda / alpha_S per kind) with a witness at the maximum."""
    guard = guard or BudgetGuard()
    n = min(F.dims) if F.dims else 0
    if F.is_zero:
        return IndexReport("alpha", F.kind, n, "brute", _standard_witness(F, n),
                           flags=["zero-map convention: alpha = min dims"])
    cap = alpha_cap(F)
    best, witness, visited = 0, _standard_witness(F, 0), 0
    for s in range(1, cap + 1):
        found, used = _alpha_level(F, s, guard)
        visited += used
        if found is None:
            break
        best, witness = s, found
    return IndexReport("alpha", F.kind, best, "brute", witness,
                       stats={"cap": cap, "candidates": visited})


# -- completeness index --------------------------------------------------------

def _beta_level(F: MultiMap, s: int, guard: BudgetGuard):
    ctx, d = F.ctx, F.d
    counter = _Counter(guard, s, "beta_brute")
    images = EchelonBasis(ctx, F.codim)

    if F.kind == "general":
        def on_add(m, row, rows):
            mark = images.mark()
            for args in _new_tuples_general(m, rows, row):
                if not images.add(evaluate(F, args)):
                    images.undo(mark)
                    return None
            return mark
        found = _search(ctx.q, F.dims, s, on_add, images.undo, counter)
    else:
        def on_add(m, row, rows):
            mark = images.mark()
            for args in _new_tuples_single(F.kind, rows[0], row, d):
                if not images.add(evaluate(F, args)):
                    images.undo(mark)
                    return None
            return mark
        found = _search(ctx.q, [F.dims[0]], s, on_add, images.undo, counter)
    return found, counter.n


def beta_brute(F: MultiMap, guard: BudgetGuard | None = None) -> IndexReport:
    """Exact beta (beta_Lambda / beta_S per kind), searching down from the dimension cap."""
    guard = guard or BudgetGuard()
    if F.is_zero:
        return IndexReport("beta", F.kind, 0, "brute", None,
                           flags=["zero-map convention: beta = 0"])
    cap = beta_cap(F)
    visited = 0
    for s in range(cap, 0, -1):
        found, used = _beta_level(F, s, guard)
        visited += used
        if found is not None:
            return IndexReport("beta", F.kind, s, "brute", found,
                               stats={"cap": cap, "candidates": visited})
    return IndexReport("beta", F.kind, 0, "brute", None, stats={"cap": cap, "candidates": visited})


def is_complete_tuple(F: MultiMap, bases: Sequence[Sequence[Sequence[int]]]) -> bool:
    """Whether the given bases span a complete subspace (tuple) of F."""
    ctx = F.ctx
    if F.kind == "general":
        tuples = product(*bases)
        dims = F.dims
        if any(len(b) != len(bases[0]) for b in bases):
            return False
    else:
        B = list(bases[0])
        dims = [F.dims[0]]
        fam = combinations if F.kind == "alternating" else combinations_with_replacement
        tuples = ([B[i] for i in t] for t in fam(range(len(B)), F.d))
    for b, n in zip(bases, dims):
        if b and rank_rows(ctx, b, n) != len(b):
            return False
    rows = [evaluate(F, list(args)) for args in tuples]
    return not rows or rank_rows(ctx, rows, F.codim) == len(rows)


def is_isotropic_tuple(F: MultiMap, bases: Sequence[Sequence[Sequence[int]]]) -> bool:
    if F.kind == "general":
        tuples = product(*bases)
    else:
        tuples = product(*([bases[0]] * F.d))
    return all(not any(evaluate(F, list(args))) for args in tuples)


# -- analytic rank -------------------------------------------------------------

@dataclass(frozen=True)
class ARValue:
    """AR = total_dim - log_q(zero_count), kept exact."""

    total_dim: int
    zero_count: int
    q: int

    @property
    def value(self) -> float:
        k = round(math.log(self.zero_count) / math.log(self.q))
        if self.q**k == self.zero_count:
            return float(self.total_dim - k)
        return self.total_dim - math.log(self.zero_count) / math.log(self.q)

    def less_than(self, bound: int) -> bool:
        """Exact test AR < bound for integer bound."""
        # total - log_q(z) < bound  <=>  q^total < z * q^bound
        if bound < 0:
            return False
        return self.q**self.total_dim < self.zero_count * self.q**bound

    def to_json(self) -> dict:
        return {"total_dim": self.total_dim, "zero_count": self.zero_count, "q": self.q,
                "value": self.value}


def _all_vectors(q: int, n: int):
    return product(range(q), repeat=n)


def analytic_rank_exact(F: MultiMap, guard: BudgetGuard | None = None) -> ARValue:
    """Exact count of d-tuples with F(v_1, ..., v_d) = 0.

    The last mode is counted through kernel dimensions, so the enumeration
    runs over q^(n_1 + ... + n_{d-1}) prefixes.
    """
    guard = guard or BudgetGuard()
    ctx, q, d = F.ctx, F.ctx.q, F.d
    total = sum(F.dims)
    prefixes = q ** sum(F.dims[:-1])
    if prefixes > guard.max_candidates:
        raise BudgetExceeded(f"analytic_rank_exact: {prefixes} prefixes exceed the guard")
    nd = F.dims[-1] if d else 0
    if d == 0:
        return ARValue(0, 1 if F.is_zero else 0, q)
    if d == 1:
        r = rank_rows(ctx, F.store_rows(), nd) if F.codim else 0
        return ARValue(total, q ** (nd - r), q)
    count = 0
    for flat in _all_vectors(q, sum(F.dims[:-1])):
        vecs, pos = [], 0
        for n in F.dims[:-1]:
            vecs.append(flat[pos:pos + n])
            pos += n
        if any(not any(v) for v in vecs):
            count += q**nd
            continue
        mat = contract_to_matrix(F, vecs + [None])
        r = rank_rows(ctx, mat, nd) if mat else 0
        count += q ** (nd - r)
    return ARValue(total, count, q)


# -- subrank -------------------------------------------------------------------

@dataclass(frozen=True)
class SubrankWitness:
    """Maps with (A_1, ..., A_d, B) . T_F = I_r; row a of A_k is a vector in V_k."""

    r: int
    mode_maps: tuple[tuple[tuple[int, ...], ...], ...]
    codomain_map: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {"r": self.r, "mode_maps": [list(map(list, A)) for A in self.mode_maps],
                "codomain_map": [list(b) for b in self.codomain_map]}


def restriction_tensor(F: MultiMap, mode_maps, codomain_map) -> dict:
    """Nonzero coefficients of (A_1, ..., A_d, B) . T_F keyed by (a_1..a_d, b)."""
    ctx = F.ctx
    r = len(codomain_map)
    out: dict = {}
    for a in product(range(r), repeat=F.d):
        for b in range(r):
            acc = 0
            for j, idx, c in F.entries:
                term = ctx.mul(c, codomain_map[b][j])
                for k, i in enumerate(idx):
                    term = ctx.mul(term, mode_maps[k][a[k]][i])
                acc = ctx.add(acc, term)
            if acc:
                out[a + (b,)] = acc
    return out


def subrank_brute(F: MultiMap, r: int, guard: BudgetGuard | None = None) -> SubrankWitness | None:
    """Witness that I_r is a restriction of T_F, or None if none exists.

    Mode maps are enumerated; for each choice the codomain map exists iff
    every diagonal image lies outside the span of the off-diagonal images,
    and it is then obtained by a linear solve.
    """
    guard = guard or BudgetGuard()
    ctx, q, d = F.ctx, F.ctx.q, F.d
    if r == 0:
        return SubrankWitness(0, tuple(() for _ in range(d)), ())
    if r > min(list(F.dims) + [F.codim]):
        return None
    size = q ** (r * sum(F.dims))
    if size > guard.max_candidates:
        raise BudgetExceeded(f"subrank_brute: {size} candidate mode maps exceed the guard", r)
    G = F.to_general()
    tuples = list(product(range(r), repeat=d))
    diag = [tuple([b] * d) for b in range(r)]
    vec_space = [list(_all_vectors(q, n)) for n in F.dims]
    slots = [vec_space[k] for k in range(d) for _ in range(r)]
    for choice in product(*slots):
        maps = [choice[k * r:(k + 1) * r] for k in range(d)]
        images = {a: evaluate(G, [maps[k][a[k]] for k in range(d)]) for a in tuples}
        if any(not any(images[t]) for t in diag):
            continue
        ok = True
        for t in diag:
            others = EchelonBasis(ctx, F.codim)
            for a in tuples:
                if a != t:
                    others.add(images[a])
            if others.contains(images[t]):
                ok = False
                break
        if not ok:
            continue
        Y = [images[a] for a in tuples]
        B = []
        for t in diag:
            rhs = [int(a == t) for a in tuples]
            x = solve(ctx, Y, rhs, F.codim)
            B.append(tuple(x))
        return SubrankWitness(r, tuple(tuple(tuple(v) for v in m) for m in maps), tuple(B))
    return None


def subrank_exact(F: MultiMap, guard: BudgetGuard | None = None):
    """Largest r with a restriction witness, and that witness."""
    best, witness = 0, subrank_brute(F, 0, guard)
    cap = min(list(F.dims) + [F.codim])
    for r in range(1, cap + 1):
        w = subrank_brute(F, r, guard)
        if w is None:
            break
        best, witness = r, w
    return best, witness


# -- partition rank one --------------------------------------------------------

class ZeroTensorWarning(UserWarning):
    pass


@dataclass(frozen=True)
class PROneResult:
    """T_F = u (x) v across the bipartition ``(left_modes, right_modes)``.

    Modes 0..d-1 are the domain modes and mode d is the codomain; ``u`` and
    ``v`` are flattened row-major over their mode groups.
    """

    left_modes: tuple[int, ...]
    right_modes: tuple[int, ...]
    u: tuple[int, ...]
    v: tuple[int, ...]


def tensor_shape(F: MultiMap) -> tuple[int, ...]:
    return tuple(F.dims) + (F.codim,)


def _flat_index(idx: Sequence[int], shape: Sequence[int]) -> int:
    k = 0
    for i, n in zip(idx, shape):
        k = k * n + i
    return k


def pr_one_test(F: MultiMap) -> PROneResult | None:
    """First bipartition of the d+1 modes across which T_F has rank one."""
    if F.is_zero:
        warnings.warn("zero tensor has no rank-one factorisation", ZeroTensorWarning, stacklevel=2)
        return None
    ctx = F.ctx
    shape = tensor_shape(F)
    k = len(shape)
    coeff = {tuple(idx) + (j,): c for j, idx, c in F.entries}
    for size in range(1, k):
        for left in combinations(range(k), size):
            if 0 not in left:
                continue
            right = tuple(m for m in range(k) if m not in left)
            lshape = [shape[m] for m in left]
            rshape = [shape[m] for m in right]
            nrows, ncols = math.prod(lshape), math.prod(rshape)
            mat = [[0] * ncols for _ in range(nrows)]
            for idx, c in coeff.items():
                mat[_flat_index([idx[m] for m in left], lshape)][_flat_index([idx[m] for m in right], rshape)] = c
            if rank_rows(ctx, mat, ncols) != 1:
                continue
            r0 = next(i for i, row in enumerate(mat) if any(row))
            v = mat[r0]
            c0 = next(j for j, x in enumerate(v) if x)
            inv = ctx.inv(v[c0])
            u = [ctx.mul(mat[i][c0], inv) for i in range(nrows)]
            return PROneResult(left, right, tuple(u), tuple(v))
    return None
