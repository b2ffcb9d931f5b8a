"""Multilinear maps F: V_1 x ... x V_d -> W and their coefficient stores.

A general map stores the full hypercube of coefficients ``c[j; i_1..i_d]``
with the codomain index ``j`` slowest and the last mode fastest.  An
alternating map stores one coefficient per strictly increasing tuple
``i_1 < ... < i_d`` and a symmetric map one per non-decreasing tuple, both
in lexicographic order and again grouped by codomain index.  The hypercube
entry of an alternating map at a permutation of a stored tuple carries the
permutation's sign; entries with a repeated index vanish.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, combinations_with_replacement, permutations, product
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    ArityMismatch,
    DependentBasis,
    DimMismatch,
    InputError,
    InvalidMap,
    KindMismatch,
    NotHomogeneous,
    SmallCharacteristic,
)
from .fqlinalg import rank_rows
from .gf import FieldCtx, field_from_json

KINDS = ("general", "alternating", "symmetric")
FORMAT = "mlmap/1"

Vector = Sequence[int]


def tuple_family(kind: str, dims: Sequence[int]) -> list[tuple[int, ...]]:
    """Index tuples carrying stored coefficients, in storage order."""
    d = len(dims)
    if kind == "general":
        return list(product(*(range(n) for n in dims)))
    n = dims[0] if dims else 0
    if kind == "alternating":
        return list(combinations(range(n), d))
    if kind == "symmetric":
        return list(combinations_with_replacement(range(n), d))
    raise InputError(f"unknown kind {kind!r}")


def store_size(kind: str, dims: Sequence[int], codim: int) -> int:
    d = len(dims)
    if kind == "general":
        return codim * math.prod(dims)
    n = dims[0] if dims else 0
    if kind == "alternating":
        return codim * math.comb(n, d)
    return codim * math.comb(n + d - 1, d)


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class MultiMap:
    """A d-multilinear map over ``ctx``; see the module docstring for layout.

    Instances are not validated on construction so that corrupted stores can
    be inspected with :func:`validate`; use :func:`make_map` to build checked
    instances.
    """

    ctx: FieldCtx
    d: int
    dims: tuple[int, ...]
    codim: int
    kind: str
    coeffs: tuple[int, ...]

    @cached_property
    def tuples(self) -> list[tuple[int, ...]]:
        return tuple_family(self.kind, self.dims)

    @cached_property
    def entries(self) -> list[tuple[int, tuple[int, ...], int]]:
        """Nonzero hypercube entries as ``(j, (i_1..i_d), c)``."""
        ctx = self.ctx
        out = []
        T = len(self.tuples)
        perms = list(permutations(range(self.d)))
        signs = [_perm_sign(pm) for pm in perms]
        for j in range(self.codim):
            base = j * T
            for t_index, t in enumerate(self.tuples):
                c = self.coeffs[base + t_index]
                if not c:
                    continue
                if self.kind == "general":
                    out.append((j, t, c))
                elif self.kind == "alternating":
                    neg = ctx.neg(c)
                    for pm, sg in zip(perms, signs):
                        out.append((j, tuple(t[k] for k in pm), c if sg > 0 else neg))
                else:
                    for idx in sorted(set(permutations(t))):
                        out.append((j, idx, c))
        return out

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def store_rows(self) -> list[list[int]]:
        """Coefficient store as a codim x |tuples| matrix."""
        T = len(self.tuples)
        return [list(self.coeffs[j * T:(j + 1) * T]) for j in range(self.codim)]

    def image_rank(self) -> int:
        """dim span F(V_1 x ... x V_d), the rank of the store matrix."""
        if not self.tuples or not self.codim:
            return 0
        return rank_rows(self.ctx, self.store_rows(), len(self.tuples))

    def evaluate(self, *args: Vector) -> list[int]:
        return evaluate(self, args)

    def to_general(self) -> "MultiMap":
        if self.kind == "general":
            return self
        return _from_entries(self.ctx, self.dims, self.codim, "general",
                             {(j, idx): c for j, idx, c in self.entries})


def _from_entries(ctx: FieldCtx, dims: Sequence[int], codim: int, kind: str,
                  values: Mapping[tuple[int, tuple[int, ...]], int]) -> MultiMap:
    dims = tuple(dims)
    tuples = tuple_family(kind, dims)
    coeffs = []
    for j in range(codim):
        for t in tuples:
            coeffs.append(values.get((j, t), 0))
    return MultiMap(ctx, len(dims), dims, codim, kind, tuple(coeffs))


def make_map(ctx: FieldCtx, dims: Sequence[int], codim: int, kind: str = "general",
             coeffs: Iterable[int] | None = None) -> MultiMap:
    """Build and validate a map; ``coeffs=None`` gives the zero map."""
    dims = tuple(int(n) for n in dims)
    if coeffs is None:
        coeffs = [0] * store_size(kind, dims, codim)
    F = MultiMap(ctx, len(dims), dims, int(codim), kind, tuple(coeffs))
    errors = [v for v in validate(F, check_alternation=False) if not v.startswith("note:")]
    if errors:
        raise InvalidMap(errors)
    return F


def zero_map(ctx: FieldCtx, dims: Sequence[int], codim: int, kind: str = "general") -> MultiMap:
    return make_map(ctx, dims, codim, kind)


def from_tuple_values(ctx: FieldCtx, dims: Sequence[int], codim: int, kind: str,
                      fn) -> MultiMap:
    """Map whose stored coefficient vector at tuple t is ``fn(t)`` (length codim)."""
    dims = tuple(dims)
    tuples = tuple_family(kind, dims)
    cols = [fn(t) for t in tuples]
    coeffs = [cols[ti][j] for j in range(codim) for ti in range(len(tuples))]
    return MultiMap(ctx, len(dims), dims, codim, kind, tuple(coeffs))


# -- evaluation ----------------------------------------------------------------

def _check_args(F: MultiMap, args: Sequence[Vector]) -> None:
    if len(args) != F.d:
        raise DimMismatch(f"expected {F.d} arguments, got {len(args)}")
    for k, (a, n) in enumerate(zip(args, F.dims)):
        if len(a) != n:
            raise DimMismatch(f"argument {k} has length {len(a)}, expected {n}")


def evaluate(F: MultiMap, args: Sequence[Vector]) -> list[int]:
    """(F_1(args), ..., F_n(args))."""
    _check_args(F, args)
    ctx = F.ctx
    if ctx.l == 1:
        acc = [0] * F.codim
        for j, idx, c in F.entries:
            term = c
            for k, i in enumerate(idx):
                x = args[k][i]
                if not x:
                    break
                term *= x
            else:
                acc[j] += term
        p = ctx.p
        return [a % p for a in acc]
    acc = [0] * F.codim
    for j, idx, c in F.entries:
        term = c
        for k, i in enumerate(idx):
            x = args[k][i]
            if not x:
                break
            term = ctx.mul(term, x)
        else:
            acc[j] = ctx.add(acc[j], term)
    return acc


def contract_to_matrix(F: MultiMap, vecs: Sequence[Vector | None]) -> list[list[int]]:
    """Contract every mode except one (marked ``None``) against the given vectors.

    Returns the codim x n_free matrix of the remaining linear map.
    """
    free = [k for k, v in enumerate(vecs) if v is None]
    if len(free) != 1 or len(vecs) != F.d:
        raise DimMismatch("exactly one mode must be left free")
    fm = free[0]
    ctx = F.ctx
    out = [[0] * F.dims[fm] for _ in range(F.codim)]
    prime = ctx.l == 1
    for j, idx, c in F.entries:
        term = c
        for k, i in enumerate(idx):
            if k == fm:
                continue
            x = vecs[k][i]
            if not x:
                break
            term = term * x if prime else ctx.mul(term, x)
        else:
            col = idx[fm]
            out[j][col] = out[j][col] + term if prime else ctx.add(out[j][col], term)
    if prime:
        p = ctx.p
        out = [[x % p for x in row] for row in out]
    return out


# -- subspaces and restriction -------------------------------------------------

@dataclass(frozen=True)
class SubspaceBasis:
    ctx: FieldCtx
    ambient_dim: int
    vectors: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.vectors)


def subspace(ctx: FieldCtx, vectors: Iterable[Vector], ambient_dim: int | None = None) -> SubspaceBasis:
    vecs = tuple(tuple(v) for v in vectors)
    if ambient_dim is None:
        if not vecs:
            raise DimMismatch("ambient dimension needed for an empty basis")
        ambient_dim = len(vecs[0])
    for v in vecs:
        if len(v) != ambient_dim:
            raise DimMismatch(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
    if vecs and rank_rows(ctx, vecs, ambient_dim) != len(vecs):
        raise DependentBasis("basis vectors are linearly dependent")
    return SubspaceBasis(ctx, ambient_dim, vecs)


def standard_basis(ctx: FieldCtx, n: int) -> SubspaceBasis:
    return SubspaceBasis(ctx, n, tuple(tuple(int(i == k) for i in range(n)) for k in range(n)))


def restrict(F: MultiMap, bases: Sequence[SubspaceBasis]) -> MultiMap:
    """F restricted to U_1 x ... x U_d, in the coordinates of the given bases."""
    if len(bases) != F.d:
        raise DimMismatch(f"expected {F.d} bases, got {len(bases)}")
    for B, n in zip(bases, F.dims):
        if B.ambient_dim != n:
            raise DimMismatch(f"basis in dimension {B.ambient_dim}, mode has dimension {n}")
        if B.vectors and rank_rows(F.ctx, B.vectors, n) != B.dim:
            raise DependentBasis("restriction basis is linearly dependent")
    if F.kind != "general" and any(B.vectors != bases[0].vectors for B in bases):
        raise DimMismatch(f"{F.kind} maps restrict along a single subspace")
    new_dims = tuple(B.dim for B in bases)
    return from_tuple_values(
        F.ctx, new_dims, F.codim, F.kind,
        lambda t: evaluate(F, [bases[k].vectors[i] for k, i in enumerate(t)]),
    )


def direct_sum(F: MultiMap, G: MultiMap) -> MultiMap:
    """F (+) G on (V_1 + V_1') x ... -> W + W', block diagonal."""
    if F.ctx != G.ctx:
        raise InputError("maps live over different fields")
    if F.d != G.d:
        raise ArityMismatch(f"arity {F.d} vs {G.d}")
    if F.kind != G.kind:
        raise KindMismatch(f"{F.kind} vs {G.kind}")
    values = {(j, idx): c for j, idx, c in F.entries}
    for j, idx, c in G.entries:
        values[(j + F.codim, tuple(i + off for i, off in zip(idx, F.dims)))] = c
    dims = tuple(a + b for a, b in zip(F.dims, G.dims))
    return _from_entries(F.ctx, dims, F.codim + G.codim, F.kind, values)


# -- polarization --------------------------------------------------------------

Poly = Mapping[tuple[int, ...], int]


def _multinomial_count(exps: Sequence[int]) -> int:
    total = math.factorial(sum(exps))
    for e in exps:
        total //= math.factorial(e)
    return total


def _tuple_exponents(t: Sequence[int], m: int) -> tuple[int, ...]:
    exps = [0] * m
    for i in t:
        exps[i] += 1
    return tuple(exps)


def polarize(polys: Sequence[Poly], num_vars: int, ctx: FieldCtx) -> MultiMap:
    """Symmetric map with F_j(x, ..., x) = polys[j](x).

    Each polynomial maps exponent tuples (length ``num_vars``) to prime
    subfield coefficients.  Requires char > d.
    """
    degrees = {sum(e) for P in polys for e, c in P.items() if c % ctx.p}
    for P in polys:
        for e in P:
            if len(e) != num_vars:
                raise InputError(f"monomial {e} has {len(e)} exponents, expected {num_vars}")
    if len(degrees) > 1:
        raise NotHomogeneous(f"monomials of degrees {sorted(degrees)}")
    d = degrees.pop() if degrees else 0
    if d == 0:
        raise NotHomogeneous("generators must have positive degree")
    if ctx.p <= d:
        raise SmallCharacteristic(f"polarization needs char > {d}, got {ctx.p}")

    def column(t):
        e = _tuple_exponents(t, num_vars)
        weight = ctx.inv(_multinomial_count(e) % ctx.p)
        return [ctx.mul(P.get(e, 0) % ctx.p, weight) for P in polys]

    return from_tuple_values(ctx, (num_vars,) * d, len(polys), "symmetric", column)


def diagonal_poly(F: MultiMap, j: int) -> dict[tuple[int, ...], int]:
    """The form x -> F_j(x, ..., x) as exponent tuple -> coefficient."""
    if len(set(F.dims)) > 1:
        raise DimMismatch("diagonal evaluation needs equal mode dimensions")
    ctx = F.ctx
    m = F.dims[0] if F.dims else 0
    out: dict[tuple[int, ...], int] = {}
    for jj, idx, c in F.entries:
        if jj != j:
            continue
        e = _tuple_exponents(idx, m)
        out[e] = ctx.add(out.get(e, 0), c)
    return {e: c for e, c in out.items() if c}


# -- validation and serialization ---------------------------------------------

def validate(F: MultiMap, check_alternation: bool = True, rng_seed: int = 0) -> list[str]:
    """Structural invariant violations of F (empty when valid).  Never raises.

    Lines starting with ``note:`` are informational, not violations.
    """
    out: list[str] = []
    if F.kind not in KINDS:
        return [f"UnknownKind: {F.kind!r}"]
    if F.d != len(F.dims):
        out.append(f"ArityMismatch: d={F.d} but {len(F.dims)} dims")
    if any(n < 0 for n in F.dims) or F.codim < 0:
        out.append("NegativeDimension")
        return out
    if F.kind != "general" and len(set(F.dims)) > 1:
        out.append(f"UnequalDims: {F.kind} maps need n_1 = ... = n_d, got {list(F.dims)}")
        return out
    expected = store_size(F.kind, F.dims, F.codim)
    if len(F.coeffs) != expected:
        out.append(f"CountMismatch: {len(F.coeffs)} coefficients, expected {expected}")
        return out
    q = F.ctx.q
    if any(not isinstance(c, int) or not 0 <= c < q for c in F.coeffs):
        out.append(f"UnreducedCoefficient: entries must lie in [0, {q})")
        return out
    if F.kind == "alternating" and F.dims and F.d > F.dims[0]:
        out.append(f"note: no strictly increasing tuple exists (d={F.d} > n={F.dims[0]}); "
                   "the map is identically zero")
    if check_alternation and F.kind == "alternating" and F.d >= 2 and F.dims and F.dims[0]:
        out.extend(_alternation_violations(F, rng_seed))
    return out


def _alternation_violations(F: MultiMap, rng_seed: int) -> list[str]:
    ctx, n, d = F.ctx, F.dims[0], F.d
    if n <= 4 and ctx.q <= 3 and d <= 3:
        vectors = [list(v) for v in product(range(ctx.q), repeat=n)]
        others = [list(v) for v in product(range(ctx.q), repeat=n * (d - 2))] if d > 2 else [[]]
        for a, b in combinations(range(d), 2):
            for v in vectors:
                for rest in others:
                    args = [rest[k * n:(k + 1) * n] for k in range(d - 2)]
                    args.insert(a, v)
                    args.insert(b, v)
                    if any(evaluate(F, args)):
                        return [f"NotAlternating: equal arguments in slots {[a, b]} at v={v}"]
        return []
    rng = np.random.default_rng(rng_seed)
    for _ in range(64):
        v = ctx.sample_vector(rng, n)
        tail = [ctx.sample_vector(rng, n) for _ in range(d - 2)]
        pos = sorted(rng.choice(d, size=2, replace=False).tolist())
        args = tail[:]
        args.insert(pos[0], v)
        args.insert(pos[1], v)
        if any(evaluate(F, args)):
            return [f"NotAlternating: equal arguments in slots {pos} give a nonzero value"]
    return []


def map_to_json(F: MultiMap) -> dict:
    return {
        "format": FORMAT,
        "field": F.ctx.to_json(),
        "kind": F.kind,
        "d": F.d,
        "dims": list(F.dims),
        "codim": F.codim,
        "coeffs": [F.ctx.encode(c) for c in F.coeffs],
    }


def map_from_json(obj: dict) -> MultiMap:
    if obj.get("format") != FORMAT:
        raise InputError(f"expected format {FORMAT!r}, got {obj.get('format')!r}")
    ctx = field_from_json(obj["field"])
    dims = [int(n) for n in obj["dims"]]
    if int(obj["d"]) != len(dims):
        raise DimMismatch(f"d={obj['d']} but {len(dims)} dims")
    coeffs = [ctx.decode(c) for c in obj["coeffs"]]
    return make_map(ctx, dims, int(obj["codim"]), obj["kind"], coeffs)
