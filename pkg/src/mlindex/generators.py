"""Example families of multilinear maps and seeded random instances."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Sequence

import numpy as np

from .errors import CharDividesOrder, EmptyEdgeSet, InputError
from .gf import FieldCtx
from .mlmap import KINDS, MultiMap, _from_entries, make_map, store_size


def gen_identity(r: int, d: int, ctx: FieldCtx) -> MultiMap:
    """I_{r,d}: coordinatewise product of d vectors in K^r."""
    if r < 1 or d < 1:
        raise InputError("r and d must be positive")
    values = {(j, (j,) * d): 1 for j in range(r)}
    return _from_entries(ctx, (r,) * d, r, "general", values)


def gen_matmul(n: int, ctx: FieldCtx) -> MultiMap:
    """M_n: (A, B) -> AB on n x n matrices flattened row-major."""
    if n < 1:
        raise InputError("n must be positive")
    values = {}
    for i, k, j in product(range(n), repeat=3):
        values[(i * n + j, (i * n + k, k * n + j))] = 1
    return _from_entries(ctx, (n * n, n * n), n * n, "general", values)


@dataclass(frozen=True)
class GraphSpec:
    """Simple undirected graph on vertices 0..vertex_count-1."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for e in self.edges:
            i, j = e
            if i == j:
                raise InputError(f"self-loop at vertex {i}")
            if not (0 <= i < self.vertex_count and 0 <= j < self.vertex_count):
                raise InputError(f"edge {e} outside vertex range")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise InputError(f"duplicate edge {key}")
            seen.add(key)

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Sequence[Sequence[int]]) -> "GraphSpec":
        return cls(vertex_count, tuple(sorted((min(a, b), max(a, b)) for a, b in edges)))


def gen_tutte(g: GraphSpec, ctx: FieldCtx) -> MultiMap:
    """Alternating bilinear map with coordinate e = {i<j} equal to u_i v_j - u_j v_i."""
    if not g.edges:
        raise EmptyEdgeSet("the Tutte map needs at least one edge")
    values = {(e, (min(i, j), max(i, j))): 1 for e, (i, j) in enumerate(g.edges)}
    return _from_entries(ctx, (g.vertex_count, g.vertex_count), len(g.edges), "alternating", values)


def gen_group_algebra(cyclic_orders: Sequence[int], ctx: FieldCtx) -> MultiMap:
    """Convolution on K[Z_m1 x ... x Z_mk]; group elements indexed row-major."""
    orders = [int(m) for m in cyclic_orders]
    if any(m < 1 for m in orders):
        raise InputError("cyclic orders must be positive")
    size = math.prod(orders)
    if size % ctx.p == 0:
        raise CharDividesOrder(f"char {ctx.p} divides |G| = {size}")
    elems = list(product(*(range(m) for m in orders)))
    index = {g: k for k, g in enumerate(elems)}
    values = {}
    for a, g in enumerate(elems):
        for b, h in enumerate(elems):
            s = tuple((x + y) % m for x, y, m in zip(g, h, orders))
            values[(index[s], (a, b))] = 1
    return _from_entries(ctx, (size, size), size, "general", values)


def gen_random(dims: Sequence[int], codim: int, kind: str, ctx: FieldCtx,
               rng: np.random.Generator | int) -> MultiMap:
    """Uniformly random coefficient store; deterministic for a given seed."""
    if kind not in KINDS:
        raise InputError(f"unknown kind {kind!r}")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    size = store_size(kind, dims, codim)
    coeffs = [int(x) for x in rng.integers(0, ctx.q, size=size)] if size else []
    return make_map(ctx, dims, codim, kind, coeffs)


# -- graph helpers used by the Tutte cross-check ------------------------------

def independence_number(g: GraphSpec) -> int:
    """Largest independent vertex set, by exhaustive subset search."""
    adj = {(i, j) for i, j in g.edges} | {(j, i) for i, j in g.edges}
    for size in range(g.vertex_count, 0, -1):
        for subset in combinations(range(g.vertex_count), size):
            if all((a, b) not in adj for a, b in combinations(subset, 2)):
                return size
    return 0


def nonisomorphic_graphs(n: int) -> list[GraphSpec]:
    """One representative per isomorphism class of graphs on n vertices."""
    pairs = list(combinations(range(n), 2))
    perms = list(permutations(range(n)))
    seen = set()
    out = []
    for mask in range(1 << len(pairs)):
        edges = [pairs[k] for k in range(len(pairs)) if (mask >> k) & 1]
        canon = min(
            tuple(sorted(tuple(sorted((pm[a], pm[b]))) for a, b in edges)) for pm in perms
        )
        if canon in seen:
            continue
        seen.add(canon)
        out.append(GraphSpec.from_edges(n, canon))
    return out
