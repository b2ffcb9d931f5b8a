"""Closed-form bound calculators and the subrank / geometric-rank bracket."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ExponentOverflow, InfeasibleRange, InputError
from .gf import FieldCtx, field_make
from .mlmap import MultiMap, _from_entries
from .randbeta import RandConfig, beta_randomized

KINDS = ("general", "alternating", "symmetric")


@dataclass
class BracketReport:
    quantity: str
    lower: int
    lower_source: str
    upper: int | None
    upper_source: str
    guards: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return self.upper is None or self.lower <= self.upper

    def to_json(self) -> dict:
        return {
            "quantity": self.quantity,
            "lower": {"value": self.lower, "source": self.lower_source},
            "upper": {"value": self.upper, "source": self.upper_source},
            "guards": list(self.guards),
            "details": dict(self.details),
        }


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def ar_bound(L: int, d: int, q: int) -> int:
    """d + L + ceil(L(d-1)/(q-1)): strict upper bound on analytic rank."""
    return d + L + _ceil_div(L * (d - 1), q - 1)


def completeness_rank_bounds(beta: int, d: int, kind: str = "general", q: int | None = None) -> dict:
    """Strict upper bounds on GR (infinite field) and AR (finite field) from beta.

    For symmetric maps the GR/height bound is C(beta+d, d) with lower bound
    beta; no AR bound is stated for that kind.
    """
    if beta < 0 or d < 1:
        raise InputError("need beta >= 0 and d >= 1")
    if q is not None and q < 2:
        raise InputError("field order must be at least 2")
    out: dict = {"beta": beta, "d": d, "kind": kind, "q": q}
    if kind == "general":
        L = (beta + 1) ** d
    elif kind == "alternating":
        L = math.comb(beta + 1, d)
    elif kind == "symmetric":
        out["gr_upper_strict"] = math.comb(beta + d, d)
        out["height_upper_strict"] = math.comb(beta + d, d)
        out["lower"] = beta
        return out
    else:
        raise InputError(f"unknown kind {kind!r}")
    out["gr_upper_strict"] = L
    if q is not None:
        out["ar_upper_strict"] = ar_bound(L, d, q)
    return out


def pr_lower_from_alpha(m: int, d: int, alpha: int, kind: str = "general") -> int | None:
    """Smallest PR compatible with m <= PR * coef + const for the given alpha."""
    if kind == "general":
        coef, const = (alpha + 1) ** (d - 1), alpha + 1
    elif kind == "alternating":
        coef, const = math.comb(alpha, d - 1), alpha
    elif kind == "symmetric":
        coef, const = math.comb(alpha + d - 1, d - 1), alpha
    else:
        raise InputError(f"unknown kind {kind!r}")
    if coef == 0:
        return None if m > const else 0
    return max(0, _ceil_div(m - const, coef))


def isotropy_check(m: int, d: int, pr_upper: int, alpha: int, kind: str = "general") -> tuple[bool, int | None]:
    """Whether m <= PR * coef + const holds with PR = pr_upper, and the implied PR lower bound.

    A lower bound of None means no PR value can satisfy the inequality.
    """
    if min(m, d, pr_upper, alpha) < 0:
        raise InputError("arguments must be nonnegative")
    if kind == "general":
        rhs = pr_upper * (alpha + 1) ** (d - 1) + alpha + 1
    elif kind == "alternating":
        rhs = pr_upper * math.comb(alpha, d - 1) + alpha
    elif kind == "symmetric":
        rhs = pr_upper * math.comb(alpha + d - 1, d - 1) + alpha
    else:
        raise InputError(f"unknown kind {kind!r}")
    return m <= rhs, pr_lower_from_alpha(m, d, alpha, kind)


def ramsey_lambda_lower(d: int, s: int, t: int) -> tuple[int, bool, Fraction]:
    """C(s-1,d)/(s-1) * (C(t,d) - 1) + s as (floor, is_integer, exact value)."""
    if s < 2 or d < 1:
        raise InputError("need s >= 2 and d >= 1")
    val = Fraction(math.comb(s - 1, d), s - 1) * (math.comb(t, d) - 1) + s
    return math.floor(val), val.denominator == 1, val


def adjustment_min(N: int, q: int, c: int) -> tuple[tuple[int, ...], int]:
    """Minimise prod z_i over z in [q]^N with sum z_i = c.

    The minimiser packs as many coordinates as possible at q, one
    remainder coordinate, and ones elsewhere.
    """
    if N < 1 or q < 1:
        raise InputError("need N >= 1 and q >= 1")
    if not N <= c <= q * N:
        raise InfeasibleRange(f"c = {c} outside [{N}, {q * N}]")
    if q == 1:
        return (1,) * N, 1
    t = min((c - N) // (q - 1), N - 1)
    last = c - N + 1 - (q - 1) * t
    z = (q,) * t + (1,) * (N - t - 1) + (last,)
    return z, math.prod(z)


def nonzero_points_bound(q: int, N: int, deg: int) -> tuple[int, bool]:
    """Upper bound q^N - q^(N - ceil(deg/(q-1))) on the zeros of a nonzero polynomial.

    Returns (bound, clamped).  When the exponent would go negative the bound
    is clamped at q^N - 1.
    """
    if deg < 0 or N < 0 or q < 2:
        raise InputError("need q >= 2, N >= 0, deg >= 0")
    e = N - _ceil_div(deg, q - 1)
    if e < 0:
        return q**N - 1, True
    return q**N - q**e, False


def grobner_degree_bound(h: int, d: int, n: int, bit_cap: int = 10**6) -> tuple[int, bool]:
    """2((d^C(h+d,d) + d)/2)^(2^(n-h-1)) and whether 2^h > C(h+d,d)."""
    if h < 0 or d < 1 or n < h + 1:
        raise InputError("need h >= 0, d >= 1, n >= h + 1")
    t = math.comb(h + d, d)
    base_bits = t * math.log2(d) if d > 1 else 1
    exp_val = 2 ** (n - h - 1)
    if base_bits * exp_val > bit_cap:
        raise ExponentOverflow(f"result exceeds {bit_cap} bits")
    base = (d**t + d) // 2
    return 2 * base**exp_val, 2**h > t


# -- bracket -----------------------------------------------------------------

def lift_prime_map(F: MultiMap, ctx: FieldCtx) -> MultiMap:
    """Same coefficients viewed over an extension of the prime base field."""
    if F.ctx.l != 1 or ctx.p != F.ctx.p:
        raise InputError("only prime-field maps can be lifted")
    values = {(j, idx): c for j, idx, c in F.entries}
    return _from_entries(ctx, F.dims, F.codim, F.kind, values)


def lift_for(F: MultiMap, threshold: int) -> tuple[MultiMap, bool]:
    """Lift F to the smallest GF(p^L) with p^L > threshold.  Returns (map, lifted)."""
    if F.ctx.q > threshold:
        return F, False
    if F.ctx.l != 1:
        return F, False
    p, L = F.ctx.p, 1
    while p**L <= threshold:
        L += 1
    return lift_prime_map(F, field_make(p, L)), True


def gr_upper_value(h: int, d: int, q: int) -> float | None:
    """AR bound from h divided by 1 - log_q(d+1); None when q <= d+1."""
    k = d + 1
    if q <= k:
        return None
    return ar_bound((h + 1) ** d, d, q) / (1 - math.log(k) / math.log(q))


def _largest_below(x: float) -> int:
    # largest integer strictly below x
    f = math.floor(x)
    return f - 1 if f == x else f


def bracket_report(F: MultiMap, cfg: RandConfig | None = None) -> tuple[BracketReport, BracketReport]:
    """Brackets for subrank and geometric rank of T_F.

    The subrank lower bound is a randomized beta over the base field.  The
    geometric-rank path lifts a prime base field until q > 2dN, where
    N = sum(dims) + codim, and reports the randomized beta there together
    with the upper bound derived from it.  Both brackets are also capped by
    the smallest tensor dimension.
    """
    cfg = cfg or RandConfig()
    G = F.to_general()
    d = G.d
    N = sum(G.dims) + G.codim
    dim_cap = min(list(G.dims) + [G.codim])
    if G.is_zero:
        z = ("zero map", "zero map")
        return (BracketReport("subrank", 0, z[0], 0, z[1]), BracketReport("geometricRank", 0, z[0], 0, z[1]))

    base = beta_randomized(G, cfg)
    q_guards = [] if base.stats["q_guard_ok"] else ["q-guard-failed"]
    lifted, did_lift = lift_for(G, 2 * d * N)
    if did_lift:
        lrep = beta_randomized(lifted, cfg)
    else:
        lrep = base
    q = lifted.ctx.q
    gr_guards = [] if lrep.stats["q_guard_ok"] else ["q-guard-failed"]
    if not did_lift and G.ctx.q <= 2 * d * N and G.ctx.l != 1:
        gr_guards.append("lift-unavailable: extension base field")
    h = max(lrep.value, base.value)
    raw = gr_upper_value(lrep.value, d, q)
    if raw is None:
        gr_guards.append("q<=k: upper bound withheld")
        upper, source = dim_cap, "min tensor dimension"
    else:
        ub = _largest_below(raw)
        upper, source = (ub, "completeness-index AR bound") if ub <= dim_cap else (dim_cap, "min tensor dimension")
    details = {"beta_base": base.value, "beta_lifted": lrep.value, "lifted_q": q,
               "lifted": did_lift, "upper_strict": raw, "guard_n": N}
    sub = BracketReport("subrank", base.value, "randomized beta over base field", upper, source,
                        q_guards + [g for g in gr_guards if g not in q_guards], dict(details))
    gr = BracketReport("geometricRank", h, "randomized beta (extension invariant)", upper, source,
                       gr_guards, dict(details))
    return sub, gr
