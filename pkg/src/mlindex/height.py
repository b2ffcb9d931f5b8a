"""Homogeneous ideals: parsing, polarization and height brackets."""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass

from .bounds import BracketReport, lift_prime_map
from .errors import AllZero, MixedDegrees, ParseError, SmallCharacteristic
from .gf import FieldCtx, field_from_json, field_make
from .mlmap import MultiMap, polarize
from .randbeta import RandConfig, beta_randomized

FORMAT = "ideal/1"

Monomial = tuple[int, ...]


@dataclass(frozen=True)
class HomIdeal:
    ctx: FieldCtx
    num_vars: int
    degree: int
    gens: tuple[dict, ...]

    def polys(self) -> list[dict[Monomial, int]]:
        return [dict(g) for g in self.gens]

    def to_text(self) -> str:
        lines = []
        for g in self.gens:
            terms = []
            for e, c in sorted(g.items(), reverse=True):
                factors = [f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k]
                terms.append("*".join([str(c)] + factors))
            lines.append(" + ".join(terms))
        return "\n".join(lines)


class ZeroGeneratorWarning(UserWarning):
    pass


_TOKEN = re.compile(r"[ \t\r]*(?P<tok>(\d+)|x(\d+)|([+\-*^,\n])|(\S))")


def _tokens(text: str):
    line, line_start, pos = 1, 0, 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start("tok")
        col = start - line_start + 1
        _, num, var, op, bad = m.groups()
        if bad is not None:
            raise ParseError(f"unexpected character {bad!r}", line, col)
        if num is not None:
            yield ("num", int(num), line, col)
        elif var is not None:
            yield ("var", int(var), line, col)
        else:
            yield ("op", op, line, col)
            if op == "\n":
                line, line_start = line + 1, start + 1
        pos = m.end()
    yield ("end", None, line, len(text) - line_start + 1)


def _parse_generators(text: str):
    """List of generators, each a list of (coefficient, {var: exponent})."""
    toks = list(_tokens(text))
    i = 0
    gens: list[list] = []

    def peek():
        return toks[i]

    def expect_factor():
        nonlocal i
        kind, val, ln, col = toks[i]
        if kind == "num":
            i += 1
            return ("c", val)
        if kind == "var":
            if val < 1:
                raise ParseError("variables are numbered from x1", ln, col)
            i += 1
            exp = 1
            if toks[i][0] == "op" and toks[i][1] == "^":
                i += 1
                k2, v2, l2, c2 = toks[i]
                if k2 != "num":
                    raise ParseError("exponent must be an integer", l2, c2)
                exp = v2
                i += 1
            return ("x", val - 1, exp)
        raise ParseError(f"expected a coefficient or variable, got {val!r}", ln, col)

    def term(sign):
        nonlocal i
        coeff, mono = sign, {}
        while True:
            f = expect_factor()
            if f[0] == "c":
                coeff *= f[1]
            else:
                mono[f[1]] = mono.get(f[1], 0) + f[2]
            if peek()[0] == "op" and peek()[1] == "*":
                i += 1
                continue
            return coeff, mono

    current: list = []
    while True:
        kind, val, ln, col = peek()
        if kind == "end":
            if current:
                gens.append(current)
            elif gens and toks[i - 1][1] == ",":
                raise ParseError("empty generator", ln, col)
            break
        if kind == "op" and val in (",", "\n"):
            if val == "," and not current:
                raise ParseError("empty generator", ln, col)
            if current:
                gens.append(current)
            current = []
            i += 1
            continue
        sign = 1
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            i += 1
        elif current:
            raise ParseError(f"expected '+' or '-', got {val!r}", ln, col)
        current.append(term(sign))
    return gens


def parse_ideal(text: str, ctx: FieldCtx, num_vars: int | None = None) -> HomIdeal:
    """Parse generators like ``x1^2 + 3*x1*x2, x2^2``; coefficients reduce mod p."""
    raw = _parse_generators(text)
    top = max((v for g in raw for _, mono in g for v in mono), default=-1) + 1
    m = top if num_vars is None else num_vars
    if top > m:
        raise ParseError(f"variable x{top} exceeds num_vars = {m}", 1, 1)
    gens = []
    degrees = set()
    for g in raw:
        poly: dict[Monomial, int] = {}
        for c, mono in g:
            e = tuple(mono.get(k, 0) for k in range(m))
            poly[e] = (poly.get(e, 0) + c) % ctx.p
        poly = {e: c for e, c in poly.items() if c}
        if not poly:
            warnings.warn("dropping a generator that reduces to zero", ZeroGeneratorWarning, stacklevel=2)
            continue
        degrees |= {sum(e) for e in poly}
        gens.append(poly)
    if not gens:
        raise AllZero("every generator is zero")
    if len(degrees) > 1:
        raise MixedDegrees(f"generators mix degrees {sorted(degrees)}")
    return HomIdeal(ctx, m, degrees.pop(), tuple(gens))


def ideal_to_json(I: HomIdeal) -> dict:
    return {"format": FORMAT, "field": I.ctx.to_json(), "num_vars": I.num_vars, "text": I.to_text()}


def ideal_from_json(obj: dict) -> HomIdeal:
    if obj.get("format") != FORMAT:
        raise ParseError(f"expected format {FORMAT!r}", 1, 1)
    ctx = field_from_json(obj["field"])
    return parse_ideal(obj["text"], ctx, obj.get("num_vars"))


def polarized_map(I: HomIdeal, ctx: FieldCtx | None = None) -> MultiMap:
    return polarize(I.polys(), I.num_vars, ctx or I.ctx)


def height_bracket(I: HomIdeal, cfg: RandConfig | None = None) -> BracketReport:
    """Bracket h <= height < C(h+d, d) with h a randomized beta_S.

    A prime base field is lifted to GF(p^L) with p^L above both 2dN
    (N = d*m + number of generators) and C(m+d-1, d), the latter standing
    in for the unknown height.
    """
    cfg = cfg or RandConfig()
    ctx, d, m = I.ctx, I.degree, I.num_vars
    if ctx.p <= d:
        raise SmallCharacteristic(f"polarization needs char > {d}, got {ctx.p}")
    N = d * m + len(I.gens)
    threshold = max(2 * d * N, math.comb(m + d - 1, d))
    guards = []
    lifted_ctx = ctx
    if ctx.q <= threshold:
        if ctx.l == 1:
            L = 1
            while ctx.p**L <= threshold:
                L += 1
            lifted_ctx = field_make(ctx.p, L)
        else:
            guards.append("lift-unavailable: extension base field")
    F = polarized_map(I, ctx)
    if lifted_ctx is not ctx:
        F = lift_prime_map(F, lifted_ctx)
    rep = beta_randomized(F, cfg)
    if not rep.stats["q_guard_ok"]:
        guards.append("q-guard-failed")
    if lifted_ctx.q <= math.comb(m + d - 1, d):
        guards.append("field-size guard failed")
    h = rep.value
    return BracketReport("height", h, "randomized beta_S", math.comb(h + d, d) - 1,
                         "C(h+d, d) - 1", guards,
                         {"lifted_q": lifted_ctx.q, "guard_n": N, "d": d, "num_vars": m,
                          "k_per_level": rep.stats["k_per_level"]})
