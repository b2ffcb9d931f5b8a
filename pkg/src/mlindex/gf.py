"""Exact arithmetic in GF(p) and GF(p^l).

Elements are plain ints in ``[0, q)``.  The base-``p`` digits of an element,
least significant first, are its coefficients in the polynomial basis
``1, x, ..., x^(l-1)`` modulo the field's minimal polynomial, so every
element has exactly one encoding and the prime subfield is ``range(p)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .errors import DivisionByZero, InputError, NonPrime, Reducible

FqElem = int


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for sp in small:
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    k = max(n + 1, 2)
    while not is_prime(k):
        k += 1
    return k


# -- polynomials over GF(p), little-endian coefficient lists -----------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_rem(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    m = _trim([c % p for c in m])
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _monic_polys(p: int, degree: int) -> Iterator[list[int]]:
    for tail in product(range(p), repeat=degree):
        yield list(reversed(tail)) + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = _trim([c % p for c in poly])
    deg = len(poly) - 1
    if deg < 1:
        return False
    for k in range(1, deg // 2 + 1):
        for div in _monic_polys(p, k):
            if not _poly_rem(poly, div, p):
                return False
    return True


def find_irreducible(p: int, l: int) -> tuple[int, ...]:
    """First monic irreducible of degree l, scanning tails c_0 + c_1 p + ... upward."""
    for k in range(p**l):
        tail = [(k // p**i) % p for i in range(l)]
        cand = tail + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("unreachable: irreducibles exist in every degree")


# -- field context ------------------------------------------------------------

@dataclass(frozen=True)
class FieldCtx:
    """GF(p^l) described by its characteristic, degree and minimal polynomial.

    Build instances with :func:`field_make`, which validates the inputs.
    """

    p: int
    l: int = 1
    min_poly: tuple[int, ...] | None = None

    @cached_property
    def q(self) -> int:
        return self.p**self.l

    @property
    def is_prime_field(self) -> bool:
        return self.l == 1

    @cached_property
    def _mp_bits(self) -> int:
        # min_poly as a bitset, for p = 2
        return sum(c << i for i, c in enumerate(self.min_poly or ()))

    def __str__(self) -> str:
        return f"GF({self.q})"

    # representation helpers
    def to_coeffs(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.l):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.l:
            if self.l == 1:
                raise InputError(f"{coeffs} is not an element of {self}")
            coeffs = _poly_rem(coeffs, self.min_poly, self.p)
        a = 0
        for c in reversed(coeffs):
            a = a * self.p + c % self.p
        return a

    def elements(self) -> range:
        return range(self.q)

    def element(self, value: int) -> int:
        """Reduce an integer into the prime subfield."""
        return value % self.p

    # arithmetic
    def add(self, a: int, b: int) -> int:
        if self.l == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        ca, cb = self.to_coeffs(a), self.to_coeffs(b)
        return self.from_coeffs([x + y for x, y in zip(ca, cb)])

    def neg(self, a: int) -> int:
        if self.l == 1:
            return -a % self.p
        if self.p == 2:
            return a
        return self.from_coeffs([-c for c in self.to_coeffs(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.l == 1:
            return a * b % self.p
        if self.p == 2:
            return self._mul_gf2x(a, b)
        return self._mul_poly(a, b)

    def _mul_gf2x(self, a: int, b: int) -> int:
        r = 0
        while b:
            if b & 1:
                r ^= a
            a <<= 1
            b >>= 1
        mod, deg = self._mp_bits, self.l
        for k in range(r.bit_length() - 1, deg - 1, -1):
            if (r >> k) & 1:
                r ^= mod << (k - deg)
        return r

    def _mul_poly(self, a: int, b: int) -> int:
        p, l = self.p, self.l
        ca, cb = self.to_coeffs(a), self.to_coeffs(b)
        prod = [0] * (2 * l - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] += x * y
        mp = self.min_poly
        for k in range(2 * l - 2, l - 1, -1):
            c = prod[k] % p
            if c:
                for i in range(l):
                    prod[k - l + i] -= c * mp[i]
        out = 0
        for c in reversed(prod[:l]):
            out = out * p + c % p
        return out

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.l == 1:
            return pow(a, e, self.p)
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"inverse of 0 in {self}")
        if self.l == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    # sampling
    def sample_uniform(self, rng: np.random.Generator) -> int:
        return int(rng.integers(0, self.q))

    def sample_vector(self, rng: np.random.Generator, n: int) -> list[int]:
        return [int(x) for x in rng.integers(0, self.q, size=n)]

    # serialization
    def to_json(self) -> dict:
        return {
            "p": self.p,
            "l": self.l,
            "min_poly": list(self.min_poly) if self.min_poly is not None else None,
        }

    def encode(self, a: int):
        return a if self.l == 1 else self.to_coeffs(a)

    def decode(self, value) -> int:
        if isinstance(value, list):
            if len(value) > self.l:
                raise InputError(f"element {value} has more than {self.l} coefficients")
            return self.from_coeffs(value)
        if self.l != 1:
            if not 0 <= value < self.p:
                raise InputError(f"bare integer {value} is not in the prime subfield of {self}")
            return value
        return value % self.p


def field_make(p: int, l: int = 1, min_poly: Sequence[int] | None = None) -> FieldCtx:
    """Validate and build GF(p^l).

    If ``min_poly`` (little-endian, monic) is omitted for ``l > 1`` the first
    irreducible in a fixed lexicographic scan is used, so construction is
    reproducible.
    """
    if not isinstance(p, int) or not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if l < 1:
        raise InputError(f"extension degree must be >= 1, got {l}")
    if l == 1:
        if min_poly is not None and len(min_poly) != 2:
            raise InputError("a prime field takes no minimal polynomial of degree != 1")
        return FieldCtx(p, 1, None)
    if min_poly is None:
        return FieldCtx(p, l, find_irreducible(p, l))
    mp = [c % p for c in min_poly]
    if len(mp) != l + 1 or mp[-1] != 1:
        raise InputError(f"minimal polynomial must be monic of degree {l}")
    if not is_irreducible(mp, p):
        raise Reducible(f"{list(min_poly)} is reducible over GF({p})")
    return FieldCtx(p, l, tuple(mp))


def field_from_json(obj: dict) -> FieldCtx:
    return field_make(int(obj["p"]), int(obj.get("l", 1)), obj.get("min_poly"))


def smallest_extension(p: int, threshold: int) -> FieldCtx:
    """GF(p^l) for the least l with p^l > threshold."""
    l = 1
    while p**l <= threshold:
        l += 1
    return field_make(p, l)
