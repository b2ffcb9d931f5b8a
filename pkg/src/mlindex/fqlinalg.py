"""Dense exact linear algebra over a FieldCtx."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DimMismatch
from .gf import FieldCtx


@dataclass(frozen=True)
class FqMatrix:
    ctx: FieldCtx
    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if len(self.data) != self.rows * self.cols:
            raise DimMismatch(f"{len(self.data)} entries for a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_rows(cls, ctx: FieldCtx, rows: Sequence[Sequence[int]], cols: int | None = None) -> "FqMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimMismatch("ragged rows")
        return cls(ctx, len(rows), cols, tuple(x for r in rows for x in r))

    def row(self, i: int) -> list[int]:
        return list(self.data[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "FqMatrix":
        rows = self.to_rows()
        return FqMatrix.from_rows(self.ctx, [list(c) for c in zip(*rows)], self.rows) if rows else FqMatrix(self.ctx, self.cols, 0, ())

    def matvec(self, v: Sequence[int]) -> list[int]:
        if len(v) != self.cols:
            raise DimMismatch(f"vector of length {len(v)} for {self.cols} columns")
        return [dot(self.ctx, self.row(i), v) for i in range(self.rows)]


def dot(ctx: FieldCtx, u: Sequence[int], v: Sequence[int]) -> int:
    if ctx.l == 1:
        return sum(a * b for a, b in zip(u, v)) % ctx.p
    acc = 0
    for a, b in zip(u, v):
        if a and b:
            acc = ctx.add(acc, ctx.mul(a, b))
    return acc


def _pack(row: Sequence[int]) -> int:
    bits = 0
    for i, x in enumerate(row):
        if x:
            bits |= 1 << i
    return bits


def _unpack(bits: int, n: int) -> list[int]:
    return [(bits >> i) & 1 for i in range(n)]


def _rank_gf2(packed: list[int]) -> int:
    # columns are bits; stops once every row holds a pivot
    work = [r for r in packed if r]
    rank = 0
    while work:
        r = work.pop()
        if not r:
            continue
        low = r & -r
        work = [x ^ r if x & low else x for x in work]
        work = [x for x in work if x]
        rank += 1
    return rank


def _eliminate(ctx: FieldCtx, rows: list[list[int]], ncols: int, full: bool):
    """Row-reduce in place.  Returns pivot columns.

    With ``full`` the result is reduced row echelon form; otherwise only
    rows below each pivot are cleared and the loop stops once every row
    has a pivot.
    """
    nrows = len(rows)
    pivots: list[int] = []
    r = 0
    prime = ctx.l == 1
    p = ctx.p
    for col in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][col]
        if prime:
            inv = pow(lead, p - 2, p)
            prow = [x * inv % p for x in rows[r]]
        else:
            inv = ctx.inv(lead)
            prow = [ctx.mul(x, inv) for x in rows[r]]
        rows[r] = prow
        targets = range(nrows) if full else range(r + 1, nrows)
        for i in targets:
            if i == r:
                continue
            f = rows[i][col]
            if f:
                if prime:
                    rows[i] = [(a - f * b) % p for a, b in zip(rows[i], prow)]
                else:
                    rows[i] = [ctx.sub(a, ctx.mul(f, b)) for a, b in zip(rows[i], prow)]
        pivots.append(col)
        r += 1
    return pivots


def rank_rows(ctx: FieldCtx, rows: Sequence[Sequence[int]], ncols: int | None = None) -> int:
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    if ncols is None:
        ncols = len(rows[0])
    if ctx.q == 2:
        return _rank_gf2([_pack(r) for r in rows])
    return len(_eliminate(ctx, rows, ncols, full=False))


def rank(M: FqMatrix) -> int:
    """Rank by Gaussian elimination; 0 <= rank <= min(rows, cols)."""
    if M.rows == 0 or M.cols == 0:
        return 0
    return rank_rows(M.ctx, M.to_rows(), M.cols)


def is_full_row_rank(ctx: FieldCtx, rows: Sequence[Sequence[int]], ncols: int) -> bool:
    if len(rows) > ncols:
        return False
    return rank_rows(ctx, rows, ncols) == len(rows)


def rref(ctx: FieldCtx, rows: Sequence[Sequence[int]], ncols: int | None = None):
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    if ncols is None:
        ncols = len(rows[0])
    pivots = _eliminate(ctx, rows, ncols, full=True)
    return rows[:len(pivots)], pivots


def kernel_basis(M: FqMatrix) -> list[list[int]]:
    """Basis of the right null space {v : M v = 0}."""
    ctx, n = M.ctx, M.cols
    reduced, pivots = rref(ctx, M.to_rows(), n)
    pivot_set = set(pivots)
    basis = []
    for free in range(n):
        if free in pivot_set:
            continue
        v = [0] * n
        v[free] = 1
        for row, pc in zip(reduced, pivots):
            v[pc] = ctx.neg(row[free])
        basis.append(v)
    return basis


def solve(ctx: FieldCtx, rows: Sequence[Sequence[int]], rhs: Sequence[int], ncols: int) -> list[int] | None:
    """Some x with A x = rhs, or None when the system is inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    if not aug:
        return [0] * ncols
    reduced, pivots = rref(ctx, aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [0] * ncols
    for row, pc in zip(reduced, pivots):
        x[pc] = row[ncols]
    return x


class EchelonBasis:
    """Incrementally maintained echelon basis of a row space.

    ``add`` reports whether a vector was independent of everything added so
    far; ``mark``/``undo`` rewind for backtracking searches.
    """

    def __init__(self, ctx: FieldCtx, ncols: int):
        self.ctx = ctx
        self.ncols = ncols
        self._gf2 = ctx.q == 2
        self._rows: list = []
        self._pivots: list[int] = []

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, v: Sequence[int]):
        """Residue of v against the basis (packed int over GF(2), else list)."""
        ctx = self.ctx
        if self._gf2:
            bits = _pack(v) if not isinstance(v, int) else v
            for row, pc in zip(self._rows, self._pivots):
                if (bits >> pc) & 1:
                    bits ^= row
            return bits
        w = list(v)
        if ctx.l == 1:
            p = ctx.p
            for row, pc in zip(self._rows, self._pivots):
                f = w[pc]
                if f:
                    w = [(a - f * b) % p for a, b in zip(w, row)]
        else:
            for row, pc in zip(self._rows, self._pivots):
                f = w[pc]
                if f:
                    w = [ctx.sub(a, ctx.mul(f, b)) for a, b in zip(w, row)]
        return w

    def contains(self, v: Sequence[int]) -> bool:
        w = self.reduce(v)
        return not w if self._gf2 else not any(w)

    def add(self, v: Sequence[int]) -> bool:
        w = self.reduce(v)
        if self._gf2:
            if not w:
                return False
            self._pivots.append((w & -w).bit_length() - 1)
            self._rows.append(w)
            return True
        pc = next((i for i, x in enumerate(w) if x), None)
        if pc is None:
            return False
        ctx = self.ctx
        lead = w[pc]
        if lead != 1:
            inv = ctx.inv(lead)
            w = [x * inv % ctx.p for x in w] if ctx.l == 1 else [ctx.mul(x, inv) for x in w]
        self._pivots.append(pc)
        self._rows.append(w)
        return True

    def mark(self) -> int:
        return len(self._rows)

    def undo(self, mark: int) -> None:
        del self._rows[mark:]
        del self._pivots[mark:]

    def vectors(self) -> list[list[int]]:
        if self._gf2:
            return [_unpack(r, self.ncols) for r in self._rows]
        return [list(r) for r in self._rows]
