import itertools

import pytest

from mlindex.gf import field_make


@pytest.fixture(scope="session")
def gf():
    cache = {}

    def make(p, l=1):
        if (p, l) not in cache:
            cache[(p, l)] = field_make(p, l)
        return cache[(p, l)]
    return make


def det_mod(ctx, M):
    """Leibniz determinant; independent of the elimination code."""
    n = len(M)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = 1
        for i in range(n):
            term = ctx.mul(term, M[i][perm[i]])
        total = ctx.add(total, term if inv % 2 == 0 else ctx.neg(term))
    return total


def minor_rank(ctx, M):
    """Largest k with a nonvanishing k x k minor."""
    rows, cols = len(M), len(M[0]) if M else 0
    for k in range(min(rows, cols), 0, -1):
        for R in itertools.combinations(range(rows), k):
            for C in itertools.combinations(range(cols), k):
                if det_mod(ctx, [[M[i][j] for j in C] for i in R]):
                    return k
    return 0


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "OUTCOMES", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(lines):
        ok, label = lines[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {label}")
