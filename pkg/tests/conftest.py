"""Independent oracles (sympy, plain python) used to freeze expected values."""
import random
import sys

import pytest
import sympy

from stratatop.corpus import load_any


def sympy_rank(m) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return sympy.Matrix(m.rows, m.cols, [sympy.Rational(x.numerator, x.denominator) for r in m.tolist() for x in r]).rank()


def oracle_betti_complex(k) -> tuple:
    """Betti numbers of a simplicial complex straight from its faces, boundary matrices built here."""
    faces = {}
    for d in range(k.dim + 1):
        faces[d] = sorted(k.simplices(d))
    ranks = {}
    for d in range(1, k.dim + 1):
        idx = {s: i for i, s in enumerate(faces[d - 1])}
        M = sympy.zeros(len(faces[d - 1]), len(faces[d]))
        for j, s in enumerate(faces[d]):
            for i in range(len(s)):
                M[idx[s[:i] + s[i + 1:]], j] = (-1) ** i
        ranks[d] = M.rank()
    return tuple(len(faces[d]) - ranks.get(d, 0) - ranks.get(d + 1, 0) for d in range(k.dim + 1))


def oracle_betti_chain(C) -> tuple:
    rk = {r: sympy_rank(C.boundary(r)) for r in range(1, C.top_degree + 1)}
    return tuple(C.dim(r) - rk.get(r, 0) - rk.get(r + 1, 0) for r in range(C.top_degree + 1))


def oracle_inertia(m) -> tuple:
    """(n+, n-, n0) from Descartes' rule on the characteristic polynomial (exact for symmetric matrices)."""
    n = m.rows
    if n == 0:
        return (0, 0, 0)
    S = sympy.Matrix(n, n, [sympy.Rational(x.numerator, x.denominator) for r in m.tolist() for x in r])
    lam = sympy.Symbol("t")
    coeffs = sympy.Poly(S.charpoly(lam).as_expr(), lam).all_coeffs()
    zero = 0
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
        zero += 1

    def changes(cs):
        cs = [c for c in cs if c != 0]
        return sum(1 for a, b in zip(cs, cs[1:]) if a * b < 0)
    pos = changes(coeffs)
    deg = len(coeffs) - 1
    neg = changes([c * (-1) ** (deg - i) for i, c in enumerate(coeffs)])
    return (pos, neg, zero)


@pytest.fixture(scope="session")
def corpus():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load_any(name)[1]
        return cache[name]
    return get


@pytest.fixture
def rng():
    return random.Random(20240601)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "VERDICTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda x: int(x[2:4])):
            terminalreporter.write_line(line)
