"""Random chain complexes, chain maps and finite group actions for property tests.

Complexes are built in a normal form (homology generators plus elementary
Q -> Q pieces) and then conjugated degreewise by random unimodular matrices,
so the expected homology is known by construction.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .chain import ChainComplex, ChainMap, GroupChainAction
from .qla import RationalMatrix, inverse, block_diag, rank


def random_unimodular(rng: random.Random, n: int, steps: int | None = None) -> RationalMatrix:
    rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    if n < 2:
        if n == 1 and rng.random() < 0.5:
            rows[0][0] = -1
        return RationalMatrix(rows, rows=n, cols=n)
    for _ in range(steps if steps is not None else 2 * n):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        for t in range(n):
            rows[i][t] += c * rows[j][t]
    return RationalMatrix(rows, rows=n, cols=n)


def random_matrix(rng: random.Random, rows: int, cols: int, lo: int = -3, hi: int = 3) -> RationalMatrix:
    return RationalMatrix([[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)], rows=rows, cols=cols)


class NormalForm:
    """Normal-form description: h[r] homology generators, e[r] pieces Q_{r+1} -> Q_r."""

    def __init__(self, h, e):
        top = max(len(h), len(e) + 1) - 1
        self.h = list(h) + [0] * (top + 1 - len(h))
        self.e = list(e) + [0] * (top + 1 - len(e))
        self.top = top

    def dims(self):
        return [self.h[r] + self.e[r] + (self.e[r - 1] if r > 0 else 0) for r in range(self.top + 1)]

    def layout(self, r):
        """Index blocks in degree r: (homology, bottoms of e[r], tops of e[r-1])."""
        a = self.h[r]
        b = self.e[r]
        c = self.e[r - 1] if r > 0 else 0
        return range(0, a), range(a, a + b), range(a + b, a + b + c)

    def boundary(self, r):
        dims = self.dims()
        src = dims[r] if r <= self.top else 0
        tgt = dims[r - 1]
        ent = {}
        _, bottoms, _ = self.layout(r - 1)
        _, _, tops = self.layout(r)
        for i, j in zip(bottoms, tops):
            ent[(i, j)] = 1
        return RationalMatrix.from_sparse(tgt, src, ent)


def random_normal_form(rng: random.Random, top: int, maxdim: int) -> NormalForm:
    while True:
        h = [rng.randint(0, 2) for _ in range(top + 1)]
        e = [rng.randint(0, 2) for _ in range(top)]
        nf = NormalForm(h, e)
        if all(d <= maxdim for d in nf.dims()):
            return nf


def _conjugate(nf: NormalForm, Ts: list) -> ChainComplex:
    dims = nf.dims()
    bds = {}
    for r in range(1, nf.top + 1):
        bds[r] = Ts[r - 1] @ nf.boundary(r) @ inverse(Ts[r])
    return ChainComplex(dims, bds)


class RandomComplex:
    def __init__(self, nf: NormalForm, Ts: list, complex: ChainComplex):
        self.nf = nf
        self.Ts = Ts
        self.complex = complex

    @property
    def expected_betti(self):
        return tuple(self.nf.h)


def random_complex(rng: random.Random, top: int = 4, maxdim: int = 8) -> RandomComplex:
    nf = random_normal_form(rng, top, maxdim)
    Ts = [random_unimodular(rng, d) for d in nf.dims()]
    return RandomComplex(nf, Ts, _conjugate(nf, Ts))


def random_chain_map(rng: random.Random, X: RandomComplex, Y: RandomComplex, homotopy: bool = True) -> ChainMap:
    """T_Y f0 T_X^-1 + (d h + h d), with f0 random on homology generators."""
    top = max(X.complex.top_degree, Y.complex.top_degree)
    comps = {}
    for r in range(top + 1):
        xd, yd = X.complex.dim(r), Y.complex.dim(r)
        if xd == 0 or yd == 0:
            continue
        hx = X.nf.h[r] if r <= X.nf.top else 0
        hy = Y.nf.h[r] if r <= Y.nf.top else 0
        ent = {}
        for i in range(hy):
            for j in range(hx):
                v = rng.randint(-2, 2)
                if v:
                    ent[(i, j)] = v
        f0 = RationalMatrix.from_sparse(yd, xd, ent)
        comps[r] = Y.Ts[r] @ f0 @ inverse(X.Ts[r])
    if homotopy:
        hs = {r: random_matrix(rng, Y.complex.dim(r + 1), X.complex.dim(r), -1, 1) for r in range(top + 1)}
        for r in range(top + 1):
            extra = Y.complex.boundary(r + 1) @ hs[r]
            if r >= 1:
                extra = extra + hs[r - 1] @ X.complex.boundary(r)
            comps[r] = comps.get(r, RationalMatrix.zeros(Y.complex.dim(r), X.complex.dim(r))) + extra
    return ChainMap(X.complex, Y.complex, comps)


def random_augmented_complex(rng: random.Random, top: int = 4, maxdim: int = 8) -> RandomComplex:
    """Random complex whose sum-of-coefficients map is an augmentation (and H_0 != 0)."""
    while True:
        rc = random_complex(rng, top, maxdim)
        if rc.nf.h[0] >= 1:
            break
    c = rc.complex
    # find a vertex-space functional vanishing on boundaries and nonzero on a homology class, rescale to ones
    from .qla import kernel_basis
    eps = None
    ker = kernel_basis(c.boundary(1).T).vectors() if c.dim(1) else [
        [1 if i == j else 0 for i in range(c.dim(0))] for j in range(c.dim(0))]
    for v in ker:
        if all(x != 0 for x in v):
            eps = v
            break
    if eps is None:
        # generic combination
        for _ in range(50):
            coeffs = [rng.randint(1, 5) for _ in ker]
            v = [sum(Fraction(a) * w[i] for a, w in zip(coeffs, ker)) for i in range(c.dim(0))]
            if all(x != 0 for x in v):
                eps = v
                break
    if eps is None:
        return random_augmented_complex(rng, top, maxdim)
    # rescale the basis of C_0 so that eps becomes the all-ones functional
    Dinv = RationalMatrix.diagonal(eps)
    bds = {r: c.boundary(r) for r in range(2, c.top_degree + 1)}
    if c.top_degree >= 1:
        bds[1] = Dinv @ c.boundary(1)
    Ts = list(rc.Ts)
    Ts[0] = Dinv @ Ts[0]
    new = ChainComplex(c.dims, bds)
    return RandomComplex(rc.nf, Ts, new)


def random_augmented_map(rng: random.Random, X: RandomComplex, Y: RandomComplex) -> ChainMap:
    """Random chain map preserving the sum-of-coefficients augmentation.

    f_0 is corrected by e_0 (eps_X - eps_Y f_0); both functionals kill boundaries,
    so the result is still a chain map.
    """
    from .chain import augmentation
    f = random_chain_map(rng, X, Y)
    y0 = Y.complex.dim(0)
    diff = augmentation(X.complex) - augmentation(Y.complex) @ f[0]
    unit = RationalMatrix.from_sparse(y0, 1, {(0, 0): 1})
    comps = {r: f[r] for r in range(max(X.complex.top_degree, Y.complex.top_degree) + 1)}
    comps[0] = f[0] + unit @ diff
    return ChainMap(X.complex, Y.complex, comps)


# --------------------------------------------------------------------------
# group actions

def cyclic_reps(m: int) -> dict:
    """Matrices of a generator of Z/m on a few representations."""
    reps = {"trivial": RationalMatrix.identity(1)}
    reg = [[1 if i == (j + 1) % m else 0 for j in range(m)] for i in range(m)]
    reps["regular"] = RationalMatrix(reg, rows=m, cols=m)
    if m == 2:
        reps["sign"] = RationalMatrix([[-1]])
    if m == 3:
        reps["rotation"] = RationalMatrix([[0, -1], [1, -1]])
    return reps


def _reynolds_matrix(rng, A_elems, B_elems, rows, cols):
    """Average of b X a^-1 over paired group elements: an equivariant map."""
    X = random_matrix(rng, rows, cols, -2, 2)
    acc = RationalMatrix.zeros(rows, cols)
    for a, b in zip(A_elems, B_elems):
        acc = acc + b @ X @ inverse(a)
    return acc


def _powers(g: RationalMatrix, m: int) -> list:
    out = [RationalMatrix.identity(g.rows)]
    for _ in range(m - 1):
        out.append(g @ out[-1])
    return out


def random_cyclic_action(rng: random.Random, m: int | None = None, top: int = 3, maxdim: int = 8) -> GroupChainAction:
    """Random Z/m action: sum of (normal-form complex) (x) (representation), conjugated equivariantly."""
    m = m or rng.choice([2, 3])
    reps = cyclic_reps(m)
    while True:
        pieces = []
        for _ in range(rng.randint(1, 3)):
            nf = random_normal_form(rng, top, 3)
            name = rng.choice(sorted(reps))
            pieces.append((nf, reps[name]))
        dims = [sum((nf.dims()[r] if r <= nf.top else 0) * rep.rows for nf, rep in pieces) for r in range(top + 1)]
        if max(dims) <= maxdim and sum(dims) > 0:
            break
    # block structure
    bds = {}
    gens = {}
    for r in range(top + 1):
        blocks_g = []
        for nf, rep in pieces:
            d = nf.dims()[r] if r <= nf.top else 0
            blocks_g.append(block_diag([rep] * d) if d else RationalMatrix.zeros(0, 0))
        gens[r] = block_diag(blocks_g)
    for r in range(1, top + 1):
        blocks = []
        for nf, rep in pieces:
            b = nf.boundary(r) if r <= nf.top else RationalMatrix.zeros(nf.dims()[r - 1] if r - 1 <= nf.top else 0, 0)
            # b (x) id_rep
            k = rep.rows
            ent = {}
            for i in range(b.rows):
                for j in range(b.cols):
                    if b[i, j]:
                        for t in range(k):
                            ent[(i * k + t, j * k + t)] = b[i, j]
            blocks.append(RationalMatrix.from_sparse(b.rows * k, b.cols * k, ent))
        bds[r] = block_diag(blocks)
    # equivariant conjugation
    As = []
    for r in range(top + 1):
        els = _powers(gens[r], m)
        n = dims[r]
        for _ in range(50):
            A = _reynolds_matrix(rng, els, els, n, n)
            if rank(A) == n:
                break
        else:
            A = RationalMatrix.identity(n)
        As.append(A)
    cbds = {r: As[r - 1] @ bds[r] @ inverse(As[r]) for r in range(1, top + 1)}
    c = ChainComplex(dims, cbds)
    cgen = ChainMap(c, c, {r: As[r] @ gens[r] @ inverse(As[r]) for r in range(top + 1)})
    return GroupChainAction(c, m, [cgen])
