"""Exact rational linear algebra over Fraction.

Everything here is exact: no floats.  Matrices are immutable and stored
row-major as tuples of Fractions.  Elimination works on sparse dict rows,
which keeps simplicial boundary matrices cheap.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass ints, Fractions or 'p/q' strings")
    return Fraction(x)


class RationalMatrix:
    __slots__ = ("rows", "cols", "_data", "_hash", "_nz")

    def __init__(self, data: Iterable[Iterable] = (), rows: int | None = None, cols: int | None = None):
        body = tuple(tuple(to_fraction(x) for x in row) for row in data)
        if rows is None:
            rows = len(body)
        if cols is None:
            cols = len(body[0]) if body else 0
        if len(body) != rows:
            raise ValueError("row count %d does not match data (%d rows)" % (rows, len(body)))
        for i, row in enumerate(body):
            if len(row) != cols:
                raise ValueError("row %d has %d entries, expected %d" % (i, len(row), cols))
        self.rows = rows
        self.cols = cols
        self._data = body
        self._hash = None
        self._nz = None

    # construction helpers
    @classmethod
    def _raw(cls, data: tuple, rows: int, cols: int, nz: list | None = None) -> "RationalMatrix":
        m = object.__new__(cls)
        m.rows, m.cols, m._data, m._hash, m._nz = rows, cols, data, None, nz
        return m

    @classmethod
    def _from_nz(cls, nz: list, rows: int, cols: int) -> "RationalMatrix":
        """Build from per-row sorted (col, value) lists with nonzero values."""
        data = []
        for r in nz:
            row = [ZERO] * cols
            for j, v in r:
                row[j] = v
            data.append(tuple(row))
        return cls._raw(tuple(data), rows, cols, nz)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls._raw(tuple((ZERO,) * cols for _ in range(rows)), rows, cols, [[] for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls._raw(tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), n, n,
                        [[(i, ONE)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries: Sequence) -> "RationalMatrix":
        n = len(entries)
        ent = [to_fraction(x) for x in entries]
        return cls._raw(tuple(tuple(ent[i] if i == j else ZERO for j in range(n)) for i in range(n)), n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "RationalMatrix":
        columns = [tuple(to_fraction(x) for x in c) for c in columns]
        if rows is None:
            if not columns:
                raise ValueError("row count needed for a matrix with no columns")
            rows = len(columns[0])
        for c in columns:
            if len(c) != rows:
                raise ValueError("column length mismatch")
        data = tuple(tuple(c[i] for c in columns) for i in range(rows))
        return cls._raw(data, rows, len(columns))

    @classmethod
    def from_sparse(cls, rows: int, cols: int, entries: dict) -> "RationalMatrix":
        nz = [[] for _ in range(rows)]
        for (i, j), v in entries.items():
            if not 0 <= j < cols:
                raise IndexError("column %d out of range" % j)
            v = to_fraction(v)
            if v:
                nz[i].append((j, v))
        for r in nz:
            r.sort()
        return cls._from_nz(nz, rows, cols)

    @classmethod
    def from_row_dicts(cls, rowdicts: Sequence[dict], cols: int) -> "RationalMatrix":
        nz = [sorted((j, to_fraction(v)) for j, v in d.items() if v) for d in rowdicts]
        return cls._from_nz(nz, len(rowdicts), cols)

    # access
    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list:
        return [list(r) for r in self._data]

    def nonzero_rows(self) -> list:
        """Per row, the list of (column, value) with value != 0 (cached)."""
        if self._nz is None:
            self._nz = [[(j, v) for j, v in enumerate(r) if v] for r in self._data]
        return self._nz

    def row_dicts(self) -> list:
        return [dict(r) for r in self.nonzero_rows()]

    def is_zero(self) -> bool:
        return not any(self.nonzero_rows())

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(self._data[i][j] == self._data[j][i]
                                        for i in range(self.rows) for j in range(i + 1, self.cols))

    # algebra
    @property
    def T(self) -> "RationalMatrix":
        if not self.rows:
            return RationalMatrix.zeros(self.cols, 0)
        nz = [[] for _ in range(self.cols)]
        for i, row in enumerate(self.nonzero_rows()):
            for j, v in row:
                nz[j].append((i, v))
        return RationalMatrix._from_nz(nz, self.cols, self.rows)

    def transpose(self) -> "RationalMatrix":
        return self.T

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch %s @ %s" % (self.shape, other.shape))
            ocols = other.cols
            orows = other.nonzero_rows()
            nz = []
            for r in self.nonzero_rows():
                acc = {}
                for k, a in r:
                    for j, b in orows[k]:
                        acc[j] = acc.get(j, 0) + a * b
                nz.append(sorted((j, v) for j, v in acc.items() if v))
            return RationalMatrix._from_nz(nz, self.rows, ocols)
        # vector
        vec = [to_fraction(x) for x in other]
        if len(vec) != self.cols:
            raise ValueError("vector length %d, expected %d" % (len(vec), self.cols))
        nz = [(k, v) for k, v in enumerate(vec) if v]
        return tuple(sum((r[k] * v for k, v in nz), ZERO) for r in self._data)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RationalMatrix._raw(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)),
                                   self.rows, self.cols)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RationalMatrix._raw(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)),
                                   self.rows, self.cols)

    def __neg__(self) -> "RationalMatrix":
        return self.scale(-1)

    def scale(self, c) -> "RationalMatrix":
        c = to_fraction(c)
        if c == 1:
            return self
        if not c:
            return RationalMatrix.zeros(self.rows, self.cols)
        return RationalMatrix._from_nz([[(j, c * v) for j, v in r] for r in self.nonzero_rows()], self.rows, self.cols)

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self._data)
        return "RationalMatrix(%dx%d: [%s])" % (self.rows, self.cols, body)

    def submatrix(self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> "RationalMatrix":
        rows = range(self.rows) if rows is None else rows
        cols = range(self.cols) if cols is None else cols
        cols = list(cols)
        data = tuple(tuple(self._data[i][j] for j in cols) for i in rows)
        return RationalMatrix._raw(data, len(data), len(cols))

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols,
                "data": [[f"{x.numerator}/{x.denominator}" for x in r] for r in self._data]}

    @classmethod
    def from_json(cls, obj) -> "RationalMatrix":
        if isinstance(obj, dict):
            return cls(obj.get("data", []), rows=obj["rows"], cols=obj["cols"])
        return cls(obj)


def hstack(mats: Sequence[RationalMatrix], rows: int | None = None) -> RationalMatrix:
    if not mats:
        return RationalMatrix.zeros(rows or 0, 0)
    r = mats[0].rows
    if any(m.rows != r for m in mats):
        raise ValueError("hstack row mismatch")
    nz = [[] for _ in range(r)]
    off = 0
    for m in mats:
        for i, row in enumerate(m.nonzero_rows()):
            nz[i].extend((j + off, v) for j, v in row)
        off += m.cols
    return RationalMatrix._from_nz(nz, r, off)


def vstack(mats: Sequence[RationalMatrix], cols: int | None = None) -> RationalMatrix:
    if not mats:
        return RationalMatrix.zeros(0, cols or 0)
    c = mats[0].cols
    if any(m.cols != c for m in mats):
        raise ValueError("vstack column mismatch")
    data = tuple(r for m in mats for r in m._data)
    nz = [row for m in mats for row in m.nonzero_rows()]
    return RationalMatrix._raw(data, len(data), c, nz)


def block_diag(mats: Sequence[RationalMatrix]) -> RationalMatrix:
    R = sum(m.rows for m in mats)
    C = sum(m.cols for m in mats)
    nz = []
    c0 = 0
    for m in mats:
        nz.extend([(j + c0, v) for j, v in row] for row in m.nonzero_rows())
        c0 += m.cols
    return RationalMatrix._from_nz(nz, R, C)


# --------------------------------------------------------------------------
# sparse elimination core

def _eliminate(rows: list, ncols: int, track: bool = False):
    """Gauss-Jordan on a list of dict rows (modified in place).

    Returns (echelon rows, pivots, transform rows).  Pivot of each row is
    its first nonzero column; rows are fully reduced.  Pivot rows are chosen
    shortest-first to limit fill-in, and integral entries are carried as ints.
    """
    n = len(rows)
    for i, row in enumerate(rows):
        rows[i] = {j: _shrink(v) for j, v in row.items() if v}
    tr = [{i: 1} for i in range(n)] if track else None
    occ = {}
    for i, row in enumerate(rows):
        for j in row:
            occ.setdefault(j, set()).add(i)
    used = [False] * n
    order = []
    pivots = []
    for col in range(ncols):
        if len(order) == n:
            break
        holders = occ.get(col)
        if not holders:
            continue
        cand = [i for i in holders if not used[i]]
        if not cand:
            continue
        sel = min(cand, key=lambda i: (len(rows[i]), i))
        prow = rows[sel]
        p = prow[col]
        if p != 1:
            inv = Fraction(1) / p
            for j in prow:
                prow[j] = _shrink(prow[j] * inv)
            if track:
                t = tr[sel]
                for j in t:
                    t[j] = _shrink(t[j] * inv)
        pitems = list(prow.items())
        titems = list(tr[sel].items()) if track else None
        for i in list(holders):
            if i == sel:
                continue
            row = rows[i]
            f = row[col]
            for j, v in pitems:
                nv = _shrink(row.get(j, 0) - f * v)
                if nv:
                    if j not in row:
                        occ.setdefault(j, set()).add(i)
                    row[j] = nv
                elif j in row:
                    del row[j]
                    occ[j].discard(i)
            if track:
                t = tr[i]
                for j, v in titems:
                    nv = _shrink(t.get(j, 0) - f * v)
                    if nv:
                        t[j] = nv
                    else:
                        t.pop(j, None)
        used[sel] = True
        order.append(sel)
        pivots.append(col)
    perm = order + [i for i in range(n) if not used[i]]
    rows[:] = [{j: Fraction(v) for j, v in rows[i].items()} for i in perm]
    if track:
        tr = [{j: Fraction(v) for j, v in tr[i].items()} for i in perm]
    return rows, pivots, tr


def _shrink(x):
    """Fraction with denominator 1 -> int (much faster arithmetic)."""
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


def rref(m: RationalMatrix):
    """Reduced row echelon form: returns (reduced, pivots, transform) with transform @ m == reduced."""
    rows = m.row_dicts()
    rows, pivots, tr = _eliminate(rows, m.cols, track=True)
    reduced = RationalMatrix.from_row_dicts(rows, m.cols)
    transform = RationalMatrix.from_row_dicts(tr, m.rows)
    return reduced, pivots, transform


def _rref_rows(m: RationalMatrix):
    rows, pivots, _ = _eliminate(m.row_dicts(), m.cols)
    return rows[:len(pivots)], pivots


def rank(m: RationalMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    # eliminate along the shorter side
    if m.rows < m.cols:
        return len(_eliminate(m.row_dicts(), m.cols)[1])
    return len(_eliminate(m.T.row_dicts(), m.rows)[1])


# --------------------------------------------------------------------------
# subspaces

class Subspace:
    """Subspace of Q^ambient_dim with a canonical (column-reduced) basis.

    Each basis vector has a 1 at its pivot coordinate and 0 at the other
    basis vectors' pivots, so coordinates of a member are read off at the
    pivots.
    """
    __slots__ = ("ambient_dim", "basis", "pivots", "_vecs")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        vecs = [tuple(to_fraction(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise ValueError("vector length %d, expected %d" % (len(v), ambient_dim))
        rows = [{j: x for j, x in enumerate(v) if x} for v in vecs]
        rows, piv, _ = _eliminate(rows, ambient_dim)
        rows = rows[:len(piv)]
        self.ambient_dim = ambient_dim
        self.pivots = tuple(piv)
        self._vecs = tuple(tuple(r.get(j, ZERO) for j in range(ambient_dim)) for r in rows)
        self.basis = RationalMatrix.from_columns(self._vecs, rows=ambient_dim)

    @classmethod
    def from_matrix_columns(cls, m: RationalMatrix) -> "Subspace":
        return cls(m.rows, m.columns())

    @property
    def dim(self) -> int:
        return len(self._vecs)

    def vectors(self) -> list:
        return list(self._vecs)

    def coordinates(self, v: Sequence):
        """Coordinates of v in the canonical basis, or None if v is not in the subspace."""
        v = [to_fraction(x) for x in v]
        c = [v[p] for p in self.pivots]
        recon = [ZERO] * self.ambient_dim
        for ci, b in zip(c, self._vecs):
            if ci:
                for j, x in enumerate(b):
                    if x:
                        recon[j] += ci * x
        return tuple(c) if recon == v else None

    def contains(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.vectors())

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim and self._vecs == other._vecs

    def __hash__(self):
        return hash((self.ambient_dim, self._vecs))

    def __repr__(self):
        return "Subspace(dim=%d in Q^%d)" % (self.dim, self.ambient_dim)

    def sum(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient_dim, self.vectors() + other.vectors())

    def intersection(self, other: "Subspace") -> "Subspace":
        # solve A x = B y
        a, b = self.basis, other.basis
        if self.dim == 0 or other.dim == 0:
            return Subspace(self.ambient_dim)
        k = kernel_basis(hstack([a, -b]))
        return Subspace(self.ambient_dim, [a @ v[:self.dim] for v in k.vectors()])

    def complement_in(self, larger: "Subspace | None" = None) -> list:
        """Canonical complement vectors: members of `larger` (default: everything) not in self."""
        cand = larger.vectors() if larger is not None else [
            tuple(ONE if i == j else ZERO for i in range(self.ambient_dim)) for j in range(self.ambient_dim)]
        return extend_basis(self.vectors(), cand)


def extend_basis(start: Sequence[Sequence], candidates: Sequence[Sequence]) -> list:
    """Greedily pick candidates that are independent of start and of previously picked ones."""
    if not candidates:
        return []
    n = len(candidates[0]) if candidates else 0
    rows = [{j: to_fraction(x) for j, x in enumerate(v) if x} for v in start]
    rows, piv, _ = _eliminate(rows, n)
    basis = {p: r for p, r in zip(piv, rows[:len(piv)])}
    picked = []
    for cnd in candidates:
        v = {j: to_fraction(x) for j, x in enumerate(cnd) if x}
        v = _reduce(v, basis)
        if v:
            p = min(v)
            inv = ONE / v[p]
            v = {j: x * inv for j, x in v.items()}
            # keep basis fully reduced at the new pivot
            for q, r in basis.items():
                f = r.get(p)
                if f:
                    for j, x in v.items():
                        nv = r.get(j, ZERO) - f * x
                        if nv:
                            r[j] = nv
                        else:
                            r.pop(j, None)
            basis[p] = v
            picked.append(tuple(to_fraction(x) for x in cnd))
    return picked


def _reduce(v: dict, basis: dict) -> dict:
    """Reduce a sparse vector against a fully reduced pivot basis {pivot: row}."""
    v = dict(v)
    for p, r in basis.items():
        f = v.get(p)
        if f:
            for j, x in r.items():
                nv = v.get(j, ZERO) - f * x
                if nv:
                    v[j] = nv
                else:
                    v.pop(j, None)
    return v


def kernel_basis(m: RationalMatrix) -> Subspace:
    rows, piv = _rref_rows(m)
    pivset = set(piv)
    vecs = []
    for f in range(m.cols):
        if f in pivset:
            continue
        x = [ZERO] * m.cols
        x[f] = ONE
        for r, p in zip(rows, piv):
            v = r.get(f)
            if v:
                x[p] = -v
        vecs.append(x)
    return Subspace(m.cols, vecs)


def image_basis(m: RationalMatrix) -> Subspace:
    return Subspace(m.rows, m.columns())


class _NoSolution:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "NO_SOLUTION"

    def __bool__(self):
        return False


NO_SOLUTION = _NoSolution()


def solve(m: RationalMatrix, b: Sequence):
    """Particular solution of m x = b with free variables 0, or NO_SOLUTION."""
    sols = solve_many(m, [b])
    return sols[0]


def solve_many(m: RationalMatrix, bs: Sequence[Sequence]) -> list:
    bs = [[to_fraction(x) for x in b] for b in bs]
    for b in bs:
        if len(b) != m.rows:
            raise ValueError("right-hand side has length %d, expected %d" % (len(b), m.rows))
    k = len(bs)
    rows = []
    for i in range(m.rows):
        d = {j: v for j, v in enumerate(m.row(i)) if v}
        for t, b in enumerate(bs):
            if b[i]:
                d[m.cols + t] = b[i]
        rows.append(d)
    rows, piv, _ = _eliminate(rows, m.cols)
    out = []
    nr = len(piv)
    for t in range(k):
        col = m.cols + t
        # inconsistent if some zero row has a nonzero rhs
        if any(col in rows[i] for i in range(nr, len(rows))):
            out.append(NO_SOLUTION)
            continue
        x = [ZERO] * m.cols
        for i, p in enumerate(piv):
            x[p] = rows[i].get(col, ZERO)
        out.append(tuple(x))
    return out


def inverse(m: RationalMatrix) -> RationalMatrix:
    if not m.is_square():
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    if n == 0:
        return RationalMatrix.zeros(0, 0)
    cols = solve_many(m, RationalMatrix.identity(n).columns())
    if any(c is NO_SOLUTION for c in cols) or rank(m) < n:
        raise ValueError("matrix is singular")
    return RationalMatrix.from_columns(cols, rows=n)


def nullity(m: RationalMatrix) -> int:
    return m.cols - rank(m)


# --------------------------------------------------------------------------
# symmetric forms

class SymmetricForm:
    __slots__ = ("matrix",)

    def __init__(self, matrix):
        if not isinstance(matrix, RationalMatrix):
            matrix = RationalMatrix(matrix)
        if not matrix.is_symmetric():
            raise ValueError("matrix is not symmetric")
        self.matrix = matrix

    @property
    def dim(self) -> int:
        return self.matrix.rows

    def __call__(self, v, w):
        return sum((a * b for a, b in zip(v, self.matrix @ list(w))), ZERO)

    def __repr__(self):
        return "SymmetricForm(%r)" % (self.matrix,)


class Signature(NamedTuple):
    n_plus: int
    n_minus: int
    n_zero: int

    @property
    def sigma(self) -> int:
        return self.n_plus - self.n_minus


def diagonalize_symmetric(s) -> tuple:
    """Lagrange diagonalization: returns (p, d) with p.T @ s @ p == d diagonal and p invertible."""
    if not isinstance(s, SymmetricForm):
        s = SymmetricForm(s)
    n = s.dim
    a = [list(r) for r in s.matrix.tolist()]
    p = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]

    def add_multiple(j, i, c):
        # basis change e_j <- e_j + c e_i  (congruence by elementary matrix)
        for r in range(n):
            p[r][j] += c * p[r][i]
        for r in range(n):
            a[r][j] += c * a[r][i]
        for r in range(n):
            a[j][r] += c * a[i][r]

    def swap(i, j):
        for r in range(n):
            p[r][i], p[r][j] = p[r][j], p[r][i]
        a[i], a[j] = a[j], a[i]
        for r in range(n):
            a[r][i], a[r][j] = a[r][j], a[r][i]

    for i in range(n):
        if a[i][i] == 0:
            j = next((j for j in range(i + 1, n) if a[j][j] != 0), None)
            if j is not None:
                swap(i, j)
            else:
                j = next((j for j in range(i + 1, n) if a[i][j] != 0), None)
                if j is None:
                    continue
                # hyperbolic pair: e_i + e_j has square 2 a_ij != 0
                add_multiple(i, j, ONE)
        piv = a[i][i]
        for j in range(i + 1, n):
            if a[i][j]:
                add_multiple(j, i, -a[i][j] / piv)
    pm = RationalMatrix(p)
    d = RationalMatrix(a)
    return pm, d


def signature(s) -> Signature:
    _, d = diagonalize_symmetric(s)
    diag = [d[i, i] for i in range(d.rows)]
    return Signature(sum(1 for x in diag if x > 0), sum(1 for x in diag if x < 0), sum(1 for x in diag if x == 0))


def is_diagonal(m: RationalMatrix) -> bool:
    return all(not m[i, j] for i in range(m.rows) for j in range(m.cols) if i != j)
