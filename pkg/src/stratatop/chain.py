"""Chain complexes over Q: homology, maps, cones, pushouts, truncation, tensor, (co)invariants.

Sign conventions (fixed once, used everywhere):
  cone(f: S -> T)_r   = T_r + S_{r-1},         d(t, s)     = (dt - f s, -ds)
  pushout(f1, f2)_r   = Y1_r + Y2_r + X_{r-1}, d(y1,y2,x)  = (dy1 - f1 x, dy2 + f2 x, -dx)
  tensor              d(a (x) b) = da (x) b + (-1)^p a (x) db,  p = deg a
Connecting maps H_r(cone) -> H_{r-1}(S) and H_r(P) -> H_{r-1}(X) send (.., s) to [s].
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .qla import (ONE, ZERO, NO_SOLUTION, RationalMatrix, Subspace, _eliminate, _reduce, block_diag,
                  extend_basis, hstack, kernel_basis, rank, solve_many, vstack)


class ChainComplexError(ValueError):
    pass


class ChainComplex:
    """Finite chain complex: dims[r] for r = 0..top_degree, boundary(r): C_r -> C_{r-1}."""

    def __init__(self, dims: Sequence[int], boundaries: dict | Sequence | None = None, check: bool = True,
                 labels: dict | None = None):
        dims = [int(d) for d in dims]
        while dims and dims[-1] == 0:
            dims.pop()
        if any(d < 0 for d in dims):
            raise ChainComplexError("negative dimension")
        self.dims = tuple(dims)
        self.top_degree = len(dims) - 1
        bd = {}
        if boundaries is None:
            boundaries = {}
        if not isinstance(boundaries, dict):
            boundaries = {r + 1: m for r, m in enumerate(boundaries)}
        for r, m in boundaries.items():
            r = int(r)
            if not isinstance(m, RationalMatrix):
                m = RationalMatrix(m, rows=self.dim(r - 1), cols=self.dim(r))
            if m.shape != (self.dim(r - 1), self.dim(r)):
                raise ChainComplexError("boundary in degree %d has shape %s, expected %s"
                                        % (r, m.shape, (self.dim(r - 1), self.dim(r))))
            if r <= 0 or r > self.top_degree:
                if not m.is_zero():
                    raise ChainComplexError("nonzero boundary outside degrees 1..top in degree %d" % r)
                continue
            bd[r] = m
        self._bd = bd
        self.labels = labels or {}
        self._cache = {}
        if check:
            for r in range(2, self.top_degree + 1):
                if not (self.boundary(r - 1) @ self.boundary(r)).is_zero():
                    raise ChainComplexError("boundary composite nonzero in degree %d" % r)

    def dim(self, r: int) -> int:
        return self.dims[r] if 0 <= r <= self.top_degree else 0

    def boundary(self, r: int) -> RationalMatrix:
        m = self._bd.get(r)
        if m is None:
            m = RationalMatrix.zeros(self.dim(r - 1), self.dim(r))
        return m

    def degrees(self) -> range:
        return range(0, self.top_degree + 1)

    def is_empty(self) -> bool:
        return self.top_degree < 0

    def betti(self) -> tuple:
        return tuple(homology(self, r).dim for r in self.degrees())

    def euler_characteristic(self) -> int:
        return sum((-1) ** r * d for r, d in enumerate(self.dims))

    def __repr__(self):
        return "ChainComplex(dims=%s)" % (list(self.dims),)

    def to_json(self) -> dict:
        return {"dims": list(self.dims),
                "boundaries": {str(r): self.boundary(r).to_json() for r in range(1, self.top_degree + 1)}}

    @classmethod
    def from_json(cls, obj: dict) -> "ChainComplex":
        if "dims" not in obj:
            raise ChainComplexError("chain complex JSON needs 'dims'")
        dims = obj["dims"]
        bds = {}
        raw = obj.get("boundaries", {})
        items = raw.items() if isinstance(raw, dict) else enumerate(raw, start=1)
        for r, m in items:
            r = int(r)
            try:
                bds[r] = RationalMatrix.from_json(m) if isinstance(m, dict) else RationalMatrix(
                    m, rows=dims[r - 1] if 0 <= r - 1 < len(dims) else 0, cols=dims[r] if r < len(dims) else 0)
            except (ValueError, IndexError) as e:
                raise ChainComplexError("boundary in degree %d: %s" % (r, e)) from None
        return cls(dims, bds)


def zero_complex() -> ChainComplex:
    return ChainComplex([])


def point_complex() -> ChainComplex:
    return ChainComplex([1])


class ChainMap:
    def __init__(self, source: ChainComplex, target: ChainComplex, components: dict | None = None,
                 check: bool = True):
        self.source = source
        self.target = target
        comps = {}
        for r, m in (components or {}).items():
            r = int(r)
            if not isinstance(m, RationalMatrix):
                m = RationalMatrix(m, rows=target.dim(r), cols=source.dim(r))
            if m.shape != (target.dim(r), source.dim(r)):
                raise ChainComplexError("chain map component in degree %d has shape %s, expected %s"
                                        % (r, m.shape, (target.dim(r), source.dim(r))))
            comps[r] = m
        self._c = comps
        self._cache = {}
        if check:
            top = max(source.top_degree, target.top_degree)
            for r in range(1, top + 1):
                lhs = target.boundary(r) @ self[r]
                rhs = self[r - 1] @ source.boundary(r)
                if lhs != rhs:
                    raise ChainComplexError("not a chain map: d f != f d in degree %d" % r)

    def __getitem__(self, r: int) -> RationalMatrix:
        m = self._c.get(r)
        if m is None:
            m = RationalMatrix.zeros(self.target.dim(r), self.source.dim(r))
        return m

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self o other."""
        top = max(other.source.top_degree, self.target.top_degree)
        return ChainMap(other.source, self.target, {r: self[r] @ other[r] for r in range(0, top + 1)}, check=False)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        top = max(self.source.top_degree, self.target.top_degree)
        return ChainMap(self.source, self.target, {r: self[r] - other[r] for r in range(top + 1)}, check=False)

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target, {r: m.scale(c) for r, m in self._c.items()}, check=False)

    def __repr__(self):
        return "ChainMap(%r -> %r)" % (self.source, self.target)

    def to_json(self) -> dict:
        top = max(self.source.top_degree, self.target.top_degree)
        return {"components": {str(r): self[r].to_json() for r in range(top + 1)}}


def identity_map(c: ChainComplex) -> ChainMap:
    return ChainMap(c, c, {r: RationalMatrix.identity(c.dim(r)) for r in c.degrees()}, check=False)


def zero_map(s: ChainComplex, t: ChainComplex) -> ChainMap:
    return ChainMap(s, t, {}, check=False)


# --------------------------------------------------------------------------
# homology

@dataclass(frozen=True)
class HomologyBasis:
    """Canonical homology basis in one degree.

    reps: columns are cycles; projection: rows are cocycles with
    projection @ reps = I and projection @ boundaries = 0.  Rows of the
    projection therefore also represent the dual basis of H^r.
    """
    degree: int
    reps: RationalMatrix
    projection: RationalMatrix
    ambient: int

    @property
    def dim(self) -> int:
        return self.reps.cols

    def coords(self, cycle) -> tuple:
        return self.projection @ list(cycle)

    def rep(self, i: int) -> tuple:
        return self.reps.column(i)

    def class_of(self, coords) -> tuple:
        return self.reps @ list(coords)


def _sparse_cols(m: RationalMatrix) -> list:
    return m.T.row_dicts()


def _homology_core(cycle_cond: RationalMatrix, incoming: RationalMatrix, ambient: int, degree: int) -> HomologyBasis:
    """H = ker(cycle_cond) / im(incoming), canonical representatives and projection."""
    # boundaries: fully reduced basis of the column space of `incoming`
    brows, bpiv, _ = _eliminate(_sparse_cols(incoming), ambient) if incoming.cols else ([], [], None)
    E = {p: r for p, r in zip(bpiv, brows[:len(bpiv)])}
    # cycles
    zrows, zpiv, _ = _eliminate(cycle_cond.row_dicts(), ambient) if cycle_cond.rows else ([], [], None)
    zrows = zrows[:len(zpiv)]
    pivset = set(zpiv)
    h = ambient - len(zpiv) - len(bpiv)
    R = {}
    if h > 0:
        for f in range(ambient):
            if f in pivset:
                continue
            v = {f: ONE}
            for r, p in zip(zrows, zpiv):
                x = r.get(f)
                if x:
                    v[p] = -x
            v = _reduce(v, E)
            v = _reduce(v, R)
            if not v:
                continue
            p = min(v)
            inv = ONE / v[p]
            v = {j: x * inv for j, x in v.items()}
            for q, r in R.items():
                fct = r.get(p)
                if fct:
                    for j, x in v.items():
                        nv = r.get(j, ZERO) - fct * x
                        if nv:
                            r[j] = nv
                        else:
                            r.pop(j, None)
            R[p] = v
            if len(R) == h:
                break
    if len(R) != max(h, 0):
        raise ChainComplexError("homology computation inconsistent in degree %d (d d != 0?)" % degree)
    rp = sorted(R)
    reps = RationalMatrix.from_columns([[R[p].get(j, ZERO) for j in range(ambient)] for p in rp], rows=ambient)
    proj_rows = []
    for p in rp:
        row = {p: ONE}
        for q, e in E.items():
            x = e.get(p)
            if x:
                row[q] = row.get(q, ZERO) - x
        proj_rows.append(row)
    projection = RationalMatrix.from_row_dicts(proj_rows, ambient)
    return HomologyBasis(degree, reps, projection, ambient)


def homology(c: ChainComplex, r: int) -> HomologyBasis:
    key = ("H", r)
    hb = c._cache.get(key)
    if hb is None:
        hb = _homology_core(c.boundary(r), c.boundary(r + 1), c.dim(r), r)
        c._cache[key] = hb
    return hb


def augmentation(c: ChainComplex) -> RationalMatrix:
    return RationalMatrix([[ONE] * c.dim(0)], rows=1, cols=c.dim(0))


def is_augmented(c: ChainComplex) -> bool:
    return c.dim(0) > 0 and (augmentation(c) @ c.boundary(1)).is_zero()


def reduced_homology(c: ChainComplex, r: int) -> HomologyBasis:
    """H~_r: degree 0 uses the kernel of the sum-of-coefficients augmentation."""
    if r != 0 or c.dim(0) == 0:
        return homology(c, r)
    key = ("Hred", 0)
    hb = c._cache.get(key)
    if hb is None:
        if not is_augmented(c):
            raise ChainComplexError("sum-of-coefficients augmentation does not vanish on boundaries")
        hb = _homology_core(augmentation(c), c.boundary(1), c.dim(0), 0)
        c._cache[key] = hb
    return hb


def betti(c: ChainComplex, reduced: bool = False) -> tuple:
    f = reduced_homology if reduced else homology
    return tuple(f(c, r).dim for r in c.degrees())


def induced_map(f: ChainMap, r: int, reduced: bool = False) -> RationalMatrix:
    """Matrix of f_*: H_r(source) -> H_r(target) in the canonical bases."""
    key = ("ind", r, reduced)
    m = f._cache.get(key)
    if m is None:
        hs = (reduced_homology if reduced else homology)(f.source, r)
        ht = (reduced_homology if reduced else homology)(f.target, r)
        if hs.dim == 0 or ht.dim == 0:
            m = RationalMatrix.zeros(ht.dim, hs.dim)
        else:
            img = f[r] @ hs.reps
            # images of cycles must be cycles
            if not (f.target.boundary(r) @ img).is_zero():
                raise ChainComplexError("map does not send cycles to cycles in degree %d" % r)
            m = ht.projection @ img
        f._cache[key] = m
    return m


def cohomology_map(f: ChainMap, r: int) -> RationalMatrix:
    """f^*: H^r(target) -> H^r(source) in the dual bases (transpose of f_*)."""
    return induced_map(f, r).T


# --------------------------------------------------------------------------
# exact sequences

@dataclass
class ExactSequenceReport:
    """Nodes (label, degree, dim), maps between consecutive nodes, exactness verdicts per node."""
    nodes: list
    maps: list
    verdicts: list = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return all(self.verdicts)

    def failures(self) -> list:
        return [self.nodes[i] for i, v in enumerate(self.verdicts) if not v]

    def to_json(self) -> dict:
        return {"nodes": [{"space": n[0], "degree": n[1], "dim": n[2]} for n in self.nodes],
                "exact": self.exact, "verdicts": list(self.verdicts)}


def check_exact(nodes: list, maps: list) -> ExactSequenceReport:
    """maps[i]: node i -> node i+1. Verdict at inner nodes: composite zero and rank in + rank out = dim."""
    verdicts = []
    for i in range(len(nodes)):
        dim = nodes[i][2]
        inc = maps[i - 1] if i > 0 else None
        out = maps[i] if i < len(maps) else None
        if inc is None or out is None:
            # end nodes: nothing to verify beyond shapes
            verdicts.append(True)
            continue
        if inc.rows != dim or out.cols != dim:
            verdicts.append(False)
            continue
        comp_zero = (out @ inc).is_zero() if inc.cols and out.rows else True
        verdicts.append(comp_zero and rank(inc) + rank(out) == dim)
    return ExactSequenceReport(nodes, maps, verdicts)


# --------------------------------------------------------------------------
# cones and pushouts

@dataclass
class Cone:
    """Mapping cone of f: S -> T with its inclusion T -> cone."""
    f: ChainMap
    cone: ChainComplex
    incl: ChainMap

    def __iter__(self):
        return iter((self.cone, self.incl, self))

    def source_part(self, r: int) -> RationalMatrix:
        """Projection cone_r -> S_{r-1}."""
        t = self.f.target.dim(r)
        s = self.f.source.dim(r - 1)
        return hstack([RationalMatrix.zeros(s, t), RationalMatrix.identity(s)]) if t or s else RationalMatrix.zeros(0, 0)

    def connecting(self, r: int) -> RationalMatrix:
        """delta: H_r(cone) -> H_{r-1}(S), (t, s) -> [s]."""
        hc = homology(self.cone, r)
        hs = homology(self.f.source, r - 1)
        if hc.dim == 0 or hs.dim == 0:
            return RationalMatrix.zeros(hs.dim, hc.dim)
        return hs.projection @ (self.source_part(r) @ hc.reps)

    def les(self) -> ExactSequenceReport:
        top = self.cone.top_degree
        nodes, maps = [], []
        for r in range(top, -1, -1):
            nodes += [("S", r, homology(self.f.source, r).dim), ("T", r, homology(self.f.target, r).dim),
                      ("cone", r, homology(self.cone, r).dim)]
            maps += [induced_map(self.f, r), induced_map(self.incl, r)]
            if r > 0:
                maps.append(self.connecting(r))
        return check_exact(nodes, maps)


def mapping_cone(f: ChainMap) -> Cone:
    S, T = f.source, f.target
    top = max(T.top_degree, S.top_degree + 1)
    dims = [T.dim(r) + S.dim(r - 1) for r in range(top + 1)]
    bds = {}
    for r in range(1, top + 1):
        top_row = hstack([T.boundary(r), -f[r - 1]])
        bot_row = hstack([RationalMatrix.zeros(S.dim(r - 2), T.dim(r)), -S.boundary(r - 1)])
        bds[r] = vstack([top_row, bot_row])
    cone = ChainComplex(dims, bds, check=False)
    incl = ChainMap(T, cone, {r: vstack([RationalMatrix.identity(T.dim(r)),
                                         RationalMatrix.zeros(S.dim(r - 1), T.dim(r))])
                              for r in range(top + 1)}, check=False)
    return Cone(f, cone, incl)


@dataclass
class Pushout:
    f1: ChainMap
    f2: ChainMap
    P: ChainComplex
    xi1: ChainMap
    xi2: ChainMap

    def __iter__(self):
        return iter((self.P, self.xi1, self.xi2))

    def connecting(self, r: int, reduced: bool = False) -> RationalMatrix:
        X, Y1, Y2 = self.f1.source, self.f1.target, self.f2.target
        hp = (reduced_homology if reduced else homology)(self.P, r)
        hx = (reduced_homology if reduced else homology)(X, r - 1)
        if hp.dim == 0 or hx.dim == 0:
            return RationalMatrix.zeros(hx.dim, hp.dim)
        a, b, c = Y1.dim(r), Y2.dim(r), X.dim(r - 1)
        proj = hstack([RationalMatrix.zeros(c, a + b), RationalMatrix.identity(c)])
        return hx.projection @ (proj @ hp.reps)


def homotopy_pushout(f1: ChainMap, f2: ChainMap) -> Pushout:
    """Double mapping cylinder of Y1 <- X -> Y2."""
    X = f1.source
    if f2.source is not X and f2.source.dims != X.dims:
        raise ChainComplexError("pushout maps need a common source")
    if sum(X.dims) == 0:
        raise ChainComplexError("pushout over an empty complex is not allowed")
    Y1, Y2 = f1.target, f2.target
    top = max(Y1.top_degree, Y2.top_degree, X.top_degree + 1)
    dims = [Y1.dim(r) + Y2.dim(r) + X.dim(r - 1) for r in range(top + 1)]
    bds = {}
    for r in range(1, top + 1):
        a0, b0 = Y1.dim(r), Y2.dim(r)
        a1, b1, c1 = Y1.dim(r - 1), Y2.dim(r - 1), X.dim(r - 2)
        Z = RationalMatrix.zeros
        row1 = hstack([Y1.boundary(r), Z(a1, b0), -f1[r - 1]])
        row2 = hstack([Z(b1, a0), Y2.boundary(r), f2[r - 1]])
        row3 = hstack([Z(c1, a0), Z(c1, b0), -X.boundary(r - 1)])
        bds[r] = vstack([row1, row2, row3])
    P = ChainComplex(dims, bds, check=False)
    Z = RationalMatrix.zeros
    xi1 = ChainMap(Y1, P, {r: vstack([RationalMatrix.identity(Y1.dim(r)), Z(Y2.dim(r) + X.dim(r - 1), Y1.dim(r))])
                           for r in range(top + 1)}, check=False)
    xi2 = ChainMap(Y2, P, {r: vstack([Z(Y1.dim(r), Y2.dim(r)), RationalMatrix.identity(Y2.dim(r)),
                                      Z(X.dim(r - 1), Y2.dim(r))]) for r in range(top + 1)}, check=False)
    return Pushout(f1, f2, P, xi1, xi2)


def mayer_vietoris(po: Pushout, reduced: bool = False) -> ExactSequenceReport:
    """H_r(X) -> H_r(Y1)+H_r(Y2) -> H_r(P) -> H_{r-1}(X) -> ..., exactness verified at every node."""
    X, Y1, Y2, P = po.f1.source, po.f1.target, po.f2.target, po.P
    if reduced:
        for name, c in (("X", X), ("Y1", Y1), ("Y2", Y2)):
            if not is_augmented(c):
                raise ChainComplexError("reduced sequence needs augmented complexes (%s)" % name)
        for f in (po.f1, po.f2):
            if augmentation(f.target) @ f[0] != augmentation(f.source):
                raise ChainComplexError("reduced sequence needs augmentation-preserving maps")
    H = reduced_homology if reduced else homology
    top = P.top_degree
    nodes, maps = [], []
    for r in range(top, -1, -1):
        hx, h1, h2, hp = H(X, r).dim, H(Y1, r).dim, H(Y2, r).dim, H(P, r).dim
        nodes += [("X", r, hx), ("Y1+Y2", r, h1 + h2), ("P", r, hp)]
        alpha = vstack([induced_map(po.f1, r, reduced), induced_map(po.f2, r, reduced)], cols=hx)
        beta = hstack([induced_map(po.xi1, r, reduced), -induced_map(po.xi2, r, reduced)], rows=hp)
        maps += [alpha, beta]
        if r > 0:
            maps.append(po.connecting(r, reduced))
    return check_exact(nodes, maps)


# --------------------------------------------------------------------------
# group actions

class GroupChainAction:
    """Finite group acting on a chain complex through chain automorphisms."""

    def __init__(self, complex: ChainComplex, order: int, generators: Sequence, check: bool = True):
        self.complex = complex
        self.order = int(order)
        gens = []
        for g in generators:
            if not isinstance(g, ChainMap):
                g = ChainMap(complex, complex, g)
            if g.source.dims != complex.dims or g.target.dims != complex.dims:
                raise ChainComplexError("generator is not a self-map of the complex")
            gens.append(g)
        self.generators = gens
        self._elements = None
        if check:
            self.verify()

    def _key(self, mats):
        # Fraction.__hash__ is slow; key on integer pairs instead
        return tuple(tuple((x.numerator, x.denominator) for row in m._data for x in row) for m in mats)

    def _signed_images(self, g: ChainMap, r: int):
        """Column j of g[r] as (row, sign), or None if g[r] is not a signed permutation."""
        m = g[r]
        img = [None] * m.cols
        for i, row in enumerate(m.nonzero_rows()):
            for j, v in row:
                if img[j] is not None or abs(v) != 1:
                    return None
                img[j] = (i, v)
        if any(x is None for x in img):
            return None
        return tuple(img)

    def elements(self) -> list:
        """All group elements as tuples of per-degree matrices (closure of the generators)."""
        if self._elements is not None:
            return self._elements
        degs = list(self.complex.degrees())
        if self.is_signed_permutation():
            # close up on (row, sign) images, which is far cheaper than dense products
            ident = tuple(tuple((j, ONE) for j in range(self.complex.dim(r))) for r in degs)
            gens = [tuple(self._signed_images(g, r) for r in degs) for g in self.generators]

            def mul(g, e):
                return tuple(tuple((gd[i][0], gd[i][1] * s) for i, s in ed) for gd, ed in zip(g, e))

            def to_mats(e):
                return tuple(RationalMatrix.from_sparse(len(ed), len(ed), {(i, j): s for j, (i, s) in enumerate(ed)})
                             for ed in e)
            key, build = (lambda e: e), to_mats
        else:
            ident = tuple(RationalMatrix.identity(self.complex.dim(r)) for r in degs)
            gens = [tuple(g[r] for r in degs) for g in self.generators]

            def mul(g, e):
                return tuple(a @ b for a, b in zip(g, e))
            key, build = self._key, (lambda e: e)
        seen = {key(ident): ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for e in frontier:
                for g in gens:
                    p = mul(g, e)
                    k = key(p)
                    if k not in seen:
                        seen[k] = p
                        nxt.append(p)
                        if len(seen) > self.order:
                            raise ChainComplexError("generators produce more than %d elements" % self.order)
            frontier = nxt
        self._elements = [build(e) for e in seen.values()]
        return self._elements

    def verify(self) -> None:
        # the image of the group may be a proper quotient, so its size must divide the order
        els = self.elements()
        if self.order % len(els):
            raise ChainComplexError("generators produce %d elements, declared order %d" % (len(els), self.order))

    def element_maps(self, r: int) -> list:
        return [e[r] for e in self.elements()] if 0 <= r <= self.complex.top_degree else []

    def reynolds(self, r: int) -> RationalMatrix:
        mats = self.element_maps(r)
        n = self.complex.dim(r)
        acc = RationalMatrix.zeros(n, n)
        for m in mats:
            acc = acc + m
        return acc.scale(Fraction(1, len(mats))) if mats else acc

    def is_signed_permutation(self) -> bool:
        if getattr(self, "_signed", None) is None:
            self._signed = all(self._signed_images(g, r) is not None
                                for g in self.generators for r in self.complex.degrees())
        return self._signed

    def homology_action(self, r: int) -> list:
        return [induced_map(g, r) for g in self.generators]


def trivial_action(c: ChainComplex) -> GroupChainAction:
    return GroupChainAction(c, 1, [identity_map(c)])


def _signed_orbits(action: GroupChainAction, r: int):
    """Orbits of basis vectors under signed permutations: list of (members [(idx, sign)], alive)."""
    n = action.complex.dim(r)
    gens = [action._signed_images(g, r) for g in action.generators]
    sign = [None] * n
    orbits = []
    for start in range(n):
        if sign[start] is not None:
            continue
        sign[start] = ONE
        members = [start]
        alive = True
        stack = [start]
        while stack:
            j = stack.pop()
            for img in gens:
                i, s = img[j]
                want = s * sign[j]
                if sign[i] is None:
                    sign[i] = want
                    members.append(i)
                    stack.append(i)
                elif sign[i] != want:
                    alive = False
        orbits.append(([(i, sign[i]) for i in sorted(members)], alive))
    return orbits


@dataclass
class QuotientData:
    complex: ChainComplex
    # map into / out of the original complex, per degree
    to_original: dict
    from_original: dict


def invariants(c: ChainComplex, action: GroupChainAction) -> tuple:
    """Subcomplex of invariant chains, with its inclusion map."""
    if action.complex is not c and action.complex.dims != c.dims:
        raise ChainComplexError("action is not on this complex")
    bases = {}
    if action.is_signed_permutation():
        for r in c.degrees():
            vecs = []
            for members, alive in _signed_orbits(action, r):
                if alive:
                    v = [ZERO] * c.dim(r)
                    for i, s in members:
                        v[i] = s
                    vecs.append(v)
            bases[r] = vecs
    else:
        for r in c.degrees():
            n = c.dim(r)
            stack = [g[r] - RationalMatrix.identity(n) for g in action.generators]
            cond = vstack(stack, cols=n) if stack else RationalMatrix.zeros(0, n)
            bases[r] = kernel_basis(cond).vectors()
    incl = {r: RationalMatrix.from_columns(bases[r], rows=c.dim(r)) for r in c.degrees()}
    dims = [len(bases[r]) for r in c.degrees()]
    bds = {}
    for r in range(1, c.top_degree + 1):
        if not dims[r] or not dims[r - 1]:
            continue
        imgs = (c.boundary(r) @ incl[r]).columns()
        sols = solve_many(incl[r - 1], imgs)
        if any(s is NO_SOLUTION for s in sols):
            raise ChainComplexError("invariant chains not preserved by the boundary in degree %d" % r)
        bds[r] = RationalMatrix.from_columns(sols, rows=dims[r - 1])
    inv = ChainComplex(dims, {r: m for r, m in bds.items()}, check=False)
    return inv, ChainMap(inv, c, {r: incl[r] for r in c.degrees()}, check=False)


def coinvariants(c: ChainComplex, action: GroupChainAction) -> tuple:
    """Quotient complex C / <g x - x>, with the quotient map c -> coinvariants."""
    if action.complex is not c and action.complex.dims != c.dims:
        raise ChainComplexError("action is not on this complex")
    proj = {}
    sections_fast = {}
    if action.is_signed_permutation():
        for r in c.degrees():
            alive = [members for members, ok in _signed_orbits(action, r) if ok]
            ent = {}
            for k, members in enumerate(alive):
                for i, s in members:
                    ent[(k, i)] = s
            proj[r] = RationalMatrix.from_sparse(len(alive), c.dim(r), ent)
            # section: the first member of each orbit, with its sign
            sections_fast[r] = RationalMatrix.from_sparse(c.dim(r), len(alive),
                                                          {(m[0][0], k): m[0][1] for k, m in enumerate(alive)})
    else:
        for r in c.degrees():
            n = c.dim(r)
            rel = []
            for g in action.generators:
                rel += (g[r] - RationalMatrix.identity(n)).columns()
            U = Subspace(n, rel)
            std = [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]
            comp = extend_basis(U.vectors(), std)
            full = RationalMatrix.from_columns(U.vectors() + comp, rows=n) if n else RationalMatrix.zeros(0, 0)
            if n:
                from .qla import inverse
                inv_full = inverse(full)
                proj[r] = inv_full.submatrix(rows=range(U.dim, n))
            else:
                proj[r] = RationalMatrix.zeros(0, 0)
    dims = [proj[r].rows for r in c.degrees()]
    # section: pick for each quotient coordinate a preimage; proj @ d @ section is the induced boundary
    sections = dict(sections_fast)
    for r in c.degrees():
        if r in sections:
            continue
        sols = solve_many(proj[r], RationalMatrix.identity(dims[r]).columns()) if dims[r] else []
        sections[r] = RationalMatrix.from_columns(sols, rows=c.dim(r)) if dims[r] else RationalMatrix.zeros(c.dim(r), 0)
    bds = {r: proj[r - 1] @ c.boundary(r) @ sections[r] for r in range(1, c.top_degree + 1)}
    q = ChainComplex(dims, bds, check=True)
    quot = ChainMap(c, q, proj, check=True)
    quot.section = sections  # degreewise right inverses, not chain maps in general
    return q, quot


def invariant_homology_dims(c: ChainComplex, action: GroupChainAction) -> tuple:
    """dim H_r(c)^G via the induced action on canonical homology bases."""
    out = []
    for r in c.degrees():
        h = homology(c, r).dim
        if h == 0:
            out.append(0)
            continue
        mats = [m - RationalMatrix.identity(h) for m in action.homology_action(r)]
        out.append(h - rank(vstack(mats, cols=h)) if mats else h)
    return tuple(out)


def transfer_report(c: ChainComplex, action: GroupChainAction) -> dict:
    inv, _ = invariants(c, action)
    coinv, _ = coinvariants(c, action)
    a = tuple(homology(inv, r).dim for r in c.degrees())
    b = tuple(homology(coinv, r).dim for r in c.degrees())
    g = invariant_homology_dims(c, action)
    return {"invariants": a, "coinvariants": b, "homology_invariants": g, "agree": a == b == g}


# --------------------------------------------------------------------------
# truncation

@dataclass
class Truncation:
    k: int
    complex: ChainComplex
    incl: ChainMap
    action: GroupChainAction | None = None

    def __iter__(self):
        return iter((self.complex, self.incl))


def _complement_by_pivots(d: RationalMatrix) -> list:
    """Standard basis vectors at the pivot columns of d: a complement of ker d."""
    _, piv, _ = _eliminate(d.row_dicts(), d.cols)
    n = d.cols
    return [[ONE if i == p else ZERO for i in range(n)] for p in piv]


def truncate(c: ChainComplex, k: int, action: GroupChainAction | None = None) -> Truncation:
    """Chain-level Moore truncation: t_r = c_r (r<k), t_k = complement of ker d_k, t_r = 0 (r>k)."""
    if k < 0:
        t = zero_complex()
        return Truncation(k, t, zero_map(t, c), None)
    dk = c.boundary(k)
    if action is None:
        W = _complement_by_pivots(dk)
    else:
        n = c.dim(k)
        K = kernel_basis(dk)
        # projection onto ker along the pivot complement, then average
        comp = _complement_by_pivots(dk)
        if n:
            full = RationalMatrix.from_columns(K.vectors() + comp, rows=n)
            from .qla import inverse
            coords = inverse(full)
            proj = RationalMatrix.from_columns(K.vectors(), rows=n) @ coords.submatrix(rows=range(K.dim)) \
                if K.dim else RationalMatrix.zeros(n, n)
            avg = RationalMatrix.zeros(n, n)
            els = action.element_maps(k)
            for g in els:
                from .qla import inverse as inv_
                avg = avg + g @ proj @ inv_(g)
            avg = avg.scale(Fraction(1, len(els)))
            W = kernel_basis(avg).vectors()
        else:
            W = []
    dims = [c.dim(r) for r in range(k)] + [len(W)]
    Wm = RationalMatrix.from_columns(W, rows=c.dim(k))
    bds = {r: c.boundary(r) for r in range(1, k)}
    if k >= 1:
        bds[k] = c.boundary(k) @ Wm
    t = ChainComplex(dims, bds, check=False)
    comps = {r: RationalMatrix.identity(c.dim(r)) for r in range(min(k, c.top_degree + 1))}
    comps[k] = Wm
    incl = ChainMap(t, c, comps, check=False)
    t_action = None
    if action is not None:
        gens = []
        for g in action.generators:
            gc = {r: g[r] for r in range(k)}
            if W:
                sols = solve_many(Wm, (g[k] @ Wm).columns())
                if any(s is NO_SOLUTION for s in sols):
                    raise ChainComplexError("averaged complement is not invariant")
                gc[k] = RationalMatrix.from_columns(sols, rows=len(W))
            gens.append(ChainMap(t, t, gc, check=True))
        t_action = GroupChainAction(t, action.order, gens, check=False)
        # equivariance of the inclusion
        for g, gt in zip(action.generators, gens):
            for r in t.degrees():
                if incl[r] @ gt[r] != g[r] @ incl[r]:
                    raise ChainComplexError("truncation inclusion not equivariant in degree %d" % r)
    return Truncation(k, t, incl, t_action)


def truncation_contract(c: ChainComplex, tr: Truncation) -> list:
    """Degrees where the Moore contract fails (empty list = contract holds)."""
    bad = []
    k = tr.k
    top = max(c.top_degree, tr.complex.top_degree, k)
    for r in range(0, top + 1):
        m = induced_map(tr.incl, r)
        if r < k:
            h = homology(c, r).dim
            if not (m.shape == (h, h) and rank(m) == h):
                bad.append(r)
        elif homology(tr.complex, r).dim != 0:
            bad.append(r)
    return bad


@dataclass
class Cotruncation:
    k: int
    truncation: Truncation
    cone: Cone

    @property
    def q(self) -> ChainComplex:
        return self.cone.cone

    @property
    def C_map(self) -> ChainMap:
        return self.cone.incl

    def __iter__(self):
        return iter((self.q, self.C_map))


def cotruncate_Q(c: ChainComplex, k: int, action: GroupChainAction | None = None) -> Cotruncation:
    tr = truncate(c, k, action)
    return Cotruncation(k, tr, mapping_cone(tr.incl))


def short_exact_report(F: ChainMap, C: ChainMap) -> dict:
    """0 -> H(A) -F*-> H(B) -C*-> H(Q) -> 0 per degree: injective, surjective, exact in the middle."""
    A, B, Q = F.source, F.target, C.target
    out = {}
    top = max(A.top_degree, B.top_degree, Q.top_degree)
    for r in range(top + 1):
        f, cm = induced_map(F, r), induced_map(C, r)
        a, b, q = homology(A, r).dim, homology(B, r).dim, homology(Q, r).dim
        rf, rc = rank(f), rank(cm)
        comp = (cm @ f).is_zero() if f.cols and cm.rows else True
        out[r] = {"dims": (a, b, q), "injective": rf == a, "surjective": rc == q,
                  "exact": comp and rf + rc == b and rf == a and rc == q, "additive": a + q == b}
    return out


# --------------------------------------------------------------------------
# tensor products

def tensor_offsets(c: ChainComplex, d: ChainComplex, n: int) -> dict:
    """Offsets of the blocks c_p (x) d_{n-p} inside (c (x) d)_n."""
    off = {}
    pos = 0
    for p in range(0, n + 1):
        q = n - p
        if c.dim(p) and d.dim(q):
            off[p] = pos
            pos += c.dim(p) * d.dim(q)
    return off


def tensor(c: ChainComplex, d: ChainComplex) -> ChainComplex:
    top = c.top_degree + d.top_degree
    if c.is_empty() or d.is_empty():
        return zero_complex()
    dims = [sum(c.dim(p) * d.dim(n - p) for p in range(n + 1)) for n in range(top + 1)]
    bds = {}
    for n in range(1, top + 1):
        src = tensor_offsets(c, d, n)
        tgt = tensor_offsets(c, d, n - 1)
        ent = {}
        for p, o in src.items():
            q = n - p
            dq = d.dim(q)
            # d a (x) b
            if p >= 1 and (p - 1) in tgt:
                da = c.boundary(p)
                ot = tgt[p - 1]
                for i in range(c.dim(p - 1)):
                    for a, x in enumerate(da.row(i)):
                        if x:
                            for b in range(dq):
                                key = (ot + i * dq + b, o + a * dq + b)
                                ent[key] = ent.get(key, ZERO) + x
            # (-1)^p a (x) d b
            if q >= 1 and p in tgt:
                db = d.boundary(q)
                ot = tgt[p]
                dq1 = d.dim(q - 1)
                sgn = ONE if p % 2 == 0 else -ONE
                for a in range(c.dim(p)):
                    for j in range(dq1):
                        for b, x in enumerate(db.row(j)):
                            if x:
                                key = (ot + a * dq1 + j, o + a * dq + b)
                                ent[key] = ent.get(key, ZERO) + sgn * x
        bds[n] = RationalMatrix.from_sparse(dims[n - 1], dims[n], ent)
    return ChainComplex(dims, bds, check=False)


def tensor_maps(f: ChainMap, g: ChainMap, source: ChainComplex | None = None,
                target: ChainComplex | None = None) -> ChainMap:
    """f (x) g between tensor complexes (degree-0 maps, no signs)."""
    S = source if source is not None else tensor(f.source, g.source)
    T = target if target is not None else tensor(f.target, g.target)
    comps = {}
    for n in range(S.top_degree + 1):
        so = tensor_offsets(f.source, g.source, n)
        to = tensor_offsets(f.target, g.target, n)
        ent = {}
        for p, o in so.items():
            if p not in to:
                continue
            q = n - p
            fp, gq = f[p], g[q]
            sq, tq = g.source.dim(q), g.target.dim(q)
            ot = to[p]
            fnz = [(i, a, x) for i in range(fp.rows) for a, x in enumerate(fp.row(i)) if x]
            gnz = [(j, b, y) for j in range(gq.rows) for b, y in enumerate(gq.row(j)) if y]
            for i, a, x in fnz:
                for j, b, y in gnz:
                    key = (ot + i * tq + j, o + a * sq + b)
                    ent[key] = ent.get(key, ZERO) + x * y
        comps[n] = RationalMatrix.from_sparse(T.dim(n), S.dim(n), ent)
    return ChainMap(S, T, comps, check=False)


def tensor_action(a1: GroupChainAction, a2: GroupChainAction, complex: ChainComplex | None = None) -> GroupChainAction:
    """Diagonal action of a common group on a tensor product (generators paired in order)."""
    if len(a1.generators) != len(a2.generators) or a1.order != a2.order:
        raise ChainComplexError("actions must share a presentation (same order and generator count)")
    T = complex if complex is not None else tensor(a1.complex, a2.complex)
    gens = [tensor_maps(g, h, T, T) for g, h in zip(a1.generators, a2.generators)]
    return GroupChainAction(T, a1.order, gens, check=True)


def betti_convolution(b1: Sequence[int], b2: Sequence[int]) -> tuple:
    if not b1 or not b2:
        return ()
    out = [0] * (len(b1) + len(b2) - 1)
    for p, x in enumerate(b1):
        for q, y in enumerate(b2):
            out[p + q] += x * y
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _strip(t):
    t = list(t)
    while t and t[-1] == 0:
        t.pop()
    return tuple(t)


def ez_check(c: ChainComplex, d: ChainComplex) -> dict:
    """Kunneth verdict: Betti numbers of c (x) d against the convolution of the factors."""
    got = _strip(betti(tensor(c, d)))
    want = betti_convolution(_strip(betti(c)), _strip(betti(d)))
    return {"tensor": got, "convolution": want, "agree": got == want}


# --------------------------------------------------------------------------
# duality

class CochainComplex:
    """Cochains C^r = Hom(C_r, Q) with coboundary the transpose of the boundary."""

    def __init__(self, chains: ChainComplex):
        self.chains = chains
        self.dims = chains.dims
        self.top_degree = chains.top_degree

    def coboundary(self, r: int) -> RationalMatrix:
        return self.chains.boundary(r + 1).T

    def __repr__(self):
        return "CochainComplex(dims=%s)" % (list(self.dims),)


def dualize(c: ChainComplex) -> CochainComplex:
    return CochainComplex(c)


def cohomology(cc: CochainComplex, r: int) -> HomologyBasis:
    """Cohomology basis: representatives are cocycles (columns), computed on the transposed complex."""
    c = cc.chains
    key = ("coH", r)
    hb = c._cache.get(key)
    if hb is None:
        hb = _homology_core(cc.coboundary(r), cc.coboundary(r - 1), c.dim(r), r)
        c._cache[key] = hb
    return hb


def pairing(cocycles: RationalMatrix, cycles: RationalMatrix) -> RationalMatrix:
    """Evaluation matrix <phi_i, z_j> for cocycles (columns) and cycles (columns)."""
    return cocycles.T @ cycles


def dual_basis_cocycles(c: ChainComplex, r: int) -> RationalMatrix:
    """Cocycles (columns) dual to the canonical homology basis."""
    return homology(c, r).projection.T


# --------------------------------------------------------------------------
# small complexes used in tests and examples

def circle_complex() -> ChainComplex:
    """Three vertices, three edges."""
    d1 = RationalMatrix([[-1, 0, 1], [1, -1, 0], [0, 1, -1]])
    return ChainComplex([3, 3], {1: d1})


def direct_sum(cs: Sequence[ChainComplex]) -> ChainComplex:
    top = max((c.top_degree for c in cs), default=-1)
    dims = [sum(c.dim(r) for c in cs) for r in range(top + 1)]
    bds = {r: block_diag([c.boundary(r) for c in cs]) for r in range(1, top + 1)}
    return ChainComplex(dims, bds, check=False)


def shift_check(m: RationalMatrix, rows: int, cols: int) -> RationalMatrix:
    if m.shape != (rows, cols):
        raise ChainComplexError("shape %s, expected %s" % (m.shape, (rows, cols)))
    return m
