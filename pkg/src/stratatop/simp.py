"""Finite ordered simplicial complexes.

Cup uses the front face for the first factor: (a u b)(s) = a(s[0..p]) b(s[p..p+q]).
Cap is chosen so that <a u b, s> = <a, s n b>:  s n b = b(s[n-q..n]) s[0..n-q].
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .chain import (ChainComplex, ChainMap, GroupChainAction, homology,
                    induced_map, invariants as chain_invariants)
from .qla import ZERO, RationalMatrix, inverse, rank


class SimplicialError(ValueError):
    pass


class OrientationError(SimplicialError):
    pass


def _label(v):
    return tuple(_label(x) for x in v) if isinstance(v, list) else v


def _unlabel(v):
    return [_unlabel(x) for x in v] if isinstance(v, tuple) else v


def perm_sign(seq) -> int:
    """Sign of the permutation sorting seq (entries distinct)."""
    seq = list(seq)
    s = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


class SimplicialComplex:
    """Vertices in a fixed total order; simplices stored as increasing tuples of vertex indices."""

    def __init__(self, vertices: Sequence, facets: Sequence[Sequence], name: str = ""):
        verts = [_label(v) for v in vertices]
        if len(set(verts)) != len(verts):
            raise SimplicialError("duplicate vertex labels")
        self.vertices = tuple(verts)
        self.name = name
        pos = {v: i for i, v in enumerate(verts)}
        self._pos = pos
        faces = set()
        tops = []
        for f in facets:
            try:
                idx = tuple(sorted(pos[_label(v)] for v in f))
            except KeyError as e:
                raise SimplicialError("facet %r uses unknown vertex %r" % (list(f), e.args[0])) from None
            if len(set(idx)) != len(idx) or not idx:
                raise SimplicialError("facet %r has repeated vertices or is empty" % (list(f),))
            tops.append(idx)
        for idx in tops:
            if idx in faces:
                continue
            for r in range(1, len(idx) + 1):
                faces.update(itertools.combinations(idx, r))
        for i in range(len(verts)):
            faces.add((i,))
        dim = max((len(s) for s in faces), default=0) - 1
        by_dim = [[] for _ in range(dim + 1)]
        for s in faces:
            by_dim[len(s) - 1].append(s)
        self._simplices = [tuple(sorted(l)) for l in by_dim]
        self._index = [{s: i for i, s in enumerate(l)} for l in self._simplices]
        self.dim = dim
        self._chain = None
        self._facets = None
        # multiplies the propagated orientation (first top simplex positive)
        self.orientation = 1

    # basic access
    def simplices(self, d: int) -> tuple:
        return self._simplices[d] if 0 <= d <= self.dim else ()

    def index(self, s: tuple) -> int:
        return self._index[len(s) - 1][s]

    def has(self, s: tuple) -> bool:
        d = len(s) - 1
        return 0 <= d <= self.dim and s in self._index[d]

    def f_vector(self) -> tuple:
        return tuple(len(l) for l in self._simplices)

    def vertex_index(self, v) -> int:
        return self._pos[_label(v)]

    def facets(self) -> list:
        if self._facets is None:
            out = list(self._simplices[self.dim]) if self.dim >= 0 else []
            for d in range(self.dim - 1, -1, -1):
                covered = {s[:i] + s[i + 1:] for s in self._simplices[d + 1] for i in range(d + 2)}
                out += [s for s in self._simplices[d] if s not in covered]
            self._facets = sorted(out)
        return self._facets

    def is_pure(self) -> bool:
        return all(len(f) == self.dim + 1 for f in self.facets())

    def labels(self, s: tuple) -> tuple:
        return tuple(self.vertices[i] for i in s)

    def __repr__(self):
        return "SimplicialComplex(%s f=%s)" % (self.name or "", list(self.f_vector()))

    def to_json(self) -> dict:
        obj = {"vertices": [_unlabel(v) for v in self.vertices],
               "facets": [[_unlabel(self.vertices[i]) for i in f] for f in self.facets()]}
        if self.name:
            obj["name"] = self.name
        if self.orientation != 1:
            obj["orientation"] = self.orientation
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "SimplicialComplex":
        if "facets" not in obj:
            raise SimplicialError("complex JSON needs 'facets'")
        facets = obj["facets"]
        if not isinstance(facets, list) or not all(isinstance(f, list) for f in facets):
            raise SimplicialError("'facets' must be a list of vertex lists")
        verts = obj.get("vertices")
        if verts is None:
            seen = []
            for f in facets:
                for v in f:
                    if _label(v) not in seen:
                        seen.append(_label(v))
            verts = sorted(seen)
        k = cls(verts, facets, obj.get("name", ""))
        orient = obj.get("orientation", 1)
        if orient not in (1, -1):
            raise SimplicialError("'orientation' must be 1 or -1")
        k.orientation = orient
        return k

    @classmethod
    def load(cls, path) -> "SimplicialComplex":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def subcomplex(self, simplices: Sequence[tuple]) -> "SimplicialComplex":
        """Closure of the given simplices (index tuples), keeping this vertex order."""
        used = sorted({v for s in simplices for v in s})
        return SimplicialComplex([self.vertices[i] for i in used], [[self.vertices[i] for i in s] for s in simplices])

    def restrict_vertices(self) -> list:
        return list(self.vertices)


def _boundary_matrix(k: SimplicialComplex, d: int, basis_src=None, basis_tgt=None) -> RationalMatrix:
    src = k.simplices(d) if basis_src is None else basis_src
    tgt_index = k._index[d - 1] if basis_tgt is None else {s: i for i, s in enumerate(basis_tgt)}
    ent = {}
    for j, s in enumerate(src):
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            row = tgt_index.get(face)
            if row is not None:
                ent[(row, j)] = 1 if i % 2 == 0 else -1
    return RationalMatrix.from_sparse(len(tgt_index), len(src), ent)


def chain_complex(k: SimplicialComplex) -> ChainComplex:
    if k._chain is None:
        dims = list(k.f_vector())
        bds = {d: _boundary_matrix(k, d) for d in range(1, k.dim + 1)}
        k._chain = ChainComplex(dims, bds, check=True)
    return k._chain


# --------------------------------------------------------------------------
# subcomplexes, relative chains

@dataclass
class Subcomplex:
    """A subcomplex L of K given by index tuples of K, with its own complex and inclusion."""
    ambient: SimplicialComplex
    simplex_sets: list  # per degree: sorted list of K-index tuples

    def dims(self):
        return [len(x) for x in self.simplex_sets]

    def contains(self, s: tuple) -> bool:
        d = len(s) - 1
        return d < len(self.simplex_sets) and s in self._sets[d]

    def __post_init__(self):
        self._sets = [set(x) for x in self.simplex_sets]
        self._cx = None
        self._incl = None

    def complex(self) -> ChainComplex:
        if self._cx is None:
            K = self.ambient
            dims = self.dims()
            bds = {d: _boundary_matrix(K, d, self.simplex_sets[d], self.simplex_sets[d - 1])
                   for d in range(1, len(dims))}
            self._cx = ChainComplex(dims, bds)
        return self._cx

    def inclusion(self) -> ChainMap:
        if self._incl is None:
            K = self.ambient
            C = chain_complex(K)
            comps = {}
            for d, ss in enumerate(self.simplex_sets):
                comps[d] = RationalMatrix.from_sparse(C.dim(d), len(ss), {(K.index(s), j): 1 for j, s in enumerate(ss)})
            self._incl = ChainMap(self.complex(), C, comps, check=False)
        return self._incl

    def as_complex(self) -> SimplicialComplex:
        top = [s for ss in self.simplex_sets for s in ss]
        return self.ambient.subcomplex(top) if top else None


def subcomplex_from(k: SimplicialComplex, simplices: Sequence[tuple]) -> Subcomplex:
    closure = set()
    for s in simplices:
        for r in range(1, len(s) + 1):
            closure.update(itertools.combinations(s, r))
    top = max((len(s) for s in closure), default=0)
    sets = [sorted(s for s in closure if len(s) == d + 1) for d in range(top)]
    return Subcomplex(k, sets)


def free_faces(k: SimplicialComplex) -> list:
    n = k.dim
    count = {}
    for f in k.simplices(n):
        for i in range(n + 1):
            face = f[:i] + f[i + 1:]
            count[face] = count.get(face, 0) + 1
    return sorted(f for f, c in count.items() if c == 1)


def boundary_subcomplex(k: SimplicialComplex) -> Subcomplex:
    """Closure of the free (n-1)-faces."""
    return subcomplex_from(k, free_faces(k))


@dataclass
class RelativeComplex:
    """C(K)/C(L): basis = simplices of K not in L."""
    ambient: SimplicialComplex
    sub: Subcomplex
    complex: ChainComplex
    bases: list
    quotient: ChainMap

    def lift(self, d: int) -> RationalMatrix:
        """Zero-extension of relative chains (or cochains) to K."""
        K = self.ambient
        return RationalMatrix.from_sparse(K.f_vector()[d] if d <= K.dim else 0, len(self.bases[d]),
                                          {(K.index(s), j): 1 for j, s in enumerate(self.bases[d])})


def relative_complex(k: SimplicialComplex, sub: Subcomplex) -> RelativeComplex:
    bases = [[s for s in k.simplices(d) if not sub.contains(s)] for d in range(k.dim + 1)]
    dims = [len(b) for b in bases]
    bds = {d: _boundary_matrix(k, d, bases[d], bases[d - 1]) for d in range(1, k.dim + 1)}
    rel = ChainComplex(dims, bds)
    C = chain_complex(k)
    q = {}
    for d in range(k.dim + 1):
        pos = {s: j for j, s in enumerate(bases[d])}
        q[d] = RationalMatrix.from_sparse(dims[d], C.dim(d), {(pos[s], k.index(s)): 1 for s in bases[d]})
    return RelativeComplex(k, sub, rel, bases, ChainMap(C, rel, q, check=False))


def delete_open_star(k: SimplicialComplex, facet: Sequence) -> SimplicialComplex:
    """Remove the interior of one top simplex (given by vertex labels)."""
    idx = tuple(sorted(k.vertex_index(v) for v in facet))
    if len(idx) != k.dim + 1 or not k.has(idx):
        raise SimplicialError("not a top simplex: %r" % (list(facet),))
    rest = [f for f in k.facets() if f != idx]
    faces = [idx[:i] + idx[i + 1:] for i in range(len(idx))]
    out = SimplicialComplex(k.vertices, [k.labels(f) for f in rest + faces], name=(k.name + "-star") if k.name else "")
    # keep the orientation of k: compare the propagated signs at the new first top simplex
    try:
        signs = orientation_signs(k)
    except OrientationError:
        return out
    first = out.simplices(out.dim)[0]
    out.orientation = k.orientation * signs[k.index(first)]
    return out


# --------------------------------------------------------------------------
# maps

def simplicial_chain_map(src: SimplicialComplex, tgt: SimplicialComplex, vmap: dict | Sequence,
                         check: bool = True) -> ChainMap:
    """Chain map of a vertex map (index -> index); degenerate images go to 0, sorting gives a sign."""
    f = list(vmap) if not isinstance(vmap, dict) else [vmap[i] for i in range(len(src.vertices))]
    comps = {}
    for d in range(src.dim + 1):
        ent = {}
        for j, s in enumerate(src.simplices(d)):
            img = [f[v] for v in s]
            if len(set(img)) < len(img):
                continue
            t = tuple(sorted(img))
            if not tgt.has(t):
                raise SimplicialError("vertex map is not simplicial: %r -> %r" % (src.labels(s), img))
            ent[(tgt.index(t), j)] = perm_sign(img)
        comps[d] = RationalMatrix.from_sparse(tgt.f_vector()[d] if d <= tgt.dim else 0, len(src.simplices(d)), ent)
    return ChainMap(chain_complex(src), chain_complex(tgt), comps, check=check)


def label_map(src: SimplicialComplex, tgt: SimplicialComplex, labels: dict) -> list:
    """Vertex index map from a label dictionary."""
    out = []
    for v in src.vertices:
        if v not in labels:
            raise SimplicialError("vertex %r missing from map" % (v,))
        out.append(tgt.vertex_index(labels[v]))
    return out


# --------------------------------------------------------------------------
# products, cones, standard complexes

def staircases(p: int, q: int):
    """Monotone lattice paths (0,0) -> (p,q), as lists of points."""
    for ups in itertools.combinations(range(p + q), p):
        ups = set(ups)
        i = j = 0
        path = [(0, 0)]
        for step in range(p + q):
            if step in ups:
                i += 1
            else:
                j += 1
            path.append((i, j))
        yield path, ups


def product(k: SimplicialComplex, l: SimplicialComplex) -> tuple:
    """Staircase triangulation of |K| x |L|; vertices (v, w) ordered lexicographically.

    Returns (P, proj_k, proj_l) with the projections as vertex index lists.
    """
    verts = [(a, b) for a in k.vertices for b in l.vertices]
    facets = []
    for f in k.facets():
        for g in l.facets():
            for path, _ in staircases(len(f) - 1, len(g) - 1):
                facets.append([(k.vertices[f[i]], l.vertices[g[j]]) for i, j in path])
    P = SimplicialComplex(verts, facets, name="%sx%s" % (k.name, l.name) if k.name and l.name else "")
    nl = len(l.vertices)
    pk = [i // nl for i in range(len(verts))]
    pl = [i % nl for i in range(len(verts))]
    return P, pk, pl


def eilenberg_zilber(k: SimplicialComplex, l: SimplicialComplex, P: SimplicialComplex,
                     tensor_complex: ChainComplex | None = None) -> ChainMap:
    """Shuffle map C(K) (x) C(L) -> C(K x L) on the staircase product P."""
    from .chain import tensor, tensor_offsets
    CK, CL = chain_complex(k), chain_complex(l)
    T = tensor_complex if tensor_complex is not None else tensor(CK, CL)
    CP = chain_complex(P)
    comps = {}
    for n in range(T.top_degree + 1):
        off = tensor_offsets(CK, CL, n)
        ent = {}
        for p, o in off.items():
            q = n - p
            dq = CL.dim(q)
            paths = []
            for path, ups in staircases(p, q):
                mu = sorted(ups)
                nu = [s for s in range(p + q) if s not in ups]
                inv = sum(1 for a in mu for b in nu if a > b)
                paths.append((path, -1 if inv % 2 else 1))
            for a, s in enumerate(k.simplices(p)):
                for b, t in enumerate(l.simplices(q)):
                    col = o + a * dq + b
                    for path, sg in paths:
                        simplex = tuple(P.vertex_index((k.vertices[s[i]], l.vertices[t[j]])) for i, j in path)
                        row = P.index(simplex)
                        ent[(row, col)] = ent.get((row, col), 0) + sg
        comps[n] = RationalMatrix.from_sparse(CP.dim(n), T.dim(n), ent)
    return ChainMap(T, CP, comps, check=True)


def cone(k: SimplicialComplex, apex="apex") -> SimplicialComplex:
    if not k.vertices:
        raise SimplicialError("cone of the empty complex is not defined here")
    if apex in k.vertices:
        raise SimplicialError("apex label already used")
    facets = [list(k.labels(f)) + [apex] for f in k.facets()]
    return SimplicialComplex(list(k.vertices) + [apex], facets, name="c" + k.name if k.name else "")


def simplex(n: int) -> SimplicialComplex:
    return SimplicialComplex(list(range(n + 1)), [list(range(n + 1))], name="D%d" % n)


def simplex_boundary(n: int) -> SimplicialComplex:
    """Boundary of the n-simplex (an (n-1)-sphere)."""
    vs = list(range(n + 1))
    return SimplicialComplex(vs, [[v for v in vs if v != i] for i in vs], name="dD%d" % n)


def polygon(m: int) -> SimplicialComplex:
    return SimplicialComplex(list(range(m)), [[i, (i + 1) % m] for i in range(m)], name="C%d" % m)


def point() -> SimplicialComplex:
    return SimplicialComplex([0], [[0]], name="pt")


def cross_polytope(n: int) -> SimplicialComplex:
    """Boundary of the n-dimensional cross-polytope: vertices +e_i, -e_i ordered (+1,-1,+2,-2,...)."""
    verts = []
    for i in range(1, n + 1):
        verts += [i, -i]
    facets = [[s * i for i, s in zip(range(1, n + 1), signs)] for signs in itertools.product([1, -1], repeat=n)]
    return SimplicialComplex(verts, facets, name="cross%d" % n)


def torus7() -> SimplicialComplex:
    """Seven-vertex torus: triangles {i,i+1,i+3} and {i,i+2,i+3} mod 7."""
    facets = []
    for i in range(7):
        facets.append([i, (i + 1) % 7, (i + 3) % 7])
        facets.append([i, (i + 2) % 7, (i + 3) % 7])
    return SimplicialComplex(list(range(7)), facets, name="T2")


def rp2_6() -> SimplicialComplex:
    facets = [[1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 2, 6], [2, 3, 5], [2, 4, 5], [2, 4, 6], [3, 4, 6],
              [3, 5, 6]]
    return SimplicialComplex(list(range(1, 7)), facets, name="RP2")


# --------------------------------------------------------------------------
# cochains, cup and cap

@dataclass(frozen=True)
class Cochain:
    degree: int
    values: tuple

    def __add__(self, other):
        return Cochain(self.degree, tuple(a + b for a, b in zip(self.values, other.values)))

    def scale(self, c):
        c = Fraction(c)
        return Cochain(self.degree, tuple(c * a for a in self.values))


def coboundary(k: SimplicialComplex, a: Cochain) -> Cochain:
    C = chain_complex(k)
    return Cochain(a.degree + 1, C.boundary(a.degree + 1).T @ list(a.values))


def is_cocycle(k: SimplicialComplex, a: Cochain) -> bool:
    return not any(coboundary(k, a).values)


def cup(k: SimplicialComplex, a: Cochain, b: Cochain, check: bool = True) -> Cochain:
    p, q = a.degree, b.degree
    if len(a.values) != len(k.simplices(p)) or len(b.values) != len(k.simplices(q)):
        raise SimplicialError("cochain support does not match the complex")
    if check and not (is_cocycle(k, a) and is_cocycle(k, b)):
        raise SimplicialError("cup of classes needs cocycle inputs")
    ip, iq = k._index[p], k._index[q]
    out = []
    for s in k.simplices(p + q):
        x = a.values[ip[s[:p + 1]]]
        out.append(x * b.values[iq[s[p:]]] if x else ZERO)
    return Cochain(p + q, tuple(out))


def cup_values(k: SimplicialComplex, p: int, q: int, av, bv) -> tuple:
    return cup(k, Cochain(p, tuple(av)), Cochain(q, tuple(bv)), check=False).values


def cap_matrix(k: SimplicialComplex, chain: Sequence, n: int, p: int) -> RationalMatrix:
    """Matrix of phi -> chain n phi, C^p(K) -> C_{n-p}(K) for an n-chain."""
    ent = {}
    sims = k.simplices(n)
    ip, iq = k._index[p], k._index[n - p]
    for c, s in zip(chain, sims):
        if not c:
            continue
        key = (iq[s[:n - p + 1]], ip[s[n - p:]])
        ent[key] = ent.get(key, ZERO) + c
    return RationalMatrix.from_sparse(len(k.simplices(n - p)), len(k.simplices(p)), ent)


def cap(k: SimplicialComplex, chain: Sequence, n: int, a: Cochain) -> tuple:
    return cap_matrix(k, chain, n, a.degree) @ list(a.values)


# --------------------------------------------------------------------------
# fundamental classes and duality

@dataclass
class FundamentalClass:
    degree: int
    chain: tuple
    relative: bool = False
    boundary: Subcomplex | None = None

    def boundary_chain(self, k: SimplicialComplex) -> tuple:
        return chain_complex(k).boundary(self.degree) @ list(self.chain)


def orientation_signs(k: SimplicialComplex) -> tuple:
    """Coherent orientation of a pure complex by propagation; raises on failure."""
    n = k.dim
    if not k.is_pure():
        raise OrientationError("not pseudomanifold: complex is not pure")
    tops = k.simplices(n)
    incid = {}
    for j, f in enumerate(tops):
        for i in range(n + 1):
            face = f[:i] + f[i + 1:]
            incid.setdefault(face, []).append((j, 1 if i % 2 == 0 else -1))
    for face, lst in incid.items():
        if len(lst) > 2:
            raise OrientationError("not pseudomanifold: face %r lies in %d top simplices" % (k.labels(face), len(lst)))
    sign = [0] * len(tops)
    adj = [[] for _ in tops]
    for face, lst in incid.items():
        if len(lst) == 2:
            (a, sa), (b, sb) = lst
            adj[a].append((b, sa, sb))
            adj[b].append((a, sb, sa))
    for start in range(len(tops)):
        if sign[start]:
            continue
        sign[start] = 1
        stack = [start]
        while stack:
            a = stack.pop()
            for b, sa, sb in adj[a]:
                want = -sign[a] * sa * sb
                if sign[b] == 0:
                    sign[b] = want
                    stack.append(b)
                elif sign[b] != want:
                    raise OrientationError("not orientable")
    return tuple(sign)


def fundamental_class(k: SimplicialComplex, boundary: Subcomplex | None = None) -> FundamentalClass:
    n = k.dim
    signs = orientation_signs(k)
    chain = tuple(Fraction(s * k.orientation) for s in signs)
    bd = chain_complex(k).boundary(n) @ list(chain)
    faces = k.simplices(n - 1)
    if boundary is None:
        if any(bd):
            raise OrientationError("complex has boundary; pass the boundary subcomplex")
        return FundamentalClass(n, chain)
    for x, s in zip(bd, faces):
        if x and not boundary.contains(s):
            raise OrientationError("boundary of the fundamental chain leaves the boundary subcomplex")
    return FundamentalClass(n, chain, relative=True, boundary=boundary)


def _cohomology_reps(C: ChainComplex, r: int) -> RationalMatrix:
    """Cocycles (columns) dual to the canonical homology basis."""
    return homology(C, r).projection.T


def poincare_dual(k: SimplicialComplex, r: int, fc: FundamentalClass | None = None) -> RationalMatrix:
    """D: H^r -> H_{n-r}, cap with [K], in canonical (dual) bases."""
    fc = fc or fundamental_class(k)
    n = fc.degree
    C = chain_complex(k)
    hs, ht = homology(C, r), homology(C, n - r)
    if hs.dim == 0 or ht.dim == 0:
        return RationalMatrix.zeros(ht.dim, hs.dim)
    capped = cap_matrix(k, fc.chain, n, r) @ hs.projection.T
    return ht.projection @ capped


@dataclass
class LefschetzData:
    """Lefschetz duality maps of (M, dM) in canonical bases.

    D: H^r(M) -> H_{n-r}(M,dM) and Dp: H^r(M,dM) -> H_{n-r}(M).
    """
    M: SimplicialComplex
    fc: FundamentalClass
    rel: RelativeComplex

    @property
    def n(self):
        return self.fc.degree

    def D(self, r: int) -> RationalMatrix:
        C, R = chain_complex(self.M), self.rel.complex
        hs, ht = homology(C, r), homology(R, self.n - r)
        if hs.dim == 0 or ht.dim == 0:
            return RationalMatrix.zeros(ht.dim, hs.dim)
        capped = cap_matrix(self.M, self.fc.chain, self.n, r) @ hs.projection.T
        return ht.projection @ (self.rel.quotient[self.n - r] @ capped)

    def Dp(self, r: int) -> RationalMatrix:
        C, R = chain_complex(self.M), self.rel.complex
        hs, ht = homology(R, r), homology(C, self.n - r)
        if hs.dim == 0 or ht.dim == 0:
            return RationalMatrix.zeros(ht.dim, hs.dim)
        cocycles = self.rel.lift(r) @ hs.projection.T
        capped = cap_matrix(self.M, self.fc.chain, self.n, r) @ cocycles
        if not (C.boundary(self.n - r) @ capped).is_zero():
            raise OrientationError("cap with [M, dM] did not produce cycles")
        return ht.projection @ capped

    def d(self, r: int) -> RationalMatrix:
        """d_M: H_r(M) -> H^{n-r}(M,dM), inverse of Dp."""
        return inverse(self.Dp(self.n - r))

    def dp(self, r: int) -> RationalMatrix:
        """d'_M: H_r(M,dM) -> H^{n-r}(M), inverse of D."""
        return inverse(self.D(self.n - r))

    def j(self, r: int) -> RationalMatrix:
        return induced_map(self.rel.quotient, r)


def lefschetz_duals(m: SimplicialComplex, boundary: Subcomplex | None = None) -> LefschetzData:
    bd = boundary if boundary is not None else boundary_subcomplex(m)
    fc = fundamental_class(m, bd)
    return LefschetzData(m, fc, relative_complex(m, bd))


def duality_is_iso(k: SimplicialComplex) -> dict:
    fc = fundamental_class(k)
    out = {}
    for r in range(k.dim + 1):
        D = poincare_dual(k, r, fc)
        out[r] = D.rows == D.cols and rank(D) == D.rows
    return out


def cup_pairing(k: SimplicialComplex, p: int, fc: FundamentalClass | None = None) -> RationalMatrix:
    """<a_i u b_j, [K]> over canonical bases of H^p and H^{n-p}."""
    fc = fc or fundamental_class(k)
    n = fc.degree
    C = chain_complex(k)
    A = homology(C, p).projection
    B = homology(C, n - p).projection
    rows = []
    for i in range(A.rows):
        row = []
        for j in range(B.rows):
            v = cup_values(k, p, n - p, A.row(i), B.row(j))
            row.append(sum((x * y for x, y in zip(v, fc.chain)), ZERO))
        rows.append(row)
    return RationalMatrix(rows, rows=A.rows, cols=B.rows)


def class_coords(C: ChainComplex, r: int, cocycle: Sequence) -> tuple:
    """Coordinates of a cocycle in the dual basis: evaluation on homology representatives."""
    hb = homology(C, r)
    return tuple(sum((a * b for a, b in zip(cocycle, hb.rep(j))), ZERO) for j in range(hb.dim))


# --------------------------------------------------------------------------
# group actions

class SimplicialAction:
    """Finite group generated by vertex permutations (lists of vertex indices)."""

    def __init__(self, k: SimplicialComplex, generators: Sequence[Sequence[int]], order: int | None = None):
        self.complex = k
        gens = []
        nv = len(k.vertices)
        for g in generators:
            g = [int(x) for x in g]
            if sorted(g) != list(range(nv)):
                raise SimplicialError("generator is not a permutation of the vertices")
            gens.append(tuple(g))
        self.generators = gens
        self._order = order

    @classmethod
    def from_labels(cls, k: SimplicialComplex, maps: Sequence[dict], order: int | None = None):
        gens = []
        for m in maps:
            m = {_label(a): _label(b) for a, b in (m.items() if isinstance(m, dict) else m)}
            gens.append([k.vertex_index(m.get(v, v)) for v in k.vertices])
        return cls(k, gens, order)

    def group(self) -> list:
        nv = len(self.complex.vertices)
        ident = tuple(range(nv))
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for e in frontier:
                for g in self.generators:
                    p = tuple(g[e[i]] for i in range(nv))
                    if p not in seen:
                        seen.add(p)
                        nxt.append(p)
            frontier = nxt
        return sorted(seen)

    @property
    def order(self) -> int:
        return len(self.group())

    def order_compatible(self) -> bool:
        return all(all(g[i] < g[i + 1] for i in range(len(g) - 1)) for g in self.generators)

    def is_free(self) -> bool:
        """No non-identity element fixes a simplex (setwise)."""
        k = self.complex
        ident = tuple(range(len(k.vertices)))
        for e in self.group():
            if e == ident:
                continue
            for d in range(k.dim + 1):
                for s in k.simplices(d):
                    if tuple(sorted(e[v] for v in s)) == s:
                        return False
        return True

    def chain_action(self) -> GroupChainAction:
        k = self.complex
        gens = [simplicial_chain_map(k, k, g) for g in self.generators]
        return GroupChainAction(chain_complex(k), self.order, gens)


def verify_action(k: SimplicialComplex, a: SimplicialAction) -> dict:
    bad = []
    for gi, g in enumerate(a.generators):
        for d in range(k.dim + 1):
            for s in k.simplices(d):
                if not k.has(tuple(sorted(g[v] for v in s))):
                    bad.append((gi, k.labels(s)))
                    break
    if bad:
        raise SimplicialError("generator %d does not preserve the simplex %r" % bad[0])
    if a._order is not None and a._order % a.order:
        raise SimplicialError("declared order %d, generated group has %d elements" % (a._order, a.order))
    return {"generators": len(a.generators), "order": a.order, "order_compatible": a.order_compatible(),
            "free": a.is_free()}


def invariant_cochains(k: SimplicialComplex, a: SimplicialAction) -> tuple:
    """Invariant cochain complex, as (basis matrices per degree, cohomology dims)."""
    verify_action(k, a)
    C = chain_complex(k)
    top = C.top_degree
    # cochains as a chain complex in reversed degrees: D_j = C^{top-j}
    dims = [C.dim(top - j) for j in range(top + 1)]
    bds = {j: C.boundary(top - j + 1).T for j in range(1, top + 1)}
    D = ChainComplex(dims, bds, check=False)
    gens = []
    for g in a.generators:
        inv = [0] * len(g)
        for i, x in enumerate(g):
            inv[x] = i
        cm = simplicial_chain_map(k, k, inv, check=False)
        # phi -> phi o g^-1 on cochains
        gens.append(ChainMap(D, D, {j: cm[top - j].T for j in range(top + 1)}, check=True))
    act = GroupChainAction(D, a.order, gens)
    sub, incl = chain_invariants(D, act)
    bases = {top - j: incl[j] for j in range(top + 1)}
    dims_h = {top - j: homology(sub, j).dim for j in range(top + 1)}
    return bases, tuple(dims_h[r] for r in range(top + 1))


def cohomology_action_invariant_dims(k: SimplicialComplex, a: SimplicialAction) -> tuple:
    """dim H^r(K)^G via the induced action on homology (transpose): same as invariant homology dims."""
    from .chain import invariant_homology_dims
    return invariant_homology_dims(chain_complex(k), a.chain_action())
