"""Bundle models E -> B with fiber L: fiberwise truncation, Q-spaces, duality obstructions ob_i and D_{k,l}.

Four variants:
  ProductBundle   E = B x L (staircase), ft = C(B) (x) t(L), F = EZ o (id (x) incl)
  FlatBundle      E = (cover x L)/G at chain level (coinvariants of the diagonal action)
  ExplicitBundle  a triangulated total space with user-supplied truncation subcomplexes
  RingBundle      cohomology-ring data only (structure constants, C* maps, top evaluation)
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import simp
from .chain import (ChainComplex, ChainMap, Cone, GroupChainAction, betti, coinvariants, homology, identity_map,
                    induced_map, invariant_homology_dims, mapping_cone, rank, short_exact_report, tensor,
                    tensor_action, tensor_maps, truncate, truncation_contract, zero_complex)
from .qla import (NO_SOLUTION, ONE, ZERO, RationalMatrix, Subspace, kernel_basis, solve_many, to_fraction,
                  vstack)


class HypothesisFailure(Exception):
    """A theorem's hypothesis does not hold for the input; reported, never silently degraded."""

    def __init__(self, message: str, detail: dict | None = None):
        super().__init__(message)
        self.detail = detail or {}


class BundleError(ValueError):
    pass


# --------------------------------------------------------------------------
# models

class BundleModel:
    variant = "abstract"

    @property
    def n(self) -> int:
        """dim E + 1."""
        return self.total_dim + 1

    @property
    def c(self) -> int:
        return self.n - self.base_dim - 1


class ProductBundle(BundleModel):
    variant = "product"

    def __init__(self, base: simp.SimplicialComplex, fiber: simp.SimplicialComplex, name: str = ""):
        self.base = base
        self.fiber = fiber
        self.name = name
        self._E = None
        self._ez = None

    @property
    def total(self) -> simp.SimplicialComplex:
        if self._E is None:
            self._E, self.proj_base, self.proj_fiber = simp.product(self.base, self.fiber)
        return self._E

    @property
    def total_dim(self):
        return self.base.dim + self.fiber.dim

    @property
    def base_dim(self):
        return self.base.dim

    def total_chain(self) -> ChainComplex:
        return simp.chain_complex(self.total)

    def ez(self) -> ChainMap:
        if self._ez is None:
            self._ez = simp.eilenberg_zilber(self.base, self.fiber, self.total)
        return self._ez


class FlatBundle(BundleModel):
    variant = "flat"

    def __init__(self, cover: simp.SimplicialComplex, deck: simp.SimplicialAction, fiber: simp.SimplicialComplex,
                 fiber_action: simp.SimplicialAction, name: str = ""):
        self.cover = cover
        self.deck = deck
        self.fiber = fiber
        self.fiber_action = fiber_action
        self.name = name
        simp.verify_action(cover, deck)
        simp.verify_action(fiber, fiber_action)
        if not deck.is_free():
            raise BundleError("deck action is not free")
        if len(deck.generators) != len(fiber_action.generators):
            raise BundleError("deck and fiber actions need the same generator list")
        # common presentation: the diagonal generators must generate a group of the deck order
        if deck.order % fiber_action.order:
            raise BundleError("fiber action order %d does not divide deck order %d" % (fiber_action.order, deck.order))
        self.order = deck.order
        self._cache = {}

    @property
    def total_dim(self):
        return self.cover.dim + self.fiber.dim

    @property
    def base_dim(self):
        return self.cover.dim

    def deck_chain_action(self) -> GroupChainAction:
        if "deck" not in self._cache:
            a = self.deck.chain_action()
            self._cache["deck"] = a
        return self._cache["deck"]

    def fiber_chain_action(self) -> GroupChainAction:
        if "fiber" not in self._cache:
            k = self.fiber
            gens = [simp.simplicial_chain_map(k, k, g) for g in self.fiber_action.generators]
            self._cache["fiber"] = GroupChainAction(simp.chain_complex(k), self.order, gens)
        return self._cache["fiber"]

    def upstairs(self):
        """Tensor complex C(cover) (x) C(L) with the diagonal action."""
        if "up" not in self._cache:
            act = tensor_action(self.deck_chain_action(), self.fiber_chain_action())
            self._cache["up"] = act
        return self._cache["up"]

    def total_chain(self) -> ChainComplex:
        if "E" not in self._cache:
            act = self.upstairs()
            self._cache["E"] = coinvariants(act.complex, act)
        return self._cache["E"][0]

    def total_quotient(self) -> ChainMap:
        self.total_chain()
        return self._cache["E"][1]


class ExplicitBundle(BundleModel):
    variant = "explicit"

    def __init__(self, total: simp.SimplicialComplex, base: simp.SimplicialComplex, fiber: simp.SimplicialComplex,
                 truncations: dict | None = None, name: str = ""):
        self.total = total
        self.base = base
        self.fiber = fiber
        self.truncations = {int(k): v for k, v in (truncations or {}).items()}
        self.name = name
        if total.dim != base.dim + fiber.dim:
            raise BundleError("dim E = %d but dim B + dim L = %d" % (total.dim, base.dim + fiber.dim))

    @property
    def total_dim(self):
        return self.total.dim

    @property
    def base_dim(self):
        return self.base.dim

    def total_chain(self) -> ChainComplex:
        return simp.chain_complex(self.total)


class RingBundle(BundleModel):
    """User-supplied cohomology data of E and of the cotruncations Q_{>=k} E."""
    variant = "ring"

    def __init__(self, dims, products: dict, top_eval, cotruncations: dict, base_dim: int, name: str = ""):
        self.dims = [int(d) for d in dims]
        self.N = len(self.dims) - 1  # = dim E
        self.name = name
        self._base_dim = int(base_dim)
        self.top_eval = tuple(to_fraction(x) for x in top_eval)
        if len(self.top_eval) != self.dims[self.N]:
            raise BundleError("top evaluation vector has wrong length")
        self.mult = {}
        for key, tensor3 in products.items():
            p, q = (int(x) for x in key.split(","))
            self.mult[(p, q)] = self._read_tensor(p, q, tensor3)
        self.cot = {}
        for k, data in cotruncations.items():
            qd = [int(d) for d in data["dims"]]
            qd += [0] * (self.N + 1 - len(qd))
            cs = {}
            for r in range(self.N + 1):
                m = data.get("C_star", {}).get(str(r))
                if m is None:
                    cs[r] = RationalMatrix.zeros(self.dims[r], qd[r])
                else:
                    cs[r] = RationalMatrix(m, rows=self.dims[r], cols=qd[r])
            self.cot[int(k)] = (qd, cs)
        self.validate()

    def _read_tensor(self, p, q, t):
        a, b, c = self.dims[p], self.dims[q], self.dims[p + q] if p + q <= self.N else 0
        out = {}
        if len(t) != a:
            raise BundleError("product table %d,%d: expected %d rows" % (p, q, a))
        for i, row in enumerate(t):
            if len(row) != b:
                raise BundleError("product table %d,%d: row %d has wrong length" % (p, q, i))
            for j, vec in enumerate(row):
                if len(vec) != c:
                    raise BundleError("product table %d,%d: entry (%d,%d) has wrong length" % (p, q, i, j))
                out[(i, j)] = tuple(to_fraction(x) for x in vec)
        return out

    @property
    def total_dim(self):
        return self.N

    @property
    def base_dim(self):
        return self._base_dim

    def product(self, p: int, x, q: int, y) -> tuple:
        """Cup product of classes given in coordinates."""
        if p + q > self.N:
            return ()
        if p == 0 and self.dims[0] == 1:
            return tuple(x[0] * v for v in y)
        if q == 0 and self.dims[0] == 1:
            return tuple(y[0] * v for v in x)
        out = [ZERO] * self.dims[p + q]
        if (p, q) in self.mult:
            tab = self.mult[(p, q)]
            for i, a in enumerate(x):
                if a:
                    for j, b in enumerate(y):
                        if b:
                            for t, v in enumerate(tab[(i, j)]):
                                out[t] += a * b * v
        elif (q, p) in self.mult:
            sgn = -1 if (p * q) % 2 else 1
            tab = self.mult[(q, p)]
            for i, a in enumerate(x):
                if a:
                    for j, b in enumerate(y):
                        if b:
                            for t, v in enumerate(tab[(j, i)]):
                                out[t] += sgn * a * b * v
        return tuple(out)

    def _basis(self, p):
        return [tuple(ONE if i == j else ZERO for i in range(self.dims[p])) for j in range(self.dims[p])]

    def validate(self):
        # graded commutativity where both orders are supplied
        for (p, q), tab in self.mult.items():
            if (q, p) in self.mult and p != q:
                other = self.mult[(q, p)]
                sgn = -1 if (p * q) % 2 else 1
                for (i, j), v in tab.items():
                    if tuple(sgn * x for x in other[(j, i)]) != v:
                        raise BundleError("products %d,%d and %d,%d are not graded commutative" % (p, q, q, p))
            if p == q:
                sgn = -1 if (p * q) % 2 else 1
                for (i, j), v in tab.items():
                    if tuple(sgn * x for x in tab[(j, i)]) != v:
                        raise BundleError("products in degree %d,%d are not graded commutative" % (p, q))
        # associativity on basis triples
        for p, q, r in itertools.product(range(self.N + 1), repeat=3):
            if p + q + r > self.N or 0 in (self.dims[p], self.dims[q], self.dims[r]):
                continue
            for x in self._basis(p):
                for y in self._basis(q):
                    for z in self._basis(r):
                        a = self.product(p + q, self.product(p, x, q, y), r, z)
                        b = self.product(p, x, q + r, self.product(q, y, r, z))
                        if a != b:
                            raise BundleError("structure constants are not associative in degrees %d,%d,%d" % (p, q, r))
        for k, (qd, cs) in self.cot.items():
            for r, m in cs.items():
                if rank(m) != m.cols:
                    raise BundleError("C* for k=%d is not injective in degree %d" % (k, r))

    def pairing_matrix(self, p: int) -> RationalMatrix:
        q = self.N - p
        rows = []
        for x in self._basis(p):
            rows.append([sum((a * b for a, b in zip(self.product(p, x, q, y), self.top_eval)), ZERO)
                         for y in self._basis(q)])
        return RationalMatrix(rows, rows=self.dims[p], cols=self.dims[q])

    def nondegenerate(self) -> bool:
        return all(rank(self.pairing_matrix(p)) == self.dims[p] == self.dims[self.N - p] for p in range(self.N + 1))


# --------------------------------------------------------------------------
# truncation data

@dataclass
class TruncationData:
    k: int
    method: str
    E: ChainComplex | None = None
    ft: ChainComplex | None = None
    F: ChainMap | None = None
    cone: Cone | None = None
    # ring-mode data: per degree, H^r(E) -> H^r(ft) and H~^r(Q) -> H^r(E)
    F_star: dict = field(default_factory=dict)
    C_star: dict = field(default_factory=dict)

    @property
    def Q(self) -> ChainComplex | None:
        return self.cone.cone if self.cone else None

    @property
    def C(self) -> ChainMap | None:
        return self.cone.incl if self.cone else None

    def degrees(self):
        if self.E is not None:
            return range(self.E.top_degree + 1)
        return sorted(self.C_star)

    def F_lower(self, r: int) -> RationalMatrix:
        """F_*: H_r(ft) -> H_r(E)."""
        if self.F is not None:
            return induced_map(self.F, r)
        return self.F_star[r].T

    def C_lower(self, r: int) -> RationalMatrix:
        """C_*: H_r(E) -> H~_r(Q)."""
        if self.cone is not None:
            return induced_map(self.C, r)
        return self.C_star[r].T

    def F_upper(self, r: int) -> RationalMatrix:
        return self.F_lower(r).T

    def C_upper(self, r: int) -> RationalMatrix:
        return self.C_lower(r).T

    def dims(self) -> dict:
        out = {}
        for r in self.degrees():
            f, cm = self.F_lower(r), self.C_lower(r)
            out[r] = (f.cols, f.rows, cm.rows)
        return out

    def splitting(self) -> dict:
        """0 -> H_r(ft) -> H_r(E) -> H~_r(Q) -> 0: exactness and rank additivity per degree."""
        if self.cone is not None:
            return short_exact_report(self.F, self.C)
        out = {}
        for r in self.degrees():
            f, cm = self.F_lower(r), self.C_lower(r)
            a, b, q = f.cols, f.rows, cm.rows
            rf, rc = rank(f), rank(cm)
            comp = (cm @ f).is_zero() if f.cols and cm.rows else True
            out[r] = {"dims": (a, b, q), "injective": rf == a, "surjective": rc == q,
                      "exact": comp and rf == a and rc == q and rf + rc == b, "additive": a + q == b}
        return out

    def exact(self) -> bool:
        return all(v["exact"] and v["additive"] for v in self.splitting().values())


def _product_truncation(bm: ProductBundle, k: int) -> TruncationData:
    CL = simp.chain_complex(bm.fiber)
    CB = simp.chain_complex(bm.base)
    tr = truncate(CL, k)
    bad = truncation_contract(CL, tr)
    if bad:
        raise HypothesisFailure("fiber truncation violates the Moore contract", {"degrees": bad})
    E = bm.total_chain()
    if tr.complex.is_empty():
        ft = zero_complex()
        F = ChainMap(ft, E, {}, check=False)
    else:
        full = tensor(CB, CL)
        ft = tensor(CB, tr.complex)
        idt = tensor_maps(identity_map(CB), tr.incl, ft, full)
        F = bm.ez().compose(idt)
        F = ChainMap(ft, E, {r: F[r] for r in range(ft.top_degree + 1)}, check=True)
    return TruncationData(k, "product", E, ft, F, mapping_cone(F))


def _flat_truncation(bm: FlatBundle, k: int) -> TruncationData:
    CL = simp.chain_complex(bm.fiber)
    fa = bm.fiber_chain_action()
    tr = truncate(CL, k, fa)
    bad = truncation_contract(CL, tr)
    if bad:
        raise HypothesisFailure("fiber truncation violates the Moore contract", {"degrees": bad})
    E = bm.total_chain()
    if tr.complex.is_empty():
        ft = zero_complex()
        return TruncationData(k, "flat", E, ft, ChainMap(ft, E, {}, check=False),
                              mapping_cone(ChainMap(ft, E, {}, check=False)))
    deck = bm.deck_chain_action()
    up = bm.upstairs()
    tact = tensor_action(deck, tr.action)
    ft, qft = coinvariants(tact.complex, tact)
    qE = bm.total_quotient()
    idt = tensor_maps(identity_map(deck.complex), tr.incl, tact.complex, up.complex)
    comps = {}
    for r in range(ft.top_degree + 1):
        # lift along the quotient of ft-upstairs, push through id (x) incl, then down to E
        comps[r] = qE[r] @ idt[r] @ qft.section[r]
    F = ChainMap(ft, E, comps, check=True)
    return TruncationData(k, "flat", E, ft, F, mapping_cone(F))


def _explicit_truncation(bm: ExplicitBundle, k: int) -> TruncationData:
    E = bm.total_chain()
    c = bm.fiber.dim
    if k > c:
        F = identity_map(E)
        return TruncationData(k, "explicit", E, E, F, mapping_cone(F))
    if k <= 0:
        ft = zero_complex()
        F = ChainMap(ft, E, {}, check=False)
        return TruncationData(k, "explicit", E, ft, F, mapping_cone(F))
    if k not in bm.truncations:
        detail = {"k": k}
        if k == 1 and betti(simp.chain_complex(bm.fiber))[0] == 1:
            # a degree-1 truncation of a connected fiber is a point, so ft ~ B and F_* must inject H(B) into H(E)
            bB = betti(simp.chain_complex(bm.base))
            bE = betti(E)
            bad = [r for r in range(len(bB)) if bB[r] > (bE[r] if r < len(bE) else 0)]
            if bad:
                detail.update({"degree": bad[0], "betti_base": bB, "betti_total": bE})
                raise HypothesisFailure(
                    "no degree-1 fiberwise truncation: H_%d(B) (dim %d) cannot inject into H_%d(E) (dim %d)"
                    % (bad[0], bB[bad[0]], bad[0], bE[bad[0]] if bad[0] < len(bE) else 0), detail)
        raise HypothesisFailure("no fiberwise truncation of degree %d supplied" % k, detail)
    facets = [tuple(sorted(bm.total.vertex_index(v) for v in f)) for f in bm.truncations[k]]
    sub = simp.subcomplex_from(bm.total, facets)
    ft = sub.complex()
    F = sub.inclusion()
    td = TruncationData(k, "explicit", E, ft, F, mapping_cone(F))
    for r, v in td.splitting().items():
        if not v["injective"]:
            raise HypothesisFailure("supplied truncation for k=%d fails: F_* not injective in degree %d" % (k, r),
                                    {"k": k, "degree": r})
    return td


def _ring_truncation(bm: RingBundle, k: int) -> TruncationData:
    N = bm.N
    if k not in bm.cot:
        if k > bm.c:
            # Q is a point: C* = 0 maps, ft = E
            cs = {r: RationalMatrix.zeros(bm.dims[r], 0) for r in range(N + 1)}
        elif k <= 0:
            cs = {r: RationalMatrix.identity(bm.dims[r]) if r > 0 else RationalMatrix.zeros(bm.dims[0], 0)
                  for r in range(N + 1)}
            # reduced degree 0 of Q = E / point: the unit class is not hit
            cs[0] = RationalMatrix.zeros(bm.dims[0], 0)
        else:
            raise HypothesisFailure("no cotruncation data for k=%d" % k, {"k": k})
    else:
        cs = bm.cot[k][1]
    fs = {}
    for r in range(N + 1):
        m = cs[r]
        # H^r(ft) = H^r(E) / im C*; F* = coordinates along a complement of im C*
        img = Subspace(bm.dims[r], m.columns())
        std = [[ONE if i == j else ZERO for i in range(bm.dims[r])] for j in range(bm.dims[r])]
        from .qla import extend_basis, inverse
        comp = extend_basis(img.vectors(), std)
        if bm.dims[r]:
            full = RationalMatrix.from_columns(img.vectors() + comp, rows=bm.dims[r])
            fs[r] = inverse(full).submatrix(rows=range(img.dim, bm.dims[r]))
        else:
            fs[r] = RationalMatrix.zeros(0, 0)
    return TruncationData(k, "ring", F_star=fs, C_star=cs)


def fiberwise_truncation(bm: BundleModel, k: int) -> TruncationData:
    key = ("trunc", k)
    cache = getattr(bm, "_tcache", None)
    if cache is None:
        cache = bm._tcache = {}
    if key in cache:
        return cache[key]
    if isinstance(bm, ProductBundle):
        td = _product_truncation(bm, k)
    elif isinstance(bm, FlatBundle):
        td = _flat_truncation(bm, k)
    elif isinstance(bm, ExplicitBundle):
        td = _explicit_truncation(bm, k)
    elif isinstance(bm, RingBundle):
        td = _ring_truncation(bm, k)
    else:
        raise BundleError("unknown bundle variant")
    cache[key] = td
    return td


# --------------------------------------------------------------------------
# duality obstruction

@dataclass
class ObReport:
    i: int
    k: int
    l: int
    basis: list
    ambient_dim: int
    route: str

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def vanishes(self) -> bool:
        return not self.basis

    def to_json(self):
        return {"i": self.i, "k": self.k, "l": self.l, "dim": self.dim, "vanishes": self.vanishes,
                "basis": [[str(x) for x in v] for v in self.basis], "route": self.route}


def _simplicial_total(bm):
    if isinstance(bm, ProductBundle):
        return bm.total
    if isinstance(bm, ExplicitBundle):
        return bm.total
    return None


def _image_C_star(td: TruncationData, r: int) -> list:
    """Basis (dual coordinates in H^r(E)) of im C*: H~^r(Q) -> H^r(E)."""
    m = td.C_upper(r)
    return Subspace(m.rows, m.columns()).vectors() if m.cols else []


def _ob_simplicial(bm, k, l, i, fc=None) -> ObReport:
    E = _simplicial_total(bm)
    CE = simp.chain_complex(E)
    N = E.dim
    tk, tl = fiberwise_truncation(bm, k), fiberwise_truncation(bm, l)
    xs = _image_C_star(tk, i)
    ys = _image_C_star(tl, N - i)
    P_i = homology(CE, i).projection
    P_j = homology(CE, N - i).projection
    hN = homology(CE, N)
    prods = []
    for x in xs:
        cx = P_i.T @ list(x)
        for y in ys:
            cy = P_j.T @ list(y)
            v = simp.cup_values(E, i, N - i, cx, cy)
            prods.append([sum((a * b for a, b in zip(v, hN.rep(t))), ZERO) for t in range(hN.dim)])
    span = Subspace(hN.dim, prods)
    return ObReport(i, k, l, [tuple(v) for v in span.vectors()], hN.dim, "cochain")


def _ob_ring(bm: RingBundle, k, l, i) -> ObReport:
    N = bm.N
    tk, tl = fiberwise_truncation(bm, k), fiberwise_truncation(bm, l)
    xs = tk.C_star[i].columns() if i in tk.C_star else []
    ys = tl.C_star[N - i].columns() if (N - i) in tl.C_star else []
    prods = [bm.product(i, x, N - i, y) for x in xs for y in ys]
    span = Subspace(bm.dims[N], prods)
    return ObReport(i, k, l, [tuple(v) for v in span.vectors()], bm.dims[N], "ring")


def _cohomology_ring_data(k: simp.SimplicialComplex):
    """Dual-basis cohomology of a complex and its cup structure constants."""
    C = simp.chain_complex(k)
    top = k.dim
    dims = [homology(C, r).dim for r in range(top + 1)]

    def mult(p, x, q, y):
        if p + q > top:
            return ()
        cx = homology(C, p).projection.T @ list(x)
        cy = homology(C, q).projection.T @ list(y)
        v = simp.cup_values(k, p, q, cx, cy)
        hb = homology(C, p + q)
        return tuple(sum((a * b for a, b in zip(v, hb.rep(t))), ZERO) for t in range(hb.dim))

    return dims, mult


class KunnethRing:
    """H*(X) (x) H*(Y) with the Koszul-signed product; basis ordered by (p, i, j)."""

    def __init__(self, X: simp.SimplicialComplex, Y: simp.SimplicialComplex):
        self.dx, self.mx = _cohomology_ring_data(X)
        self.dy, self.my = _cohomology_ring_data(Y)
        self.N = len(self.dx) + len(self.dy) - 2
        self.blocks = {}
        for n in range(self.N + 1):
            off, pos = {}, 0
            for p in range(n + 1):
                q = n - p
                if p < len(self.dx) and q < len(self.dy) and self.dx[p] and self.dy[q]:
                    off[p] = pos
                    pos += self.dx[p] * self.dy[q]
            self.blocks[n] = (off, pos)

    def dim(self, n):
        return self.blocks[n][1] if 0 <= n <= self.N else 0

    def split(self, n, v):
        off, _ = self.blocks[n]
        for p, o in off.items():
            q = n - p
            for a in range(self.dx[p]):
                for b in range(self.dy[q]):
                    c = v[o + a * self.dy[q] + b]
                    if c:
                        yield p, a, q, b, c

    def product(self, n, v, m, w):
        out = [ZERO] * self.dim(n + m)
        if n + m > self.N:
            return tuple(out)
        off, _ = self.blocks[n + m]
        for p, a, q, b, c in self.split(n, v):
            for p2, a2, q2, b2, c2 in self.split(m, w):
                if p + p2 >= len(self.dx) or q + q2 >= len(self.dy):
                    continue
                ex = [ONE if t == a else ZERO for t in range(self.dx[p])]
                ex2 = [ONE if t == a2 else ZERO for t in range(self.dx[p2])]
                ey = [ONE if t == b else ZERO for t in range(self.dy[q])]
                ey2 = [ONE if t == b2 else ZERO for t in range(self.dy[q2])]
                xx = self.mx(p, ex, p2, ex2)
                yy = self.my(q, ey, q2, ey2)
                if not xx or not yy or (p + p2) not in off:
                    continue
                sgn = -1 if (q * p2) % 2 else 1
                o = off[p + p2]
                dq = self.dy[q + q2]
                for s, xv in enumerate(xx):
                    if xv:
                        for t, yv in enumerate(yy):
                            if yv:
                                out[o + s * dq + t] += sgn * c * c2 * xv * yv
        return tuple(out)


def _flat_invariant_space(bm: FlatBundle, R: KunnethRing, n: int, kmin: int | None) -> list:
    """(H(cover) (x) H^{>=kmin}(L))^G in degree n, inside the Kunneth cohomology."""
    from .chain import induced_map as ind
    dgen = bm.deck_chain_action().generators
    fgen = bm.fiber_chain_action().generators
    off, tot = R.blocks[n]
    conds = []
    for g, h in zip(dgen, fgen):
        # cohomology action of g on H^p(cover) (x) H^q(L): transpose of the homology action
        mats = []
        for p, o in off.items():
            q = n - p
            a = ind(g, p).T
            b = ind(h, q).T
            blk = RationalMatrix([[a[i1, j1] * b[i2, j2] for j1 in range(a.cols) for j2 in range(b.cols)]
                                  for i1 in range(a.rows) for i2 in range(b.rows)],
                                 rows=a.rows * b.rows, cols=a.cols * b.cols)
            mats.append(blk)
        from .qla import block_diag
        G = block_diag(mats) if mats else RationalMatrix.zeros(0, 0)
        conds.append(G - RationalMatrix.identity(tot))
    # restriction to H^{>= kmin}(L) blocks
    for p, o in off.items():
        q = n - p
        if kmin is not None and q < kmin:
            for t in range(R.dx[p] * R.dy[q]):
                row = [ZERO] * tot
                row[o + t] = ONE
                conds.append(RationalMatrix([row], rows=1, cols=tot))
    if tot == 0:
        return []
    return kernel_basis(vstack(conds, cols=tot)).vectors()


def _ob_flat(bm: FlatBundle, k, l, i) -> ObReport:
    R = KunnethRing(bm.cover, bm.fiber)
    N = R.N
    xs = _flat_invariant_space(bm, R, i, k)
    ys = _flat_invariant_space(bm, R, N - i, l)
    top_inv = _flat_invariant_space(bm, R, N, None)
    prods = [R.product(i, x, N - i, y) for x in xs for y in ys]
    # express inside the invariant top-degree classes (H^{N}(E) by transfer)
    span = Subspace(R.dim(N), prods)
    inv = Subspace(R.dim(N), top_inv)
    if not inv.contains_subspace(span):
        raise BundleError("invariant products left the invariant subspace")
    return ObReport(i, k, l, [tuple(v) for v in span.vectors()], inv.dim, "kunneth-transfer")


def ob(bm: BundleModel, k: int, l: int, i: int) -> ObReport:
    if isinstance(bm, RingBundle):
        return _ob_ring(bm, k, l, i)
    if isinstance(bm, FlatBundle):
        return _ob_flat(bm, k, l, i)
    if _simplicial_total(bm) is not None:
        return _ob_simplicial(bm, k, l, i)
    raise BundleError("cup products unavailable for this bundle variant")


def ob_all(bm: BundleModel, k: int, l: int) -> list:
    return [ob(bm, k, l, i) for i in range(0, bm.n)]


# --------------------------------------------------------------------------
# duality isomorphism D_{k,l}

@dataclass
class DualityReport:
    r: int
    k: int
    l: int
    matrix: RationalMatrix | None
    obstruction: ObReport | None
    mismatch: bool
    is_iso: bool

    def to_json(self):
        return {"r": self.r, "k": self.k, "l": self.l, "mismatch": self.mismatch, "is_iso": self.is_iso,
                "matrix": self.matrix.to_json() if self.matrix is not None else None}


def total_fundamental_class(bm) -> simp.FundamentalClass:
    E = _simplicial_total(bm)
    if E is None:
        raise BundleError("no triangulated total space")
    return simp.fundamental_class(E)


def poincare_E(bm, r: int, fc=None) -> RationalMatrix:
    """D_E: H^r(E) -> H_{N-r}(E)."""
    if isinstance(bm, RingBundle):
        # D_E(x)(y) = <y u x, [E]>
        return bm.pairing_matrix(bm.N - r)
    E = _simplicial_total(bm)
    if E is None:
        raise BundleError("no Poincare duality available for this variant")
    return simp.poincare_dual(E, r, fc or total_fundamental_class(bm))


def duality_iso_D(bm: BundleModel, k: int, l: int, r: int, fc=None) -> DualityReport:
    """The unique D: H^r(ft_k) -> H~_{N-r}(Q_l) with D F* = C_* D_E, or a mismatch report."""
    N = bm.total_dim
    tk, tl = fiberwise_truncation(bm, k), fiberwise_truncation(bm, l)
    Fs = tk.F_upper(r)             # H^r(E) -> H^r(ft)
    DE = poincare_E(bm, r, fc)     # H^r(E) -> H_{N-r}(E)
    Cl = tl.C_lower(N - r)         # H_{N-r}(E) -> H~_{N-r}(Q)
    G = Cl @ DE if DE.cols else RationalMatrix.zeros(Cl.rows, DE.cols)
    ker = kernel_basis(Fs).vectors() if Fs.cols else []
    mismatch = any(any(G @ list(v)) for v in ker)
    if mismatch:
        return DualityReport(r, k, l, None, ob(bm, k, l, r), True, False)
    # section of F*
    if Fs.rows:
        cols = solve_many(Fs, RationalMatrix.identity(Fs.rows).columns())
        if any(c is NO_SOLUTION for c in cols):
            raise HypothesisFailure("F* not surjective in degree %d" % r, {"degree": r})
        S = RationalMatrix.from_columns(cols, rows=Fs.cols)
        D = G @ S
    else:
        D = RationalMatrix.zeros(Cl.rows, 0)
    iso = D.rows == D.cols and rank(D) == D.rows
    # the defining square commutes
    if D @ Fs != G:
        raise BundleError("defining square of D does not commute")
    return DualityReport(r, k, l, D, None, False, iso)


# --------------------------------------------------------------------------
# flat cohomology by transfer

def flat_cohomology(bm: FlatBundle) -> dict:
    """Graded dims of H(E) three ways: coinvariants, invariants, invariant part of H(cover x L)."""
    from .chain import invariants
    if bm.order < 1:
        raise BundleError("infinite group presentations are not supported")
    act = bm.upstairs()
    co = bm.total_chain()
    inv, _ = invariants(act.complex, act)
    top = act.complex.top_degree
    a = tuple(homology(co, r).dim for r in range(top + 1))
    b = tuple(homology(inv, r).dim for r in range(top + 1))
    c = invariant_homology_dims(act.complex, act)
    return {"coinvariants": a, "invariants": b, "homology_invariants": c, "agree": a == b == c}


# --------------------------------------------------------------------------
# JSON

def _load_complex(obj, resolver):
    if resolver is not None:
        return resolver(obj)
    if isinstance(obj, str):
        raise BundleError("complex reference %r needs a resolver" % obj)
    return simp.SimplicialComplex.from_json(obj)


def bundle_from_json(obj: dict, resolver=None) -> BundleModel:
    """resolver(name) -> SimplicialComplex for string references (corpus names)."""
    v = obj.get("variant")
    name = obj.get("name", "")
    try:
        if v == "product":
            return ProductBundle(_load_complex(obj["base"], resolver), _load_complex(obj["fiber"], resolver), name)
        if v == "flat":
            cover = _load_complex(obj["cover"], resolver)
            fiber = _load_complex(obj["fiber"], resolver)
            deck = simp.SimplicialAction.from_labels(cover, [dict((simp._label(a), simp._label(b)) for a, b in g)
                                                             for g in obj["deck"]], obj.get("order"))
            fa = simp.SimplicialAction.from_labels(fiber, [dict((simp._label(a), simp._label(b)) for a, b in g)
                                                           for g in obj["fiber_action"]], obj.get("order"))
            return FlatBundle(cover, deck, fiber, fa, name)
        if v == "explicit":
            return ExplicitBundle(_load_complex(obj["total"], resolver), _load_complex(obj["base"], resolver),
                                  _load_complex(obj["fiber"], resolver), obj.get("truncations", {}), name)
        if v == "ring":
            return RingBundle(obj["dims"], obj.get("products", {}), obj["top_eval"], obj["cotruncations"],
                              obj["base_dim"], name)
    except KeyError as e:
        raise BundleError("bundle JSON (%s) missing field %s" % (v, e)) from None
    raise BundleError("unknown bundle variant %r" % (v,))
