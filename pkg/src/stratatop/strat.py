"""Two-strata spaces X = M u_E DE: intersection-space models, global duality, IH bookkeeping, signatures.

Chain-level conventions (all cones as in chain.mapping_cone, target first):
  IX = cone(tau),  tau = i o F : ft -> M
  eta  : M -> IX          inclusion
  zeta : IX -> C(M)/C(dM) (m, s) -> [m]
  nu   : Q = cone(F) -> IX (e, s) -> (i e, s)
Q -> IX -> C(M)/C(dM) is a short exact sequence of complexes; its connecting
map is C_* o d_* with d_*: H(M, dM) -> H(E).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import simp
from .bundle import (ExplicitBundle, HypothesisFailure, ProductBundle, duality_iso_D, fiberwise_truncation, ob)
from .chain import (ChainMap, betti, check_exact, homology, homotopy_pushout, induced_map, mapping_cone)
from .qla import (NO_SOLUTION, ONE, ZERO, RationalMatrix, Subspace, block_diag, extend_basis, hstack, inverse,
                  kernel_basis, rank, signature, solve, solve_many, vstack)


class StratError(ValueError):
    pass


# --------------------------------------------------------------------------
# perversities

def lower_middle(s: int) -> int:
    return (s - 2) // 2


def upper_middle(s: int) -> int:
    return (s - 1) // 2


def check_gm(p) -> None:
    """p = (p(2), p(3), ...): p(2) = 0 and p(s) <= p(s+1) <= p(s) + 1."""
    if not p or p[0] != 0:
        raise StratError("perversity must start with p(2) = 0")
    for s in range(len(p) - 1):
        if not p[s] <= p[s + 1] <= p[s] + 1:
            raise StratError("perversity violates the growth condition at s = %d" % (s + 2))


@dataclass(frozen=True)
class PerversityPair:
    c: int
    k: int
    l: int
    p: tuple | None = None
    q: tuple | None = None

    @classmethod
    def from_sequences(cls, c: int, p, q=None) -> "PerversityPair":
        p = tuple(int(x) for x in p)
        if q is None:
            q = tuple(s - 2 - p[s - 2] for s in range(2, len(p) + 2))
        q = tuple(int(x) for x in q)
        check_gm(p)
        check_gm(q)
        if len(p) != len(q) or any(a + b != s - 2 for s, (a, b) in enumerate(zip(p, q), start=2)):
            raise StratError("perversities are not complementary (p + q != t)")
        if len(p) < c:
            raise StratError("perversity must be given up to s = c + 1 = %d" % (c + 1))
        k, l = c - p[c - 1], c - q[c - 1]
        if k <= 0 or l <= 0:
            raise StratError("cutoffs must be positive (k=%d, l=%d)" % (k, l))
        return cls(c, k, l, p, q)

    @classmethod
    def from_cutoffs(cls, c: int, k: int, l: int) -> "PerversityPair":
        return cls(c, int(k), int(l))

    @classmethod
    def middle(cls, c: int) -> "PerversityPair":
        """Upper-middle p with lower-middle q: k = floor((c+1)/2), l = ceil((c+1)/2)."""
        p = tuple(upper_middle(s) for s in range(2, c + 2))
        q = tuple(lower_middle(s) for s in range(2, c + 2))
        return cls(c, c - p[-1], c - q[-1], p, q) if c >= 1 else cls(c, (c + 1) // 2, (c + 2) // 2)

    def swapped(self) -> "PerversityPair":
        return PerversityPair(self.c, self.l, self.k, self.q, self.p)

    def to_json(self):
        return {"c": self.c, "k": self.k, "l": self.l}


# --------------------------------------------------------------------------
# spaces

class TwoStrataSpace:
    """M with boundary identified with the total space E of a link bundle over B."""

    def __init__(self, M: simp.SimplicialComplex, bundle, identification="identity", orientation: int = 1,
                 name: str = "", perversity=None):
        if not isinstance(bundle, (ProductBundle, ExplicitBundle)):
            raise StratError("two-strata spaces need a triangulated bundle (product or explicit)")
        self.M = M
        self.bundle = bundle
        self.name = name
        self.n = M.dim
        E = bundle.total
        self.E = E
        if E.dim != self.n - 1:
            raise StratError("dim E = %d but dim M - 1 = %d" % (E.dim, self.n - 1))
        base = bundle.base
        if betti(simp.chain_complex(base))[0] != 1:
            raise StratError("base of the link bundle is not connected")
        self.c = self.n - base.dim - 1
        if bundle.fiber.dim != self.c:
            raise StratError("fiber dimension %d differs from c = %d" % (bundle.fiber.dim, self.c))
        self.boundary = simp.boundary_subcomplex(M)
        self.ident = self._vertex_map(identification)
        self._check_identification()
        self.i_map = simp.simplicial_chain_map(E, M, self.ident)
        fc = simp.fundamental_class(M, self.boundary)
        if orientation == -1:
            fc = simp.FundamentalClass(fc.degree, tuple(-x for x in fc.chain), fc.relative, fc.boundary)
        self.rel = simp.relative_complex(M, self.boundary)
        self.lef = simp.LefschetzData(M, fc, self.rel)
        self.fc_E = self._boundary_orientation()
        self.perversity = perversity
        self._models = {}

    def _vertex_map(self, ident) -> list:
        E, M = self.E, self.M
        try:
            if ident == "identity":
                return [M.vertex_index(v) for v in E.vertices]
            if ident == "fiber":
                # E = B x L with B a point: (b, v) -> v
                return [M.vertex_index(v[1]) for v in E.vertices]
            pairs = {simp._label(a): simp._label(b) for a, b in ident}
            return [M.vertex_index(pairs[v]) for v in E.vertices]
        except (KeyError, IndexError, TypeError) as e:
            raise StratError("identification does not cover E (%r)" % (e,)) from None

    def _check_identification(self):
        E, f = self.E, self.ident
        if len(set(f)) != len(f):
            raise StratError("identification is not injective on vertices")
        for d in range(E.dim + 1):
            imgs = set()
            for s in E.simplices(d):
                t = tuple(sorted(f[v] for v in s))
                if not self.boundary.contains(t):
                    raise StratError("simplex %r of E does not land in the boundary of M" % (E.labels(s),))
                imgs.add(t)
            bd = self.boundary.simplex_sets[d] if d < len(self.boundary.simplex_sets) else []
            if len(imgs) != len(bd):
                raise StratError("identification E -> dM is not onto in degree %d" % d)

    def to_E(self, d: int) -> RationalMatrix:
        """C_d(M) -> C_d(E): restriction to boundary simplices, pulled back along the identification."""
        E, M, f = self.E, self.M, self.ident
        ent = {}
        for j, s in enumerate(E.simplices(d)):
            img = [f[v] for v in s]
            ent[(j, M.index(tuple(sorted(img))))] = simp.perm_sign(img)
        return RationalMatrix.from_sparse(len(E.simplices(d)), len(M.simplices(d)), ent)

    def _boundary_orientation(self) -> simp.FundamentalClass:
        N = self.n - 1
        bd = simp.chain_complex(self.M).boundary(self.n) @ list(self.lef.fc.chain)
        chain = self.to_E(N) @ list(bd)
        if any(abs(x) != 1 for x in chain) or any(simp.chain_complex(self.E).boundary(N) @ list(chain)):
            raise StratError("boundary of [M, dM] is not a fundamental class of E")
        return simp.FundamentalClass(N, tuple(chain))

    def de_model(self):
        """Simplicial DE = B x cL for product bundles, with E inside it."""
        bm = self.bundle
        if not isinstance(bm, ProductBundle):
            raise StratError("a disk-bundle model is only built for product bundles")
        cl = simp.cone(bm.fiber, apex="*")
        DE = simp.product(bm.base, cl)[0]
        vm = [DE.vertex_index(v) for v in self.E.vertices]
        return DE, simp.simplicial_chain_map(self.E, DE, vm)

    def global_homology(self) -> tuple:
        """Betti numbers of X from the homotopy pushout M <- E -> DE."""
        DE, incl = self.de_model()
        po = homotopy_pushout(self.i_map, incl)
        return tuple(homology(po.P, r).dim for r in range(self.n + 1))

    def default_pair(self) -> PerversityPair:
        if self.perversity:
            pv = self.perversity
            if "p" in pv:
                return PerversityPair.from_sequences(self.c, pv["p"], pv.get("q"))
            return PerversityPair.from_cutoffs(self.c, pv["k"], pv["l"])
        return PerversityPair.middle(self.c)

    def boundary_map(self, r: int) -> RationalMatrix:
        """d_*: H_r(M, dM) -> H_{r-1}(E)."""
        R = self.rel.complex
        hr = homology(R, r)
        CE = simp.chain_complex(self.E)
        he = homology(CE, r - 1)
        if hr.dim == 0 or he.dim == 0:
            return RationalMatrix.zeros(he.dim, hr.dim)
        CM = simp.chain_complex(self.M)
        chains = CM.boundary(r) @ (self.rel.lift(r) @ hr.reps)
        e = self.to_E(r - 1) @ chains
        if self.i_map[r - 1] @ e != chains:
            raise StratError("boundary of a relative cycle leaves dM")
        return he.projection @ e

    def model(self, k) -> "IntersectionSpaceModel":
        k = _cutoff(k)
        if k not in self._models:
            self._models[k] = build_intersection_space(self, k)
        return self._models[k]


# --------------------------------------------------------------------------
# intersection spaces

@dataclass
class IntersectionSpaceModel:
    space: TwoStrataSpace
    k: int
    td: object
    tau: ChainMap
    cone: object
    eta: ChainMap
    zeta: ChainMap
    nu: ChainMap
    J: object
    checks: dict = field(default_factory=dict)

    @property
    def IX(self):
        return self.cone.cone

    def betti(self) -> tuple:
        """dim H~_r(IX), r = 0..n."""
        return tuple(homology(self.IX, r).dim for r in range(self.space.n + 1))

    def delta_q(self, r: int) -> RationalMatrix:
        """H_r(M, dM) -> H~_{r-1}(Q): connecting map of Q -> IX -> C(M, dM)."""
        b = self.space.boundary_map(r)
        return self.td.C_lower(r - 1) @ b

    def les_M(self):
        return self.cone.les()

    def les_rel(self):
        xs = self.space
        nodes, maps = [], []
        R = xs.rel.complex
        Q = self.td.Q
        for r in range(xs.n, -1, -1):
            nodes += [("Q", r, homology(Q, r).dim), ("IX", r, homology(self.IX, r).dim),
                      ("M,dM", r, homology(R, r).dim)]
            maps += [induced_map(self.nu, r), induced_map(self.zeta, r)]
            if r > 0:
                maps.append(self.delta_q(r))
        return check_exact(nodes, maps)

    def collapse_check(self) -> dict:
        """H~(J) against H~(IX) degreewise."""
        top = max(self.J.P.top_degree, self.IX.top_degree)
        j = tuple(homology(self.J.P, r).dim for r in range(top + 1))
        i = tuple(homology(self.IX, r).dim for r in range(top + 1))
        return {"J": j, "IX": i, "agree": j == i}

    def to_json(self):
        return {"k": self.k, "betti_IX": list(self.betti()), "checks": self.checks}


def _cutoff(pp, which: str = "k") -> int:
    return getattr(pp, which) if isinstance(pp, PerversityPair) else int(pp)


def build_intersection_space(xs: TwoStrataSpace, pp) -> IntersectionSpaceModel:
    """I = cone(i o F_{<k}); pp is a PerversityPair (its k is used) or a bare cutoff.

    For k <= 0 the truncation is empty, so I is M itself and betti() gives unreduced H(M).
    """
    k = _cutoff(pp)
    td = fiberwise_truncation(xs.bundle, k)
    tau = xs.i_map.compose(td.F)
    cone = mapping_cone(tau)
    IX = cone.cone
    R = xs.rel.complex
    zc, nc = {}, {}
    for r in range(IX.top_degree + 1):
        zc[r] = hstack([xs.rel.quotient[r], RationalMatrix.zeros(R.dim(r), td.ft.dim(r - 1))], rows=R.dim(r))
    zeta = ChainMap(IX, R, zc, check=True)
    Q = td.Q
    for r in range(Q.top_degree + 1):
        nc[r] = block_diag([xs.i_map[r], RationalMatrix.identity(td.ft.dim(r - 1))])
    nu = ChainMap(Q, IX, nc, check=True)
    J = homotopy_pushout(td.C, xs.i_map)
    model = IntersectionSpaceModel(xs, k, td, tau, cone, cone.incl, zeta, nu, J)
    model.checks = {"les_M": model.les_M().exact, "les_rel": model.les_rel().exact,
                    "collapse": model.collapse_check()["agree"]}
    return model


# --------------------------------------------------------------------------
# global duality

@dataclass
class DualityReport:
    pair: PerversityPair
    dims_p: tuple
    dims_q: tuple
    fillers: dict
    squares: dict

    @property
    def dims_match(self) -> bool:
        n = len(self.dims_p) - 1
        return all(self.dims_p[r] == self.dims_q[n - r] for r in range(n + 1))

    @property
    def diagram_commutes(self) -> bool:
        return all(all(v.values()) for v in self.squares.values())

    def to_json(self):
        return {"k": self.pair.k, "l": self.pair.l, "dims_cohomology_IpX": list(self.dims_p),
                "dims_homology_IqX": list(self.dims_q), "dims_match": self.dims_match,
                "diagram_commutes": self.diagram_commutes,
                "squares": {str(r): v for r, v in sorted(self.squares.items())}}


def _solve_sylvester_pair(A, B1, Z, B2, shape):
    """X with X @ A == B1 and Z @ X == B2 (X of the given shape), or NO_SOLUTION."""
    rows, cols = shape
    nvar = rows * cols
    eqs, rhs = [], []
    for i in range(rows):
        for t in range(A.cols):
            eqs.append({i * cols + j: A[j, t] for j in range(cols) if A[j, t]})
            rhs.append(B1[i, t])
    for s in range(Z.rows):
        for j in range(cols):
            eqs.append({i * cols + j: Z[s, i] for i in range(rows) if Z[s, i]})
            rhs.append(B2[s, j])
    if nvar == 0:
        return RationalMatrix.zeros(rows, cols) if not any(rhs) else NO_SOLUTION
    if not eqs:
        return RationalMatrix.zeros(rows, cols)
    m = RationalMatrix.from_row_dicts(eqs, nvar)
    x = solve(m, rhs)
    if x is NO_SOLUTION:
        return NO_SOLUTION
    return RationalMatrix([x[i * cols:(i + 1) * cols] for i in range(rows)], rows=rows, cols=cols)


def require_ob_zero(bm, k: int, l: int) -> None:
    n = bm.n
    bad = [ob(bm, k, l, i) for i in range(n)]
    bad = [o for o in bad if not o.vanishes]
    if bad:
        raise HypothesisFailure("local duality obstruction ob_%d(pi,%d,%d) does not vanish (dim %d)"
                                % (bad[0].i, k, l, bad[0].dim), {"degrees": [o.i for o in bad]})


def duality_check(xs, pp: PerversityPair | None = None) -> DualityReport:
    """Dimensions of both sides and the filler D_IX in every degree.

    A bare bundle is accepted so that a nonvanishing obstruction can be reported
    before any space is assembled."""
    if not isinstance(xs, TwoStrataSpace):
        pp = pp or PerversityPair.middle(xs.c)
        require_ob_zero(xs, pp.k, pp.l)
        raise StratError("obstruction vanishes, but a manifold part M is needed to assemble X")
    pp = pp or xs.default_pair()
    bm = xs.bundle
    require_ob_zero(bm, pp.k, pp.l)
    Ik, Il = xs.model(pp.k), xs.model(pp.l)
    n = xs.n
    dp = tuple(homology(Ik.IX, r).dim for r in range(n + 1))
    dq = tuple(homology(Il.IX, r).dim for r in range(n + 1))
    lef = xs.lef
    fillers, squares = {}, {}
    for r in range(n + 1):
        s = n - r
        eta_s = induced_map(Ik.eta, r).T
        delta_s = Ik.cone.connecting(r).T if r >= 1 else RationalMatrix.zeros(dp[r], 0)
        tau_s = induced_map(Ik.tau, r).T
        DM = lef.D(r)
        nu_l = induced_map(Il.nu, s)
        zeta_l = induced_map(Il.zeta, s)
        if r >= 1:
            rep = duality_iso_D(bm, pp.k, pp.l, r - 1, xs.fc_E)
            if rep.mismatch:
                raise HypothesisFailure("no bundle duality isomorphism in degree %d" % (r - 1), {"degree": r - 1})
            Dprev = rep.matrix
        else:
            Dprev = RationalMatrix.zeros(nu_l.cols, 0)
        rep_r = duality_iso_D(bm, pp.k, pp.l, r, xs.fc_E)
        if rep_r.mismatch:
            raise HypothesisFailure("no bundle duality isomorphism in degree %d" % r, {"degree": r})
        right = rep_r.matrix @ tau_s == Il.delta_q(s) @ DM if DM.cols else True
        X = _solve_sylvester_pair(delta_s, nu_l @ Dprev, zeta_l, DM @ eta_s, (dq[s], dp[r]))
        ok = X is not NO_SOLUTION
        iso = ok and X.rows == X.cols and rank(X) == X.rows
        squares[r] = {"right_square": bool(right), "filler_exists": ok, "filler_iso": bool(iso)}
        if ok:
            fillers[r] = X
    return DualityReport(pp, dp, dq, fillers, squares)


# --------------------------------------------------------------------------
# IH of cones, cone bundles, Thom spaces

def ih_cone(L: simp.SimplicialComplex, k) -> tuple:
    """IH_r(cL) = H_r(L) for r < k and 0 for r >= k, r = 0..dim L."""
    k = _cutoff(k)
    b = betti(simp.chain_complex(L))
    return tuple(b[r] if r < k else 0 for r in range(L.dim + 1))


def ih_cone_bundle(bm, k) -> dict:
    k = _cutoff(k)
    td = fiberwise_truncation(bm, k)
    N = bm.total_dim
    de = tuple(td.F_lower(r).cols for r in range(N + 1))
    rel = (0,) + tuple(td.C_lower(r).rows for r in range(N + 1))
    # the pair sequence of (DE, E) splits, i.e. dim H_r(E) = IH_r(DE) + IH_{r+1}(DE, E), iff j_r = 0
    split = all(td.F_lower(r).rows == de[r] + rel[r + 1] for r in range(N + 1))
    return {"IH_DE": de, "IH_DE_E": rel, "j_partial_zero": split}


def ih_thom(bm, k) -> dict:
    """Middle-perversity IH of TE from the Mayer-Vietoris sequence of (cE, DE)."""
    k = _cutoff(k)
    td = fiberwise_truncation(bm, k)
    N = bm.total_dim
    n = N + 1
    cut = N - lower_middle(N + 1)   # cone formula cutoff for cE
    i_rank, hE = {}, {}
    surj_mid = True
    for r in range(N + 1):
        F = td.F_lower(r)
        hE[r] = F.rows
        if F.cols:
            cols = solve_many(F.T, RationalMatrix.identity(F.cols).columns())
            P = RationalMatrix.from_columns(cols, rows=F.rows).T  # retraction: P F = id
        else:
            P = RationalMatrix.zeros(0, F.rows)
        Cpart = RationalMatrix.identity(F.rows) if r < cut else RationalMatrix.zeros(0, F.rows)
        full = vstack([P, Cpart], cols=F.rows)
        i_rank[r] = rank(full) if full.rows and full.cols else 0
        target = F.cols + (F.rows if r < cut else 0)
        i_rank[(r, "target")] = target
        if r == cut and rank(P) != F.cols:
            surj_mid = False
    ih = []
    for r in range(n + 1):
        coker = (i_rank[(r, "target")] - i_rank[r]) if r <= N else 0
        ker = (hE[r - 1] - i_rank[r - 1]) if 1 <= r <= N + 1 else 0
        ih.append(coker + ker)
    return {"IH_TE": tuple(ih), "middle": cut, "IH_middle": ih[cut] if cut <= n else 0,
            "H_E_to_IH_DE_surjective": surj_mid}


def witt_check(xs) -> dict:
    L = xs.bundle.fiber if isinstance(xs, TwoStrataSpace) else xs
    c = L.dim
    if (c + 1) % 2 == 0:
        return {"codim": c + 1, "witt": True, "reason": "even codimension"}
    b = betti(simp.chain_complex(L))
    h = b[c // 2] if c // 2 < len(b) else 0
    return {"codim": c + 1, "witt": h == 0, "degree": c // 2, "betti": h}


# --------------------------------------------------------------------------
# signatures

@dataclass
class NovikovReport:
    sigma: int
    form: RationalMatrix
    basis: list
    lifts: list

    def to_json(self):
        return {"sigma": self.sigma, "form": self.form.to_json(), "rank_j": len(self.basis)}


def _middle(n: int) -> int:
    if n % 4:
        raise StratError("signature needs dimension divisible by 4 (got %d)" % n)
    return n // 2


def novikov_signature(lef: simp.LefschetzData) -> NovikovReport:
    m = _middle(lef.n)
    j = lef.j(m)
    e = Subspace(j.rows, j.columns()).vectors() if j.cols else []
    lifts = [solve(j, v) for v in e]
    d = lef.d(m)
    rows = []
    for a in lifts:
        da = d @ list(a)
        rows.append([sum((x * y for x, y in zip(da, b)), ZERO) for b in e])
    S = RationalMatrix(rows, rows=len(e), cols=len(e))
    if not S.is_symmetric():
        raise StratError("Novikov form is not symmetric")
    return NovikovReport(signature(S).sigma if len(e) else 0, S, e, lifts)


def novikov_of_complex(M: simp.SimplicialComplex) -> NovikovReport:
    return novikov_signature(simp.lefschetz_duals(M))


def symmetry_identity(lef: simp.LefschetzData, r: int) -> bool:
    """d_M(v)(w) == (-1)^{r(n-r)} d'_M(w)(v) for all basis v in H_r(M), w in H_{n-r}(M, dM)."""
    n = lef.n
    d = lef.d(r)        # H_r(M) -> H^{n-r}(M, dM)
    dp = lef.dp(n - r)  # H_{n-r}(M, dM) -> H^r(M)
    sign = -1 if (r * (n - r)) % 2 else 1
    return d == dp.T.scale(sign)


@dataclass
class SignatureReport:
    sigma_M: int
    sigma_IX: int
    beta: RationalMatrix
    S: RationalMatrix
    l: int
    r: int
    basis: RationalMatrix
    checks: dict

    @property
    def block_form(self) -> bool:
        return self.checks.get("block_form", False)

    def to_json(self):
        return {"sigma_M_dM": self.sigma_M, "sigma_IX": self.sigma_IX, "l": self.l, "r": self.r,
                "beta": self.beta.to_json(), "S": self.S.to_json(), "checks": self.checks}


def _block_form(beta: RationalMatrix, l: int, r: int) -> bool:
    n = 2 * l + r
    for a in range(n):
        for b in range(n):
            x = beta[a, b]
            if a < l and b >= l + r:
                want = ONE if b - l - r == a else ZERO
            elif a >= l + r and b < l:
                want = ONE if a - l - r == b else ZERO
            elif l <= a < l + r and l <= b < l + r:
                continue
            else:
                want = ZERO
            if x != want:
                return False
    return True


def intersection_form_IX(xs: TwoStrataSpace) -> SignatureReport:
    n = xs.n
    m = _middle(n)
    w = witt_check(xs)
    if not w["witt"]:
        raise HypothesisFailure("space is not Witt: H_%d(L) != 0" % w["degree"], w)
    k = xs.c - lower_middle(xs.c + 1)
    require_ob_zero(xs.bundle, k, k)
    ix = xs.model(k)
    lef = xs.lef
    nov = novikov_signature(lef)
    ebar = nov.lifts
    d = lef.d(m)
    dp = lef.dp(m)
    eta = induced_map(ix.eta, m)
    zeta = induced_map(ix.zeta, m)
    nu = induced_map(ix.nu, m)
    C = ix.td.C_lower(m)
    i_ = induced_map(xs.i_map, m)
    hM = eta.cols
    hIX = eta.rows
    # L = ker zeta and lifts of its basis to H_m(dM)
    u = kernel_basis(zeta).vectors() if zeta.cols else []
    ubar = []
    for uj in u:
        y = solve(nu, uj)
        x = solve(C, y) if y is not NO_SOLUTION else NO_SOLUTION
        if x is NO_SOLUTION or list(eta @ list(i_ @ list(x))) != list(uj):
            raise StratError("could not lift a basis vector of ker zeta to H_m(dM)")
        ubar.append(x)
    l = len(u)
    wup = [d @ list(i_ @ list(x)) for x in ubar]
    ker_eta = kernel_basis(eta).vectors() if eta.cols else []
    Z = ker_eta + [list(v) for v in ebar]
    if l + len(Z) != hM:
        raise StratError("H_m(M) does not split as <i u> + ker eta + <e>")
    zup = [d @ list(z) for z in Z]
    Fm = RationalMatrix(wup + zup, rows=hM, cols=hM) if hM else RationalMatrix.zeros(0, 0)
    dual = inverse(Fm) if hM else Fm
    w_low = [dual.column(j) for j in range(l)]
    # W: complement of L containing eta(ebar)
    v = [eta @ list(x) for x in ebar]
    std = [[ONE if i == j else ZERO for i in range(hIX)] for j in range(hIX)]
    ext = extend_basis([list(x) for x in u] + [list(x) for x in v], std)
    Wb = [list(x) for x in v] + [list(x) for x in ext]
    Wm = RationalMatrix.from_columns(Wb, rows=hIX) if Wb else RationalMatrix.zeros(hIX, 0)
    ZW = zeta @ Wm if Wb else RationalMatrix.zeros(zeta.rows, 0)
    wbar = []
    for wj in w_low:
        c = solve(ZW, wj)
        if c is NO_SOLUTION:
            raise StratError("w_j is not in the image of zeta")
        wbar.append(Wm @ list(c))
    basis = [list(x) for x in u] + [list(x) for x in v] + [list(x) for x in wbar]
    r = len(v)
    if len(basis) != hIX:
        raise StratError("basis {u, v, wbar} has %d elements, H_m(IX) has dim %d" % (len(basis), hIX))
    Bm = RationalMatrix.from_columns(basis, rows=hIX) if hIX else RationalMatrix.zeros(0, 0)
    if hIX and rank(Bm) != hIX:
        raise StratError("{u, v, wbar} is not a basis")
    dualB = inverse(Bm) if hIX else Bm
    images = []
    for j in range(l):
        images.append(dualB.row(l + r + j))              # d(u_j) = wbar^j
    for j in range(r):
        images.append(zeta.T @ list(d @ list(ebar[j])))  # d(v_j) = zeta^* d_M(ebar_j)
    for j in range(l):
        images.append(dualB.row(j))                      # d(wbar_j) = u^j
    Im = RationalMatrix.from_columns(images, rows=hIX) if hIX else RationalMatrix.zeros(0, 0)
    beta = Im.T @ Bm if hIX else RationalMatrix.zeros(0, 0)
    D_IX = Im @ dualB if hIX else RationalMatrix.zeros(0, 0)
    S = beta.submatrix(rows=range(l, l + r), cols=range(l, l + r))
    checks = {
        "block_form": _block_form(beta, l, r),
        "symmetric": beta.is_symmetric(),
        "S_equals_novikov": S == nov.form,
        "d_IX_iso": rank(D_IX) == hIX,
        "eta_zeta_square": eta.T @ D_IX == dp @ zeta,
        "les_M": ix.checks["les_M"], "les_rel": ix.checks["les_rel"],
    }
    if m >= 1:
        rep = duality_iso_D(xs.bundle, k, k, m - 1, xs.fc_E)
        delta_star = ix.cone.connecting(m).T
        checks["nu_delta_square"] = (not rep.mismatch) and D_IX @ nu @ rep.matrix == delta_star
    sig = signature(beta).sigma if hIX else 0
    return SignatureReport(nov.sigma, sig, beta, S, l, r, Bm, checks)


def sigma_ih(xs: TwoStrataSpace) -> dict:
    """sigma_IH(X) = sigma(M, dM) + sigma(TE), with IH_mid(TE) = 0 making the second term vanish."""
    w = witt_check(xs)
    if not w["witt"]:
        raise HypothesisFailure("space is not Witt", w)
    k = (xs.c + 1) // 2
    try:
        th = ih_thom(xs.bundle, k)
    except HypothesisFailure as e:
        raise HypothesisFailure("not computable by this pipeline: %s" % e, e.detail) from None
    nov = novikov_signature(xs.lef)
    if th["IH_middle"] != 0:
        raise HypothesisFailure("IH of the Thom space does not vanish in the middle degree", th)
    return {"sigma_IH": nov.sigma, "sigma_M_hat": nov.sigma, "sigma_TE": 0, "IH_TE": list(th["IH_TE"])}
