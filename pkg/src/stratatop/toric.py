"""Delzant polytopes: lattice checks, Morse indices of linear height functions, condition (C).

A vertex v with primitive edge directions u_1..u_n has Morse index
2 * #{i : <u_i, x> < 0} for the height function <., x>.  Odd Betti numbers
vanish, so b_{2i} is the number of index-2i vertices.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .qla import RationalMatrix, rank, solve


class PolytopeError(ValueError):
    pass


def _vec(v) -> tuple:
    return tuple(Fraction(x) for x in v)


def _dot(a, b):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def primitive(v) -> tuple:
    """Smallest positive multiple of v that is an integer vector with coprime entries."""
    v = _vec(v)
    if not any(v):
        raise PolytopeError("zero edge vector")
    den = math.lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = math.gcd(*ints)
    return tuple(x // g for x in ints)


def _det(rows) -> Fraction:
    m = [list(map(Fraction, r)) for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


@dataclass
class DelzantPolytope:
    vertices: list
    edges: list                 # pairs of vertex indices
    name: str = ""
    directions: dict | None = None   # optional user-supplied {vertex: [u, ...]} to cross-check

    def __post_init__(self):
        self.vertices = [_vec(v) for v in self.vertices]
        if not self.vertices:
            raise PolytopeError("polytope has no vertices")
        self.n = len(self.vertices[0])
        if any(len(v) != self.n for v in self.vertices):
            raise PolytopeError("vertices have mixed dimensions")
        if len(set(self.vertices)) != len(self.vertices):
            raise PolytopeError("repeated vertex")
        self.edges = sorted({tuple(sorted((int(a), int(b)))) for a, b in self.edges})
        for a, b in self.edges:
            if a == b or not (0 <= a < len(self.vertices) and 0 <= b < len(self.vertices)):
                raise PolytopeError("bad edge (%d, %d)" % (a, b))
        self.adj = {i: [] for i in range(len(self.vertices))}
        for a, b in self.edges:
            self.adj[a].append(b)
            self.adj[b].append(a)

    def edge_directions(self, i: int) -> list:
        v = self.vertices[i]
        return [primitive([w - x for w, x in zip(self.vertices[j], v)]) for j in sorted(self.adj[i])]

    # construction helpers
    @classmethod
    def polygon(cls, vertices, name: str = "") -> "DelzantPolytope":
        """Vertices in cyclic order."""
        m = len(vertices)
        return cls(list(vertices), [(i, (i + 1) % m) for i in range(m)], name)

    @classmethod
    def from_halfspaces(cls, halfspaces, name: str = "") -> "DelzantPolytope":
        """Rows (a_1..a_n, b) meaning <a, x> <= b; vertices and edges of the simple polytope they cut out."""
        hs = [(_vec(h[:-1]), Fraction(h[-1])) for h in halfspaces]
        if not hs:
            raise PolytopeError("no half-spaces")
        n = len(hs[0][0])
        verts, tight = [], []
        for sub in itertools.combinations(range(len(hs)), n):
            A = RationalMatrix([hs[i][0] for i in sub])
            if rank(A) < n:
                continue
            x = solve(A, [hs[i][1] for i in sub])
            x = tuple(x)
            if any(_dot(a, x) > b for a, b in hs) or x in verts:
                continue
            verts.append(x)
            tight.append({i for i, (a, b) in enumerate(hs) if _dot(a, x) == b})
        edges = []
        for i, j in itertools.combinations(range(len(verts)), 2):
            common = tight[i] & tight[j]
            if len(common) >= n - 1 and rank(RationalMatrix([hs[c][0] for c in common])) == n - 1:
                edges.append((i, j))
        return cls(verts, edges, name)

    def to_json(self) -> dict:
        obj = {"kind": "polytope", "vertices": [[str(x) if x.denominator != 1 else int(x) for x in v]
                                                for v in self.vertices],
               "edges": [list(e) for e in self.edges]}
        if self.name:
            obj["name"] = self.name
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "DelzantPolytope":
        name = obj.get("name", "")
        if "halfspaces" in obj:
            return cls.from_halfspaces(obj["halfspaces"], name)
        if "vertices" not in obj:
            raise PolytopeError("polytope JSON needs 'vertices' or 'halfspaces'")
        verts = obj["vertices"]
        if "edges" in obj:
            dirs = obj.get("directions")
            return cls(verts, obj["edges"], name, {int(k): v for k, v in dirs.items()} if dirs else None)
        if verts and len(verts[0]) == 2:
            return cls.polygon(verts, name)
        raise PolytopeError("edges are required above dimension 2")


@dataclass
class DelzantReport:
    valid: bool
    violations: list = field(default_factory=list)

    def to_json(self):
        return {"valid": self.valid, "violations": self.violations}


def verify_delzant(p: DelzantPolytope) -> DelzantReport:
    bad = []
    n = p.n
    for i, v in enumerate(p.vertices):
        nb = sorted(p.adj[i])
        if len(nb) != n:
            bad.append({"vertex": i, "reason": "has %d edges, expected %d" % (len(nb), n)})
            continue
        us = p.edge_directions(i)
        d = _det(us)
        if abs(d) != 1:
            bad.append({"vertex": i, "reason": "edge directions have determinant %s, not a Z-basis" % d})
            continue
        if p.directions is not None and i in p.directions:
            given = sorted(primitive(u) for u in p.directions[i])
            if given != sorted(us):
                bad.append({"vertex": i, "reason": "supplied edge directions differ from the vertex data"})
        # every other vertex lies in the cone v + R_{>=0} u_1 + ... + R_{>=0} u_n
        U = RationalMatrix.from_columns(us, rows=n)
        for j, w in enumerate(p.vertices):
            if j == i:
                continue
            coef = solve(U, [a - b for a, b in zip(w, v)])
            if any(c < 0 for c in coef):
                bad.append({"vertex": i, "reason": "not convex: vertex %d outside the tangent cone" % j})
                break
    return DelzantReport(not bad, bad)


# --------------------------------------------------------------------------
# Morse theory of height functions

@dataclass
class MorseReport:
    direction: tuple
    indices: list
    values: list
    condition_C: bool
    witness: tuple | None
    betti: tuple
    moore: dict

    def to_json(self):
        return {"direction": list(self.direction), "indices": self.indices,
                "values": [str(v) for v in self.values], "condition_C": self.condition_C,
                "witness": list(self.witness) if self.witness else None, "betti": list(self.betti),
                "moore_degrees": self.moore}


def genericity_violation(p: DelzantPolytope, x) -> str | None:
    x = _vec(x)
    for i in range(len(p.vertices)):
        for u in p.edge_directions(i):
            if _dot(u, x) == 0:
                return "<u, x> = 0 for edge direction %s at vertex %d" % (list(u), i)
    vals = {}
    for i, v in enumerate(p.vertices):
        f = _dot(v, x)
        if f in vals:
            return "<., x> takes the value %s at vertices %d and %d" % (f, vals[f], i)
        vals[f] = i
    return None


def is_generic(p: DelzantPolytope, x) -> bool:
    return genericity_violation(p, x) is None


def vertex_indices(p: DelzantPolytope, x) -> list:
    x = _vec(x)
    return [2 * sum(1 for u in p.edge_directions(i) if _dot(u, x) < 0) for i in range(len(p.vertices))]


def condition_C(p: DelzantPolytope, x) -> tuple:
    """(holds, witness): index(a) > index(b) must force f(a) > f(b); witness is a failing pair (a, b)."""
    msg = genericity_violation(p, x)
    if msg:
        raise PolytopeError("direction is not generic: " + msg)
    idx = vertex_indices(p, x)
    f = [_dot(v, _vec(x)) for v in p.vertices]
    for a in range(len(idx)):
        for b in range(len(idx)):
            if idx[a] > idx[b] and not f[a] > f[b]:
                return False, (a, b)
    return True, None


def moore_degrees(p: DelzantPolytope, x) -> dict:
    """Degrees with an equivariant Moore approximation given by a sublevel set."""
    ok, _ = condition_C(p, x)
    if ok:
        return {"all": True}
    # only the trivial approximations (empty set below degree 1, everything above the top)
    return {"all": False, "degrees": "k <= 0 or k > %d" % (2 * p.n)}


def morse_indices(p: DelzantPolytope, x) -> MorseReport:
    msg = genericity_violation(p, x)
    if msg:
        raise PolytopeError("direction is not generic: " + msg)
    idx = vertex_indices(p, x)
    vals = [_dot(v, _vec(x)) for v in p.vertices]
    betti = [0] * (2 * p.n + 1)
    for i in idx:
        betti[i] += 1
    ok, wit = condition_C(p, x)
    return MorseReport(tuple(int(a) for a in x), idx, vals, ok, wit, tuple(betti), moore_degrees(p, x))


def directions(n: int, bound: int):
    """Integer vectors ordered by max-norm 1..bound, then lexicographically."""
    for r in range(1, bound + 1):
        for x in itertools.product(range(-r, r + 1), repeat=n):
            if max(abs(c) for c in x) == r:
                yield x


@dataclass
class SearchReport:
    found: tuple | None
    tested: int
    generic: int
    all_generic_satisfy_C: bool
    first_failure: tuple | None = None

    def to_json(self):
        return {"found": list(self.found) if self.found else None, "tested": self.tested,
                "generic_tested": self.generic, "all_generic_satisfy_C": self.all_generic_satisfy_C,
                "first_failure": list(self.first_failure) if self.first_failure else None}


def find_generic_direction(p: DelzantPolytope, bound: int = 3, exhaustive: bool | None = None) -> SearchReport:
    """First generic x (by max-norm) satisfying (C).

    In dimension 2 the whole range is scanned by default so that (C) is checked
    for every generic direction tested."""
    if exhaustive is None:
        exhaustive = p.n == 2
    found, tested, generic, fail = None, 0, 0, None
    for x in directions(p.n, bound):
        tested += 1
        if not is_generic(p, x):
            continue
        generic += 1
        ok, _ = condition_C(p, x)
        if ok and found is None:
            found = x
        if not ok and fail is None:
            fail = x
        if found is not None and not exhaustive:
            break
    return SearchReport(found, tested, generic, fail is None, fail)


# --------------------------------------------------------------------------
# corpus polytopes and the corner-chopping generator

def simplex2(size: int = 1) -> DelzantPolytope:
    return DelzantPolytope.polygon([(0, 0), (size, 0), (0, size)], "simplex")


def square(size: int = 1) -> DelzantPolytope:
    return DelzantPolytope.polygon([(0, 0), (size, 0), (size, size), (0, size)], "square")


def hirzebruch(a: int, b: int = 1, h: int = 1) -> DelzantPolytope:
    """Trapezoid with slanted side of slope -1/a: the Hirzebruch surface H_a."""
    top = b + a * h
    if b <= 0:
        raise PolytopeError("top edge must have positive length")
    return DelzantPolytope.polygon([(0, 0), (top, 0), (b, h), (0, h)], "hirzebruch%d" % a)


def lattice_length(a, b) -> int:
    return math.gcd(*(int(y - x) for x, y in zip(a, b)))


def chop_corner(poly: DelzantPolytope, i: int, eps: int) -> DelzantPolytope:
    """Blow up vertex i of a lattice polygon: cut at lattice distance eps along both edges."""
    if poly.n != 2:
        raise PolytopeError("corner chopping is implemented for polygons")
    m = len(poly.vertices)
    vs = poly.vertices
    prev, nxt = vs[(i - 1) % m], vs[(i + 1) % m]
    v = vs[i]
    if eps <= 0 or eps >= lattice_length(v, prev) or eps >= lattice_length(v, nxt):
        raise PolytopeError("cut size %d too large for vertex %d" % (eps, i))
    u1 = primitive([a - b for a, b in zip(prev, v)])
    u2 = primitive([a - b for a, b in zip(nxt, v)])
    p1 = tuple(x + eps * u for x, u in zip(v, u1))
    p2 = tuple(x + eps * u for x, u in zip(v, u2))
    new = list(vs[:i]) + [p1, p2] + list(vs[i + 1:])
    return DelzantPolytope.polygon(new, poly.name)


def random_delzant_polygon(rng: random.Random, chops: int | None = None, size: int = 24) -> DelzantPolytope:
    p = simplex2(size)
    p.name = "chopped"
    steps = rng.randint(1, 6) if chops is None else chops
    for _ in range(steps):
        m = len(p.vertices)
        opts = []
        for i in range(m):
            room = min(lattice_length(p.vertices[i], p.vertices[(i - 1) % m]),
                       lattice_length(p.vertices[i], p.vertices[(i + 1) % m]))
            if room > 1:
                opts.append((i, room))
        if not opts:
            break
        i, room = rng.choice(opts)
        p = chop_corner(p, i, rng.randint(1, room - 1))
    return p


def box(a: int, b: int, c: int) -> DelzantPolytope:
    hs = [(-1, 0, 0, 0), (1, 0, 0, a), (0, -1, 0, 0), (0, 1, 0, b), (0, 0, -1, 0), (0, 0, 1, c)]
    return DelzantPolytope.from_halfspaces(hs, "box%dx%dx%d" % (a, b, c))


def analyze(p: DelzantPolytope, direction=None, bound: int = 3) -> dict:
    ver = verify_delzant(p)
    out = {"name": p.name, "dimension": p.n, "vertices": len(p.vertices), "delzant": ver.to_json()}
    if not ver.valid:
        return out
    if direction is None:
        sr = find_generic_direction(p, bound)
        out["search"] = sr.to_json()
        direction = sr.found
    if direction is not None:
        out["morse"] = morse_indices(p, direction).to_json()
    return out
