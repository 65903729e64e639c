"""Regenerate the JSON corpus shipped in src/stratatop/corpus.

    python3 tools/make_corpus.py [outdir]
"""
import itertools
import json
import random
import sys
from pathlib import Path

from stratatop import simp, toric

OUT = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "src/stratatop/corpus"


def dump(name, obj):
    OUT.mkdir(parents=True, exist_ok=True)
    with open(OUT / (name + ".json"), "w") as fh:
        json.dump(obj, fh, indent=1, sort_keys=False)
        fh.write("\n")


def complex_obj(k, name, note=None):
    obj = {"kind": "complex", **k.to_json(), "name": name}
    if note:
        obj["note"] = note
    return obj


def cp2_9():
    """Nine vertices 3a+b, facets: translates under Z/3 x Z/3 of four base simplices."""
    base = [[0, 1, 2, 3, 4], [0, 1, 3, 4, 6], [0, 1, 3, 5, 7], [0, 1, 4, 5, 6]]
    fs = set()
    for x, y in itertools.product(range(3), repeat=2):
        for f in base:
            fs.add(tuple(sorted(3 * ((v // 3 + x) % 3) + (v % 3 + y) % 3 for v in f)))
    k = simp.SimplicialComplex(range(9), sorted(fs), "cp2_9")
    # propagated orientation gives cup pairing -1 on H^2; flip to the complex orientation
    k.orientation = -1
    return k


def complexes():
    dump("sphere2", complex_obj(simp.simplex_boundary(3), "sphere2", "boundary of the 3-simplex"))
    dump("sphere3", complex_obj(simp.simplex_boundary(4), "sphere3", "boundary of the 4-simplex"))
    dump("octahedron", complex_obj(simp.cross_polytope(3), "octahedron"))
    dump("cell16", complex_obj(simp.cross_polytope(4), "cell16", "16-cell, boundary of the 4-dim cross-polytope"))
    dump("torus7", complex_obj(simp.torus7(), "torus7", "seven-vertex (hexagonal) torus"))
    dump("rp2_6", complex_obj(simp.rp2_6(), "rp2_6", "six-vertex projective plane"))
    dump("circle9", complex_obj(simp.polygon(9), "circle9"))
    dump("circle3", complex_obj(simp.simplex_boundary(2), "circle3"))
    dump("cp2_9", complex_obj(cp2_9(), "cp2_9", "nine-vertex complex projective plane"))


def bundles():
    dump("product_s2_s3", {"kind": "bundle", "variant": "product", "name": "S2 x S3",
                           "base": "sphere2", "fiber": "sphere3"})
    dump("product_t2_s2", {"kind": "bundle", "variant": "product", "name": "T2 x S2",
                           "base": "torus7", "fiber": "sphere2"})
    dump("product_s2_s2", {"kind": "bundle", "variant": "product", "name": "S2 x S2",
                           "base": "sphere2", "fiber": "sphere2"})
    anti = lambda k: [[simp._unlabel(v), simp._unlabel(k.vertices[k.vertex_index(v) ^ 1])] for v in k.vertices]
    c4, c3 = simp.cross_polytope(4), simp.cross_polytope(3)
    dump("flat_z2_rp3", {"kind": "bundle", "variant": "flat", "name": "(S3 x S2)/(Z/2), antipodal on both",
                         "cover": "cell16", "fiber": "octahedron", "order": 2,
                         "deck": [anti(c4)], "fiber_action": [anti(c3)]})
    dump("flat_z3_torus", {"kind": "bundle", "variant": "flat", "name": "(S1 x S1)/(Z/3), rotations",
                           "cover": "circle9", "fiber": "circle3", "order": 3,
                           "deck": [[[i, (i + 3) % 9] for i in range(9)]],
                           "fiber_action": [[[0, 1], [1, 2], [2, 0]]]})
    # ring data only: a 4-dim total space over S^2 whose H^2 pairing is diag(1, -1)
    dump("hopf_suspension_ring", {
        "kind": "bundle", "variant": "ring", "name": "ring model with nonvanishing ob_2(2,1)",
        "dims": [1, 0, 2, 0, 1], "base_dim": 2,
        "products": {"2,2": [[["1"], ["0"]], [["0"], ["-1"]]]},
        "top_eval": ["1"],
        "cotruncations": {
            "1": {"dims": [0, 0, 1, 0, 1], "C_star": {"2": [["1"], ["0"]], "4": [["1"]]}},
            "2": {"dims": [0, 0, 1, 0, 1], "C_star": {"2": [["1"], ["0"]], "4": [["1"]]}}}})
    dump("hopf_explicit", {"kind": "bundle", "variant": "explicit", "name": "Hopf S1 -> S3 -> S2",
                           "total": "sphere3", "base": "sphere2", "fiber": "circle3"})


def spaces():
    k = cp2_9()
    facet = list(k.labels(k.facets()[5]))
    link = {"facets": [[v for v in facet if v != w] for w in facet]}
    dump("cp2_isolated", {"kind": "space", "name": "CP2 with one isolated singular point (cone on S3)",
                          "M": {"delete_facet": {"of": "cp2_9", "facet": facet}},
                          "bundle": {"variant": "product", "base": {"point": True}, "fiber": link},
                          "identification": "fiber"})
    dump("d4", {"kind": "space", "name": "D4 with the cone on S3 attached",
                "M": {"simplex": 4},
                "bundle": {"variant": "product", "base": {"point": True}, "fiber": {"simplex_boundary": 4}},
                "identification": "fiber"})
    dump("product_double", {"kind": "space", "name": "S2 x D2 closed up by the disk bundle (S2 x S2)",
                            "M": {"product": [{"simplex_boundary": 3}, {"simplex": 2}]},
                            "bundle": {"variant": "product", "base": {"simplex_boundary": 3},
                                       "fiber": {"simplex_boundary": 2}}})
    dump("circle_in_s4", {"kind": "space", "name": "S4 stratified by a circle (D2 x S2 with S1 x cS2)",
                          "M": {"product": [{"simplex": 2}, {"simplex_boundary": 3}]},
                          "bundle": {"variant": "product", "base": {"simplex_boundary": 2},
                                     "fiber": {"simplex_boundary": 3}}})
    dump("s2s3_double", {"kind": "space", "name": "S2 x D4 closed up by the cone bundle on S2 x S3",
                         "M": {"product": [{"simplex_boundary": 3}, {"simplex": 4}]},
                         "bundle": "product_s2_s3"})
    dump("hopf_control", {"kind": "space", "name": "CP2 stratified by CP1 (Hopf link bundle)",
                          "M": {"simplex": 4}, "bundle": "hopf_explicit"})


def polytopes():
    for p in (toric.simplex2(), toric.square(), toric.hirzebruch(1), toric.hirzebruch(2)):
        dump("polygon_" + p.name, p.to_json())
    rng = random.Random(2024)
    for i in range(4):
        p = toric.random_delzant_polygon(rng, chops=i + 1)
        p.name = "chopped%d" % (i + 1)
        dump("polygon_" + p.name, p.to_json())
    b = toric.box(10, 1, 1)
    obj = b.to_json()
    obj["direction"] = [1, 2, 3]
    obj["note"] = "condition (C) fails for this direction"
    dump("box_c_violation", obj)


if __name__ == "__main__":
    complexes()
    bundles()
    spaces()
    polytopes()
    print("wrote", len(list(OUT.glob("*.json"))), "files to", OUT)
