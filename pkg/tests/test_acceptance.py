"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line."""
import random
import time

from stratatop import simp
from stratatop.bundle import HypothesisFailure, fiberwise_truncation, flat_cohomology, ob_all
from stratatop.chain import homotopy_pushout, mayer_vietoris, transfer_report, truncate, truncation_contract
from stratatop.cli import main
from stratatop.corpus import corpus_files, load_any, load_polytope_file
from stratatop.qla import RationalMatrix, diagonalize_symmetric, signature
from stratatop.randgen import (random_augmented_complex, random_augmented_map, random_chain_map, random_complex,
                               random_cyclic_action, random_unimodular)
from stratatop.strat import duality_check, ih_thom, intersection_form_IX, sigma_ih
from stratatop.toric import (find_generic_direction, morse_indices, random_delzant_polygon, simplex2, square,
                             verify_delzant)

BUNDLES = [n[:-5] for n in corpus_files() if load_any(n)[0] == "bundle"]
SPACES = [n[:-5] for n in corpus_files() if load_any(n)[0] == "space"]


VERDICTS = []


def verdict(n, title, ok, detail=""):
    line = "AC%-2d %s  %s%s" % (n, "PASS" if ok else "FAIL", title, ("  [" + detail + "]") if detail else "")
    print(line)
    VERDICTS.append(line)
    assert ok, detail


def test_ac01_truncation_contract():
    rng = random.Random(101)
    t0 = time.perf_counter()
    bad, count = [], 0
    for _ in range(120):
        c = random_complex(rng, 6, 8).complex
        for k in range(-1, c.top_degree + 2):
            if truncation_contract(c, truncate(c, k)) != []:
                bad.append(k)
        count += 1
    dt = time.perf_counter() - t0
    verdict(1, "truncation contract", bad == [] and count >= 100 and dt < 30,
            "%d complexes, %d failures, %.1fs" % (count, len(bad), dt))


def test_ac02_rank_additivity():
    bad, checked = [], 0
    for name in BUNDLES:
        bm = load_any(name)[1]
        for k in range(0, bm.c + 2):
            try:
                td = fiberwise_truncation(bm, k)
            except HypothesisFailure:
                continue  # no truncation of this degree exists (Hopf control)
            for r, (a, b, q) in td.dims().items():
                checked += 1
                if a + q != b:
                    bad.append((name, k, r))
            if not td.exact():
                bad.append((name, k, "exact"))
    verdict(2, "rank additivity on corpus bundles", bad == [] and checked > 0, "%d degrees checked" % checked)


def test_ac03_ob_vanishes_on_products():
    t0 = time.perf_counter()
    a = [o.dim for o in ob_all(load_any("product_s2_s3")[1], 2, 2)]
    b = [o.dim for o in ob_all(load_any("product_t2_s2")[1], 1, 2)]
    c = [o.dim for o in ob_all(load_any("product_t2_s2")[1], 2, 1)]
    dt = time.perf_counter() - t0
    ok = a == [0] * 6 and b == [0] * 5 and c == [0] * 5 and dt < 120
    verdict(3, "ob = 0 on global products", ok, "S2xS3 %s, T2xS2 %s %s, %.1fs" % (a, b, c, dt))


def test_ac04_ring_obstruction():
    d = ob_all(load_any("hopf_suspension_ring")[1], 2, 1)[2].dim
    verdict(4, "ring ob_2(2,1) has dimension 1", d == 1, "dim %d" % d)


def test_ac05_duality():
    results = {}
    for name in SPACES:
        xs = load_any(name)[1]
        try:
            rep = duality_check(xs)
        except HypothesisFailure:
            continue  # the Hopf control has no truncation, so no ob = 0 space
        results[name] = rep.dims_match and rep.diagram_commutes
    ok = all(results.values()) and len(results) == len(SPACES) - 1
    verdict(5, "duality on spaces with ob = 0", ok, ", ".join(sorted(results)))


def test_ac06_signature_block_form():
    want = {"cp2_isolated": 1, "d4": 0, "product_double": 0}
    got = {}
    for name in want:
        r = intersection_form_IX(load_any(name)[1])
        got[name] = (r.sigma_IX, r.sigma_M, r.block_form)
    ok = got == {n: (s, s, True) for n, s in want.items()}
    verdict(6, "sigma(IX) = sigma(M,dM) with block form", ok, str(got))


def test_ac07_ih_thom_and_signature():
    mids = {}
    for name in SPACES:
        xs = load_any(name)[1]
        if xs.n != 4 or name == "hopf_control":
            continue
        mids["TE(" + name + ")"] = ih_thom(xs.bundle, (xs.c + 1) // 2)["IH_middle"]
    for name in BUNDLES:
        bm = load_any(name)[1]
        try:
            mids[name] = ih_thom(bm, (bm.c + 1) // 2)["IH_middle"]
        except HypothesisFailure:
            continue
    sig = {}
    for name in SPACES:
        xs = load_any(name)[1]
        if xs.n == 4 and name != "hopf_control":
            s = sigma_ih(xs)
            sig[name] = (s["sigma_IH"], intersection_form_IX(xs).sigma_M)
    ok = all(v == 0 for v in mids.values()) and all(a == b for a, b in sig.values()) and sig
    verdict(7, "IH_mid(TE) = 0 and sigma_IH = sigma(M,dM)", bool(ok), "%d Thom spaces, %d spaces" % (len(mids), len(sig)))


def test_ac08_hopf_control_exit_2(capsys):
    code = main(["duality", "hopf_control", "--json"])
    out = capsys.readouterr().out
    verdict(8, "Hopf control reports no degree-1 truncation", code == 2 and "degree-1" in out, "exit %d" % code)


def test_ac09_flat_transfer():
    rng = random.Random(909)
    z2 = flat_cohomology(load_any("flat_z2_rp3")[1])
    z3 = flat_cohomology(load_any("flat_z3_torus")[1])
    rand = [transfer_report(a.complex, a)["agree"] for a in (random_cyclic_action(rng) for _ in range(50))]
    ok = z2["agree"] and z3["agree"] and z3["coinvariants"] == (1, 2, 1) and all(rand) and len(rand) == 50
    verdict(9, "flat transfer", ok, "Z/3 torus %s, %d random actions" % (z3["coinvariants"], len(rand)))


def test_ac10_mayer_vietoris():
    rng = random.Random(1010)
    n = plain = 0
    while n < 110:
        X, A, B = (random_complex(rng, 3, 6) for _ in range(3))
        if not sum(X.complex.dims):
            continue
        n += 1
        plain += mayer_vietoris(homotopy_pushout(random_chain_map(rng, X, A), random_chain_map(rng, X, B))).exact
    red = 0
    for _ in range(40):
        X, A, B = (random_augmented_complex(rng, 3, 5) for _ in range(3))
        po = homotopy_pushout(random_augmented_map(rng, X, A), random_augmented_map(rng, X, B))
        red += mayer_vietoris(po, reduced=True).exact
    verdict(10, "Mayer-Vietoris exactness", plain == n >= 100 and red == 40, "%d/%d plain, %d/40 reduced" % (plain, n, red))


def test_ac11_poincare_lefschetz():
    names = {"sphere2": "boundary of the 3-simplex", "sphere3": "boundary of the 4-simplex", "torus7": "torus",
             "cp2_9": "CP2"}
    iso = {n: all(simp.duality_is_iso(load_any(n)[1]).values()) for n in names}
    rng = random.Random(1111)
    sym_ok, trials = True, 0
    for name in ("cp2_isolated", "d4", "circle_in_s4", "product_double"):
        lef = load_any(name)[1].lef
        m = lef.n // 2
        d, dp = lef.d(m), lef.dp(m)
        for _ in range(10):
            v = [rng.randint(-5, 5) for _ in range(d.cols)]
            w = [rng.randint(-5, 5) for _ in range(dp.cols)]
            a = sum(x * y for x, y in zip(d @ v, w)) if d.rows else 0
            b = sum(x * y for x, y in zip(dp @ w, v)) if dp.rows else 0
            sym_ok &= a == b
            trials += 1
    verdict(11, "cap duality and middle-degree symmetry", all(iso.values()) and sym_ok,
            "%d complexes, %d random pairs" % (len(iso), trials))


def test_ac12_toric():
    s = morse_indices(simplex2(), (1, 2)).betti
    q = morse_indices(square(), (1, 2)).betti
    polys = [load_polytope_file(n)[0] for n in corpus_files() if n.startswith("polygon_")]
    rng = random.Random(1212)
    polys += [random_delzant_polygon(rng) for _ in range(50)]
    ok = s == (1, 0, 1, 0, 1) and q == (1, 0, 2, 0, 1)
    for p in polys:
        sr = find_generic_direction(p, 3)
        ok &= verify_delzant(p).valid and sr.found is not None and sr.all_generic_satisfy_C
        ok &= morse_indices(p, sr.found).moore == {"all": True}
    verdict(12, "toric Betti numbers and condition (C)", bool(ok), "%d polygons" % len(polys))


def test_ac13_signature_kernel():
    rng = random.Random(1313)
    base = (signature(RationalMatrix([[0, 1], [1, 0]])).sigma, signature(RationalMatrix([[1]])).sigma)
    cong = diag = 0
    for _ in range(100):
        n = rng.randint(1, 6)
        a = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                a[i][j] = a[j][i] = rng.randint(-5, 5)
        S = RationalMatrix(a)
        P = random_unimodular(rng, n)
        cong += signature(P.T @ S @ P) == signature(S)
        Q, D = diagonalize_symmetric(S)
        diag += Q.T @ S @ Q == D
    verdict(13, "signature kernel", base == (0, 1) and cong == 100 and diag == 100,
            "base %s, %d congruences, %d diagonalizations" % (base, cong, diag))
