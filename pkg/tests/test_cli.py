import json
import shutil
import subprocess
import sys

from stratatop.cli import main
from stratatop.corpus import corpus_dir


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_homology_json(capsys):
    code, out, _ = run(capsys, "homology", "cp2_9", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["betti"] == [1, 0, 1, 0, 1]
    assert rep["euler_characteristic"] == 3


def test_homology_reduced(capsys):
    code, out, _ = run(capsys, "homology", "sphere2", "--reduced", "--json")
    assert json.loads(out)["betti"] == [0, 0, 1]


def test_quiet_prints_nothing(capsys):
    code, out, err = run(capsys, "homology", "torus7", "--quiet")
    assert (code, out, err) == (0, "", "")


def test_human_output(capsys):
    code, out, _ = run(capsys, "signature", "cp2_isolated")
    assert code == 0
    assert "verdict: sigma(IX) = sigma(M,dM) = 1" in out


def test_truncate_bundle(capsys):
    code, out, _ = run(capsys, "truncate", "product_s2_s2", "--k", "1", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["exact"] and rep["method"] == "product"


def test_truncate_needs_k(capsys):
    code, _, err = run(capsys, "truncate", "sphere2")
    assert code == 1 and "--k" in err


def test_ob_ring(capsys):
    code, out, _ = run(capsys, "bundle-ob", "hopf_suspension_ring", "--k", "2", "--l", "1", "--degree", "2", "--json")
    assert code == 0
    assert json.loads(out)["verdict"] == "nonzero, dim 1"


def test_ob_perversity_sequence(capsys):
    code, out, _ = run(capsys, "bundle-ob", "product_s2_s2", "--perversity", "0,1", "--json")
    rep = json.loads(out)
    assert code == 0 and (rep["k"], rep["l"]) == (1, 2)
    assert all(o["verdict"] == "zero" for o in rep["ob"])


def test_bad_perversity(capsys):
    code, _, err = run(capsys, "bundle-ob", "product_s2_s2", "--perversity", "1,1")
    assert code == 1
    code, _, err = run(capsys, "bundle-ob", "product_s2_s2", "--perversity", "a,b")
    assert code == 1


def test_duality_ok(capsys):
    code, out, _ = run(capsys, "duality", "circle_in_s4", "--json")
    assert code == 0 and json.loads(out)["verdict"] == "duality holds"


def test_duality_hopf_exit_2(capsys):
    code, out, _ = run(capsys, "duality", "hopf_control", "--json")
    assert code == 2
    assert "degree-1" in json.loads(out)["hypothesis_failure"]


def test_duality_ring_exit_2(capsys):
    code, _, _ = run(capsys, "duality", "hopf_suspension_ring", "--k", "2", "--l", "1", "--quiet")
    assert code == 2


def test_intersection_space(capsys):
    code, out, _ = run(capsys, "intersection-space", "circle_in_s4", "--json")
    rep = json.loads(out)
    assert rep["betti_reduced_IX"] == [0, 0, 2, 0, 0]
    assert rep["collapse_agrees"] and rep["les_M_exact"] and rep["les_rel_exact"]


def test_wrong_input_kind(capsys):
    code, _, err = run(capsys, "duality", "sphere2")
    assert code == 1 and "space" in err


def test_ih(capsys):
    code, out, _ = run(capsys, "ih", "cp2_isolated", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["sigma_IH"] == 1 and rep["witt"]


def test_toric(capsys):
    code, out, _ = run(capsys, "toric", "analyze", "box_c_violation", "--json")
    rep = json.loads(out)
    assert code == 0
    assert rep["morse"]["condition_C"] is False and rep["morse"]["witness"] == [3, 4]


def test_toric_direction_override(capsys):
    code, out, _ = run(capsys, "toric", "analyze", "polygon_square", "--direction", "1,2", "--json")
    assert json.loads(out)["morse"]["betti"] == [1, 0, 2, 0, 1]
    code, _, err = run(capsys, "toric", "analyze", "polygon_square", "--direction", "1,2,3")
    assert code == 1
    code, _, err = run(capsys, "toric", "analyze", "polygon_square", "--direction", "1,1")
    assert code == 1 and "generic" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "homology", "no_such_file.json")
    assert code == 1 and "no such file" in err


def test_json_is_byte_stable(capsys):
    a = run(capsys, "signature", "circle_in_s4", "--json")[1]
    b = run(capsys, "signature", "circle_in_s4", "--json")[1]
    assert a == b


def test_selftest_filter(capsys):
    code, out, _ = run(capsys, "selftest", "--filter", "toric", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["passed"] == 1 and rep["failed"] == 0


def test_corrupted_corpus(tmp_path, monkeypatch, capsys):
    d = tmp_path / "corpus"
    shutil.copytree(corpus_dir(), d)
    (d / "sphere2.json").write_text('{"kind": "complex", "vertices": [0, 1')
    monkeypatch.setenv("STRATATOP_CORPUS", str(d))
    code, _, err = run(capsys, "homology", "sphere2")
    assert code == 1 and "invalid JSON" in err
    code, _, _ = run(capsys, "selftest", "--filter", "corpus", "--quiet")
    assert code == 1


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "stratatop", "homology", "torus7", "--json"], capture_output=True,
                       text=True, check=False)
    assert r.returncode == 0 and json.loads(r.stdout)["betti"] == [1, 2, 1]
