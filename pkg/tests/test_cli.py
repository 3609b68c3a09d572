"""Command-line interface: verbs, exit codes, determinism, file schemas."""

import contextlib
import io
import json

from flagcurv.cli import run


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = run(argv)
    return code, out.getvalue(), err.getvalue()


def test_roots_verb():
    code, out, err = invoke(["roots", "G2", "2"])
    assert code == 0
    payload = json.loads(out)
    assert payload["family"] == "G2" and len(payload["roots"]) == 12
    code, out, _ = invoke(["roots", "B", "3"])
    assert code == 0 and len(json.loads(out)["roots"]) == 18
    code, _, _ = invoke(["roots", "D", "2"])
    assert code == 1


def test_space_build_preset():
    code, out, _ = invoke(["space", "build", "--preset", "preset:sphere_un(3)"])
    assert code == 0
    info = json.loads(out)
    assert info["dim_m"] == 5 and info["rank_equality"] and info["case"] == "I"


def test_space_build_from_file(tmp_path):
    spec = {
        "algebra": {"factors": [{"family": "A", "rank": 1, "scale": "1"}],
                    "abelian_dim": 0},
        "cartan_h": [],
        "h_roots": [],
        "name": "su(2) group from file",
    }
    path = tmp_path / "space.json"
    path.write_text(json.dumps(spec))
    code, out, _ = invoke(["space", "build", "--file", str(path)])
    assert code == 0
    info = json.loads(out)
    assert info["dim_m"] == 3 and info["dim_h"] == 0


def test_space_build_file_with_h_roots(tmp_path):
    from flagcurv.rootsys import rv
    spec = {
        "algebra": {"factors": [{"family": "B", "rank": 2, "scale": "1"}],
                    "abelian_dim": 0},
        "cartan_h": [{"factors": [[{"a": "0", "b": "0", "c": "0", "d": "0"},
                                   {"a": "1", "b": "0", "c": "0", "d": "0"}]],
                      "abelian": []}],
        "h_roots": [{"factor": 0,
                     "root": [{"a": "0", "b": "0", "c": "0", "d": "0"},
                              {"a": "1", "b": "0", "c": "0", "d": "0"}]}],
        "name": "so(5)/(so(3)+t) slice",
    }
    path = tmp_path / "b2.json"
    path.write_text(json.dumps(spec))
    code, out, _ = invoke(["space", "build", "--file", str(path)])
    assert code == 0
    info = json.loads(out)
    assert info["dim_h"] == 3 and info["dim_m"] == 7


def test_classify_verb():
    code, out, _ = invoke(["classify", "--space", "preset:berger_sp2"])
    assert code == 0
    res = json.loads(out)
    assert res["case"] == "III" and res["verdict"]["outcome"] == "survivor"
    code, out, _ = invoke(["classify", "--space", "preset:a1a1_diagonal(1)"])
    res = json.loads(out)
    assert code == 0 and res["verdict"]["outcome"] == "excluded"


def test_curvature_verb_and_determinism():
    argv = ["curvature", "--space", "preset:bn_excluded_subcase1(2)",
            "--metric", "quartic:5", "--samples", "12", "--seed", "3"]
    c1, o1, _ = invoke(argv)
    c2, o2, _ = invoke(argv)
    assert c1 == c2 == 0
    assert o1 == o2
    rep = json.loads(o1)
    assert rep["flags"] == 12 and "tolerances" in rep


def test_curvature_with_norm_file(tmp_path):
    from flagcurv.coset import preset
    from flagcurv.norms import random_invariant_norm, norm_to_json_str
    sp = preset("a1a1_diagonal", 1)
    norm = random_invariant_norm(sp, 2)
    path = tmp_path / "norm.json"
    path.write_text(norm_to_json_str(norm))
    code, out, _ = invoke(["curvature", "--space", "preset:a1a1_diagonal(1)",
                           "--metric", str(path), "--samples", "5", "--seed", "1"])
    assert code == 0
    assert json.loads(out)["flags"] == 5


def test_witness_verb():
    code, out, _ = invoke(["witness", "--space", "preset:bn_excluded_subcase1(2)",
                           "--seed", "7"])
    assert code == 0
    rep = json.loads(out)
    assert rep["pass"] and rep["u_map_norm"] < 1e-7
    code, _, _ = invoke(["witness", "--space", "preset:sphere_un(3)"])
    assert code == 1  # survivors carry no exclusion witness


def test_verify_verb_exit_codes():
    code, out, _ = invoke(["verify", "--theorem", "2", "--max-rank", "4"])
    assert code == 0
    rep = json.loads(out)
    assert rep["match"] and "rows" not in rep
    code, out, _ = invoke(["verify", "--theorem", "2", "--max-rank", "4", "--full"])
    assert code == 0 and "rows" in json.loads(out)
    code, out, _ = invoke(["verify", "--theorem", "1", "--max-rank", "2"])
    assert code == 0  # the scanned-rank restriction keeps small bounds consistent


def test_verify_mismatch_exits_three(monkeypatch):
    from flagcurv import obstruct

    def broken(part, max_rank=8):
        return {"part": part, "max_rank": max_rank, "survivors": [],
                "expected": ["x"], "missing": ["x"], "extra": [],
                "unresolved": [], "rows": [], "match": False}

    monkeypatch.setattr(obstruct, "verify_theorem", broken)
    code, out, _ = invoke(["verify", "--theorem", "1"])
    assert code == 3
    assert not json.loads(out)["match"]


def test_usage_and_validation_errors():
    assert invoke(["frobnicate"])[0] == 2
    assert invoke([])[0] == 2
    code, out, _ = invoke(["classify", "--space", "preset:aloff_wallach(1,-1)"])
    assert code == 1
    assert "error" in json.loads(out)
    assert invoke(["space", "build", "--file", "/nonexistent.json"])[0] == 1
