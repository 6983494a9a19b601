import json

import pytest

from eulerob import examples as ex
from eulerob import oracle
from eulerob.cli import main
from eulerob.fuzz import run_fuzz
from eulerob.model import dumps_model, model_to_dict
from eulerob.obstruction import BLSResult, bls_evaluate


@pytest.fixture
def model_file(tmp_path):
    def write(m, name="m.json"):
        path = tmp_path / name
        path.write_text(dumps_model(m))
        return str(path)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_validate(capsys, model_file, node):
    code, out, _ = run(capsys, "validate", model_file(node))
    assert code == 0 and "valid" in out
    data = model_to_dict(node)
    data["links"] = {"s0": {"s1": 1}}
    path = model_file(node, "bad.json")
    with open(path, "w") as fh:
        json.dump(data, fh)
    code, report = run_json(capsys, "validate", path)
    assert code == 1
    assert "sullivan(s0,s1)" in [l for c in report["results"]["checks"] for l in c["loci"]]
    data = model_to_dict(node)
    del data["covectors"]["generic"]
    with open(path, "w") as fh:
        json.dump(data, fh)
    code, out, _ = run(capsys, "validate", path)
    assert code == 1 and "missing generic" in out


def test_parse_errors_exit_two(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"name": "x",\n "strata": [}')
    code, _, err = run(capsys, "validate", str(path))
    assert code == 2 and "line 2" in err
    path.write_text(json.dumps({"name": "x", "strata": [], "closure": [], "bogus": 1}))
    code, _, err = run(capsys, "eu", str(path))
    assert code == 2 and "bogus" in err
    code, _, err = run(capsys, "validate", str(tmp_path / "missing.json"))
    assert code == 2


def test_eu(capsys, model_file, node, cusp):
    code, report = run_json(capsys, "eu", model_file(node))
    assert code == 0
    assert report["results"]["origin_contributions"] == {"s1": 1, "s2": 1}
    assert report["results"]["eu_origin"] == 2
    code, report = run_json(capsys, "eu", model_file(cusp))
    assert report["results"]["eu_origin"] == 2
    code, report = run_json(capsys, "eu", "example:smooth-2")
    assert report["results"]["eu_origin"] == 1
    code, report = run_json(capsys, "eu", model_file(node), "--stratum", "s1")
    assert report["results"]["eu"] == {"s0": 1, "s1": 1, "s2": 0}
    code, out, _ = run(capsys, "eu", model_file(node))
    assert "Eu(X,0) = 2" in out


def test_eu_refuses_invalid_model(capsys, model_file, node):
    from eulerob.model import GermModel

    bad = GermModel(node.name, node.strata, node.closure, {"s0": {"s1": 1}}, node.covectors)
    code, report = run_json(capsys, "eu", model_file(bad))
    assert code == 1 and report["results"]["validation"]["valid"] is False


def test_bls_and_phi(capsys, model_file, node, cusp):
    code, r = run_json(capsys, "bls", model_file(cusp), "--alpha", "s0=2,s1=1", "--covector", "dx")
    res = r["results"]
    assert code == 0
    assert (res["lhs"], res["rhs"], res["defect"], res["admissible"]) == (2, 3, -1, False)
    assert (res["phi"], res["index"], res["eq8"]) == (1, -1, True)
    code, r = run_json(capsys, "bls", model_file(node), "--alpha", "s0=1,s1=1,s2=1")
    assert r["results"]["defect"] == -1
    code, r = run_json(capsys, "bls", model_file(node), "--alpha", "s0=2,s1=1,s2=1")
    assert r["results"]["defect"] == 0 and code == 0
    code, r = run_json(capsys, "bls", model_file(node), "--alpha-eu", "s1=1,s2=1")
    assert r["results"]["lhs"] == 2 and r["results"]["defect"] == 0
    code, r = run_json(capsys, "phi", model_file(cusp), "--alpha", "s0=2,s1=1", "--covector", "dx")
    assert code == 0 and r["results"]["phi"] == 1 and r["results"]["index"] == -1


def test_phi_reports_insufficient_data(capsys, model_file):
    m = ex.curve_germ([2], {"dx": {"sections": {"s1": 3}, "degenerate": ["s1"]}})
    code, r = run_json(capsys, "phi", model_file(m), "--alpha", "s0=2,s1=1", "--covector", "dx")
    assert code == 1
    assert r["results"]["index"] is None
    assert "insufficient intersection data" in r["results"]["note"]


def test_bls_usage_errors(capsys, model_file, node):
    path = model_file(node)
    assert run(capsys, "bls", path, "--alpha", "s0=1")[0] == 2
    assert run(capsys, "bls", path, "--alpha", "s0=1,s1=1,s2=1,s9=1")[0] == 2
    assert run(capsys, "bls", path, "--alpha", "s0=1,s1=1,s2=1", "--covector", "dz")[0] == 2
    assert run(capsys, "bls", path)[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["phi", path, "--alpha", "s0=1,s1=1,s2=1"])
    assert exc.value.code == 2


def test_fuzz_command(capsys):
    code, r = run_json(capsys, "fuzz", "--count", "50", "--seed", "3")
    assert code == 0 and r["results"]["ok"] and r["results"]["checked"] == 50
    _, again = run_json(capsys, "fuzz", "--count", "50", "--seed", "3")
    assert again == r
    assert run(capsys, "fuzz", "--count", "0")[0] == 2


def test_fuzz_reports_injected_sign_flip():
    def flipped(m, a, c):
        r = bls_evaluate(m, a, c)
        return BLSResult(r.lhs, r.rhs, -r.defect, r.admissible)

    report = run_fuzz(200, 11, evaluate=flipped)
    assert not report.ok
    failure = report.failure
    assert failure["property"] == "defect-is-skyscraper"
    assert failure["model"]["covectors"]["generic"]
    assert failure["iteration"] == report.checked - 1


def test_fuzz_parallel_matches_serial():
    assert run_fuzz(64, 5, jobs=2).as_dict() == run_fuzz(64, 5).as_dict()


def test_oracle_command(capsys, tmp_path):
    A = tmp_path / "annulus.json"
    A.write_text(json.dumps(oracle.complex_to_dict(oracle.annulus(4))))
    code, r = run_json(capsys, "oracle", str(A), "--op", "chi")
    assert code == 0 and r["results"]["chi"] == 0

    D = tmp_path / "disk.json"
    disk = oracle.simplex(2)
    D.write_text(json.dumps(oracle.complex_to_dict(disk)))
    B = tmp_path / "circle.json"
    B.write_text(json.dumps(oracle.complex_to_dict(oracle.boundary(disk))))
    code, r = run_json(capsys, "oracle", str(D), "--op", "chic", "--minus", str(B))
    assert r["results"]["chi_c"] == 1

    code, r = run_json(capsys, "oracle", str(A), "--op", "cone", "--vertex", "o")
    assert r["results"]["chi"] == 1
    C = tmp_path / "cone.json"
    C.write_text(json.dumps(r["results"]["cone"]))
    code, r = run_json(capsys, "oracle", str(C), "--op", "link", "--vertex", "o")
    assert oracle.complex_from_dict(r["results"]["link"]).simplices == oracle.annulus(4).simplices

    assert run(capsys, "oracle", str(A), "--op", "link")[0] == 2
    assert run(capsys, "oracle", str(A), "--op", "link", "--vertex", "zz")[0] == 2


def test_examples_command(capsys, tmp_path):
    code, out, _ = run(capsys, "examples", "list")
    assert code == 0 and "node" in out and "whitney-umbrella" in out
    for name in ex.CATALOG:
        code, out, _ = run(capsys, "examples", "emit", name)
        assert code == 0
        path = tmp_path / f"{name}.json"
        path.write_text(out)
        assert run(capsys, "validate", str(path))[0] == 0
    assert run(capsys, "examples", "emit", "nope")[0] == 2
