import json

import pytest

from arithtop.cli import main
from arithtop.covering import build_anisotropic, build_isotropic, build_shrinking, perturb_transfer
from arithtop.schema import form_from_literal

HYP3 = {"group": {"p": 3, "exponents": [1, 1]}, "gram": [["0", "1/3"], ["1/3", "0"]]}


def run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_form_diagonalize_hyperbolic_p3(capsys, tmp_path):
    code, out, _ = run(capsys, ["form", "diagonalize", "--input", write(tmp_path, "f.json", HYP3)])
    assert code == 0
    rep = json.loads(out)
    f = form_from_literal(HYP3)
    B = rep["basis"]
    # oracle: the returned basis is orthogonal, generating, and reproduces the diagonal
    assert f.pair(tuple(B[0]), tuple(B[1])) == 0
    assert [str(f.pair(tuple(b), tuple(b))) for b in B] == rep["diagonal"]
    det = (B[0][0] * B[1][1] - B[0][1] * B[1][0]) % 3
    assert det != 0
    assert rep["orders"] == [3, 3]


def test_form_diagonalize_p2_reports_normal_form(capsys, tmp_path):
    f = {"group": {"p": 2, "exponents": [1, 1]}, "gram": [["0", "1/2"], ["1/2", "0"]]}
    code, out, _ = run(capsys, ["form", "diagonalize", "--input", write(tmp_path, "f.json", f)])
    assert code == 0
    assert json.loads(out)["normal_form"]["blocks"]


def test_form_check_and_isotropy(capsys, tmp_path):
    obj = dict(HYP3, z=[1, 0])
    code, out, _ = run(capsys, ["form", "check", "--input", write(tmp_path, "f.json", obj)])
    rep = json.loads(out)
    assert code == 0 and rep["nondegenerate"] is True and rep["isotropy"] == "isotropic"


def test_form_parity(capsys, tmp_path):
    obj = {"form": HYP3, "zeta": [[1, 0], [0, 1]]}
    code, out, _ = run(capsys, ["form", "parity", "--input", write(tmp_path, "f.json", obj)])
    assert code == 0 and json.loads(out)["dim_image"] == 0


def test_tower(capsys):
    code, out, _ = run(capsys, ["tower", "--r1", "4", "--p", "2", "--depth", "5"])
    rep = json.loads(out)
    assert code == 0
    assert rep["r"] == [4, 6, 15, 105, 5460]
    assert rep["e"] == [None, "2^3", "2^5", "2^14", "2^104"]


def test_ring_classify_two_tables(capsys):
    code, out, _ = run(capsys, ["ring", "classify-15-4"])
    rep = json.loads(out)
    assert code == 0 and len(rep["tables"]) == 2


def test_ring_z2z4_and_quaternion(capsys):
    code, out, _ = run(capsys, ["ring", "z2z4"])
    assert code == 0 and json.loads(out)["ring"]["verified"]
    code, out, _ = run(capsys, ["ring", "quaternion-facts"])
    assert code == 0 and all(f["verified"] for f in json.loads(out)["facts"])


def test_module_tate_and_classify(capsys, tmp_path):
    m = {"p": 2, "exponents": [1], "zeta": [[1]]}
    path = write(tmp_path, "m.json", m)
    code, out, _ = run(capsys, ["module", "tate", "--input", path])
    rep = json.loads(out)["tate"]
    assert code == 0 and rep["h_even"] == rep["h_odd"] == 1
    code, out, _ = run(capsys, ["module", "classify", "--input", path])
    assert code == 0


def test_module_random_respects_seed(capsys):
    _, a, _ = run(capsys, ["module", "random", "--p", "3", "--seed", "7"])
    _, b, _ = run(capsys, ["module", "random", "--p", "3", "--seed", "7"])
    assert a == b


def test_cohom_betti_and_zpzp(capsys, tmp_path):
    path = write(tmp_path, "g.json", {"family": "Q", "order": 8})
    code, out, _ = run(capsys, ["cohom", "betti", "--input", path, "--max-degree", "4"])
    assert code == 0 and json.loads(out)["table"]["dims"] == [1, 2, 2, 1, 1]
    code, out, _ = run(capsys, ["cohom", "zpzp", "--p", "2", "--max-degree", "4"])
    assert code == 0


def test_cohom_les_jobs_do_not_change_output(capsys, tmp_path):
    path = write(tmp_path, "g.json", {"family": "D", "order": 8})
    _, serial, _ = run(capsys, ["cohom", "les", "--input", path, "--max-degree", "2"])
    _, parallel, _ = run(capsys, ["cohom", "les", "--input", path, "--max-degree", "2", "--jobs", "3"])
    assert serial == parallel
    rep = json.loads(serial)
    assert rep["exact"] and len(rep["reports"]) == 3


def test_covering_commands(capsys, tmp_path):
    for m in (build_anisotropic(2), build_shrinking(3, 2), build_isotropic(3)):
        path = write(tmp_path, "m.json", m.to_json())
        code, out, _ = run(capsys, ["covering", "validate", "--input", path])
        assert code == 0 and json.loads(out)["report"]["pass"]
        code, out, _ = run(capsys, ["covering", "verify", "--input", path])
        assert code == 0 and json.loads(out)["report"]["pass"]


def test_covering_validate_catches_mutation(capsys, tmp_path):
    bad = perturb_transfer(build_anisotropic(2))
    code, out, _ = run(capsys, ["covering", "validate", "--input", write(tmp_path, "m.json", bad.to_json())])
    rep = json.loads(out)["report"]
    assert code == 0 and not rep["pass"]


def test_small_h1(capsys, tmp_path):
    f = {"group": {"p": 2, "exponents": [1, 1]}, "gram": [["0", "1/2"], ["1/2", "0"]]}
    code, out, _ = run(capsys, ["covering", "small-h1", "--input", write(tmp_path, "f.json", f)])
    assert code == 0 and json.loads(out)["prediction"]["family"] == "Q_8"


def test_output_file_and_table(capsys, tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, ["tower", "--r1", "5", "--p", "3", "--depth", "3", "--output", str(target)])
    assert code == 0
    assert json.loads(target.read_text())["r"] == [5, 10, 45]
    assert "r" in out and "5, 10, 45" in out


def test_byte_identical_reports(capsys, tmp_path):
    path = write(tmp_path, "f.json", HYP3)
    outs = [run(capsys, ["form", "diagonalize", "--input", path])[1] for _ in range(2)]
    assert outs[0] == outs[1]
    outs = [run(capsys, ["ring", "case-analysis-16", "--n-max", "4"])[1] for _ in range(2)]
    assert outs[0] == outs[1]


@pytest.mark.parametrize("payload", [
    "{bad json",
    json.dumps({"group": {"p": 3}, "gram": []}),
    json.dumps({"group": {"p": 3, "exponents": [1]}, "gram": [["1/9"]]}),
])
def test_schema_errors_exit_2(capsys, tmp_path, payload):
    path = tmp_path / "bad.json"
    path.write_text(payload)
    code, out, err = run(capsys, ["form", "check", "--input", str(path)])
    assert code == 2 and out == "" and "invalid input" in err


def test_missing_input_exit_2(capsys):
    assert run(capsys, ["form", "check"])[0] == 2


def test_bad_parameter_exit_2(capsys):
    assert run(capsys, ["tower", "--r1", "3", "--p", "2", "--depth", "2"])[0] == 2


def test_resource_envelope_exit_3(capsys, tmp_path):
    path = write(tmp_path, "g.json", {"family": "C", "orders": [2, 2, 2, 2, 2]})
    code, _, err = run(capsys, ["cohom", "betti", "--input", path, "--method", "resolution",
                                "--max-degree", "40"])
    assert code == 3 and "envelope" in err


def test_invariant_violation_exit_4(capsys, monkeypatch):
    from arithtop import rings

    def broken(link=None):
        raise rings.InvariantViolation("forced")
    monkeypatch.setattr(rings, "classification_report", broken)
    assert run(capsys, ["ring", "classify-15-4"])[0] == 4
