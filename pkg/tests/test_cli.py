import json
import subprocess
import sys

import pytest

from toricq.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_f2(capsys):
    code, out, _ = run(capsys, "validate", "--fan", "f2", "--format", "text")
    assert code == 0
    assert "smooth, complete, l=4, r=2" in out
    code, out, _ = run(capsys, "validate", "--fan", "f2")
    assert json.loads(out)["valid"] is True


def test_validate_quadrant(tmp_path, capsys):
    p = tmp_path / "quadrant.json"
    p.write_text(json.dumps({"dim": 2, "rays": [[1, 0], [0, 1]], "max_cones": [[1, 2]]}))
    code, out, _ = run(capsys, "validate", "--fan", str(p), "--format", "text")
    assert code == 2
    assert "NotComplete" in out


def test_invalid_fan_in_other_commands(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"dim": 2, "rays": [[2, 0], [0, 1], [-1, -1]], "max_cones": [[1, 2], [2, 3], [1, 3]]}))
    code, _, err = run(capsys, "info", "--fan", str(p))
    assert code == 2 and "NonPrimitiveRay" in err


@pytest.mark.parametrize("content", ["{not json", "[1, 2]", '{"dim": 2, "rays": [[1, 0]]}',
                                     '{"dim": 2, "rays": [[1, "a"]], "max_cones": []}'])
def test_parse_errors(tmp_path, capsys, content):
    p = tmp_path / "broken.json"
    p.write_text(content)
    code, _, err = run(capsys, "validate", "--fan", str(p))
    assert code == 1
    assert "broken.json" in err


def test_malformed_json_names_line(tmp_path, capsys):
    p = tmp_path / "broken.json"
    p.write_text('{\n "dim": 2,\n "rays": [[1,0],\n}')
    code, _, err = run(capsys, "validate", "--fan", str(p))
    assert code == 1 and "line 4" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "validate", "--fan", "/nonexistent/fan.json")
    assert code == 1


def test_usage_error_is_exit_1(capsys):
    with pytest.raises(SystemExit) as e:
        main(["info", "--fan", "p2", "--degree-bound", "-1"])
    assert e.value.code == 1


def test_info_f2(capsys):
    code, out, _ = run(capsys, "info", "--fan", "f2", "--format", "text")
    assert code == 0
    assert "A = [[1,1,2,0],[0,0,1,1]]" in out
    assert "basis_cone = {2,3}" in out
    assert "Fano: false" in out
    assert "Betti: (1,2,1)" in out


def test_info_p2_and_p1xp1(capsys):
    code, out, _ = run(capsys, "info", "--fan", "p2", "--format", "text")
    assert "A = [[1,1,1]]" in out and "Fano: true" in out
    code, out, _ = run(capsys, "info", "--fan", "p1xp1")
    assert json.loads(out)["betti"] == [1, 2, 1]


def test_basis_cone_override(capsys):
    code, out, _ = run(capsys, "info", "--fan", "f2", "--basis-cone", "3")
    data = json.loads(out)
    assert data["basis_cone"] == 3 and data["basis_cone_rays"] == [1, 4]
    code, _, _ = run(capsys, "info", "--fan", "f2", "--basis-cone", "9")
    assert code == 1


def test_ifun_p1(capsys):
    code, out, _ = run(capsys, "ifun", "--fan", "p1", "--degree-bound", "1", "--t-trunc", "0")
    assert code == 0
    data = json.loads(out)
    assert data["part"] == "small_I"
    (q1,) = [s for s in data["series"] if s["beta"] == [1]]
    assert q1["terms"] == [{"z": -2, "t_exp": [0, 0], "class": {"0": ["1"]}},
                           {"z": -3, "t_exp": [0, 0], "class": {"1": ["-2"]}}]


def test_ifun_big_part(capsys):
    code, out, _ = run(capsys, "ifun", "--fan", "f2", "--part", "big_I_k0", "--degree-bound", "1")
    assert code == 0 and json.loads(out)["part"] == "big_I_k0"


def test_polarization_specs(capsys):
    a = run(capsys, "ifun", "--fan", "f2", "--polarization", "pic:3,1")[1]
    b = run(capsys, "ifun", "--fan", "f2", "--polarization", "ray:3,0,0,1")[1]
    assert a == b
    code, _, err = run(capsys, "ifun", "--fan", "f2", "--polarization", "pic:2,1")
    assert code == 1 and "NotAmplePolarization" in err
    code, _, _ = run(capsys, "ifun", "--fan", "f2", "--polarization", "foo:1")
    assert code == 1
    code, _, _ = run(capsys, "ifun", "--fan", "f2", "--polarization", "pic:1")
    assert code == 1


def test_mirror_f2(capsys):
    code, out, _ = run(capsys, "mirror", "--fan", "f2", "--degree-bound", "3")
    assert code == 0
    data = json.loads(out)
    assert data["round_trip"] == "ok" and data["identity"] is False
    code, out, _ = run(capsys, "mirror", "--fan", "f2", "--format", "text")
    assert "round trip: ok" in out


def test_mirror_out_of_regime(tmp_path, capsys):
    p = tmp_path / "f3.json"
    p.write_text(json.dumps({"dim": 2, "rays": [[1, 0], [-1, -3], [0, 1], [0, -1]],
                             "max_cones": [[2, 3], [1, 3], [1, 4], [2, 4]]}))
    code, _, err = run(capsys, "mirror", "--fan", str(p), "--part", "big_I_k0")
    assert code == 3 and "MirrorMapNotSmall" in err


def test_compare_pn(capsys):
    code, out, _ = run(capsys, "compare-pn", "--fan", "p2", "--degree-bound", "3", "--format", "text")
    assert code == 0 and "identical: 100%" in out
    code, _, _ = run(capsys, "compare-pn", "--fan", "f2")
    assert code == 3


def test_compare_pn_user_fan(tmp_path, capsys):
    # P^2 with rays in a different order and a non-standard lattice basis
    p = tmp_path / "p2b.json"
    p.write_text(json.dumps({"dim": 2, "rays": [[1, 1], [-1, 0], [0, -1]],
                             "max_cones": [[1, 2], [2, 3], [1, 3]]}))
    code, out, _ = run(capsys, "compare-pn", "--fan", str(p), "--degree-bound", "2", "--t-trunc", "2")
    assert code == 0 and json.loads(out)["identical"] is True


def test_compare_mismatch_exit(monkeypatch, capsys):
    from toricq import givental

    real = givental.closed_form_J_Pn

    def broken(*a, **k):
        J = real(*a, **k)
        b = next(iter(J.series))
        J.series[b] = J.series[b] * 2
        return J

    monkeypatch.setattr(givental, "closed_form_J_Pn", broken)
    code, out, _ = run(capsys, "compare-pn", "--fan", "p1", "--format", "text")
    assert code == 4 and "identical: " in out and "100%" not in out


def test_out_file(tmp_path, capsys):
    p = tmp_path / "o.json"
    code, out, _ = run(capsys, "info", "--fan", "p2", "--out", str(p))
    assert code == 0 and out == ""
    assert json.loads(p.read_text())["fano"] is True


def test_determinism_subprocess():
    cmd = [sys.executable, "-m", "toricq", "ifun", "--fan", "p2", "--degree-bound", "3", "--t-trunc", "2"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and len(a) > 100
