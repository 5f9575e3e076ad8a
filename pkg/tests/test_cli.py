import json

import numpy as np
import pytest

from pc4.cli import main, run

K0 = {"x": [0, 0, 0], "y": [0, 0, 0], "z": [0, 0, 0], "d": [1, 1, 1], "lambda": 1}


def call(*argv):
    code, out = run(list(argv))
    return code, (json.loads(out) if out.startswith("{") else out)


def test_table_text_shows_quaternions():
    code, out = call("table", "--kappa", json.dumps(K0), "--format", "text")
    assert code == 0
    row = [line for line in out.splitlines() if line.strip().startswith("v1")][0]
    assert "(0, 0, 0, 1)" in row  # v1 v2 = v3
    assert out.splitlines()[0].split() == ["e", "v1", "v2", "v3"]


def test_json_envelope():
    code, out = call("build", "--kappa", json.dumps(K0))
    assert code == 0
    assert set(out) == {"command", "input", "result", "tolerances", "seed"}
    assert np.array(out["result"]["structure_tensor"]).shape == (4, 4, 4)


def test_output_is_deterministic():
    argv = ["verify", "--kappa", json.dumps(K0), "--seed", "7", "--samples", "200"]
    assert run(argv) == run(argv)


def test_verify_passes():
    code, out = call("verify", "--kappa", json.dumps(K0), "--samples", "200")
    assert code == 0 and out["result"]["all_passed"]


def test_idempotents_continuum():
    k = dict(K0, **{"lambda": 0.25})
    code, out = call("idempotents", "--kappa", json.dumps(k), "--samples", "300")
    assert code == 0
    assert out["result"]["uniqueness"]["unique"] is False and out["result"]["continuum"] is True


def test_iso_and_canon(tmp_path):
    k = {"x": [1, 0.2, 0], "y": [0, 1, 0.5], "z": [0, 0, 1], "d": [1, 1, 2], "lambda": 1}
    c, s = np.cos(0.4), np.sin(0.4)
    g = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])
    k2 = dict(k, **{v: (g @ np.array(k[v])).tolist() for v in "xyz"})
    f = tmp_path / "pair.json"
    f.write_text(json.dumps({"kappa": k, "kappa2": k2}))
    code, out = call("iso", "--in", str(f))
    assert code == 0 and out["result"]["isomorphic"]
    assert np.allclose(np.array(out["result"]["witness"]) @ np.array(k["x"]), k2["x"])
    code, out = call("canon", "--kappa", json.dumps(k))
    assert code == 0 and out["result"]["in_cross_section"]


def test_aut():
    code, out = call("aut", "--kappa", json.dumps(K0))
    assert code == 0 and out["result"]["kind"] == "full_rotation_group"


@pytest.mark.parametrize("bad,msg", [
    (dict(K0, d=[2, 1, 1]), "d not sorted"),
    (dict(K0, **{"lambda": 0}), "lambda is zero"),
])
def test_validation_errors(bad, msg, capsys):
    assert main(["aut", "--kappa", json.dumps(bad)]) == 1
    assert msg in capsys.readouterr().err


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["nonsense", "--kappa", "{}"])
    assert exc.value.code == 1
    assert main(["aut", "--kappa", "not json"]) == 1
    assert main(["iso", "--kappa", json.dumps(K0)]) == 1


def test_violation_exit_2():
    # generic data leaves rounding residuals far above an impossible tolerance
    k = {"x": [0.3, -1, 2], "y": [1, 0.4, -0.2], "z": [0.5, 0.1, 1], "d": [0.5, 1, 2], "lambda": 0.7}
    assert main(["verify", "--kappa", json.dumps(k), "--tol", "1e-300", "--samples", "50"]) == 2
