import json
import subprocess
import sys

import numpy as np
import pytest

from cohwit.cli import main
from cohwit.cli.matrixfile import MatrixFile, dumps, loads, read_matrix_file, write_matrix_file

from conftest import PLUS, W1, W2


def _write(path, kind, mat):
    write_matrix_file(path, MatrixFile(kind, np.asarray(mat, dtype=complex)))
    return str(path)


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out), out


@pytest.fixture
def files(tmp_path):
    d = 4
    return {
        "plus": _write(tmp_path / "plus.json", "state", PLUS),
        "w1": _write(tmp_path / "w1.json", "witness", W1),
        "w2": _write(tmp_path / "w2.json", "witness", W2),
        "max4": _write(tmp_path / "max4.json", "state", np.full((d, d), 1 / d)),
        "tmp": tmp_path,
    }


def test_detect_example(capsys, files):
    code, body, _ = _run(capsys, "detect", files["w1"], files["plus"])
    assert code == 0
    assert body["value"] == pytest.approx(-0.5) and body["detected"] is True


def test_detect_tol_flag(capsys, files):
    code, body, _ = _run(capsys, "detect", files["w1"], files["plus"], "--tol", "0.6")
    assert body["detected"] is False


def test_compare_witnesses_mirror(capsys, files):
    code, body, _ = _run(capsys, "compare-witnesses", files["w1"], files["w2"])
    assert code == 0
    assert body["verdict"] == "Incomparable"
    assert body["psd_certificate"] == pytest.approx([0.5, 0.5])


def test_compare_witnesses_marginal_exit(capsys, tmp_path, files):
    eps = 1e-7
    w = _write(tmp_path / "wm.json", "witness", [[0, 0.5 + 1j * eps], [0.5 - 1j * eps, 0]])
    code, body, _ = _run(capsys, "compare-witnesses", files["w1"], w)
    assert code == 2 and body["verdict"] == "Marginal"


def test_robustness_maximally_coherent(capsys, files):
    code, body, _ = _run(capsys, "robustness", files["max4"])
    assert code == 0
    assert body["value"] == pytest.approx(3.0, abs=1e-5)


def test_compare_states(capsys, tmp_path, files):
    minus = _write(tmp_path / "minus.json", "state", [[0.5, -0.5], [-0.5, 0.5]])
    code, body, _ = _run(capsys, "compare-states", files["plus"], minus)
    assert code == 0 and body["verdict"] == "Incomparable"
    assert body["mixture_certificate"] == pytest.approx([0.5, 0.5])


def test_construct_and_validate(capsys, tmp_path, files):
    code, body, out = _run(capsys, "construct", "dephasing", files["plus"], "--normalize")
    assert code == 0 and body["kind"] == "witness"
    assert np.allclose(body["re"], [[0, -1], [-1, 0]])
    path = tmp_path / "built.json"
    path.write_text(out)
    code, body, _ = _run(capsys, "validate", str(path))
    assert code == 0 and body["optimal"] is True and body["normalized"] is True

    code, body, _ = _run(capsys, "construct", "projector", files["plus"])
    assert code == 0 and np.allclose(body["re"], W1.real)


def test_exit_codes(capsys, tmp_path, files):
    # validation error: a witness file holding a PSD matrix
    bad = _write(tmp_path / "psd.json", "witness", np.eye(2))
    code, body, _ = _run(capsys, "validate", bad)
    assert code == 1 and body["error"] == "NoNegativeEigenvalue"
    # parse errors
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    code, body, _ = _run(capsys, "validate", str(broken))
    assert code == 3 and body["error"] == "ParseError"
    code, body, _ = _run(capsys, "validate", str(tmp_path / "missing.json"))
    assert code == 3
    asym = tmp_path / "asym.json"
    asym.write_text(json.dumps({"dim": 2, "kind": "hermitian", "re": [[0, 1], [0, 0]],
                                "im": [[0, 0], [0, 0]]}))
    code, body, _ = _run(capsys, "validate", str(asym))
    assert code == 3 and body["field"] == "re"
    # wrong kind for the command
    code, body, _ = _run(capsys, "detect", files["plus"], files["plus"])
    assert code == 3 and body["field"] == "kind"
    # incoherent input to a construction
    inc = _write(tmp_path / "inc.json", "state", np.diag([0.5, 0.5]))
    code, body, _ = _run(capsys, "construct", "dephasing", inc)
    assert code == 1 and body["error"] == "IncoherentInput"


def test_round_trip_bit_exact(capsys, tmp_path):
    for seed in range(10):
        for kind in ("state", "witness", "hermitian"):
            code, _, out = _run(capsys, "random", kind, "5", "--seed", str(seed))
            assert code == 0
            first = tmp_path / f"{kind}{seed}.json"
            first.write_text(out)
            second = tmp_path / f"{kind}{seed}.copy.json"
            write_matrix_file(second, read_matrix_file(first))
            assert first.read_bytes() == second.read_bytes()


def test_canonical_encoding():
    text = dumps({"b": -0.0, "a": [0.1, 1e-20, 3]})
    assert text == '{"a": [%s, %s, 3], "b": 0}\n' % (format(0.1, ".17g"), format(1e-20, ".17g"))
    assert json.loads(text)["a"][:2] == [0.1, 1e-20]
    mf = loads('{"dim": 2, "kind": "state", "re": [[0.5, 0.5], [0.5, 0.5]], "im": [[0, 0], [0, 0]]}')
    assert mf.kind == "state" and np.allclose(mf.matrix, PLUS)


def test_determinism(capsys, tmp_path):
    outs = [_run(capsys, "--seed", "11", "random", "state", "4")[2] for _ in range(2)]
    assert outs[0] == outs[1]
    assert _run(capsys, "random", "state", "4", "--seed", "11")[2] == outs[0]
    assert _run(capsys, "random", "state", "4", "--seed", "12")[2] != outs[0]


def test_batch(capsys, tmp_path):
    for k in range(4):
        out = _run(capsys, "random", "state", "3", "--seed", str(k))[2]
        (tmp_path / f"s{k}.json").write_text(out)
    (tmp_path / "z_bad.json").write_text("[]")
    code, body, out1 = _run(capsys, "batch", str(tmp_path), "--op", "robustness", "--jobs", "3")
    assert list(body["results"]) == ["s0.json", "s1.json", "s2.json", "s3.json", "z_bad.json"]
    assert code == 3
    assert all(body["results"][f"s{k}.json"]["value"] > 0 for k in range(4))
    _, _, out2 = _run(capsys, "batch", str(tmp_path), "--op", "robustness", "--jobs", "1")
    assert out1 == out2


def test_module_entry_point_is_deterministic(tmp_path):
    cmd = [sys.executable, "-m", "cohwit", "random", "witness", "3", "--seed", "5"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["kind"] == "witness"
