import json
import re
import subprocess
import sys

import numpy as np
import pytest

from posetcoh.cli import dumps, main
from posetcoh.cocycle import Cocycle, matrix_to_json
from posetcoh.corpus import PAULI_X, PAULI_Z, Model, phase_cocycle
from posetcoh.homotopy import build_path_frame
from posetcoh.poset import Poset


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write(path, obj):
    path.write_text(json.dumps(obj))
    return path


@pytest.fixture
def circle_file(tmp_path, capsys):
    path = tmp_path / "circle.json"
    assert run(capsys, "build", "circle", "--n", 6, "--max-len", 4, "--out", path)[0] == 0
    return path


@pytest.fixture
def fig8_file(tmp_path, fig8):
    return write(tmp_path / "fig8.json", fig8.poset.to_json())


def _phase_file(tmp_path, circle_file, theta):
    model = Model.build("c", Poset.from_json(json.loads(circle_file.read_text())))
    return write(tmp_path / f"phase{theta}.json", phase_cocycle(model, theta).to_json())


def test_build_models(capsys, tmp_path):
    code, out, _ = run(capsys, "build", "circle", "--n", 6, "--max-len", 4)
    assert code == 0 and len(json.loads(out)["elements"]) == 24
    code, out, _ = run(capsys, "build", "directed", "--n", 4)
    assert code == 0 and len(json.loads(out)["elements"]) == 10
    spec = write(tmp_path / "g.json", {"edges": [[0, 1], [1, 2], [2, 0]]})
    code, out, _ = run(capsys, "build", "graph", "--spec", spec, "--max-len", 2)
    assert code == 0 and len(json.loads(out)["elements"]) == 6


@pytest.mark.parametrize(
    "argv",
    [
        ["build", "circle", "--n", 6, "--max-len", 5],
        ["build", "graph"],
        ["build", "circle", "--tol", -1],
        ["build", "torus"],
        ["frame", "--poset", "missing.json"],
    ],
)
def test_bad_parameters_exit_2(capsys, argv):
    try:
        code = run(capsys, *argv)[0]
    except SystemExit as exc:  # argparse rejects unknown choices itself
        code = exc.code
    assert code == 2


def test_frame_output(capsys, fig8_file):
    code, out, _ = run(capsys, "frame", "--poset", fig8_file, "--pole", 3)
    data = json.loads(out)
    assert code == 0 and data["pole"] == 3
    assert data["h1"] == {"rank": 2, "torsion": []}
    assert set(data["generators"]) == {"g0", "g1"}
    assert data["relations"].startswith("generators 2")


def test_frame_bad_pole(capsys, circle_file):
    assert run(capsys, "frame", "--poset", circle_file, "--pole", 99)[0] == 2


def test_validate_and_invalid_cocycle(capsys, tmp_path, circle_file):
    good = _phase_file(tmp_path, circle_file, 0.5)
    code, out, _ = run(capsys, "validate", "--poset", circle_file, "--cocycle", good, "--samples", 200)
    assert code == 0 and json.loads(out)["valid"]
    data = json.loads(good.read_text())
    key = next(iter(data["values"]))
    data["values"][key] = [[[-1.0, 0.0]]] if data["values"][key] == [[[1.0, 0.0]]] else [[[0.5, 0.0]]]
    bad = write(tmp_path / "bad.json", data)
    for cmd in ("validate", "split", "report"):
        code, _, err = run(capsys, cmd, "--poset", circle_file, "--cocycle", bad)
        assert code == 3
        assert json.loads(err)["error"] == "invalid cocycle"


def test_floats_have_17_significant_digits():
    text = dumps({"x": 0.1, "y": [1 / 3, 2.0], "z": 1e-20})
    assert '"x": 0.10000000000000001' in text
    assert "0.33333333333333331" in text and "2.0" in text and "9.9999999999999995e-21" in text
    assert json.loads(text)["y"][0] == 1 / 3


def test_output_floats_round_trip_exactly(capsys, tmp_path, circle_file):
    src = _phase_file(tmp_path, circle_file, 1.0)
    code, out, _ = run(capsys, "split", "--poset", circle_file, "--cocycle", src)
    assert code == 0
    floats = re.findall(r"-?\d+\.\d+(?:e-?\d+)?", out)
    assert floats and all(len(re.sub(r"e.*|[-.]", "", f).lstrip("0")) <= 17 for f in floats)
    assert any(len(re.sub(r"e.*|[-.]", "", f).lstrip("0")) == 17 for f in floats)


def test_split_join_roundtrip(capsys, tmp_path, circle_file):
    src = _phase_file(tmp_path, circle_file, 0.9)
    split = tmp_path / "split.json"
    assert run(capsys, "split", "--poset", circle_file, "--cocycle", src, "--out", split)[0] == 0
    data = json.loads(split.read_text())
    assert data["roundtrip"] <= 1e-10
    code, out, _ = run(capsys, "join", "--poset", circle_file, "--phi", split, "--cocycle", split)
    assert code == 0
    p = Poset.from_json(json.loads(circle_file.read_text()))
    a, b = Cocycle.from_json(p, out), Cocycle.from_json(p, src.read_text())
    assert np.max(np.abs(a.values - b.values)) <= 1e-10


def test_join_requires_trivial_charge(capsys, tmp_path, circle_file):
    src = _phase_file(tmp_path, circle_file, 0.9)
    code, _, err = run(capsys, "join", "--poset", circle_file, "--phi", src, "--cocycle", src)
    assert code == 4 and "error" in json.loads(err)


def test_join_frame_independent(capsys, tmp_path, fig8_file, fig8):
    sigma = write(tmp_path / "sigma.json", {"g0": matrix_to_json(PAULI_X), "g1": matrix_to_json(PAULI_Z)})
    z = tmp_path / "z.json"
    assert run(capsys, "from-rep", "--poset", fig8_file, "--sigma", sigma, "--out", z)[0] == 0
    split = tmp_path / "split.json"
    assert run(capsys, "split", "--poset", fig8_file, "--cocycle", z, "--out", split)[0] == 0
    other = write(tmp_path / "frame.json", build_path_frame(fig8.poset, 0, seed=4, strategy="dfs").to_json())
    outs = []
    for extra in ([], ["--frame", other]):
        code, out, _ = run(capsys, "join", "--poset", fig8_file, "--phi", split, "--cocycle", split, *extra)
        assert code == 0
        vals = Cocycle.from_json(fig8.poset, out).values
        outs.append(np.round(vals, 12) + 0.0)
    assert np.array_equal(outs[0], outs[1])


def test_from_rep_and_report(capsys, tmp_path, fig8_file):
    sigma = write(tmp_path / "sigma.json", {"g0": matrix_to_json(PAULI_X), "g1": matrix_to_json(PAULI_Z)})
    z = tmp_path / "z.json"
    assert run(capsys, "from-rep", "--poset", fig8_file, "--sigma", sigma, "--out", z)[0] == 0
    code, out, _ = run(capsys, "report", "--poset", fig8_file, "--cocycle", z, "--max-word-len", 2)
    data = json.loads(out)
    assert code == 0 and data["tau"] == 2 and data["factor"]
    assert data["characters"]["e"] == [1.0, 0.0]


def test_from_rep_errors(capsys, tmp_path, fig8_file, circle_file):
    bad_rel = write(tmp_path / "s1.json", {"g0": matrix_to_json(PAULI_X)})
    assert run(capsys, "from-rep", "--poset", fig8_file, "--sigma", bad_rel)[0] == 4
    bad_gen = write(tmp_path / "s2.json", {"g5": matrix_to_json(PAULI_X)})
    assert run(capsys, "from-rep", "--poset", circle_file, "--sigma", bad_gen)[0] == 2
    junk = write(tmp_path / "s3.json", {"g0": "nope"})
    assert run(capsys, "from-rep", "--poset", circle_file, "--sigma", junk)[0] == 2


def test_report_non_factor(capsys, tmp_path, fig8_file):
    sigma = write(tmp_path / "sigma.json", {"g0": matrix_to_json(PAULI_Z), "g1": matrix_to_json(np.diag([1, 1j]))})
    z = tmp_path / "z.json"
    assert run(capsys, "from-rep", "--poset", fig8_file, "--sigma", sigma, "--out", z)[0] == 0
    code, out, _ = run(capsys, "report", "--poset", fig8_file, "--cocycle", z)
    assert code == 0 and json.loads(out)["tau"] is None


def test_outputs_are_deterministic(capsys, tmp_path, circle_file):
    src = _phase_file(tmp_path, circle_file, 0.3)
    a = run(capsys, "validate", "--poset", circle_file, "--cocycle", src, "--seed", 5)[1]
    b = run(capsys, "validate", "--poset", circle_file, "--cocycle", src, "--seed", 5)[1]
    assert a == b


def test_console_script_entry(tmp_path):
    out = subprocess.run(
        [sys.executable, "-m", "posetcoh.cli", "build", "directed", "--n", "3"],
        capture_output=True, text=True, timeout=60,
    )
    assert out.returncode == 0 and len(json.loads(out.stdout)["elements"]) == 6
