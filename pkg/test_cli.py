import json
import random

import pytest

from main import EXIT_INVALID, EXIT_OK, EXIT_USAGE, main, parse_args
from src.common.friezes import Frieze
from src.common.linalg import identity
from src.common.positivity import sample_consecutive_matrix
from src.common.reference_cases import random_closed_path
from src.common.tilings import phi
from src.utils import codec


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(codec.dumps(obj))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def block_files(tmp_path, block_example):
    gamma, delta = block_example
    return write(tmp_path, "gamma.json", gamma), write(tmp_path, "delta.json", delta)


@pytest.fixture
def closed_tiling_file(tmp_path):
    rng = random.Random(12)
    t = phi(random_closed_path(3, rng), random_closed_path(3, rng))
    return write(tmp_path, "tiling.json", t)


def test_parse_args_requires_a_command():
    with pytest.raises(SystemExit):
        parse_args([])


def test_phi_block_example(capsys, block_files):
    gamma, delta = block_files
    code, out, _ = run(capsys, "phi", "--gamma", gamma, "--delta", delta, "--window", "1", "1", "3", "3")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["tiling"]["central"] == [["1", "3", "6"], ["1", "1", "1"], ["-4", "-3", "-2"]]
    assert doc["window"]["rows"] == doc["tiling"]["central"]


def test_phi_render(capsys, block_files):
    gamma, delta = block_files
    code, out, err = run(capsys, "phi", "--gamma", gamma, "--delta", delta, "--window", "1", "1", "2", "2", "--render")
    assert code == EXIT_OK
    assert json.loads(out)["window"]["rows"] == [["1", "3"], ["1", "1"]]
    assert err.rstrip().splitlines()[-1].split() == ["2", "|", "1", "1"]


def test_entry_through_a_tiling_file(capsys, tmp_path, block_example):
    path = write(tmp_path, "t.json", phi(*block_example))
    code, out, _ = run(capsys, "entry", "--tiling", path, "--i", "1", "--j", "2")
    assert code == EXIT_OK
    assert json.loads(out) == {"i": "1", "j": "2", "value": "3"}


def test_entry_out_of_range(capsys, tmp_path, block_example):
    path = write(tmp_path, "t.json", phi(*block_example))
    code, _, err = run(capsys, "entry", "--tiling", path, "--i", "9", "--j", "1")
    assert code == EXIT_INVALID
    assert err.startswith("[ERROR] RangeError")


def test_psi_and_validate(capsys, tmp_path, closed_tiling_file):
    code, out, _ = run(capsys, "psi", "--tiling", closed_tiling_file)
    assert code == EXIT_OK
    doc = json.loads(out)
    assert codec.load_path(doc["gamma"]).window(1) == identity(3)
    code, out, _ = run(capsys, "validate", "--tiling", closed_tiling_file)
    assert code == EXIT_OK
    assert json.loads(out)["ok"] is True


def test_validate_corrupted_grid(capsys, tmp_path):
    rng = random.Random(2)
    t = phi(random_closed_path(2, rng), random_closed_path(2, rng))
    grid = codec.window_model(2, t.window(1, 1, 5, 5), 1, 1).model_dump(mode="json")
    grid["rows"][2][2] = str(int(grid["rows"][2][2]) + 1)
    p = tmp_path / "grid.json"
    p.write_text(json.dumps(grid))
    code, out, err = run(capsys, "validate", "--grid", str(p))
    assert code == EXIT_INVALID
    assert json.loads(out)["ok"] is False
    assert "[ERROR]" in err


def test_validate_bad_frieze(capsys, tmp_path):
    path = write(tmp_path, "f.json", Frieze(2, ((1,) * 5, (1,) * 5), 5))
    code, _, err = run(capsys, "validate", "--frieze", path)
    assert code == EXIT_INVALID
    assert "FriezeError" in err


def test_validate_path(capsys, tmp_path, block_example):
    path = write(tmp_path, "g.json", block_example[0])
    code, out, _ = run(capsys, "validate", "--path", path)
    assert code == EXIT_OK
    assert json.loads(out)["closure"] == "finite"


def test_dual_and_tilde(capsys, tmp_path, closed_tiling_file):
    code, out, _ = run(capsys, "dual", "--tiling", closed_tiling_file)
    assert code == EXIT_OK
    assert json.loads(out)["k"] == 3
    path = write(tmp_path, "g.json", random_closed_path(3, random.Random(1)))
    code, out, _ = run(capsys, "tilde", "--path", path)
    assert code == EXIT_OK
    assert json.loads(out)["k"] == 3


def test_enumerate_lines(capsys):
    code, out, _ = run(capsys, "enumerate", "--k", "2", "--n", "5")
    assert code == EXIT_OK
    lines = [json.loads(line) for line in out.splitlines()]
    assert len(lines) == 6
    assert lines[-1]["summary"]["count"] == "5"
    assert all(doc["k"] == 2 for doc in lines[:-1])


def test_gale_and_quiddity(capsys, tmp_path, friezes_25):
    path = write(tmp_path, "f.json", friezes_25[0])
    code, out, _ = run(capsys, "gale", "--frieze", path)
    assert code == EXIT_OK
    assert json.loads(out)["k"] == 3
    path = write(tmp_path, "ones.json", Frieze(5, ((1,) * 8, (1,) * 8), 8))
    code, out, _ = run(capsys, "quiddity", "--frieze", path)
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["quiddity"][0] == ["1", "0", "0", "0", "1"]
    assert doc["positive"] is False
    assert doc["equivalence"]["verdict"] == "documented_exception"


def test_pluecker_coordinate(capsys, tmp_path):
    p = tmp_path / "a.json"
    p.write_text(json.dumps([[1, 0, 2], [0, 1, 3]]))
    code, out, _ = run(capsys, "pluecker", "--matrix", str(p), "--index", "3", "1")
    assert code == EXIT_OK
    assert json.loads(out)["value"] == "-3"
    code, out, _ = run(capsys, "pluecker", "--matrix", str(p), "--index", "3", "1", "--cyclic")
    assert json.loads(out)["value"] == "3"


def test_frieze_of_a_matrix(capsys, tmp_path):
    a, f = sample_consecutive_matrix(3, 6, random.Random(9))
    path = write(tmp_path, "a.json", codec.matrix_model(a))
    code, out, _ = run(capsys, "frieze", "--matrix", path)
    assert code == EXIT_OK
    assert codec.load_frieze(json.loads(out)) == f
    code, out, _ = run(capsys, "frieze", "--matrix", path, "--render")
    assert code == EXIT_OK
    assert len(out.rstrip("\n").splitlines()) == 6 + 3 - 1


def test_render_tiling(capsys, closed_tiling_file):
    code, out, _ = run(capsys, "render", "--tiling", closed_tiling_file, "--window", "1", "1", "3", "3")
    assert code == EXIT_OK
    assert len(out.rstrip("\n").splitlines()) == 2 + 3


def test_join(capsys, tmp_path):
    rng = random.Random(4)
    gamma = write(tmp_path, "g.json", random_closed_path(2, rng).restrict(1, 4))
    delta = write(tmp_path, "d.json", random_closed_path(2, rng).restrict(1, 3))
    code, out, _ = run(capsys, "join", "--gamma", gamma, "--delta", delta, "--m", "4", "--n", "3")
    assert code == EXIT_OK
    assert json.loads(out)["closure"]["kind"] == "skew_periodic"


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == EXIT_OK
    assert "[FAIL]" not in out
    assert out.rstrip().endswith("cases passed")


def test_selftest_single_case(capsys):
    code, out, _ = run(capsys, "selftest", "--case", "tiling central block")
    assert code == EXIT_OK
    assert out.splitlines() == [out.splitlines()[0], "1/1 cases passed"]
    assert out.startswith("[PASS] tiling central block")


@pytest.mark.parametrize("name", [
    "psi of the block example", "double dual corner block", "block periodicity", "tiling of a Pluecker frieze",
])
def test_selftest_worked_examples(capsys, name):
    code, out, _ = run(capsys, "selftest", "--case", name)
    assert code == EXIT_OK
    assert out.startswith(f"[PASS] {name}")


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "psi", "--tiling", str(tmp_path / "nope.json"))
    assert code == EXIT_USAGE
    assert err.startswith("[ERROR]")


def test_malformed_documents(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "psi", "--tiling", str(bad))[0] == EXIT_USAGE
    bad.write_text(json.dumps({"k": 2, "central": [[1, 0], [0, 1]]}))
    code, _, err = run(capsys, "psi", "--tiling", str(bad))
    assert code == EXIT_USAGE
    assert "tiling document" in err


def test_psi_of_a_finite_tiling(capsys, tmp_path, block_example):
    path = write(tmp_path, "t.json", phi(*block_example))
    code, out, _ = run(capsys, "psi", "--tiling", path)
    assert code == EXIT_OK
    doc = json.loads(out)
    gamma, delta = codec.load_path(doc["gamma"]), codec.load_path(doc["delta"])
    assert phi(gamma, delta).central == phi(*block_example).central


def test_dual_of_order_k_prints_minors(capsys, closed_tiling_file):
    code, out, _ = run(capsys, "dual", "--tiling", closed_tiling_file, "--p", "3", "--size", "4")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["p"] == "3"
    assert doc["rows"] == [["1"] * 4] * 4
