import json

import numpy as np
import pytest

from eigenrecon import cli, core

SWAP = "2\n0 1\n1 0\n"
P3 = "3\n0 1 0\n1 0 1\n0 1 0\n"
ZERO2 = "2\n0 0\n0 0\n"


@pytest.fixture
def matrix_file(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_eig_json(matrix_file, capsys):
    code, out = run(capsys, "eig", matrix_file("a.txt", SWAP))
    assert code == 0
    payload = json.loads(out)
    assert payload["eigenvalues"]["values"] == pytest.approx([1.0, -1.0],
                                                             abs=1e-14)


def test_deck_json(matrix_file, capsys):
    code, out = run(capsys, "deck", matrix_file("a.txt", P3))
    assert code == 0
    payload = json.loads(out)
    assert payload["cards"][1]["values"] == [0.0, 0.0]


def test_squares_p3_closed_form(matrix_file, capsys):
    code, out = run(capsys, "squares", matrix_file("a.txt", P3))
    assert code == 0
    payload = json.loads(out)
    assert payload["table"][0][0] == pytest.approx(0.25, abs=1e-12)


def test_rank1_ones_shorthand(matrix_file, capsys):
    code, out = run(capsys, "rank1", matrix_file("a.txt", ZERO2),
                    "--x", "ones", "--t", "1")
    assert code == 0
    payload = json.loads(out)
    values = [e["value"] for e in payload["eigenvalues"]]
    assert values == pytest.approx([2.0, 0.0], abs=1e-12)


def test_rank1_vector_file(matrix_file, capsys):
    x = matrix_file("x.txt", "2\n1 0\n")
    code, out = run(capsys, "rank1", matrix_file("a.txt", "2\n2 0\n0 0\n"),
                    "--x", x, "--t", "-1")
    assert code == 0
    values = [e["value"] for e in json.loads(out)["eigenvalues"]]
    assert values == pytest.approx([1.0, 0.0], abs=1e-12)


def test_det_check_passes(matrix_file, capsys):
    code, out = run(capsys, "det-check", matrix_file("a.txt", P3),
                    "--x", "ones", "--t", "-0.4")
    assert code == 0
    assert json.loads(out)["pass"] is True


def test_gm_verify_self(matrix_file, capsys):
    a = matrix_file("a.txt", P3)
    code, out = run(capsys, "gm-verify", a, a)
    assert code == 0
    assert json.loads(out)["pass"] is True


def test_gm_verify_mismatch_fails(matrix_file, capsys):
    a = matrix_file("a.txt", P3)
    b = matrix_file("b.txt", "3\n0 1 0\n1 0.001 1\n0 1 0\n")
    code, out = run(capsys, "gm-verify", a, b)
    assert code == 1
    assert json.loads(out)["pass"] is False


def test_tmain(matrix_file, capsys):
    a = matrix_file("a.txt", P3)
    code, out = run(capsys, "tmain", a, a, "--t-samples", "4,-1,-0.0625")
    assert code == 0
    payload = json.loads(out)
    assert len(payload["samples"]) == 4


def test_probe_tau(matrix_file, capsys):
    a = matrix_file("a.txt", "2\n1 0\n0 2\n")
    b = matrix_file("b.txt", "2\n2 0\n0 1\n")
    code, out = run(capsys, "probe-tau", a, b, "--index", "0")
    assert code == 0
    payload = json.loads(out)
    assert payload["found"] is True
    assert payload["permutation"] == [1, 0]


def test_text_format(matrix_file, capsys):
    code, out = run(capsys, "eig", matrix_file("a.txt", SWAP),
                    "--format", "text")
    assert code == 0
    assert "eigenvalue" in out


def test_unparseable_exits_2(matrix_file, capsys):
    code, _ = run(capsys, "eig", matrix_file("a.txt", "2\n0 1\n1"))
    assert code == 2


def test_missing_file_exits_2(capsys):
    code, _ = run(capsys, "eig", "/nonexistent/never.txt")
    assert code == 2


def test_dimension_mismatch_exits_2(matrix_file, capsys):
    a = matrix_file("a.txt", P3)
    x = matrix_file("x.txt", "2\n1 1\n")
    code, _ = run(capsys, "rank1", a, "--x", x, "--t", "1")
    assert code == 2


def test_deterministic_output(matrix_file, capsys):
    a = matrix_file("a.txt", P3)
    _, out1 = run(capsys, "gm-verify", a, a)
    _, out2 = run(capsys, "gm-verify", a, a)
    assert out1 == out2


def test_emitted_matrix_roundtrips():
    rng = np.random.default_rng(33)
    m = rng.uniform(-1, 1, (4, 4))
    A = core.SymmetricMatrix.from_array((m + m.T) / 2)
    B = core.parse_matrix(core.format_matrix(A))
    assert np.array_equal(A.entries, B.entries)
