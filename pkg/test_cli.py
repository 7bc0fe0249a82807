import json

import pytest

from cli import EXIT_ERROR, EXIT_NOT_REDUCED, EXIT_OK, main, parse_sequence, read_input

CAYLEY = "xyz + xyt + xzt + yzt"
EX4 = ["--d", "1,4^2,7^2,8^3", "--c", "5,8,9^3,10^2", "--b", "10,11"]


def test_parse_sequence():
    assert parse_sequence("1,4^2,7") == [1, 4, 4, 7]
    assert parse_sequence("3 3 5^0") == [3, 3]
    assert parse_sequence("") == []
    with pytest.raises(ValueError):
        parse_sequence("1,a")


def test_read_input_from_file(tmp_path):
    path = tmp_path / "cayley.txt"
    path.write_text(CAYLEY, encoding="utf-8")
    assert read_input(str(path)) == CAYLEY
    assert read_input("x^3 + y^3") == "x^3 + y^3"


def test_verify_betti_from_sequences(tmp_path, capsys):
    target = tmp_path / "ex4.json"
    assert main(["verify-betti", "--degree", "9", *EX4, "--json", str(target)]) == EXIT_OK
    data = json.loads(target.read_text(encoding="utf-8"))
    assert data["hilbert_polynomial"]["A_half"] == 38
    assert data["type"]["t"] == 1
    assert "(38) u - (119)" in capsys.readouterr().out


def test_verify_betti_from_resolution_text():
    text = "0 -> S(-6)^2 -> S(-5)^8 -> S(-4)^9 -> S(-2)^4 -> S"
    assert main(["verify-betti", "--degree", "3", "--resolution", text]) == EXIT_OK


def test_verify_betti_reports_failed_identities(capsys):
    assert main(["verify-betti", "--degree", "4", "--d", "3^12", "--c", "4^12", "--b", "5^2"]) == EXIT_OK
    assert "identities fail" in capsys.readouterr().out


def test_verify_betti_curve():
    assert main(["verify-betti", "--curve", "--degree", "3", "--d", "1,2,2", "--c", "3"]) == EXIT_OK


def test_analyze_cayley_writes_json(tmp_path):
    target = tmp_path / "cayley.json"
    assert main(["analyze", CAYLEY, "--quiet", "--json", str(target)]) == EXIT_OK
    data = json.loads(target.read_text(encoding="utf-8"))
    assert data["schema"] == "betti-forge/1"
    assert data["tau"] == 4
    assert data["betti"]["d"] == [2] * 9


def test_analyze_non_reduced_input():
    assert main(["analyze", "x^3", "--quiet", "--no-mdr"]) == EXIT_NOT_REDUCED


def test_analyze_parse_error(capsys):
    assert main(["analyze", "x^3 + + ", "--quiet"]) == EXIT_ERROR
    assert "❌" in capsys.readouterr().err


def test_analyze_inhomogeneous_input():
    assert main(["analyze", "x^3 + y^2", "--quiet"]) == EXIT_ERROR


def test_curve_command(capsys):
    assert main(["curve", "y^2z - x^3", "--quiet"]) == EXIT_OK
    assert "plus-one-generated" in capsys.readouterr().out


def test_pencil_command(tmp_path):
    target = tmp_path / "pencil.json"
    assert main(["pencil", "--g", "x^3 - yzt", "--h", "t^3 - xyz", "--m", "2", "--json", str(target)]) == EXIT_OK
    data = json.loads(target.read_text(encoding="utf-8"))
    assert data["rank"] == 4
    assert data["predicted_type"] == 4


def test_corpus_command():
    assert main(["corpus", "--filter", "cayley", "--workers", "1"]) == EXIT_OK
    assert main(["corpus", "--filter", "no-such-entry"]) == EXIT_ERROR
