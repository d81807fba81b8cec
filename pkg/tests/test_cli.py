import json
import subprocess
import sys

import pytest

from brauer_y02.cli import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_cohomology_sign_table(capsys):
    code, out, _ = run(["--format", "structured", "cohomology", "--rep", "sgn", "--coeff", "0"], capsys)
    assert code == EXIT_OK
    table = [row["group"] for row in json.loads(out)["result"]["table"]]
    assert table == ["0", "Z/2", "0", "Z/2", "0"]


def test_cohomology_regular_rep(capsys):
    code, out, _ = run(["cohomology", "--rep", "rho_tilde_restricted", "--degrees", "0..3"], capsys)
    assert code == EXIT_OK
    assert "H^0 = Z\n" in out and "H^1 = 0" in out


def test_cohomology_finite_coefficients_use_oracle(capsys):
    code, out, _ = run(["cohomology", "--rep", "triv", "--coeff", "4"], capsys)
    assert code == EXIT_OK
    assert out.count("[oracle agrees]") == 3


def test_cohomology_fixture_errors(tmp_path, capsys):
    good = tmp_path / "m.txt"
    good.write_text("2\n\n4\n\n-1\n")
    assert run(["cohomology", "--fixture", str(good)], capsys)[0] == EXIT_OK
    bad = tmp_path / "bad.txt"
    bad.write_text("2\n\n4 x\n\n-1\n")
    code, _, err = run(["cohomology", "--fixture", str(bad)], capsys)
    assert code == EXIT_CONFIG and "line 3" in err
    code, _, err = run(["cohomology", "--fixture", str(tmp_path / "missing.txt")], capsys)
    assert code == EXIT_CONFIG


def test_witness_and_replay(tmp_path, capsys):
    certs = tmp_path / "certs"
    code, out, _ = run(["witness", "--primes", "3,5", "--kind", "both", "--cert-dir", str(certs)], capsys)
    assert code == EXIT_OK
    assert "t = 4 - 2*z" in out
    files = sorted(str(p) for p in certs.iterdir())
    assert len(files) == 4
    code, out, _ = run(["verify-certificate", *files], capsys)
    assert code == EXIT_OK and out.count("PASS") == 5


def test_tampered_certificate_exit_code(tmp_path, capsys):
    certs = tmp_path / "certs"
    run(["witness", "--primes", "5", "--kind", "nonzero", "--cert-dir", str(certs)], capsys)
    path = certs / "witness_p5_nonzero.json"
    data = json.loads(path.read_text())
    data["symbol_exponent"] = "0"
    path.write_text(json.dumps(data))
    assert run(["verify-certificate", str(path)], capsys)[0] == EXIT_FAILED
    path.write_text("{not json")
    assert run(["verify-certificate", str(path)], capsys)[0] == EXIT_CONFIG


def test_witness_rejects_two(capsys):
    code, _, err = run(["witness", "--primes", "2"], capsys)
    assert code == EXIT_CONFIG and "odd" in err


@pytest.mark.parametrize(
    "base, expected",
    [("ZP:2", "Br = Q_2/Z_2 (+) (Z/2)^4 (+) Z/4"), ("algclosed:5", "Br = Z/2"), ("Q", "Br(Q)")],
)
def test_brauer(base, expected, capsys):
    code, out, _ = run(["brauer", base], capsys)
    assert code == EXIT_OK and expected in out


def test_brauer_bad_bases(capsys):
    assert run(["brauer", "algclosed:2"], capsys)[0] == EXIT_CONFIG
    assert run(["brauer", "ZP:3"], capsys)[0] == EXIT_CONFIG
    assert run(["brauer", "nonsense"], capsys)[0] == EXIT_CONFIG


def test_bad_arguments_exit_3(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["witness"])
    assert exc.value.code == EXIT_CONFIG
    with pytest.raises(SystemExit) as exc:
        main(["cohomology", "--rep", "nope"])
    assert exc.value.code == EXIT_CONFIG


def test_moduli_identities(capsys):
    code, out, _ = run(["--seed", "7", "--format", "structured", "moduli-identities",
                        "--fields", "13", "--samples", "50", "--curves", "9"], capsys)
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["seed"] == 7
    assert doc["result"]["automorphisms"][0]["counts"] == {"2": 56, "4": 8}


def test_snf(tmp_path, capsys):
    m = tmp_path / "a.txt"
    m.write_text("2 4 4\n-6 6 12\n10 -4 -16\n")
    code, out, _ = run(["--format", "structured", "snf", str(m)], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["result"]["diagonal"] == [2, 6, 12]


def test_structured_output_is_deterministic(tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        path = tmp_path / name
        assert main(["--format", "structured", "--seed", "3", "--out", str(path), "brauer", "ZP:2,3"]) == EXIT_OK
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "brauer_y02.cli", "brauer", "ZP:2"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "Q_2/Z_2 (+) (Z/2)^4 (+) Z/4" in proc.stdout
