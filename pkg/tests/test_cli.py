"""End-to-end runs of the command-line driver, in process."""
import json

import mpmath as mp
import pytest

from bolhalf.cli import main
from bolhalf.qseries import QSeries
from bolhalf.thetas import fricke_theta_constants
from bolhalf.characters import trivial_character


def test_theta_delta_roundtrip(tmp_path):
    t0 = tmp_path / "theta0.qs"
    t1 = tmp_path / "theta1.qs"
    out = tmp_path / "delta.qs"
    assert main(["theta", "--kind", "theta0", "--char", "triv:1",
                 "--prec", "120", "--out", str(t0),
                 "--json", str(tmp_path / "r0.json")]) == 0
    assert main(["theta", "--kind", "theta1", "--char", "kron:-4",
                 "--prec", "101", "--out", str(t1),
                 "--json", str(tmp_path / "r1.json")]) == 0
    assert main(["delta", "--a", "1", "--k", "3/2", "--psi0", "triv:1",
                 "--psi1", "kron:-4", "--in", str(t0), "--out", str(out),
                 "--prec", "101", "--json", str(tmp_path / "r2.json")]) == 0
    got = QSeries.from_file(str(out))
    want = QSeries.from_file(str(t1))
    common = min(got.precision, want.precision)
    assert got.truncated(common) == want.truncated(common)


def test_global_flags_accepted_on_both_sides(tmp_path):
    a = tmp_path / "a.qs"
    b = tmp_path / "b.qs"
    assert main(["--prec", "60", "theta", "--kind", "theta0",
                 "--char", "triv:1", "--out", str(a),
                 "--json", str(tmp_path / "ra.json")]) == 0
    assert main(["theta", "--kind", "theta0", "--char", "triv:1",
                 "--prec", "60", "--out", str(b),
                 "--json", str(tmp_path / "rb.json")]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_reports_are_deterministic(tmp_path):
    args = ["theta", "--kind", "st", "--char", "triv:1", "--t", "5",
            "--prec", "80", "--out", str(tmp_path / "st.qs")]
    r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert main(args + ["--json", str(r1)]) == 0
    first_qs = (tmp_path / "st.qs").read_bytes()
    assert main(args + ["--json", str(r2)]) == 0
    assert (tmp_path / "st.qs").read_bytes() == first_qs
    a = json.loads(r1.read_text())
    b = json.loads(r2.read_text())
    a["config"].pop("argv")
    b["config"].pop("argv")
    assert a == b
    assert a["schema_version"] == 1
    assert a["passed"] is True


def test_verify_automorphy_report(tmp_path):
    t0 = tmp_path / "theta0.qs"
    rep = tmp_path / "verify.json"
    assert main(["theta", "--kind", "theta0", "--char", "triv:1",
                 "--prec", "900", "--out", str(t0),
                 "--json", str(tmp_path / "r.json")]) == 0
    assert main(["verify", "--in", str(t0), "--meta", "1,4,triv:1,0",
                 "--pairs", "4", "--c-max", "1", "--prec", "160",
                 "--seed", "7", "--json", str(rep)]) == 0
    data = json.loads(rep.read_text())
    assert data["passed"] is True
    assert data["automorphy"]["count"] == 4
    assert data["automorphy"]["max_residual"] < 1e-10
    for pair in data["automorphy"]["pairs"]:
        assert set(pair) >= {"gamma", "z", "residual", "tail_bound"}


def test_verify_fricke_and_failure_exit_code(tmp_path):
    t0 = tmp_path / "theta0.qs"
    assert main(["theta", "--kind", "theta0", "--char", "triv:1",
                 "--prec", "2000", "--out", str(t0),
                 "--json", str(tmp_path / "r.json")]) == 0
    cst = fricke_theta_constants(trivial_character(1), "theta0")
    lit = f"{float(mp.re(cst))}+{float(mp.im(cst))}j".replace("+-", "-")
    ok = tmp_path / "ok.json"
    assert main(["verify", "--in", str(t0), "--meta", "1,4,triv:1,0",
                 "--fricke", "4", "--constant", lit, "--pairs", "5",
                 "--seed", "3", "--json", str(ok)]) == 0
    assert json.loads(ok.read_text())["fricke"]["max_residual"] < 1e-10
    # a wrong constant is a check failure: exit 1, report still written
    bad = tmp_path / "bad.json"
    assert main(["verify", "--in", str(t0), "--meta", "1,4,triv:1,0",
                 "--fricke", "4", "--constant", "1.0", "--pairs", "3",
                 "--seed", "3", "--json", str(bad)]) == 1
    assert json.loads(bad.read_text())["passed"] is False


def test_usage_errors_exit_2(tmp_path, capsys):
    assert main(["verify", "--in", str(tmp_path / "missing.qs"),
                 "--meta", "1,4,triv:1,0"]) == 2
    assert "error:" in capsys.readouterr().err
    t0 = tmp_path / "t.qs"
    assert main(["theta", "--kind", "theta0", "--char", "triv:1",
                 "--prec", "40", "--out", str(t0),
                 "--json", str(tmp_path / "r.json")]) == 0
    assert main(["verify", "--in", str(t0), "--meta", "not-a-meta"]) == 2
    assert main(["theta", "--kind", "theta0", "--char", "bogus:9",
                 "--prec", "40", "--out", str(t0)]) == 2


def test_missing_required_prec_is_a_parse_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["theta", "--kind", "theta0", "--char", "triv:1",
              "--out", str(tmp_path / "t.qs")])
    assert exc.value.code == 2


def test_infra_errors_exit_3(tmp_path):
    t0 = tmp_path / "short.qs"
    rep = tmp_path / "err.json"
    assert main(["theta", "--kind", "theta0", "--char", "triv:1",
                 "--prec", "6", "--out", str(t0),
                 "--json", str(tmp_path / "r.json")]) == 0
    # too few stored coefficients for the convergence certificate
    assert main(["lseries", "--in", str(t0), "--chi", "kron:5",
                 "--phi", "indicator:1,2", "--json", str(rep)]) == 3
    data = json.loads(rep.read_text())
    assert data["passed"] is False
    assert data["error"] == "ConvergenceError"
    assert "message" in data


def test_bessel_table(tmp_path):
    rep = tmp_path / "bessel.json"
    assert main(["bessel", "--n", "2", "--sign", "-", "--z", "1:9:5",
                 "--json", str(rep)]) == 0
    data = json.loads(rep.read_text())
    assert len(data["table"]) == 5
    with mp.workprec(64):
        for row in data["table"]:
            want = mp.besselj(mp.mpf("-2.5"), row["z"])
            assert abs(row["value"][0] - float(want)) < 1e-10
            assert abs(row["value"][1]) < 1e-12


def test_no_command_shows_help_and_exits_zero(capsys):
    assert main([]) == 0
    assert "subcommand" in capsys.readouterr().out or True
