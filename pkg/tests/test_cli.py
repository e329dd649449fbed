import csv
import io
import json
import math
import subprocess
import sys

import pytest

from gaussqfi.cli import dumps, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


class TestState:
    def test_thermal(self, capsys):
        d = run_json(capsys, "state", "--alpha", "0", "--psi", "0", "--r", "0", "--chi", "0", "--nth", "1")
        assert d["state"]["cov_xx"] == 3 and d["state"]["cov_pp"] == 3 and d["state"]["cov_xp"] == 0
        assert d["purity"] == pytest.approx(1 / 3, rel=1e-16)
        assert d["physical"] is True

    def test_vacuum(self, capsys):
        d = run_json(capsys, "state")
        assert d["state"] == {"mean_x": 0, "mean_p": 0, "cov_xx": 1, "cov_xp": 0, "cov_pp": 1}

    def test_negative_nth(self, capsys):
        code, out, err = run(capsys, "state", "--nth", "-1")
        assert code == 2
        assert out == ""
        assert len(err.strip().splitlines()) == 1

    def test_params_file(self, capsys, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps({"alpha": 1.0, "psi": math.pi / 2, "n_th": 0.5}))
        d = run_json(capsys, "state", "--params", str(path), "--nth", "1")
        assert d["params"]["n_th"] == 1
        assert d["state"]["mean_p"] == pytest.approx(2.0)

    def test_bad_params_file(self, capsys, tmp_path):
        path = tmp_path / "p.json"
        path.write_text("{\"beta\": 1}")
        assert run(capsys, "state", "--params", str(path))[0] == 2
        assert run(capsys, "state", "--params", str(tmp_path / "missing.json"))[0] == 2

    def test_sigma_and_r_exclusive(self, capsys):
        assert run(capsys, "state", "--r", "1", "--sigma", "0.5")[0] == 2


class TestQfi:
    def test_alpha(self, capsys):
        d = run_json(capsys, "qfi", "--family", "alpha", "--nth", "0", "--Q", "1")
        assert set(d) == {"family", "I_closed", "I_generic", "I_oracle", "crb", "Q"}
        assert d["I_closed"] == 4 and d["crb"] == 0.25 and d["I_oracle"] is None

    def test_nth(self, capsys):
        d = run_json(capsys, "qfi", "--family", "nth", "--nth", "1", "--oracle", "fd")
        assert d["family"] == "n_th"
        assert d["I_closed"] == 0.5
        assert d["I_oracle"] == pytest.approx(0.5, rel=1e-4)

    def test_loss(self, capsys):
        d = run_json(capsys, "qfi", "--family", "loss_eta", "--alpha0", "2", "--sigma", "1", "--eta", "0.5",
                     "--oracle", "fock")
        assert d["I_closed"] == pytest.approx(8, rel=1e-14)
        assert d["I_oracle"] == pytest.approx(8, rel=1e-4)

    def test_Q(self, capsys):
        d = run_json(capsys, "qfi", "--family", "alpha", "--Q", "100")
        assert d["crb"] == pytest.approx(0.0025)

    def test_zero_information(self, capsys):
        code, out, err = run(capsys, "qfi", "--family", "chi", "--alpha", "1")
        assert code == 0
        assert json.loads(out)["crb"] is None
        assert "zero" in err

    @pytest.mark.parametrize("argv", [
        ("qfi", "--family", "beta"),
        ("qfi", "--family", "nth"),
        ("qfi", "--family", "loss_eta", "--alpha0", "1"),
        ("qfi", "--family", "alpha", "--Q", "0"),
        ("qfi", "--family", "alpha", "--oracle", "magic"),
    ])
    def test_domain_errors(self, capsys, argv):
        assert run(capsys, *argv)[0] == 2

    def test_oracle_failure(self, capsys):
        code, out, err = run(capsys, "qfi", "--family", "alpha", "--nth", "60", "--oracle", "fock")
        assert code == 3
        assert out == ""
        assert "n_max" in err


class TestQfiMatrix:
    def test_chi_psi(self, capsys):
        d = run_json(capsys, "qfi-matrix", "--wrt", "chi,psi", "--alpha", "1", "--r", "0.5", "--nth", "0.3",
                     "--chi", "0.4")
        (cc, cp), (_, pp) = d["entries"]
        assert cp == pytest.approx(cc, rel=1e-13)
        assert d["labels"] == ["chi", "psi"]
        assert d["singular"] is False
        assert len(d["crb"]) == 2

    def test_alpha_nth_diagonal(self, capsys):
        d = run_json(capsys, "qfi-matrix", "--wrt", "alpha,nth", "--nth", "0.5", "--r", "0.3", "--chi", "0.7")
        assert d["entries"][0][1] == 0 and d["I_closed"][0][1] == 0

    def test_alpha_psi_chi0(self, capsys):
        d = run_json(capsys, "qfi-matrix", "--wrt", "alpha,psi", "--alpha", "1", "--r", "0.4", "--chi", "0")
        assert abs(d["entries"][0][1]) < 1e-12

    def test_singular(self, capsys):
        code, out, err = run(capsys, "qfi-matrix", "--wrt", "psi,chi")
        d = json.loads(out)
        assert code == 0 and d["singular"] is True and d["crb"] is None
        assert "singular" in err

    @pytest.mark.parametrize("wrt", ["alpha", "alpha,alpha", "alpha,loss_eta", "alpha,beta"])
    def test_bad_wrt(self, capsys, wrt):
        assert run(capsys, "qfi-matrix", "--wrt", wrt)[0] == 2


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestScan:
    def test_shot_noise(self, capsys, tmp_path):
        out = tmp_path / "psi.csv"
        code, _, _ = run(capsys, "scan", "--family", "psi", "--vary", "alpha=1:100:12", "--sigma", "1",
                         "--nth", "0", "--out", str(out))
        assert code == 0
        raw = out.read_bytes()
        assert raw.startswith(b"theta,I_closed,I_generic,crb\n") and b"\r" not in raw
        rows = read_csv(out)
        assert len(rows) == 12
        for row in rows:
            a = float(row["theta"])
            assert float(row["I_closed"]) == pytest.approx(4 * a * a, rel=1e-12)

    def test_constant(self, capsys):
        code, out, _ = run(capsys, "scan", "--family", "chi", "--vary", "alpha=0:3:4")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0
        assert [float(r["I_closed"]) for r in rows] == [0.0] * 4
        assert [float(r["I_generic"]) for r in rows] == [0.0] * 4

    def test_loss_divergence(self, capsys, tmp_path):
        out = tmp_path / "loss.csv"
        run(capsys, "scan", "--family", "loss_eta", "--vary", "eta=0.0001:0.5:20", "--sigma", "0.5",
            "--alpha0", "1", "--out", str(out))
        info = [float(r["I_closed"]) for r in read_csv(out)]
        assert info[0] > 100 * info[5]

    def test_parallel_order(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        base = ("scan", "--family", "psi", "--vary", "chi=0:6:40", "--alpha", "1.3", "--r", "0.6", "--nth", "0.2")
        run(capsys, *base, "--jobs", "1", "--out", str(a))
        run(capsys, *base, "--jobs", "4", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()
        thetas = [float(r["theta"]) for r in read_csv(a)]
        assert thetas == sorted(thetas)

    @pytest.mark.parametrize("spec", ["alpha", "alpha=1:2", "alpha=1:2:1", "alpha=a:2:3", "beta=0:1:3"])
    def test_malformed(self, capsys, tmp_path, spec):
        out = tmp_path / "x.csv"
        assert run(capsys, "scan", "--family", "psi", "--vary", spec, "--out", str(out))[0] == 2
        assert not out.exists()

    def test_failure_leaves_no_file(self, capsys, tmp_path):
        out = tmp_path / "x.csv"
        code, _, _ = run(capsys, "scan", "--family", "psi", "--vary", "nth=-1:1:5", "--out", str(out))
        assert code == 2
        assert not out.exists()


class TestPhaseScaling:
    def test_out(self, capsys, tmp_path):
        out = tmp_path / "phase.csv"
        fit = run_json(capsys, "phase-scaling", "--coherent-only", "--out", str(out))
        assert fit["slope"] == pytest.approx(-0.5, abs=1e-12)
        rows = read_csv(out)
        assert list(rows[0]) == ["N", "fraction", "delta_psi_min"]
        assert len(rows) == 5

    def test_stdout(self, capsys):
        code, out, err = run(capsys, "phase-scaling", "--n-total", "10,100")
        assert code == 0
        assert out.splitlines()[0] == "N,fraction,delta_psi_min"
        assert "slope" in json.loads(err)

    @pytest.mark.parametrize("n", ["0,10", "-1,10", "x", "10"])
    def test_rejects(self, capsys, n):
        assert run(capsys, "phase-scaling", f"--n-total={n}")[0] == 2


class TestCheck:
    def test_fd(self, capsys):
        d = run_json(capsys, "check", "--oracle", "fd", "--families", "all", "--seed", "7",
                     "--points", "10", "--generic-points", "50")
        assert d["pass"] is True
        assert set(d["families"]) == {"alpha", "psi", "sigma2", "r", "chi", "n_th", "purity", "loss_eta"}

    def test_fock_alpha(self, capsys):
        d = run_json(capsys, "check", "--oracle", "fock", "--families", "alpha", "--points", "5")
        assert d["pass"] is True and d["failing"] == []

    def test_unknown_family(self, capsys):
        assert run(capsys, "check", "--families", "alpha,foo")[0] == 2

    def test_deterministic(self, capsys):
        argv = ("check", "--families", "psi,chi", "--points", "5", "--generic-points", "10")
        assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


class TestFormatting:
    def test_round_trip(self):
        x = 0.1 + 0.2
        assert float(json.loads(dumps({"x": x}))["x"]) == x
        assert dumps(1 / 3) == "0.33333333333333331"

    def test_non_finite(self):
        assert dumps([math.inf, math.nan, 1]) == "[null, null, 1]"


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gaussqfi.cli", "qfi", "--family", "alpha"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["I_closed"] == 4


def test_usage_error_exit_code():
    proc = subprocess.run([sys.executable, "-m", "gaussqfi.cli", "nonsense"], capture_output=True, text=True)
    assert proc.returncode == 2
