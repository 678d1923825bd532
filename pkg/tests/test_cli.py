import numpy as np
import pytest

from maxent import cli, csvio


def run(*argv):
    return cli.main([str(a) for a in argv])


def read(path):
    return path.read_bytes()


def test_reconstruct_step(tmp_path):
    assert run("reconstruct", "--function", "step", "--moments", 100, "--nodes", 192, "--out-dir", tmp_path) == 0
    x, rho, f = csvio.read_reconstruction(tmp_path / "recon.csv")
    assert x.size == 192
    assert np.max(np.abs(rho - 1.0)) <= 1e-6
    np.testing.assert_array_equal(f, 1.0)
    report = csvio.read_report(tmp_path / "report.txt")
    assert report["converged"] == "true"
    assert list(report).count("delta1") == 1
    assert {"iterations", "objective", "partition_value", "d_kl", "d_v"} <= set(report)


def test_u_function_moments_file(tmp_path):
    assert run("moments", "--function", "u-function", "--moments", 120, "--out-dir", tmp_path) == 0
    text = (tmp_path / "moments.csv").read_text()
    lines = text.splitlines()
    assert lines[0] == "i,mu" and len(lines) == 122
    mu = csvio.read_moments(tmp_path / "moments.csv")
    assert mu[0] == 1.0 and np.all(mu.values[1:] == 0.0)
    assert "\r" not in text


def test_single_row_file_gives_uniform_density(tmp_path):
    (tmp_path / "custom.csv").write_text("i,mu\n0,1\n")
    code = run("reconstruct", "--function", "file", "--moments-path", tmp_path / "custom.csv", "--out-dir", tmp_path)
    assert code == 0
    _, rho, f = csvio.read_reconstruction(tmp_path / "recon.csv")
    assert f is None
    np.testing.assert_array_equal(rho, 1.0)


@pytest.mark.parametrize("name,M", [("double-step", 30), ("sqrt", 20), ("oscillatory", 20)])
def test_file_round_trip_is_bit_identical(tmp_path, name, M):
    built, via_file = tmp_path / "a", tmp_path / "b"
    assert run("moments", "--function", name, "--moments", M, "--out-dir", tmp_path) == 0
    assert run("reconstruct", "--function", name, "--moments", M, "--nodes", 96, "--out-dir", built) == 0
    assert run(
        "reconstruct", "--function", "file", "--moments-path", tmp_path / "moments.csv",
        "--reference", name, "--nodes", 96, "--out-dir", via_file,
    ) == 0
    assert read(built / "recon.csv") == read(via_file / "recon.csv")
    assert read(built / "report.txt") == read(via_file / "report.txt")


def test_outputs_are_deterministic(tmp_path):
    for d in ("a", "b"):
        assert run("reconstruct", "--function", "double-parabola", "--moments", 30,
                   "--out-dir", tmp_path / d) == 0
    assert read(tmp_path / "a" / "recon.csv") == read(tmp_path / "b" / "recon.csv")


def test_not_converged_exit_code(tmp_path):
    code = run("reconstruct", "--function", "double-parabola", "--moments", 40,
               "--max-iterations", 1, "--out-dir", tmp_path)
    assert code == 2
    assert (tmp_path / "recon.csv").exists()
    assert csvio.read_report(tmp_path / "report.txt")["converged"] == "false"


def test_usage_errors_exit_one(tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        run("reconstruct", "--function", "gaussian", "--moments", 3)
    assert info.value.code == 1
    assert run("reconstruct", "--function", "sqrt", "--out-dir", tmp_path) == 1
    assert run("reconstruct", "--function", "file", "--out-dir", tmp_path) == 1
    assert "--moments-path" in capsys.readouterr().err


def _error(capsys, *argv):
    assert run(*argv) == 1
    return capsys.readouterr().err


def test_file_errors_have_distinct_messages(tmp_path, capsys):
    bad_header = tmp_path / "h.csv"
    bad_header.write_text("k,value\n0,1\n")
    bad_value = tmp_path / "v.csv"
    bad_value.write_text("i,mu\n0,one\n")
    gap = tmp_path / "g.csv"
    gap.write_text("i,mu\n0,1\n2,0\n")
    blocker = tmp_path / "plain-file"
    blocker.write_text("")
    base = ("reconstruct", "--function", "file", "--out-dir", tmp_path, "--moments-path")
    messages = [
        _error(capsys, *base, tmp_path / "missing.csv"),
        _error(capsys, *base, bad_header),
        _error(capsys, *base, bad_value),
        _error(capsys, *base, gap),
        _error(capsys, "moments", "--function", "sqrt", "--moments", 3, "--out-dir", blocker / "sub"),
    ]
    assert "cannot read" in messages[0]
    assert "header" in messages[1]
    assert "non-numeric" in messages[2]
    assert "expected index 1" in messages[3]
    assert "output directory" in messages[4]
    assert len(set(messages)) == len(messages)


def test_sweep_writes_table(tmp_path, monkeypatch):
    monkeypatch.setenv("MAXENT_THREADS", "2")
    code = run("sweep", "--function", "double-parabola", "--m-list", "10,20", "--nodes", 96, "--out-dir", tmp_path)
    assert code == 0
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert lines[0] == ",".join(csvio.SWEEP_HEADER)
    assert [row.split(",")[1] for row in lines[1:]] == ["10", "20"]
    assert float(lines[2].split(",")[-1]) > 0.1
    assert (tmp_path / "recon_M10.csv").exists() and (tmp_path / "recon_M20.csv").exists()


def test_sweep_rejects_bad_thread_count(tmp_path, monkeypatch):
    monkeypatch.setenv("MAXENT_THREADS", "many")
    assert run("sweep", "--function", "sqrt", "--m-list", "4", "--out-dir", tmp_path) == 1


def test_diagnose_recomputes_report(tmp_path, capsys):
    assert run("moments", "--function", "sqrt", "--moments", 20, "--out-dir", tmp_path) == 0
    assert run("reconstruct", "--function", "sqrt", "--moments", 20, "--nodes", 96, "--out-dir", tmp_path) == 0
    capsys.readouterr()
    assert run("diagnose", "--recon-path", tmp_path / "recon.csv", "--moments-path", tmp_path / "moments.csv",
               "--out-dir", tmp_path) == 0
    out = dict(line.split("=") for line in capsys.readouterr().out.splitlines())
    report = csvio.read_report(tmp_path / "report.txt")
    assert out["d_kl"] == report["d_kl"]
    assert out["bound_satisfied"] == "true"
    assert (tmp_path / "diagnostics.txt").exists()


def test_diagnose_rejects_foreign_nodes(tmp_path, capsys):
    (tmp_path / "r.csv").write_text("x,rho\n0.25,1\n0.75,1\n")
    (tmp_path / "m.csv").write_text("i,mu\n0,1\n1,0\n")
    err = _error(capsys, "diagnose", "--recon-path", tmp_path / "r.csv", "--moments-path", tmp_path / "m.csv",
                 "--reference", "step", "--out-dir", tmp_path)
    assert "Gauss-Legendre" in err


def test_logistic_gen(tmp_path):
    code = run("logistic-gen", "--moments", 6, "--ensemble-size", 4, "--transient-steps", 100,
               "--sample-steps", 100000, "--bins", 64, "--out-dir", tmp_path)
    assert code == 0
    mu = csvio.read_moments(tmp_path / "moments.csv")
    assert mu.order == 6 and mu[0] == 1.0
    hist = csvio.read_histogram(tmp_path / "histogram.csv")
    assert hist.densities.size == 64


def test_module_entry_point():
    import subprocess
    import sys

    out = subprocess.run([sys.executable, "-m", "maxent", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "reconstruct" in out.stdout
