# test_cli.py
"""Test the command-line entry point end to end on small grids."""

import csv
import json

from mclaw.main import main

BURGERS_CONFIG = """\
[run]
name = burgers_smoke
[geometry]
metric = flat
[flux]
family = burgers
[initial]
u0 = sin(2*pi*r1)
[grid]
n = 32
[scheme]
t_end = 0.1
output_times = 0.05, 0.1
[checks]
run = mass, entropy, linf
"""

SHEAR_CONFIG = """\
[run]
scenario = shear_flat_torus
[initial]
u0 = sin(2*pi*r1)
[grid]
n = 16
[checks]
run = tv_diminishing
"""

EXPANDING_CONFIG = """\
[run]
scenario = expanding_circle_compression
[grid]
n = 256
[checks]
run = oracle_l1
tolerances = oracle_l1: 1e-6
"""


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_list_scenarios(capsys):
    assert main(["list-scenarios"]) == 0
    out = capsys.readouterr().out
    assert "burgers_flat_circle" in out
    assert "expanding_circle_compression" in out


def test_version(capsys):
    assert main(["--version"]) == 0


def test_unknown_command_is_a_usage_error():
    assert main(["explode"]) == 2


def test_run_writes_results(tmp_path, capsys):
    """All requested checks pass; series.csv has one row per output time."""
    config = _write(tmp_path, "burgers.cfg", BURGERS_CONFIG)
    out = tmp_path / "out"
    assert main(["run", str(config), "--output-dir", str(out)]) == 0
    assert "all 3 checks passed" in capsys.readouterr().out

    run_dir = out / "burgers_smoke"
    with open(run_dir / "series.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "linf", "linf_envelope", "tv", "tv_envelope", "mass", "entropy_residual_max"]
    assert [float(r[0]) for r in rows[1:]] == [0.0, 0.05, 0.1]

    report = json.loads((run_dir / "report.json").read_text())
    assert report["passed"] is True
    assert set(report["checks"]) == {"mass", "entropy", "linf"}
    assert all(c["pass"] for c in report["checks"].values())
    assert (run_dir / "state_0.1.csv").exists()
    print(f"✓ run wrote {sorted(p.name for p in run_dir.iterdir())}")


def test_shear_tv_diminishing_fails(tmp_path, capsys):
    """Shear flow creates variation across rows, so TV must grow and the check fails."""
    config = _write(tmp_path, "shear.cfg", SHEAR_CONFIG)
    out = tmp_path / "out"
    assert main(["run", str(config), "--output-dir", str(out)]) == 1
    assert "failed checks: tv_diminishing" in capsys.readouterr().out

    report = json.loads((out / "shear" / "report.json").read_text())
    assert report["checks"]["tv_diminishing"]["pass"] is False


def test_expanding_circle_matches_oracle(tmp_path):
    config = _write(tmp_path, "expanding.cfg", EXPANDING_CONFIG)
    assert main(["run", str(config), "--output-dir", str(tmp_path / "out")]) == 0


def test_bad_config_exit_code(tmp_path):
    config = _write(tmp_path, "bad.cfg", BURGERS_CONFIG.replace("n = 32", "n = 3"))
    assert main(["run", str(config)]) == 2
    assert main(["run", "no_such_scenario"]) == 2


def test_results_are_deterministic(tmp_path):
    """Two identical runs write byte-identical series."""
    config = _write(tmp_path, "burgers.cfg", BURGERS_CONFIG)
    first, second = tmp_path / "a", tmp_path / "b"
    assert main(["run", str(config), "--output-dir", str(first)]) == 0
    assert main(["run", str(config), "--output-dir", str(second)]) == 0
    series = "burgers_smoke/series.csv"
    assert (first / series).read_bytes() == (second / series).read_bytes()


def test_converge_reports_exact(tmp_path, capsys):
    """The compression scenario is reproduced to rounding at every resolution."""
    out = tmp_path / "out"
    code = main(
        ["converge", "expanding_circle_compression", "--resolutions", "16,32", "--output-dir", str(out)]
    )
    assert code == 0
    assert "exact" in capsys.readouterr().out
    assert (out / "expanding_circle_compression" / "convergence.csv").exists()


def test_converge_rejects_tiny_resolutions():
    assert main(["converge", "expanding_circle_compression", "--resolutions", "2,4"]) == 2


if __name__ == "__main__":
    import pathlib
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        assert main(["run", str(_write(pathlib.Path(tmp), "burgers.cfg", BURGERS_CONFIG)), "--output-dir", tmp]) == 0
    print("\n✓ All tests passed!")
