from pathlib import Path

import pytest
import yaml

from polybounds.cli import main
from polybounds.table1 import check_plate_coefficient, check_table

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_table1(capsys):
    code, out = run(capsys, "table1")
    assert code == 0
    assert "39/39" in out.out
    assert len(check_table()) == 39
    assert all(a == b for _, a, b in check_plate_coefficient(16))


def test_bounds_subcommand(capsys):
    code, out = run(capsys, "bounds", "--domain", "box:1,1", "--l", "1", "--k", "16", "--sigma0", "4")
    assert code == 0
    line = next(s for s in out.out.splitlines() if s.startswith("theorem_upper "))
    assert float(line.split()[1]) == pytest.approx(1608.51, abs=5e-3)


def test_bounds_optimized_and_corollary(capsys):
    code, out = run(capsys, "bounds", "--domain", "ball:1,2", "--l", "2", "--k", "1000",
                    "--delta0", "2", "--proof-form")
    assert code == 0
    assert "cheng_wei" in out.out and "corollary" in out.out


def test_bounds_bad_domain(capsys):
    code, out = run(capsys, "bounds", "--domain", "torus:1", "--k", "3")
    assert code == 2 and "error" in out.err


def test_spectrum_subcommand(capsys):
    code, out = run(capsys, "spectrum", "--domain", "interval:1", "--l", "2", "--method", "beam-roots",
                    "--count", "2")
    assert code == 0
    assert out.out.splitlines()[1].startswith("1 500.56390")
    code, out = run(capsys, "spectrum", "--domain", "box:1,1", "--l", "2", "--method", "rayleigh-ritz",
                    "--count", "1", "--basis", "16")
    assert code == 0 and "1294.93397" in out.out


def test_verify_exit_codes(capsys, tmp_path):
    for name in ("membrane_square", "clamped_interval", "plate_square"):
        code, out = run(capsys, "verify", "--config", str(CONFIGS / f"{name}.yaml"))
        assert code == 0, out.out
        assert "0 violations" in out.out


def test_report_degenerate_only(capsys, tmp_path):
    code, out = run(capsys, "report", "--config", str(CONFIGS / "degenerate_square.yaml"),
                    "--out", str(tmp_path))
    assert code == 6
    assert (tmp_path / "degenerate_square.csv").exists()


def test_report_is_byte_identical(capsys, tmp_path):
    for sub in ("a", "b"):
        code, _ = run(capsys, "report", "--config", str(CONFIGS / "membrane_square.yaml"),
                      "--seed", "5", "--out", str(tmp_path / sub))
        assert code == 0
    a = (tmp_path / "a" / "membrane_square.csv").read_bytes()
    assert a == (tmp_path / "b" / "membrane_square.csv").read_bytes()


def test_proof_form_flag(capsys, tmp_path):
    code, _ = run(capsys, "report", "--config", str(CONFIGS / "membrane_square.yaml"), "--proof-form",
                  "--out", str(tmp_path))
    assert code == 0
    summary = yaml.safe_load((tmp_path / "membrane_square.summary.json").read_text())
    assert summary["meta"]["proof_form"] is True


def test_missing_config(capsys, tmp_path):
    code, out = run(capsys, "verify", "--config", str(tmp_path / "none.yaml"))
    assert code == 2


def test_unwritable_output(capsys, tmp_path):
    blocker = tmp_path / "f"
    blocker.write_text("")
    code, _ = run(capsys, "report", "--config", str(CONFIGS / "clamped_interval.yaml"), "--out", str(blocker))
    assert code == 5


def test_no_admissible_sigma_exit(capsys, tmp_path):
    code, out = run(capsys, "bounds", "--domain", "ball:1,2", "--k", "1")
    assert code == 0 and "no admissible sigma0" in out.out
    conf = tmp_path / "c.yaml"
    conf.write_text(yaml.safe_dump({
        "problem": {"domain": {"kind": "box", "extents": [1.0, 1.0], "center": [0.5, 0.5]}, "l": 1},
        "k_range": [1, 1], "bounds": ["theorem_upper"]}))
    code, out = run(capsys, "verify", "--config", str(conf))
    assert code == 4 and "sigma0" in out.err
