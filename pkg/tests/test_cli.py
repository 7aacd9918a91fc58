import csv
import re
import subprocess
import sys

import pytest

from aebsim.cli import (
    EXIT_CALIBRATION,
    EXIT_CONFIG,
    EXIT_IO,
    EXIT_OK,
    EXIT_SWEEP_FAILED,
    TRACE_HEADER,
    main,
    read_trace_csv,
)

FLOAT6 = re.compile(r"^-?\d+\.\d{6}$")


def _read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestRun:
    def test_writes_expected_files(self, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["run", "--out", str(out)]) == EXIT_OK
        assert (out / "trace.csv").exists()
        assert (out / "summary.csv").exists()
        assert (out / "config_echo.ini").exists()
        assert "stopped=True" in capsys.readouterr().out

    def test_trace_format(self, tmp_path):
        out = tmp_path / "out"
        main(["run", "--out", str(out)])
        lines = (out / "trace.csv").read_text().splitlines()
        assert lines[0] == TRACE_HEADER
        first = lines[1].split(",")
        last = lines[-1].split(",")
        for row in (first, last):
            assert len(row) == 8
            for cell in row[:4]:
                assert FLOAT6.match(cell), cell
            assert row[4] in ("0", "1") and row[5] in ("0", "1")
        # before anything is in view there is no distance estimate
        assert first[4] == "0" and first[7] == ""
        # the run ends stopped with the sign detected
        assert last[4] == "1" and FLOAT6.match(last[7])

    def test_repeat_runs_byte_identical(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        main(["run", "--out", str(out1), "--attack", "luv2"])
        main(["run", "--out", str(out2), "--attack", "luv2"])
        for name in ("trace.csv", "summary.csv", "config_echo.ini"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_trace_round_trip(self, tmp_path):
        out = tmp_path / "out"
        main(["run", "--out", str(out)])
        samples = read_trace_csv(out / "trace.csv")
        assert samples[0].t == 0.0
        assert samples[-1].v == 0.0
        assert samples[0].est_distance is None
        assert samples[-1].est_distance is not None

    def test_echo_rerun_matches(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        main(["run", "--out", str(out1), "--preset", "Town03_Near",
              "--attack", "yang", "--controller", "fusion-adjusted"])
        main(["run", "--out", str(out2), "--config",
              str(out1 / "config_echo.ini")])
        assert (out1 / "trace.csv").read_bytes() == (out2 / "trace.csv").read_bytes()

    def test_stochastic_config_runs_deterministically(self, tmp_path):
        conf = tmp_path / "s.ini"
        conf.write_text("[scenario]\nattack = eykholt\n"
                        "detection_mode = stochastic\nseed = 5\n")
        out1, out2 = tmp_path / "a", tmp_path / "b"
        main(["run", "--config", str(conf), "--out", str(out1)])
        main(["run", "--config", str(conf), "--out", str(out2)])
        assert (out1 / "trace.csv").read_bytes() == (out2 / "trace.csv").read_bytes()


class TestExitCodes:
    def test_unknown_key(self, tmp_path, capsys):
        bad = tmp_path / "bad.ini"
        bad.write_text("[scenario]\nbogus_key = 1\n")
        assert main(["run", "--config", str(bad)]) == EXIT_CONFIG
        err = capsys.readouterr().err
        assert "bad.ini:2" in err and "bogus_key" in err

    def test_invalid_scene_value(self, tmp_path):
        bad = tmp_path / "bad.ini"
        bad.write_text("[scene]\ns_sign = -5\n")
        assert main(["run", "--config", str(bad)]) == EXIT_CONFIG

    def test_unreachable_calibration_target(self, capsys):
        assert main(["calibrate", "--target", "1000000"]) == EXIT_CALIBRATION
        assert "achievable" in capsys.readouterr().err

    def test_blocked_output_path(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        assert main(["run", "--out", str(blocker / "sub")]) == EXIT_IO


class TestSweep:
    def test_grid_order_and_columns(self, tmp_path, capsys):
        out = tmp_path / "out"
        code = main(["sweep", "--preset", "Town07_Standard",
                     "--attack", "none,luv2",
                     "--controller", "constant,adjusted",
                     "--out", str(out)])
        assert code == EXIT_OK
        rows = _read_rows(out / "summary.csv")
        assert [(r["attack"], r["controller"]) for r in rows] == [
            ("none", "constant"), ("none", "adjusted"),
            ("luv2", "constant"), ("luv2", "adjusted"),
        ]
        assert all(r["stopped"] == "1" for r in rows)
        table = capsys.readouterr().out
        assert "Overshoot (m)" in table and "Margin (m)" in table

    def test_parallel_jobs_byte_identical(self, tmp_path):
        args = ["sweep", "--preset", "all", "--attack", "luv2",
                "--controller", "fusion-adjusted"]
        out1, out2 = tmp_path / "a", tmp_path / "b"
        main(args + ["--out", str(out1), "--jobs", "1"])
        main(args + ["--out", str(out2), "--jobs", "2"])
        assert (out1 / "summary.csv").read_bytes() == (out2 / "summary.csv").read_bytes()

    def test_bad_combination_isolated(self, tmp_path, capsys):
        out = tmp_path / "out"
        code = main(["sweep", "--attack", "none,bogus", "--out", str(out)])
        assert code == EXIT_OK
        rows = _read_rows(out / "summary.csv")
        assert rows[0]["error"] == ""
        assert "bogus" in rows[1]["error"]

    def test_all_rows_bad(self, tmp_path):
        out = tmp_path / "out"
        code = main(["sweep", "--attack", "bogus,worse", "--out", str(out)])
        assert code == EXIT_SWEEP_FAILED

    def test_single_bad_combination_is_config_error(self):
        code = main(["sweep", "--preset", "Town07_Standard", "--attack", "bogus"])
        assert code == EXIT_CONFIG


class TestValidate:
    def test_valid_file(self, tmp_path, capsys):
        conf = tmp_path / "ok.ini"
        conf.write_text("[scenario]\nattack = chen\n")
        assert main(["validate", "--config", str(conf)]) == EXIT_OK
        assert "valid" in capsys.readouterr().out

    def test_invalid_file(self, tmp_path):
        conf = tmp_path / "bad.ini"
        conf.write_text("[nope]\nx = 1\n")
        assert main(["validate", "--config", str(conf)]) == EXIT_CONFIG

    def test_requires_config(self):
        assert main(["validate"]) == EXIT_CONFIG


class TestCalibrate:
    def test_fragment_is_usable_config(self, tmp_path, capsys):
        out = tmp_path / "cal"
        assert main(["calibrate", "--target", "10.3", "--out", str(out)]) == EXIT_OK
        fragment = out / "attack_profile.ini"
        assert fragment.exists()
        printed = capsys.readouterr().out
        assert "achieved_overshoot=" in printed
        run_out = tmp_path / "run"
        assert main(["run", "--config", str(fragment), "--out", str(run_out)]) == EXIT_OK
        rows = _read_rows(run_out / "summary.csv")
        assert abs(float(rows[0]["overshoot"]) - 10.3) <= 0.5


class TestEntryPoint:
    def test_help_via_subprocess(self):
        proc = subprocess.run(
            [sys.executable, "-m", "aebsim.cli", "--help"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        for sub in ("run", "sweep", "calibrate", "validate"):
            assert sub in proc.stdout
