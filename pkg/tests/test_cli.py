import json

import pytest

from reentrysim.cli import dump_scenario, main, parse_scenario
from reentrysim.errors import ConfigError


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestScenarioFiles:
    def test_empty_file_gives_the_default_preset(self, tmp_path):
        sc = parse_scenario(write(tmp_path / "s.ini", ""))
        assert sc.entry.v == 7873.0
        assert sc.entry.y == 84_109.0
        assert sc.target[0] == pytest.approx(615_019.4)

    def test_round_trip_is_identity(self, tmp_path):
        text = """
[batch]
preset = x800
seed = 9
runs = 12

[guidance]
hold_altitude = 33000
terminal_gain = 900

[noise]
turbulence_sigma = 0.35

[interceptors]
sites = 21000:type-2, 9000
kill_radius = 25
"""
        first = parse_scenario(write(tmp_path / "a.ini", text))
        dumped = dump_scenario(first)
        second = parse_scenario(write(tmp_path / "b.ini", dumped))
        assert second == first
        assert dump_scenario(second) == dumped

    def test_preset_base_with_overrides(self, tmp_path):
        text = "[batch]\npreset = x800\n\n[guidance]\nhold_altitude = 33000\n"
        sc = parse_scenario(write(tmp_path / "s.ini", text))
        assert sc.guidance.hold_altitude == 33_000.0
        # untouched keys keep the preset shaping
        assert sc.guidance.pullup_start_altitude == 38_200.0

    def test_sites_syntax(self, tmp_path):
        text = "[interceptors]\nsites = 21000:type-2, 9000\n"
        sc = parse_scenario(write(tmp_path / "s.ini", text))
        assert [(s.x, s.kind) for s in sc.sites] == [(21_000.0, "type-2"), (9_000.0, "type-1")]

    def test_unknown_key_named_with_location(self, tmp_path):
        path = write(tmp_path / "s.ini", "[guidance]\nholdaltitude = 1\n")
        with pytest.raises(ConfigError) as err:
            parse_scenario(path)
        assert "holdaltitude" in str(err.value)
        assert "guidance" in str(err.value)

    def test_unknown_section_rejected(self, tmp_path):
        path = write(tmp_path / "s.ini", "[weather]\nwind = 5\n")
        with pytest.raises(ConfigError, match="weather"):
            parse_scenario(path)

    def test_unparsable_value_names_the_key(self, tmp_path):
        path = write(tmp_path / "s.ini", "[batch]\nruns = many\n")
        with pytest.raises(ConfigError, match="runs"):
            parse_scenario(path)

    def test_physical_validation_propagates(self, tmp_path):
        path = write(tmp_path / "s.ini", "[batch]\ng = -1\n")
        with pytest.raises(ConfigError, match="g must be"):
            parse_scenario(path)

    def test_bad_site_entry(self, tmp_path):
        path = write(tmp_path / "s.ini", "[interceptors]\nsites = 9000:type-9\n")
        with pytest.raises(ConfigError, match="type-9"):
            parse_scenario(path)


class TestCommands:
    def test_fly_writes_a_trajectory(self, tmp_path, capsys):
        out = tmp_path / "fly"
        assert main(["fly", "--out", str(out)]) == 0
        rows = (out / "trajectory.csv").read_text().splitlines()
        assert rows[0] == "T,V,theta,X,H,U"
        last = rows[-1].split(",")
        assert float(last[0]) == pytest.approx(93.27, abs=0.5)
        assert float(last[3]) == pytest.approx(615_020.0, abs=50.0)
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["outputs"] == ["trajectory.csv"]
        assert manifest["scenario"]["entry"]["v"] == 7873.0
        assert "seed" in manifest and "version" in manifest

    def test_dump_prints_a_loadable_scenario(self, tmp_path, capsys):
        assert main(["dump", "--scenario", "x950"]) == 0
        text = capsys.readouterr().out
        sc = parse_scenario(write(tmp_path / "d.ini", text))
        assert sc.guidance.hold_altitude == 36_000.0

    def test_engage_without_a_launch_still_reports(self, tmp_path):
        ini = write(
            tmp_path / "s.ini",
            "[interceptors]\nsites = 300000\n",
        )
        out = tmp_path / "engage"
        assert main(["engage", "--scenario", ini, "--out", str(out)]) == 0
        assert (out / "engagement.csv").exists()
        events = (out / "events.csv").read_text()
        assert "touchdown" in events
        assert "launch" not in events

    def test_batch_reruns_are_byte_identical(self, tmp_path):
        args = ["batch", "--scenario", "x615", "--n", "16", "--seed", "4"]
        d1, d2, d3 = (tmp_path / name for name in ("b1", "b2", "b3"))
        assert main(args + ["--out", str(d1)]) == 0
        assert main(args + ["--out", str(d2)]) == 0
        assert main(args + ["--out", str(d3), "--workers", "2"]) == 0
        for name in ("runs.csv", "summary.csv"):
            ref = (d1 / name).read_bytes()
            assert (d2 / name).read_bytes() == ref
            assert (d3 / name).read_bytes() == ref

    def test_batch_run_rows_carry_the_substream_label(self, tmp_path):
        out = tmp_path / "b"
        assert main(["batch", "--scenario", "x615", "--n", "3", "--seed", "7", "--out", str(out)]) == 0
        rows = (out / "runs.csv").read_text().splitlines()
        assert rows[1].split(",")[0] == "7/0"
        assert rows[3].split(",")[0] == "7/2"

    def test_seed_env_override(self, tmp_path, monkeypatch):
        monkeypatch.setenv("REENTRYSIM_SEED", "9")
        out = tmp_path / "env"
        assert main(["batch", "--scenario", "x615", "--n", "2", "--out", str(out)]) == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["seed"] == 9

    def test_calibrate_writes_the_fit(self, tmp_path):
        out = tmp_path / "cal"
        assert main(["calibrate", "type2", "--out", str(out)]) == 0
        rows = (out / "calibration.csv").read_text().splitlines()
        assert rows[0].startswith("thrust,")
        assert len(rows) == 2

    def test_unknown_sweep_kind_is_a_usage_error(self):
        with pytest.raises(SystemExit) as err:
            main(["sweep", "bogus"])
        assert err.value.code == 2

    def test_missing_scenario_file(self, tmp_path, capsys):
        assert main(["fly", "--scenario", str(tmp_path / "nope.ini"), "--out", str(tmp_path)]) == 1
        assert "error:" in capsys.readouterr().err

    def test_config_errors_exit_nonzero(self, tmp_path, capsys):
        ini = write(tmp_path / "s.ini", "[batch]\ndt = 0\n")
        assert main(["fly", "--scenario", ini, "--out", str(tmp_path / "o")]) == 1
        assert "dt" in capsys.readouterr().err
