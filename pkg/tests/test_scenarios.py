"""Config parsing, sweep execution, CSV output, and CLI exit codes."""

import json
from pathlib import Path

import pytest

from zrdelay import cli
from zrdelay.scenarios import ConfigError, parse_config, run_scenario

RADIAL_CFG = """
scenario.mode = radial_sweep
packet.p = 1.0
sweep.alpha = 1
sweep.dx = 25
output.prefix = tiny
"""

LARMOR_CFG = """
scenario.mode = larmor_sweep
potential.kind = rectangular
potential.height = 0.5
potential.a = 0
potential.b = 1
packet.p = 1.0
sweep.df = 4,8
output.prefix = clock
"""


class TestParsing:
    def test_minimal_radial(self):
        s = parse_config(RADIAL_CFG)
        assert s.mode == "radial_sweep"
        assert s.alpha_values == (1.0,)

    def test_unknown_mode(self):
        with pytest.raises(ConfigError, match="scenario.mode"):
            parse_config("scenario.mode = warp_drive\n")

    def test_negative_width_rejected(self):
        with pytest.raises(ConfigError, match="positive"):
            parse_config(RADIAL_CFG.replace("sweep.dx = 25", "sweep.dx = -1"))

    def test_singular_event_time_rejected(self):
        cfg = ("scenario.mode = transmit_sweep\npotential.kind = zero_range\n"
               "potential.omega = 1\npacket.p = 1\nsweep.dx = 6\n")
        with pytest.raises(ConfigError, match="singularity"):
            parse_config(cfg)

    def test_strict_rejects_unknown_keys(self):
        cfg = RADIAL_CFG + "typo.key = 1\n"
        parse_config(cfg)  # lenient: accepted
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config(cfg, strict=True)

    def test_error_lists_every_field(self):
        cfg = ("scenario.mode = transmit_sweep\npotential.kind = zero_range\n"
               "packet.p = -1\npacket.c = 0\n")
        with pytest.raises(ConfigError) as err:
            parse_config(cfg)
        text = str(err.value)
        assert "packet.p" in text and "packet.c" in text and "sweep.dx" in text

    def test_log_sweep_expansion(self):
        cfg = RADIAL_CFG.replace("sweep.dx = 25", "sweep.dx_log = 10,100\nsweep.per_decade = 4")
        s = parse_config(cfg)
        assert len(s.dx_values) == 5
        assert s.dx_values[0] == pytest.approx(10.0)
        assert s.dx_values[-1] == pytest.approx(100.0)

    def test_shipped_configs_validate(self):
        for name, text in cli._shipped_configs().items():
            scenario = parse_config(text, strict=True)
            assert scenario.mode, name


class TestExecution:
    def test_radial_run_writes_table_and_manifest(self, tmp_path):
        result = run_scenario(parse_config(RADIAL_CFG), tmp_path)
        table = tmp_path / "tiny_radial.csv"
        manifest = tmp_path / "tiny_manifest.json"
        assert table.exists() and manifest.exists()
        lines = table.read_text().splitlines()
        assert lines[0].startswith("# zrdelay ")
        assert lines[1] == "# schema: 1"
        header = next(l for l in lines if not l.startswith("#"))
        assert header.split(",")[0] == "status"
        meta = json.loads(manifest.read_text())
        assert meta["rows"] == 1 and meta["flagged"] == 0
        assert not result.flagged

    def test_determinism_byte_identical(self, tmp_path):
        scenario = parse_config(LARMOR_CFG)
        run_scenario(scenario, tmp_path / "a")
        run_scenario(scenario, tmp_path / "b", jobs=2)
        for name in ("clock_pointer.csv", "clock_manifest.json"):
            assert (tmp_path / "a" / name).read_bytes() == \
                   (tmp_path / "b" / name).read_bytes()

    def test_skipped_points_recorded(self, tmp_path):
        cfg = ("scenario.mode = transmit_sweep\npotential.kind = zero_range\n"
               "potential.omega = 1\npacket.p = 1\nsweep.dx = 4,20\n"
               "output.prefix = skip\n")
        result = run_scenario(parse_config(cfg), tmp_path)
        statuses = [r["status"] for r in result.rows]
        assert len(statuses) == 2
        assert statuses[0].startswith("skipped: p*dx <= 2K")
        assert statuses[1] == "ok"
        text = (tmp_path / "skip_transmitted.csv").read_text()
        assert "skipped: p*dx <= 2K" in text

    def test_empty_sweep_rejected_not_crashed(self):
        with pytest.raises(ConfigError, match="sweep.dx"):
            parse_config("scenario.mode = transmit_sweep\npotential.kind = zero_range\n")


class TestCli:
    def test_validate_ok(self, tmp_path, capsys):
        cfg = tmp_path / "r.cfg"
        cfg.write_text(RADIAL_CFG)
        assert cli.main(["validate", str(cfg)]) == cli.EXIT_OK
        assert "radial_sweep" in capsys.readouterr().out

    def test_validate_bad_config_exit_1(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("scenario.mode = nope\n")
        assert cli.main(["validate", str(cfg)]) == cli.EXIT_CONFIG
        assert "scenario.mode" in capsys.readouterr().err

    def test_missing_file_exit_1(self, capsys):
        assert cli.main(["validate", "no-such-file.cfg"]) == cli.EXIT_CONFIG

    def test_run_by_shipped_name(self, tmp_path, capsys):
        code = cli.main(["run", "radial", "--out", str(tmp_path)])
        assert code == cli.EXIT_OK
        assert (tmp_path / "radial_radial.csv").exists()

    def test_list_scenarios(self, capsys):
        assert cli.main(["list-scenarios"]) == cli.EXIT_OK
        out = capsys.readouterr().out
        for name in ("fig4", "fig6", "radial", "larmor"):
            assert name in out

REFLECT_DUMP_CFG = """
scenario.mode = reflect_sweep
potential.kind = zero_range
potential.omega = 1.0
packet.p = 1.0
packet.dispersion = linear
packet.x_i = -50
time.t = 100
sweep.dx = 0.02
output.prefix = dumped
"""


class TestWaveDump:
    def test_reflection_dump_contents(self, tmp_path):
        scenario = parse_config(REFLECT_DUMP_CFG)
        result = run_scenario(scenario, tmp_path, dump_waves=True)
        dump = tmp_path / "dumped_waves.csv"
        assert dump in result.files
        lines = dump.read_text().splitlines()
        assert any(line.startswith("# dump: waves") for line in lines)
        header = next(line for line in lines if not line.startswith("#"))
        assert header.split(",") == ["x", "density_final", "density_limit"]
        manifest = json.loads((tmp_path / "dumped_manifest.json").read_text())
        assert "dumped_waves.csv" in manifest["tables"]

    def test_cli_flag_and_determinism(self, tmp_path):
        cfg = tmp_path / "r.cfg"
        cfg.write_text(REFLECT_DUMP_CFG)
        a, b = tmp_path / "a", tmp_path / "b"
        assert cli.main(["run", str(cfg), "--out", str(a), "--dump-waves"]) == cli.EXIT_OK
        assert cli.main(["run", str(cfg), "--out", str(b), "--dump-waves"]) == cli.EXIT_OK
        assert (a / "dumped_waves.csv").read_bytes() == (b / "dumped_waves.csv").read_bytes()

    def test_flag_inert_for_larmor(self, tmp_path, capsys):
        cfg = tmp_path / "l.cfg"
        cfg.write_text(LARMOR_CFG)
        assert cli.main(["run", str(cfg), "--out", str(tmp_path),
                         "--dump-waves"]) == cli.EXIT_OK
        assert "no effect" in capsys.readouterr().err
        assert not (tmp_path / "clock_waves.csv").exists()
