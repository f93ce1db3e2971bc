import json

import pytest

from astskin import io
from astskin.cli import build_parser, main
from astskin.config import KEYS, WorkbenchConfig, dump_config, load_config, parse_config
from astskin.errors import ConfigError


class TestConfig:

    def test_defaults_match_modules(self):
        cfg = load_config()
        assert cfg == WorkbenchConfig()
        assert cfg.controller.f_d == 2.0 and cfg.controller.epsilon == 0.1 and cfg.controller.sigma_h == 1.0
        assert cfg.protocol.repeats == 20 and cfg.geometry.n_subsections == 7

    def test_file_with_comments(self, tmp_path):
        p = tmp_path / "w.cfg"
        p.write_text("# workbench\nrepeats = 3  # fewer presses\n\nf_d=2.5\nseed = 9\n")
        cfg = load_config(p)
        assert cfg.protocol.repeats == 3 and cfg.controller.f_d == 2.5 and cfg.seed == 9

    def test_flags_override_file(self, tmp_path):
        p = tmp_path / "w.cfg"
        p.write_text("repeats = 3\nseed = 9\n")
        cfg = load_config(p, {"repeats": 1, "seed": None})
        assert cfg.protocol.repeats == 1 and cfg.seed == 9

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="bogus"):
            parse_config("bogus = 1\n")

    def test_bad_value(self):
        with pytest.raises(ConfigError):
            load_config(None, {"epsilon": "-1"})

    def test_dump_round_trip(self, tmp_path):
        cfg = load_config(None, {"seed": 4, "swing_amp": 0.3})
        p = tmp_path / "c.cfg"
        p.write_text(dump_config(cfg))
        assert load_config(p) == cfg

    def test_controller_keys(self):
        for k in ("f_d", "epsilon", "sigma_h", "f_abort"):
            assert KEYS[k][0] == "controller"


class TestParser:

    @pytest.mark.parametrize("argv", [[], ["calibrate"], ["calibrate", "generate"], ["calibrate", "train"],
                                      ["trial"], ["trial", "run"], ["report"]])
    def test_help(self, argv, capsys):
        with pytest.raises(SystemExit) as info:
            build_parser().parse_args(argv + ["--help"])
        assert info.value.code == 0
        out = capsys.readouterr().out
        if argv[-1:] in (["generate"], ["train"], ["run"]):
            for flag in ("--config", "--seed", "--out"):
                assert flag in out

    def test_flags_listed(self, capsys):
        for argv, flag in ((["calibrate", "generate"], "--repeats"), (["calibrate", "train"], "--models"),
                           (["trial", "run"], "--samples")):
            with pytest.raises(SystemExit):
                build_parser().parse_args(argv + ["--help"])
            assert flag in capsys.readouterr().out


class TestCommands:

    def test_generate_repeats(self, tmp_path, capsys):
        assert main(["calibrate", "generate", "--repeats", "1", "--out", str(tmp_path)]) == 0
        ds = io.read_dataset(tmp_path / "dataset.csv")
        assert len(ds) == 56
        assert "56 samples" in capsys.readouterr().out

    def test_bad_config_key(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("not_a_key = 3\n")
        assert main(["calibrate", "generate", "--config", str(cfg), "--out", str(tmp_path)]) == 2
        assert "not_a_key" in capsys.readouterr().err

    def test_protocol_error_exit(self, tmp_path):
        cfg = tmp_path / "p.cfg"
        cfg.write_text("depth_step = 0.001\n")
        assert main(["calibrate", "generate", "--config", str(cfg), "--out", str(tmp_path)]) == 3

    def test_train_single_model(self, tmp_path, capsys):
        main(["calibrate", "generate", "--repeats", "1", "--out", str(tmp_path)])
        capsys.readouterr()
        assert main(["calibrate", "train", "--models", "linear", "--out", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        table = [l for l in out.splitlines() if l.startswith("linear-least-squares")]
        assert len(table) == 1
        for t in ("0.5", "1.0", "1.5", "2.0"):
            assert f"+/-{t}" in out

    def test_train_failure_exit(self, tmp_path, monkeypatch):
        main(["calibrate", "generate", "--repeats", "1", "--out", str(tmp_path)])
        import astskin.cli as cli
        from astskin.errors import TrainingError

        def boom(*a, **k):
            raise TrainingError("every model spec failed")
        monkeypatch.setattr(cli, "select_model", boom)
        assert main(["calibrate", "train", "--out", str(tmp_path)]) == 4

    def test_trial_samples_file(self, tmp_path, gp_model, capsys):
        io.save_model(gp_model, tmp_path / "model.json")
        s = tmp_path / "mine.csv"
        s.write_text("id,weight_n,peduncle_diameter_mm\n1,0.1,1.5\n")
        assert main(["trial", "run", "--samples", str(s), "--out", str(tmp_path)]) == 0
        d = json.loads((tmp_path / "campaign.json").read_text())
        assert len(d["mae_matrix"]) == 1 and len(d["mae_matrix"][0]) == 5
        assert len(list((tmp_path / "trials").glob("*.jsonl"))) == 5

    def test_abort_exit(self, tmp_path, gp_model):
        io.save_model(gp_model, tmp_path / "model.json")
        cfg = tmp_path / "a.cfg"
        cfg.write_text("f_d = 9.0\nf_abort = 9.2\ncompliance = 0.5\nnoise_sigma = 0\n")
        assert main(["trial", "run", "--config", str(cfg), "--trials", "1", "--out", str(tmp_path)]) == 5

    def test_report_missing(self, tmp_path):
        assert main(["report", "--out", str(tmp_path)]) == 2
