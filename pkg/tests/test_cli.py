"""Command-line interface: subcommands, config files, validation."""

import numpy as np
import pytest

from ris_rqsm import cli
from ris_rqsm.dnn import generate_dataset, train, TrainConfig, save_checkpoint
from ris_rqsm.errors import ConfigurationError
from ris_rqsm.sim import CSV_HEADER


def run_cli(*args):
    return cli.main(list(args))


class TestComplexityCommand:
    def test_default_cases_to_stdout(self, capsys):
        assert run_cli("complexity") == 0
        out = capsys.readouterr().out.strip().split("\n")
        assert out[0].startswith("case,")
        values = [line.split(",")[-2:] for line in out[1:]]
        assert values == [["128", "296"], ["256", "6336"], ["2048", "476672"]]

    def test_cases_file(self, tmp_path, capsys):
        cases = tmp_path / "cases.csv"
        cases.write_text(
            "case,L,layer_sizes,N,N_R,N_S,coas_rms,dnn_rms\n"
            "Case 1,2,4x4,8,4,2,0,0\n"
        )
        out_csv = tmp_path / "out.csv"
        assert run_cli("complexity", "--cases", str(cases), "-o", str(out_csv)) == 0
        body = out_csv.read_text().strip().split("\n")
        assert body[1].endswith("128,296")


class TestSimulateCommand:
    def test_grid_row_count(self, tmp_path):
        out = tmp_path / "ber.csv"
        code = run_cli(
            "simulate", "--selector", "coas", "--M", "8", "--N", "16",
            "--NR", "4", "--NS", "2", "--snr", "0:2:20", "--seed", "7",
            "--max-frames", "1024", "--min-bit-errors", "1000000",
            "--block-frames", "512", "-o", str(out),
        )
        assert code == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == CSV_HEADER
        assert len(lines) == 1 + 11

    def test_selector_required(self, capsys):
        code = run_cli(
            "simulate", "--M", "4", "--N", "4", "--NR", "4", "--NS", "2",
            "--snr", "0", "--seed", "1",
        )
        assert code != 0
        assert "selector" in capsys.readouterr().err

    def test_seed_required(self, capsys):
        code = run_cli(
            "simulate", "--selector", "coas", "--M", "4", "--N", "4",
            "--NR", "4", "--NS", "2", "--snr", "0",
        )
        assert code != 0
        assert "seed" in capsys.readouterr().err

    def test_config_file_supplies_defaults_and_flags_override(self, tmp_path):
        conf = tmp_path / "run.conf"
        conf.write_text(
            "# sweep defaults\n"
            "selector = coas\n"
            "M = 4\n"
            "N = 4\n"
            "NR = 4\n"
            "NS = 2\n"
            "snr = 0,5\n"
            "seed = 3\n"
            "max_frames = 512\n"
            "min_bit_errors = 1000000\n"
            "block_frames = 512\n"
        )
        out = tmp_path / "a.csv"
        assert run_cli("simulate", "--config", str(conf), "-o", str(out)) == 0
        assert len(out.read_text().strip().split("\n")) == 3

        out2 = tmp_path / "b.csv"
        assert run_cli(
            "simulate", "--config", str(conf), "--snr", "0", "-o", str(out2)
        ) == 0
        assert len(out2.read_text().strip().split("\n")) == 2

    def test_malformed_config_file(self, tmp_path, capsys):
        conf = tmp_path / "bad.conf"
        conf.write_text("selector coas\n")
        code = run_cli("simulate", "--config", str(conf))
        assert code != 0

    def test_byte_identical_reruns_without_timing(self, tmp_path):
        args = [
            "simulate", "--selector", "coas", "--M", "4", "--N", "4",
            "--NR", "4", "--NS", "2", "--snr", "0,4", "--seed", "9",
            "--max-frames", "1024", "--min-bit-errors", "1000000",
            "--block-frames", "512", "--no-timing",
        ]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run_cli(*args, "-o", str(a)) == 0
        assert run_cli(*args, "-o", str(b)) == 0
        assert a.read_bytes() == b.read_bytes()


class TestTrainAndSimulateRoundTrip:
    def test_train_then_simulate(self, tmp_path, capsys):
        model = tmp_path / "model.npz"
        code = run_cli(
            "train", "--N", "4", "--NR", "4", "--NS", "2",
            "--samples", "2000", "--epochs", "2", "--hidden", "16x16",
            "--seed", "5", "-o", str(model),
        )
        assert code == 0
        assert model.exists()
        out = tmp_path / "dnn.csv"
        code = run_cli(
            "simulate", "--selector", "dnn", "--model", str(model),
            "--M", "4", "--N", "4", "--NR", "4", "--NS", "2",
            "--snr", "5", "--seed", "2", "--max-frames", "1024",
            "--min-bit-errors", "1000000", "--block-frames", "512",
            "-o", str(out),
        )
        assert code == 0
        assert out.exists()

    def test_dimension_mismatch_is_reported(self, tmp_path, capsys):
        model = tmp_path / "model.npz"
        ds = generate_dataset(500, 4, 4, 2, np.random.default_rng(0))
        result = train(ds, TrainConfig(n_samples=500, epochs=1, hidden_layers=(8,), seed=0))
        save_checkpoint(model, result.params)
        code = run_cli(
            "simulate", "--selector", "dnn", "--model", str(model),
            "--M", "4", "--N", "8", "--NR", "4", "--NS", "2",
            "--snr", "5", "--seed", "2",
        )
        assert code != 0
        assert "input size" in capsys.readouterr().err


class TestDatasetCommand:
    def test_writes_npz(self, tmp_path):
        out = tmp_path / "data.npz"
        code = run_cli(
            "dataset", "--N", "8", "--NR", "4", "--NS", "2",
            "--samples", "300", "--seed", "4", "-o", str(out),
        )
        assert code == 0
        with np.load(out) as data:
            assert data["features"].shape == (300, 64)
            assert data["labels"].shape == (300,)
            assert list(data["dims"]) == [8, 4, 2]


class TestSelfcheck:
    def test_selfcheck_passes(self, capsys):
        assert run_cli("selfcheck") == 0
        out = capsys.readouterr().out
        assert "FAIL" not in out
        assert out.count("PASS") == 6


class TestSnrGridParsing:
    def test_range_syntax(self):
        assert cli.parse_snr_grid("0:2:20") == tuple(float(v) for v in range(0, 21, 2))

    def test_comma_syntax(self):
        assert cli.parse_snr_grid("1,2.5,7") == (1.0, 2.5, 7.0)

    def test_single_value(self):
        assert cli.parse_snr_grid("5") == (5.0,)

    def test_bad_range(self):
        with pytest.raises(ConfigurationError):
            cli.parse_snr_grid("0:0:10")
        with pytest.raises(ConfigurationError):
            cli.parse_snr_grid("0:1:2:3")
