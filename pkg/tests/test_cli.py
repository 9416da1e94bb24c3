import numpy as np
import pytest

from splitcodec.cli import _parse_snr, main
from splitcodec.data import load_dataset
from splitcodec.errors import ConfigError
from splitcodec.interface import geometric_profile
from splitcodec.wire import profile_document

TINY_CFG = """\
height = 2
width = 2
levels = 2
codeword_bits = 4
symbols = 2
eps_first = 0.3
eps_last = 0.05
vimco_samples = 3
batch_size = 8
epochs = 2
learning_rate = 0.01
source_hidden = 6
channel_hidden = 6
images_per_point = 3
seed = 1
"""


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    """A tiny but complete run: dataset, stage-1 and stage-2 bundles."""
    root = tmp_path_factory.mktemp("cli")
    cfg = root / "run.cfg"
    cfg.write_text(TINY_CFG)
    dataset = root / "train.scds"
    source = root / "source.bundle"
    channel = root / "channel.bundle"
    assert main(["gen-data", "--config", str(cfg), "--count", "24",
                 "--out", str(dataset)]) == 0
    assert main(["train-source", "--config", str(cfg), "--data", str(dataset),
                 "--out", str(source), "--log", str(root / "s1.csv")]) == 0
    assert main(["train-channel", "--config", str(cfg), "--data", str(dataset),
                 "--source", str(source), "--out", str(channel)]) == 0
    return {"root": root, "cfg": cfg, "dataset": dataset,
            "source": source, "channel": channel}


class TestParseSnr:
    def test_range(self):
        assert _parse_snr("0:10:5") == [0.0, 5.0, 10.0]

    def test_fractional_step(self):
        got = _parse_snr("-1:1:0.5")
        np.testing.assert_allclose(got, [-1.0, -0.5, 0.0, 0.5, 1.0])

    def test_comma_list(self):
        assert _parse_snr("3,-2,7") == [3.0, -2.0, 7.0]

    def test_bad_step(self):
        with pytest.raises(ConfigError):
            _parse_snr("0:10:0")

    def test_bad_shape(self):
        with pytest.raises(ConfigError):
            _parse_snr("0:10")


class TestPipelineCommands:
    def test_gen_data_output(self, workdir):
        images = load_dataset(workdir["dataset"])
        assert images.shape == (24, 2, 2, 1)

    def test_training_log_written(self, workdir):
        lines = (workdir["root"] / "s1.csv").read_text().splitlines()
        assert lines[0].startswith("epoch,train_elbo,val_elbo")
        assert len(lines) >= 2

    def test_eval_sweep(self, workdir):
        out = workdir["root"] / "sweep.csv"
        code = main(["eval-sweep", "--config", str(workdir["cfg"]),
                     "--data", str(workdir["dataset"]),
                     "--source", str(workdir["source"]),
                     "--channel", str(workdir["channel"]),
                     "--snr", "0:10:5", "--out", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "snr_db,psnr_db,ber_level_1,ber_level_2,n_images,seed"
        assert len(lines) == 4

    def test_probe_levels(self, workdir):
        out = workdir["root"] / "probe.csv"
        code = main(["probe-levels", "--config", str(workdir["cfg"]),
                     "--data", str(workdir["dataset"]),
                     "--source", str(workdir["source"]), "--out", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "level,psnr_drop_db"
        assert len(lines) == 3

    def test_ber_report(self, workdir):
        out = workdir["root"] / "ber.csv"
        code = main(["ber-report", "--config", str(workdir["cfg"]),
                     "--data", str(workdir["dataset"]),
                     "--source", str(workdir["source"]),
                     "--channel", str(workdir["channel"]),
                     "--snr", "0,10", "--out", str(out)])
        assert code == 0
        assert len(out.read_text().splitlines()) == 3

    def test_baseline_eval(self, workdir):
        out = workdir["root"] / "baseline.csv"
        code = main(["baseline-eval", "--config", str(workdir["cfg"]),
                     "--data", str(workdir["dataset"]),
                     "--snr", "0,20", "--bits", "2", "--code", "none",
                     "--modulation", "bpsk", "--out", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "snr_db,psnr_db,chain"
        assert len(lines) == 3


class TestWireCommands:
    def test_pack_unpack_round_trip(self, tmp_path):
        profile = geometric_profile(0.3, 0.05, 2, 4)
        doc = tmp_path / "profile.txt"
        doc.write_text(profile_document(profile))
        bits = tmp_path / "bits.txt"
        bits.write_text("1011\n")
        packets = tmp_path / "packets.bin"
        out = tmp_path / "recovered.txt"
        assert main(["pack", "--profile-doc", str(doc), "--bits", str(bits),
                     "--session", "5", "--out", str(packets)]) == 0
        assert main(["unpack", "--profile-doc", str(doc),
                     "--packets", str(packets), "--out", str(out)]) == 0
        assert out.read_text().strip() == "1011"

    def test_pack_wrong_bit_count(self, tmp_path):
        profile = geometric_profile(0.3, 0.05, 2, 4)
        doc = tmp_path / "profile.txt"
        doc.write_text(profile_document(profile))
        bits = tmp_path / "bits.txt"
        bits.write_text("10110\n")
        assert main(["pack", "--profile-doc", str(doc), "--bits", str(bits),
                     "--out", str(tmp_path / "p.bin")]) == 3

    def test_pack_non_binary_bits(self, tmp_path):
        profile = geometric_profile(0.3, 0.05, 2, 4)
        doc = tmp_path / "profile.txt"
        doc.write_text(profile_document(profile))
        bits = tmp_path / "bits.txt"
        bits.write_text("10x1\n")
        assert main(["pack", "--profile-doc", str(doc), "--bits", str(bits),
                     "--out", str(tmp_path / "p.bin")]) == 3


class TestExitCodes:
    def test_config_error_is_2(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("not_a_key = 3\n")
        assert main(["gen-data", "--config", str(cfg), "--count", "4",
                     "--out", str(tmp_path / "d.scds")]) == 2

    def test_missing_data_is_3(self, tmp_path):
        assert main(["train-source", "--data", str(tmp_path / "missing.scds"),
                     "--out", str(tmp_path / "s.bundle")]) == 3

    def test_corrupt_dataset_is_3(self, tmp_path):
        bad = tmp_path / "bad.scds"
        bad.write_bytes(b"XXXX" + bytes(20))
        assert main(["train-source", "--data", str(bad),
                     "--out", str(tmp_path / "s.bundle")]) == 3

    def test_mismatched_bundle_is_3(self, workdir, tmp_path):
        cfg = tmp_path / "other.cfg"
        cfg.write_text(TINY_CFG.replace("codeword_bits = 4", "codeword_bits = 8"))
        assert main(["train-channel", "--config", str(cfg),
                     "--data", str(workdir["dataset"]),
                     "--source", str(workdir["source"]),
                     "--out", str(tmp_path / "c.bundle")]) == 3

    def test_seed_override(self, tmp_path, workdir, capsys):
        out_a = tmp_path / "a.scds"
        out_b = tmp_path / "b.scds"
        main(["gen-data", "--config", str(workdir["cfg"]), "--count", "4",
              "--seed", "9", "--out", str(out_a)])
        main(["gen-data", "--config", str(workdir["cfg"]), "--count", "4",
              "--seed", "10", "--out", str(out_b)])
        assert out_a.read_bytes() != out_b.read_bytes()
