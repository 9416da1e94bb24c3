import pytest

from splitcodec.config import RunConfig, load_config, parse_config
from splitcodec.errors import ConfigError


class TestDefaults:
    def test_desk_scale_defaults(self):
        cfg = RunConfig()
        cfg.validate()
        assert cfg.image_shape == (8, 8, 1)
        assert cfg.codeword_bits == 80
        assert cfg.levels == 10
        assert cfg.symbols == 16
        assert cfg.eps_first == 0.4
        assert cfg.eps_last == 0.001
        assert cfg.vimco_samples == 10
        assert cfg.split_ratios == (0.8, 0.1, 0.1)

    def test_profile_matches_fields(self):
        profile = RunConfig().profile()
        assert profile.N == 10
        assert profile.M == 80
        assert profile.epsilons[0] == pytest.approx(0.4)
        assert profile.epsilons[-1] == pytest.approx(0.001)

    def test_hidden_sizes(self):
        cfg = RunConfig(source_hidden="32,16", channel_hidden="")
        assert cfg.hidden_sizes("source") == [32, 16]
        assert cfg.hidden_sizes("channel") == []

    def test_bad_hidden_sizes(self):
        with pytest.raises(ConfigError):
            RunConfig(source_hidden="32,x").hidden_sizes("source")


class TestParse:
    def test_overrides_and_comments(self):
        cfg = parse_config(
            "# comment line\n"
            "height = 4   # trailing comment\n"
            "width=4\n"
            "\n"
            "learning_rate = 5e-4\n")
        assert cfg.height == 4
        assert cfg.width == 4
        assert cfg.learning_rate == 5e-4
        assert cfg.levels == 10  # untouched default

    def test_unknown_key_with_line_number(self):
        with pytest.raises(ConfigError, match="line 2.*heigth"):
            parse_config("height = 4\nheigth = 8\n")

    def test_bad_value_with_line_number(self):
        with pytest.raises(ConfigError, match="line 1"):
            parse_config("epochs = soon\n")

    def test_missing_equals(self):
        with pytest.raises(ConfigError, match="key=value"):
            parse_config("height 4\n")

    def test_string_field(self):
        cfg = parse_config("source_hidden = 12,6\n")
        assert cfg.hidden_sizes("source") == [12, 6]


class TestValidation:
    def test_divisibility(self):
        with pytest.raises(ConfigError, match="divisible"):
            parse_config("codeword_bits = 81\n")

    def test_split_sum(self):
        with pytest.raises(ConfigError, match="sum to 1"):
            parse_config("split_train = 0.5\n")

    def test_min_samples(self):
        with pytest.raises(ConfigError, match="vimco_samples"):
            parse_config("vimco_samples = 1\n")

    def test_positive_scalars(self):
        with pytest.raises(ConfigError, match="learning_rate"):
            parse_config("learning_rate = -1\n")


class TestLoad:
    def test_round_trip_file(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("seed = 42\nepochs = 7\n")
        cfg = load_config(path)
        assert cfg.seed == 42
        assert cfg.epochs == 7

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "nope.cfg")
