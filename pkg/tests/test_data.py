import numpy as np
import pytest

from splitcodec.data import (generate_synthetic, load_dataset, save_dataset,
                             split_indices)
from splitcodec.errors import ContractViolation, FormatError


class TestGenerate:
    def test_shape_and_dtype(self):
        images = generate_synthetic(12, 8, 8, 1, seed=0)
        assert images.shape == (12, 8, 8, 1)
        assert images.dtype == np.uint8

    def test_deterministic(self):
        a = generate_synthetic(10, 8, 8, 1, seed=3)
        b = generate_synthetic(10, 8, 8, 1, seed=3)
        assert np.array_equal(a, b)

    def test_seed_changes_content(self):
        a = generate_synthetic(10, 8, 8, 1, seed=3)
        b = generate_synthetic(10, 8, 8, 1, seed=4)
        assert not np.array_equal(a, b)

    def test_pixel_diversity(self):
        # A usable corpus covers a wide range of intensities.
        images = generate_synthetic(200, 8, 8, 1, seed=1)
        assert len(np.unique(images)) >= 64

    def test_images_are_not_constant(self):
        images = generate_synthetic(50, 8, 8, 1, seed=2)
        varying = sum(1 for img in images if img.min() != img.max())
        assert varying >= 40

    def test_multichannel(self):
        images = generate_synthetic(3, 4, 4, 3, seed=0)
        assert images.shape == (3, 4, 4, 3)

    def test_rejects_bad_dims(self):
        with pytest.raises(ContractViolation):
            generate_synthetic(4, 0, 8, 1, seed=0)


class TestDatasetFile:
    def test_round_trip(self, tmp_path):
        images = generate_synthetic(7, 4, 4, 1, seed=0)
        path = tmp_path / "set.scds"
        save_dataset(path, images)
        assert np.array_equal(load_dataset(path), images)

    def test_file_is_deterministic(self, tmp_path):
        images = generate_synthetic(5, 4, 4, 1, seed=0)
        a, b = tmp_path / "a", tmp_path / "b"
        save_dataset(a, images)
        save_dataset(b, images)
        assert a.read_bytes() == b.read_bytes()

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "set.scds"
        save_dataset(path, generate_synthetic(2, 4, 4, 1, seed=0))
        raw = bytearray(path.read_bytes())
        raw[:4] = b"XXXX"
        path.write_bytes(bytes(raw))
        with pytest.raises(FormatError, match="magic"):
            load_dataset(path)

    def test_bad_version(self, tmp_path):
        path = tmp_path / "set.scds"
        save_dataset(path, generate_synthetic(2, 4, 4, 1, seed=0))
        raw = bytearray(path.read_bytes())
        raw[5] = 9
        path.write_bytes(bytes(raw))
        with pytest.raises(FormatError, match="version"):
            load_dataset(path)

    def test_truncated_pixels(self, tmp_path):
        path = tmp_path / "set.scds"
        save_dataset(path, generate_synthetic(2, 4, 4, 1, seed=0))
        path.write_bytes(path.read_bytes()[:-3])
        with pytest.raises(FormatError, match="length"):
            load_dataset(path)

    def test_truncated_header(self, tmp_path):
        path = tmp_path / "set.scds"
        path.write_bytes(b"SCDS\x00")
        with pytest.raises(FormatError, match="header"):
            load_dataset(path)


class TestSplit:
    def test_desk_scale_sizes(self):
        split = split_indices(2000, (0.8, 0.1, 0.1), seed=0)
        assert len(split["train"]) == 1600
        assert len(split["val"]) == 200
        assert len(split["eval"]) == 200

    def test_floor_remainder_goes_to_train(self):
        split = split_indices(25, (0.8, 0.1, 0.1), seed=0)
        assert len(split["val"]) == 2
        assert len(split["eval"]) == 2
        assert len(split["train"]) == 21

    def test_partition_is_exact(self):
        split = split_indices(103, (0.8, 0.1, 0.1), seed=5)
        merged = np.concatenate([split["train"], split["val"], split["eval"]])
        assert sorted(merged.tolist()) == list(range(103))

    def test_deterministic_and_seed_sensitive(self):
        a = split_indices(50, (0.8, 0.1, 0.1), seed=1)
        b = split_indices(50, (0.8, 0.1, 0.1), seed=1)
        c = split_indices(50, (0.8, 0.1, 0.1), seed=2)
        assert np.array_equal(a["train"], b["train"])
        assert not np.array_equal(a["train"], c["train"])

    def test_shuffled(self):
        split = split_indices(1000, (0.8, 0.1, 0.1), seed=0)
        assert not np.array_equal(split["train"], np.arange(800))

    def test_rejects_bad_ratios(self):
        with pytest.raises(ContractViolation):
            split_indices(10, (0.5, 0.2, 0.2), seed=0)
