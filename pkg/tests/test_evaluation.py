import numpy as np
import pytest

from splitcodec import nn
from splitcodec.channel import ChannelCodecPair
from splitcodec.data import generate_synthetic
from splitcodec.errors import ContractViolation
from splitcodec.evaluation import (SweepRecord, empirical_ber_per_level,
                                   level_importance_probe, sweep_csv,
                                   sweep_eval)
from splitcodec.interface import geometric_profile
from splitcodec.source import SourceCodecPair

from conftest import random_net

PROFILE = geometric_profile(0.3, 0.05, 2, 4)


def make_pairs(seed=0):
    source = SourceCodecPair(random_net([4, 6, 4], "sigmoid", seed),
                             random_net([4, 6, 4], "sigmoid", seed + 1),
                             PROFILE, (2, 2, 1))
    channel = ChannelCodecPair(random_net([4, 6, 4], "linear", seed + 2),
                               random_net([4, 6, 4], "sigmoid", seed + 3))
    return source, channel


class TestEmpiricalBer:
    def test_hand_case(self):
        u = np.array([[0, 0, 0, 0], [0, 0, 0, 0]])
        v = np.array([[1, 0, 0, 0], [1, 1, 0, 1]])
        ber = empirical_ber_per_level(u, v, PROFILE)
        np.testing.assert_allclose(ber, [0.75, 0.25])

    def test_identical_is_zero(self):
        u = np.ones((3, 4), dtype=np.uint8)
        np.testing.assert_array_equal(empirical_ber_per_level(u, u, PROFILE),
                                      np.zeros(2))

    def test_single_codeword(self):
        ber = empirical_ber_per_level(np.array([0, 1, 0, 1]),
                                      np.array([1, 1, 0, 0]), PROFILE)
        np.testing.assert_allclose(ber, [0.5, 0.5])

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ContractViolation):
            empirical_ber_per_level(np.zeros((2, 4)), np.zeros((3, 4)), PROFILE)
        with pytest.raises(ContractViolation):
            empirical_ber_per_level(np.zeros((2, 6)), np.zeros((2, 6)), PROFILE)


@pytest.fixture(scope="module")
def images():
    return generate_synthetic(6, 2, 2, 1, seed=9)


class TestSweepEval:
    def test_records_sorted_and_complete(self, images):
        source, channel = make_pairs()
        records = sweep_eval(source, channel, images, [5.0, -5.0, 0.0],
                             images_per_point=4, pbar=1.0, seed=3)
        assert [r.snr_db for r in records] == [-5.0, 0.0, 5.0]
        for r in records:
            assert r.n_images == 4
            assert len(r.ber_per_level) == PROFILE.N
            assert all(0.0 <= b <= 1.0 for b in r.ber_per_level)
            assert np.isfinite(r.psnr_db)
            assert r.seed == 3

    def test_images_per_point_clips_to_dataset(self, images):
        source, channel = make_pairs()
        records = sweep_eval(source, channel, images, [0.0], 100, 1.0, 3)
        assert records[0].n_images == len(images)

    def test_deterministic(self, images):
        source, channel = make_pairs()
        a = sweep_eval(source, channel, images, [0.0, 10.0], 4, 1.0, 3)
        b = sweep_eval(source, channel, images, [0.0, 10.0], 4, 1.0, 3)
        assert a == b

    def test_noiseless_limit_matches_clean_decode(self, images):
        from splitcodec.channel import (demap_bits, map_to_symbols,
                                        normalize_power)
        from splitcodec.metrics import psnr
        from splitcodec.source import decode, encode_bits
        source, channel = make_pairs(seed=4)
        records = sweep_eval(source, channel, images, [300.0], 4, 1.0, 3)
        expect = []
        for image in images[:4]:
            u = encode_bits(source, image)
            v = demap_bits(channel, normalize_power(map_to_symbols(channel, u), 1.0))
            expect.append(psnr(image, decode(source, v)))
        assert records[0].psnr_db == pytest.approx(np.mean(expect), abs=1e-6)


class TestLevelProbe:
    def test_detects_importance_ordering(self):
        # Hand-built threshold codec: level-1 bits carry the first two
        # pixels with high gain, level-2 bits barely move the last two.
        # Corrupting level 1 must cost far more PSNR than level 2.
        thresh = np.diag([50.0] * 4)
        mapper = nn.NetworkModel([4, 4], [thresh.copy()], [np.full(4, -25.0)],
                                 output_activation="sigmoid")
        gains = np.diag([8.0, 8.0, 0.2, 0.2])
        demapper = nn.NetworkModel([4, 4], [gains.copy()], [-gains.sum(axis=1) / 2],
                                   output_activation="sigmoid")
        source = SourceCodecPair(mapper, demapper, PROFILE, (2, 2, 1))
        gen = np.random.default_rng(2)
        images = np.empty((6, 2, 2, 1), dtype=np.uint8)
        flat = images.reshape(6, 4)
        flat[:, :2] = gen.choice([5, 250], size=(6, 2))
        flat[:, 2:] = 128
        drops = level_importance_probe(source, images, seed=1, flip_prob=1.0)
        assert drops.shape == (2,)
        assert drops[0] > drops[1] + 5.0

    def test_no_corruption_no_drop(self):
        source, _ = make_pairs(seed=5)
        images = generate_synthetic(4, 2, 2, 1, seed=3)
        drops = level_importance_probe(source, images, seed=1, flip_prob=0.0)
        np.testing.assert_allclose(drops, np.zeros(2), atol=1e-12)


class TestSweepCsv:
    def test_layout(self):
        records = [SweepRecord(0.0, 21.5, (0.25, 0.0), 4, 9)]
        text = sweep_csv(records, 2)
        lines = text.splitlines()
        assert lines[0] == "snr_db,psnr_db,ber_level_1,ber_level_2,n_images,seed"
        assert lines[1] == "0.0,21.5,0.25,0.0,4,9"
        assert text.endswith("\n")

    def test_byte_identical_across_calls(self):
        records = [SweepRecord(1.0, 20.0 / 3.0, (1.0 / 3.0,), 4, 9)]
        assert sweep_csv(records, 1) == sweep_csv(records, 1)
