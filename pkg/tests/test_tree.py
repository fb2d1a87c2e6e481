import numpy as np
import pytest

from uace import ChannelParams, output_from_rows, sample_payloads, transmit
from uace.gf2 import BitRow
from uace.tree import (default_m_profile, info_matrix, partition_payload,
                       tree_decode, tree_encode, tree_new)


@pytest.fixture(scope="module")
def tree_spec():
    return tree_new(16, 16, default_m_profile(16, 16, 128), seed=11)


class TestConstruction:
    def test_default_profile_shape(self):
        profile = default_m_profile(16, 16, 128)
        assert sum(profile) == 128
        assert len(profile) == 16
        pwidths = [16 - m for m in profile]
        assert pwidths == sorted(pwidths)

    def test_even_split_fallback(self):
        assert default_m_profile(4, 8, 10) == (3, 3, 2, 2)

    def test_degenerate_profile_allowed(self):
        spec = tree_new(2, 2, [2, 0], seed=0)
        assert spec.B == 2
        assert spec.parity_bits(0) == 0 and spec.parity_bits(1) == 2

    def test_sum_mismatch_rejected(self):
        with pytest.raises(ValueError, match="expected B"):
            tree_new(4, 4, [2, 2, 2, 1], seed=0, expected_b=8)

    def test_decreasing_parity_rejected(self):
        with pytest.raises(ValueError, match="non-decreasing"):
            tree_new(3, 4, [2, 2, 3], seed=0)

    def test_profile_length_enforced(self):
        with pytest.raises(ValueError):
            tree_new(4, 4, [2, 2, 2], seed=0)

    def test_deterministic(self):
        a = tree_new(4, 4, [4, 2, 1, 1], seed=5)
        b = tree_new(4, 4, [4, 2, 1, 1], seed=5)
        assert a.G == b.G


class TestEncode:
    def test_zero_payload(self, tree_spec):
        cw = tree_encode(tree_spec, BitRow(128, 0))
        assert all(s == BitRow(16, 0) for s in cw.sections)

    def test_first_section_carries_no_parity(self, tree_spec, rng):
        w = sample_payloads(1, 128, rng)[0]
        cw = tree_encode(tree_spec, w)
        assert cw.sections[0].value == partition_payload(tree_spec, w)[0].value

    def test_linearity(self, tree_spec, rng):
        for _ in range(30):
            w1, w2 = sample_payloads(2, 128, rng)
            cw1 = tree_encode(tree_spec, w1)
            cw2 = tree_encode(tree_spec, w2)
            cwx = tree_encode(tree_spec, w1 ^ w2)
            assert all(a ^ b == c for a, b, c in
                       zip(cw1.sections, cw2.sections, cwx.sections))

    def test_vectorized_encoder_matches(self, tree_spec, rng):
        payloads = sample_payloads(16, 128, rng)
        syms = info_matrix(tree_spec, [w.value for w in payloads])
        from uace.tree import encode_symbols
        enc = encode_symbols(tree_spec, syms)
        for k, w in enumerate(payloads):
            assert [int(v) for v in enc[k]] == \
                [s.value for s in tree_encode(tree_spec, w).sections]


class TestDecode:
    def test_single_user_clean(self, tree_spec, rng):
        w = sample_payloads(1, 128, rng)[0]
        cw = tree_encode(tree_spec, w)
        Y = output_from_rows([[s] for s in cw.sections], 16)
        res = tree_decode(tree_spec, Y)
        assert res.decoded == frozenset({w})
        assert res.phase2_count == 0

    @pytest.mark.parametrize("erased", [0, 7, 15])
    def test_any_erasure_drops_user(self, tree_spec, rng, erased):
        w = sample_payloads(1, 128, rng)[0]
        cw = tree_encode(tree_spec, w)
        rows = [[s] if l != erased else [] for l, s in enumerate(cw.sections)]
        Y = output_from_rows(rows, 16)
        assert tree_decode(tree_spec, Y).decoded == frozenset()

    def test_multi_user_clean(self, tree_spec):
        rng = np.random.default_rng(17)
        payloads = sample_payloads(60, 128, rng)
        cws = [tree_encode(tree_spec, w) for w in payloads]
        Y, _ = transmit(cws, ChannelParams(60, 0.0), rng)
        res = tree_decode(tree_spec, Y)
        assert set(payloads) <= set(res.decoded)

    def test_drop_rate_tracks_erasure_exposure(self, tree_spec):
        # A payload survives iff all 16 of its sections do.
        rng = np.random.default_rng(23)
        K, p_e, trials = 50, 0.05, 40
        dropped = 0
        for _ in range(trials):
            payloads = sample_payloads(K, 128, rng)
            cws = [tree_encode(tree_spec, w) for w in payloads]
            Y, _ = transmit(cws, ChannelParams(K, p_e), rng)
            decoded = tree_decode(tree_spec, Y).decoded
            dropped += sum(1 for w in payloads if w not in decoded)
        law = 1 - (1 - p_e) ** 16
        rate = dropped / (K * trials)
        sigma = np.sqrt(law * (1 - law) / (K * trials))
        assert abs(rate - law) < 3 * sigma + 0.01

    def test_geometry_mismatch_rejected(self, tree_spec):
        Y = output_from_rows([[] for _ in range(4)], 4)
        with pytest.raises(ValueError):
            tree_decode(tree_spec, Y)
