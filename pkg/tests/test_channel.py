import numpy as np
import pytest

from uace.channel import (ChannelOutput, ChannelParams, output_from_rows,
                          sample_payloads, transmit)
from uace.gf2 import BitRow
from uace.llc import llc_encode


def _codewords(spec, K, rng):
    payloads = sample_payloads(K, spec.B, rng)
    return payloads, [llc_encode(spec, w) for w in payloads]


class TestTransmit:
    def test_no_erasure_distinct_users(self, standard_spec, rng):
        _, cws = _codewords(standard_spec, 20, rng)
        Y, mask = transmit(cws, ChannelParams(20, 0.0), rng)
        assert mask.E.sum() == 0
        assert all(len(sec) == 20 for sec in Y.sections)

    def test_total_erasure(self, standard_spec, rng):
        _, cws = _codewords(standard_spec, 5, rng)
        Y, mask = transmit(cws, ChannelParams(5, 1.0), rng)
        assert mask.E.all()
        assert all(len(sec) == 0 for sec in Y.sections)

    def test_identical_codewords_collapse(self, standard_spec, rng):
        payloads = sample_payloads(1, standard_spec.B, rng)
        cw = llc_encode(standard_spec, payloads[0])
        Y, _ = transmit([cw, cw], ChannelParams(2, 0.0), rng)
        assert all(len(sec) == 1 for sec in Y.sections)

    def test_membership_and_no_phantoms(self, standard_spec, rng):
        _, cws = _codewords(standard_spec, 30, rng)
        Y, mask = transmit(cws, ChannelParams(30, 0.3), rng)
        for l in range(standard_spec.L):
            delivered = {cw.sections[l].value for k, cw in enumerate(cws)
                         if not mask.E[k, l]}
            assert set(Y.sections[l].tolist()) == delivered

    def test_sections_sorted_and_unique(self, standard_spec, rng):
        _, cws = _codewords(standard_spec, 50, rng)
        Y, _ = transmit(cws, ChannelParams(50, 0.1), rng)
        for sec in Y.sections:
            assert np.all(np.diff(sec.astype(np.int64)) > 0)

    def test_empirical_erasure_rate(self, standard_spec):
        rng = np.random.default_rng(777)
        p_e = 0.1
        total = ones = 0
        for _ in range(50):
            _, cws = _codewords(standard_spec, 100, rng)
            _, mask = transmit(cws, ChannelParams(100, p_e), rng)
            ones += int(mask.E.sum())
            total += mask.E.size
        sigma = np.sqrt(p_e * (1 - p_e) / total)
        assert abs(ones / total - p_e) < 3 * sigma

    def test_deterministic_given_generator_state(self, standard_spec):
        rng1 = np.random.default_rng(5)
        rng2 = np.random.default_rng(5)
        _, cws = _codewords(standard_spec, 10, np.random.default_rng(1))
        Y1, m1 = transmit(cws, ChannelParams(10, 0.2), rng1)
        Y2, m2 = transmit(cws, ChannelParams(10, 0.2), rng2)
        assert np.array_equal(m1.E, m2.E)
        assert all(np.array_equal(a, b) for a, b in zip(Y1.sections, Y2.sections))

    def test_mixed_geometry_rejected(self, standard_spec, tiny_spec, rng):
        _, big = _codewords(standard_spec, 1, rng)
        small = llc_encode(tiny_spec, BitRow(8, 0))
        with pytest.raises(ValueError):
            transmit([big[0], small], ChannelParams(2, 0.0), rng)

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            ChannelParams(0, 0.5)
        with pytest.raises(ValueError):
            ChannelParams(2, 1.5)


class TestSamplePayloads:
    def test_reproducible(self):
        a = sample_payloads(5, 128, np.random.default_rng(3))
        b = sample_payloads(5, 128, np.random.default_rng(3))
        assert a == b

    def test_widths(self, rng):
        for w in sample_payloads(10, 37, rng):
            assert w.width == 37

    def test_bit_balance(self):
        rng = np.random.default_rng(21)
        payloads = sample_payloads(1000, 128, rng)
        mean = np.mean([sum(w.bits()) / 128 for w in payloads])
        assert 0.45 < mean < 0.55

    def test_pairwise_collision_rate_matches_birthday(self):
        # Two independent 8-bit draws collide with probability 1/256.
        rng = np.random.default_rng(8)
        trials = 100_000
        dups = 0
        for _ in range(trials):
            a, b = sample_payloads(2, 8, rng)
            dups += a == b
        p = 1 / 256
        sigma = np.sqrt(p * (1 - p) / trials)
        assert abs(dups / trials - p) < 3 * sigma


class TestOutputFromRows:
    def test_builds_sorted_sections(self):
        Y = output_from_rows([[BitRow(4, 9), BitRow(4, 2)], []], J=4)
        assert Y.L == 2
        assert Y.sections[0].tolist() == [2, 9]
        assert Y.sections[1].tolist() == []

    def test_section_rows_round_trip(self):
        rows = [[BitRow(4, 3)], [BitRow(4, 5), BitRow(4, 1)]]
        Y = output_from_rows(rows, J=4)
        assert Y.section_rows(1) == [BitRow(4, 1), BitRow(4, 5)]
