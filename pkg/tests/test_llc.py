import numpy as np
import pytest

from uace.gf2 import BitRow, rank, row_mul
from uace.llc import (Codeword, LlcSpec, Path, check_parity,
                      check_parity_with_recovery, extract_info_bits,
                      llc_encode, llc_new, llc_parity, partition_payload)


def _random_payload(spec, rng):
    bits = rng.integers(0, 2, size=spec.B, dtype=np.uint8)
    return BitRow.from_bits(bits.tolist())


class TestConstruction:
    def test_standard_geometry(self, standard_spec):
        spec = standard_spec
        assert spec.B == 128
        assert len(spec.G) == 2
        for g, ginv in zip(spec.G, spec.Ginv):
            assert (g.rows, g.cols) == (8, 8)
            assert rank(g) == 8
            assert (ginv.rows, ginv.cols) == (8, 8)

    def test_tiny_geometry(self, tiny_spec):
        assert tiny_spec.B == 8
        assert all((g.rows, g.cols) == (2, 2) for g in tiny_spec.G)

    def test_rate_too_high_rejected(self):
        with pytest.raises(ValueError, match="unsupported rate"):
            llc_new(16, 16, 9, 2, seed=0)

    def test_memory_depth_bounds(self):
        with pytest.raises(ValueError):
            llc_new(4, 4, 2, 4, seed=0)
        with pytest.raises(ValueError):
            llc_new(4, 4, 2, 0, seed=0)

    def test_deterministic_for_seed(self):
        a = llc_new(8, 8, 4, 2, seed=123)
        b = llc_new(8, 8, 4, 2, seed=123)
        assert a.G == b.G
        c = llc_new(8, 8, 4, 2, seed=124)
        assert a.G != c.G


class TestPartition:
    def test_zero_payload(self, standard_spec):
        chunks = partition_payload(standard_spec, BitRow(128, 0))
        assert len(chunks) == 16
        assert all(c == BitRow(8, 0) for c in chunks)

    def test_explicit_slicing(self, tiny_spec):
        w = BitRow.from_bits([1, 0, 1, 1, 0, 0, 1, 0])
        chunks = partition_payload(tiny_spec, w)
        assert [c.bits() for c in chunks] == [(1, 0), (1, 1), (0, 0), (1, 0)]

    def test_concat_round_trip(self, standard_spec, rng):
        w = _random_payload(standard_spec, rng)
        chunks = partition_payload(standard_spec, w)
        acc = chunks[0]
        for c in chunks[1:]:
            acc = acc.concat(c)
        assert acc == w

    def test_width_mismatch(self, standard_spec):
        with pytest.raises(ValueError):
            partition_payload(standard_spec, BitRow(64, 0))


class TestParity:
    def test_zero_sections(self, standard_spec):
        zeros = [BitRow(8, 0)] * 16
        for l in range(16):
            assert llc_parity(standard_spec, zeros, l) == BitRow(8, 0)

    def test_circular_dependency_window(self, standard_spec, rng):
        # p(l) must equal w(l-1) G_1 xor w(l-2) G_2, indices mod L.
        spec = standard_spec
        secs = [BitRow(8, int(v)) for v in rng.integers(0, 256, size=16)]
        for l in (0, 1, 2, 9):
            expected = (row_mul(secs[(l - 1) % 16], spec.G[0])
                        ^ row_mul(secs[(l - 2) % 16], spec.G[1]))
            assert llc_parity(spec, secs, l) == expected

    def test_single_nonzero_section_reaches_m_successors(self, tiny_spec, rng):
        secs = [BitRow(2, 0)] * 4
        secs[0] = BitRow(2, 3)
        nonzero = {l for l in range(4)
                   if llc_parity(tiny_spec, secs, l).value != 0}
        assert nonzero == {1, 2}

    def test_index_out_of_range(self, tiny_spec):
        with pytest.raises(ValueError):
            llc_parity(tiny_spec, [BitRow(2, 0)] * 4, 4)


class TestEncode:
    def test_zero_payload_gives_zero_codeword(self, standard_spec):
        cw = llc_encode(standard_spec, BitRow(128, 0))
        assert all(s == BitRow(16, 0) for s in cw.sections)

    def test_round_trip_through_extraction(self, standard_spec, rng):
        w = _random_payload(standard_spec, rng)
        cw = llc_encode(standard_spec, w)
        assert extract_info_bits(standard_spec, Path(cw.sections)) == w

    def test_linearity(self, standard_spec, rng):
        for _ in range(50):
            w1 = _random_payload(standard_spec, rng)
            w2 = _random_payload(standard_spec, rng)
            cw1 = llc_encode(standard_spec, w1)
            cw2 = llc_encode(standard_spec, w2)
            cwx = llc_encode(standard_spec, w1 ^ w2)
            assert all(a ^ b == c for a, b, c in
                       zip(cw1.sections, cw2.sections, cwx.sections))

    def test_common_codebook(self, standard_spec, rng):
        w = _random_payload(standard_spec, rng)
        assert llc_encode(standard_spec, w) == llc_encode(standard_spec, w)


class TestCheckParity:
    def test_short_prefix_always_consistent(self, standard_spec, rng):
        # With fewer sections than the memory depth no equation is determined.
        syms = [BitRow(16, int(v)) for v in rng.integers(0, 1 << 16, size=2)]
        assert check_parity(standard_spec, Path((syms[0],)))
        assert check_parity(standard_spec, Path(tuple(syms)))

    def test_full_codeword_consistent(self, standard_spec, rng):
        cw = llc_encode(standard_spec, _random_payload(standard_spec, rng))
        assert check_parity(standard_spec, Path(cw.sections))

    def test_flipped_parity_bit_detected(self, standard_spec, rng):
        cw = llc_encode(standard_spec, _random_payload(standard_spec, rng))
        slots = list(cw.sections)
        slots[5] = slots[5] ^ BitRow(16, 1)  # lowest parity bit of section 5
        assert not check_parity(standard_spec, Path(tuple(slots)))

    def test_any_single_bit_flip_detected(self, tiny_spec, rng):
        for _ in range(100):
            w = _random_payload(tiny_spec, rng)
            cw = llc_encode(tiny_spec, w)
            l = int(rng.integers(0, 4))
            b = int(rng.integers(0, 4))
            slots = list(cw.sections)
            slots[l] = slots[l] ^ BitRow(4, 1 << b)
            assert not check_parity(tiny_spec, Path(tuple(slots)))

    def test_rejects_erased_slot(self, standard_spec, rng):
        cw = llc_encode(standard_spec, _random_payload(standard_spec, rng))
        slots = list(cw.sections)
        slots[2] = None
        with pytest.raises(ValueError):
            check_parity(standard_spec, Path(tuple(slots)))


class TestRecovery:
    @pytest.mark.parametrize("erased", list(range(1, 16)) )
    def test_single_knockout_recovers_truth(self, standard_spec, rng, erased):
        w = _random_payload(standard_spec, rng)
        cw = llc_encode(standard_spec, w)
        slots = list(cw.sections)
        slots[erased] = None
        verdict = check_parity_with_recovery(standard_spec, Path(tuple(slots)))
        assert verdict.consistent
        assert verdict.recovered == partition_payload(standard_spec, w)[erased]

    def test_zero_codeword_recovers_zero(self, standard_spec):
        cw = llc_encode(standard_spec, BitRow(128, 0))
        slots = list(cw.sections)
        slots[9] = None
        verdict = check_parity_with_recovery(standard_spec, Path(tuple(slots)))
        assert verdict.consistent
        assert verdict.recovered == BitRow(8, 0)

    def test_corrupted_symbol_after_slot_rejected(self, standard_spec, rng):
        rejected = 0
        for trial in range(50):
            w = _random_payload(standard_spec, rng)
            cw = llc_encode(standard_spec, w)
            slots = list(cw.sections)
            slots[4] = None
            slots[8] = BitRow(16, int(rng.integers(0, 1 << 16)))
            verdict = check_parity_with_recovery(standard_spec, Path(tuple(slots)))
            rejected += not verdict.consistent
        # A random substitute survives each 8-bit equation with odds 1/256.
        assert rejected >= 48

    def test_no_slot_behaves_like_plain_check(self, standard_spec, rng):
        cw = llc_encode(standard_spec, _random_payload(standard_spec, rng))
        verdict = check_parity_with_recovery(standard_spec, Path(cw.sections))
        assert verdict.consistent and verdict.recovered is None

    def test_two_slots_rejected(self, standard_spec, rng):
        cw = llc_encode(standard_spec, _random_payload(standard_spec, rng))
        slots = list(cw.sections)
        slots[3] = None
        slots[7] = None
        with pytest.raises(ValueError):
            Path(tuple(slots))

    def test_slot_zero_rejected(self, standard_spec, rng):
        cw = llc_encode(standard_spec, _random_payload(standard_spec, rng))
        slots = list(cw.sections)
        slots[0] = None
        with pytest.raises(ValueError):
            Path(tuple(slots))


class TestExtraction:
    def test_unresolved_slot_rejected(self, standard_spec, rng):
        cw = llc_encode(standard_spec, _random_payload(standard_spec, rng))
        slots = list(cw.sections)
        slots[6] = None
        with pytest.raises(ValueError):
            extract_info_bits(standard_spec, Path(tuple(slots)))

    def test_incomplete_path_rejected(self, standard_spec, rng):
        cw = llc_encode(standard_spec, _random_payload(standard_spec, rng))
        with pytest.raises(ValueError):
            extract_info_bits(standard_spec, Path(cw.sections[:8]))

    def test_recovered_slot_used(self, standard_spec, rng):
        w = _random_payload(standard_spec, rng)
        cw = llc_encode(standard_spec, w)
        slots = list(cw.sections)
        slots[11] = None
        verdict = check_parity_with_recovery(standard_spec, Path(tuple(slots)))
        restored = extract_info_bits(
            standard_spec, Path(tuple(slots), recovered=verdict.recovered))
        assert restored == w
