"""Codecs and Monte Carlo tooling for the unsourced A-channel with erasures."""

from .channel import (ChannelOutput, ChannelParams, ErasureMask,
                      output_from_rows, sample_payloads, transmit)
from .decoder import (DEFAULT_PATH_CAP, DecodeResult, PathExplosionError,
                      decode, decode_phase1, decode_phase2)
from .gf2 import (BitMatrix, BitRow, NotInvertibleError, mat_mul, random_full_rank,
                  rank, right_inverse, row_mul, solve_row)
from .llc import (Codeword, LlcSpec, Path, RecoveryVerdict, check_parity,
                  check_parity_with_recovery, extract_info_bits, llc_encode,
                  llc_new, llc_parity, partition_payload)
from .metrics import MetricsRow, TrialOutcome, estimate, run_trial, score_trial
from .oracle import OracleLimitError, OracleLimits, oracle_decode
from .tree import TreeSpec, default_m_profile, tree_decode, tree_encode, tree_new

__all__ = [
    "BitMatrix", "BitRow", "ChannelOutput", "ChannelParams", "Codeword",
    "DecodeResult", "DEFAULT_PATH_CAP", "ErasureMask", "LlcSpec", "MetricsRow",
    "NotInvertibleError", "OracleLimitError", "OracleLimits", "Path",
    "PathExplosionError", "RecoveryVerdict", "TreeSpec", "TrialOutcome",
    "check_parity", "check_parity_with_recovery", "decode", "decode_phase1",
    "decode_phase2", "default_m_profile", "estimate", "extract_info_bits",
    "llc_encode", "llc_new", "llc_parity", "mat_mul", "oracle_decode",
    "output_from_rows", "partition_payload", "random_full_rank", "rank",
    "right_inverse", "row_mul", "run_trial", "sample_payloads", "score_trial",
    "solve_row", "transmit", "tree_decode", "tree_encode", "tree_new",
]

__version__ = "0.1.0"
