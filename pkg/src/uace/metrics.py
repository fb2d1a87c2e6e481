"""Monte Carlo estimation of dropping and hallucination probabilities.

One trial draws K uniform payloads, encodes them with the shared codebook,
pushes the codewords through the erasure channel, decodes, and scores the
decoded list against the transmitted one.  Trials are independent: trial t
owns the generator seeded by (master_seed, t), so results do not depend on
how trials are spread over workers.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass
from typing import AbstractSet, Sequence, Union

import numpy as np

from . import tree as tree_mod
from .channel import ChannelOutput, sample_payloads
from .decoder import DEFAULT_PATH_CAP, PathExplosionError, decode, encode_symbols
from .gf2 import BitRow
from .llc import LlcSpec, partition_payload
from .tree import TreeSpec

CodeSpec = Union[LlcSpec, TreeSpec]


@dataclass(frozen=True)
class TrialOutcome:
    """Per-trial confusion counts between transmitted and decoded payloads."""

    K: int
    k_hat: int
    dropped: int
    hallucinated: int
    collided_payloads: int


@dataclass(frozen=True)
class MetricsRow:
    """Aggregated operating point; ratios are means of per-trial ratios."""

    pdp: float
    php: float
    pdp_ci95: float
    php_ci95: float
    trials: int
    avg_khat: float
    php_pooled: float
    collisions: int


def score_trial(W: Sequence[BitRow], what: AbstractSet[BitRow]) -> TrialOutcome:
    """Count drops (with payload multiplicity) and hallucinations.

    ``dropped`` counts transmitted draws absent from the decoded set, so a
    collided payload that is missed counts once per colliding user;
    ``hallucinated`` counts decoded payloads nobody transmitted.
    """
    sent = set(W)
    dropped = sum(1 for w in W if w not in what)
    hallucinated = sum(1 for w in what if w not in sent)
    return TrialOutcome(
        K=len(W),
        k_hat=len(what),
        dropped=dropped,
        hallucinated=hallucinated,
        collided_payloads=len(W) - len(sent),
    )


def _erase_and_collect(syms: np.ndarray, p_e: float,
                       rng: np.random.Generator, J: int) -> ChannelOutput:
    erased = rng.random(size=syms.shape) < p_e
    sections = tuple(np.unique(syms[~erased[:, l], l]) for l in range(syms.shape[1]))
    return ChannelOutput(sections=sections, J=J)


def run_trial(spec: CodeSpec, K: int, p_e: float, master_seed: int, t: int,
              path_cap: int = DEFAULT_PATH_CAP) -> TrialOutcome:
    """Execute trial ``t``; fully determined by ``(master_seed, t)``.

    The trial generator drives, in order: payload sampling, then the
    erasure pattern.
    """
    rng = np.random.default_rng([master_seed, t])
    payloads = sample_payloads(K, spec.B, rng)
    if isinstance(spec, LlcSpec):
        winfo = np.array(
            [[r.value for r in partition_payload(spec, w)] for w in payloads],
            dtype=np.uint64)
        syms = encode_symbols(spec, winfo)
    else:
        winfo = tree_mod.info_matrix(spec, [w.value for w in payloads])
        syms = tree_mod.encode_symbols(spec, winfo)
    Y = _erase_and_collect(syms, p_e, rng, spec.J)
    try:
        if isinstance(spec, LlcSpec):
            result = decode(spec, Y, path_cap=path_cap)
        else:
            result = tree_mod.tree_decode(spec, Y, path_cap=path_cap)
    except PathExplosionError as err:
        raise PathExplosionError(err.root_value, err.section, err.count,
                                 err.cap, trial=t) from err
    return score_trial(payloads, result.decoded)


def _worker(args: tuple) -> TrialOutcome:
    return run_trial(*args)


def estimate(code: CodeSpec, K: int, p_e: float, trials: int, master_seed: int,
             *, workers: int = 1, path_cap: int = DEFAULT_PATH_CAP) -> MetricsRow:
    """Estimate the operating point of ``code`` at ``(K, p_e)``.

    Identical inputs yield an identical row for any worker count: trial
    seeds depend only on (master_seed, trial index) and per-trial ratios
    are aggregated in trial order.
    """
    if trials < 1:
        raise ValueError("at least one trial is required")
    if K < 1:
        raise ValueError("K must be at least 1")
    if not 0.0 <= p_e <= 1.0:
        raise ValueError("erasure probability must lie in [0, 1]")
    tasks = [(code, K, p_e, master_seed, t, path_cap) for t in range(trials)]
    if workers <= 1:
        outcomes = [run_trial(*task) for task in tasks]
    else:
        ctx = multiprocessing.get_context("fork")
        chunk = max(1, trials // (workers * 4))
        with ctx.Pool(workers) as pool:
            outcomes = pool.map(_worker, tasks, chunksize=chunk)

    pdp_ratios = np.array([o.dropped / o.K for o in outcomes])
    php_ratios = np.array(
        [o.hallucinated / o.k_hat if o.k_hat else 0.0 for o in outcomes])
    khats = np.array([o.k_hat for o in outcomes])
    total_h = sum(o.hallucinated for o in outcomes)
    total_khat = int(khats.sum())

    def ci95(x: np.ndarray) -> float:
        if trials < 2:
            return 0.0
        return float(1.96 * x.std(ddof=1) / np.sqrt(trials))

    return MetricsRow(
        pdp=float(pdp_ratios.mean()),
        php=float(php_ratios.mean()),
        pdp_ci95=ci95(pdp_ratios),
        php_ci95=ci95(php_ratios),
        trials=trials,
        avg_khat=float(khats.mean()),
        php_pooled=(total_h / total_khat) if total_khat else 0.0,
        collisions=sum(o.collided_payloads for o in outcomes),
    )
