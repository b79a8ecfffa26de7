"""Trial harness: run many trials in fixed-size blocks and reduce exactly.

Counters are integers, so block sums are exact and the reduction does not
depend on block size or evaluation order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import algorithms as alg

ALGORITHMS = ("hybrid", "boyer", "okamoto", "yoder", "pi3")
COUNTERS = ("iterations", "oracle_queries", "verifications", "rounds", "total_queries")
BLOCK = 1 << 18

# constants of the Table-1 bounds, in units of 1/sqrt(lambda)
BOUND_BOYER = 4.0
BOUND_OKAMOTO = 8.378
BOUND_HYBRID = 5.643
REF_YOUNES_2008 = 4.0 * math.sqrt(2.0)
REF_YOUNES_2013 = 61.42
TABLE1 = {"hybrid": BOUND_HYBRID, "boyer": BOUND_BOYER, "okamoto": BOUND_OKAMOTO}


@dataclass(frozen=True)
class Stat:
    mean: float
    std: float
    se: float


@dataclass
class Summary:
    algorithm: str
    lam: float
    trials: int
    found: int
    stats: dict

    @property
    def found_rate(self) -> float:
        return self.found / self.trials

    def __getitem__(self, key) -> Stat:
        return self.stats[key]


def batch(algorithm, lam, seed, trials, *, params=None, lambda0=None, boyer_growth=alg.BOYER_GROWTH,
          okamoto_growth=alg.OKAMOTO_GROWTH, round_cap=alg.DEFAULT_ROUND_CAP):
    params = params or alg.HybridParams(round_cap=round_cap)
    if algorithm == "hybrid":
        return alg.hybrid_batch(lam, params, seed, trials)
    if algorithm == "boyer":
        return alg.boyer_batch(lam, seed, trials, growth=boyer_growth, lambda0_cap=lambda0, round_cap=round_cap)
    if algorithm == "okamoto":
        return alg.okamoto_batch(lam, seed, trials, growth=okamoto_growth, round_cap=round_cap)
    if algorithm == "yoder":
        return alg.yoder_batch(lam, lambda0 or lam, params.delta, seed, trials, accounting=params.accounting)
    if algorithm == "pi3":
        return alg.pi3_batch(lam, lambda0 or lam, params.delta, seed, trials, accounting=params.accounting)
    raise ValueError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")


def run_trials(algorithm, lam, trials, seed, block=BLOCK, **kwargs) -> Summary:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    s1 = dict.fromkeys(COUNTERS, 0)
    s2 = dict.fromkeys(COUNTERS, 0)
    found = 0
    for start in range(0, trials, block):
        idx = np.arange(start, min(start + block, trials), dtype=np.uint64)
        b = batch(algorithm, lam, seed, idx, **kwargs)
        found += int(b.found.sum())
        for name in COUNTERS:
            x = getattr(b, name)
            s1[name] += int(x.sum())
            s2[name] += int((x * x).sum())
    stats = {}
    for name in COUNTERS:
        mean = s1[name] / trials
        if trials > 1:
            var = (trials * s2[name] - s1[name] ** 2) / (trials * (trials - 1))
            std = math.sqrt(max(var, 0.0))
        else:
            std = 0.0
        stats[name] = Stat(mean, std, std / math.sqrt(trials))
    return Summary(algorithm, lam, trials, found, stats)
