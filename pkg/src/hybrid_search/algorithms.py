"""Search procedures with unknown target fraction, simulated as stochastic
processes with exact per-round success probabilities.

Every round re-prepares the initial state, so a round is an independent
Bernoulli draw whose probability comes straight from the dynamics module.

Each procedure has a scalar form (one trial, driven by a ``TrialStream``)
and a batch form over many trial indices.  Both read the same counter-based
draws, so trial ``t`` of a batch equals the scalar run of trial ``t``.

Draw layout per trial: the hybrid and Boyer procedures use draws 2k-2 and
2k-1 in round k; Okamoto uses draw k-1; single-shot procedures use draw 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .analysis import iterations_for_round
from .dynamics import closed_form_p, run_sequence
from .schedule import build_schedule, l_min
from .streams import TrialStream, uniforms

STANDARD = "standard"
MERGED = "merged"
ACCOUNTINGS = (STANDARD, MERGED)

DEFAULT_DELTA = 0.5659
DEFAULT_C = 1.523
DEFAULT_ROUND_CAP = 200
BOYER_GROWTH = 6 / 5
OKAMOTO_GROWTH = 8 / 7


def queries_per_iteration(arbitrary_phase: bool, accounting: str) -> int:
    """Oracle calls charged per iteration.

    A phase-pi oracle is one call.  An arbitrary-phase oracle is two calls
    under ``standard`` and one under ``merged``, where the uncompute of the
    first call cancels against the compute of the second.
    """
    if accounting not in ACCOUNTINGS:
        raise ValueError(f"unknown accounting {accounting!r}; expected one of {ACCOUNTINGS}")
    if not arbitrary_phase:
        return 1
    return 2 if accounting == STANDARD else 1


@dataclass
class QueryLedger:
    iterations: int = 0
    oracle_queries: int = 0
    verifications: int = 0
    rounds: int = 0

    @property
    def total_queries(self) -> int:
        """Oracle queries plus one per classical check of a measured item."""
        return self.oracle_queries + self.verifications


@dataclass
class RunOutcome:
    found: bool
    ledger: QueryLedger
    seed: int
    trial: int = 0

    @property
    def rounds_used(self) -> int:
        return self.ledger.rounds


@dataclass(frozen=True)
class HybridParams:
    delta: float = DEFAULT_DELTA
    c: float = DEFAULT_C
    accounting: str = STANDARD
    round_cap: int = DEFAULT_ROUND_CAP
    # False reproduces the analytic accounting in which only the amplified
    # measurement can end the search (the plain measurement is still charged)
    step3_stops: bool = True
    # "closed-form" or "sequence" (explicit two-amplitude evolution)
    dynamics: str = "closed-form"

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if not 1.0 < self.c < self.delta ** -2:
            raise ValueError(f"c must lie in (1, delta^-2), got {self.c}")
        queries_per_iteration(True, self.accounting)
        if self.round_cap < 1:
            raise ValueError("round_cap must be positive")
        if self.dynamics not in ("closed-form", "sequence"):
            raise ValueError(f"unknown dynamics {self.dynamics!r}")


def _check_lambda(lam):
    if not 0.0 < lam <= 1.0:
        raise ValueError(f"lambda must lie in (0, 1], got {lam}")


class _HybridRounds:
    """Lazily computed (l_k, P_k) for rounds k = 1, 2, ..."""

    def __init__(self, lam, params):
        self.lam = lam
        self.params = params
        self._cache = {}

    def __call__(self, k):
        if k not in self._cache:
            l = iterations_for_round(self.params.c, k)
            if self.params.dynamics == "sequence":
                p = run_sequence(self.lam, build_schedule(l, self.params.delta))
            else:
                p = closed_form_p(self.lam, l, self.params.delta)
            self._cache[k] = (l, p)
        return self._cache[k]


def hybrid_round_probability(lam, params: HybridParams, k: int) -> float:
    return _HybridRounds(lam, params)(k)[1]


def run_hybrid(lam: float, params: HybridParams, rng: TrialStream) -> RunOutcome:
    """One trial of the hybrid search.

    Round k: measure the plain superposition and check it (one
    verification); on failure run the matched sequence with
    l = ceil(c^(k-1)) iterations, measure and check again.
    """
    _check_lambda(lam)
    rounds = _HybridRounds(lam, params)
    per_it = queries_per_iteration(True, params.accounting)
    led = QueryLedger()
    for k in range(1, params.round_cap + 1):
        led.rounds += 1
        led.verifications += 1
        if rng.at(2 * k - 2) < lam and params.step3_stops:
            return RunOutcome(True, led, rng.seed, rng.trial)
        l, p = rounds(k)
        led.iterations += l
        led.oracle_queries += per_it * l
        led.verifications += 1
        if rng.at(2 * k - 1) < p:
            return RunOutcome(True, led, rng.seed, rng.trial)
    return RunOutcome(False, led, rng.seed, rng.trial)


def yoder_iterations(lambda0: float, delta: float) -> int:
    """Fewest iterations l with L = 2l + 1 >= ln(2/delta)/sqrt(lambda0)."""
    return max(0, math.ceil((l_min(delta, lambda0) - 1.0) / 2.0))


def run_yoder_fixed(lambda_true, lambda0, delta, rng: TrialStream, accounting=STANDARD) -> RunOutcome:
    """Single shot of the fixed-point sequence sized for the lower bound lambda0."""
    _check_lambda(lambda_true)
    if not 0.0 < lambda0 <= lambda_true:
        raise ValueError(f"need 0 < lambda0 <= lambda, got lambda0={lambda0}, lambda={lambda_true}")
    l = yoder_iterations(lambda0, delta)
    p = closed_form_p(lambda_true, l, delta)
    led = QueryLedger(l, queries_per_iteration(True, accounting) * l, 1, 1)
    return RunOutcome(rng.at(0) < p, led, rng.seed, rng.trial)


def boyer_caps(growth, m_cap, round_cap):
    """Deterministic interval sizes ceil(m_k) for rounds 1..round_cap."""
    m, out = 1.0, []
    for _ in range(round_cap):
        out.append(math.ceil(m))
        m = min(growth * m, m_cap)
    return out


def run_boyer(lam, rng: TrialStream, growth=BOYER_GROWTH, lambda0_cap=None, round_cap=DEFAULT_ROUND_CAP) -> RunOutcome:
    """Randomized trial-and-error Grover search with a growing iteration interval.

    The interval bound m is capped at 1/sqrt(lambda0_cap), which defaults to
    the true fraction.
    """
    _check_lambda(lam)
    cap = 1.0 / math.sqrt(lam if lambda0_cap is None else lambda0_cap)
    theta = math.asin(math.sqrt(lam))
    led = QueryLedger()
    for k, size in enumerate(boyer_caps(growth, cap, round_cap), start=1):
        j = int(rng.at(2 * k - 2) * size)
        led.rounds += 1
        led.iterations += j
        led.oracle_queries += j
        led.verifications += 1
        if rng.at(2 * k - 1) < math.sin((2 * j + 1) * theta) ** 2:
            return RunOutcome(True, led, rng.seed, rng.trial)
    return RunOutcome(False, led, rng.seed, rng.trial)


def run_okamoto(lam, rng: TrialStream, growth=OKAMOTO_GROWTH, round_cap=DEFAULT_ROUND_CAP) -> RunOutcome:
    """Deterministic trial-and-error Grover search, l_s = ceil(growth^(s-1))."""
    _check_lambda(lam)
    theta = math.asin(math.sqrt(lam))
    led = QueryLedger()
    for k in range(1, round_cap + 1):
        l = iterations_for_round(growth, k)
        led.rounds += 1
        led.iterations += l
        led.oracle_queries += l
        led.verifications += 1
        if rng.at(k - 1) < math.sin((2 * l + 1) * theta) ** 2:
            return RunOutcome(True, led, rng.seed, rng.trial)
    return RunOutcome(False, led, rng.seed, rng.trial)


def pi3_depth(lambda0: float, delta: float) -> int:
    """Smallest m with (1 - lambda0)^(3^m) <= delta^2."""
    m, fail = 0, 1.0 - lambda0
    while fail > delta * delta:
        m += 1
        fail = fail ** 3
    return m


def pi3_failure(lam: float, m: int) -> float:
    fail = 1.0 - lam
    for _ in range(m):
        fail = fail ** 3
    return fail


def run_pi3(lambda_true, lambda0, delta, rng: TrialStream, accounting=STANDARD) -> RunOutcome:
    """Coarse model of the pi/3 recursion: depth m cubes the failure probability."""
    _check_lambda(lambda_true)
    if not 0.0 < lambda0 <= lambda_true:
        raise ValueError(f"need 0 < lambda0 <= lambda, got lambda0={lambda0}, lambda={lambda_true}")
    m = pi3_depth(lambda0, delta)
    iters = (3 ** m - 1) // 2
    p = 1.0 - pi3_failure(lambda_true, m)
    led = QueryLedger(iters, queries_per_iteration(True, accounting) * iters, 1, 1)
    return RunOutcome(rng.at(0) < p, led, rng.seed, rng.trial)


# ---------------------------------------------------------------- batches


@dataclass
class Batch:
    """Per-trial counters for a block of trials of one algorithm at one lambda."""

    algorithm: str
    lam: float
    seed: int
    trials: np.ndarray
    found: np.ndarray
    iterations: np.ndarray
    oracle_queries: np.ndarray
    verifications: np.ndarray
    rounds: np.ndarray
    info: dict = field(default_factory=dict)

    @property
    def total_queries(self) -> np.ndarray:
        return self.oracle_queries + self.verifications

    def outcome(self, i: int) -> RunOutcome:
        led = QueryLedger(
            int(self.iterations[i]), int(self.oracle_queries[i]), int(self.verifications[i]), int(self.rounds[i])
        )
        return RunOutcome(bool(self.found[i]), led, self.seed, int(self.trials[i]))


def _empty(n):
    z = np.zeros(n, dtype=np.int64)
    return np.zeros(n, dtype=bool), z, z.copy(), z.copy()


def hybrid_batch(lam, params: HybridParams, seed, trials) -> Batch:
    _check_lambda(lam)
    idx = np.asarray(trials, dtype=np.uint64)
    found, iters, ver, rnds = _empty(idx.size)
    rounds = _HybridRounds(lam, params)
    active = np.arange(idx.size)
    for k in range(1, params.round_cap + 1):
        if active.size == 0:
            break
        rnds[active] += 1
        ver[active] += 1
        if params.step3_stops:
            hit = uniforms(seed, idx[active], 2 * k - 2) < lam
            found[active[hit]] = True
            active = active[~hit]
        l, p = rounds(k)
        iters[active] += l
        ver[active] += 1
        hit = uniforms(seed, idx[active], 2 * k - 1) < p
        found[active[hit]] = True
        active = active[~hit]
    per_it = queries_per_iteration(True, params.accounting)
    return Batch("hybrid", lam, seed, idx, found, iters, per_it * iters, ver, rnds, {"params": params})


def boyer_batch(lam, seed, trials, growth=BOYER_GROWTH, lambda0_cap=None, round_cap=DEFAULT_ROUND_CAP) -> Batch:
    _check_lambda(lam)
    idx = np.asarray(trials, dtype=np.uint64)
    found, iters, ver, rnds = _empty(idx.size)
    cap = 1.0 / math.sqrt(lam if lambda0_cap is None else lambda0_cap)
    theta = math.asin(math.sqrt(lam))
    active = np.arange(idx.size)
    for k, size in enumerate(boyer_caps(growth, cap, round_cap), start=1):
        if active.size == 0:
            break
        j = (uniforms(seed, idx[active], 2 * k - 2) * size).astype(np.int64)
        rnds[active] += 1
        iters[active] += j
        ver[active] += 1
        hit = uniforms(seed, idx[active], 2 * k - 1) < np.sin((2 * j + 1) * theta) ** 2
        found[active[hit]] = True
        active = active[~hit]
    return Batch("boyer", lam, seed, idx, found, iters, iters.copy(), ver, rnds, {"growth": growth})


def okamoto_batch(lam, seed, trials, growth=OKAMOTO_GROWTH, round_cap=DEFAULT_ROUND_CAP) -> Batch:
    _check_lambda(lam)
    idx = np.asarray(trials, dtype=np.uint64)
    found, iters, ver, rnds = _empty(idx.size)
    theta = math.asin(math.sqrt(lam))
    active = np.arange(idx.size)
    for k in range(1, round_cap + 1):
        if active.size == 0:
            break
        l = iterations_for_round(growth, k)
        rnds[active] += 1
        iters[active] += l
        ver[active] += 1
        hit = uniforms(seed, idx[active], k - 1) < math.sin((2 * l + 1) * theta) ** 2
        found[active[hit]] = True
        active = active[~hit]
    return Batch("okamoto", lam, seed, idx, found, iters, iters.copy(), ver, rnds, {"growth": growth})


def _single_shot(name, lam, seed, idx, l, p, per_it):
    n = idx.size
    found = uniforms(seed, idx, 0) < p
    iters = np.full(n, l, dtype=np.int64)
    ones = np.ones(n, dtype=np.int64)
    return Batch(name, lam, seed, idx, found, iters, per_it * iters, ones, ones.copy())


def yoder_batch(lambda_true, lambda0, delta, seed, trials, accounting=STANDARD) -> Batch:
    _check_lambda(lambda_true)
    if not 0.0 < lambda0 <= lambda_true:
        raise ValueError(f"need 0 < lambda0 <= lambda, got lambda0={lambda0}, lambda={lambda_true}")
    l = yoder_iterations(lambda0, delta)
    p = closed_form_p(lambda_true, l, delta)
    idx = np.asarray(trials, dtype=np.uint64)
    return _single_shot("yoder", lambda_true, seed, idx, l, p, queries_per_iteration(True, accounting))


def pi3_batch(lambda_true, lambda0, delta, seed, trials, accounting=STANDARD) -> Batch:
    _check_lambda(lambda_true)
    if not 0.0 < lambda0 <= lambda_true:
        raise ValueError(f"need 0 < lambda0 <= lambda, got lambda0={lambda0}, lambda={lambda_true}")
    m = pi3_depth(lambda0, delta)
    p = 1.0 - pi3_failure(lambda_true, m)
    idx = np.asarray(trials, dtype=np.uint64)
    return _single_shot("pi3", lambda_true, seed, idx, (3 ** m - 1) // 2, p, queries_per_iteration(True, accounting))
