"""Counter-based uniform streams.

Draw ``i`` of trial ``t`` under master seed ``s`` is a pure function of
(s, t, i), so trials can be evaluated in any order, one at a time or as a
vectorized batch, and give the same numbers.  The mixer is the 64-bit
MurmurHash3 finalizer applied in a keyed cascade.
"""
import numpy as np

MASK64 = (1 << 64) - 1

_M1 = np.uint64(0xFF51AFD7ED558CCD)
_M2 = np.uint64(0xC4CEB9FE1A85EC53)
_K_SEED = np.uint64(0x9E3779B97F4A7C15)
_K_TRIAL = np.uint64(0x632BE59BD9B4E019)
_K_DRAW = np.uint64(0xD6E8FEB86659FD93)
_S33 = np.uint64(33)
_S11 = np.uint64(11)


def _fmix64(z):
    z = z ^ (z >> _S33)
    z = z * _M1
    z = z ^ (z >> _S33)
    z = z * _M2
    return z ^ (z >> _S33)


def uniforms(seed, trials, draw):
    """Uniform doubles in [0, 1) for every trial index in ``trials`` at draw ``draw``."""
    t = np.asarray(trials, dtype=np.uint64)
    with np.errstate(over="ignore"):
        key = _fmix64(np.uint64(int(seed) & MASK64) ^ _K_SEED)
        x = _fmix64(key ^ _fmix64(t + _K_TRIAL))
        x = _fmix64(x ^ _fmix64(np.uint64(int(draw) & MASK64) + _K_DRAW))
    return (x >> _S11).astype(np.float64) * (1.0 / (1 << 53))


class TrialStream:
    """Random-access view of one trial's draws."""

    def __init__(self, seed: int, trial: int = 0):
        self.seed = int(seed)
        self.trial = int(trial)

    def at(self, draw: int) -> float:
        return float(uniforms(self.seed, np.array([self.trial], dtype=np.uint64), draw)[0])
