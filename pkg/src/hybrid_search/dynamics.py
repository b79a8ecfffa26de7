"""Exact evolution under generalized Grover iterations.

Two engines are provided: a two-amplitude engine on span{|alpha>, |beta>}
(uniform target / nontarget superpositions) and a full statevector engine
used to check it.  In the {|alpha>, |beta>} basis the iteration is

    G(phi, varphi) = -(I + (e^{i phi} - 1)|psi><psi|) diag(e^{i varphi}, 1)

with |psi> = (sqrt(lam), sqrt(1 - lam)).  The oracle phase acts first.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .chebyshev import chebyshev_t
from .schedule import PhaseSchedule, l_critical_length

PROB_SLACK = 1e-12
MAX_QUBITS = 20


def clamp_probability(p: float) -> float:
    if p < -PROB_SLACK or p > 1.0 + PROB_SLACK:
        raise ValueError(f"probability {p} outside [0, 1]")
    return min(1.0, max(0.0, p))


def _check_lambda(lam):
    if not 0.0 < lam <= 1.0:
        raise ValueError(f"lambda must lie in (0, 1], got {lam}")


@dataclass(frozen=True)
class SubspaceState:
    a: complex
    b: complex

    @property
    def success(self) -> float:
        return abs(self.a) ** 2

    @property
    def norm2(self) -> float:
        return abs(self.a) ** 2 + abs(self.b) ** 2


def prepare_initial(lam: float) -> SubspaceState:
    _check_lambda(lam)
    return SubspaceState(complex(math.sqrt(lam)), complex(math.sqrt(1.0 - lam)))


def apply_generalized_grover(state: SubspaceState, phi: float, varphi: float, lam: float) -> SubspaceState:
    sa, sb = math.sqrt(lam), math.sqrt(1.0 - lam)
    a = cmath.exp(1j * varphi) * state.a
    b = state.b
    k = (cmath.exp(1j * phi) - 1.0) * (sa * a + sb * b)
    return SubspaceState(-(a + k * sa), -(b + k * sb))


def run_sequence(lam: float, schedule: PhaseSchedule) -> float:
    """Success probability after applying the schedule to |psi>."""
    _check_lambda(lam)
    sa, sb = math.sqrt(lam), math.sqrt(1.0 - lam)
    a, b = complex(sa), complex(sb)
    for phi, varphi in zip(schedule.phi, schedule.varphi):
        a *= cmath.exp(1j * varphi)
        k = (cmath.exp(1j * phi) - 1.0) * (sa * a + sb * b)
        a, b = -(a + k * sa), -(b + k * sb)
    return clamp_probability(abs(a) ** 2)


def _t_of_ratio(L, lam, delta):
    """T_L(T_{1/L}(1/delta) sqrt(1 - lam)), accurate when the argument is near 1.

    Writing T_{1/L}(1/delta) = cosh(u) and sqrt(1 - lam) = 1/cosh(v), the
    argument minus one is 2 sinh((u+v)/2) sinh((u-v)/2) / cosh(v), which
    avoids the cancellation in forming the argument and then subtracting 1.
    """
    u = math.acosh(1.0 / delta) / L
    if lam <= 0.0:
        v = 0.0
    elif lam >= 1.0:
        return chebyshev_t(L, 0.0)
    else:
        v = math.atanh(math.sqrt(lam))
    e = 2.0 * math.sinh(0.5 * (u + v)) * math.sinh(0.5 * (u - v)) / math.cosh(v)
    if e >= 0.0:
        return math.cosh(L * math.log1p(e + math.sqrt(e * (2.0 + e))))
    if e >= -1e-3:
        # arccos(1 - d) = 2 asin(sqrt(d / 2))
        return math.cos(L * 2.0 * math.asin(math.sqrt(-e / 2.0)))
    return chebyshev_t(L, 1.0 + e)


def closed_form_p(lam: float, l: int, delta: float) -> float:
    """P_L = 1 - delta^2 T_L^2[T_{1/L}(1/delta) sqrt(1 - lam)], L = 2l + 1."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    L = 2 * l + 1
    t = _t_of_ratio(L, lam, delta)
    return clamp_probability(1.0 - delta * delta * t * t)


def lemma1_lower_bound(lam: float, delta: float, L: int) -> float:
    L_cri = l_critical_length(delta, lam)
    if L > L_cri:
        return 1.0 - delta * delta
    order = math.sqrt(max(0.0, 1.0 - (L / L_cri) ** 2))
    t = chebyshev_t(order, 1.0 / delta)
    return 1.0 - delta * delta * t * t


class StateVector:
    """Dense 2**n amplitude vector with a marked index set."""

    def __init__(self, n: int, amplitudes: np.ndarray, targets: np.ndarray):
        self.n = n
        self.amplitudes = amplitudes
        self.targets = targets

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def M(self) -> int:
        return len(self.targets)

    @property
    def lam(self) -> float:
        return self.M / self.N

    def success(self) -> float:
        return float(np.sum(np.abs(self.amplitudes[self.targets]) ** 2))

    def norm2(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def project(self) -> SubspaceState:
        """Components along |alpha> and |beta>."""
        mask = np.zeros(self.N, dtype=bool)
        mask[self.targets] = True
        a = self.amplitudes[mask].sum() / math.sqrt(self.M)
        rest = self.N - self.M
        b = self.amplitudes[~mask].sum() / math.sqrt(rest) if rest else 0j
        return SubspaceState(complex(a), complex(b))


def sv_prepare(n: int, targets) -> StateVector:
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must lie in [1, {MAX_QUBITS}], got {n}")
    idx = np.unique(np.asarray(list(targets), dtype=np.int64))
    if idx.size == 0:
        raise ValueError("target set must not be empty")
    if idx[0] < 0 or idx[-1] >= (1 << n):
        raise ValueError("target index out of range")
    N = 1 << n
    return StateVector(n, np.full(N, N ** -0.5, dtype=np.complex128), idx)


def sv_apply_iteration(sv: StateVector, phi: float, varphi: float) -> StateVector:
    """One generalized iteration as a rank-one update, O(N), no matrices."""
    amp = sv.amplitudes.copy()
    amp[sv.targets] *= cmath.exp(1j * varphi)
    h = sv.N ** -0.5
    overlap = amp.sum() * h  # <psi|state> with psi = H|0> uniform and real
    amp += (cmath.exp(1j * phi) - 1.0) * overlap * h
    amp *= -1.0
    return StateVector(sv.n, amp, sv.targets)


def sv_run_sequence(sv: StateVector, schedule: PhaseSchedule) -> StateVector:
    for phi, varphi in zip(schedule.phi, schedule.varphi):
        sv = sv_apply_iteration(sv, phi, varphi)
    return sv
