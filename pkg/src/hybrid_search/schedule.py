"""Matched multiphase schedules and the threshold quantities derived from them."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .chebyshev import inverse_t_fractional


def arccot(x: float) -> float:
    """Inverse cotangent with range (0, pi)."""
    return math.pi / 2 - math.atan(x)


@dataclass(frozen=True)
class PhaseSchedule:
    l: int
    delta: float
    gamma: float
    phi: tuple[float, ...]
    varphi: tuple[float, ...]

    @property
    def L(self) -> int:
        return 2 * self.l + 1

    def shifted(self, offset: float) -> "PhaseSchedule":
        """Copy with every phase moved by ``offset`` (used by sensitivity checks)."""
        return PhaseSchedule(
            self.l,
            self.delta,
            self.gamma,
            tuple(p + offset for p in self.phi),
            tuple(p + offset for p in self.varphi),
        )


def _check_delta(delta):
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")


def build_schedule(l: int, delta: float) -> PhaseSchedule:
    """Phases phi_j = varphi_{l-j+1} = -2 arccot(sqrt(1-gamma^2) tan(2 pi j / L)).

    ``phi`` drives the zero-state phase shift and ``varphi`` the oracle
    phase shift; both come from the same array, reversed for ``varphi``.
    """
    if l < 0:
        raise ValueError(f"l must be nonnegative, got {l}")
    _check_delta(delta)
    L = 2 * l + 1
    gamma = inverse_t_fractional(L, 1.0 / delta)
    # sqrt(1 - gamma^2) == tanh(arcosh(1/delta) / L); the direct form cancels badly for large L
    s = math.tanh(math.acosh(1.0 / delta) / L)
    # 2*pi*j/L never hits pi/2 since L is odd
    phases = tuple(-2.0 * arccot(s * math.tan(2.0 * math.pi * j / L)) for j in range(1, l + 1))
    return PhaseSchedule(l, delta, gamma, phases, phases[::-1])


def omega(delta: float, L: float) -> float:
    """Smallest fraction for which length-L sequences reach 1 - delta^2."""
    return (math.log(2.0 / delta) / L) ** 2


def l_min(delta: float, lam: float) -> float:
    return math.log(2.0 / delta) / math.sqrt(lam)


def l_critical_length(delta: float, lam: float) -> float:
    """L_cri = arcosh(1/delta) / arcosh(1/sqrt(1-lam)).

    arcosh(1/sqrt(1-lam)) is written as atanh(sqrt(lam)), which is exact
    for small lam.
    """
    _check_delta(delta)
    if not 0.0 < lam < 1.0:
        raise ValueError(f"lambda must lie in (0, 1), got {lam}")
    return math.acosh(1.0 / delta) / math.atanh(math.sqrt(lam))


def critical_iterations(delta: float, lam: float) -> int:
    return max(1, math.ceil(l_critical_length(delta, lam) / 2.0 - 0.5))


def first_saturated_round(c: float, l_cri: int) -> int:
    """s_0 = floor(log_c l_cri) + 1."""
    return math.floor(math.log(l_cri) / math.log(c)) + 1


@dataclass(frozen=True)
class ThresholdReport:
    L: int
    omega: float
    L_min: float
    L_cri: float
    L_0: Optional[float] = None
    # None when lam >= 1 - delta^2: Step 3 alone succeeds quickly there
    l_cri: Optional[int] = None
    s_0: Optional[int] = None


def thresholds(delta: float, c: float, lam: float, L: int, lambda0: Optional[float] = None) -> ThresholdReport:
    _check_delta(delta)
    if not 1.0 < c < delta ** -2:
        raise ValueError(f"c must lie in (1, delta^-2) = (1, {delta ** -2:.6g}), got {c}")
    if not 0.0 < lam < 1.0:
        raise ValueError(f"lambda must lie in (0, 1), got {lam}")
    L0 = None if lambda0 is None else l_min(delta, lambda0)
    lcri = scri = None
    if lam < 1.0 - delta * delta:
        lcri = critical_iterations(delta, lam)
        scri = first_saturated_round(c, lcri)
    return ThresholdReport(
        L=L,
        omega=omega(delta, L),
        L_min=l_min(delta, lam),
        L_cri=l_critical_length(delta, lam),
        L_0=L0,
        l_cri=lcri,
        s_0=scri,
    )
