"""Expected query counts of the hybrid search, the g(delta, c) bound and its
minimization, and grid scans of the success-probability lower bound."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .chebyshev import chebyshev_t, cosh_product_gap
from .dynamics import closed_form_p, lemma1_lower_bound
from .schedule import critical_iterations, first_saturated_round, l_critical_length

PAPER_FAITHFUL = "paper-faithful"
REFINED = "refined"
MODES = (PAPER_FAITHFUL, REFINED)


class NotApplicable(ValueError):
    """Raised when lam >= 1 - delta^2: the first classical draw already wins."""


def check_growth(delta, c):
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if not 1.0 < c < delta ** -2:
        raise ValueError(f"c must lie in (1, delta^-2) = (1, {delta ** -2:.6g}), got {c}")


def iterations_for_round(c: float, k: int) -> int:
    """l_k = ceil(c^(k-1)) for round k >= 1."""
    return math.ceil(c ** (k - 1))


@dataclass
class ExpectationBreakdown:
    e_t1: float
    e_t2: float
    e_total: float
    q_s: list[float]
    l_s: list[int]
    p_s: list[float]
    s_0: int
    l_cri: int
    truncation_round: int
    tail_bound: float
    mode: str


def expected_queries(lam, delta, c, mode=PAPER_FAITHFUL, tail_tol=1e-12, queries_per_iteration=2, max_rounds=10_000):
    """Exact expected query count of the hybrid search, summed round by round.

    ``paper-faithful`` charges 2 l_s + 2 for every round reached and lets
    only the amplified measurement end the search.  ``refined`` also lets
    the plain measurement before it succeed (probability lam), so a round
    costs 1 + (1 - lam)(2 l_s + 1) and is left with probability
    (1 - lam)(1 - P).  ``queries_per_iteration`` replaces the factor 2 for
    other oracle accounting conventions.
    """
    check_growth(delta, c)
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if not 0.0 < lam < 1.0 - delta * delta:
        raise NotApplicable(f"lambda={lam} is outside (0, 1 - delta^2)")

    l_cri = critical_iterations(delta, lam)
    s_0 = first_saturated_round(c, l_cri)
    d2 = delta * delta

    q, e_t1, e_t2 = 1.0, 0.0, 0.0
    qs, ls, ps = [], [], []
    tail = math.inf
    s = 0
    while s < max_rounds:
        s += 1
        l = iterations_for_round(c, s)
        p = closed_form_p(lam, l, delta)
        if mode == PAPER_FAITHFUL:
            cost = queries_per_iteration * l + 2.0
            q_next = q * (1.0 - p)
        else:
            cost = 1.0 + (1.0 - lam) * (queries_per_iteration * l + 1.0)
            q_next = q * (1.0 - lam) * (1.0 - p)
        qs.append(q)
        ls.append(l)
        ps.append(p)
        if s <= s_0:
            e_t1 += q * cost
        else:
            e_t2 += q * cost
        q = q_next
        if s >= s_0:
            # every later round succeeds w.p. >= 1 - delta^2 and l grows by at most c
            l_next = iterations_for_round(c, s + 1)
            tail = q * (queries_per_iteration * l_next / (1.0 - c * d2) + 4.0 / (1.0 - d2))
            if tail < tail_tol * (e_t1 + e_t2):
                break
    else:
        raise RuntimeError("series did not converge")
    return ExpectationBreakdown(
        e_t1=e_t1,
        e_t2=e_t2,
        e_total=e_t1 + e_t2,
        q_s=qs,
        l_s=ls,
        p_s=ps,
        s_0=s_0,
        l_cri=l_cri,
        truncation_round=s,
        tail_bound=tail,
        mode=mode,
    )


@dataclass(frozen=True)
class GBoundPoint:
    delta: float
    c: float
    q_ub_first: float
    g_value: float


def g_bound(delta: float, c: float) -> GBoundPoint:
    """Coefficient g of the asymptotic bound E[queries] <= g / sqrt(lam)."""
    check_growth(delta, c)
    d2 = delta * delta
    q_ub = d2 * chebyshev_t(math.sqrt(1.0 - c ** -2), 1.0 / delta) ** 2
    g = (c / (c - 1.0) + c * q_ub / (1.0 - c * d2)) * math.acosh(1.0 / delta)
    return GBoundPoint(delta, c, q_ub, g)


def _g_or_inf(delta, c):
    if not (0.0 < delta < 1.0 and 1.0 < c < delta ** -2):
        return math.inf
    return g_bound(delta, c).g_value


@dataclass
class OptimumRecord:
    delta: float
    c: float
    g: float
    grid_shape: tuple[int, int]
    delta_range: tuple[float, float]
    grid_best: tuple[float, float, float]
    refine_iterations: int
    refine_evaluations: int
    stencil_step: float
    stencil_min_gap: float
    history: list[tuple[float, float, float]] = field(default_factory=list)

    @property
    def interior(self) -> bool:
        return self.stencil_min_gap > 0.0


def optimize_g(delta_range=(0.05, 0.95), grid_density=200, refine_tol=1e-12, stencil_step=1e-3) -> OptimumRecord:
    """Minimize g over 0 < delta < 1, 1 < c < delta^-2.

    Coarse scan first (c parametrized as a fraction of its feasible
    interval, so the grid never straddles the c = delta^-2 barrier), then
    Nelder-Mead from the best grid point.  Grid ties go to the lowest
    delta, then the lowest c.
    """
    lo, hi = delta_range
    lo, hi = max(lo, 0.0), min(hi, 1.0)
    if not lo < hi or grid_density < 1:
        raise ValueError("empty feasible region")
    deltas = np.linspace(lo, hi, grid_density + 2)[1:-1]
    fracs = np.linspace(0.0, 1.0, grid_density + 2)[1:-1]
    best = (math.inf, 0.0, 0.0)
    for d in deltas:
        for t in fracs:
            c = 1.0 + t * (d ** -2 - 1.0)
            g = _g_or_inf(d, c)
            if g < best[0]:
                best = (g, float(d), float(c))
    if not math.isfinite(best[0]):
        raise ValueError("empty feasible region")

    history = []

    def objective(x):
        g = _g_or_inf(x[0], x[1])
        if math.isfinite(g):
            history.append((float(x[0]), float(x[1]), g))
        return g

    res = minimize(
        objective,
        x0=[best[1], best[2]],
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": refine_tol, "maxiter": 10_000},
    )
    d_opt, c_opt = (float(v) for v in res.x)
    g_opt = g_bound(d_opt, c_opt).g_value
    gaps = []
    for dd in (-stencil_step, 0.0, stencil_step):
        for dc in (-stencil_step, 0.0, stencil_step):
            if dd == 0.0 and dc == 0.0:
                continue
            gaps.append(_g_or_inf(d_opt + dd, c_opt + dc) - g_opt)
    return OptimumRecord(
        delta=d_opt,
        c=c_opt,
        g=g_opt,
        grid_shape=(grid_density, grid_density),
        delta_range=(lo, hi),
        grid_best=(best[1], best[2], best[0]),
        refine_iterations=int(res.nit),
        refine_evaluations=int(res.nfev),
        stencil_step=stencil_step,
        stencil_min_gap=min(gaps),
        history=history,
    )


@dataclass(frozen=True)
class Violation:
    check: str
    point: tuple
    excess: float


def default_lemma_grid():
    lams = np.logspace(-4, math.log10(0.99), 30)
    deltas = np.linspace(0.05, 0.95, 19)
    ls = np.unique(np.linspace(0, 300, 31).astype(int))
    return lams, deltas, ls


def lemma1_scan(lams, deltas, ls, slack=1e-12, cosh_points=200) -> list[Violation]:
    """Check P_L >= P_L^lb, the cosh product inequality and the T_L sandwich.

    Returns the list of violations beyond ``slack``; an empty list means
    every inequality held on the grid.
    """
    out = []
    for lam in lams:
        lam = float(lam)
        for delta in deltas:
            delta = float(delta)
            L_cri = l_critical_length(delta, lam)
            for l in ls:
                l = int(l)
                L = 2 * l + 1
                p = closed_form_p(lam, l, delta)
                lb = lemma1_lower_bound(lam, delta, L)
                if p < lb - slack:
                    out.append(Violation("lemma1", (lam, delta, l), lb - p))
                if L <= L_cri:
                    out.extend(_sandwich(lam, delta, L, L_cri, slack))
    # boundary L = L_cri is a real, generally non-odd length; check it too
    for lam in lams:
        for delta in deltas:
            L_cri = l_critical_length(float(delta), float(lam))
            out.extend(_sandwich(float(lam), float(delta), L_cri, L_cri, slack))

    if cosh_points:
        xs = np.linspace(0.0, 50.0, cosh_points + 1)[1:]
        thetas = np.linspace(0.0, math.pi / 2, cosh_points)
        for x in xs:
            for th in thetas:
                gap = cosh_product_gap(float(x), float(th))
                if gap < -slack * math.cosh(x):
                    out.append(Violation("cosh-product", (float(x), float(th)), -gap))
    return out


def _sandwich(lam, delta, L, L_cri, slack):
    # T_{1/L}(1/delta) / T_{1/L_cri}(1/delta) == T_{1/L}(1/delta) sqrt(1 - lam)
    ratio = chebyshev_t(1.0 / L, 1.0 / delta) / chebyshev_t(1.0 / L_cri, 1.0 / delta)
    mid = chebyshev_t(L, ratio)
    top = chebyshev_t(math.sqrt(max(0.0, 1.0 - (L / L_cri) ** 2)), 1.0 / delta)
    res = []
    tol = slack * max(1.0, top)
    if mid < 1.0 - tol:
        res.append(Violation("sandwich-lower", (lam, delta, L), 1.0 - mid))
    if mid > top + tol:
        res.append(Violation("sandwich-upper", (lam, delta, L), mid - top))
    return res


def bound_dominance_scan(lams, delta=0.5659, c=1.523, g=None) -> list[Violation]:
    """Paper-faithful expected queries against g / sqrt(lam) on each lam."""
    if g is None:
        g = g_bound(delta, c).g_value
    out = []
    for lam in lams:
        e = expected_queries(float(lam), delta, c).e_total
        bound = g / math.sqrt(lam)
        if e > bound:
            out.append(Violation("theorem1", (float(lam),), e - bound))
    return out
