"""Self-check suites aggregated by the ``validate`` command."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis import bound_dominance_scan, g_bound, lemma1_scan
from .dynamics import closed_form_p, run_sequence, sv_prepare, sv_run_sequence
from .schedule import build_schedule


@dataclass
class SuiteResult:
    name: str
    cases: int
    max_error: float
    tolerance: float
    violations: int
    warning: str = ""

    @property
    def passed(self) -> bool:
        return self.violations == 0


def closed_form_suite(lams, deltas, ls, tol=1e-10, perturb=0.0) -> SuiteResult:
    """Explicit evolution against the Chebyshev closed form."""
    worst, bad, n = 0.0, 0, 0
    for delta in deltas:
        for l in ls:
            sched = build_schedule(int(l), float(delta))
            if perturb and sched.l:
                sched = _perturbed(sched, perturb)
            for lam in lams:
                err = abs(run_sequence(float(lam), sched) - closed_form_p(float(lam), int(l), float(delta)))
                worst = max(worst, err)
                bad += err >= tol
                n += 1
    return _finish("closed-form", n, worst, tol, bad)


def statevector_cases(cases, seed, max_qubits=12, max_l=200):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(cases):
        n = int(rng.integers(1, max_qubits + 1))
        N = 1 << n
        # log-uniform target count, so small fractions are well represented
        M = min(N, max(1, int(round(math.exp(rng.uniform(0.0, math.log(N)))))))
        targets = np.sort(rng.choice(N, size=M, replace=False))
        delta = float(rng.uniform(0.1, 0.9))
        l = int(rng.integers(0, max_l + 1))
        out.append((n, targets, delta, l))
    return out


def statevector_suite(cases, seed, max_qubits=12, max_l=200, tol=1e-8, perturb=0.0) -> SuiteResult:
    """Full 2^n statevector against the two-amplitude engine."""
    worst, bad, count = 0.0, 0, 0
    for n, targets, delta, l in statevector_cases(cases, seed, max_qubits, max_l):
        sched = build_schedule(l, delta)
        sv = sv_run_sequence(sv_prepare(n, targets), sched)
        if perturb and sched.l:
            sched = _perturbed(sched, perturb)
        err = abs(sv.success() - run_sequence(sv.lam, sched))
        worst = max(worst, err)
        bad += err >= tol
        count += 1
    return _finish("statevector", count, worst, tol, bad)


def lemma_suite(lams, deltas, ls, slack=1e-12) -> SuiteResult:
    v = lemma1_scan(lams, deltas, ls, slack=slack, cosh_points=200 if len(lams) else 0)
    worst = max((x.excess for x in v), default=0.0)
    return _finish("lemma1", len(lams) * len(deltas) * len(ls), worst, slack, len(v))


def bound_suite(lams, delta=0.5659, c=1.523) -> SuiteResult:
    g = g_bound(delta, c).g_value
    v = bound_dominance_scan(lams, delta, c, g)
    worst = max((x.excess for x in v), default=0.0)
    return _finish("theorem1-bound", len(lams), worst, 0.0, len(v))


def _perturbed(sched, eps):
    phi = (sched.phi[0] + eps,) + sched.phi[1:]
    return type(sched)(sched.l, sched.delta, sched.gamma, phi, sched.varphi)


def _finish(name, n, worst, tol, bad):
    warning = "empty grid, suite passes vacuously" if n == 0 else ""
    return SuiteResult(name, n, worst, tol, int(bad), warning)


def run_all(lams, deltas, ls, bound_lams, sv_cases, seed, max_qubits=12, max_l=200, perturb=0.0):
    return [
        closed_form_suite(lams, deltas, ls, perturb=perturb),
        statevector_suite(sv_cases, seed, max_qubits, max_l, perturb=perturb),
        lemma_suite(lams, deltas, ls),
        bound_suite(bound_lams),
    ]
