"""Ground truth by exhaustive enumeration, plus the differential-test harness.

The enumeration groups all 2**n sequences by (failure count, success weight),
which fixes a sequence's probability exactly; with Fraction parameters every
oracle value is an exact rational, so "match" in a report means equality,
not closeness.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable

import numpy as np

from ._backend import core
from ._core_py import EnumerationBudgetError
from .distributions import Pmf, Rel, support_min, waiting_time_pmf
from .model import FreqQuota, Mode, ModelParams, QuotaSpec, RunQuota
from .qcalc import DEFAULT_TOLERANCE, Scalar

__all__ = [
    "DEFAULT_BUDGET",
    "WaitingEquals",
    "LongestEquals",
    "LongestAtMost",
    "JointLongest",
    "DiscrepancyReport",
    "ScanGrid",
    "default_grid",
    "differential_scan",
    "monte_carlo_estimate",
    "oracle_event_prob",
    "oracle_waiting_pmf",
    "reports_to_json",
]

DEFAULT_BUDGET = 20
_LONGEST_CACHE_MAX_N = 16


@dataclass(frozen=True)
class WaitingEquals:
    quota: QuotaSpec
    n: int


@dataclass(frozen=True)
class LongestEquals:
    k: int


@dataclass(frozen=True)
class LongestAtMost:
    k: int


@dataclass(frozen=True)
class JointLongest:
    k1: int
    rel1: Rel
    k2: int
    rel2: Rel


EventPredicate = WaitingEquals | LongestEquals | LongestAtMost | JointLongest


def _class_prob(params: ModelParams, n: int, failures: int, weight: int) -> Scalar:
    """Probability of any single sequence with the given failure count and
    success weight (sum over successes of failures preceding each)."""
    th, q = params.theta, params.q
    p = th ** (n - failures) * q ** weight
    qp: Scalar = 1
    for _ in range(failures):
        p = p * (1 - th * qp)
        qp = qp * q
    return p


_longest_counts_cache: dict[int, dict] = {}


def _longest_counts(n: int) -> dict:
    if n <= _LONGEST_CACHE_MAX_N:
        hit = _longest_counts_cache.get(n)
        if hit is None:
            hit = core.longest_joint_counts(n)
            _longest_counts_cache[n] = hit
        return hit
    return core.longest_joint_counts(n)


# the count tables are parameter-free, so they are shared across the
# theta/q grid of a scan; the grouped dicts are small (<= one entry per
# distinct (failures, weight) pair)
@lru_cache(maxsize=4096)
def _waiting_counts(n, target, s_freq, k1, f_freq, k2, later):
    return core.waiting_stop_counts(n, target, s_freq, k1, f_freq, k2, later)


def _rel_holds(value: int, rel: Rel, k: int) -> bool:
    return value <= k if rel is Rel.LE else value >= k


def oracle_event_prob(
    params: ModelParams,
    n: int,
    pred: EventPredicate,
    budget: int = DEFAULT_BUDGET,
) -> Scalar:
    """Sum of sequence probabilities over all length-n sequences in the event."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > budget:
        raise EnumerationBudgetError(f"n={n} exceeds enumeration budget {budget}")

    if isinstance(pred, WaitingEquals):
        if pred.n < 1 or pred.n > n:
            return 0  # a stop happens at a trial index in 1..n or not at all
        quota = pred.quota
        counts = _waiting_counts(
            n,
            pred.n,
            isinstance(quota.success_quota, FreqQuota),
            quota.success_quota.k,
            isinstance(quota.failure_quota, FreqQuota),
            quota.failure_quota.k,
            quota.mode is Mode.LATER,
        )
        items = counts.items()
    else:
        grouped = _longest_counts(n)
        if isinstance(pred, LongestEquals):
            keep = lambda l1, l0: l1 == pred.k
        elif isinstance(pred, LongestAtMost):
            keep = lambda l1, l0: l1 <= pred.k
        else:
            keep = lambda l1, l0: (_rel_holds(l1, pred.rel1, pred.k1)
                                   and _rel_holds(l0, pred.rel2, pred.k2))
        merged: dict[tuple[int, int], int] = {}
        for (l1, l0, f, e), c in grouped.items():
            if keep(l1, l0):
                key = (f, e)
                merged[key] = merged.get(key, 0) + c
        items = merged.items()

    total: Scalar = 0
    for (f, e), c in items:
        total = total + c * _class_prob(params, n, f, e)
    return total


def oracle_waiting_pmf(
    params: ModelParams,
    quota: QuotaSpec,
    n_max: int,
    budget: int = DEFAULT_BUDGET,
) -> Pmf:
    """Exact PMF of the waiting time, truncated at n_max."""
    offset = support_min(quota)
    if n_max < offset:
        raise ValueError(f"n_max={n_max} is below the support minimum {offset}")
    probs = [
        oracle_event_prob(params, n, WaitingEquals(quota, n), budget)
        for n in range(offset, n_max + 1)
    ]
    return Pmf(offset=offset, probs=probs)


@dataclass(frozen=True)
class DiscrepancyReport:
    configuration: str
    n: int
    formula_value: Scalar
    oracle_value: Scalar
    abs_difference: Scalar
    verdict: str  # "match" | "mismatch"

    def to_dict(self) -> dict:
        return {
            "configuration": self.configuration,
            "n": self.n,
            "formula_value": _scalar_str(self.formula_value),
            "oracle_value": _scalar_str(self.oracle_value),
            "abs_difference": _scalar_str(self.abs_difference),
            "verdict": self.verdict,
        }


def _scalar_str(v: Scalar) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return repr(v)


def reports_to_json(reports: Iterable[DiscrepancyReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2)


@dataclass(frozen=True)
class ScanGrid:
    """Cartesian grid of parameters and quota configurations to certify."""

    thetas: tuple[Scalar, ...]
    qs: tuple[Scalar, ...]
    k_pairs: tuple[tuple[int, int], ...]
    n_max: int
    modes: tuple[Mode, ...] = (Mode.SOONER, Mode.LATER)
    quota_kinds: tuple[tuple[bool, bool], ...] = (
        (False, False),  # run / run
        (True, False),   # freq / run
        (False, True),   # run / freq
        (True, True),    # freq / freq
    )


def default_grid() -> ScanGrid:
    return ScanGrid(
        thetas=(Fraction(1, 5), Fraction(1, 2), Fraction(4, 5)),
        qs=(Fraction(1, 2), Fraction(9, 10), Fraction(1)),
        k_pairs=((2, 2), (2, 3), (3, 2)),
        n_max=14,
    )


def _quota_label(quota: QuotaSpec) -> str:
    def one(qta):
        kind = "freq" if isinstance(qta, FreqQuota) else "run"
        return f"{kind}:{qta.k}"

    return f"{quota.mode.value} {one(quota.success_quota)}/{one(quota.failure_quota)}"


def differential_scan(
    grid: ScanGrid,
    formula: Callable[[ModelParams, QuotaSpec, int], Scalar] = waiting_time_pmf,
    budget: int = DEFAULT_BUDGET,
    tolerance: float = DEFAULT_TOLERANCE,
) -> list[DiscrepancyReport]:
    """One report per grid point comparing the formula layer to enumeration.

    With exact parameters the verdict is mismatch iff the difference is
    nonzero; in float mode iff it exceeds `tolerance`.
    """
    reports = []
    for s_freq, f_freq in grid.quota_kinds:
        for mode in grid.modes:
            for k1, k2 in grid.k_pairs:
                quota = QuotaSpec(
                    success_quota=FreqQuota(k1) if s_freq else RunQuota(k1),
                    failure_quota=FreqQuota(k2) if f_freq else RunQuota(k2),
                    mode=mode,
                )
                lo = support_min(quota)
                if lo > grid.n_max:
                    continue
                for theta in grid.thetas:
                    for q in grid.qs:
                        params = ModelParams(theta=theta, q=q)
                        exact = params.exact
                        label = f"{_quota_label(quota)} theta={theta} q={q}"
                        got = oracle_waiting_pmf(params, quota, grid.n_max, budget)
                        for n in range(lo, grid.n_max + 1):
                            fv = formula(params, quota, n)
                            ov = got.probs[n - got.offset]
                            diff = abs(fv - ov)
                            bad = (diff != 0) if exact else (diff > tolerance)
                            reports.append(
                                DiscrepancyReport(
                                    configuration=label,
                                    n=n,
                                    formula_value=fv,
                                    oracle_value=ov,
                                    abs_difference=diff,
                                    verdict="mismatch" if bad else "match",
                                )
                            )
    return reports


def monte_carlo_estimate(
    params: ModelParams,
    n: int,
    pred: EventPredicate,
    samples: int,
    seed: int,
) -> tuple[float, float]:
    """(estimate, standard error) of the event probability by simulation.

    The simulator draws all replicas in lockstep with numpy's default
    generator (PCG64), one uniform per trial per replica; fixed seeds give
    identical output on any platform.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    th = float(params.theta)
    q = float(params.q)

    failures = np.zeros(samples, dtype=np.int64)
    run1 = np.zeros(samples, dtype=np.int64)
    run0 = np.zeros(samples, dtype=np.int64)
    l1 = np.zeros(samples, dtype=np.int64)
    l0 = np.zeros(samples, dtype=np.int64)
    c1 = np.zeros(samples, dtype=np.int64)
    hit1 = np.zeros(samples, dtype=np.int64)
    hit0 = np.zeros(samples, dtype=np.int64)

    if isinstance(pred, WaitingEquals):
        quota = pred.quota
        s_freq = isinstance(quota.success_quota, FreqQuota)
        f_freq = isinstance(quota.failure_quota, FreqQuota)
        k1, k2 = quota.success_quota.k, quota.failure_quota.k
    else:
        quota = None

    for t in range(1, n + 1):
        u = rng.random(samples)
        succ = u < th * np.power(q, failures)
        fail = ~succ
        run1[succ] += 1
        run1[fail] = 0
        run0[fail] += 1
        run0[succ] = 0
        c1[succ] += 1
        failures[fail] += 1
        np.maximum(l1, run1, out=l1)
        np.maximum(l0, run0, out=l0)
        if quota is not None:
            side1 = c1 == k1 if s_freq else run1 == k1
            new1 = (hit1 == 0) & side1
            hit1[new1] = t
            side0 = failures == k2 if f_freq else run0 == k2
            new0 = (hit0 == 0) & side0
            hit0[new0] = t

    if isinstance(pred, WaitingEquals):
        if quota.mode is Mode.LATER:
            stop = np.where((hit1 > 0) & (hit0 > 0), np.maximum(hit1, hit0), 0)
        else:
            both = np.where(hit1 == 0, hit0, np.where(hit0 == 0, hit1, np.minimum(hit1, hit0)))
            stop = both
        ok = stop == pred.n
    elif isinstance(pred, LongestEquals):
        ok = l1 == pred.k
    elif isinstance(pred, LongestAtMost):
        ok = l1 <= pred.k
    else:
        side1 = l1 <= pred.k1 if pred.rel1 is Rel.LE else l1 >= pred.k1
        side0 = l0 <= pred.k2 if pred.rel2 is Rel.LE else l0 >= pred.k2
        ok = side1 & side0

    phat = float(np.count_nonzero(ok)) / samples
    stderr = float(np.sqrt(phat * (1.0 - phat) / samples))
    return phat, stderr
