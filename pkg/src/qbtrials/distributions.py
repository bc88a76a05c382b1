"""Waiting-time and longest-run distributions assembled over the kernel layer.

Each evaluator decomposes the event by the failure count of a prefix and the
number of runs, weights the matching composition kernels with the explicit
probability prefactors, and sums.  Sum ranges are generous where feasibility
is subtle; kernels vanish outside their domains.  Exact (Fraction) inputs
produce exact outputs.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

from .kernels import (
    KernelValueCache,
    longest_cell_kernel_U,
    longest_cell_kernel_V,
    named_kernel,
)
from .model import FreqQuota, Mode, ModelParams, QuotaSpec
from .qcalc import Scalar, q_binomial, q_pochhammer

__all__ = [
    "Pmf",
    "Rel",
    "waiting_time_pmf",
    "waiting_time_table",
    "sooner_freq_freq_closed",
    "longest_run_pmf",
    "longest_run_cdf",
    "joint_longest",
    "q_binomial_pmf",
    "support_min",
]

logger = logging.getLogger(__name__)

_NEG_CLAMP = 1e-12
_SUM_SLACK = 1e-10


class Rel(Enum):
    LE = "le"
    GE = "ge"


@dataclass
class Pmf:
    """Probabilities for n = offset, offset+1, ..., offset+len(probs)-1."""

    offset: int
    probs: list[Scalar]

    def support(self) -> range:
        return range(self.offset, self.offset + len(self.probs))

    def total(self) -> Scalar:
        return sum(self.probs)


def _ffp(theta: Scalar, q: Scalar, i: int) -> Scalar:
    """Probability of the first i failures: the shifted factorial (theta; q)_i."""
    return q_pochhammer(theta, q, i)


def support_min(quota: QuotaSpec) -> int:
    k1 = quota.success_quota.k
    k2 = quota.failure_quota.k
    if quota.mode is Mode.LATER:
        return k1 + k2
    return min(k1, k2)


def waiting_time_pmf(
    params: ModelParams,
    quota: QuotaSpec,
    n: int,
    cache: KernelValueCache | None = None,
) -> Scalar:
    """P(waiting time = n) for any quota pair in either mode."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n < support_min(quota):
        return 0
    th, q = params.theta, params.q
    k1 = quota.success_quota.k
    k2 = quota.failure_quota.k

    def K(fam, m, r, s, kk1=k1, kk2=k2):
        return named_kernel(fam, m, r, s, kk1, kk2, q, cache)

    s_freq = isinstance(quota.success_quota, FreqQuota)
    f_freq = isinstance(quota.failure_quota, FreqQuota)
    later = quota.mode is Mode.LATER

    if not s_freq and not f_freq:
        if later:
            return _run_run_later(th, q, k1, k2, n, K)
        return _run_run_sooner(th, q, k1, k2, n, K)
    if s_freq and not f_freq:
        if later:
            return _freq_run_later(th, q, k1, k2, n, K)
        return _freq_run_sooner(th, q, k1, k2, n, K)
    if not s_freq and f_freq:
        if later:
            return _run_freq_later(th, q, k1, k2, n, K)
        return _run_freq_sooner(th, q, k1, k2, n, K)
    p = _freq_freq_mass(th, q, k1, k2, n, K)
    if later:
        return p
    return p if n <= k1 + k2 - 1 else 0


def _run_run_sooner(th, q, k1, k2, n, K):
    p = 0
    if n == k1:
        p = p + th ** k1
    elif n > k1:
        for i in range(1, n - k1 + 1):
            m = n - k1 - i
            inner = 0
            for s in range(1, i + 1):
                inner = inner + K("A", m, i, s) + K("B", m, i, s)
            if inner:
                p = p + th ** (n - i) * q ** (i * k1) * _ffp(th, q, i) * inner
    if n == k2:
        p = p + _ffp(th, q, k2)
    elif n > k2:
        # the i = 0 term covers an all-success prefix before the failure run
        for i in range(0, n - k2 + 1):
            m = n - k2 - i
            inner = 0
            for s in range(1, max(m, 1) + 1):
                inner = inner + K("C", m, i, s) + K("D", m, i, s)
            if inner:
                p = p + th ** m * _ffp(th, q, i + k2) * inner
    return p


def _run_run_later(th, q, k1, k2, n, K):
    p = 0
    for i in range(k2, n - k1 + 1):
        m = n - k1 - i
        inner = 0
        for s in range(1, i + 1):
            inner = inner + K("E", m, i, s) + K("F", m, i, s)
        if inner:
            p = p + th ** (n - i) * q ** (i * k1) * _ffp(th, q, i) * inner
    for i in range(k1, n - k2 + 1):
        r = n - k2 - i
        inner = 0
        for s in range(1, i + 1):
            inner = inner + K("G", i, r, s) + K("H", i, r, s)
        if inner:
            p = p + th ** i * _ffp(th, q, n - i) * inner
    return p


def _freq_run_sooner(th, q, k1, k2, n, K):
    p = 0
    if n >= k1:
        inner = 0
        for s in range(1, k1 + 1):
            inner = inner + K("Hbar", k1, n - k1, s) + K("Gbar", k1, n - k1, s)
        if inner:
            p = p + th ** k1 * _ffp(th, q, n - k1) * inner
    if n == k2:
        p = p + _ffp(th, q, k2)
    elif n > k2:
        for i in range(1, min(n - k2, k1 - 1) + 1):
            r = n - k2 - i
            inner = 0
            for s in range(1, i + 1):
                inner = inner + K("Gbar", i, r, s) + K("Hbar", i, r, s)
            if inner:
                p = p + th ** i * _ffp(th, q, n - i) * inner
    return p


def _freq_run_later(th, q, k1, k2, n, K):
    p = 0
    inner = 0
    for s in range(1, k1 + 1):
        inner = inner + K("I", k1, n - k1, s) + K("J", k1, n - k1, s)
    if inner:
        p = p + th ** k1 * _ffp(th, q, n - k1) * inner
    for i in range(k1, n - k2 + 1):
        r = n - k2 - i
        inner = 0
        for s in range(1, i + 1):
            inner = inner + K("Gbar", i, r, s) + K("Hbar", i, r, s)
        if inner:
            p = p + th ** i * _ffp(th, q, n - i) * inner
    return p


def _run_freq_sooner(th, q, k1, k2, n, K):
    p = 0
    if n == k1:
        p = p + th ** k1
    elif n > k1:
        for i in range(1, min(n - k1, k2 - 1) + 1):
            m = n - k1 - i
            inner = 0
            for s in range(1, i + 1):
                inner = inner + K("Ebar", m, i, s) + K("Fbar", m, i, s)
            if inner:
                p = p + th ** (n - i) * q ** (i * k1) * _ffp(th, q, i) * inner
    if n >= k2:
        inner = 0
        for s in range(1, k2 + 1):
            inner = inner + K("Ebar", n - k2, k2, s) + K("Fbar", n - k2, k2, s)
        if inner:
            p = p + th ** (n - k2) * _ffp(th, q, k2) * inner
    return p


def _run_freq_later(th, q, k1, k2, n, K):
    p = 0
    for i in range(k2, n - k1 + 1):
        m = n - k1 - i
        inner = 0
        for s in range(1, i + 1):
            inner = inner + K("Ebar", m, i, s) + K("Fbar", m, i, s)
        if inner:
            p = p + th ** (n - i) * q ** (i * k1) * _ffp(th, q, i) * inner
    inner = 0
    for s in range(1, k2 + 1):
        inner = inner + K("K", n - k2, k2, s) + K("L", n - k2, k2, s)
    if inner:
        p = p + th ** (n - k2) * _ffp(th, q, k2) * inner
    return p


def _freq_freq_mass(th, q, k1, k2, n, K):
    """P(the k1-th success or the k2-th failure lands exactly on trial n)."""
    p = 0
    if n >= k1:
        inner = 0
        for s in range(1, k1 + 1):
            inner = inner + K("Ibar", k1, n - k1, s) + K("Jbar", k1, n - k1, s)
        if inner:
            p = p + th ** k1 * _ffp(th, q, n - k1) * inner
    if n >= k2:
        inner = 0
        for s in range(1, k2 + 1):
            inner = inner + K("Kbar", n - k2, k2, s) + K("Lbar", n - k2, k2, s)
        if inner:
            p = p + th ** (n - k2) * _ffp(th, q, k2) * inner
    return p


def sooner_freq_freq_closed(params: ModelParams, k1: int, k2: int, n: int) -> Scalar:
    """Sooner frequency/frequency mass as a difference of survival sums."""
    if k1 < 1 or k2 < 1:
        raise ValueError("quota sizes must be >= 1")
    if n < 1:
        return 0
    a = 0
    for x in range(max(0, n - k2), k1):
        a = a + q_binomial_pmf(params, n - 1, x)
    b = 0
    for x in range(max(0, n + 1 - k2), k1):
        b = b + q_binomial_pmf(params, n, x)
    return a - b


def q_binomial_pmf(params: ModelParams, n: int, r: int) -> Scalar:
    """P(exactly r successes in n trials)."""
    if r < 0 or r > n:
        return 0
    th, q = params.theta, params.q
    return q_binomial(n, r, q) * th ** r * _ffp(th, q, n - r)


def longest_run_pmf(params: ModelParams, n: int, k: int) -> Scalar:
    """P(longest success run in n trials = k)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if k < 0 or k > n:
        return 0
    th, q = params.theta, params.q
    if k == 0:
        return _ffp(th, q, n)
    p = 0
    for y in range(0, n - k + 1):
        inner = 0
        for i in range(1, y + 2):
            inner = inner + longest_cell_kernel_U(y + 1, n - y, i, k, q)
        if inner:
            p = p + th ** (n - y) * _ffp(th, q, y) * inner
    return p


def longest_run_cdf(params: ModelParams, n: int, k: int) -> Scalar:
    """P(longest success run in n trials <= k)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if k < 0:
        return 0
    if k >= n:
        return 1
    th, q = params.theta, params.q
    p = 0
    for y in range(0, n + 1):
        v = longest_cell_kernel_V(y + 1, n - y, k, q)
        if v:
            p = p + th ** (n - y) * _ffp(th, q, y) * v
    return p


def joint_longest(
    params: ModelParams,
    n: int,
    k1: int,
    rel1: Rel,
    k2: int,
    rel2: Rel,
    cache: KernelValueCache | None = None,
) -> Scalar:
    """P(longest success run rel1 k1 AND longest failure run rel2 k2)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    for rel, k in ((rel1, k1), (rel2, k2)):
        if rel is Rel.GE and k < 1:
            raise ValueError("a >= relation needs k >= 1")
        if rel is Rel.LE and k < 0:
            raise ValueError("a <= relation needs k >= 0")
    th, q = params.theta, params.q

    def K(fam, m, r, s, kk1, kk2):
        return named_kernel(fam, m, r, s, kk1, kk2, q, cache)

    p = 0
    if rel1 is Rel.LE and rel2 is Rel.LE:
        for i in range(1, n + 1):
            m = n - i
            inner = 0
            for s in range(1, i + 1):
                inner = (inner
                         + K("D", m, i, s, k1 + 1, k2 + 1)
                         + K("A", m, i, s, k1 + 1, k2 + 1)
                         + K("C", m, i, s + 1, k1 + 1, k2 + 1)
                         + K("B", m, i, s, k1 + 1, k2 + 1))
            if inner:
                p = p + th ** m * _ffp(th, q, i) * inner
        if n <= k1:
            p = p + th ** n  # the all-success sequence
    elif rel1 is Rel.LE and rel2 is Rel.GE:
        for i in range(k2, n + 1):
            m = n - i
            inner = 0
            for s in range(1, i + 1):
                inner = (inner
                         + K("M", m, i, s, k1 + 1, k2)
                         + K("E", m, i, s, k1 + 1, k2)
                         + K("N", m, i, s + 1, k1 + 1, k2)
                         + K("F", m, i, s, k1 + 1, k2))
            if inner:
                p = p + th ** m * _ffp(th, q, i) * inner
    elif rel1 is Rel.GE and rel2 is Rel.LE:
        for i in range(1, n - k1 + 1):
            m = n - i
            inner = 0
            for s in range(1, i + 1):
                inner = (inner
                         + K("H", m, i, s, k1, k2 + 1)
                         + K("O", m, i, s, k1, k2 + 1)
                         + K("G", m, i, s + 1, k1, k2 + 1)
                         + K("P", m, i, s, k1, k2 + 1))
            if inner:
                p = p + th ** m * _ffp(th, q, i) * inner
        if n >= k1:
            p = p + th ** n  # the all-success sequence
    else:
        for i in range(k2, n - k1 + 1):
            m = n - i
            inner = 0
            for s in range(1, i + 1):
                inner = (inner
                         + K("Q", m, i, s, k1, k2)
                         + K("R", m, i, s, k1, k2)
                         + K("S", m, i, s + 1, k1, k2)
                         + K("T", m, i, s, k1, k2))
            if inner:
                p = p + th ** m * _ffp(th, q, i) * inner
    return p


def waiting_time_table(
    params: ModelParams,
    quota: QuotaSpec,
    n_max: int,
    cache: KernelValueCache | None = None,
) -> Pmf:
    """PMF table from the support minimum up to n_max inclusive."""
    offset = support_min(quota)
    if n_max < offset:
        raise ValueError(f"n_max={n_max} is below the support minimum {offset}")
    probs = []
    running: Scalar = 0
    for n in range(offset, n_max + 1):
        p = waiting_time_pmf(params, quota, n, cache)
        if isinstance(p, float) and p < 0:
            if p < -_NEG_CLAMP:
                raise ValueError(f"negative probability {p} at n={n}")
            logger.warning("clamping tiny negative probability %g at n=%d", p, n)
            p = 0.0
        running = running + p
        probs.append(p)
    if running > 1 + _SUM_SLACK:
        raise ValueError(f"partial sums exceed 1: {running}")
    return Pmf(offset=offset, probs=probs)
