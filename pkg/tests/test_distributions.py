"""Distribution assemblies: frozen examples, oracle agreement, identities."""

import itertools
from fractions import Fraction

import pytest

from qbtrials import (
    FreqQuota,
    LongestAtMost,
    LongestEquals,
    Mode,
    ModelParams,
    QuotaSpec,
    Rel,
    RunQuota,
    joint_longest,
    longest_run_cdf,
    longest_run_pmf,
    oracle_event_prob,
    oracle_waiting_pmf,
    q_binomial_pmf,
    sooner_freq_freq_closed,
    support_min,
    waiting_time_pmf,
    waiting_time_table,
)
from qbtrials.oracle import JointLongest

HALF = ModelParams(Fraction(1, 2), Fraction(1, 2))
IID = ModelParams(Fraction(1, 2), Fraction(1))

ALL_KINDS = [(False, False), (True, False), (False, True), (True, True)]


def make_quota(s_freq, f_freq, k1, k2, mode):
    return QuotaSpec(
        FreqQuota(k1) if s_freq else RunQuota(k1),
        FreqQuota(k2) if f_freq else RunQuota(k2),
        mode,
    )


def test_waiting_time_examples():
    rr = make_quota(False, False, 2, 2, Mode.SOONER)
    assert waiting_time_pmf(HALF, rr, 2) == Fraction(5, 8)
    assert waiting_time_pmf(IID, rr, 3) == Fraction(1, 4)
    later = make_quota(False, False, 2, 2, Mode.LATER)
    assert waiting_time_pmf(HALF, later, 3) == 0
    assert waiting_time_pmf(ModelParams(0.3, 0.9), later, 3) == 0


def test_waiting_time_below_support_is_zero():
    rr = make_quota(False, False, 3, 2, Mode.SOONER)
    assert waiting_time_pmf(HALF, rr, 0) == 0
    assert waiting_time_pmf(HALF, rr, 1) == 0
    with pytest.raises(ValueError):
        waiting_time_pmf(HALF, rr, -1)


@pytest.mark.parametrize("s_freq,f_freq", ALL_KINDS)
@pytest.mark.parametrize("mode", [Mode.SOONER, Mode.LATER])
def test_waiting_time_matches_oracle_trimmed(s_freq, f_freq, mode):
    for k1, k2 in ((2, 2), (3, 2)):
        quota = make_quota(s_freq, f_freq, k1, k2, mode)
        for theta, q in ((Fraction(1, 2), Fraction(1, 2)),
                         (Fraction(4, 5), Fraction(9, 10))):
            params = ModelParams(theta, q)
            table = oracle_waiting_pmf(params, quota, 10)
            for n in range(support_min(quota), 11):
                assert waiting_time_pmf(params, quota, n) == \
                    table.probs[n - table.offset], (quota, theta, q, n)


def test_sooner_freq_freq_closed_examples():
    assert sooner_freq_freq_closed(ModelParams(Fraction(1, 2), Fraction(1)), 1, 1, 1) == 1
    assert sooner_freq_freq_closed(HALF, 2, 1, 1) == Fraction(1, 2)
    assert sooner_freq_freq_closed(HALF, 2, 3, 5) == 0
    assert sooner_freq_freq_closed(ModelParams(0.3, 0.7), 3, 4, 7) == 0


def test_sooner_freq_freq_closed_matches_assembly():
    for k1, k2 in ((2, 2), (2, 3), (3, 2), (1, 4)):
        quota = make_quota(True, True, k1, k2, Mode.SOONER)
        for theta, q in ((Fraction(1, 5), Fraction(1, 2)),
                         (Fraction(1, 2), Fraction(9, 10)),
                         (Fraction(4, 5), Fraction(1))):
            params = ModelParams(theta, q)
            total = 0
            for n in range(min(k1, k2), k1 + k2):
                closed = sooner_freq_freq_closed(params, k1, k2, n)
                assembled = waiting_time_pmf(params, quota, n)
                assert closed == assembled
                total += assembled
            assert total == 1  # finite support normalization


def test_longest_run_examples():
    assert longest_run_pmf(HALF, 2, 0) == Fraction(3, 8)
    assert longest_run_pmf(HALF, 2, 2) == Fraction(1, 4)
    assert longest_run_pmf(HALF, 2, 1) == Fraction(3, 8)
    assert longest_run_pmf(HALF, 2, 3) == 0
    assert longest_run_pmf(HALF, 2, -1) == 0
    assert longest_run_cdf(HALF, 3, 3) == 1
    assert longest_run_cdf(HALF, 2, 0) == Fraction(3, 8)
    assert longest_run_cdf(HALF, 2, 1) == Fraction(3, 4)


def test_longest_run_pmf_is_cdf_difference():
    for theta, q in ((Fraction(1, 5), Fraction(1, 2)), (Fraction(1, 2), Fraction(1))):
        params = ModelParams(theta, q)
        for n in range(0, 11):
            for k in range(0, n + 1):
                left = longest_run_pmf(params, n, k)
                right = longest_run_cdf(params, n, k) - longest_run_cdf(params, n, k - 1)
                assert left == right


def test_longest_run_matches_oracle_trimmed():
    params = ModelParams(Fraction(2, 5), Fraction(3, 4))
    for n in range(0, 11):
        for k in range(0, n + 1):
            assert longest_run_pmf(params, n, k) == \
                oracle_event_prob(params, n, LongestEquals(k))
            assert longest_run_cdf(params, n, k) == \
                oracle_event_prob(params, n, LongestAtMost(k))


def test_joint_longest_examples():
    assert joint_longest(HALF, 2, 1, Rel.LE, 1, Rel.LE) == Fraction(3, 8)
    assert joint_longest(HALF, 2, 1, Rel.GE, 1, Rel.GE) == Fraction(3, 8)
    assert joint_longest(HALF, 3, 2, Rel.GE, 2, Rel.GE) == 0
    with pytest.raises(ValueError):
        joint_longest(HALF, 3, 0, Rel.GE, 1, Rel.LE)


def test_joint_longest_matches_oracle_trimmed():
    params = ModelParams(Fraction(1, 2), Fraction(1, 2))
    for n in range(0, 9):
        for k1, k2 in itertools.product((1, 2, 3), repeat=2):
            for r1, r2 in itertools.product((Rel.LE, Rel.GE), repeat=2):
                got = joint_longest(params, n, k1, r1, k2, r2)
                want = oracle_event_prob(params, n, JointLongest(k1, r1, k2, r2))
                assert got == want, (n, k1, r1, k2, r2)


def test_quadrant_decompositions():
    params = ModelParams(Fraction(1, 3), Fraction(4, 5))
    for n in range(1, 11):
        for k1, k2 in itertools.product((1, 2, 3), repeat=2):
            lhs = (joint_longest(params, n, k1, Rel.LE, k2 - 1, Rel.LE)
                   + joint_longest(params, n, k1, Rel.LE, k2, Rel.GE))
            rhs = joint_longest(params, n, k1, Rel.LE, n, Rel.LE)
            assert lhs == rhs
            lhs2 = (joint_longest(params, n, k1, Rel.GE, k2 - 1, Rel.LE)
                    + joint_longest(params, n, k1, Rel.GE, k2, Rel.GE))
            rhs2 = 1 - longest_run_cdf(params, n, k1 - 1)
            assert lhs2 == rhs2


def test_q_binomial_pmf_examples():
    assert q_binomial_pmf(HALF, 2, 2) == Fraction(1, 4)
    assert q_binomial_pmf(HALF, 2, 1) == Fraction(3, 8)
    got = q_binomial_pmf(ModelParams(Fraction(3, 10), Fraction(1)), 4, 2)
    assert got == Fraction(2646, 10000)
    assert q_binomial_pmf(HALF, 2, 3) == 0
    assert q_binomial_pmf(HALF, 2, -1) == 0


def test_q_binomial_pmf_sums_to_one():
    for theta, q in ((Fraction(1, 5), Fraction(1, 2)), (Fraction(1, 2), Fraction(9, 10))):
        params = ModelParams(theta, q)
        for n in range(0, 12):
            assert sum(q_binomial_pmf(params, n, r) for r in range(n + 1)) == 1


def test_waiting_time_table_examples():
    point = waiting_time_table(
        ModelParams(Fraction(1, 2), Fraction(1)),
        make_quota(True, True, 1, 1, Mode.SOONER), 5)
    assert point.offset == 1
    assert point.probs == [1, 0, 0, 0, 0]
    rr = waiting_time_table(IID, make_quota(False, False, 2, 2, Mode.SOONER), 3)
    assert rr.offset == 2
    assert rr.probs == [Fraction(1, 2), Fraction(1, 4)]
    ff = waiting_time_table(HALF, make_quota(True, True, 2, 2, Mode.SOONER), 3)
    assert ff.total() == 1
    with pytest.raises(ValueError):
        waiting_time_table(HALF, make_quota(False, False, 2, 2, Mode.LATER), 3)


@pytest.mark.parametrize("s_freq,f_freq", ALL_KINDS)
def test_later_mode_partial_sums_bounded(s_freq, f_freq):
    quota = make_quota(s_freq, f_freq, 2, 2, Mode.LATER)
    params = HALF
    running = Fraction(0)
    previous = Fraction(0)
    for n in range(support_min(quota), 61):
        running += waiting_time_pmf(params, quota, n)
        assert previous <= running <= 1
        previous = running


def test_later_mode_is_defective_for_small_q():
    # with decaying success probability the success-run quota may never be met
    quota = make_quota(False, False, 2, 2, Mode.LATER)
    total = sum(
        waiting_time_pmf(HALF, quota, n) for n in range(support_min(quota), 61)
    )
    assert total < Fraction(95, 100)


def test_classical_reduction_at_q_one_run_run():
    # at q = 1 the assembly collapses to IID run statistics; spot-check
    # run/run sooner against the direct binomial-weighted counting form
    theta = Fraction(1, 2)
    params = ModelParams(theta, Fraction(1))
    from qbtrials.qcalc import count_S

    def classical_run_run_sooner(n, k1, k2):
        p = Fraction(0)
        if n == k1:
            p += theta ** k1
        elif n > k1:
            for i in range(1, n - k1 + 1):
                m = n - k1 - i
                inner = sum(
                    count_S(s - 1, k1, m) * count_S(s, k2, i)
                    + count_S(s, k1, m) * count_S(s, k2, i)
                    for s in range(1, i + 1)
                )
                p += theta ** (n - i) * (1 - theta) ** i * inner
        if n == k2:
            p += (1 - theta) ** k2
        elif n > k2:
            for i in range(0, n - k2 + 1):
                m = n - k2 - i
                inner = sum(
                    count_S(s, k1, m) * count_S(s - 1, k2, i)
                    + count_S(s, k1, m) * count_S(s, k2, i)
                    for s in range(1, max(m, 1) + 1)
                )
                p += theta ** m * (1 - theta) ** (i + k2) * inner
        return p

    quota = make_quota(False, False, 2, 3, Mode.SOONER)
    for n in range(2, 13):
        assert waiting_time_pmf(params, quota, n) == classical_run_run_sooner(n, 2, 3)


def test_classical_reduction_at_q_one_all_configs():
    # substitute each kernel's classical counting product into the same
    # assembly and compare against the evaluator at q = 1, all 8 configs
    from qbtrials import distributions as d
    from qbtrials.kernels import _FAMILIES, family_spec
    from qbtrials.qcalc import count_M, count_R, count_S

    def counting_product(fam, m, r, s, k1, k2):
        _, xkind, ykind = _FAMILIES[fam]
        spec = family_spec(fam, m, r, s, k1, k2)

        def side(kind, parts, total, k):
            if kind.startswith("b"):
                return count_S(parts, k, total)
            if kind == "p":
                return count_M(parts, total)
            return count_R(parts, k, total)

        return side(xkind, spec.x_runs, m, k1) * side(ykind, spec.y_runs, r, k2)

    branches = {
        (False, False, Mode.SOONER): d._run_run_sooner,
        (False, False, Mode.LATER): d._run_run_later,
        (True, False, Mode.SOONER): d._freq_run_sooner,
        (True, False, Mode.LATER): d._freq_run_later,
        (False, True, Mode.SOONER): d._run_freq_sooner,
        (False, True, Mode.LATER): d._run_freq_later,
    }
    one = Fraction(1)
    for theta in (Fraction(1, 5), Fraction(1, 2), Fraction(4, 5)):
        params = ModelParams(theta, one)
        for k1, k2 in ((2, 2), (2, 3), (3, 2)):

            def K_classical(fam, m, r, s, kk1=k1, kk2=k2):
                return counting_product(fam, m, r, s, kk1, kk2)

            for (s_freq, f_freq, mode), branch in branches.items():
                quota = make_quota(s_freq, f_freq, k1, k2, mode)
                for n in range(support_min(quota), 15):
                    classical = branch(theta, one, k1, k2, n, K_classical)
                    assert classical == waiting_time_pmf(params, quota, n), (
                        s_freq, f_freq, mode, k1, k2, theta, n)
            for mode in (Mode.SOONER, Mode.LATER):
                quota = make_quota(True, True, k1, k2, mode)
                for n in range(support_min(quota), 15):
                    mass = d._freq_freq_mass(theta, one, k1, k2, n, K_classical)
                    if mode is Mode.SOONER and n > k1 + k2 - 1:
                        mass = 0
                    assert mass == waiting_time_pmf(params, quota, n)
