"""Kernel layer: direct enumeration vs recurrence, classical limits, cells."""

import itertools
import threading
from fractions import Fraction

import pytest

from qbtrials import (
    ArrangementShape,
    Bounded,
    EnumerationBudgetError,
    KernelSpec,
    KernelValueCache,
    Positive,
    SomeAtLeast,
    count_C,
    count_M,
    count_R,
    count_S,
    kernel_direct,
    kernel_eval,
    longest_cell_kernel_U,
    longest_cell_kernel_V,
    named_kernel,
)
from qbtrials.kernels import _FAMILIES, FAMILY_NAMES, family_spec

QS = (Fraction(3, 10), Fraction(7, 10), Fraction(1))

# a trimmed grid for the routine suite; the acceptance module runs the full one
SMALL_GRID = list(itertools.product(range(0, 7), range(0, 7), range(1, 4)))


def test_kernel_direct_examples():
    spec = KernelSpec(ArrangementShape.FF, 1, 0, 1, Bounded(1), Bounded(2))
    assert kernel_direct(spec, Fraction(1, 2)) == 1
    q = Fraction(2, 5)
    spec = KernelSpec(ArrangementShape.FS, 1, 1, 1, Bounded(2), Bounded(2))
    assert kernel_direct(spec, q) == q  # single term q**(y1*x1)
    spec = KernelSpec(ArrangementShape.SF, 1, 1, 1, Bounded(1), Bounded(2))
    assert kernel_direct(spec, 0.7) == 1


def test_kernel_eval_examples():
    q = Fraction(1, 3)
    assert named_kernel("A", 2, 2, 2, 3, 3, 1) == count_S(1, 3, 2) * count_S(2, 3, 2)
    assert named_kernel("Ebar", 0, 3, 1, 2, 5, q) == 1
    assert named_kernel("K", 1, 3, 2, 2, 2, q) == 0  # max part 1 < 2


def test_named_kernel_examples():
    assert named_kernel("A", 0, 1, 1, 2, 3, 0.9) == 1
    assert named_kernel("Ibar", 3, 2, 2, 2, 2, 1) == count_M(2, 3) * count_M(1, 2) == 2
    assert named_kernel("Q", 1, 1, 1, 2, 2, Fraction(1, 2)) == 0


def test_unknown_family_raises():
    with pytest.raises(ValueError):
        named_kernel("Z", 1, 1, 1, 2, 2, 1)


def test_eval_equals_direct_small_grid():
    cache = KernelValueCache()
    for fam in FAMILY_NAMES:
        for m, r, s in SMALL_GRID:
            spec = family_spec(fam, m, r, s, 2, 3)
            for q in QS:
                assert kernel_eval(spec, q, cache) == kernel_direct(spec, q), (
                    fam, m, r, s, q)


def _counting_product(fam, m, r, s, k1, k2):
    """Classical count from the per-side constraint and run counts."""
    shape, xkind, ykind = _FAMILIES[fam]
    spec = family_spec(fam, m, r, s, k1, k2)

    def side(kind, parts, total, k):
        if kind.startswith("b"):
            return count_S(parts, k, total)
        if kind == "p":
            return count_M(parts, total)
        return count_R(parts, k, total)

    x = side(xkind, spec.x_runs, m, k1)
    y = side(ykind, spec.y_runs, r, k2)
    return x * y


def test_classical_limit_factorizes_small_grid():
    for fam in FAMILY_NAMES:
        for m, r, s in SMALL_GRID:
            got = named_kernel(fam, m, r, s, 2, 3, Fraction(1))
            assert got == _counting_product(fam, m, r, s, 2, 3), (fam, m, r, s)


def test_bounded_plus_atleast_partitions_positive():
    # restricting the failure parts below k2 (family A) plus requiring one
    # of them to reach k2 (family E) recovers the unconstrained family Ebar
    cache = KernelValueCache()
    for m, r, s in SMALL_GRID:
        for k1, k2 in ((2, 2), (3, 4), (4, 3)):
            for q in QS:
                whole = named_kernel("Ebar", m, r, s, k1, k2, q, cache)
                below = named_kernel("A", m, r, s, k1, k2, q, cache)
                above = named_kernel("E", m, r, s, k1, k2, q, cache)
                assert whole == below + above


def test_cell_kernel_examples():
    q = Fraction(1, 2)
    assert longest_cell_kernel_U(1, 2, 1, 2, 0.5) == 1
    assert longest_cell_kernel_U(2, 2, 1, 2, 1) == 2
    assert longest_cell_kernel_U(2, 2, 1, 2, q) == 1 + q ** 2
    assert longest_cell_kernel_V(1, 2, 3, 0.4) == 1
    assert longest_cell_kernel_V(2, 1, 2, q) == 1 + q
    assert longest_cell_kernel_V(3, 4, 2, 1) == count_C(4, 3, 2) == 6


def test_cell_kernels_match_enumeration():
    def brute_u(r, s, t, k, q):
        total = Fraction(0)
        for comp in itertools.product(range(k + 1), repeat=r):
            if sum(comp) == s and sum(1 for x in comp if x == k) == t:
                w = sum(j * x for j, x in enumerate(comp))
                total += q ** w
        return total

    q = Fraction(2, 3)
    for r in range(1, 5):
        for s in range(0, 9):
            for k in range(1, 4):
                v_expect = Fraction(0)
                for t in range(0, r + 1):
                    u = brute_u(r, s, t, k, q)
                    assert longest_cell_kernel_U(r, s, t, k, q) == u
                    v_expect += u
                assert longest_cell_kernel_V(r, s, k, q) == v_expect


def test_v_is_u_summed_over_hits():
    for r in range(1, 6):
        for s in range(0, 11):
            for k in range(1, 4):
                for q in QS:
                    total = sum(
                        longest_cell_kernel_U(r, s, t, k, q) for t in range(r + 1)
                    )
                    assert longest_cell_kernel_V(r, s, k, q) == total


def test_kernel_values_are_monotone_in_q():
    # nonnegative integer coefficients imply value(0) <= value(1)
    for fam in ("A", "E", "Q", "Jbar", "T"):
        for m, r, s in SMALL_GRID:
            at0 = named_kernel(fam, m, r, s, 3, 3, Fraction(0))
            at1 = named_kernel(fam, m, r, s, 3, 3, Fraction(1))
            assert 0 <= at0 <= at1


def test_direct_budget_error():
    spec = KernelSpec(ArrangementShape.FS, 12, 24, 24, Positive(), Positive())
    with pytest.raises(EnumerationBudgetError):
        kernel_direct(spec, Fraction(1, 2), budget=10)


def test_shared_cache_is_thread_safe():
    cache = KernelValueCache()
    specs = [family_spec(fam, 5, 5, 2, 3, 3) for fam in FAMILY_NAMES]
    expected = {id(s): kernel_direct(s, Fraction(7, 10)) for s in specs}
    results = []

    def worker():
        local = []
        for s in specs:
            local.append((id(s), kernel_eval(s, Fraction(7, 10), cache)))
        results.append(local)

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    for local in results:
        for key, val in local:
            assert val == expected[key]


def test_eval_equals_direct_on_arbitrary_specs():
    from hypothesis import given, settings
    from hypothesis import strategies as st

    from qbtrials.kernels import BoundedWithZero

    constraints = st.one_of(
        st.builds(Bounded, st.integers(1, 5)),
        st.builds(BoundedWithZero, st.integers(0, 5)),
        st.just(Positive()),
        st.builds(SomeAtLeast, st.integers(1, 5)),
    )
    specs = st.builds(
        KernelSpec,
        shape=st.sampled_from(list(ArrangementShape)),
        y_runs=st.integers(0, 4),
        x_total=st.integers(0, 8),
        y_total=st.integers(0, 8),
        x_constraint=constraints,
        y_constraint=constraints,
    )

    cache = KernelValueCache()
    q = Fraction(2, 5)

    @settings(max_examples=300, deadline=None)
    @given(specs)
    def check(spec):
        assert kernel_eval(spec, q, cache) == kernel_direct(spec, q)

    check()


def test_caches_keep_float_and_fraction_regimes_apart():
    # Fraction(1, 2) == 0.5 and they hash alike; a float hit must never be
    # returned for an exact query (or vice versa)
    cache = KernelValueCache()
    spec = family_spec("A", 2, 3, 2, 3, 3)
    as_float = kernel_eval(spec, 0.5, cache)
    as_exact = kernel_eval(spec, Fraction(1, 2), cache)
    assert isinstance(as_float, float)
    assert isinstance(as_exact, Fraction)
    assert longest_cell_kernel_U(3, 4, 1, 2, 0.5) == pytest.approx(
        float(longest_cell_kernel_U(3, 4, 1, 2, Fraction(1, 2))))
    assert isinstance(longest_cell_kernel_U(3, 4, 1, 2, Fraction(1, 2)), Fraction)
    assert isinstance(longest_cell_kernel_V(3, 4, 2, Fraction(1, 2)), Fraction)


def test_spec_run_counts_follow_shape():
    assert family_spec("A", 1, 2, 2, 2, 2).x_runs == 1
    assert family_spec("A", 1, 2, 2, 2, 2).y_runs == 2
    assert family_spec("C", 2, 1, 2, 2, 2).x_runs == 2
    assert family_spec("C", 2, 1, 2, 2, 2).y_runs == 1
    assert family_spec("B", 2, 2, 2, 2, 2).x_runs == 2
    assert family_spec("D", 2, 2, 2, 2, 2).y_runs == 2
