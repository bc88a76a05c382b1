"""Pure-Python core: composition-kernel polynomials and sequence enumeration.

Every kernel value is a polynomial in q with nonnegative integer
coefficients, so the heavy lifting here is exact integer arithmetic on
coefficient lists (index = power of q).  Sequence enumeration groups the
2^n binary sequences by (failure count, success weight), which determines
the probability of a sequence completely; callers turn the integer count
tables into exact probabilities.

`qbtrials._core` is the compiled twin of this module.  The two must produce
identical results; `tests/test_backends.py` checks that.
"""

from __future__ import annotations

# Part-constraint codes shared with the compiled core.
CON_BOUNDED0 = 0  # parts in 0..hi
CON_BOUNDED = 1   # parts in 1..hi
CON_POSITIVE = 2  # parts >= 1
CON_ATLEAST = 3   # parts >= 1 and max part >= param


class EnumerationBudgetError(Exception):
    """Raised when a direct-enumeration instance is too large."""


def _compositions(total, parts, lo, hi):
    """Yield all compositions of `total` into `parts` parts, each in lo..hi."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    hi = min(hi, total - lo * (parts - 1))
    for first in range(lo, hi + 1):
        for rest in _compositions(total - first, parts - 1, lo, hi):
            yield (first,) + rest


def _constrained_compositions(total, parts, code, param):
    if code == CON_BOUNDED0:
        yield from _compositions(total, parts, 0, param)
    elif code == CON_BOUNDED:
        yield from _compositions(total, parts, 1, param)
    elif code == CON_POSITIVE:
        yield from _compositions(total, parts, 1, total)
    elif code == CON_ATLEAST:
        for comp in _compositions(total, parts, 1, total):
            if comp and max(comp) >= param:
                yield comp
    else:
        raise ValueError(f"unknown constraint code {code}")


def _materialize(total, parts, code, param, cap):
    out = []
    for comp in _constrained_compositions(total, parts, code, param):
        out.append(comp)
        if len(out) > cap:
            raise EnumerationBudgetError(
                f"more than {cap} compositions on one side of the sum")
    return out


def kernel_direct_poly(first_success, nx, ny, m, r, xcode, xparam, ycode, yparam,
                       budget=2_000_000):
    """Coefficients of the kernel polynomial, by brute-force enumeration.

    The arrangement alternates success runs x_1..x_nx and failure runs
    y_1..y_ny, starting with a success run iff `first_success`.  Each term
    contributes q**(sum_j w_j x_j) where w_j is the total failure mass
    before x_j in the arrangement.
    """
    if m < 0 or r < 0 or nx < 0 or ny < 0:
        return [0]
    # the first run's symbol fixes which side may hold the extra run
    if first_success:
        if nx not in (ny, ny + 1):
            return [0]
    elif ny not in (nx, nx + 1):
        return [0]
    if nx == 0 and ny == 0:
        ok = (m == 0 and r == 0
              and xcode != CON_ATLEAST and ycode != CON_ATLEAST)
        return [1] if ok else [0]

    xcomps = _materialize(m, nx, xcode, xparam, budget)
    if not xcomps:
        return [0]
    ycomps = _materialize(r, ny, ycode, yparam, budget)
    if not ycomps:
        return [0]
    if len(xcomps) * len(ycomps) > budget:
        raise EnumerationBudgetError(
            f"{len(xcomps)}x{len(ycomps)} composition pairs exceed budget {budget}")

    coeffs = [0] * (m * r + 1)
    for ys in ycomps:
        # prefix[j] = failure mass in runs y_1..y_j
        prefix = [0] * (ny + 1)
        for j, y in enumerate(ys):
            prefix[j + 1] = prefix[j] + y
        # x_j is preceded by j failure runs when the arrangement starts with
        # a failure run, and by j-1 of them when it starts with a success run
        off = 0 if first_success else 1
        for xs in xcomps:
            w = 0
            for j, x in enumerate(xs):
                w += prefix[j + off] * x
            coeffs[w] += 1
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _shift_add(dst, src, shift):
    need = shift + len(src)
    if len(dst) < need:
        dst.extend([0] * (need - len(dst)))
    for i, c in enumerate(src):
        if c:
            dst[shift + i] += c
    return dst


def kernel_eval_poly(first_success, nx, ny, m, r, xcode, xparam, ycode, yparam,
                     memo):
    """Kernel polynomial by peeling the arrangement's final run (memoized).

    Peeling a success run of length a multiplies by q**(r*a): every failure
    run still in the prefix precedes it.  A constraint that requires some
    part >= k relaxes to plain positivity once such a part has been peeled.
    """
    key = (first_success, nx, ny, m, r, xcode, xparam, ycode, yparam)
    cached = memo.get(key)
    if cached is not None:
        return cached

    result = _eval_uncached(first_success, nx, ny, m, r,
                            xcode, xparam, ycode, yparam, memo)
    memo[key] = result
    return result


def _part_range(code, param, total):
    lo = 0 if code == CON_BOUNDED0 else 1
    hi = param if code in (CON_BOUNDED0, CON_BOUNDED) else total
    return lo, min(hi, total)


def _eval_uncached(first_success, nx, ny, m, r, xcode, xparam, ycode, yparam, memo):
    if m < 0 or r < 0 or nx < 0 or ny < 0:
        return [0]
    if nx == 0 and ny == 0:
        if m == 0 and r == 0 and xcode != CON_ATLEAST and ycode != CON_ATLEAST:
            return [1]
        return [0]

    # which run type ends the current prefix
    if first_success:
        if nx == ny + 1:
            last = "x"
        elif nx == ny and ny > 0:
            last = "y"
        else:
            return [0]
    else:
        if ny == nx + 1:
            last = "y"
        elif ny == nx and nx > 0:
            last = "x"
        else:
            return [0]

    out = [0]
    if last == "x":
        lo, hi = _part_range(xcode, xparam, m)
        for a in range(lo, hi + 1):
            code = xcode
            if code == CON_ATLEAST and a >= xparam:
                code = CON_POSITIVE
            child = kernel_eval_poly(first_success, nx - 1, ny, m - a, r,
                                     code, xparam, ycode, yparam, memo)
            if child != [0]:
                _shift_add(out, child, r * a)
    else:
        lo, hi = _part_range(ycode, yparam, r)
        for b in range(lo, hi + 1):
            code = ycode
            if code == CON_ATLEAST and b >= yparam:
                code = CON_POSITIVE
            child = kernel_eval_poly(first_success, nx, ny - 1, m, r - b,
                                     xcode, xparam, code, yparam, memo)
            if child != [0]:
                _shift_add(out, child, 0)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def cell_poly_u(r, s, t, k, memo):
    """Polynomial of the bounded-cell kernel with an exact count of full cells.

    Cells x_1..x_r take values 0..k with sum s and exactly t cells equal
    to k; cell j carries weight (j-1)*x_j.
    """
    if s < 0 or t < 0 or r < 1 or t > r or s > r * k:
        return [0]
    key = (r, s, t, k)
    cached = memo.get(key)
    if cached is not None:
        return cached
    if r == 1:
        if (s == k and t == 1) or (s < k and t == 0):
            result = [1]
        else:
            result = [0]
    else:
        result = [0]
        for a in range(0, min(k, s) + 1):
            child = cell_poly_u(r - 1, s - a, t - (1 if a == k else 0), k, memo)
            if child != [0]:
                _shift_add(result, child, a * (r - 1))
        while len(result) > 1 and result[-1] == 0:
            result.pop()
    memo[key] = result
    return result


def cell_poly_v(r, s, k, memo):
    """Polynomial of the bounded-cell kernel without the full-cell count."""
    if s < 0 or r < 1 or s > r * k:
        return [0]
    key = (r, s, k)
    cached = memo.get(key)
    if cached is not None:
        return cached
    if r == 1:
        result = [1]
    else:
        result = [0]
        for a in range(0, min(k, s) + 1):
            child = cell_poly_v(r - 1, s - a, k, memo)
            if child != [0]:
                _shift_add(result, child, a * (r - 1))
        while len(result) > 1 and result[-1] == 0:
            result.pop()
    memo[key] = result
    return result


def waiting_stop_counts(n, target, s_freq, k1, f_freq, k2, later):
    """Count length-n sequences whose quota stopping time equals `target`.

    Returns {(failures, weight): count} where weight is the sum over
    successes of the number of failures preceding each one.  Bit i of a
    mask is trial i+1; a set bit is a success.
    """
    counts = {}
    for mask in range(1 << n):
        f = 0
        e = 0
        run1 = run0 = 0
        c1 = c0 = 0
        hit1 = hit0 = 0
        for i in range(n):
            if (mask >> i) & 1:
                e += f
                c1 += 1
                run1 += 1
                run0 = 0
                if hit1 == 0 and (c1 == k1 if s_freq else run1 == k1):
                    hit1 = i + 1
            else:
                f += 1
                c0 += 1
                run0 += 1
                run1 = 0
                if hit0 == 0 and (c0 == k2 if f_freq else run0 == k2):
                    hit0 = i + 1
        if later:
            stop = max(hit1, hit0) if (hit1 and hit0) else 0
        else:
            if hit1 and hit0:
                stop = min(hit1, hit0)
            else:
                stop = hit1 or hit0
        if stop == target:
            key = (f, e)
            counts[key] = counts.get(key, 0) + 1
    return counts


def longest_joint_counts(n):
    """Group length-n sequences by (longest 1-run, longest 0-run, failures, weight)."""
    counts = {}
    for mask in range(1 << n):
        f = 0
        e = 0
        run1 = run0 = 0
        l1 = l0 = 0
        for i in range(n):
            if (mask >> i) & 1:
                e += f
                run1 += 1
                run0 = 0
                if run1 > l1:
                    l1 = run1
            else:
                f += 1
                run0 += 1
                run1 = 0
                if run0 > l0:
                    l0 = run0
        key = (l1, l0, f, e)
        counts[key] = counts.get(key, 0) + 1
    return counts
