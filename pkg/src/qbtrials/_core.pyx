# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled core: same contract as `qbtrials._core_py`, built for speed.

Kernel polynomials are exact integer coefficient lists; enumeration loops
run on C integers.  Coefficient magnitudes are bounded by the number of
composition pairs (respectively sequences), which fits comfortably in 64
bits for every supported instance size.
"""

from cpython.mem cimport PyMem_Free, PyMem_Malloc

from qbtrials._core_py import EnumerationBudgetError

CON_BOUNDED0 = 0
CON_BOUNDED = 1
CON_POSITIVE = 2
CON_ATLEAST = 3


cdef list _trimmed(long long* buf, Py_ssize_t size):
    cdef Py_ssize_t last = 0
    cdef Py_ssize_t i
    for i in range(size):
        if buf[i] != 0:
            last = i
    out = [0] * (last + 1)
    for i in range(last + 1):
        out[i] = buf[i]
    return out


def _compositions(int total, int parts, int lo, int hi):
    """All compositions of total into `parts` parts, each in lo..hi."""
    cdef list out = []
    if parts == 0:
        if total == 0:
            out.append(())
        return out
    _fill_compositions(out, (), total, parts, lo, hi, -1)
    return out


cdef int _fill_compositions(list out, tuple prefix, int total, int parts,
                            int lo, int hi, long long cap) except -1:
    cdef int first, top
    if parts == 0:
        if total == 0:
            out.append(prefix)
            if cap >= 0 and <long long>len(out) > cap:
                raise EnumerationBudgetError(
                    f"more than {cap} compositions on one side of the sum")
        return 0
    top = total - lo * (parts - 1)
    if hi < top:
        top = hi
    for first in range(lo, top + 1):
        _fill_compositions(out, prefix + (first,), total - first, parts - 1,
                           lo, hi, cap)
    return 0


cdef list _constrained(int total, int parts, int code, int param, long long cap):
    cdef list comps, raw
    cdef tuple comp
    comps = []
    if code == 0:
        _fill_compositions(comps, (), total, parts, 0, param, cap)
        return comps
    if code == 1:
        _fill_compositions(comps, (), total, parts, 1, param, cap)
        return comps
    if code == 2:
        _fill_compositions(comps, (), total, parts, 1, total, cap)
        return comps
    if code == 3:
        raw = []
        _fill_compositions(raw, (), total, parts, 1, total, cap)
        for comp in raw:
            if len(comp) > 0 and max(comp) >= param:
                comps.append(comp)
        return comps
    raise ValueError(f"unknown constraint code {code}")


def kernel_direct_poly(bint first_success, int nx, int ny, int m, int r,
                       int xcode, int xparam, int ycode, int yparam,
                       long long budget=2_000_000):
    """Kernel polynomial coefficients by brute-force enumeration."""
    if m < 0 or r < 0 or nx < 0 or ny < 0:
        return [0]
    if first_success:
        if nx != ny and nx != ny + 1:
            return [0]
    else:
        if ny != nx and ny != nx + 1:
            return [0]
    if nx == 0 and ny == 0:
        if m == 0 and r == 0 and xcode != 3 and ycode != 3:
            return [1]
        return [0]

    cdef list xcomps = _constrained(m, nx, xcode, xparam, budget)
    if not xcomps:
        return [0]
    cdef list ycomps = _constrained(r, ny, ycode, yparam, budget)
    if not ycomps:
        return [0]
    if (<long long>len(xcomps)) * (<long long>len(ycomps)) > budget:
        raise EnumerationBudgetError(
            f"{len(xcomps)}x{len(ycomps)} composition pairs exceed budget {budget}")

    if ny >= 64:
        raise EnumerationBudgetError(f"too many failure runs for direct enumeration: {ny}")
    cdef Py_ssize_t size = m * r + 1
    cdef long long* coeffs = <long long*>PyMem_Malloc(size * sizeof(long long))
    if coeffs == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(size):
        coeffs[i] = 0

    cdef int[64] prefix
    cdef int off = 0 if first_success else 1
    cdef tuple ys, xs
    cdef int j, w
    try:
        for ys in ycomps:
            prefix[0] = 0
            for j in range(ny):
                prefix[j + 1] = prefix[j] + <int>ys[j]
            for xs in xcomps:
                w = 0
                for j in range(nx):
                    w += prefix[j + off] * <int>xs[j]
                coeffs[w] += 1
        return _trimmed(coeffs, size)
    finally:
        PyMem_Free(coeffs)


cdef void _shift_add_list(list dst, list src, Py_ssize_t shift):
    cdef Py_ssize_t need = shift + len(src)
    while len(dst) < need:
        dst.append(0)
    cdef Py_ssize_t i
    for i in range(len(src)):
        dst[shift + i] = dst[shift + i] + src[i]


def kernel_eval_poly(bint first_success, int nx, int ny, int m, int r,
                     int xcode, int xparam, int ycode, int yparam, dict memo):
    """Kernel polynomial by the peel-the-last-run recurrence, memoized."""
    cdef tuple key = (first_success, nx, ny, m, r, xcode, xparam, ycode, yparam)
    cached = memo.get(key)
    if cached is not None:
        return cached

    cdef list result
    cdef list out
    cdef list child
    cdef int last  # 1 = success run, 0 = failure run
    cdef int lo, hi, a, b, code

    if m < 0 or r < 0 or nx < 0 or ny < 0:
        result = [0]
    elif nx == 0 and ny == 0:
        if m == 0 and r == 0 and xcode != 3 and ycode != 3:
            result = [1]
        else:
            result = [0]
    else:
        last = -1
        if first_success:
            if nx == ny + 1:
                last = 1
            elif nx == ny and ny > 0:
                last = 0
        else:
            if ny == nx + 1:
                last = 0
            elif ny == nx and nx > 0:
                last = 1
        if last == -1:
            result = [0]
        elif last == 1:
            lo = 0 if xcode == 0 else 1
            hi = xparam if xcode <= 1 else m
            if hi > m:
                hi = m
            out = [0]
            for a in range(lo, hi + 1):
                code = xcode
                if code == 3 and a >= xparam:
                    code = 2
                child = kernel_eval_poly(first_success, nx - 1, ny, m - a, r,
                                         code, xparam, ycode, yparam, memo)
                if len(child) > 1 or child[0] != 0:
                    _shift_add_list(out, child, r * a)
            while len(out) > 1 and out[len(out) - 1] == 0:
                out.pop()
            result = out
        else:
            lo = 0 if ycode == 0 else 1
            hi = yparam if ycode <= 1 else r
            if hi > r:
                hi = r
            out = [0]
            for b in range(lo, hi + 1):
                code = ycode
                if code == 3 and b >= yparam:
                    code = 2
                child = kernel_eval_poly(first_success, nx, ny - 1, m, r - b,
                                         xcode, xparam, code, yparam, memo)
                if len(child) > 1 or child[0] != 0:
                    _shift_add_list(out, child, 0)
            while len(out) > 1 and out[len(out) - 1] == 0:
                out.pop()
            result = out

    memo[key] = result
    return result


def cell_poly_u(int r, int s, int t, int k, dict memo):
    """Bounded-cell kernel polynomial with an exact count of full cells."""
    if s < 0 or t < 0 or r < 1 or t > r or s > r * k:
        return [0]
    cdef tuple key = (r, s, t, k)
    cached = memo.get(key)
    if cached is not None:
        return cached
    cdef list result, child
    cdef int a, top
    if r == 1:
        if (s == k and t == 1) or (s < k and t == 0):
            result = [1]
        else:
            result = [0]
    else:
        result = [0]
        top = k if k < s else s
        for a in range(0, top + 1):
            child = cell_poly_u(r - 1, s - a, t - (1 if a == k else 0), k, memo)
            if len(child) > 1 or child[0] != 0:
                _shift_add_list(result, child, a * (r - 1))
        while len(result) > 1 and result[len(result) - 1] == 0:
            result.pop()
    memo[key] = result
    return result


def cell_poly_v(int r, int s, int k, dict memo):
    """Bounded-cell kernel polynomial without the full-cell count."""
    if s < 0 or r < 1 or s > r * k:
        return [0]
    cdef tuple key = (r, s, k)
    cached = memo.get(key)
    if cached is not None:
        return cached
    cdef list result, child
    cdef int a, top
    if r == 1:
        result = [1]
    else:
        result = [0]
        top = k if k < s else s
        for a in range(0, top + 1):
            child = cell_poly_v(r - 1, s - a, k, memo)
            if len(child) > 1 or child[0] != 0:
                _shift_add_list(result, child, a * (r - 1))
        while len(result) > 1 and result[len(result) - 1] == 0:
            result.pop()
    memo[key] = result
    return result


def waiting_stop_counts(int n, int target, bint s_freq, int k1, bint f_freq,
                        int k2, bint later):
    """{(failures, weight): count} over length-n sequences stopping at `target`."""
    cdef dict counts = {}
    cdef unsigned long long mask, top = 1ULL << n
    cdef int f, e, run1, run0, c1, c0, hit1, hit0, i, stop
    cdef tuple key
    for mask in range(top):
        f = 0; e = 0
        run1 = 0; run0 = 0
        c1 = 0; c0 = 0
        hit1 = 0; hit0 = 0
        for i in range(n):
            if (mask >> i) & 1:
                e += f
                c1 += 1
                run1 += 1
                run0 = 0
                if hit1 == 0 and ((c1 == k1) if s_freq else (run1 == k1)):
                    hit1 = i + 1
            else:
                f += 1
                c0 += 1
                run0 += 1
                run1 = 0
                if hit0 == 0 and ((c0 == k2) if f_freq else (run0 == k2)):
                    hit0 = i + 1
        if later:
            stop = max(hit1, hit0) if (hit1 and hit0) else 0
        else:
            if hit1 and hit0:
                stop = min(hit1, hit0)
            elif hit1:
                stop = hit1
            else:
                stop = hit0
        if stop == target:
            key = (f, e)
            if key in counts:
                counts[key] = counts[key] + 1
            else:
                counts[key] = 1
    return counts


def longest_joint_counts(int n):
    """{(longest 1-run, longest 0-run, failures, weight): count} over length n."""
    cdef dict counts = {}
    cdef unsigned long long mask, top = 1ULL << n
    cdef int f, e, run1, run0, l1, l0, i
    cdef tuple key
    for mask in range(top):
        f = 0; e = 0
        run1 = 0; run0 = 0
        l1 = 0; l0 = 0
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
        if key in counts:
            counts[key] = counts[key] + 1
        else:
            counts[key] = 1
    return counts
