"""Constrained-composition kernels over run arrangements of binary sequences.

A kernel sums q**w over pairs of integer compositions (success-run lengths
x_1..x_nx, failure-run lengths y_1..y_ny) laid out alternately; the weight w
of each success run is the total failure mass preceding it.  One generic
evaluator covers every named family: the families differ only in arrangement
shape and in the per-part constraints.

Values are polynomials in q with nonnegative integer coefficients, so the
cache is q-independent; evaluation at rational q is exact.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from ._backend import core
from ._core_py import (
    CON_ATLEAST,
    CON_BOUNDED,
    CON_BOUNDED0,
    CON_POSITIVE,
    EnumerationBudgetError,
)
from .qcalc import Scalar

__all__ = [
    "ArrangementShape",
    "Bounded",
    "BoundedWithZero",
    "EnumerationBudgetError",
    "KernelSpec",
    "KernelValueCache",
    "Positive",
    "SomeAtLeast",
    "kernel_direct",
    "kernel_eval",
    "named_kernel",
    "longest_cell_kernel_U",
    "longest_cell_kernel_V",
    "FAMILY_NAMES",
]


class ArrangementShape(Enum):
    """First and last run symbol of the arrangement (F = failure, S = success)."""

    FF = "FF"
    FS = "FS"
    SF = "SF"
    SS = "SS"

    @property
    def starts_with_success(self) -> bool:
        return self.value[0] == "S"

    def x_runs(self, y_runs: int) -> int:
        """Success-run count implied by the failure-run count."""
        if self is ArrangementShape.FF:
            return y_runs - 1
        if self is ArrangementShape.SS:
            return y_runs + 1
        return y_runs


@dataclass(frozen=True)
class Bounded:
    """Each part in 1..hi."""

    hi: int


@dataclass(frozen=True)
class BoundedWithZero:
    """Each part in 0..hi."""

    hi: int


@dataclass(frozen=True)
class Positive:
    """Each part >= 1."""


@dataclass(frozen=True)
class SomeAtLeast:
    """Each part >= 1 and at least one part >= k."""

    k: int


PartConstraint = Bounded | BoundedWithZero | Positive | SomeAtLeast


def _constraint_code(con: PartConstraint) -> tuple[int, int]:
    if isinstance(con, BoundedWithZero):
        return CON_BOUNDED0, con.hi
    if isinstance(con, Bounded):
        return CON_BOUNDED, con.hi
    if isinstance(con, Positive):
        return CON_POSITIVE, 0
    if isinstance(con, SomeAtLeast):
        return CON_ATLEAST, con.k
    raise TypeError(f"not a part constraint: {con!r}")


@dataclass(frozen=True)
class KernelSpec:
    """One constrained composition sum.

    `y_runs` is the number of failure runs; the success-run count follows
    from the shape (FF has one more failure run, SS one more success run,
    FS/SF equal counts).
    """

    shape: ArrangementShape
    y_runs: int
    x_total: int
    y_total: int
    x_constraint: PartConstraint
    y_constraint: PartConstraint

    @property
    def x_runs(self) -> int:
        return self.shape.x_runs(self.y_runs)

    def _key(self):
        return (
            self.shape.value,
            self.y_runs,
            self.x_total,
            self.y_total,
            _constraint_code(self.x_constraint),
            _constraint_code(self.y_constraint),
        )


class KernelValueCache:
    """Memo for kernel values; safe to share across threads.

    Holds q-independent coefficient polynomials plus evaluated scalars
    keyed by (spec, q).  Lookups never change returned values.
    """

    def __init__(self) -> None:
        self._dp_memo: dict = {}
        self._values: dict = {}
        self._lock = threading.Lock()

    def poly(self, spec: KernelSpec) -> list[int]:
        xcode, xparam = _constraint_code(spec.x_constraint)
        ycode, yparam = _constraint_code(spec.y_constraint)
        with self._lock:
            return core.kernel_eval_poly(
                spec.shape.starts_with_success,
                spec.x_runs,
                spec.y_runs,
                spec.x_total,
                spec.y_total,
                xcode,
                xparam,
                ycode,
                yparam,
                self._dp_memo,
            )

    def value(self, spec: KernelSpec, q: Scalar) -> Scalar:
        # Fraction(1, 2) and 0.5 are equal and hash alike, so the regime
        # must be part of the key or float results would leak into exact runs
        vkey = (spec._key(), q, isinstance(q, (int, Fraction)))
        with self._lock:
            hit = self._values.get(vkey)
        if hit is not None:
            return hit
        val = _eval_poly_at(self.poly(spec), q)
        with self._lock:
            self._values[vkey] = val
        return val


def _eval_poly_at(coeffs: list[int], q: Scalar) -> Scalar:
    if q == 1:
        total = sum(coeffs)
        return total if isinstance(q, (int, Fraction)) else float(total)
    out: Scalar = 0
    for c in reversed(coeffs):
        out = out * q + c
    return out


_default_cache = KernelValueCache()


def kernel_direct(spec: KernelSpec, q: Scalar, budget: int = 2_000_000) -> Scalar:
    """Kernel value by exhaustive enumeration of the defining sum.

    Intended for small instances; raises EnumerationBudgetError when the
    number of composition pairs exceeds `budget`.  Serves as the oracle
    for `kernel_eval`.
    """
    xcode, xparam = _constraint_code(spec.x_constraint)
    ycode, yparam = _constraint_code(spec.y_constraint)
    poly = core.kernel_direct_poly(
        spec.shape.starts_with_success,
        spec.x_runs,
        spec.y_runs,
        spec.x_total,
        spec.y_total,
        xcode,
        xparam,
        ycode,
        yparam,
        budget,
    )
    return _eval_poly_at(poly, q)


def kernel_eval(spec: KernelSpec, q: Scalar, cache: KernelValueCache | None = None) -> Scalar:
    """Kernel value by the peel-the-last-run recurrence, memoized."""
    if cache is None:
        cache = _default_cache
    return cache.value(spec, q)


# family -> (shape, x-constraint kind, y-constraint kind); constraint kinds:
# "b1" = Bounded(k1 - 1), "b2" = Bounded(k2 - 1), "p" = Positive,
# "g1" = SomeAtLeast(k1), "g2" = SomeAtLeast(k2).
_FF, _FS, _SF, _SS = (
    ArrangementShape.FF,
    ArrangementShape.FS,
    ArrangementShape.SF,
    ArrangementShape.SS,
)

_FAMILIES: dict[str, tuple[ArrangementShape, str, str]] = {
    "A": (_FF, "b1", "b2"),
    "B": (_SF, "b1", "b2"),
    "C": (_SS, "b1", "b2"),
    "D": (_FS, "b1", "b2"),
    "Ebar": (_FF, "b1", "p"),
    "E": (_FF, "b1", "g2"),
    "Fbar": (_SF, "b1", "p"),
    "F": (_SF, "b1", "g2"),
    "Gbar": (_SS, "p", "b2"),
    "G": (_SS, "g1", "b2"),
    "Hbar": (_FS, "p", "b2"),
    "H": (_FS, "g1", "b2"),
    "Ibar": (_SS, "p", "p"),
    "I": (_SS, "p", "g2"),
    "Jbar": (_FS, "p", "p"),
    "J": (_FS, "p", "g2"),
    "Kbar": (_FF, "p", "p"),
    "K": (_FF, "g1", "p"),
    "Lbar": (_SF, "p", "p"),
    "L": (_SF, "g1", "p"),
    "Mbar": (_FS, "b1", "p"),
    "M": (_FS, "b1", "g2"),
    "Nbar": (_SS, "b1", "p"),
    "N": (_SS, "b1", "g2"),
    "Obar": (_FF, "p", "b2"),
    "O": (_FF, "g1", "b2"),
    "Pbar": (_SF, "p", "b2"),
    "P": (_SF, "g1", "b2"),
    "Qbar": (_FS, "g1", "p"),
    "Q": (_FS, "g1", "g2"),
    "Rbar": (_FF, "p", "g2"),
    "R": (_FF, "g1", "g2"),
    "Sbar": (_SS, "g1", "p"),
    "S": (_SS, "g1", "g2"),
    "Tbar": (_SF, "p", "g2"),
    "T": (_SF, "g1", "g2"),
}

FAMILY_NAMES = tuple(_FAMILIES)


def _make_constraint(kind: str, k1: int, k2: int) -> PartConstraint:
    if kind == "b1":
        return Bounded(k1 - 1)
    if kind == "b2":
        return Bounded(k2 - 1)
    if kind == "p":
        return Positive()
    if kind == "g1":
        return SomeAtLeast(k1)
    if kind == "g2":
        return SomeAtLeast(k2)
    raise ValueError(kind)


def family_spec(family: str, m: int, r: int, s: int, k1: int, k2: int) -> KernelSpec:
    """KernelSpec for a named family at its own s-index convention.

    Every family indexes s so that FF shapes have s failure runs and s-1
    success runs, SS shapes s success runs and s-1 failure runs, and
    FS/SF shapes s of each.
    """
    try:
        shape, xkind, ykind = _FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown kernel family {family!r}") from None
    y_runs = s - 1 if shape is _SS else s
    return KernelSpec(
        shape=shape,
        y_runs=y_runs,
        x_total=m,
        y_total=r,
        x_constraint=_make_constraint(xkind, k1, k2),
        y_constraint=_make_constraint(ykind, k1, k2),
    )


def named_kernel(
    family: str,
    m: int,
    r: int,
    s: int,
    k1: int,
    k2: int,
    q: Scalar,
    cache: KernelValueCache | None = None,
) -> Scalar:
    """Value of one of the 36 named composition-kernel families."""
    return kernel_eval(family_spec(family, m, r, s, k1, k2), q, cache)


_cell_lock = threading.Lock()
_cell_u_memo: dict = {}
_cell_v_memo: dict = {}
_cell_values: dict = {}


def longest_cell_kernel_U(r: int, s: int, t: int, k: int, q: Scalar) -> Scalar:
    """Weighted count of ways to fill r cells with s items, cells capped at k,
    exactly t cells full; cell j carries weight (j-1) per item."""
    if r < 1:
        raise ValueError("r must be >= 1")
    vkey = ("u", r, s, t, k, q, isinstance(q, (int, Fraction)))
    with _cell_lock:
        hit = _cell_values.get(vkey)
        if hit is not None:
            return hit
        poly = core.cell_poly_u(r, s, t, k, _cell_u_memo)
        val = _eval_poly_at(poly, q)
        _cell_values[vkey] = val
    return val


def longest_cell_kernel_V(r: int, s: int, k: int, q: Scalar) -> Scalar:
    """Same as the U kernel but without the full-cell count constraint."""
    if r < 1:
        raise ValueError("r must be >= 1")
    vkey = ("v", r, s, k, q, isinstance(q, (int, Fraction)))
    with _cell_lock:
        hit = _cell_values.get(vkey)
        if hit is not None:
            return hit
        poly = core.cell_poly_v(r, s, k, _cell_v_memo)
        val = _eval_poly_at(poly, q)
        _cell_values[vkey] = val
    return val
