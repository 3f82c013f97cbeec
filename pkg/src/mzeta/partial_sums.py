"""Formal summation of basis sequences (log n)^l n^-m via Euler-Maclaurin.

Given the expansion of a sequence (v_n), the partial sums u_N = sum_{n<N} v_n
again have an expansion relative to the scale {(log n)^l n^-m}.  This module
produces that expansion exactly: the antiderivative and the Bernoulli
correction terms of (log t)^l t^-m are finite Q-linear combinations of basis
functions, computed symbolically, while the regularised constant (the limit
of u_N minus the divergent part) is kept as a named slot and resolved
numerically on demand.

Slot naming: the constant attached to the basis pair (l, m) is "em(l,m)", so
identical slots unify across series.  Known closed forms (Euler's gamma for
em(0,1), log(2 pi)/2 for em(1,0), zeta values and derivatives for m >= 2) are
available as metadata through :func:`known_closed_form`; they are never
substituted silently.
"""

from __future__ import annotations

import math
import threading
import zlib
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import mpmath
from mpmath import mp

from .config import max_n
from .errors import InsufficientPrecisionError, PrecisionUnreachableError
from .exact import bernoulli
from .scale import COEFF_ZERO, INF, Coeff, ScalePoly, ScaleSeries

_A_MAX = 40

# A "cell map" represents a finite Q-combination sum c * (log t)^l t^-m
# as {(m, l): c}; it is the working form for derivatives/antiderivatives.
CellMap = dict[tuple[int, int], Fraction]


@dataclass(frozen=True)
class BasisTerm:
    """One comparison-scale element (log n)^l n^-m."""

    l: int
    m: int

    def __post_init__(self) -> None:
        if self.l < 0:
            raise ValueError("log power must be >= 0")


@dataclass(frozen=True)
class SummationResult:
    """Expansion of a partial-sum sequence: exact divergent part plus slot.

    ``divergent`` holds every formally known cell, including rational (and
    resolvable-atom) content in the constant cell; ``constant_slot`` names
    the remaining limit constant.  ``exact`` marks results whose slot is
    provably zero (the partial sums equal the divergent part identically).
    """

    divergent: ScaleSeries
    constant_slot: str | None
    exact: bool

    def constant_coeff(self) -> Coeff:
        """Formal constant: known cell content plus the slot atom."""
        c = self.divergent.cell(0, 0)
        if self.constant_slot is not None and not self.exact:
            c = c + Coeff.atom(self.constant_slot)
        return c


def _derivative(cells: CellMap) -> CellMap:
    out: CellMap = {}
    for (m, l), c in cells.items():
        if l:
            key = (m + 1, l - 1)
            out[key] = out.get(key, Fraction(0)) + l * c
        key = (m + 1, l)
        out[key] = out.get(key, Fraction(0)) - m * c
    return {k: v for k, v in out.items() if v}


def _antiderivative(l: int, m: int) -> CellMap:
    # integral of (log t)^l t^-m dt, constant of integration zero
    if m == 1:
        return {(0, l + 1): Fraction(1, l + 1)}
    out: CellMap = {}
    coeff = Fraction(1)
    for lam in range(l, -1, -1):
        # by parts: I_l = (log t)^l t^(1-m)/(1-m) - l/(1-m) I_(l-1)
        coeff = coeff / (1 - m)
        out[(m - 1, lam)] = coeff
        coeff = -coeff * lam
    return out


def _cells_to_series(cells: CellMap, precision: float) -> ScaleSeries:
    polys: dict[int, list[Coeff]] = {}
    for (m, l), c in cells.items():
        if m > precision:
            continue
        row = polys.setdefault(m, [])
        while len(row) <= l:
            row.append(COEFF_ZERO)
        row[l] = row[l] + Coeff.rational(c)
    return ScaleSeries.make(
        {m: ScalePoly.make(row) for m, row in polys.items()}, precision
    )


def em_slot_name(l: int, m: int) -> str:
    return f"em({l},{m})"


_sum_basis_cache: dict[tuple[int, int, float], SummationResult] = {}
_cache_lock = threading.Lock()


def sum_basis(term: BasisTerm, precision: int) -> SummationResult:
    """Expansion of sum_{1<=n<N} (log n)^l n^-m to X-precision ``precision``.

    Divergent part: antiderivative - f/2 + sum_j B_2j/(2j)! f^(2j-1),
    truncated at the requested order.  For l = 0, m <= 0 the sum is an exact
    polynomial in N; its full rational constant is folded into the divergent
    part and the slot is exactly zero.
    """
    l, m = term.l, term.m
    key = (l, m, precision)
    with _cache_lock:
        hit = _sum_basis_cache.get(key)
    if hit is not None:
        return hit

    f: CellMap = {(m, l): Fraction(1)}
    cells: CellMap = dict(_antiderivative(l, m))
    for k, c in f.items():
        cells[k] = cells.get(k, Fraction(0)) - c / 2

    h = _derivative(f)  # f^(2j-1), starting at j = 1
    j = 1
    terminated = False
    while True:
        if not h:
            terminated = True
            break
        if m + 2 * j - 1 > precision:
            break
        b = bernoulli(2 * j) / factorial(2 * j)
        for k, c in h.items():
            cells[k] = cells.get(k, Fraction(0)) + b * c
        h = _derivative(_derivative(h))
        j += 1

    exact = False
    if l == 0 and m <= 0:
        # The sum is a polynomial in N; pin the constant so that
        # divergent(N) == u_N exactly.  At N = 1 the empty sum is 0 and
        # every cell evaluates to its coefficient.
        adjust = -sum(cells.values())
        if adjust:
            cells[(0, 0)] = cells.get((0, 0), Fraction(0)) + adjust
        exact = True
    elif terminated:
        exact = True

    series = _cells_to_series(cells, INF if exact and precision >= 0 else precision)
    result = SummationResult(series, em_slot_name(l, m), exact)
    with _cache_lock:
        _sum_basis_cache[key] = result
    return result


def sum_sequence(
    v: ScaleSeries, precision: int, slot: str | None = None
) -> SummationResult:
    """Expansion of the partial sums of a sequence with expansion ``v``.

    Linear extension of :func:`sum_basis` over every known cell of ``v``;
    the slot of each basis sum enters the constant cell weighted by the
    cell coefficient.  The input must be known at least to X-precision
    ``precision + 1``; whatever ``v`` leaves unaccounted sums to a
    convergent contribution, named by the result's own ``constant_slot``.
    """
    if v.precision < precision + 1:
        raise InsufficientPrecisionError(
            f"summation to precision {precision} needs input precision "
            f">= {precision + 1}, got {v.precision}"
        )
    total = ScaleSeries.zero(INF)
    const = COEFF_ZERO
    bases_exact = True
    for m, poly in v.terms:
        for l, coeff in enumerate(poly.coeffs):
            if coeff.is_zero:
                continue
            base = sum_basis(BasisTerm(l, m), precision)
            total = total + base.divergent.scale(coeff)
            if not base.exact:
                bases_exact = False
                const = const + coeff * Coeff.atom(base.constant_slot)
    if not const.is_zero:
        total = total + ScaleSeries.monomial(const, precision=INF)
    # an exact input leaves no unaccounted remainder: the slot exists only
    # for the convergent contribution of the o(n^-(A+1)) part of v
    needs_slot = v.precision != INF
    exact = not needs_slot and bases_exact
    if not exact:
        total = total.truncated(precision)
    if needs_slot and slot is None:
        cells = ",".join(
            f"{m}:{l}:{c}" for m, p in v.terms for l, c in enumerate(p.coeffs)
        )
        digest = zlib.crc32(f"{cells}@{precision}".encode())
        slot = f"rem({digest:08x})"
    return SummationResult(total, slot if needs_slot else None, exact)


# -- numeric resolution ----------------------------------------------------

_constant_cache: dict[str, tuple[int, mpmath.mpf]] = {}
_constant_lock = threading.Lock()


def basis_partial_sum(l: int, m: int, n_top: int) -> mpmath.mpf:
    """Numeric sum_{1<=n<N} (log n)^l n^-m at the ambient precision."""
    total = mp.zero
    for n in range(1, n_top):
        term = mp.power(n, -m)
        if l:
            term *= mp.ln(n) ** l
        total += term
    return total


def _parse_em(slot: str) -> tuple[int, int]:
    if not (slot.startswith("em(") and slot.endswith(")")):
        raise ValueError(f"not an em slot: {slot}")
    l_s, m_s = slot[3:-1].split(",")
    return int(l_s), int(m_s)


def schedule_n(digits: int) -> int:
    """Deterministic summation limit for a requested digit count."""
    return min(max_n(), 2 ** max(6, math.ceil((digits + 4) / 3)))


def abs_cell_magnitude(series: ScaleSeries, order: int, n: int) -> float:
    poly = series.poly_at(order)
    if poly.is_zero:
        return 0.0
    log_n = math.log(n)
    mag = 0.0
    for l, c in enumerate(poly.coeffs):
        weight = sum(abs(float(q)) for _, q in c.terms)
        mag += weight * log_n**l
    return mag * float(n) ** (-order)


def resolve_constant(slot: str, digits: int) -> mpmath.mpf:
    """Numeric value of an "em(l,m)" slot to about ``digits`` digits.

    Computed as the limit of u_N - divergent(N) with the divergent part
    extended by correction terms until the first omitted term at the
    scheduled N falls below 10^-(digits+2); the result is validated by
    doubling N once.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    with _constant_lock:
        hit = _constant_cache.get(slot)
    if hit is not None and hit[0] >= digits:
        return hit[1]
    l, m = _parse_em(slot)
    if sum_basis(BasisTerm(l, m), max(0, m + 1)).exact:
        value = mp.zero
    else:
        value = _em_by_summation(l, m, digits)
    with _constant_lock:
        prev = _constant_cache.get(slot)
        if prev is None or prev[0] < digits:
            _constant_cache[slot] = (digits, value)
    return value


def correction_precision(series: ScaleSeries, n_top: int, target: float) -> int:
    """Smallest cutoff order whose first omitted nonzero cell is below target.

    Walks the positive orders of ``series`` (shells can be empty by parity,
    so the first *nonzero* omitted cell is the one that matters); returns
    -1 when even the last available cells are above target.
    """
    orders = [q for q, _ in series.terms if q >= 1]
    cutoff = 0
    for q in orders:
        if abs_cell_magnitude(series, q, n_top) < target:
            return cutoff
        cutoff = q
    return -1 if orders else 0


def _em_by_summation(l: int, m: int, digits: int) -> mpmath.mpf:
    target = 10.0 ** (-(digits + 2))
    n_top = schedule_n(digits)
    while True:
        table = sum_basis(BasisTerm(l, m), _A_MAX).divergent
        cutoff = correction_precision(table, n_top, target)
        # -1: even the deepest corrections are large at this N; subtract them
        # all and let the doubling check below decide whether to grow N.
        series = table if cutoff == -1 else table.truncated(cutoff)
        # guard digits against the divergent-part magnitude (cancellation)
        extra = max(0.0, -series.order() * math.log10(n_top)) if series.terms else 0.0
        with mp.workdps(digits + 15 + int(extra)):
            vals = []
            for n in (n_top, 2 * n_top):
                u = basis_partial_sum(l, m, n)
                vals.append(u - series.evaluate(mp.mpf(n), log_n=mp.ln(n)))
            if abs(vals[1] - vals[0]) <= mpmath.mpf(10) ** (-digits):
                return vals[1]
        if 4 * n_top > max_n():
            raise PrecisionUnreachableError(
                f"em({l},{m}) did not stabilise to {digits} digits by N={2*n_top}"
            )
        n_top *= 4


def known_closed_form(slot: str) -> mpmath.mpf | None:
    """Closed-form value of a slot when one is known, else None.

    Metadata only: resolution never substitutes these silently, but tests
    cross-check against them.
    """
    l, m = _parse_em(slot)
    if l == 0 and m <= 0:
        return mp.zero
    if m == 1:
        return +mpmath.stieltjes(l)
    if m >= 2:
        # sum_{n>=1} (log n)^l n^-m = (-1)^l zeta^(l)(m)
        return (-1) ** l * mpmath.zeta(mp.mpf(m), derivative=l)
    if m == 0:
        # regularised value of sum (log n)^l, l >= 1: equals (-1)^l zeta^(l)(0);
        # for l = 1 this is log(2 pi)/2 by the Stirling formula
        return (-1) ** l * mpmath.zeta(mp.zero, derivative=l)
    return None
