"""Multiple Stieltjes constants and regularised power series at integer points.

The constant gamma_{k1..kr}^{(a1..ar)} is the regularised value (constant
term of the formal asymptotic expansion) of the truncated nested sum

    u_N = sum_{N > n1 > ... > nr > 0}  log^{k1}(n1)...log^{kr}(nr) / (n1^{a1}...nr^{ar}).

The expansion is built by depth recursion: expand the inner depth-(r-1) sum,
multiply by the basis term (log n)^{k1} n^{-a1}, and push through the
partial-sum operator.  Constants are carried as named atoms
``g(a1,..,ar|k1,..,kr)`` (``gs(...)`` for the star variant); the numeric value
is recovered by extrapolation, u_N minus the resolved divergent part, with
correction terms chosen so the first omitted cell is below tolerance.

Star variant: following the weak-inequality convention, the star constants
regularise sums over N >= n1 >= ... >= nr >= 1; their expansions are obtained
from the strict recursion by adding the N-th term series at each depth.
"""

from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterable, Iterator, Sequence

import mpmath
from mpmath import mp

from .config import max_n, to_mpc
from .errors import PrecisionUnreachableError
from .partial_sums import (
    abs_cell_magnitude,
    resolve_constant,
    schedule_n,
    sum_sequence,
)
from .scale import Coeff, ScaleSeries

IntPoint = tuple[int, ...]
OrderIndex = tuple[int, ...]

DEPTH_HARD_CAP = 8
DEFAULT_DEPTH_CAP = 4
DEFAULT_DEGREE_CAP = 8


def as_point(coords: Iterable[int]) -> IntPoint:
    pt = tuple(int(c) for c in coords)
    if len(pt) > DEPTH_HARD_CAP:
        raise ValueError(f"depth {len(pt)} exceeds the hard cap {DEPTH_HARD_CAP}")
    return pt


def in_U(point: Sequence[int]) -> bool:
    """Strict domain: every prefix sum a_1+..+a_i exceeds i."""
    acc = 0
    for i, a in enumerate(point, start=1):
        acc += a
        if acc <= i:
            return False
    return True


def in_closure(point: Sequence[int]) -> bool:
    """Closure of the domain: every prefix sum is at least its length."""
    acc = 0
    for i, a in enumerate(point, start=1):
        acc += a
        if acc < i:
            return False
    return True


def index_set(point: Sequence[int]) -> tuple[int, ...]:
    """Indices i with a_1+..+a_i = i (always including 0)."""
    out = [0]
    acc = 0
    for i, a in enumerate(point, start=1):
        acc += a
        if acc == i:
            out.append(i)
    return tuple(out)


# -- constant atoms ----------------------------------------------------------


def gamma_atom(point: Sequence[int], order: Sequence[int], star: bool = False) -> str:
    head = "gs" if star else "g"
    return f"{head}({','.join(map(str, point))}|{','.join(map(str, order))})"


def parse_gamma_atom(name: str) -> tuple[IntPoint, OrderIndex, bool]:
    star = name.startswith("gs(")
    body = name[3:-1] if star else name[2:-1]
    pt_s, ks_s = body.split("|")
    pt = tuple(int(x) for x in pt_s.split(",")) if pt_s else ()
    ks = tuple(int(x) for x in ks_s.split(",")) if ks_s else ()
    return pt, ks, star


# -- formal expansions -------------------------------------------------------

_expansion_cache: dict[tuple, ScaleSeries] = {}
_lock = threading.Lock()


def asymptotic_expansion(
    point: Sequence[int], order: Sequence[int], precision: int, star: bool = False
) -> ScaleSeries:
    """Formal expansion of the truncated nested log sum, to X-precision
    ``precision``; the constant cell is the single atom named by
    :func:`gamma_atom`, every other cell is exact apart from lower-depth
    gamma atoms."""
    point, order = as_point(point), tuple(int(k) for k in order)
    if len(point) != len(order):
        raise ValueError("point and order must have equal depth")
    key = (point, order, precision, star)
    with _lock:
        hit = _expansion_cache.get(key)
    if hit is not None:
        return hit

    if not point:
        series = ScaleSeries.one()
    else:
        a1, k1 = point[0], order[0]
        inner = asymptotic_expansion(point[1:], order[1:], precision + 1 - a1, star)
        v = inner.shift(k1, a1)
        series = sum_sequence(v, precision).divergent
        if star:
            # sum over n <= N adds the N-th term itself to the strict sum
            series = series + v.truncated(precision)
        if series.precision >= 0:
            series = series.with_constant_cell(
                Coeff.atom(gamma_atom(point, order, star))
            )
    with _lock:
        _expansion_cache[key] = series
    return series


# -- exact truncated sums ----------------------------------------------------


def truncated_log_sum(
    point: Sequence[int],
    order: Sequence[int],
    n_top: int,
    star: bool = False,
) -> mpmath.mpf:
    """Nested finite sum with n_1 < n_top, at the ambient working precision.

    Strict variant sums over n_top > n1 > ... > nr > 0; the star variant
    relaxes the inner inequalities to n1 >= ... >= nr >= 1 (the top bound
    stays strict, so pass ``n_top = N + 1`` for a weak top bound).

    Depth-recursive running sums, O(n_top * depth) operations.
    """
    point, order = as_point(point), tuple(int(k) for k in order)
    if len(point) != len(order):
        raise ValueError("point and order must have equal depth")
    if n_top < 1:
        raise ValueError("n_top must be >= 1")
    r = len(point)
    if r == 0:
        return mp.one
    logs = [mp.zero] * n_top
    for n in range(2, n_top):
        logs[n] = mp.ln(n)
    prev: list | None = None  # cumulative sums of the inner level
    acc = mp.zero
    for j in range(r - 1, -1, -1):
        a, k = point[j], order[j]
        acc = mp.zero
        cum = [mp.zero] * n_top if j > 0 else None
        for n in range(1, n_top):
            w = mp.power(n, -a)
            if k:
                w *= logs[n] ** k
            t = w * (prev[n] if prev is not None else mp.one)
            if cum is not None:
                if star:
                    acc += t
                    cum[n] = acc  # weak: inner index may equal n
                else:
                    cum[n] = acc  # strict: inner index below n
                    acc += t
            else:
                acc += t
        prev = cum
    return acc


# -- numeric resolution ------------------------------------------------------

_atom_cache: dict[str, tuple[int, mpmath.mpf]] = {}
_atom_lock = threading.Lock()

_A_PROBES = (8, 14, 20)


def resolve_atom(name: str, digits: int) -> mpmath.mpf:
    """Numeric value of a named constant atom ("em(l,m)", "g(..)", "gs(..)")."""
    with _atom_lock:
        hit = _atom_cache.get(name)
    if hit is not None and hit[0] >= digits:
        return hit[1]
    if name.startswith("em("):
        value = resolve_constant(name, digits)
    else:
        point, order, star = parse_gamma_atom(name)
        value = _constant_by_extrapolation(point, order, star, digits)[0]
    with _atom_lock:
        prev = _atom_cache.get(name)
        if prev is None or prev[0] < digits:
            _atom_cache[name] = (digits, value)
    return value


def _resolve_series_atoms(series: ScaleSeries, digits: int) -> dict[str, mpmath.mpf]:
    return {name: resolve_atom(name, digits) for name in series.atoms()}


def _constant_by_extrapolation(
    point: IntPoint, order: OrderIndex, star: bool, digits: int
) -> tuple[mpmath.mpf, mpmath.mpf]:
    """Regularised value and error estimate by accelerated extrapolation."""
    if not point:
        return mp.one, mp.zero
    target = 0.25 * 10.0 ** (-(digits + 2))
    n_top = schedule_n(digits)
    while True:
        series = None
        for probe in _A_PROBES:
            table = asymptotic_expansion(point, order, probe, star)
            cut = _first_small_cutoff(table, n_top, target)
            if cut is not None:
                series = table.truncated(cut).drop_constant_cell()
                break
        if series is not None:
            # guard digits for the cancellation u_N - divergent(N); both the
            # N-growth of negative orders and the log-power growth count
            extra = 0.0
            if series.terms:
                extra = max(0.0, -series.order() * math.log10(n_top))
                max_deg = max(p.degree for _, p in series.terms)
                extra += max(0.0, max_deg * math.log10(math.log(n_top)))
            dps = digits + 15 + int(extra)
            values = _resolve_series_atoms(series, digits + 8 + int(extra))
            with mp.workdps(dps):
                vals = []
                for n in (n_top, 2 * n_top):
                    u = truncated_log_sum(point, order, n + (1 if star else 0), star)
                    vals.append(u - series.evaluate(mp.mpf(n), log_n=mp.ln(n), values=values))
                err = abs(vals[1] - vals[0])
                if err <= mpmath.mpf(10) ** (-digits):
                    return vals[1], err
        if 4 * n_top > max_n():
            raise PrecisionUnreachableError(
                f"{gamma_atom(point, order, star)} did not stabilise to "
                f"{digits} digits by N={2 * n_top}"
            )
        n_top *= 2


def _first_small_cutoff(series: ScaleSeries, n_top: int, target: float) -> int | None:
    orders = [q for q, _ in series.terms if q >= 1]
    cutoff = 0
    for q in orders:
        if abs_cell_magnitude(series, q, n_top) < target:
            return cutoff
        cutoff = q
    return None if orders else 0


# -- public values -----------------------------------------------------------


@dataclass(frozen=True)
class StieltjesValue:
    value: mpmath.mpf
    point: IntPoint
    order: OrderIndex
    star: bool
    est_error: mpmath.mpf
    method: str


def stieltjes_constant(
    point: Sequence[int],
    order: Sequence[int],
    digits: int = 12,
    star: bool = False,
    method: str = "extrapolation",
    depth_cap: int = DEFAULT_DEPTH_CAP,
) -> StieltjesValue:
    """The multiple Stieltjes constant of the given order at an integer point.

    ``method="extrapolation"`` (default) resolves the constant as the limit
    of the truncated sum minus its divergent expansion.
    ``method="closed_form_assembly"`` instead Taylor-extracts the value from
    the meromorphic continuation assembled out of tails and Bernoulli
    corrections; agreement of the two routes is part of the test suite, not
    an internal assumption.
    """
    point, order = as_point(point), tuple(int(k) for k in order)
    if len(point) > depth_cap:
        raise ValueError(f"depth {len(point)} exceeds depth cap {depth_cap}")
    if method == "extrapolation":
        value, err = _constant_by_extrapolation(point, order, star, digits)
    elif method == "closed_form_assembly":
        value, err = _constant_by_assembly(point, order, star, digits)
    else:
        raise ValueError(f"unknown method: {method}")
    return StieltjesValue(value, point, order, star, err, method)


def _constant_by_assembly(
    point: IntPoint, order: OrderIndex, star: bool, digits: int
) -> tuple[mpmath.mpf, mpmath.mpf]:
    # Deferred import: the numeric continuation layer is optional here.
    from . import mzv

    if not point:
        return mp.one, mp.zero
    k_total = sum(order)
    with mp.workdps(digits + 15 + 4 * k_total):
        if k_total == 0:
            value, err = _reg_center_value(point, star, digits)
            return value, err
        # mixed partial of the regularised function at the center via
        # central differences, Richardson-extrapolated once
        h = mp.mpf(10) ** (-max(2, digits // (2 * (k_total + 1))))

        def fn(s):
            return mzv.reg_via_tails(point, s, digits + 6, star=star)

        center = [mp.mpf(a) for a in point]
        d_h = _central_mixed(fn, center, order, h)
        d_h2 = _central_mixed(fn, center, order, h / 2)
        deriv = (4 * d_h2 - d_h) / 3
        value = (-1) ** k_total * deriv
        err = max(abs(d_h2 - d_h) / 3, abs(value) * mp.mpf(10) ** (-digits))
        return value, err


def _reg_center_value(point: IntPoint, star: bool, digits: int) -> tuple[mpmath.mpf, mpmath.mpf]:
    from . import mzv

    direction = [mp.mpf(1) / (j + 2) for j in range(len(point))]
    base = mp.mpf("0.008")
    samples = []
    for i in range(4):
        eps = base / 2**i
        s = [mp.mpf(a) + eps * d for a, d in zip(point, direction)]
        samples.append((eps, mzv.reg_via_tails(point, s, digits + 8, star=star)))
    # Richardson: fit polynomial in eps through the samples, value at 0
    value = _neville_at_zero(samples)
    crude = _neville_at_zero(samples[:-1])
    return value, abs(value - crude)


def _neville_at_zero(samples: list[tuple]) -> mpmath.mpf:
    xs = [s[0] for s in samples]
    ys = [s[1] for s in samples]
    n = len(xs)
    for level in range(1, n):
        for i in range(n - level):
            ys[i] = (xs[i + level] * ys[i] - xs[i] * ys[i + 1]) / (xs[i + level] - xs[i])
    return ys[0]


def _central_mixed(fn, center: list, order: OrderIndex, h) -> mpmath.mpf:
    """Mixed partial derivative by nested central differences."""
    idx = next((i for i, k in enumerate(order) if k > 0), None)
    if idx is None:
        return fn(center)
    lower = tuple(k - (1 if i == idx else 0) for i, k in enumerate(order))

    def shifted(delta):
        pt = list(center)
        pt[idx] = pt[idx] + delta
        return _central_mixed(fn, pt, lower, h)

    return (shifted(h) - shifted(-h)) / (2 * h)


# -- regularised power series -------------------------------------------------


def iter_orders(depth: int, degree: int) -> Iterator[OrderIndex]:
    """All order tuples of the given depth with total degree <= degree."""
    if depth == 0:
        yield ()
        return
    for head in range(degree + 1):
        for tail in iter_orders(depth - 1, degree - head):
            yield (head,) + tail


@dataclass(frozen=True)
class RegSeries:
    """Power-series data of the regularised multiple zeta function.

    ``coefficients[k]`` is the Taylor coefficient at the center, i.e.
    (-1)^{|k|} / (k1!..kr!) * gamma_k; populated for |k| <= degree.
    """

    center: IntPoint
    degree: int
    star: bool
    digits: int
    coefficients: dict[OrderIndex, mpmath.mpf] = field(repr=False)

    @property
    def depth(self) -> int:
        return len(self.center)


@dataclass(frozen=True)
class EvalResult:
    value: mpmath.mpc
    remainder_estimate: mpmath.mpf


_reg_cache: dict[tuple, RegSeries] = {}


def reg_series(
    center: Sequence[int],
    degree: int,
    digits: int = 12,
    star: bool = False,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> RegSeries:
    center = as_point(center)
    if degree < 0:
        raise ValueError("degree must be >= 0")
    if degree > degree_cap:
        raise ValueError(f"degree {degree} exceeds degree cap {degree_cap}")
    key = (center, degree, digits, star)
    with _lock:
        hit = _reg_cache.get(key)
    if hit is not None:
        return hit
    coeffs: dict[OrderIndex, mpmath.mpf] = {}
    for ks in iter_orders(len(center), degree):
        gamma = stieltjes_constant(center, ks, digits, star, depth_cap=depth_cap)
        weight = Fraction((-1) ** sum(ks), math.prod(factorial(k) for k in ks))
        coeffs[ks] = mp.mpf(weight.numerator) / weight.denominator * gamma.value
    series = RegSeries(center, degree, star, digits, coeffs)
    with _lock:
        _reg_cache[key] = series
    return series


def eval_reg(series: RegSeries, s: Sequence) -> EvalResult:
    """Evaluate the regularised power series at s (near the center).

    Partial sum to the stored degree, with the last total-degree shell as a
    crude remainder estimate; a divergence warning is emitted when the shell
    magnitudes are not decreasing.
    """
    if len(s) != series.depth:
        raise ValueError("argument depth mismatch")
    offsets = [to_mpc(si) - ai for si, ai in zip(s, series.center)]
    shells = [mp.zero * 1j for _ in range(series.degree + 1)]
    for ks, coeff in series.coefficients.items():
        term = coeff * mp.one
        for off, k in zip(offsets, ks):
            if k:
                term *= off**k
        shells[sum(ks)] += term
    value = mp.fsum(sh.real for sh in shells) + 1j * mp.fsum(sh.imag for sh in shells)
    last = abs(shells[-1]) if series.degree >= 0 else mp.zero
    if series.degree >= 2:
        prev = abs(shells[-2])
        if last > prev and last > mp.mpf(10) ** (-series.digits):
            warnings.warn(
                f"regularised series at {series.center}: last shell is not "
                f"decreasing ({mpmath.nstr(prev)} -> {mpmath.nstr(last)}); "
                "offset may be outside the radius of convergence",
                RuntimeWarning,
                stacklevel=2,
            )
    return EvalResult(value, last)
