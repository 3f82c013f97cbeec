"""Numeric multiple zeta values: truncations, tails, continuation.

The strict truncation zeta(s)_{<N} and the weak (star) one are exact finite
nested sums.  Tails are evaluated through their complete asymptotic
expansions: for the strict tail over n1 > ... > nr > N,

    zeta(s)_{>N}  ~  sum_k  B_{k1}..B_{kr} / (k1!..kr!)
                     * (s1)_{k1-1} (s1+s2+k1-1)_{k2-1} ...
                       (s1+..+sr+k1+..+k_{r-1}-r+1)_{kr-1}
                     * N^(r-|s|-|k|),

with (x)_{-1} = 1/(x-1) and star Bernoulli numbers B*_k = (-1)^k B_k for the
weak tail over n1 >= ... >= nr >= N.  Vanishing odd Bernoulli numbers remove
exactly the factors that would otherwise put spurious poles off the true
polar set.

Analytic continuation splits the full sum by how many indices reach N:

    zeta(s) = zeta(s)_{<N} + sum_{j=1..r} zeta(s_1..s_j)_{>N-1} * zeta(s_{j+1}..s_r)_{<N},

so only truncations and strict tails are ever needed, and no cancellation
between continued values occurs away from the polar set.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import factorial
from typing import Iterator, Sequence

import mpmath
from mpmath import mp

from .config import max_n, to_mpc
from .errors import (
    PolarPointError,
    PoleProximityError,
    PrecisionUnreachableError,
    TailNotConvergingError,
)
from .exact import bernoulli

POLE_TOL = 1e-12
DEPTH_CAP = 6
K_CAP = 40

ComplexLike = complex  # ints, floats, Fractions, mpf, mpc all accepted


def working_dps(digits: int) -> int:
    return max(digits + 10, 20)


# -- polar set ---------------------------------------------------------------


def _is_exact(x) -> bool:
    return isinstance(x, int) or (isinstance(x, Fraction))


def polar_description(s: Sequence) -> str | None:
    """Exact or numeric test against the singular set of the continuation.

    Simple polar hyperplanes: s1 = 1; s1+s2 = 2, 1, 0, -2, -4, ...;
    s1+..+si = i - n (n >= 0) for 3 <= i <= depth.
    """
    r = len(s)
    if r == 0:
        return None
    if all(_is_exact(x) for x in s):
        prefix = Fraction(0)
        for i, x in enumerate(s, start=1):
            prefix += Fraction(x)
            if i == 1 and prefix == 1:
                return "polar hyperplane s1=1"
            if i == 2 and (prefix in (2, 1, 0) or (prefix <= -2 and prefix.denominator == 1 and prefix % 2 == 0)):
                return f"polar hyperplane s1+s2={prefix}"
            if i >= 3 and prefix.denominator == 1 and prefix <= i:
                return f"polar hyperplane s1+..+s{i}={prefix}"
        return None
    prefix_c = mp.mpc(0)
    for i, x in enumerate(s, start=1):
        prefix_c += to_mpc(x)
        if i == 1:
            if abs(prefix_c - 1) < POLE_TOL:
                return "polar hyperplane s1=1"
        elif i == 2:
            near = round(float(prefix_c.real))
            candidates = {2, 1, 0} | ({near} if near <= -2 and near % 2 == 0 else set())
            if any(abs(prefix_c - c) < POLE_TOL for c in candidates):
                return "polar hyperplane on s1+s2"
        else:
            near = round(float(prefix_c.real))
            if near <= i and abs(prefix_c - near) < POLE_TOL:
                return f"polar hyperplane on s1+..+s{i}"
    return None


# -- truncations -------------------------------------------------------------


def zeta_truncated(s: Sequence, n_top: int, variant: str = "strict") -> mpmath.mpc:
    """Exact nested sum with n1 < n_top (strict or weak inner inequalities).

    Running-sum recursion, O(n_top * depth) multiprecision operations.
    """
    _check_variant(variant)
    r = len(s)
    if n_top < 1:
        raise ValueError("N must be >= 1")
    if r == 0:
        return mp.mpc(1)
    star = variant == "star"
    ss = [to_mpc(x) for x in s]
    prev: list | None = None
    acc = mp.mpc(0)
    for j in range(r - 1, -1, -1):
        acc = mp.mpc(0)
        cum = [mp.mpc(0)] * n_top if j > 0 else None
        for n in range(1, n_top):
            t = mp.power(n, -ss[j])
            if prev is not None:
                t *= prev[n]
            if cum is not None:
                if star:
                    acc += t
                    cum[n] = acc
                else:
                    cum[n] = acc
                    acc += t
            else:
                acc += t
        prev = cum
    return acc


# -- tails -------------------------------------------------------------------


def _k_tuples(depth: int, total_cap: int) -> Iterator[tuple[int, ...]]:
    if depth == 0:
        yield ()
        return
    for head in range(total_cap + 1):
        for tail in _k_tuples(depth - 1, total_cap - head):
            yield (head,) + tail


def _chain_product(ss: list, ks: Sequence[int]) -> mpmath.mpc:
    """(s1)_{k1-1} (s1+s2+k1-1)_{k2-1} ... with reciprocal-marker pole checks."""
    out = mp.mpc(1)
    pref_s = mp.mpc(0)
    pref_k = 0
    for j, k in enumerate(ks):
        pref_s += ss[j]
        x = pref_s + pref_k - j
        if k == 0:
            if abs(x - 1) < POLE_TOL:
                raise PoleProximityError(
                    f"reciprocal factor 1/(s1+..+s{j+1}+{pref_k}-{j+1}) is singular"
                )
            out /= x - 1
        else:
            for t in range(k - 1):
                out *= x + t
        pref_k += k
    return out


def zeta_tail(
    s: Sequence, n_from: int, k_order: int, variant: str = "strict"
) -> tuple[mpmath.mpc, mpmath.mpf]:
    """Tail expansion value and first-omitted-shell estimate.

    Strict: sum over n1 > ... > nr > N; star: n1 >= ... >= nr >= N.
    Sums the expansion over multi-indices |k| <= k_order; the returned
    estimate is the absolute-sum of the first omitted shell.
    """
    _check_variant(variant)
    if n_from < 2:
        raise ValueError("tail expansions require N >= 2")
    r = len(s)
    if r == 0:
        return mp.mpc(1), mp.zero
    star = variant == "star"
    ss = [to_mpc(x) for x in s]
    total_s = mp.fsum(x.real for x in ss) + 1j * mp.fsum(x.imag for x in ss)
    shells = [mp.mpc(0)] * (k_order + 3)
    shells_abs = [mp.zero] * (k_order + 3)
    for ks in _k_tuples(r, k_order + 2):
        coeff = Fraction(1)
        skip = False
        for k in ks:
            b = bernoulli(k, star=star)
            if b == 0:
                skip = True
                break
            coeff *= b / factorial(k)
        if skip:
            continue
        term = _chain_product(ss, ks)
        term *= mp.mpf(coeff.numerator) / coeff.denominator
        term *= mp.power(n_from, r - total_s - sum(ks))
        shells[sum(ks)] += term
        shells_abs[sum(ks)] += abs(term)
    estimate = max(shells_abs[k_order + 1], shells_abs[k_order + 2])
    if k_order >= 4:
        last = max(shells_abs[k_order - 1], shells_abs[k_order])
        older = max(shells_abs[k_order - 3], shells_abs[k_order - 2])
        if estimate > last > older:
            raise TailNotConvergingError(
                f"tail shells are growing at N={n_from}, K={k_order}"
            )
    value = mp.mpc(0)
    for sh in shells[: k_order + 1]:
        value += sh
    return value, estimate


def _tail_auto(
    s: Sequence, n_from: int, digits: int, variant: str
) -> tuple[mpmath.mpc, mpmath.mpf]:
    """Grow the tail order until the first omitted shell is below tolerance."""
    target = mp.mpf(10) ** (-(digits + 2))
    k_order = 4
    best: tuple[mpmath.mpc, mpmath.mpf] | None = None
    while k_order <= K_CAP:
        value, est = zeta_tail(s, n_from, k_order, variant)
        if est < target:
            return value, est
        if best is None or est < best[1]:
            best = (value, est)
        k_order += 2
    raise TailNotConvergingError(
        f"tail at N={n_from} stalls at estimate {mpmath.nstr(best[1])}"
        if best
        else f"tail at N={n_from} does not converge"
    )


# -- continued values --------------------------------------------------------

_value_cache: dict[tuple, tuple[mpmath.mpc, mpmath.mpf]] = {}
_value_lock = threading.Lock()


def _check_variant(variant: str) -> None:
    if variant not in ("strict", "star"):
        raise ValueError(f"unknown variant: {variant}")


def _merge_patterns(r: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """Consecutive-block partitions of (0..r-1), as (start, stop) pairs."""
    if r == 0:
        yield ()
        return
    for first_len in range(1, r + 1):
        for rest in _merge_patterns(r - first_len):
            shifted = tuple((a + first_len, b + first_len) for a, b in rest)
            yield ((0, first_len),) + shifted


def zeta_value_with_error(
    s: Sequence, digits: int = 12, variant: str = "strict"
) -> tuple[mpmath.mpc, mpmath.mpf]:
    """Continued (star) multiple zeta value with a tail error estimate."""
    _check_variant(variant)
    r = len(s)
    if r > DEPTH_CAP:
        raise ValueError(f"depth {r} exceeds cap {DEPTH_CAP}")
    if r == 0:
        return mp.mpc(1), mp.zero
    key = (tuple(str(x) for x in s), digits, variant)
    with _value_lock:
        hit = _value_cache.get(key)
    if hit is not None:
        return hit

    if variant == "star" and r == 1:
        return zeta_value_with_error(s, digits, "strict")
    if variant == "star":
        # inclusion of equalities = sum of strict values over all
        # coordinate merges into consecutive blocks (2^(r-1) terms)
        value = mp.mpc(0)
        err = mp.zero
        with mp.workdps(working_dps(digits)):
            for pattern in _merge_patterns(r):
                merged = [
                    sum(Fraction(x) if _is_exact(x) else to_mpc(x) for x in s[a:b])
                    for a, b in pattern
                ]
                v, e = zeta_value_with_error(merged, digits + 2, "strict")
                value += v
                err += e
        result = (value, err)
    else:
        desc = polar_description(s)
        if desc is not None:
            raise PolarPointError(desc)
        result = _strict_value(s, digits)
    with _value_lock:
        _value_cache[key] = result
    return result


def zeta_value(s: Sequence, digits: int = 12, variant: str = "strict") -> mpmath.mpc:
    return zeta_value_with_error(s, digits, variant)[0]


def _strict_value(s: Sequence, digits: int) -> tuple[mpmath.mpc, mpmath.mpf]:
    r = len(s)
    target = mp.mpf(10) ** (-(digits + 2))
    n_level, k_order = 16, 4
    cap = max_n()
    with mp.workdps(working_dps(digits)):
        while True:
            try:
                total = zeta_truncated(s, n_level)
                err = mp.zero
                for j in range(1, r + 1):
                    tail, est = zeta_tail(s[:j], n_level - 1, k_order)
                    suffix = zeta_truncated(s[j:], n_level)
                    total += tail * suffix
                    err += est * max(mp.one, abs(suffix))
                if err < target:
                    return total, err
            except TailNotConvergingError:
                pass
            if n_level >= cap and k_order >= K_CAP:
                raise PrecisionUnreachableError(
                    f"zeta value at {list(map(str, s))} did not reach "
                    f"{digits} digits within N={n_level}, K={k_order}"
                )
            n_level = min(n_level * 2, cap)
            k_order = min(k_order + 2, K_CAP)


def zeta_tail_via_values(
    s: Sequence, n_from: int, digits: int = 12, variant: str = "strict"
) -> mpmath.mpc:
    """Tail from continued values and truncations, no expansion involved.

    Partitions the full sum by how many indices reach the threshold:
    zeta = sum_j tail(s[:j]) * truncation(s[j:]), then solves for the
    deepest tail recursively.  Serves as an independent route (and the
    fallback when the asymptotic tail cannot reach tolerance at small N).
    """
    _check_variant(variant)
    r = len(s)
    if r == 0:
        return mp.mpc(1)
    if variant == "strict":
        total = zeta_value(s, digits + 4) - zeta_truncated(s, n_from + 1)
        for j in range(1, r):
            total -= zeta_tail_via_values(s[:j], n_from, digits) * zeta_truncated(
                s[j:], n_from + 1
            )
        return total
    total = zeta_value(s, digits + 4, "star") - zeta_truncated(s, n_from, "star")
    for j in range(1, r):
        total -= zeta_tail_via_values(s[:j], n_from, digits, "star") * zeta_truncated(
            s[j:], n_from, "star"
        )
    return total


def zeta_partial_derivative(
    s: Sequence, order: Sequence[int], digits: int = 12
) -> mpmath.mpc:
    """Mixed partial derivative via central differences, Richardson once."""
    order = tuple(int(k) for k in order)
    if len(order) != len(s):
        raise ValueError("order and argument depth mismatch")
    k_total = sum(order)
    if k_total == 0:
        return zeta_value(s, digits)
    inner_digits = digits + 2 * k_total + 6
    with mp.workdps(working_dps(inner_digits)):
        h = mp.mpf(10) ** (-mp.mpf(digits) / 3)
        center = [to_mpc(x) for x in s]

        def fn(pt):
            return zeta_value(pt, inner_digits)

        d_h = _nested_central(fn, center, order, h)
        d_h2 = _nested_central(fn, center, order, h / 2)
        return (4 * d_h2 - d_h) / 3


def _nested_central(fn, center: list, order: tuple[int, ...], h) -> mpmath.mpc:
    idx = next((i for i, k in enumerate(order) if k > 0), None)
    if idx is None:
        return fn(center)
    lower = tuple(k - (1 if i == idx else 0) for i, k in enumerate(order))

    def shifted(delta):
        pt = list(center)
        pt[idx] = pt[idx] + delta
        return _nested_central(fn, pt, lower, h)

    return (shifted(h) - shifted(-h)) / (2 * h)


# -- regularised continuation assembled from tails ----------------------------


def correction_tuples(prefix: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Tuples (k_1..k_i), k_j >= -1, with sum k_j = -sum(prefix)."""
    i = len(prefix)
    total = -sum(prefix)
    if total < -i:
        return

    def rec(pos: int, remaining: int) -> Iterator[tuple[int, ...]]:
        if pos == i:
            if remaining == 0:
                yield ()
            return
        slots_after = i - pos - 1
        for k in range(-1, remaining + slots_after + 1):
            for rest in rec(pos + 1, remaining - k):
                yield (k,) + rest

    yield from rec(0, total)


def reg_correction_term(
    point: Sequence[int], s: Sequence, star: bool = False
) -> mpmath.mpc:
    """The Bernoulli/Pochhammer correction attached to a full-depth prefix.

    For the depth-i prefix (a_1..a_i) of an expansion point this is

        sum_{k_1..k_i >= -1, sum(k_j+a_j)=0}  prod_j Bst_{k_j+1}/(k_j+1)!
            * (s_i)_{k_i} (s_i+s_{i-1}+k_i)_{k_{i-1}} ...

    with star Bernoulli numbers for the plain variant and plain Bernoulli
    numbers for the star variant.
    """
    i = len(point)
    ss = [to_mpc(x) for x in s]
    total = mp.mpc(0)
    for ks in correction_tuples(point):
        coeff = Fraction(1)
        skip = False
        for k in ks:
            b = bernoulli(k + 1, star=not star)
            if b == 0:
                skip = True
                break
            coeff *= b / factorial(k + 1)
        if skip:
            continue
        chain = mp.mpc(1)
        pref_s = mp.mpc(0)
        pref_k = 0
        # factors run from j = i down to 1
        for j in range(i, 0, -1):
            pref_s += ss[j - 1]
            x = pref_s + pref_k
            k = ks[j - 1]
            if k == -1:
                if abs(x - 1) < POLE_TOL:
                    raise PoleProximityError(
                        f"regularised correction factor at prefix depth {j} is singular"
                    )
                chain /= x - 1
            else:
                for t in range(k):
                    chain *= x + t
            pref_k += k
        total += mp.mpf(coeff.numerator) / coeff.denominator * chain
    return total


def reg_via_tails(
    point: Sequence[int], s: Sequence, digits: int = 12, star: bool = False
) -> mpmath.mpc:
    """Regularised multiple zeta value at s near an integer point, assembled
    from continued values of lower depth and exact correction terms."""
    point = tuple(int(a) for a in point)
    r = len(point)
    if len(s) != r:
        raise ValueError("argument depth mismatch")
    variant = "star" if star else "strict"
    with mp.workdps(working_dps(digits)):
        total = mp.mpc(0)
        for i in range(r + 1):
            corr = reg_correction_term(point[:i], s[:i], star=star)
            if corr == 0:
                continue
            suffix = zeta_value(list(s[i:]), digits + 4, variant)
            total += (-1) ** i * suffix * corr
        return total
