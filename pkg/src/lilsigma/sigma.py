"""The variance functional sigma^2_{p/q}(a) and its exact local pieces.

    sigma^2(a) = V(a, a) + 2 * sum_{k>=1} V(<p^k a>, <q^k a>) / (pq)^k

Three ways of looking at it live here:

* truncated sums with a rigorous geometric tail (:func:`sigma2_partial`,
  :func:`sigma2_enclosure`);
* the exact value at rational points, whose orbits are eventually periodic
  (:func:`sigma2_exact_periodic`, :func:`sigma2_exact`);
* exact quadratics on breakpoint-free intervals (:func:`local_quadratic`),
  which is what the certifier bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import RatioPair, V, as_rational, mult_order


class BreakpointStraddle(ValueError):
    """An interval's interior contains a breakpoint at the requested depth."""


class NotPeriodic(ValueError):
    """The orbit of the point under p and q is not purely periodic."""


@dataclass(frozen=True, order=True)
class Interval:
    """Half-open interval ``[lo, hi)`` with exact endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if not self.lo < self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi})")

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x < self.hi

    def interior_contains(self, x) -> bool:
        return self.lo < x < self.hi

    def clamp(self, x: Fraction) -> Fraction:
        """Clamp into the closure ``[lo, hi]``."""
        return min(max(x, self.lo), self.hi)

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi})"


@dataclass(frozen=True)
class SigmaEnclosure:
    lower: Fraction
    upper: Fraction
    depth: int

    def contains(self, x) -> bool:
        return self.lower <= x <= self.upper

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower


@dataclass(frozen=True)
class AffinePart:
    """Floors of ``p^n x`` and ``q^n x`` and their crossover sign on an interval.

    On the interval ``<p^n x> = p^n x - a`` and ``<q^n x> = q^n x - b``;
    ``sign`` is the sign of ``<p^n x> - <q^n x>`` in the interior.
    """

    n: int
    a: int
    b: int
    sign: int


@dataclass(frozen=True)
class LocalQuadratic:
    """``A x^2 + B x + C`` equal to the depth-``depth`` partial sum on ``interval``.

    ``tail`` bounds the omitted part of the value, ``deriv_tail`` the omitted
    part of the derivative (``None`` when ``q == 1``, where it diverges).
    """

    A: Fraction
    B: Fraction
    C: Fraction
    interval: Interval
    depth: int
    tail: Fraction
    deriv_tail: Fraction | None

    def __call__(self, x) -> Fraction:
        x = as_rational(x)
        return (self.A * x + self.B) * x + self.C

    def derivative(self, x) -> Fraction:
        return 2 * self.A * as_rational(x) + self.B

    @property
    def axis(self) -> Fraction:
        return -self.B / (2 * self.A)

    def sup_point(self) -> Fraction:
        """Maximizer over the closed interval; valid because ``A < 0``."""
        return self.interval.clamp(self.axis)


def _weighted_kernel_sum(pq: RatioPair, num: int, den: int, start: int, stop: int) -> Fraction:
    """``sum_{k=start}^{stop-1} V(<p^k a>, <q^k a>) / (pq)^k`` for ``a = num/den``.

    Works on integer residues mod ``den``; ``V`` of two such residues is an
    integer over ``den^2``.
    """
    if stop <= start:
        return Fraction(0)
    p, q = pq.p, pq.q
    m = p * q
    rp = num * pow(p, start, den) % den
    rq = num * pow(q, start, den) % den
    acc = 0
    for _ in range(start, stop):
        acc = acc * m + min(rp, rq) * den - rp * rq
        rp = rp * p % den
        rq = rq * q % den
    # acc = sum_k W_k m^(stop-1-k)
    return Fraction(acc, den * den * m ** (stop - 1))


def _check_point(a) -> Fraction:
    a = as_rational(a)
    if not 0 <= a < 1:
        raise ValueError(f"a={a} must lie in [0, 1)")
    return a


def sigma2_partial(pq: RatioPair, a, N: int) -> Fraction:
    """Truncation of the series after ``N`` terms, exact."""
    a = _check_point(a)
    if N < 0:
        raise ValueError("N must be >= 0")
    num, den = a.numerator, a.denominator
    return V(a, a) + 2 * _weighted_kernel_sum(pq, num, den, 1, N + 1)


def tail_bound(pq: RatioPair, N: int) -> Fraction:
    """``1 / (2 (pq - 1) (pq)^N)``: bound on the value omitted beyond depth ``N``."""
    m = pq.product
    return Fraction(1, 2 * (m - 1) * m**N)


def deriv_tail_bound(pq: RatioPair, N: int) -> Fraction:
    """``2 / ((q - 1) q^N)``: a.e. bound on the derivative omitted beyond depth ``N``."""
    if pq.q == 1:
        raise ValueError("derivative tail diverges for q = 1")
    return Fraction(2, (pq.q - 1) * pq.q**N)


def orbit_period(pq: RatioPair, den: int) -> int:
    """Joint period of ``n -> (p^n, q^n) mod den`` when both are units."""
    tp = mult_order(pq.p, den)
    tq = mult_order(pq.q, den)
    return tp * tq // math.gcd(tp, tq)


def sigma2_exact_periodic(pq: RatioPair, c, *, period: int | None = None) -> Fraction:
    """Exact ``sigma^2(c)`` when ``denom(c)`` is coprime to ``p`` and ``q``.

    With ``T`` the joint period, the tail of the series is geometric:
    ``sum_{n>=1} = (pq)^T / ((pq)^T - 1) * sum_{n=1}^{T}``. Any positive
    multiple of ``T`` may be passed as ``period``.
    """
    c = _check_point(c)
    if c == 0:
        return Fraction(0)
    num, den = c.numerator, c.denominator
    if math.gcd(pq.p, den) != 1 or math.gcd(pq.q, den) != 1:
        raise NotPeriodic(f"denominator {den} shares a factor with {pq}")
    T = orbit_period(pq, den)
    if period is not None:
        if period < 1 or period % T:
            raise ValueError(f"period {period} is not a multiple of {T}")
        T = period
    mT = pq.product**T
    block = _weighted_kernel_sum(pq, num, den, 1, T + 1)
    return V(c, c) + 2 * Fraction(mT, mT - 1) * block


def _split_denominator(den: int, base: int) -> tuple[int, int]:
    """Return ``(s, rest)``: ``den = d_base * rest`` where ``d_base | base^s``
    and ``rest`` is coprime to ``base``; ``s`` is minimal."""
    rest = den
    g = math.gcd(rest, base)
    while g > 1:
        rest //= g
        g = math.gcd(rest, base)
    d_base = den // rest
    s = 0
    power = 1
    while power % d_base:
        power *= base
        s += 1
    return s, rest


def sigma2_exact(pq: RatioPair, a) -> Fraction:
    """Exact ``sigma^2(a)`` for any rational ``a`` in ``[0, 1)``.

    Orbits are eventually periodic: sum the pre-period directly, then the
    periodic block with its geometric factor.
    """
    a = _check_point(a)
    if a == 0:
        return Fraction(0)
    num, den = a.numerator, a.denominator
    sp, rest_p = _split_denominator(den, pq.p)
    sq, rest_q = _split_denominator(den, pq.q)
    tp = mult_order(pq.p, rest_p) if rest_p > 1 else 1
    tq = mult_order(pq.q, rest_q) if rest_q > 1 else 1
    T = tp * tq // math.gcd(tp, tq)
    s = max(1, sp, sq)
    mT = pq.product**T
    head = _weighted_kernel_sum(pq, num, den, 1, s)
    block = _weighted_kernel_sum(pq, num, den, s, s + T)
    return V(a, a) + 2 * (head + Fraction(mT, mT - 1) * block)


def sigma2_enclosure(pq: RatioPair, a, N: int) -> SigmaEnclosure:
    partial = sigma2_partial(pq, a, N)
    tail = tail_bound(pq, N)
    return SigmaEnclosure(partial - tail, partial + tail, N)


def _interior_multiple(m: int, J: Interval) -> bool:
    """Whether some ``k/m`` lies strictly inside ``J``."""
    k = math.floor(m * J.lo) + 1
    return k < m * J.hi


def affine_parts(pq: RatioPair, n: int, J: Interval) -> AffinePart:
    if n < 1:
        raise ValueError("n must be >= 1")
    P, Q = pq.p**n, pq.q**n
    for m in (P, Q, P - Q):
        if _interior_multiple(m, J):
            raise BreakpointStraddle(f"{J} contains a multiple of 1/{m} (depth {n})")
    mid = J.midpoint
    a = math.floor(P * mid)
    b = math.floor(Q * mid)
    gap = (P - Q) * mid - (a - b)
    return AffinePart(n, a, b, 1 if gap > 0 else -1)


def local_quadratic(pq: RatioPair, N: int, J: Interval) -> LocalQuadratic:
    """Expand the depth-``N`` partial sum on ``J`` into ``A x^2 + B x + C``.

    Term ``n`` is ``2/(pq)^n`` times (smaller fractional part) * (1 - larger).
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    if not (0 <= J.lo and J.hi <= 1):
        raise ValueError(f"{J} is not inside [0, 1)")
    A, B, C = Fraction(-1), Fraction(1), Fraction(0)
    m = pq.product
    for n in range(1, N + 1):
        part = affine_parts(pq, n, J)
        P, Q = pq.p**n, pq.q**n
        if part.sign < 0:
            # (P x - a)((1 + b) - Q x)
            b2, b1, b0 = -P * Q, P * (1 + part.b) + part.a * Q, -part.a * (1 + part.b)
        else:
            # (Q x - b)((1 + a) - P x)
            b2, b1, b0 = -P * Q, Q * (1 + part.a) + part.b * P, -part.b * (1 + part.a)
        w = Fraction(2, m**n)
        A += w * b2
        B += w * b1
        C += w * b0
    dtail = deriv_tail_bound(pq, N) if pq.q > 1 else None
    return LocalQuadratic(A, B, C, J, N, tail_bound(pq, N), dtail)
