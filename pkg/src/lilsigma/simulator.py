"""Exact orbits <(p/q)^k x0> for rational x0 and their discrepancy.

This is a smoke layer: finite N says nothing rigorous about the limsup, but
the normalized discrepancy should sit in a sane band around Sigma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import RatioPair, as_rational

DEFAULT_CAP = 20_000


@dataclass(frozen=True)
class Orbit:
    pq: RatioPair
    x0: Fraction
    points: tuple[Fraction, ...]


@dataclass(frozen=True)
class DiscrepancyReport:
    N: int
    d_star: Fraction
    d_extreme: Fraction
    lil_ratio: float | None = None


def orbit(pq: RatioPair, x0, N: int, *, cap: int = DEFAULT_CAP) -> Orbit:
    """Points ``k = 0..N-1``; point ``k`` has denominator dividing ``q^k den(x0)``."""
    x0 = as_rational(x0)
    if N < 1:
        raise ValueError("N must be >= 1")
    if N > cap:
        raise ValueError(f"N={N} exceeds the orbit cap {cap}")
    num, den = x0.numerator, x0.denominator
    points = []
    top, bottom = num, den
    for _ in range(N):
        points.append(Fraction(top % bottom, bottom))
        top *= pq.p
        bottom *= pq.q
    return Orbit(pq, x0, tuple(points))


def _sorted_unit(points) -> list[Fraction]:
    pts = sorted(as_rational(x) for x in points)
    if not pts:
        raise ValueError("discrepancy of an empty sample")
    if pts[0] < 0 or pts[-1] >= 1:
        raise ValueError("points must lie in [0, 1)")
    return pts


def discrepancy(points) -> DiscrepancyReport:
    """Star and extreme discrepancy of a finite sample, exactly.

    With ``y_1 <= ... <= y_N`` sorted, ``d+ = max(i/N - y_i)`` and
    ``d- = max(y_i - (i-1)/N)``; the extreme discrepancy is ``d+ + d-`` and
    the star discrepancy ``max(d+, d-)``.
    """
    pts = _sorted_unit(points)
    N = len(pts)
    d_plus = max(Fraction(i + 1, N) - y for i, y in enumerate(pts))
    d_minus = max(y - Fraction(i, N) for i, y in enumerate(pts))
    return DiscrepancyReport(N, max(d_plus, d_minus), d_plus + d_minus)


def lil_ratio(N: int, d_extreme) -> float:
    """``N D_N / sqrt(2 N log log N)``."""
    if N < 16:
        raise ValueError("log log N is too small below N = 16")
    return N * float(d_extreme) / math.sqrt(2 * N * math.log(math.log(N)))


def lil_trace(pq: RatioPair, x0, checkpoints) -> list[DiscrepancyReport]:
    """Normalized discrepancy of the orbit prefix at each checkpoint."""
    checkpoints = sorted(set(int(n) for n in checkpoints))
    if not checkpoints:
        return []
    if checkpoints[0] < 16:
        raise ValueError("checkpoints must be >= 16")
    pts = orbit(pq, x0, checkpoints[-1]).points
    out = []
    for n in checkpoints:
        report = discrepancy(pts[:n])
        out.append(DiscrepancyReport(n, report.d_star, report.d_extreme,
                                     lil_ratio(n, report.d_extreme)))
    return out

