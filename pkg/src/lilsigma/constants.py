"""The discrepancy constant Sigma_theta, stored exactly as Sigma^2.

The dispatcher :func:`sigma_constant` goes through the known closed forms
first, then the table of ratios below the large-ratio threshold, and only
then falls back to searching maximizer candidates ``n / (p^k - q^k)`` and
certifying the best one.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import numpy as np
from sympy import primerange

from .certify import Certificate, certify_supremum
from .exact import RatioPair, as_rational, parse_rational, signed_order, v
from .sigma import (
    SigmaEnclosure,
    orbit_period,
    sigma2_enclosure,
    sigma2_exact_periodic,
    tail_bound,
)

PREFILTER_DEPTH = 12
PERIOD_CAP = 5000
ENCLOSURE_DEPTH = 60


class Provenance(str, Enum):
    NON_ROOT = "NonRoot"
    ODD_ODD = "OddOdd"
    EVEN_Q1 = "EvenQ1"
    TWO_Q1 = "TwoQ1"
    LARGE_FORMULA = "LargeFormula"
    THEOREM_TABLE = "TheoremTable"
    CERTIFIED = "Certified"
    SEARCH_ONLY = "SearchOnly"


class FormulaNotApplicable(ValueError):
    pass


class UnknownConstant(RuntimeError):
    """Search found a candidate but certification showed it is not the maximum."""

    def __init__(self, message: str, lower_bound: Fraction | None = None,
                 certificate: Certificate | None = None):
        super().__init__(message)
        self.lower_bound = lower_bound
        self.certificate = certificate


@dataclass(frozen=True)
class SigmaConstant:
    sigma_squared: Fraction
    provenance: Provenance
    display: tuple[Fraction, Fraction] | None = None
    maximizer: Fraction | None = None
    type_k: int | None = None
    certificate: Certificate | None = None

    def display_text(self) -> str:
        if self.display is None:
            return ""
        coeff, radicand = self.display
        if radicand == 1:
            return f"{coeff}"
        return f"({coeff})√({radicand})"


@dataclass(frozen=True)
class ThetaSpec:
    """Either a ratio all of whose powers are irrational, or ``theta^r = p/q``."""

    pq: RatioPair | None = None
    r: int = 1

    def __post_init__(self) -> None:
        if self.r < 1:
            raise ValueError("r must be >= 1")

    @classmethod
    def irrational_powers(cls) -> "ThetaSpec":
        return cls(None)

    @classmethod
    def rational_root(cls, p: int, q: int, r: int = 1) -> "ThetaSpec":
        return cls(RatioPair(p, q), r)

    @property
    def is_irrational(self) -> bool:
        return self.pq is None


@dataclass(frozen=True)
class Candidate:
    k: int
    n: int
    c: Fraction
    value: Fraction | SigmaEnclosure

    @property
    def rank_value(self) -> Fraction:
        if isinstance(self.value, SigmaEnclosure):
            return (self.value.lower + self.value.upper) / 2
        return self.value


# ---------------------------------------------------------------------------
# display


def _square_split(n: int, budget: int) -> tuple[int, int]:
    """``n = s^2 * rest`` with ``s^2`` the largest square found by trial
    division with primes below ``budget``."""
    if n == 0:
        return 0, 1
    square, rest = 1, 1
    for prime in primerange(2, budget):
        if prime * prime > n:
            break
        e = 0
        while n % prime == 0:
            n //= prime
            e += 1
        square *= prime ** (e // 2)
        rest *= prime ** (e % 2)
    # leftover cofactor: a square of unfactored primes is still caught
    root = math.isqrt(n)
    if root * root == n:
        return square * root, rest
    return square, rest * n


def factored_display(sigma_squared, budget: int = 10**5) -> tuple[Fraction, Fraction]:
    """``(coeff, radicand)`` with ``coeff^2 * radicand == sigma_squared``."""
    s = as_rational(sigma_squared)
    a, m = _square_split(s.numerator, budget)
    b, n = _square_split(s.denominator, budget)
    coeff, radicand = Fraction(a, b), Fraction(m, n)
    assert coeff**2 * radicand == s
    return coeff, radicand


# ---------------------------------------------------------------------------
# closed forms


def upper_estimate(pq: RatioPair) -> Fraction:
    """``(1/4) (pq + 1) / (pq - 1)``, the bound every Sigma^2 obeys."""
    m = pq.product
    return Fraction(m + 1, 4 * (m - 1))


def large_ratio_threshold(pq: RatioPair) -> bool:
    p, q = pq.p, pq.q
    if p % 2 == 1 and q % 2 == 0:
        return 4 * p >= 9 * q
    if p % 2 == 0 and q % 2 == 1:
        return p >= 4 * q
    return False


def formula_large(pq: RatioPair, *, enforce_threshold: bool = True) -> SigmaConstant:
    """Closed formula for even ``pq`` and large ``p/q`` (a type I maximizer).

    Outside its proven range the expression can still be evaluated with
    ``enforce_threshold=False``; it is then only a candidate value.
    """
    p, q = pq.p, pq.q
    if enforce_threshold and not large_ratio_threshold(pq):
        raise FormulaNotApplicable(f"{pq} is below the range of the large-ratio formula")
    d = p - q
    I = signed_order(q, d) if d >= 2 else 1
    x0 = Fraction(d - 1, 2 * d)
    mI = pq.product**I
    head = Fraction(mI + 1, mI - 1) * v(x0)
    rest = sum((v(q**j * x0) / pq.product**j for j in range(1, I)), Fraction(0))
    s2 = head + Fraction(2 * mI, mI - 1) * rest
    return SigmaConstant(s2, Provenance.LARGE_FORMULA, factored_display(s2), x0, 1)


def formula_oddodd(pq: RatioPair) -> SigmaConstant:
    if pq.p % 2 == 0 or pq.q % 2 == 0:
        raise FormulaNotApplicable(f"{pq}: p and q must both be odd")
    m = pq.product
    s2 = upper_estimate(pq)
    return SigmaConstant(s2, Provenance.ODD_ODD, (Fraction(1, 2), Fraction(m + 1, m - 1)))


def formula_even_q1(p: int) -> SigmaConstant:
    if p % 2 or p < 4:
        raise FormulaNotApplicable(f"p={p}: need an even integer >= 4 (p = 2 has its own value)")
    radicand = Fraction((p + 1) * p * (p - 2), (p - 1) ** 3)
    return SigmaConstant(radicand / 4, Provenance.EVEN_Q1, (Fraction(1, 2), radicand))


SIGMA2_TWO = Fraction(14, 27)  # (sqrt(42) / 9)^2
SIGMA2_MINUS_TWO = Fraction(910, 2401)  # (sqrt(910) / 49)^2; documentation only


# ---------------------------------------------------------------------------
# table of small ratios


@dataclass(frozen=True)
class TableEntry:
    pq: RatioPair
    type_k: int
    c: Fraction
    sigma_squared: Fraction
    coeff: Fraction
    radicand: Fraction


@lru_cache(maxsize=1)
def theorem_table() -> dict[RatioPair, TableEntry]:
    text = resources.files("lilsigma").joinpath("data/theorem_table.json").read_text()
    table = {}
    for row in json.loads(text):
        pq = RatioPair(int(row["p"]), int(row["q"]))
        table[pq] = TableEntry(
            pq,
            int(row["type"]),
            parse_rational(row["c"]),
            parse_rational(row["sigma_squared"]),
            parse_rational(row["coeff"]),
            parse_rational(row["radicand"]),
        )
    return table


# ---------------------------------------------------------------------------
# candidate search


def _prefilter(pq: RatioPair, n: np.ndarray, D: int) -> np.ndarray:
    """Double-precision partial sums at the points ``n / D``.

    Residues are tracked exactly as integers mod ``D``; only the kernel values
    are rounded.
    """
    p, q, m = pq.p, pq.q, float(pq.product)
    dtype = np.int64 if D * max(p, q) < 2**62 else object
    rp = n.astype(dtype) % D
    rq = rp.copy()
    x = rp.astype(float) / D
    total = x * (1 - x)
    weight = 2.0
    for _ in range(PREFILTER_DEPTH):
        rp = rp * p % D
        rq = rq * q % D
        xp = rp.astype(float) / D
        xq = rq.astype(float) / D
        weight /= m
        total = total + weight * (np.minimum(xp, xq) - xp * xq)
    return total


def _evaluate(pq: RatioPair, c: Fraction) -> Fraction | SigmaEnclosure:
    if orbit_period(pq, c.denominator) <= PERIOD_CAP:
        return sigma2_exact_periodic(pq, c)
    return sigma2_enclosure(pq, c, ENCLOSURE_DEPTH)


def search_candidates(pq: RatioPair, max_k: int = 6, top: int = 5) -> list[Candidate]:
    """Best points ``n / (p^k - q^k)`` in ``(0, 1/2]`` for ``k <= max_k``.

    A point appearing at several ``k`` is kept once, under its smallest ``k``.
    Floats only decide which points get evaluated exactly; anything that
    could reach the top ``top`` is evaluated exactly.
    """
    if max_k < 1 or top < 1:
        raise ValueError("need max_k >= 1 and top >= 1")
    seen: dict[Fraction, tuple[int, int]] = {}
    keys: list[tuple[int, int]] = []
    approx: list[np.ndarray] = []
    for k in range(1, max_k + 1):
        D = pq.p**k - pq.q**k
        ns = np.arange(1, D // 2 + 1, dtype=np.int64)
        if ns.size == 0:
            continue
        vals = _prefilter(pq, ns, D)
        keep = []
        for i, n in enumerate(ns.tolist()):
            c = Fraction(n, D)
            if c not in seen:
                seen[c] = (k, n)
                keep.append(i)
        keys.extend((k, int(ns[i])) for i in keep)
        approx.append(vals[keep])
    if not keys:
        return []
    values = np.concatenate(approx)
    order = np.argsort(-values, kind="stable")
    cutoff = values[order[min(top, len(order)) - 1]]
    # partial sums undershoot by at most one tail; 10x that plus rounding slack
    slack = 10 * float(tail_bound(pq, PREFILTER_DEPTH)) + 1e-12
    survivors = [keys[i] for i in order if values[i] >= cutoff - slack]
    found = []
    for k, n in survivors:
        c = Fraction(n, pq.p**k - pq.q**k)
        found.append(Candidate(k, n, c, _evaluate(pq, c)))
    found.sort(key=lambda cand: (-cand.rank_value, cand.k, cand.n))
    return found[:top]


# ---------------------------------------------------------------------------
# dispatch


def sigma_constant(
    spec: ThetaSpec,
    *,
    search_depth: int = 6,
    certify: bool = True,
    max_depth: int = 8,
) -> SigmaConstant:
    """Sigma^2 for ``theta``; the root index ``r`` does not matter."""
    if spec.is_irrational:
        return SigmaConstant(Fraction(1, 4), Provenance.NON_ROOT, (Fraction(1, 2), Fraction(1)))
    pq = spec.pq
    p, q = pq.p, pq.q
    if p % 2 and q % 2:
        return formula_oddodd(pq)
    if q == 1:
        if p == 2:
            return SigmaConstant(SIGMA2_TWO, Provenance.TWO_Q1, (Fraction(1, 9), Fraction(42)),
                                 Fraction(1, 3), 2)
        return formula_even_q1(p)
    if large_ratio_threshold(pq):
        return formula_large(pq)
    entry = theorem_table().get(pq)
    if entry is not None:
        s2 = sigma2_exact_periodic(pq, entry.c)
        if s2 != entry.sigma_squared:
            raise RuntimeError(f"table entry for {pq} disagrees with the exact evaluation")
        return SigmaConstant(s2, Provenance.THEOREM_TABLE, (entry.coeff, entry.radicand),
                             entry.c, entry.type_k)
    return _search_and_certify(pq, search_depth, certify, max_depth)


def _search_and_certify(pq, search_depth, certify, max_depth) -> SigmaConstant:
    best = search_candidates(pq, search_depth, top=1)
    if not best:
        raise UnknownConstant(f"no candidates of type <= {search_depth} for {pq}")
    cand = best[0]
    if isinstance(cand.value, SigmaEnclosure):
        if not certify:
            raise UnknownConstant(f"best candidate {cand.c} for {pq} has no exact value",
                                  cand.value.lower)
        s2 = None
    else:
        s2 = cand.value
    if not certify:
        return SigmaConstant(s2, Provenance.SEARCH_ONLY, factored_display(s2), cand.c, cand.k)
    cert = certify_supremum(pq, cand.c, max_depth=max_depth)
    s2 = cert.sigma2_c
    if cert.proven:
        return SigmaConstant(s2, Provenance.CERTIFIED, factored_display(s2), cand.c, cand.k, cert)
    if any(f.refuted_at is not None for f in cert.failures):
        raise UnknownConstant(
            f"{pq}: sup exceeds every candidate of type <= {search_depth}", s2, cert)
    return SigmaConstant(s2, Provenance.SEARCH_ONLY, factored_display(s2), cand.c, cand.k, cert)
