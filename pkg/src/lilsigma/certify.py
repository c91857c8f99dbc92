"""Certificates that sup sigma^2 over [0, 1/2) is attained at a given point c.

The interval ``[0, 1/2)`` is tiled by breakpoint-free pieces. On a piece of
depth ``N`` the truncated series is an exact concave quadratic ``Q``, so:

* away from ``c``, ``max Q + tail < sigma^2(c)`` bounds the piece
  (:func:`check_quadbound`);
* next to ``c``, the derivative ``Q'`` is linear and decreasing, so a sign
  check at one endpoint with the derivative tail added shows monotonicity
  (:func:`check_monotone_up`, :func:`check_monotone_down`).

:func:`certify_supremum` searches for such a tiling; :func:`recheck` verifies a
finished certificate from scratch. Symmetry ``sigma^2(a) = sigma^2(1 - a)``
extends the result to ``[0, 1)``.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .exact import RatioPair, as_rational, format_rational, parse_rational
from .sigma import (
    BreakpointStraddle,
    Interval,
    local_quadratic,
    sigma2_exact,
    sigma2_partial,
)

log = logging.getLogger(__name__)

SCHEMA = "lilsigma.certificate/1"
HALF = Fraction(1, 2)


class Kind(str, Enum):
    QUAD_BOUND = "QuadBound"
    MONOTONE_UP = "MonotoneUp"
    MONOTONE_DOWN = "MonotoneDown"


@dataclass(frozen=True)
class Verdict:
    """One proven piece.

    ``margin`` is the strictly positive slack of the check. ``witness`` is the
    evaluation point for a quadratic bound and the signed derivative bound for
    a monotonicity check.
    """

    interval: Interval
    kind: Kind
    depth: int
    margin: Fraction
    witness: Fraction


@dataclass(frozen=True)
class Failure:
    """A piece that could not be proven.

    ``refuted_at`` is set when a point with ``sigma^2 > sigma^2(c)`` was found
    inside the piece, i.e. ``c`` is not the maximizer.
    """

    interval: Interval
    depth: int
    margin: Fraction | None
    refuted_at: Fraction | None = None
    reason: str = ""


class NonNegativeMargin(Exception):
    """A check did not achieve strict inequality; ``attempt`` holds its numbers."""

    def __init__(self, attempt: Verdict, message: str):
        super().__init__(message)
        self.attempt = attempt


@dataclass(frozen=True)
class Certificate:
    pq: RatioPair
    c: Fraction
    sigma2_c: Fraction
    verdicts: tuple[Verdict, ...]
    failures: tuple[Failure, ...] = ()
    options: dict = field(default_factory=dict, compare=False)

    @property
    def status(self) -> str:
        return "Failed" if self.failures else "Proven"

    @property
    def proven(self) -> bool:
        return not self.failures

    def to_json(self) -> str:
        return dump_certificate(self)


# ---------------------------------------------------------------------------
# breakpoints


def _lattices(pq: RatioPair, N: int) -> list[int]:
    """Denominators whose multiples form the depth-<=N breakpoints."""
    ms = {pq.p**N, pq.q**N} if N >= 1 else set()
    for n in range(1, N + 1):
        ms.add(pq.p**n - pq.q**n)
    return sorted(ms)


def breakpoints(pq: RatioPair, N: int, rng: Interval) -> list[Fraction]:
    """All depth-<=N breakpoints lying in the half-open ``rng``, sorted."""
    if N < 1:
        raise ValueError("N must be >= 1")
    found = set()
    for m in _lattices(pq, N):
        k = math.ceil(m * rng.lo)
        while Fraction(k, m) < rng.hi:
            found.add(Fraction(k, m))
            k += 1
    return sorted(found)


def _new_breakpoints(pq: RatioPair, N: int, J: Interval) -> list[Fraction]:
    """Interior breakpoints of ``J`` at depth ``N``, given none at depth ``N - 1``."""
    P, Q = pq.p**N, pq.q**N
    found = set()
    for m in {P, Q, P - Q}:
        k = math.floor(m * J.lo) + 1
        while k < m * J.hi:
            found.add(Fraction(k, m))
            k += 1
    return sorted(found)


def previous_breakpoint(pq: RatioPair, N: int, x: Fraction) -> Fraction:
    """Largest depth-<=N breakpoint strictly below ``x`` (``x > 0``)."""
    return max(Fraction(math.ceil(m * x) - 1, m) for m in _lattices(pq, N))


def next_breakpoint(pq: RatioPair, N: int, x: Fraction) -> Fraction:
    """Smallest depth-<=N breakpoint strictly above ``x``."""
    return min(Fraction(math.floor(m * x) + 1, m) for m in _lattices(pq, N))


def _split(J: Interval, points: list[Fraction]) -> list[Interval]:
    edges = [J.lo, *points, J.hi]
    return [Interval(a, b) for a, b in zip(edges, edges[1:])]


# ---------------------------------------------------------------------------
# single-piece checks


def check_quadbound(pq: RatioPair, c, sigma2_c, J: Interval, N: int) -> Verdict:
    c, sigma2_c = as_rational(c), as_rational(sigma2_c)
    if J.interior_contains(c):
        raise ValueError(f"{c} lies inside {J}; use a monotonicity check there")
    Q = local_quadratic(pq, N, J)
    x = Q.sup_point()
    margin = sigma2_c - (Q(x) + Q.tail)
    verdict = Verdict(J, Kind.QUAD_BOUND, N, margin, x)
    if margin <= 0:
        raise NonNegativeMargin(verdict, f"quadratic bound on {J} at depth {N} misses by {-margin}")
    return verdict


def _deriv_tail(Q) -> Fraction:
    if Q.deriv_tail is None:
        raise ValueError("monotonicity checks need q >= 2")
    return Q.deriv_tail


def check_monotone_up(pq: RatioPair, J: Interval, N: int) -> Verdict:
    """``Q'(hi) - deriv_tail > 0``; ``Q'`` decreases, so this covers all of ``J``."""
    Q = local_quadratic(pq, N, J)
    bound = Q.derivative(J.hi) - _deriv_tail(Q)
    verdict = Verdict(J, Kind.MONOTONE_UP, N, bound, bound)
    if bound <= 0:
        raise NonNegativeMargin(verdict, f"no increase certified on {J} at depth {N}")
    return verdict


def check_monotone_down(pq: RatioPair, J: Interval, N: int, chain_origin=None) -> Verdict:
    """``Q'(lo) + deriv_tail < 0``; the left end is where ``Q'`` is largest."""
    if chain_origin is not None and J.lo != as_rational(chain_origin):
        raise ValueError(f"{J} does not start at the chain position {chain_origin}")
    Q = local_quadratic(pq, N, J)
    bound = Q.derivative(J.lo) + _deriv_tail(Q)
    verdict = Verdict(J, Kind.MONOTONE_DOWN, N, -bound, bound)
    if bound >= 0:
        raise NonNegativeMargin(verdict, f"no decrease certified on {J} at depth {N}")
    return verdict


# ---------------------------------------------------------------------------
# search


def _chain_left(pq, c, depths, max_steps) -> list[Verdict]:
    chain = []
    r = c
    while r > 0 and len(chain) < max_steps:
        for N in depths:
            J = Interval(max(previous_breakpoint(pq, N, r), Fraction(0)), r)
            try:
                chain.append(check_monotone_up(pq, J, N))
                break
            except NonNegativeMargin:
                continue
        else:
            break
        r = chain[-1].interval.lo
    chain.reverse()
    return chain


def _chain_right(pq, c, depths, max_steps) -> list[Verdict]:
    chain = []
    left = c
    while left < HALF and len(chain) < max_steps:
        for N in depths:
            J = Interval(left, min(next_breakpoint(pq, N, left), HALF))
            try:
                chain.append(check_monotone_down(pq, J, N, chain_origin=left))
                break
            except NonNegativeMargin:
                continue
        else:
            break
        left = chain[-1].interval.hi
    return chain


class _Budget:
    def __init__(self, limit: int):
        self.left = limit

    def spend(self) -> bool:
        self.left -= 1
        return self.left >= 0


def _bound_region(pq, c, sigma2_c, region, initial_depth, max_depth, budget):
    """Quadratic bounds over ``region``, subdividing at deeper breakpoints."""
    verdicts: list[Verdict] = []
    failures: list[Failure] = []
    if initial_depth == 0:
        pieces = [region]
    else:
        cuts = [b for b in breakpoints(pq, initial_depth, region) if b > region.lo]
        pieces = _split(region, cuts)
    stack = [(J, initial_depth) for J in reversed(pieces)]
    while stack:
        J, N = stack.pop()
        if not budget.spend():
            failures.append(Failure(J, N, None, reason="piece budget exhausted"))
            continue
        try:
            verdicts.append(check_quadbound(pq, c, sigma2_c, J, N))
            continue
        except NonNegativeMargin as exc:
            attempt = exc.attempt
        if sigma2_partial(pq, attempt.witness, N) > sigma2_c:
            # partial sums are lower bounds: the claimed maximum is beaten here
            failures.append(Failure(J, N, attempt.margin, attempt.witness, "refuted"))
        elif N >= max_depth:
            failures.append(Failure(J, N, attempt.margin, reason="max depth reached"))
        else:
            children = _split(J, _new_breakpoints(pq, N + 1, J))
            stack.extend((K, N + 1) for K in reversed(children))
    return verdicts, failures


def certify_supremum(
    pq: RatioPair,
    c,
    *,
    max_depth: int = 8,
    initial_depth: int = 1,
    sigma2_c=None,
    max_pieces: int = 200_000,
    max_chain: int = 10_000,
) -> Certificate:
    """Try to prove ``sigma^2(x) <= sigma^2(c)`` on ``[0, 1/2)``.

    Never raises on an unprovable claim: the returned certificate has status
    ``Failed`` and lists the pieces that would not close.
    """
    if pq.q == 1:
        raise ValueError("certification needs q >= 2 (derivative tail diverges for q = 1)")
    c = as_rational(c)
    if not 0 < c <= HALF:
        raise ValueError(f"c={c} must lie in (0, 1/2]")
    if not 0 <= initial_depth <= max_depth:
        raise ValueError("need 0 <= initial_depth <= max_depth")
    if sigma2_c is None:
        sigma2_c = sigma2_exact(pq, c)
    sigma2_c = as_rational(sigma2_c)

    depths = range(1, max_depth + 1)
    up = _chain_left(pq, c, depths, max_chain)
    down = _chain_right(pq, c, depths, max_chain)
    left_end = up[0].interval.lo if up else c
    right_end = down[-1].interval.hi if down else c
    log.debug("%s: monotone chains cover [%s, %s)", pq, left_end, right_end)

    budget = _Budget(max_pieces)
    verdicts = [*up, *down]
    failures: list[Failure] = []
    for lo, hi in ((Fraction(0), left_end), (right_end, HALF)):
        if lo < hi:
            vs, fs = _bound_region(pq, c, sigma2_c, Interval(lo, hi), initial_depth, max_depth, budget)
            verdicts += vs
            failures += fs
    verdicts.sort(key=lambda v: v.interval.lo)
    failures.sort(key=lambda f: f.interval.lo)
    options = {"max_depth": max_depth, "initial_depth": initial_depth}
    return Certificate(pq, c, sigma2_c, tuple(verdicts), tuple(failures), options)


# ---------------------------------------------------------------------------
# independent re-verification


def _recheck_verdict(pq: RatioPair, cert: Certificate, v: Verdict) -> str | None:
    try:
        if v.kind is Kind.QUAD_BOUND:
            redo = check_quadbound(pq, cert.c, cert.sigma2_c, v.interval, v.depth)
        elif v.kind is Kind.MONOTONE_UP:
            redo = check_monotone_up(pq, v.interval, v.depth)
        else:
            redo = check_monotone_down(pq, v.interval, v.depth)
    except (NonNegativeMargin, BreakpointStraddle, ValueError) as exc:
        return f"{v.kind.value} on {v.interval}: {exc}"
    if redo != v:
        return f"{v.kind.value} on {v.interval}: recorded numbers differ from recomputation"
    return None


def find_defect(cert: Certificate, *, check_value: bool = True) -> str | None:
    """First reason the certificate does not prove its claim, or ``None``."""
    if cert.failures:
        return f"certificate has {len(cert.failures)} unproven pieces"
    if check_value and sigma2_exact(cert.pq, cert.c) != cert.sigma2_c:
        return "recorded sigma^2(c) is not the exact value"
    vs = cert.verdicts
    if not vs:
        return "no verdicts"
    if vs[0].interval.lo != 0 or vs[-1].interval.hi != HALF:
        return "verdicts do not span [0, 1/2)"
    for a, b in zip(vs, vs[1:]):
        if a.interval.hi != b.interval.lo:
            return f"gap or overlap between {a.interval} and {b.interval}"
    # shape: QuadBound* MonotoneUp* MonotoneDown* QuadBound*, meeting at c
    order = {Kind.QUAD_BOUND: 0, Kind.MONOTONE_UP: 1, Kind.MONOTONE_DOWN: 2}
    phase = 0
    for v in vs:
        rank = order[v.kind]
        if v.kind is Kind.QUAD_BOUND:
            rank = 0 if phase == 0 else 3
        if rank < phase:
            return f"{v.kind.value} on {v.interval} is out of order"
        phase = rank
    ups = [v for v in vs if v.kind is Kind.MONOTONE_UP]
    downs = [v for v in vs if v.kind is Kind.MONOTONE_DOWN]
    if ups and ups[-1].interval.hi != cert.c:
        return "increasing chain does not end at c"
    if downs and downs[0].interval.lo != cert.c:
        return "decreasing chain does not start at c"
    if cert.c < HALF and not any(v.interval.lo == cert.c for v in vs):
        return "c is not a piece boundary"
    for v in vs:
        problem = _recheck_verdict(cert.pq, cert, v)
        if problem:
            return problem
    return None


def recheck(cert: Certificate, *, check_value: bool = True) -> bool:
    problem = find_defect(cert, check_value=check_value)
    if problem:
        log.info("recheck failed: %s", problem)
        return False
    return True


# ---------------------------------------------------------------------------
# serialization


def _verdict_to_dict(v: Verdict) -> dict:
    return {
        "lo": format_rational(v.interval.lo),
        "hi": format_rational(v.interval.hi),
        "kind": v.kind.value,
        "depth": v.depth,
        "margin": format_rational(v.margin),
        "witness": format_rational(v.witness),
    }


def _failure_to_dict(f: Failure) -> dict:
    return {
        "lo": format_rational(f.interval.lo),
        "hi": format_rational(f.interval.hi),
        "depth": f.depth,
        "margin": None if f.margin is None else format_rational(f.margin),
        "refuted_at": None if f.refuted_at is None else format_rational(f.refuted_at),
        "reason": f.reason,
    }


def certificate_to_dict(cert: Certificate) -> dict:
    return {
        "schema": SCHEMA,
        "p": cert.pq.p,
        "q": cert.pq.q,
        "c": format_rational(cert.c),
        "sigma2_c": format_rational(cert.sigma2_c),
        "status": cert.status,
        "options": dict(cert.options),
        "verdicts": [_verdict_to_dict(v) for v in cert.verdicts],
        "failures": [_failure_to_dict(f) for f in cert.failures],
    }


def certificate_from_dict(doc: dict) -> Certificate:
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unsupported certificate schema {doc.get('schema')!r}")
    verdicts = tuple(
        Verdict(
            Interval(parse_rational(d["lo"]), parse_rational(d["hi"])),
            Kind(d["kind"]),
            int(d["depth"]),
            parse_rational(d["margin"]),
            parse_rational(d["witness"]),
        )
        for d in doc["verdicts"]
    )
    failures = tuple(
        Failure(
            Interval(parse_rational(d["lo"]), parse_rational(d["hi"])),
            int(d["depth"]),
            None if d["margin"] is None else parse_rational(d["margin"]),
            None if d["refuted_at"] is None else parse_rational(d["refuted_at"]),
            d.get("reason", ""),
        )
        for d in doc.get("failures", [])
    )
    cert = Certificate(
        RatioPair(int(doc["p"]), int(doc["q"])),
        parse_rational(doc["c"]),
        parse_rational(doc["sigma2_c"]),
        verdicts,
        failures,
        dict(doc.get("options", {})),
    )
    if doc.get("status") != cert.status:
        raise ValueError("status field disagrees with the failure list")
    return cert


def dump_certificate(cert: Certificate) -> str:
    return json.dumps(certificate_to_dict(cert), indent=2) + "\n"


def load_certificate(text: str) -> Certificate:
    return certificate_from_dict(json.loads(text))
