"""Independent brute-force references used only by the tests."""

from fractions import Fraction


def brute_force_discrepancy(points) -> Fraction:
    """Extreme discrepancy from its definition, for small samples.

    The supremum over ``[a, b)`` is approached with each endpoint at 0, 1, a
    sample point, or just past a sample point; each configuration is
    evaluated with its limiting length.
    """
    pts = [Fraction(x) for x in points]
    N = len(pts)
    if N == 0:
        raise ValueError("empty sample")
    # (position, include points equal to position?)
    lefts = [(Fraction(0), True)] + [(y, s) for y in set(pts) for s in (True, False)]
    rights = [(Fraction(1), False)] + [(y, s) for y in set(pts) for s in (True, False)]
    best = Fraction(0)
    for a, a_incl in lefts:
        for b, b_incl in rights:
            if b < a or (b == a and not (a_incl and b_incl)):
                continue
            count = sum(
                1 for y in pts
                if (y > a or (y == a and a_incl)) and (y < b or (y == b and b_incl))
            )
            best = max(best, abs(Fraction(count, N) - (b - a)))
    return best

