import dataclasses
import json
from fractions import Fraction as F

import pytest

from golden import MAXIMIZERS, PARTITION_4_3, PARTITION_13_6, SIGMA2
from lilsigma.certify import (
    Kind,
    NonNegativeMargin,
    breakpoints,
    certificate_from_dict,
    certificate_to_dict,
    certify_supremum,
    check_monotone_down,
    check_monotone_up,
    check_quadbound,
    dump_certificate,
    find_defect,
    load_certificate,
    recheck,
)
from lilsigma.exact import RatioPair
from lilsigma.sigma import Interval, sigma2_exact, sigma2_exact_periodic

HALF = F(1, 2)


def run_partition(pq, c, s2, rows):
    out = []
    for lo, hi, depth, kind, _ in rows:
        J = Interval(F(lo), F(hi))
        if kind == "quad":
            out.append(-check_quadbound(pq, c, s2, J, depth).margin)
        elif kind == "up":
            out.append(check_monotone_up(pq, J, depth).witness)
        else:
            out.append(check_monotone_down(pq, J, depth, chain_origin=c).witness)
    return out


@pytest.mark.parametrize("pq,rows", [((13, 6), PARTITION_13_6), ((4, 3), PARTITION_4_3)])
def test_printed_partition(pq, rows):
    c = F(MAXIMIZERS[pq][1])
    got = run_partition(RatioPair(*pq), c, F(SIGMA2[pq]), rows)
    assert got == [F(r[4]) for r in rows]


def test_quadbound_witness_is_clamped_axis():
    pq = RatioPair(13, 6)
    v = check_quadbound(pq, F(3, 7), F(948, 3773), Interval(F(6, 13), HALF), 1)
    assert v.witness == F(19, 39)
    v = check_quadbound(pq, F(3, 7), F(948, 3773), Interval(0, F(5, 13)), 0)
    assert v.witness == F(5, 13)


@pytest.mark.parametrize("pq,J,N,expected", [
    ((12, 7), ("9858/20736", "8717/18335"), 4, "21942577/76070594880"),
    ((8, 5), ("1603/3471", "13690/29643"), 5, "63122927/303544320000"),
])
def test_monotone_up_examples(pq, J, N, expected):
    v = check_monotone_up(RatioPair(*pq), Interval(F(J[0]), F(J[1])), N)
    assert v.kind is Kind.MONOTONE_UP and v.margin == F(expected)


@pytest.mark.parametrize("pq,J,N,expected", [
    ((12, 5), ("55/119", "741/1603"), 3, "-451/102000"),
    ((17, 8), ("101/225", "130/289"), 2, "-54167/2913120"),
])
def test_monotone_down_examples(pq, J, N, expected):
    v = check_monotone_down(RatioPair(*pq), Interval(F(J[0]), F(J[1])), N, chain_origin=F(J[0]))
    assert v.witness == F(expected) and v.margin == -F(expected)


def test_checks_reject_without_strict_margin():
    pq = RatioPair(13, 6)
    with pytest.raises(NonNegativeMargin) as info:
        check_quadbound(pq, F(3, 7), F(948, 3773), Interval(F(2, 5), F(3, 7)), 0)
    assert info.value.attempt.margin <= 0
    with pytest.raises(NonNegativeMargin):
        check_monotone_up(pq, Interval(F(3, 7), F(6, 13)), 1)
    with pytest.raises(ValueError):
        check_monotone_down(pq, Interval(F(3, 7), F(6, 13)), 1, chain_origin=F(2, 5))
    with pytest.raises(ValueError):
        check_quadbound(pq, F(3, 7), F(948, 3773), Interval(F(2, 5), F(6, 13)), 1)


def test_breakpoint_examples():
    b = breakpoints(RatioPair(12, 7), 1, Interval(0, HALF))
    assert {F(3, 7), F(5, 12), F(2, 5)} <= set(b)
    b = breakpoints(RatioPair(13, 6), 1, Interval(0, HALF))
    assert {F(5, 13), F(6, 13), F(3, 7)} <= set(b)
    assert b == sorted(set(b))
    assert breakpoints(RatioPair(13, 6), 1, Interval(F(1, 6), F(1, 6) + F(1, 10**6))) == [F(1, 6)]
    assert breakpoints(RatioPair(13, 6), 1, Interval(F(301, 1000), F(302, 1000))) == []
    with pytest.raises(ValueError):
        Interval(F(1, 3), F(1, 3))


@pytest.fixture(scope="module")
def cert_13_6():
    return certify_supremum(RatioPair(13, 6), F(3, 7))


def test_certify_13_6(cert_13_6):
    cert = cert_13_6
    assert cert.status == "Proven" and cert.sigma2_c == F(948, 3773)
    assert all(v.margin > 0 for v in cert.verdicts)
    assert recheck(cert)


def test_certify_wrong_candidate_fails():
    best = F(8717, 18335)
    cert = certify_supremum(RatioPair(12, 7), F(1, 3))
    assert cert.status == "Failed"
    assert any(f.interval.contains(best) and f.refuted_at is not None for f in cert.failures)
    assert not recheck(cert)


def test_certify_rejects_q1():
    with pytest.raises(ValueError):
        certify_supremum(RatioPair(5, 1), F(2, 5))


def test_failed_at_low_cap_reports_honestly():
    cert = certify_supremum(RatioPair(3, 2), F(277, 665), max_depth=8)
    assert cert.status == "Failed"
    assert all(f.refuted_at is None for f in cert.failures)


def test_tamper_negated_margin(cert_13_6):
    vs = list(cert_13_6.verdicts)
    vs[3] = dataclasses.replace(vs[3], margin=-vs[3].margin)
    bad = dataclasses.replace(cert_13_6, verdicts=tuple(vs))
    assert not recheck(bad)
    assert "differ" in find_defect(bad)


def test_tamper_gap(cert_13_6):
    vs = list(cert_13_6.verdicts)
    del vs[2]
    assert find_defect(dataclasses.replace(cert_13_6, verdicts=tuple(vs))).startswith("gap")


def test_tamper_other(cert_13_6):
    wrong_value = dataclasses.replace(cert_13_6, sigma2_c=cert_13_6.sigma2_c + F(1, 10**9))
    assert not recheck(wrong_value)
    vs = list(cert_13_6.verdicts)
    v = vs[0]
    vs[0] = dataclasses.replace(v, depth=v.depth + 1)
    assert not recheck(dataclasses.replace(cert_13_6, verdicts=tuple(vs)))
    up = [i for i, v in enumerate(vs) if v.kind is Kind.MONOTONE_UP]
    vs = list(cert_13_6.verdicts)
    vs[up[0]] = dataclasses.replace(vs[up[0]], kind=Kind.MONOTONE_DOWN)
    assert not recheck(dataclasses.replace(cert_13_6, verdicts=tuple(vs)))


def test_serialization_round_trip(cert_13_6):
    text = dump_certificate(cert_13_6)
    doc = json.loads(text)
    assert doc["schema"] == "lilsigma.certificate/1"
    assert all("/" in d["margin"] for d in doc["verdicts"])
    again = load_certificate(text)
    assert again == cert_13_6
    assert dump_certificate(again) == text
    assert certificate_from_dict(certificate_to_dict(again)) == again
    doc["status"] = "Failed"
    with pytest.raises(ValueError):
        certificate_from_dict(doc)


def test_three_halves_at_depth_12():
    pq = RatioPair(3, 2)
    c = F(277, 665)
    cert = certify_supremum(pq, c, max_depth=12)
    assert cert.proven
    assert cert.sigma2_c == sigma2_exact_periodic(pq, c) == sigma2_exact(pq, c)
    assert recheck(cert)
