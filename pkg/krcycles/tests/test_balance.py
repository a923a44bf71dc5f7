import math
from fractions import Fraction

import pytest

from krcycles.balance import balance_report, coupling_exponents, \
    coupling_pi, d1, f_cycle_first_moment, f_threshold, fraction_str, \
    is_strictly_one_balanced, kr_threshold, loose_hc_threshold_pi, \
    overlap2_comparison, overlap2_hc_threshold_pi, show_report
from krcycles.errors import BalanceError, PatternError
from krcycles.patterns import PatternGraph

C4 = PatternGraph.cycle(4)
K4_E = PatternGraph.from_name('K4-e')


@pytest.mark.parametrize('r', range(3, 9))
def test_d1_of_cliques(r):
    assert d1(PatternGraph.complete(r)) == Fraction(r, 2)


def test_d1_examples():
    assert d1(C4) == Fraction(4, 3)
    assert d1(K4_E) == Fraction(5, 3)
    assert d1(PatternGraph.complete(4)) == 2


@pytest.mark.parametrize('r', range(3, 7))
def test_cliques_are_strictly_balanced(r):
    assert is_strictly_one_balanced(PatternGraph.complete(r)).strict


def test_strict_balance_examples():
    assert is_strictly_one_balanced(C4) == (True, None)
    assert is_strictly_one_balanced(K4_E).strict
    result = is_strictly_one_balanced(PatternGraph.path(3))
    assert not result.strict
    assert result.witness.edges == ((0, 1),)
    assert result.witness.origin == (0, 1)
    assert result.witness.d1 == 1


def test_strict_balance_rejects_large_patterns():
    with pytest.raises(PatternError):
        is_strictly_one_balanced(PatternGraph.cycle(9))


@pytest.mark.parametrize('r, p_exponent, log_exponent', [
    (3, Fraction(-2, 3), Fraction(1, 3)),
    (4, Fraction(-1, 2), Fraction(1, 6)),
])
def test_kr_threshold_exponents(r, p_exponent, log_exponent):
    report = kr_threshold(1000, r)
    assert report.p_exponent == p_exponent
    assert report.log_exponent == log_exponent
    assert report.a_guaranteed


def test_kr_threshold_value():
    report = kr_threshold(1000, 3)
    assert report.p == pytest.approx(0.0190, abs=5e-5)
    assert report.p == pytest.approx(
        1000 ** (-2 / 3) * math.log(1000) ** (1 / 3))
    assert not report.clamped


def test_kr_threshold_clamps():
    report = kr_threshold(6, 3, omega=1e6)
    assert report.p == 1.0
    assert report.clamped
    assert report.raw > 1.0


def test_threshold_preconditions():
    with pytest.raises(BalanceError):
        kr_threshold(1000, 2)
    with pytest.raises(BalanceError):
        kr_threshold(1, 3)
    with pytest.raises(BalanceError):
        f_threshold(0, C4)
    with pytest.raises(BalanceError):
        loose_hc_threshold_pi(1, 3, 1.0)


def test_f_threshold_general_pattern():
    report = f_threshold(1000, C4)
    assert report.p_exponent == Fraction(-3, 4)
    assert report.log_exponent == Fraction(1, 4)
    assert not report.a_guaranteed
    assert report.pi == pytest.approx(report.p ** 4)
    assert f_threshold(1000, PatternGraph.complete(5)) == kr_threshold(1000, 5)


def test_coupling_pi():
    assert coupling_pi(0.5, PatternGraph.complete(3)) == 0.125
    assert coupling_pi(0.1, C4) == pytest.approx(1e-4)
    with pytest.raises(ValueError):
        coupling_pi(1.5, C4)


@pytest.mark.parametrize('r', range(3, 9))
def test_coupling_exponents(r):
    edges = math.comb(r, 2)
    assert PatternGraph.complete(r).num_edges == edges
    assert coupling_exponents(r) == (Fraction(1 - r), Fraction(1),
                                     Fraction(edges))


def test_loose_hc_threshold_pi():
    assert loose_hc_threshold_pi(math.e, 3, 1.0) == pytest.approx(math.e ** -2)
    assert loose_hc_threshold_pi(100, 3, 2.0) == pytest.approx(9.21034e-4,
                                                              rel=1e-5)
    assert loose_hc_threshold_pi(100, 3, 0.0) == 0.0
    assert loose_hc_threshold_pi(3, 3, 1e9) == 1.0
    assert loose_hc_threshold_pi(3, 3, 1e9, clamp=False) > 1.0


@pytest.mark.parametrize('f, overlap, shared, expected', [
    (C4, 2, 1, (Fraction(-2, 3), Fraction(-8, 3))),
    (K4_E, 2, 1, (Fraction(-1, 2), Fraction(-5, 2))),
])
def test_f_cycle_first_moment(f, overlap, shared, expected):
    assert f_cycle_first_moment(f, overlap, shared) == expected


@pytest.mark.parametrize('r', range(3, 9))
def test_first_moment_of_cliques_matches_threshold(r):
    f = PatternGraph.complete(r)
    moment = f_cycle_first_moment(f, 1, 0)
    assert moment.p_exponent == Fraction(-2, r)
    assert moment.p_exponent == kr_threshold(100, r).p_exponent


@pytest.mark.parametrize('overlap, shared', [(0, 0), (4, 0), (2, 5), (1, 4)])
def test_first_moment_rejects_degenerate_input(overlap, shared):
    with pytest.raises(BalanceError):
        f_cycle_first_moment(C4, overlap, shared)


def test_overlap2_threshold():
    assert overlap2_hc_threshold_pi(100, 1.0) == pytest.approx(1e-4)


@pytest.mark.parametrize('n', [2, 10, 1000])
def test_overlap2_comparison(n):
    comparison = overlap2_comparison(C4, 2, 1, n)
    assert comparison['below_threshold']
    assert comparison['pi_exponent'] == '-8/3'
    assert comparison['pi'] <= comparison['threshold_pi']


def test_fraction_str():
    assert fraction_str(Fraction(3, 2)) == '3/2'
    assert fraction_str(Fraction(-4, 2)) == '-2'


def test_balance_report():
    report = balance_report(PatternGraph.complete(3), n=1000)
    assert report['d1'] == '3/2'
    assert report['strictly_1_balanced']
    assert report['witness'] is None
    assert report['thresholds']['p_exponent'] == '-2/3'
    assert report['thresholds']['log_exponent'] == '1/3'
    assert 'first_moment' not in report

    report = balance_report(PatternGraph.path(3))
    assert report['witness'] == [[0, 1]]

    report = balance_report(C4, overlap=2, shared_edges=1)
    assert report['first_moment']['pi_exponent'] == '-8/3'
    assert report['overlap2']['below_threshold']


def test_show_report(capsys):
    show_report(balance_report(C4, overlap=2, shared_edges=1))
    readout = capsys.readouterr()
    assert 'first_moment.pi_exponent' in readout.out
    assert '-8/3' in readout.out
