from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, strategies as st

from freehyper.freelaws import (
    CumulantSequence,
    LimitParams,
    MomentSequence,
    Standardized,
    UnsupportedParameter,
    asymptotic_scan,
    cumulants_to_moments,
    fhg_moments,
    free_poisson_moments,
    moments_to_cumulants,
    semicircle_moments,
    standardized_cumulants,
    standardized_sequences,
    thm34_closed_form,
    thm34_q,
)
from freehyper.partitions import catalan
from freehyper.weingarten import fhg_moment

from oracles import cumulants_by_recursion, nc_partitions

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=30)


# -- transforms -------------------------------------------------------------

def test_point_mass_cumulants():
    k = moments_to_cumulants(MomentSequence([Fraction(1)] * 6))
    assert list(k) == [1, 0, 0, 0, 0, 0]


def test_semicircle_cumulants():
    k = moments_to_cumulants(semicircle_moments(6))
    assert list(k) == [0, 1, 0, 0, 0, 0]
    assert list(semicircle_moments(6)) == [0, 1, 0, 2, 0, 5]


@pytest.mark.parametrize("lam", [Fraction(1), Fraction(1, 3), Fraction(5, 2), 2])
def test_free_poisson_cumulants_are_constant(lam):
    k = moments_to_cumulants(free_poisson_moments(lam, 6))
    assert list(k) == [lam] * 6


def test_free_poisson_examples():
    assert list(free_poisson_moments(1, 5)) == [1, 2, 5, 14, 42]
    lam = Fraction(2, 7)
    m = free_poisson_moments(lam, 2)
    assert m[1] == lam and m[2] == lam**2 + lam
    with pytest.raises(ValueError):
        free_poisson_moments(0, 3)


def test_cumulants_to_moments_examples():
    assert list(cumulants_to_moments(CumulantSequence([0, 1, 0, 0, 0, 0]))) == [0, 1, 0, 2, 0, 5]
    lam = Fraction(3, 4)
    by_def = [sum(lam ** len(p) for p in nc_partitions(q)) for q in range(1, 7)]
    assert list(cumulants_to_moments(CumulantSequence([lam] * 6))) == by_def


@given(st.lists(rationals, min_size=1, max_size=6))
def test_roundtrip_moments_cumulants(values):
    m = MomentSequence(values)
    assert cumulants_to_moments(moments_to_cumulants(m)).values == m.values
    k = CumulantSequence(values)
    assert moments_to_cumulants(cumulants_to_moments(k)).values == k.values


@given(st.lists(rationals, min_size=1, max_size=6))
def test_cumulants_match_recursive_oracle(values):
    assert list(moments_to_cumulants(MomentSequence(values))) == cumulants_by_recursion(values)


def test_transform_is_homogeneous_symbolically():
    """Scaling m_p by c^p scales kappa_p by c^p: checked over a polynomial ring."""
    c = sympy.Symbol("c")
    ms = sympy.symbols("m1:7")
    k = moments_to_cumulants(MomentSequence(ms))
    ks = moments_to_cumulants(MomentSequence(c ** (p + 1) * x for p, x in enumerate(ms)))
    for p in range(6):
        assert sympy.expand(ks[p + 1] - c ** (p + 1) * k[p + 1]) == 0


def test_sequence_validation():
    with pytest.raises(ValueError):
        moments_to_cumulants(MomentSequence([]))
    with pytest.raises(IndexError):
        MomentSequence([1, 2])[3]
    with pytest.raises(ValueError):
        LimitParams(lam=Fraction(0))
    with pytest.raises(ValueError):
        LimitParams(nu=Fraction(1))
    with pytest.raises(ValueError):
        semicircle_moments(0)


# -- closed form for X(n, n, n^2) ---------------------------------------------

def test_q_root():
    for n in (3, 4, 7):
        with mpmath.workdps(40):
            q = thm34_q(n, 40)
            assert -1 < q < 0
            assert abs(q + 1 / q + n) < mpmath.mpf(10) ** -35


@pytest.mark.parametrize("n", [3, 4, 5, 6])
@pytest.mark.parametrize("k", range(1, 7))
def test_closed_form_matches_exact_moment(n, k):
    exact = fhg_moment(n, n, n * n, k)
    with mpmath.workdps(40):
        value = thm34_closed_form(n, k, 40)
        rel = abs(value - mpmath.mpf(exact.numerator) / exact.denominator) / exact
    assert rel < 1e-30


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("k", [1, 2, 4])
def test_printed_prefactor_overshoots_by_a_fixed_ratio(n, k):
    exact = fhg_moment(n, n, n * n, k)
    with mpmath.workdps(40):
        printed = thm34_closed_form(n, k, 40, prefactor="printed")
        ratio = printed / (mpmath.mpf(exact.numerator) / exact.denominator)
        expected = (mpmath.mpf(n + 2) / (n + 1)) ** k
        assert abs(ratio - expected) < mpmath.mpf(10) ** -30


def test_closed_form_first_moment_is_one():
    assert abs(thm34_closed_form(3, 1) - 1) < 1e-25


def test_closed_form_errors():
    with pytest.raises(UnsupportedParameter):
        thm34_closed_form(2, 3)
    with pytest.raises(ValueError):
        thm34_closed_form(1, 3)
    with pytest.raises(ValueError):
        thm34_closed_form(3, 0)
    with pytest.raises(ValueError):
        thm34_closed_form(3, 2, precision=20)
    with pytest.raises(ValueError):
        thm34_closed_form(3, 2, prefactor="other")


def test_n2_moments_remain_available_exactly():
    assert fhg_moment(2, 2, 4, 1) == 1
    assert fhg_moment(2, 2, 4, 3) > 0


# -- scans -------------------------------------------------------------------

def test_regime1_free_poisson_ladder():
    rep = asymptotic_scan(1, [(2, 2, 4), (4, 4, 16), (8, 8, 64)], 4)
    assert rep.params == {"lambda": "1"}
    assert rep.strictly_decreasing and rep.non_increasing
    assert all(r.moments[0] == 1 for r in rep.rows)
    d = rep.to_dict()
    assert set(d) == {"regime", "params", "p_max", "non_increasing", "rows"}


def test_regime1_degenerate_full_rows():
    rep = asymptotic_scan(1, [(4, 3, 4)], 4)
    assert rep.rows[0].moments == [3, 9, 27, 81]
    target = free_poisson_moments(3, 4)
    assert rep.rows[0].distance_sq == max(abs(a - b) for a, b in zip([3, 9, 27, 81], target)) ** 2


def test_regime2_third_cumulant_vanishes_at_half():
    # nu = 1/2: X and m - X have the same law, so S is symmetric
    rep = asymptotic_scan(2, [(4, 2, 8), (8, 2, 16), (16, 2, 32)], 3)
    assert [r.cumulant_squares[2] for r in rep.rows] == [0, 0, 0]
    assert rep.params == {"nu": "1/2"}


def test_regime2_third_cumulant_decreases_off_half_with_growing_m():
    ladder = [(2, 2, 8), (8, 4, 32), (32, 8, 128)]
    sq = [standardized_cumulants(n, m, N, 3)[2].square for n, m, N in ladder]
    assert sq[0] > sq[1] > sq[2] > 0


def test_regime2_third_cumulant_stalls_off_half_with_fixed_m():
    sq = [standardized_cumulants(n, 2, N, 3)[2].square for n, N in [(2, 8), (4, 16), (8, 32)]]
    assert sq[0] < sq[1] < sq[2]


def test_regime2_growing_m_ladder_approaches_semicircle():
    ladder = [(8, 2, 16), (32, 4, 64), (128, 8, 256)]
    k4 = [standardized_cumulants(n, m, N, 4)[3] for n, m, N in ladder]
    assert all(s.sign < 0 for s in k4)
    assert k4[0].square > k4[1].square > k4[2].square


def test_regime2_fixed_m_fourth_cumulant_tends_to_minus_one_over_m():
    """With m fixed, kappa_4(S) stays away from 0 and tends to -1/m."""
    vals = [standardized_cumulants(n, 2, N, 4)[3].to_float() for n, N in [(4, 8), (8, 16), (16, 32), (32, 64)]]
    assert vals == sorted(vals, reverse=True)
    assert all(-0.5 < v < 0 for v in vals)


@pytest.mark.parametrize("size", [(3, 2, 8), (4, 3, 8), (5, 2, 10)])
def test_standardization_scales_cumulants_exactly(size):
    n, m, N = size
    x, y, ky, var = standardized_sequences(n, m, N, 5)
    kx = moments_to_cumulants(x)
    assert ky[1] == 0
    for p in range(2, 6):
        # centring leaves kappa_p untouched for p >= 2 ...
        assert ky[p] == kx[p]
        # ... and S rescales it by var^(-p/2)
        s = Standardized.of(ky[p], p, var)
        assert s.square * var**p == kx[p] ** 2
        assert s.sign == (kx[p] > 0) - (kx[p] < 0)


def test_standardized_variance_is_one_at_the_limit_scale():
    _, y, _, var = standardized_sequences(4, 2, 8, 2)
    assert y[1] == 0
    s2 = Standardized.of(y[2], 2, var)
    assert s2.sign == 1 and s2.square == (y[2] / var) ** 2
    assert abs(s2.to_float() - float(y[2] / var)) < 1e-15


@pytest.mark.parametrize("regime,sizes", [
    (1, [(2, 2, 4), (2, 2, 8)]),
    (2, [(4, 2, 8), (4, 2, 16)]),
    (2, [(4, 2, 4)]),
    (1, []),
    (3, [(2, 2, 4)]),
    (1, [(5, 2, 4)]),
])
def test_scan_rejects_inconsistent_ladders(regime, sizes):
    with pytest.raises(ValueError):
        asymptotic_scan(regime, sizes, 3)


def test_fhg_moments_sequence():
    assert list(fhg_moments(3, 3, 9, 3)) == [1, Fraction(3, 2), Fraction(18, 7)]
    assert [catalan(p) for p in range(1, 5)] == list(free_poisson_moments(1, 4))
