import math
from fractions import Fraction

import pytest

from fallfact.analysis import (ENTIRE, RIGHT_HALF_PLANE, UNKNOWN, ModulusProfile,
                               chi_estimate, classify, fit_order_type, log_abs,
                               modulus_profile, order_from_taylor)
from fallfact.exact import ExactScalar
from fallfact.series import evaluate, exact_series


def inv_double_factorial(n_count):
    return [ExactScalar(Fraction((-1) ** n, math.factorial(2 * n)))
            for n in range(n_count)]


def inv_factorial(n_count):
    return [ExactScalar(Fraction((-1) ** n, math.factorial(n)))
            for n in range(n_count)]


# ---------------------------------------------------------------------------
# log_abs
# ---------------------------------------------------------------------------

def test_log_abs_kinds():
    assert log_abs(ExactScalar(0)) is None
    assert log_abs(Fraction(0)) is None
    assert log_abs(0) is None
    assert log_abs(Fraction(1, 8)) == pytest.approx(-3 * math.log(2))
    assert log_abs(ExactScalar(Fraction(3), Fraction(4))) == pytest.approx(math.log(5))
    assert log_abs(complex(0, 2)) == pytest.approx(math.log(2))
    # huge exact values must not overflow through float conversion
    assert log_abs(Fraction(10) ** 100000) == pytest.approx(100000 * math.log(10))


# ---------------------------------------------------------------------------
# chi estimates
# ---------------------------------------------------------------------------

def test_chi_inverse_double_factorial_frozen():
    est = chi_estimate(inv_double_factorial(1001))
    # limit is 1/2; the finite-N window maximum sits slightly above
    assert est.value == pytest.approx(0.5255813059867875, abs=1e-12)
    assert 0.50 < est.value < 0.54
    tail = [s for n, s in est.s_trace if n >= 750]
    assert all(b < a for a, b in zip(tail, tail[1:]))


def test_chi_inverse_factorial_frozen():
    est = chi_estimate(inv_factorial(1001))
    assert est.value == pytest.approx(1.189931377372822, abs=1e-12)
    assert est.value > 1.0


def test_chi_exact_on_constructed_sequence():
    # |a_n| = n^(-2n) gives s_n = 1/2 at every usable index
    coeffs = [ExactScalar(0), ExactScalar(1)] + [
        ExactScalar(Fraction(1, n ** (2 * n))) for n in range(2, 200)]
    est = chi_estimate(coeffs)
    assert est.value == pytest.approx(0.5, abs=1e-14)
    assert not est.undefined


def test_chi_zero_sequence_and_short_input():
    est = chi_estimate([ExactScalar(0)] * 40)
    assert est.value == 0.0
    assert est.zero_sequence
    with pytest.raises(ValueError):
        chi_estimate([ExactScalar(1)] * 10)


def test_chi_undefined_when_window_has_no_usable_terms():
    # |a_n| >= 1 throughout: s_n is undefined everywhere
    est = chi_estimate([ExactScalar(Fraction(n + 1)) for n in range(40)])
    assert est.undefined
    assert est.value == math.inf


def test_chi_window_fraction_validation():
    with pytest.raises(ValueError):
        chi_estimate(inv_factorial(40), window_fraction=0.0)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def test_classify_entire_and_half_plane():
    fast = classify(inv_double_factorial(401))
    assert fast.kind == ENTIRE
    assert fast.chi < 0.9
    slow = classify(inv_factorial(401))
    assert slow.kind == RIGHT_HALF_PLANE
    assert slow.k_bound == pytest.approx(1.0)  # |a_n| n! = 1 for all n
    assert slow.k_index == 0


def test_classify_geometric_half_plane():
    coeffs = [ExactScalar(Fraction(1, 2) ** n / math.factorial(n))
              for n in range(101)]
    got = classify(coeffs)
    assert got.kind == RIGHT_HALF_PLANE
    assert got.chi == pytest.approx(1.0680700888207217, abs=1e-12)


def test_classify_everywhere_divergent_is_unknown():
    # a_n = n!: no K with |a_n| n! <= K, chi undefined
    got = classify([ExactScalar(Fraction(math.factorial(n))) for n in range(60)])
    assert got.kind == UNKNOWN
    assert got.chi_undefined


def test_classify_zero_sequence_is_entire():
    got = classify([ExactScalar(0)] * 20)
    assert got.kind == ENTIRE
    assert got.chi == 0.0


# ---------------------------------------------------------------------------
# order from Taylor coefficients
# ---------------------------------------------------------------------------

def test_order_from_taylor_exponential():
    small = order_from_taylor([Fraction(1, math.factorial(m)) for m in range(200)])
    big = order_from_taylor([Fraction(1, math.factorial(m)) for m in range(800)])
    assert small.value == pytest.approx(1.2660631472614994, abs=1e-12)
    assert 1.0 < big.value < small.value  # approaches order 1 from above


def test_order_from_taylor_half():
    est = order_from_taylor([Fraction(1, math.factorial(2 * m)) for m in range(200)])
    assert 0.5 < est.value < 0.56


def test_order_from_taylor_polynomial_is_zero():
    coeffs = [Fraction(3), Fraction(1), Fraction(2)] + [Fraction(0)] * 30
    est = order_from_taylor(coeffs)
    assert est.value == 0.0
    assert not est.undefined


# ---------------------------------------------------------------------------
# modulus profile and order/type fitting
# ---------------------------------------------------------------------------

def test_modulus_profile_constant_series():
    s = exact_series([7])
    prof = modulus_profile(lambda z: evaluate(s, z), [2.0, 8.0],
                           samples_per_circle=12)
    assert prof.valid == (True, True)
    for m in prof.max_modulus:
        assert m == pytest.approx(7.0, rel=1e-9)


def test_modulus_profile_marks_failures():
    # coefficients 1: diverges at non-integer points, so every circle fails
    s = exact_series([1] * 300)
    prof = modulus_profile(lambda z: evaluate(s, z, 1e-12, n_max=80), [4.0],
                           samples_per_circle=6)
    assert prof.valid == (False,)
    assert prof.max_modulus == (None,)


def test_fit_order_type_synthetic():
    # log M(r) = 2 sqrt(r): order 1/2, type 2
    radii = (16.0, 64.0, 256.0, 1024.0)
    prof = ModulusProfile(radii,
                          tuple(math.exp(2.0 * math.sqrt(r)) for r in radii),
                          (True,) * 4, 1)
    fit = fit_order_type(prof)
    assert fit.rho_fit == pytest.approx(0.5, abs=1e-9)
    assert fit.tau_fit == pytest.approx(2.0, rel=1e-9)
    assert fit.radii_used == radii


def test_fit_order_type_drops_unusable_radii():
    prof = ModulusProfile((2.0, 4.0, 8.0, 16.0, 32.0),
                          (0.5, math.e ** 2, math.e ** 4, None, math.e ** 8),
                          (True, True, True, False, True), 1)
    fit = fit_order_type(prof)
    assert fit.radii_used == (4.0, 8.0, 32.0)
    with pytest.raises(ValueError):
        fit_order_type(ModulusProfile((4.0, 8.0), (10.0, 10.0), (True, True), 1))
