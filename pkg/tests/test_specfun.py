"""Special-function scalars against the mpmath reference implementation."""

import math

import mpmath as mp
import pytest

from qladder.errors import DivergenceError, Unsupported
from qladder.specfun import (
    SeriesControl,
    bessel_k,
    gamma_ratio,
    hyp1f1,
    hyp2f1_terminating,
    hyp_pfq,
    ln_gamma,
    whittaker_w,
)

mp.mp.dps = 30


@pytest.mark.parametrize(
    "a,b,z",
    [
        (0.5, 1.5, 0.3),
        (2.0, 3.5, -4.0),
        (1.25, 2.0, 2.5j),
        (3.0, 4.5, -1.0 + 2.0j),
        (0.7, 0.9, 11.0),
    ],
)
def test_hyp1f1_matches_mpmath(a, b, z):
    got = hyp1f1(a, b, z)
    want = complex(mp.hyp1f1(a, b, z))
    assert abs(got - want) <= 1e-12 * max(1.0, abs(want))


def test_hyp1f1_rejects_denominator_pole():
    with pytest.raises(ValueError):
        hyp1f1(1.0, -2.0, 0.5)


@pytest.mark.parametrize("n", [0, 1, 3, 7])
def test_hyp2f1_terminating(n):
    a, c, z = 1.3, 2.7, 0.6
    got = hyp2f1_terminating(a, n, c, z)
    want = complex(mp.hyp2f1(a, -n, c, z))
    assert abs(got - want) <= 1e-13 * max(1.0, abs(want))


@pytest.mark.parametrize(
    "num,den,x",
    [
        ([], [], 0.8),                 # 0F0 = exp
        ([2.5], [], 0.4),              # 1F0 = (1-x)^{-a}
        ([1.5, 2.0], [3.0], 0.35),     # 2F1 inside the disc
        ([2.0, 2.0, 2.0], [1.0, 1.0], 0.15),
        ([0.5], [1.5, 2.5], -7.0),     # 1F2, entire
    ],
)
def test_hyp_pfq_matches_mpmath(num, den, x):
    got = hyp_pfq(num, den, x)
    want = complex(mp.hyper(num, den, x))
    assert abs(got - want) <= 1e-11 * max(1.0, abs(want))


def test_hyp_pfq_terminating_is_exact_polynomial():
    # 2F1(-3, 1.5; 2.5; x) is a cubic; compare at a point outside |x| < 1
    got = hyp_pfq([-3.0, 1.5], [2.5], 1.7)
    want = complex(mp.hyper([-3, 1.5], [2.5], 1.7))
    assert abs(got - want) <= 1e-12 * abs(want)


def test_hyp_pfq_divergence_detection():
    with pytest.raises(DivergenceError):
        hyp_pfq([1.0, 1.0, 1.0], [2.0], 0.5)   # 3F1 diverges
    with pytest.raises(DivergenceError):
        hyp_pfq([1.0, 2.0], [3.0], 1.2)        # 2F1 outside the disc


def test_series_control_budget():
    with pytest.raises(Exception):
        hyp1f1(1.0, 2.0, 500.0, SeriesControl(max_terms=5))


def test_gamma_ratio_large_arguments_stay_finite():
    # Gamma(180.5)/Gamma(178.5) = 179.5 * 178.5 while each factor overflows.
    # Log-space assembly carries ~eps*|ln Gamma| relative error, hence 1e-11.
    got = gamma_ratio([180.5], [178.5])
    assert got == pytest.approx(179.5 * 178.5, rel=1e-11)
    with pytest.raises(ValueError):
        ln_gamma(0.0)


@pytest.mark.parametrize(
    "kappa,lam,x",
    [
        (0.0, 0.25, 0.8),
        (-0.5, 1.0, 2.0),
        (0.25, 0.75, 5.0),
        (-1.5, 0.5, 0.3),
        (0.25, -0.75, 5.0),   # reflection lam -> |lam|
    ],
)
def test_whittaker_w_matches_mpmath(kappa, lam, x):
    got = whittaker_w(kappa, lam, x)
    want = float(mp.whitw(kappa, lam, x))
    assert got == pytest.approx(want, rel=5e-12)


def test_whittaker_boundary_case_is_closed_form():
    # lambda - kappa + 1/2 = 0 collapses U to 1: W = e^{-x/2} x^{lam+1/2}
    lam, x = 0.75, 1.3
    kappa = lam + 0.5
    assert whittaker_w(kappa, lam, x) == pytest.approx(
        math.exp(-x / 2) * x ** (lam + 0.5), rel=1e-15
    )


def test_whittaker_unrepresentable_raises():
    with pytest.raises(Unsupported):
        whittaker_w(3.0, 0.5, 1.0)


@pytest.mark.parametrize(
    "alpha,x", [(0.0, 0.5), (0.5, 1.0), (1.75, 2.5), (3.0, 0.2), (-1.75, 2.5)]
)
def test_bessel_k_matches_mpmath(alpha, x):
    assert bessel_k(alpha, x) == pytest.approx(float(mp.besselk(alpha, x)), rel=1e-11)


def test_bessel_k_half_closed_form():
    x = 1.7
    want = math.sqrt(math.pi / (2 * x)) * math.exp(-x)
    assert bessel_k(0.5, x) == pytest.approx(want, rel=1e-12)
