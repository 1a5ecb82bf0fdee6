"""Pearson classification and recurrence coefficients.

The frozen h/b arrays below come from an independent 50-digit construction:
raw moments of the stated weight were integrated with mpmath, assembled
into a Hankel Gram matrix, and the orthonormal polynomials extracted by
Cholesky factorization.  No code from this package was involved.
"""

import math

import mpmath as mp
import pytest

from qladder.orthopoly import (
    HERMITE,
    JACOBI,
    LAGUERRE,
    classify,
    derivative_pearson,
    eval_poly,
    eval_poly_table,
    hermite_data,
    jacobi_data,
    laguerre_data,
    legendre_data,
    ode_residual,
    recurrence,
    rodrigues_constant,
    strong_field,
)

# weight exp(-x^2) on R
_HERMITE_B = [
    0.70710678118654752, 1.0, 1.224744871391589, 1.414213562373095,
    1.5811388300841897, 1.7320508075688773, 1.8708286933869707, 2.0,
    2.1213203435596426, 2.2360679774997897,
]
# weight x^{3/2} e^{-x} on (0, inf)
_LAGUERRE_H = [2.5 + 2.0 * n for n in range(11)]
_LAGUERRE_B = [
    1.5811388300841897, 2.6457513110645906, 3.6742346141747671,
    4.6904157598234296, 5.7008771254956899, 6.7082039324993691,
    7.7136243102707562, 8.7177978870813471, 9.7211110476117903,
    10.723805294763608,
]
# weight (x+1)(1-x)^{1/2} on (-1, 1)
_JACOBI_H = [
    0.14285714285714286, 0.038961038961038961, 0.018181818181818182,
    0.010526315789473684, 0.0068649885583524027, 0.0048309178743961353,
    0.0035842293906810036, 0.0027649769585253456, 0.0021978021978021978,
    0.0017889087656529517, 0.0014844136566056408,
]
_JACOBI_B = [
    0.46656947481584345, 0.48717391058696993, 0.49321183942808611,
    0.49579812205642689, 0.4971427950620924, 0.49793101089754646,
    0.49843259162296941, 0.49877149383131084, 0.49901120375194742,
    0.49918699043766615,
]


def test_classification_families():
    assert hermite_data().family == HERMITE
    assert laguerre_data(2.5).family == LAGUERRE
    assert jacobi_data(-1, 1, 2, 1.5).family == JACOBI
    assert legendre_data().family == JACOBI


def test_classify_rejects_bad_pairs():
    with pytest.raises(ValueError, match="deg A"):
        classify(0.0, 0.0, 1.0, 0.0, 0.0)
    with pytest.raises(ValueError, match="Hermite"):
        classify(0.0, 2.0, 1.0, 0.0, 0.0)  # growing weight
    with pytest.raises(ValueError, match="mu"):
        classify(-1.0, -1.0, 0.0, 1.0, 0.0)  # Laguerre exponent <= 0
    with pytest.raises(ValueError, match="two distinct real roots"):
        classify(0.0, -1.0, -1.0, 0.0, -1.0)  # B < 0 everywhere


@pytest.mark.parametrize(
    "pd,h_ref,b_ref",
    [
        (hermite_data(), [0.0] * 11, _HERMITE_B),
        (laguerre_data(2.5), _LAGUERRE_H, _LAGUERRE_B),
        (jacobi_data(-1.0, 1.0, 2.0, 1.5), _JACOBI_H, _JACOBI_B),
    ],
    ids=["hermite", "laguerre", "jacobi"],
)
def test_recurrence_against_gram_schmidt_oracle(pd, h_ref, b_ref):
    js = recurrence(pd)
    for n in range(11):
        assert js.h(n) == pytest.approx(h_ref[n], abs=1e-8)
    for n in range(1, 11):
        assert js.b(n) == pytest.approx(b_ref[n - 1], abs=1e-8)
    assert js.b(0) == 0.0


def test_legendre_closed_couplings():
    js = recurrence(legendre_data())
    for n in range(1, 13):
        assert js.b(n) == pytest.approx(n / math.sqrt(4 * n * n - 1), abs=1e-12)
        assert js.h(n) == pytest.approx(0.0, abs=1e-12)


def _inner_points(pd):
    lo, hi = pd.support
    lo = max(lo, -2.0)
    hi = min(hi, 3.0)
    return [lo + f * (hi - lo) for f in (0.15, 0.5, 0.85)]


@pytest.mark.parametrize("n", range(9))
def test_ode_residual(family_ctx, n):
    for omega in _inner_points(family_ctx.pd):
        assert ode_residual(family_ctx.pd, n, omega) < 1e-9


def test_recurrence_pointwise(family_ctx):
    """omega P_n = b(n+1)P_{n+1} + h(n)P_n + b(n)P_{n-1} at sample points."""
    js = family_ctx.js
    for omega in (-0.6, 0.2, 0.8):
        tab = eval_poly_table(js, 9, omega)[:, 0]
        for n in range(8):
            lhs = omega * tab[n]
            rhs = js.b(n + 1) * tab[n + 1] + js.h(n) * tab[n]
            if n:
                rhs += js.b(n) * tab[n - 1]
            assert lhs == pytest.approx(rhs, abs=1e-9)


def test_eval_poly_matches_table(family_ctx):
    js = family_ctx.js
    p, dp, ddp = eval_poly(js, 6, 0.37)
    tab = eval_poly_table(js, 6, 0.37, derivatives=2)
    assert p == pytest.approx(tab[6, 0], rel=1e-13)
    assert dp == pytest.approx(tab[6, 1], rel=1e-13)
    assert ddp == pytest.approx(tab[6, 2], rel=1e-13)


def _weight_fn(pd):
    if pd.family == HERMITE:
        return lambda x: mp.exp((pd.a1 * x**2 / 2 + pd.a0 * x) / pd.b0)
    if pd.family == LAGUERRE:
        gamma = -pd.a1 / pd.b1
        beta = pd.b0 / pd.b1
        return lambda x: (x + beta) ** (pd.mu - 1) * mp.exp(-gamma * x)
    a, b = pd.support
    return lambda x: (x - a) ** (pd.mu - 1) * (b - x) ** (pd.nu - 1)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_rodrigues_formula_numerically(family_ctx, n):
    """(-1)^n c_n rho^{-1} d^n(rho B^n) reproduces the recurrence polynomial."""
    pd = family_ctx.pd
    C = family_ctx.sm.C
    rho = _weight_fn(pd)
    B = lambda x: pd.b2 * x**2 + pd.b1 * x + pd.b0
    c_n = rodrigues_constant(pd, n, C)
    mp.mp.dps = 30
    lo, hi = pd.support
    for omega in (0.15, 0.45):
        x = mp.mpf(omega)
        if not (lo < omega < hi):
            continue
        der = mp.diff(lambda t: rho(t) * B(t) ** n, x, n)
        rod = (-1) ** n * c_n * float(der / rho(x))
        rec = eval_poly(family_ctx.js, n, omega)[0]
        assert rod == pytest.approx(rec, abs=1e-5 * max(1.0, abs(rec)))


def test_derivative_pearson_shifts_exponents():
    pd = jacobi_data(-1.0, 1.0, 2.0, 1.5)
    dpd = derivative_pearson(pd, 1)
    assert dpd.mu == pytest.approx(3.0)
    assert dpd.nu == pytest.approx(2.5)
    lpd = derivative_pearson(laguerre_data(2.5), 2)
    assert lpd.mu == pytest.approx(4.5)


def test_strong_field_members():
    assert strong_field(hermite_data(a0=1.0)).a0 == 0.0
    sf = strong_field(laguerre_data(2.5))
    assert sf.mu == pytest.approx(1.0)
    sfj = strong_field(jacobi_data(-0.3, 1.7, 2.0, 3.0))
    assert sfj.mu == pytest.approx(1.5)
    assert sfj.nu == pytest.approx(1.5)
    js = recurrence(sfj)
    # flat band: h = midpoint, b = quarter width
    for n in range(1, 8):
        assert js.h(n) == pytest.approx((1.7 - 0.3) / 2, abs=1e-13)
        assert js.b(n) == pytest.approx((1.7 + 0.3) / 4, abs=1e-13)
