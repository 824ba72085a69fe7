import math
import warnings

import numpy as np
import pytest
from scipy import stats

import ssd
from conftest import PARAM_GRID, geometric_grid
from data_loader import Dataset
from errors import DivergenceError, DomainError
from oracle import finite_diff, integrate
from ssd import SsdParams

PDF_1 = 2.0 / (3.0 * math.e)            # pdf(1; 1, 1)
CDF_1 = 0.1416146373                    # cdf(1; 1, 1)
SURVIVAL_1 = 0.8583853627


def grid_params():
    return [SsdParams(a, t) for a, t in PARAM_GRID]


def grid_ids():
    return [f"a{a:g}-t{t:g}" for a, t in PARAM_GRID]


# --------------------------------------------------------------------------- #
# Parameters and basic functions
# --------------------------------------------------------------------------- #

def test_params_validation():
    with pytest.raises(DomainError):
        SsdParams(1.0, 0.0)
    with pytest.raises(DomainError):
        SsdParams(-0.5, 1.0)
    with pytest.raises(DomainError):
        SsdParams(1.0, math.inf)


@pytest.mark.parametrize("alpha, theta, expected", [(1, 1, 1 / 3), (0, 1, 0.5), (2, 2, 0.4)])
def test_mixing_weight(alpha, theta, expected):
    assert ssd.mixing_weight(SsdParams(alpha, theta)) == pytest.approx(expected, rel=1e-12)


def test_weight_stays_in_unit_interval_for_large_alpha():
    p = ssd.mixing_weight(SsdParams(200.0, 3.0))
    assert 0.0 < p <= 1.0


def test_pdf_is_the_component_mixture(unit_params):
    xs = np.linspace(0.1, 9.0, 10)
    (p, first), (q, second) = ssd.gamma_components(unit_params)
    np.testing.assert_allclose(ssd.pdf(xs, unit_params), p * first.pdf(xs) + q * second.pdf(xs), rtol=1e-12)


def test_pdf_values(unit_params):
    assert ssd.pdf(1.0, unit_params) == pytest.approx(PDF_1, rel=1e-12)
    assert ssd.pdf(1.0, SsdParams(0.0, 1.0)) == pytest.approx(math.exp(-1.0), rel=1e-12)
    assert ssd.pdf(0.0, SsdParams(3.0, 2.0)) == 0.0


def test_density_at_origin_is_silent_for_alpha_zero():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        values = ssd.log_pdf(np.array([0.0, 1.0]), SsdParams(0.0, 1.0))
        assert ssd.pdf(0.0, SsdParams(0.0, 1.0)) == 0.0
    assert values[0] == -np.inf
    assert values[1] == pytest.approx(-1.0, rel=1e-12)


def test_cdf_and_survival_values(unit_params):
    assert ssd.cdf(1.0, unit_params) == pytest.approx(CDF_1, abs=1e-10)
    assert ssd.cdf(0.0, unit_params) == 0.0
    assert ssd.cdf(50.0, unit_params) == pytest.approx(1.0, abs=1e-12)
    assert ssd.survival(0.0, unit_params) == 1.0
    assert ssd.survival(1.0, unit_params) == pytest.approx(SURVIVAL_1, abs=1e-10)


def test_survival_plus_cdf_is_one(unit_params):
    xs = np.linspace(0.0, 20.0, 50)
    np.testing.assert_allclose(ssd.survival(xs, unit_params) + ssd.cdf(xs, unit_params), 1.0, atol=1e-12)


def test_survival_far_tail_stays_positive():
    # Q(2, y) = (1 + y) e^-y and Q(4, y) = (1 + y + y^2/2 + y^3/6) e^-y.
    params = SsdParams(2.0, 1.0)
    p, y = ssd.mixing_weight(params), 650.0
    expected = math.log(p * (1.0 + y) + (1.0 - p) * (1.0 + y + y ** 2 / 2.0 + y ** 3 / 6.0)) - y
    s = ssd.survival(y, params)
    assert 0.0 < s < 1e-250
    assert ssd.log_survival(y, params) == pytest.approx(expected, rel=1e-10)
    assert ssd.log_survival(1500.0, params) < -1400.0


def test_negative_x_rejected(unit_params):
    for fn in (ssd.pdf, ssd.cdf, ssd.survival, ssd.mean_residual_life):
        with pytest.raises(DomainError):
            fn(-1.0, unit_params)
    with pytest.raises(DomainError):
        ssd.hazard(0.0, unit_params)


# --------------------------------------------------------------------------- #
# Formula consistency across the parameter grid
# --------------------------------------------------------------------------- #

@pytest.mark.parametrize("params", grid_params(), ids=grid_ids())
def test_pdf_normalizes(params):
    assert integrate(lambda x: ssd.pdf(x, params), 0.0).value == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("params", grid_params(), ids=grid_ids())
def test_cdf_matches_quadrature(params):
    for u in (0.1, 0.5, 0.9):
        x = ssd.quantile(u, params)
        area = integrate(lambda t: ssd.pdf(t, params), 0.0, x).value
        assert ssd.cdf(x, params) == pytest.approx(area, abs=1e-8)


@pytest.mark.parametrize("params", grid_params(), ids=grid_ids())
def test_cdf_slope_is_pdf(params):
    xs = np.linspace(0.05, 3.0 * ssd.mean(params), 50)
    h = 1e-5 / params.theta
    for x in xs:
        slope = finite_diff(lambda v: ssd.cdf(v, params), x, h)
        assert slope == pytest.approx(ssd.pdf(x, params), abs=1e-6)


@pytest.mark.parametrize("params", grid_params(), ids=grid_ids())
def test_raw_moments_match_quadrature(params):
    for r in (1, 2, 3, 4):
        numeric = integrate(lambda x: x ** r * ssd.pdf(x, params), 0.0).value
        assert ssd.raw_moment(r, params) == pytest.approx(numeric, rel=1e-6)


@pytest.mark.parametrize("params", grid_params(), ids=grid_ids())
def test_variance_matches_quadrature(params):
    mu = ssd.mean(params)
    numeric = integrate(lambda x: (x - mu) ** 2 * ssd.pdf(x, params), 0.0).value
    assert ssd.variance(params) == pytest.approx(numeric, rel=1e-6)
    assert ssd.variance(params) > 0


@pytest.mark.parametrize("params", grid_params(), ids=grid_ids())
def test_mgf_matches_quadrature(params):
    for t in (-params.theta, 0.25 * params.theta, 0.5 * params.theta):
        # Combined in log space: e^(tx) alone overflows at the far nodes.
        numeric = integrate(lambda x: math.exp(t * x + ssd.log_pdf(x, params)) if x > 0 else 0.0, 0.0).value
        assert ssd.mgf(t, params) == pytest.approx(numeric, rel=1e-8)


@pytest.mark.parametrize("params", grid_params(), ids=grid_ids())
def test_mean_residual_life_matches_defining_integral(params):
    x = ssd.quantile(0.5, params)
    numeric = integrate(lambda t: ssd.survival(t, params), x).value / ssd.survival(x, params)
    assert ssd.mean_residual_life(x, params) == pytest.approx(numeric, rel=1e-6)


@pytest.mark.parametrize("params", grid_params(), ids=grid_ids())
def test_lorenz_matches_partial_mean(params):
    for p in (0.25, 0.5, 0.75):
        q = ssd.quantile(p, params)
        numeric = integrate(lambda x: x * ssd.pdf(x, params), 0.0, q).value / ssd.mean(params)
        assert ssd.lorenz(p, params) == pytest.approx(numeric, abs=1e-6)
        assert ssd.bonferroni(p, params) * p == pytest.approx(ssd.lorenz(p, params), rel=1e-12)


@pytest.mark.parametrize("params", grid_params(), ids=grid_ids())
def test_order_statistic_pdf_normalizes(params):
    assert integrate(lambda y: ssd.order_stat_pdf(y, 2, 3, params), 0.0).value == pytest.approx(1.0, abs=1e-6)


# --------------------------------------------------------------------------- #
# Collapse and mixture identities
# --------------------------------------------------------------------------- #

@pytest.mark.parametrize("theta", [0.2, 1.0, 2.7713, 5.0])
def test_alpha_zero_is_gamma_two(theta):
    params = SsdParams(0.0, theta)
    reference = stats.gamma(a=2.0, scale=1.0 / theta)
    xs = np.linspace(0.01, 10.0 / theta, 40)
    np.testing.assert_allclose(ssd.pdf(xs, params), reference.pdf(xs), rtol=1e-12)
    np.testing.assert_allclose(ssd.cdf(xs, params), reference.cdf(xs), rtol=1e-12, atol=1e-15)
    for r in (1, 2, 3, 4):
        assert ssd.raw_moment(r, params) == pytest.approx(reference.moment(r), rel=1e-12)


def test_corrected_mgf_equals_component_mixture():
    rng = np.random.default_rng(3)
    for _ in range(20):
        alpha, theta = rng.uniform(0.0, 8.0), rng.uniform(0.2, 5.0)
        t = rng.uniform(-2.0, 0.95) * theta
        params = SsdParams(alpha, theta)
        p = ssd.mixing_weight(params)
        ratio = theta / (theta - t)
        expected = p * ratio ** 2 + (1.0 - p) * ratio ** (alpha + 2.0)
        assert ssd.mgf(t, params) == pytest.approx(expected, rel=1e-12)


def test_mgf_examples():
    assert ssd.mgf(0.0, SsdParams(3.0, 1.7)) == pytest.approx(1.0, rel=1e-15)
    assert ssd.mgf(1.0, SsdParams(1.0, 2.0)) == pytest.approx(6.0, rel=1e-12)


def test_mgf_diverges_at_theta():
    with pytest.raises(DivergenceError):
        ssd.mgf(2.0, SsdParams(1.0, 2.0))
    with pytest.raises(DomainError):
        ssd.mgf(5.0, SsdParams(1.0, 2.0))


def test_characteristic_function():
    params = SsdParams(1.0, 2.0)
    assert ssd.characteristic_function(0.0, params) == pytest.approx(1.0 + 0.0j)
    for t in (0.5, -0.5, 1.0, -1.0, 5.0, -5.0):
        assert abs(ssd.characteristic_function(t, params)) <= 1.0 + 1e-15
    real = integrate(lambda x: math.cos(x) * ssd.pdf(x, params), 0.0).value
    imag = integrate(lambda x: math.sin(x) * ssd.pdf(x, params), 0.0).value
    phi = ssd.characteristic_function(1.0, params)
    assert phi.real == pytest.approx(real, abs=1e-8)
    assert phi.imag == pytest.approx(imag, abs=1e-8)


# --------------------------------------------------------------------------- #
# Moments
# --------------------------------------------------------------------------- #

def test_moment_examples(unit_params):
    assert ssd.raw_moment(0, unit_params) == 1.0
    assert ssd.raw_moment(1, unit_params) == pytest.approx(8.0 / 3.0, rel=1e-12)
    assert ssd.raw_moment(2, unit_params) == pytest.approx(10.0, rel=1e-12)
    assert ssd.variance(unit_params) == pytest.approx(26.0 / 9.0, rel=1e-12)
    assert ssd.variance(SsdParams(0.0, 1.0)) == pytest.approx(2.0, rel=1e-12)


def test_moments_summary_for_gamma_two():
    summary = ssd.moments_summary(SsdParams(0.0, 1.0))
    assert summary['mean'] == pytest.approx(2.0)
    assert summary['cv'] == pytest.approx(1.0 / math.sqrt(2.0))
    assert summary['skewness'] == pytest.approx(2.0 / math.sqrt(2.0))
    assert summary['kurtosis'] == pytest.approx(3.0 + 6.0 / 2.0)


# --------------------------------------------------------------------------- #
# Hazard and mean residual life
# --------------------------------------------------------------------------- #

def test_hazard_examples(unit_params):
    assert ssd.hazard(1.0, unit_params) == pytest.approx(PDF_1 / SURVIVAL_1, rel=1e-9)
    assert ssd.hazard(1e-9, unit_params) < 1e-8
    assert ssd.hazard_derivative_at_zero(unit_params) == pytest.approx(1.0 / 3.0, rel=1e-12)


@pytest.mark.parametrize("alpha", [1.0, 2.0, 5.0, 10.0])
@pytest.mark.parametrize("theta", [0.2, 1.0, 2.7713, 5.0])
def test_hazard_slope_at_origin(alpha, theta):
    params = SsdParams(alpha, theta)
    eps = 1e-7 / theta
    slope = (ssd.hazard(2 * eps, params) - ssd.hazard(eps, params)) / eps
    expected = theta ** (alpha + 2) / (math.gamma(alpha + 2) + theta ** alpha)
    assert slope == pytest.approx(expected, rel=1e-4)
    assert ssd.hazard_derivative_at_zero(params) == pytest.approx(expected, rel=1e-12)


def test_hazard_slope_doubles_at_alpha_zero():
    params = SsdParams(0.0, 1.5)
    assert ssd.hazard_derivative_at_zero(params) == pytest.approx(1.5 ** 2, rel=1e-12)
    eps = 1e-7
    assert (ssd.hazard(2 * eps, params) - ssd.hazard(eps, params)) / eps == pytest.approx(1.5 ** 2, rel=1e-4)


# Log-concave densities (alpha <= 2) and gamma-dominated ones (small theta).
MONOTONE_HAZARD = ([(a, t) for a in (0.0, 0.5, 1.0, 2.0) for t in (0.2, 1.0, 2.7713, 5.0)]
                   + [(a, t) for a in (5.0, 10.0) for t in (0.2, 1.0)])


@pytest.mark.parametrize("alpha, theta", MONOTONE_HAZARD)
def test_hazard_nondecreasing(alpha, theta):
    params = SsdParams(alpha, theta)
    h = ssd.hazard(geometric_grid(1e-3 / theta, 50.0 / theta), params)
    assert np.all(np.isfinite(h))
    assert np.all(np.diff(h) >= -1e-9 * h[1:])


def test_hazard_dips_when_components_separate():
    # At (5, 2.7713) the exponential-like component wears out before the
    # gamma(7) component takes over, so the hazard falls between y = 1 and y = 2.
    params = SsdParams(5.0, 2.7713)
    assert ssd.hazard(1.0 / params.theta, params) > ssd.hazard(2.0 / params.theta, params)
    assert ssd.hazard_derivative_at_zero(params) > 0


def test_hazard_finite_far_in_tail():
    params = SsdParams(2.0, 1.0)
    assert ssd.hazard(500.0, params) == pytest.approx(1.0, rel=1e-2)


def test_mean_residual_life_examples(unit_params):
    assert ssd.mean_residual_life(0.0, unit_params) == pytest.approx(8.0 / 3.0, rel=1e-10)
    numeric = integrate(lambda t: t * ssd.pdf(t, unit_params), 2.0).value / ssd.survival(2.0, unit_params) - 2.0
    assert ssd.mean_residual_life(2.0, unit_params) == pytest.approx(numeric, abs=1e-6)
    assert np.all(ssd.mean_residual_life(np.linspace(0.1, 10.0, 100), unit_params) >= 0)


@pytest.mark.parametrize("params", grid_params(), ids=grid_ids())
def test_mean_residual_life_at_zero_is_mean(params):
    assert ssd.mean_residual_life(0.0, params) == pytest.approx(ssd.mean(params), rel=1e-10)


def test_mean_residual_life_hazard_duality(unit_params):
    for x in np.linspace(0.5, 10.0, 20):
        slope = finite_diff(lambda v: ssd.mean_residual_life(v, unit_params), x)
        expected = ssd.mean_residual_life(x, unit_params) * ssd.hazard(x, unit_params) - 1.0
        assert slope == pytest.approx(expected, abs=1e-4)


def test_tail_partial_mean(unit_params):
    assert ssd.tail_partial_mean(0.0, unit_params) == pytest.approx(8.0 / 3.0, rel=1e-12)
    numeric = integrate(lambda x: x * ssd.pdf(x, unit_params), 2.0).value
    assert ssd.tail_partial_mean(2.0, unit_params) == pytest.approx(numeric, abs=1e-8)
    values = ssd.tail_partial_mean(np.linspace(0.0, 20.0, 41), unit_params)
    assert np.all(np.diff(values) < 0)


@pytest.mark.parametrize("x", [700.0, 800.0, 1000.0])
def test_mean_residual_life_far_tail(unit_params, x):
    # alpha=1, theta=1: p = 1/3, and m(x) is a ratio of polynomials in x.
    tail = 2.0 / 3.0 * (1 + x + x * x / 2) + 2.0 * (1 + x + x * x / 2 + x ** 3 / 6)
    surv = (1 + x) / 3.0 + 2.0 / 3.0 * (1 + x + x * x / 2)
    expected = tail / surv - x
    assert ssd.mean_residual_life(x, unit_params) == pytest.approx(expected, rel=1e-8)
    assert ssd.log_tail_partial_mean(x, unit_params) < -600
    curves = ssd.theoretical_curves(unit_params, 0.01, 1000.0, 5)
    assert np.all(np.asarray(curves['mrl'].ys) > 0)


# --------------------------------------------------------------------------- #
# Quantile, entropy, inequality curves
# --------------------------------------------------------------------------- #

def test_quantile(unit_params):
    assert ssd.quantile(CDF_1, unit_params) == pytest.approx(1.0, abs=1e-8)
    for x in (0.5, 1.0, 2.0, 5.0):
        assert ssd.quantile(ssd.cdf(x, unit_params), unit_params) == pytest.approx(x, abs=1e-7)
    tiny = ssd.quantile(1e-9, unit_params)
    assert tiny > 0
    assert ssd.cdf(tiny, unit_params) == pytest.approx(1e-9, rel=1e-6)
    for u in (0.0, 1.0, -0.2):
        with pytest.raises(DomainError):
            ssd.quantile(u, unit_params)


def test_renyi_entropy_example(unit_params):
    assert ssd.renyi_entropy(2, unit_params) == pytest.approx(-math.log(7.0 / 36.0), rel=1e-12)
    method, _ = ssd.renyi_entropy_with_method(2, unit_params)
    assert method == "closed"
    method, _ = ssd.renyi_entropy_with_method(2.5, unit_params)
    assert method == "quadrature"


@pytest.mark.parametrize("order", [2, 3])
@pytest.mark.parametrize("alpha", [1.0, 2.0])
@pytest.mark.parametrize("theta", [0.5, 1.0, 2.0])
def test_renyi_closed_form_matches_quadrature(order, alpha, theta):
    params = SsdParams(alpha, theta)
    closed = ssd.renyi_entropy(order, params, method="closed")
    numeric = ssd.renyi_entropy(order, params, method="quadrature")
    assert closed == pytest.approx(numeric, abs=1e-6)


def test_renyi_entropy_scales_with_rate():
    # H(X / c) = H(X) - log c
    base = SsdParams(1.5, 1.0)
    c = 2.0
    shifted = ssd.renyi_entropy(2.5, base) - math.log(c)
    scaled_integral = integrate(lambda x: (c * ssd.pdf(c * x, base)) ** 2.5, 0.0).value
    assert shifted == pytest.approx(math.log(scaled_integral) / (1.0 - 2.5), abs=1e-6)


def test_renyi_entropy_rejects_bad_orders(unit_params):
    with pytest.raises(DomainError):
        ssd.renyi_entropy(1.0, unit_params)
    with pytest.raises(DomainError):
        ssd.renyi_entropy(0.0, unit_params)
    with pytest.raises(DomainError):
        ssd.renyi_entropy(2.5, unit_params, method="closed")


def test_lorenz_properties(unit_params):
    assert ssd.lorenz(1.0, unit_params) == 1.0
    ps = np.linspace(0.1, 0.9, 9)
    values = np.array([ssd.lorenz(p, unit_params) for p in ps])
    assert np.all(values <= ps)
    assert np.all(np.diff(values, 2) >= -1e-8)
    assert ssd.bonferroni(0.5, unit_params) == pytest.approx(2.0 * ssd.lorenz(0.5, unit_params))
    assert ssd.bonferroni(0.999999, unit_params) == pytest.approx(1.0, abs=1e-3)
    with pytest.raises(DomainError):
        ssd.lorenz(0.0, unit_params)
    with pytest.raises(DomainError):
        ssd.bonferroni(1.0, unit_params)


# --------------------------------------------------------------------------- #
# Order statistics and TTT
# --------------------------------------------------------------------------- #

def test_order_statistics(unit_params):
    assert ssd.order_stat_pdf(1.3, 1, 1, unit_params) == pytest.approx(ssd.pdf(1.3, unit_params), rel=1e-12)
    assert ssd.order_stat_cdf(1.3, 1, 1, unit_params) == pytest.approx(ssd.cdf(1.3, unit_params), rel=1e-12)
    expected_max = 3 * CDF_1 ** 2 * PDF_1
    assert ssd.order_stat_pdf(1.0, 3, 3, unit_params) == pytest.approx(expected_max, rel=1e-8)
    assert ssd.order_stat_cdf(1.0, 1, 3, unit_params) == pytest.approx(1.0 - SURVIVAL_1 ** 3, rel=1e-8)
    assert ssd.order_stat_cdf(1.0, 1, 3, unit_params) == pytest.approx(0.3675198, abs=1e-6)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_order_statistic_pdf_integrates_to_one(unit_params, k):
    assert integrate(lambda y: ssd.order_stat_pdf(y, k, 3, unit_params), 0.0).value == pytest.approx(1.0, abs=1e-6)


def test_order_statistic_forms_agree(unit_params):
    for y in (0.3, 1.0, 2.5, 6.0):
        for k in (1, 2, 4):
            assert ssd.order_stat_pdf_expanded(y, k, 4, unit_params) == pytest.approx(
                ssd.order_stat_pdf(y, k, 4, unit_params), rel=1e-9, abs=1e-14)
            assert ssd.order_stat_cdf_expanded(y, k, 4, unit_params) == pytest.approx(
                ssd.order_stat_cdf(y, k, 4, unit_params), rel=1e-9, abs=1e-14)
    area = integrate(lambda t: ssd.order_stat_pdf(t, 2, 3, unit_params), 0.0, 1.5).value
    assert ssd.order_stat_cdf(1.5, 2, 3, unit_params) == pytest.approx(area, abs=1e-6)
    with pytest.raises(DomainError):
        ssd.order_stat_pdf(1.0, 4, 3, unit_params)


def test_ttt_transform(unit_params):
    assert ssd.ttt_transform(0.0, unit_params) == 0.0
    assert ssd.ttt_transform(1.0, unit_params) == pytest.approx(1.0, abs=1e-6)
    us = np.linspace(0.0, 1.0, 11)
    phi = np.array([ssd.ttt_transform(u, unit_params) for u in us])
    assert np.all(np.diff(phi) >= 0)
    assert np.all(np.diff(phi, 2) <= 1e-8)
    with pytest.raises(DomainError):
        ssd.ttt_transform(1.5, unit_params)


# --------------------------------------------------------------------------- #
# Sampling
# --------------------------------------------------------------------------- #

def test_sampling_is_deterministic():
    params = SsdParams(2.0, 1.5)
    np.testing.assert_array_equal(ssd.draw(100, params, seed=5), ssd.draw(100, params, seed=5))
    data = ssd.sample(100, params, seed=5)
    assert isinstance(data, Dataset)
    assert data.n == 100


def test_sample_mean_within_clt_bound(unit_params):
    data = ssd.sample(10_000, unit_params, seed=7)
    sigma = math.sqrt(ssd.variance(unit_params))
    assert abs(data.mean - 8.0 / 3.0) < 3.0 * sigma / math.sqrt(10_000)


@pytest.mark.parametrize("alpha, theta", [(1.0, 1.0), (3.0, 1.5), (0.5, 0.2)])
def test_sample_passes_ks(alpha, theta):
    params = SsdParams(alpha, theta)
    draws = ssd.draw(10_000, params, seed=1234)
    assert stats.kstest(draws, lambda x: ssd.cdf(x, params)).pvalue > 0.01


def test_alpha_zero_sampler_is_a_gamma_two_sampler():
    params = SsdParams(0.0, 2.0)
    rng = np.random.default_rng(99)
    rng.random(500)
    expected = rng.gamma(shape=np.full(500, 2.0), scale=0.5)
    np.testing.assert_array_equal(ssd.draw(500, params, seed=99), expected)


def test_sample_size_validated(unit_params):
    with pytest.raises(DomainError):
        ssd.draw(0, unit_params, seed=1)


# --------------------------------------------------------------------------- #
# Curve series
# --------------------------------------------------------------------------- #

def test_theoretical_curves(unit_params):
    curves = ssd.theoretical_curves(unit_params, 0.5, 1.5, 3)
    assert set(curves) == {'pdf', 'cdf', 'hazard', 'survival', 'mrl'}
    assert curves['pdf'].ys[1] == pytest.approx(PDF_1, rel=1e-12)
    assert curves['cdf'].xs.tolist() == [0.5, 1.0, 1.5]


def test_lorenz_curves(unit_params):
    series = ssd.lorenz_curves(unit_params)
    lor = series['lorenz'].ys
    assert len(lor) == 99
    assert lor[-1] < 1.0
    assert np.all(np.diff(lor) > 0)


def test_curve_series_rejects_unordered_x():
    with pytest.raises(DomainError):
        ssd.CurveSeries.from_arrays('bad', [0.0, 0.0], [1.0, 2.0])
    with pytest.raises(DomainError):
        ssd.CurveSeries.from_arrays('bad', [0.0, 1.0], [1.0, math.nan])
