"""The SSD lifetime distribution.

SSD(alpha, theta) is the convex mixture

    f(x) = p * gamma(x; 2, theta) + (1 - p) * gamma(x; alpha + 2, theta),
    p    = theta^alpha / (theta^alpha + Gamma(alpha + 2)),

which is the same density as

    f(x) = theta^(alpha+2) / (theta^alpha + Gamma(alpha+2)) * e^(-theta x) (x + x^(alpha+1)).

alpha is a nonnegative real (Gamma(alpha + 2) plays the role of (alpha + 1)!);
alpha = 0 collapses to gamma(2, theta), the length-biased exponential.

Every function accepts scalars or numpy arrays for its x-like argument and
returns a float for scalar input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import special, stats
from scipy.optimize import brentq

import oracle
import specfun
from data_loader import Dataset
from errors import DivergenceError, DomainError

# Beyond theta*x = TAIL_SWITCH survival and hazard are evaluated in log space.
TAIL_SWITCH = 30.0
QUANTILE_TOL = 1e-10
LORENZ_POINTS = 99


@dataclass(frozen=True)
class SsdParams:
    """Immutable (alpha, theta) pair with the derived mixing weight."""

    alpha: float
    theta: float

    def __post_init__(self):
        alpha, theta = float(self.alpha), float(self.theta)
        if not math.isfinite(theta) or theta <= 0:
            raise DomainError(f"theta must be finite and > 0, got {self.theta!r}")
        if not math.isfinite(alpha) or alpha < 0:
            raise DomainError(f"alpha must be finite and >= 0, got {self.alpha!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "theta", theta)

    @cached_property
    def log_theta(self) -> float:
        return math.log(self.theta)

    @cached_property
    def _logit_weight(self) -> float:
        # log(theta^alpha) - log Gamma(alpha + 2)
        return self.alpha * self.log_theta - special.gammaln(self.alpha + 2.0)

    @cached_property
    def weight(self) -> float:
        """Mixing weight p of the gamma(2, theta) component."""
        return float(special.expit(self._logit_weight))

    @cached_property
    def log_weight(self) -> float:
        return float(special.log_expit(self._logit_weight))

    @cached_property
    def log_complement_weight(self) -> float:
        return float(special.log_expit(-self._logit_weight))

    @cached_property
    def log_normalizer(self) -> float:
        """log of theta^(alpha+2) / (theta^alpha + Gamma(alpha+2))."""
        log_den = np.logaddexp(self.alpha * self.log_theta, special.gammaln(self.alpha + 2.0))
        return float((self.alpha + 2.0) * self.log_theta - log_den)

    @property
    def second_shape(self) -> float:
        return self.alpha + 2.0


@dataclass(frozen=True)
class CurveSeries:
    """Labelled (x, y) series with strictly increasing x and finite y."""

    label: str
    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.points)
        xs = [x for x, _ in pts]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise DomainError(f"curve '{self.label}' x values must be strictly increasing")
        if not all(math.isfinite(y) for _, y in pts):
            raise DomainError(f"curve '{self.label}' contains non-finite values")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_arrays(cls, label, xs, ys):
        return cls(label, tuple(zip(np.asarray(xs, dtype=float).tolist(), np.asarray(ys, dtype=float).tolist())))

    @property
    def xs(self) -> np.ndarray:
        return np.array([x for x, _ in self.points])

    @property
    def ys(self) -> np.ndarray:
        return np.array([y for _, y in self.points])


def _unwrap(value):
    arr = np.asarray(value)
    return float(arr) if arr.ndim == 0 else arr


def _nonnegative(name, x):
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError(f"{name} must be >= 0, got {x!r}")
    return arr


def gamma_components(params: SsdParams):
    """The two mixture components as (weight, frozen scipy gamma) pairs."""
    scale = 1.0 / params.theta
    return ((params.weight, stats.gamma(a=2.0, scale=scale)),
            (1.0 - params.weight, stats.gamma(a=params.second_shape, scale=scale)))


def mixing_weight(params: SsdParams) -> float:
    """p = theta^alpha / (theta^alpha + Gamma(alpha + 2))."""
    return params.weight


def log_pdf(x, params: SsdParams):
    x = _nonnegative("x", x)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_x = np.log(x)
        # log(x + x^(alpha+1)) = log x + log(1 + x^alpha)
        out = (params.log_normalizer - params.theta * x + log_x
               + np.logaddexp(0.0, params.alpha * log_x))
    return _unwrap(np.where(x == 0, -np.inf, out))


def pdf(x, params: SsdParams):
    """Density; zero at x = 0."""
    return _unwrap(np.exp(log_pdf(x, params)))


def cdf(x, params: SsdParams):
    """F(x) = p P(2, theta x) + (1 - p) P(alpha + 2, theta x)."""
    y = params.theta * _nonnegative("x", x)
    p = params.weight
    return _unwrap(p * special.gammainc(2.0, y) + (1.0 - p) * special.gammainc(params.second_shape, y))


def log_survival(x, params: SsdParams):
    """log S(x), finite far into the tail."""
    y = params.theta * _nonnegative("x", x)
    # log Q(2, y) = log(1 + y) - y exactly
    first = params.log_weight + np.log1p(y) - y
    second = params.log_complement_weight + np.asarray(
        specfun.log_regularized_upper_gamma(params.second_shape, y))
    return _unwrap(np.logaddexp(first, second))


def survival(x, params: SsdParams):
    """S(x) = 1 - F(x), computed without cancellation."""
    y = params.theta * _nonnegative("x", x)
    p = params.weight
    near = p * special.gammaincc(2.0, y) + (1.0 - p) * special.gammaincc(params.second_shape, y)
    if np.all(y <= TAIL_SWITCH):
        return _unwrap(near)
    return _unwrap(np.where(y <= TAIL_SWITCH, near, np.exp(log_survival(x, params))))


def hazard(x, params: SsdParams):
    """h(x) = f(x) / S(x) for x > 0, evaluated as exp(log f - log S)."""
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr <= 0):
        raise DomainError(f"hazard needs x > 0, got {x!r}")
    return _unwrap(np.exp(np.asarray(log_pdf(arr, params)) - np.asarray(log_survival(arr, params))))


def hazard_derivative_at_zero(params: SsdParams) -> float:
    """
    Right-hand slope of the hazard at the origin.

    For alpha > 0 this is theta^(alpha+2) / (Gamma(alpha+2) + theta^alpha);
    at alpha = 0 both components contribute a linear term and the slope
    doubles (gamma(2, theta) has h'(0) = theta^2).
    """
    slope = math.exp(params.log_normalizer)
    return 2.0 * slope if params.alpha == 0 else slope


def tail_partial_mean(q, params: SsdParams):
    """int_q^inf x f(x) dx."""
    return _unwrap(np.exp(np.asarray(log_tail_partial_mean(q, params))))


def log_tail_partial_mean(q, params: SsdParams):
    """
    log int_q^inf x f(x) dx, finite far into the tail.

    Equal to theta^(alpha+2)/(Gamma(alpha+2)+theta^alpha) *
    [(theta^2 q^2 + 2 theta q + 2) e^(-theta q) / theta^3 + Gamma(alpha+3, theta q) / theta^(alpha+3)],
    formed here as p (2/theta) Q(3, theta q) + (1-p) ((alpha+2)/theta) Q(alpha+3, theta q).
    """
    y = params.theta * _nonnegative("q", q)
    # log Q(3, y) = log(1 + y + y^2/2) - y
    first = params.log_weight + math.log(2.0 / params.theta) + np.log1p(y + 0.5 * y * y) - y
    second = (params.log_complement_weight + math.log(params.second_shape / params.theta)
              + np.asarray(specfun.log_regularized_upper_gamma(params.alpha + 3.0, y)))
    return _unwrap(np.logaddexp(first, second))


def mean_residual_life(x, params: SsdParams):
    """m(x) = E(X - x | X > x); m(0) is the mean."""
    x = _nonnegative("x", x)
    tail = np.asarray(log_tail_partial_mean(x, params))
    return _unwrap(np.exp(tail - np.asarray(log_survival(x, params))) - x)


def raw_moment(r: int, params: SsdParams) -> float:
    """
    E[X^r] = theta^(alpha-r) / (Gamma(alpha+2) + theta^alpha) * [(r+1)! + Gamma(alpha+r+2) / theta^alpha].

    r = 0 returns the total mass 1.
    """
    if int(r) != r or r < 0:
        raise DomainError(f"moment order must be a nonnegative integer, got {r!r}")
    r = int(r)
    if r == 0:
        return 1.0
    log_scale = -r * params.log_theta
    first = params.log_weight + special.gammaln(r + 2.0) + log_scale
    second = (params.log_complement_weight + special.gammaln(params.alpha + r + 2.0)
              - special.gammaln(params.alpha + 2.0) + log_scale)
    return float(np.exp(np.logaddexp(first, second)))


def mean(params: SsdParams) -> float:
    return raw_moment(1, params)


def variance(params: SsdParams) -> float:
    return raw_moment(2, params) - raw_moment(1, params) ** 2


def moments_summary(params: SsdParams) -> dict:
    """Mean, variance, sd, coefficient of variation, skewness and kurtosis."""
    m1, m2, m3, m4 = (raw_moment(r, params) for r in (1, 2, 3, 4))
    var = m2 - m1 ** 2
    sd = math.sqrt(var)
    return {
        'mean': m1,
        'variance': var,
        'sd': sd,
        'cv': sd / m1,
        'skewness': (m3 - 3 * m1 * m2 + 2 * m1 ** 3) / sd ** 3,
        'kurtosis': (m4 - 4 * m1 * m3 + 6 * m1 ** 2 * m2 - 3 * m1 ** 4) / var ** 2,
    }


def mgf(t: float, params: SsdParams) -> float:
    """
    Moment generating function, defined for t < theta.

    M(t) = theta^(alpha+2) [(theta-t)^alpha + Gamma(alpha+2)] / [(theta-t)^(alpha+2) (theta^alpha + Gamma(alpha+2))]
         = p (theta/(theta-t))^2 + (1-p) (theta/(theta-t))^(alpha+2)
    """
    t = float(t)
    if t >= params.theta:
        raise DivergenceError(f"mgf diverges for t >= theta ({t} >= {params.theta})")
    log_ratio = params.log_theta - math.log(params.theta - t)
    return float(np.exp(np.logaddexp(params.log_weight + 2.0 * log_ratio,
                                      params.log_complement_weight + params.second_shape * log_ratio)))


def characteristic_function(t: float, params: SsdParams) -> complex:
    """phi(t) = M(it), principal branch (theta - it has positive real part)."""
    log_ratio = np.log(params.theta / (params.theta - 1j * float(t)))
    value = (params.weight * np.exp(2.0 * log_ratio)
             + (1.0 - params.weight) * np.exp(params.second_shape * log_ratio))
    return complex(value)


def quantile(u: float, params: SsdParams) -> float:
    """
    Inverse cdf for 0 < u < 1.

    The bracket [0, hi] is grown by doubling from the mean, Brent's method
    narrows it, and a Newton step on the pdf polishes the root until
    |F(x) - u| <= 1e-10 where double precision allows.
    """
    u = float(u)
    if not 0.0 < u < 1.0:
        raise DomainError(f"quantile needs 0 < u < 1, got {u}")
    hi = mean(params)
    while cdf(hi, params) < u:
        hi *= 2.0
    x = brentq(lambda v: cdf(v, params) - u, 0.0, hi, xtol=1e-300, rtol=1e-15, maxiter=500)
    for _ in range(3):
        resid = cdf(x, params) - u
        if abs(resid) <= QUANTILE_TOL:
            break
        density = pdf(x, params)
        if density <= 0:
            break
        step = x - resid / density
        if not 0.0 < step < hi:
            break
        x = step
    return float(x)


def renyi_entropy(order: float, params: SsdParams, method: str = "auto") -> float:
    """
    Renyi entropy (1/(1-order)) log int f^order dx.

    Args:
        order: Entropy order, > 0 and != 1.
        params: Distribution parameters.
        method: "auto" uses the binomial closed form for integer order >= 2
            with integer alpha and quadrature otherwise; "closed" forces the
            closed form (valid for any alpha when order is an integer);
            "quadrature" forces numerical integration.

    Returns:
        float: entropy value.
    """
    _, value = renyi_entropy_with_method(order, params, method)
    return value


def _is_integer(value):
    return float(value).is_integer()


def renyi_entropy_with_method(order: float, params: SsdParams, method: str = "auto"):
    """Same as renyi_entropy, also returning the evaluation path used."""
    order = float(order)
    if order <= 0:
        raise DomainError(f"Renyi order must be > 0, got {order}")
    if order == 1:
        raise DomainError("Renyi order 1 is the Shannon limit, which is not provided")
    if method not in ("auto", "closed", "quadrature"):
        raise DomainError(f"unknown Renyi method {method!r}")

    integer_order = _is_integer(order) and order >= 2
    if method == "auto":
        method = "closed" if integer_order and _is_integer(params.alpha) else "quadrature"
    if method == "closed" and not integer_order:
        raise DomainError(f"closed-form Renyi entropy needs an integer order >= 2, got {order}")

    if method == "closed":
        g = int(order)
        k = np.arange(g + 1, dtype=float)
        power = params.alpha * k + g + 1.0
        log_binom = special.gammaln(g + 1.0) - special.gammaln(k + 1.0) - special.gammaln(g - k + 1.0)
        log_terms = log_binom + special.gammaln(power) - power * math.log(params.theta * g)
        log_integral = g * params.log_normalizer + special.logsumexp(log_terms)
    else:
        # Scale the integrand by its value at the mode so quadrature works near 1.
        log_peak = float(np.max(log_pdf(np.linspace(1e-6, quantile(0.999, params), 400), params)))
        shift = order * log_peak
        integral = oracle.integrate(
            lambda v: math.exp(order * log_pdf(v, params) - shift) if v > 0 else 0.0, 0.0).value
        log_integral = math.log(integral) + shift
    return method, float(log_integral / (1.0 - order))


def lorenz(p: float, params: SsdParams) -> float:
    """L(p) = 1 - int_q^inf x f(x) dx / mean with q = F^-1(p); L(1) = 1."""
    p = float(p)
    if not 0.0 < p <= 1.0:
        raise DomainError(f"Lorenz curve needs 0 < p <= 1, got {p}")
    if p == 1.0:
        return 1.0
    q = quantile(p, params)
    return float(1.0 - tail_partial_mean(q, params) / mean(params))


def bonferroni(p: float, params: SsdParams) -> float:
    """B(p) = L(p) / p for 0 < p < 1."""
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"Bonferroni curve needs 0 < p < 1, got {p}")
    return lorenz(p, params) / p


def _order_check(k, n):
    if int(k) != k or int(n) != n or not 1 <= k <= n:
        raise DomainError(f"order statistic needs integers 1 <= k <= n, got k={k!r}, n={n!r}")
    return int(k), int(n)


def order_stat_pdf(y, k: int, n: int, params: SsdParams):
    """Density of the k-th smallest of n draws: Beta(k, n-k+1) density at F(y) times f(y)."""
    k, n = _order_check(k, n)
    F = np.asarray(cdf(y, params))
    return _unwrap(stats.beta.pdf(F, k, n - k + 1) * np.asarray(pdf(y, params)))


def order_stat_pdf_expanded(y, k: int, n: int, params: SsdParams):
    """n!/((k-1)!(n-k)!) sum_l C(n-k, l) (-1)^l F^(k+l-1) f. Alternating; small n only."""
    k, n = _order_check(k, n)
    F = np.asarray(cdf(y, params))
    coef = math.factorial(n) / (math.factorial(k - 1) * math.factorial(n - k))
    total = sum(math.comb(n - k, l) * (-1) ** l * F ** (k + l - 1) for l in range(n - k + 1))
    return _unwrap(coef * total * np.asarray(pdf(y, params)))


def order_stat_cdf(y, k: int, n: int, params: SsdParams):
    """sum_{j=k}^n C(n, j) F^j (1-F)^(n-j), evaluated as the regularized incomplete beta I_F(k, n-k+1)."""
    k, n = _order_check(k, n)
    F = np.asarray(cdf(y, params))
    return _unwrap(special.betainc(k, n - k + 1, F))


def order_stat_cdf_expanded(y, k: int, n: int, params: SsdParams):
    """Double-sum form sum_i sum_l C(n,i) C(n-i,l) (-1)^l F^(i+l). Small n only."""
    k, n = _order_check(k, n)
    F = np.asarray(cdf(y, params))
    total = sum(math.comb(n, i) * math.comb(n - i, l) * (-1) ** l * F ** (i + l)
                for i in range(k, n + 1) for l in range(n - i + 1))
    return _unwrap(total)


def ttt_transform(u: float, params: SsdParams) -> float:
    """
    Scaled total-time-on-test transform (1/mean) int_0^{F^-1(u)} S(t) dt.

    phi(0) = 0 and phi(1) = 1; phi is concave when the hazard increases.
    """
    u = float(u)
    if not 0.0 <= u <= 1.0:
        raise DomainError(f"TTT transform needs 0 <= u <= 1, got {u}")
    if u == 0.0:
        return 0.0
    upper = math.inf if u == 1.0 else quantile(u, params)
    area = oracle.integrate(lambda t: survival(t, params), 0.0, upper).value
    return float(area / mean(params))


def draw(n: int, params: SsdParams, seed=None) -> np.ndarray:
    """
    Draw n values by composition: a Bernoulli(p) choice of component, then
    a gamma(2, theta) or gamma(alpha+2, theta) variate.

    Args:
        n: Number of draws, >= 1.
        params: Distribution parameters.
        seed: Unsigned integer seed or a caller-owned numpy Generator.

    Returns:
        np.ndarray: draws in generation order.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"sample size must be a positive integer, got {n!r}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    first = rng.random(int(n)) < params.weight
    shapes = np.where(first, 2.0, params.second_shape)
    return rng.gamma(shape=shapes, scale=1.0 / params.theta)


def sample(n: int, params: SsdParams, seed=None) -> Dataset:
    """Seeded sample as a Dataset (values sorted ascending)."""
    values = draw(n, params, seed)
    label = f"ssd(alpha={params.alpha:g}, theta={params.theta:g}) seed={seed if not isinstance(seed, np.random.Generator) else 'generator'}"
    return Dataset.from_values(values, label)


def theoretical_curves(params: SsdParams, x_min: float, x_max: float, points: int) -> dict:
    """pdf, cdf, hazard, survival and MRL series on an evenly spaced grid over [x_min, x_max], x_min > 0."""
    if points < 2 or not 0 < x_min < x_max:
        raise DomainError(f"grid needs 0 < x_min < x_max and points >= 2, got {x_min}, {x_max}, {points}")
    xs = np.linspace(x_min, x_max, int(points))
    return {
        'pdf': CurveSeries.from_arrays('pdf', xs, pdf(xs, params)),
        'cdf': CurveSeries.from_arrays('cdf', xs, cdf(xs, params)),
        'hazard': CurveSeries.from_arrays('hazard', xs, hazard(xs, params)),
        'survival': CurveSeries.from_arrays('survival', xs, survival(xs, params)),
        'mrl': CurveSeries.from_arrays('mrl', xs, mean_residual_life(xs, params)),
    }


def lorenz_curves(params: SsdParams, points: int = LORENZ_POINTS) -> dict:
    """Lorenz and Bonferroni series on p = 1/(points+1), ..., points/(points+1)."""
    ps = np.arange(1, points + 1) / (points + 1.0)
    lor = np.array([lorenz(p, params) for p in ps])
    return {
        'lorenz': CurveSeries.from_arrays('lorenz', ps, lor),
        'bonferroni': CurveSeries.from_arrays('bonferroni', ps, lor / ps),
    }
