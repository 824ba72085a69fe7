"""Comparison lifetime models behind one interface shared with SSD.

Each model exposes pdf, cdf, log-likelihood and maximum-likelihood fit over
a plain ``{name: value}`` parameter dict:

    exponential  {theta}             theta e^(-theta x)
    lindley      {theta}             theta^2/(1+theta) (1+x) e^(-theta x)
    lbed         {theta}             theta^2 x e^(-theta x)           (gamma(2, theta))
    gamma        {k, theta}          theta^k x^(k-1) e^(-theta x) / Gamma(k)
    sd           {alpha, theta}      exponential(theta) + gamma(alpha+1, theta) mixture
    rkd          {alpha, theta}      exponential(theta) + gamma(alpha, theta) mixture
    ssd          {alpha, theta}      see ssd.py

Rates are always called theta; the gamma shape is k.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod

import numpy as np
from scipy import special, stats

import fit
import specfun
import ssd
from data_loader import Dataset
from errors import ConvergenceError, DomainError, FitError
from fit import FitResult, ModelSpec, MixtureFamily

GAMMA_NEWTON_ITERATIONS = 100
GAMMA_SHAPE_TOL = 1e-12

ALPHA_MODES = ("profile", "continuous")


def _nonnegative(x):
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError(f"x must be >= 0, got {x!r}")
    return arr


def _unwrap(value):
    arr = np.asarray(value)
    return float(arr) if arr.ndim == 0 else arr


class LifetimeModel(ABC):
    """A named lifetime distribution with a fixed parameter list."""

    name: str = ""
    param_names: tuple = ()

    def check(self, params) -> dict:
        """Validate a parameter dict and return it as floats."""
        missing = [p for p in self.param_names if p not in params]
        extra = [p for p in params if p not in self.param_names]
        if missing or extra:
            raise DomainError(f"{self.name}: expected parameters {self.param_names}, got {sorted(params)}")
        values = ModelSpec(self.name, {p: params[p] for p in self.param_names}).params
        self._check_values(values)
        return values

    def _check_values(self, values):
        pass

    def spec(self, **params) -> ModelSpec:
        return ModelSpec(self.name, self.check(params))

    @abstractmethod
    def pdf(self, x, params):
        ...

    @abstractmethod
    def cdf(self, x, params):
        ...

    def log_likelihood(self, data: Dataset, params) -> float:
        with np.errstate(divide="ignore"):
            return float(np.log(np.asarray(self.pdf(data.array, params))).sum())

    @abstractmethod
    def fit(self, data: Dataset, **options) -> FitResult:
        ...

    def _closed_form(self, data, params, d_theta, iterations=0, mode=None):
        # The class body binds `fit` to the method above, so resolve the default here.
        return FitResult(
            model=ModelSpec(self.name, params),
            loglik=self.log_likelihood(data, params),
            iterations=iterations,
            converged=True,
            mode=mode or fit.MODE_CLOSED_FORM,
            gradient_norm=float(abs(d_theta)),
            n=data.n,
        )


class Exponential(LifetimeModel):
    name = "exponential"
    param_names = ("theta",)

    def pdf(self, x, params):
        theta = self.check(params)['theta']
        return _unwrap(theta * np.exp(-theta * _nonnegative(x)))

    def cdf(self, x, params):
        theta = self.check(params)['theta']
        return _unwrap(-np.expm1(-theta * _nonnegative(x)))

    def log_likelihood(self, data, params):
        theta = self.check(params)['theta']
        return data.n * math.log(theta) - theta * data.sum

    def fit(self, data, **options):
        fit.require_fit_data(data)
        theta = 1.0 / data.mean
        return self._closed_form(data, {'theta': theta}, data.n / theta - data.sum)


class Lbed(LifetimeModel):
    """Length-biased exponential, i.e. gamma(2, theta)."""

    name = "lbed"
    param_names = ("theta",)

    def pdf(self, x, params):
        theta = self.check(params)['theta']
        x = _nonnegative(x)
        return _unwrap(theta * theta * x * np.exp(-theta * x))

    def cdf(self, x, params):
        theta = self.check(params)['theta']
        return _unwrap(special.gammainc(2.0, theta * _nonnegative(x)))

    def log_likelihood(self, data, params):
        theta = self.check(params)['theta']
        return 2 * data.n * math.log(theta) + data.log_sum - theta * data.sum

    def fit(self, data, **options):
        fit.require_fit_data(data)
        theta = 2.0 / data.mean
        return self._closed_form(data, {'theta': theta}, 2 * data.n / theta - data.sum)


class Lindley(LifetimeModel):
    """Mixture of exponential(theta) and gamma(2, theta) with weight theta/(1+theta)."""

    name = "lindley"
    param_names = ("theta",)

    def pdf(self, x, params):
        theta = self.check(params)['theta']
        x = _nonnegative(x)
        return _unwrap(theta * theta / (1.0 + theta) * (1.0 + x) * np.exp(-theta * x))

    def cdf(self, x, params):
        theta = self.check(params)['theta']
        x = _nonnegative(x)
        return _unwrap(1.0 - (1.0 + theta * x / (1.0 + theta)) * np.exp(-theta * x))

    def log_likelihood(self, data, params):
        theta = self.check(params)['theta']
        return (data.n * (2.0 * math.log(theta) - math.log1p(theta))
                + float(np.log1p(data.array).sum()) - theta * data.sum)

    @staticmethod
    def mle(mean: float) -> float:
        """Positive root of mean theta^2 + (mean - 1) theta - 2 = 0."""
        b = mean - 1.0
        return (-b + math.sqrt(b * b + 8.0 * mean)) / (2.0 * mean)

    def fit(self, data, **options):
        fit.require_fit_data(data)
        theta = self.mle(data.mean)
        n = data.n
        return self._closed_form(data, {'theta': theta}, 2 * n / theta - n / (1.0 + theta) - data.sum)


class Gamma(LifetimeModel):
    """Gamma with shape k and rate theta."""

    name = "gamma"
    param_names = ("k", "theta")

    def _check_values(self, values):
        if values['k'] <= 0:
            raise DomainError(f"gamma: shape k must be > 0, got {values['k']}")

    def _frozen(self, params):
        values = self.check(params)
        return stats.gamma(a=values['k'], scale=1.0 / values['theta'])

    def pdf(self, x, params):
        return _unwrap(self._frozen(params).pdf(_nonnegative(x)))

    def cdf(self, x, params):
        return _unwrap(self._frozen(params).cdf(_nonnegative(x)))

    def log_likelihood(self, data, params):
        values = self.check(params)
        k, theta = values['k'], values['theta']
        return (data.n * (k * math.log(theta) - special.gammaln(k))
                + (k - 1.0) * data.log_sum - theta * data.sum)

    def fit(self, data, **options):
        """
        Newton on log k - psi(k) = log(mean) - mean(log x); the rate follows
        as k / mean.

        Raises:
            FitError: the sample has no spread (the shape MLE is infinite).
            ConvergenceError: Newton did not settle within GAMMA_NEWTON_ITERATIONS.
        """
        fit.require_fit_data(data)
        s = math.log(data.mean) - data.log_sum / data.n
        if s <= 1e-14:
            raise FitError("gamma: sample has no spread, shape estimate is unbounded")
        # Minka's starting value, within a few percent of the root.
        k = (3.0 - s + math.sqrt((s - 3.0) ** 2 + 24.0 * s)) / (12.0 * s)
        for iteration in range(1, GAMMA_NEWTON_ITERATIONS + 1):
            g = math.log(k) - specfun.digamma(k) - s
            step = g / (1.0 / k - specfun.trigamma(k))
            # Stay positive: halve towards zero rather than stepping past it.
            k = k - step if k - step > 0 else k / 2.0
            if abs(step) < GAMMA_SHAPE_TOL * k:
                break
        else:
            raise ConvergenceError("gamma: shape Newton did not converge", last_iterate=k,
                                   iterations=GAMMA_NEWTON_ITERATIONS)
        theta = k / data.mean
        n = data.n
        d_k = n * (math.log(theta) - specfun.digamma(k)) + data.log_sum
        d_theta = n * k / theta - data.sum
        return self._closed_form(data, {'k': k, 'theta': theta}, math.hypot(d_k, d_theta),
                                 iterations=iteration, mode=fit.MODE_CONTINUOUS)


class GammaMixture(LifetimeModel):
    """Two-component common-rate gamma mixture (SD, RKD) driven by a MixtureFamily."""

    param_names = ("alpha", "theta")

    def __init__(self, family: MixtureFamily):
        self.family = family
        self.name = family.name

    def _check_values(self, values):
        self.family.check_alpha(values['alpha'])

    def components(self, params):
        """((weight, frozen gamma), (weight, frozen gamma))."""
        values = self.check(params)
        alpha, theta = values['alpha'], values['theta']
        s1, s2 = self.family.shapes(alpha)
        p, _ = fit.mixture_weight_terms(self.family, alpha, theta)
        scale = 1.0 / theta
        return ((p, stats.gamma(a=s1, scale=scale)), (1.0 - p, stats.gamma(a=s2, scale=scale)))

    def pdf(self, x, params):
        x = _nonnegative(x)
        (p, first), (q, second) = self.components(params)
        return _unwrap(p * first.pdf(x) + q * second.pdf(x))

    def cdf(self, x, params):
        x = _nonnegative(x)
        (p, first), (q, second) = self.components(params)
        return _unwrap(p * first.cdf(x) + q * second.cdf(x))

    def log_likelihood(self, data, params):
        values = self.check(params)
        return fit.family_log_likelihood(self.family, values['alpha'], values['theta'], data)

    def fit(self, data, alpha_mode="continuous", alpha_max=fit.DEFAULT_ALPHA_MAX, **options):
        if alpha_mode not in ALPHA_MODES:
            raise DomainError(f"alpha_mode must be one of {ALPHA_MODES}, got {alpha_mode!r}")
        if alpha_mode == "profile":
            return fit.fit_profile(data, alpha_max=alpha_max, family=self.family)
        return fit.fit_continuous(data, family=self.family, alpha_max=alpha_max)


class Ssd(GammaMixture):
    """SSD behind the shared interface; pdf and cdf come from ssd.py."""

    def __init__(self):
        super().__init__(fit.SSD_FAMILY)

    def ssd_params(self, params) -> ssd.SsdParams:
        values = self.check(params)
        return ssd.SsdParams(values['alpha'], values['theta'])

    def pdf(self, x, params):
        return ssd.pdf(x, self.ssd_params(params))

    def cdf(self, x, params):
        return ssd.cdf(x, self.ssd_params(params))


# Table order: two-parameter models first, then the one-parameter ones.
MODELS = {
    model.name: model for model in (
        Ssd(),
        GammaMixture(fit.SD_FAMILY),
        GammaMixture(fit.RKD_FAMILY),
        Gamma(),
        Lbed(),
        Lindley(),
        Exponential(),
    )
}
MODEL_NAMES = tuple(MODELS)


def get_model(name: str) -> LifetimeModel:
    try:
        return MODELS[name.strip().lower()]
    except KeyError:
        raise DomainError(f"unknown model {name!r}; choose from {', '.join(MODEL_NAMES)}") from None


def baseline_pdf(name: str, x, params: dict):
    return get_model(name).pdf(x, params)


def baseline_cdf(name: str, x, params: dict):
    return get_model(name).cdf(x, params)


def baseline_log_likelihood(name: str, data: Dataset, params: dict) -> float:
    return get_model(name).log_likelihood(data, params)


def baseline_fit(name: str, data: Dataset, alpha_mode: str = "continuous",
                 alpha_max: int = fit.DEFAULT_ALPHA_MAX) -> FitResult:
    """
    Maximum-likelihood fit of a named model.

    Args:
        name: One of MODEL_NAMES.
        data: Sample with n >= 2.
        alpha_mode: "profile" (integer alpha) or "continuous"; mixture models only.
        alpha_max: Upper end of the integer alpha search.

    Returns:
        FitResult: estimates keyed by the model's parameter names.
    """
    return get_model(name).fit(data, alpha_mode=alpha_mode, alpha_max=alpha_max)
