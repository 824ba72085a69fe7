"""Goodness of fit and model comparison.

compare_models fits every requested model on one dataset and lays the results
out as the usual comparison table: estimates, -2 log L, AIC, BIC, AICc, the
Kolmogorov-Smirnov distance at the fitted parameters and its asymptotic
p-value. Rows are ranked by AIC with -2 log L breaking ties.
"""

from __future__ import annotations

import asyncio
import math
from dataclasses import dataclass, field
from datetime import datetime

import numpy as np
import pandas as pd
from scipy import special

import baselines
from data_loader import Dataset
from errors import DomainError, SsdLabError
from fit import DEFAULT_ALPHA_MAX, FitResult
from ssd import CurveSeries
from unified_logger import LogLevel, get_logger

DEFAULT_MODELS = baselines.MODEL_NAMES
DEFAULT_MAX_PARALLEL_FITS = 7

STATUS_OK = "ok"
STATUS_FAILED = "failed"

TABLE_COLUMNS = ['Distribution', 'Estimates', '-2LL', 'AIC', 'BIC', 'AICc', 'K-S', 'p-value']


def information_criteria(neg2ll: float, k: int, n: int):
    """
    AIC = -2LL + 2k, BIC = -2LL + k ln n, AICc = AIC + (2k^2 + 2k)/(n - k - 1).

    Raises:
        DomainError: n <= k + 1, where AICc is undefined.
    """
    if k < 0 or n < 1:
        raise DomainError(f"need k >= 0 and n >= 1, got k={k}, n={n}")
    if n <= k + 1:
        raise DomainError(f"AICc is undefined for n={n} <= k+1={k + 1}")
    aic = neg2ll + 2 * k
    bic = neg2ll + k * math.log(n)
    aicc = aic + (2 * k * k + 2 * k) / (n - k - 1)
    return aic, bic, aicc


def ks_statistic(data: Dataset, cdf) -> float:
    """Exact one-sample K-S distance between the empirical cdf of data and cdf."""
    x = data.array
    n = data.n
    fitted = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    above = i / n - fitted
    below = fitted - (i - 1) / n
    return float(max(above.max(), below.max()))


def ks_pvalue(d: float, n: int) -> float:
    """Asymptotic Kolmogorov p-value P(K > sqrt(n) d) = 2 sum (-1)^(j-1) e^(-2 j^2 n d^2)."""
    if not 0.0 <= d <= 1.0 or n < 1:
        raise DomainError(f"need 0 <= d <= 1 and n >= 1, got d={d}, n={n}")
    return float(min(1.0, max(0.0, special.kolmogorov(math.sqrt(n) * d))))


def empirical_ttt(data: Dataset) -> CurveSeries:
    """
    Scaled total-time-on-test points (i/n, (x_(1) + ... + x_(i) + (n - i) x_(i)) / sum x)
    for i = 0..n, starting at the origin.
    """
    if data.n < 2:
        raise DomainError(f"the TTT plot needs at least 2 observations, got {data.n}")
    x = data.array
    n = data.n
    i = np.arange(1, n + 1)
    phi = (np.cumsum(x) + (n - i) * x) / data.sum
    return CurveSeries.from_arrays('empirical_ttt',
                                   np.concatenate([[0.0], i / n]),
                                   np.concatenate([[0.0], phi]))


@dataclass(frozen=True)
class ModelRow:
    """One model's line in the comparison table. Failed fits keep only the name and error."""

    model: str
    param_count: int
    status: str = STATUS_OK
    params: dict = field(default_factory=dict)
    neg2ll: float | None = None
    aic: float | None = None
    bic: float | None = None
    aicc: float | None = None
    ks: float | None = None
    pvalue: float | None = None
    error: str = ""
    fit: FitResult | None = field(default=None, repr=False, compare=False)

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK

    @classmethod
    def from_fit(cls, data: Dataset, result: FitResult):
        model = baselines.get_model(result.model.name)
        k = result.model.param_count
        neg2ll = result.neg2ll
        if data.n > k + 1:
            aic, bic, aicc = information_criteria(neg2ll, k, data.n)
        else:
            aic, bic, aicc = neg2ll + 2 * k, neg2ll + k * math.log(data.n), None
        d = ks_statistic(data, lambda x: model.cdf(x, result.estimates))
        return cls(model=result.model.name, param_count=k, params=result.estimates,
                   neg2ll=neg2ll, aic=aic, bic=bic, aicc=aicc, ks=d,
                   pvalue=ks_pvalue(d, data.n), fit=result)

    @classmethod
    def failed(cls, name: str, error: Exception):
        return cls(model=name, param_count=len(baselines.get_model(name).param_names),
                   status=STATUS_FAILED, error=str(error))

    def to_json_dict(self) -> dict:
        return {
            'model': self.model,
            'params': dict(self.params),
            'neg2LL': self.neg2ll,
            'aic': self.aic,
            'bic': self.bic,
            'aicc': self.aicc,
            'ks': self.ks,
            'pvalue': self.pvalue,
            'status': self.status,
            'error': self.error,
        }


@dataclass(frozen=True)
class ModelReport:
    """Comparison table for one dataset."""

    dataset_label: str
    n: int
    mean: float
    rows: tuple
    ranking: tuple

    @classmethod
    def build(cls, data: Dataset, rows):
        rows = tuple(rows)
        ranked = sorted((r for r in rows if r.ok), key=lambda r: (r.aic, r.neg2ll))
        return cls(dataset_label=data.label, n=data.n, mean=data.mean,
                   rows=rows, ranking=tuple(r.model for r in ranked))

    @property
    def failed(self) -> tuple:
        return tuple(r for r in self.rows if not r.ok)

    def row(self, name: str) -> ModelRow:
        for r in self.rows:
            if r.model == name:
                return r
        raise KeyError(name)

    def to_json_dict(self) -> dict:
        return {
            'dataset': {'label': self.dataset_label, 'n': self.n, 'mean': self.mean},
            'rows': [r.to_json_dict() for r in self.rows],
            'ranking': list(self.ranking),
        }

    def to_frame(self) -> pd.DataFrame:
        """Table layout, rows in ranking order followed by failed models."""
        order = list(self.ranking) + [r.model for r in self.failed]
        records = []
        for name in order:
            r = self.row(name)
            estimates = ", ".join(f"{k}={v:.4f}" for k, v in r.params.items()) if r.ok else f"failed: {r.error}"
            records.append([r.model, estimates, r.neg2ll, r.aic, r.bic, r.aicc, r.ks, r.pvalue])
        return pd.DataFrame(records, columns=TABLE_COLUMNS)


def _normalize_models(models):
    names = []
    for name in models or DEFAULT_MODELS:
        model = baselines.get_model(name)
        if model.name not in names:
            names.append(model.name)
    if not names:
        raise DomainError("at least one model is required")
    # Rows always come out in the fixed table order, whatever order was asked for.
    return sorted(names, key=baselines.MODEL_NAMES.index)


async def compare_models_async(data: Dataset, models=None, alpha_mode="continuous",
                               alpha_max=DEFAULT_ALPHA_MAX,
                               max_parallel=DEFAULT_MAX_PARALLEL_FITS) -> ModelReport:
    """
    Fits the requested models concurrently and assembles the comparison table.

    Args:
        data (Dataset): Sample to fit.
        models (list): Model names; defaults to all seven in table order.
        alpha_mode (str): "profile" or "continuous" for the mixture models.
        alpha_max (int): Upper end of the integer alpha search.
        max_parallel (int): Maximum number of fits running at once.

    Returns:
        ModelReport: one row per model in the requested order; a model whose
            fit raised is kept as a failed row and left out of the ranking.
    """
    logger = get_logger()
    names = _normalize_models(models)
    semaphore = asyncio.Semaphore(max(1, int(max_parallel)))
    start_time = datetime.now()

    async def fit_one(name):
        async with semaphore:
            try:
                result = await asyncio.to_thread(baselines.baseline_fit, name, data, alpha_mode, alpha_max)
                row = await asyncio.to_thread(ModelRow.from_fit, data, result)
            except (SsdLabError, ArithmeticError, np.linalg.LinAlgError) as e:
                logger.log(LogLevel.ERROR, f"{name} fit on {data.label} failed: {e}",
                           source_file="gof.py", function_name="compare_models_async")
                return ModelRow.failed(name, e)
        logger.log_fit_complete(result, data.label,
                                status='success' if result.converged else 'not-converged')
        return row

    rows = await asyncio.gather(*[fit_one(name) for name in names])

    report = ModelReport.build(data, rows)
    duration = (datetime.now() - start_time).total_seconds()
    logger.log(LogLevel.INFO, f"Compared {len(names)} models on {data.label} (n={data.n}) in {duration:.2f}s; "
               f"{len(report.failed)} failed; best: {report.ranking[0] if report.ranking else 'none'}")
    return report


def compare_models(data: Dataset, models=None, alpha_mode="continuous",
                   alpha_max=DEFAULT_ALPHA_MAX,
                   max_parallel=DEFAULT_MAX_PARALLEL_FITS) -> ModelReport:
    """Synchronous wrapper around compare_models_async."""
    return asyncio.run(compare_models_async(data, models, alpha_mode, alpha_max, max_parallel))
