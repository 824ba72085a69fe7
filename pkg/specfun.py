"""Special functions used by every closed-form SSD expression.

Thin, domain-checked wrappers over ``scipy.special``. All factorials
``(alpha + k)!`` in this package are evaluated as ``Gamma(alpha + k + 1)`` so
that non-integer alpha is handled uniformly, and products of gammas and powers
are formed in log space so that large alpha does not overflow.

Scipy's incomplete gamma routines (Cephes ``igam``/``igamc``) switch between
the power series and the continued fraction at ``x = s + 1``, which is the
regime split these expressions rely on.
"""

from __future__ import annotations

import numpy as np
from scipy import special

from errors import DomainError

# Number of terms allowed in the large-x asymptotic series for log Gamma(s, x).
_ASYMPTOTIC_TERMS = 60


def _unwrap(value):
    """Return a Python float for 0-d results, the array otherwise."""
    arr = np.asarray(value)
    return float(arr) if arr.ndim == 0 else arr


def _positive(name, value):
    arr = np.asarray(value, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f"{name} must be finite and > 0, got {value!r}")
    return arr


def _nonnegative(name, value):
    arr = np.asarray(value, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError(f"{name} must be >= 0, got {value!r}")
    return arr


def log_gamma(x):
    """Natural log of the gamma function for x > 0."""
    return _unwrap(special.gammaln(_positive("x", x)))


def gamma_fn(x):
    """Gamma function for x > 0 (overflows to inf beyond x ~ 171)."""
    return _unwrap(special.gamma(_positive("x", x)))


def digamma(x):
    """psi(x) = d/dx log Gamma(x) for x > 0."""
    return _unwrap(special.digamma(_positive("x", x)))


def trigamma(x):
    """psi'(x) for x > 0; used by the gamma-shape Newton iteration."""
    return _unwrap(special.polygamma(1, _positive("x", x)))


def regularized_lower_gamma(s, x):
    """P(s, x) = gamma(s, x) / Gamma(s)."""
    return _unwrap(special.gammainc(_positive("s", s), _nonnegative("x", x)))


def regularized_upper_gamma(s, x):
    """Q(s, x) = Gamma(s, x) / Gamma(s)."""
    return _unwrap(special.gammaincc(_positive("s", s), _nonnegative("x", x)))


def lower_incomplete_gamma(s, x):
    """
    Lower incomplete gamma function gamma(s, x) = int_0^x t^(s-1) e^(-t) dt.

    Args:
        s: Shape, s > 0.
        x: Upper limit, x >= 0.

    Returns:
        float or np.ndarray: gamma(s, x), zero at x = 0.
    """
    s = _positive("s", s)
    x = _nonnegative("x", x)
    return _unwrap(special.gammainc(s, x) * np.asarray(gamma_fn(s)))


def upper_incomplete_gamma(s, x):
    """
    Upper incomplete gamma function Gamma(s, x) = int_x^inf t^(s-1) e^(-t) dt.

    Args:
        s: Shape, s > 0.
        x: Lower limit, x >= 0.

    Returns:
        float or np.ndarray: Gamma(s, x); equals Gamma(s) at x = 0.
    """
    s = _positive("s", s)
    x = _nonnegative("x", x)
    return _unwrap(special.gammaincc(s, x) * np.asarray(gamma_fn(s)))


def _log_upper_asymptotic(s, x):
    """log Gamma(s, x) from x^(s-1) e^(-x) sum_k (s-1)_k / x^k, valid for x >> s."""
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, _ASYMPTOTIC_TERMS):
        term = term * (s - k) / x
        total = total + term
        if np.all(np.abs(term) < 1e-17 * np.abs(total)):
            break
    return (s - 1.0) * np.log(x) - x + np.log(total)


def log_upper_incomplete_gamma(s, x):
    """
    log Gamma(s, x), finite even where Gamma(s, x) underflows double precision.

    Uses scipy's regularized complement while it is representable and the
    large-x asymptotic series once it underflows to zero.
    """
    s, x = np.broadcast_arrays(_positive("s", s), _nonnegative("x", x))
    q = special.gammaincc(s, x)
    with np.errstate(divide="ignore"):
        direct = np.log(q) + special.gammaln(s)
    underflow = q <= 0
    if np.any(underflow):
        with np.errstate(all="ignore"):
            tail = _log_upper_asymptotic(s, np.maximum(x, 1.0))
        direct = np.where(underflow, tail, direct)
    return _unwrap(direct)


def log_regularized_upper_gamma(s, x):
    """log Q(s, x) with the same underflow handling as log_upper_incomplete_gamma."""
    return _unwrap(np.asarray(log_upper_incomplete_gamma(s, x)) - special.gammaln(np.asarray(s, dtype=float)))
