"""Independent numerical checks: adaptive quadrature and finite differences.

These arbitrate every closed form in ``ssd``; ``ssd`` also uses
``integrate`` directly for the TTT transform and the quadrature path of the
Renyi entropy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from scipy import integrate as _quadpack

from errors import QuadratureError
from unified_logger import LogLevel, get_logger

DEFAULT_TOL = 1e-10
SUBDIVISION_CAP = 10_000

# Fragments of the QUADPACK messages for which the value cannot be trusted
# (ier 1: subdivision cap, ier 5: divergent integral).
_FATAL_MESSAGES = ("maximum number of subdivisions", "divergent")


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    subdivisions: int


def integrate(f: Callable[[float], float], a: float, b: float = math.inf,
              tol: float = DEFAULT_TOL, limit: int = SUBDIVISION_CAP,
              points=None) -> QuadratureResult:
    """
    Adaptive Gauss-Kronrod quadrature of f over [a, b].

    An infinite upper limit is mapped onto a finite interval by QUADPACK's
    qagi transformation, so tail error is controlled by the same estimate as
    the body of the integrand.

    Args:
        f: Integrand, finite on (a, b).
        a: Lower limit.
        b: Upper limit, may be math.inf.
        tol: Absolute and relative tolerance requested.
        limit: Maximum number of subintervals.
        points: Optional breakpoints (finite intervals only).

    Returns:
        QuadratureResult: value, error estimate, and subintervals used.

    Raises:
        QuadratureError: the subdivision cap is hit or the integral diverges.
    """
    if tol <= 0:
        raise QuadratureError(f"tol must be > 0, got {tol}")
    kwargs = {"epsabs": tol, "epsrel": tol, "limit": limit, "full_output": 1}
    if points is not None and math.isfinite(b):
        kwargs["points"] = points
    result = _quadpack.quad(f, a, b, **kwargs)
    value, abserr, info = result[0], result[1], result[2]
    subdivisions = int(info.get("last", 0)) if isinstance(info, dict) else 0

    if len(result) > 3:
        message = result[3]
        if any(fragment in message for fragment in _FATAL_MESSAGES):
            raise QuadratureError(f"quadrature on [{a}, {b}] failed: {message.strip()}")
        # Roundoff-limited results are still within the reported error.
        get_logger().log(LogLevel.DEBUG, f"quadrature on [{a}, {b}]: {message.strip()}", to_file=False)

    return QuadratureResult(value=float(value), abs_error_estimate=float(abs(abserr)),
                            subdivisions=subdivisions)


def finite_diff(f: Callable[[float], float], x: float, h: float = 1e-5) -> float:
    """Central difference (f(x+h) - f(x-h)) / 2h."""
    return (f(x + h) - f(x - h)) / (2.0 * h)
