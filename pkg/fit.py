"""Maximum-likelihood estimation for SSD and its sibling gamma mixtures.

SSD, the Shukla distribution (SD) and the Rama-Kamlesh distribution (RKD)
share one structure: with a common rate theta,

    f(x) = theta^s2 (x^(s1-1) + x^(s2-1)) e^(-theta x) / (Gamma(s1) theta^d + Gamma(s2)),
    s2 = s1 + d,  d = alpha + offset,

so one log-likelihood, one score and one pair of fitters serve all three.
For SSD (s1 = 2, offset 0) the log-likelihood is

    n(alpha+2) log theta - n log(theta^alpha + Gamma(alpha+2)) - theta sum x + sum log(x + x^(alpha+1))

and the score components are

    d/dtheta: n(alpha+2)/theta - n alpha theta^(alpha-1)/(theta^alpha + Gamma(alpha+2)) - sum x
    d/dalpha: n log theta - n [Gamma(alpha+2) psi(alpha+2) + theta^alpha log theta]/(theta^alpha + Gamma(alpha+2))
              + sum x^(alpha+1) log x / (x + x^(alpha+1))

Setting the theta-score to zero is the same equation as matching the mixture
mean to the sample mean, so the profile solve doubles as the
method-of-moments initializer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from data_loader import Dataset
from errors import ConvergenceError, DomainError, FitError
from ssd import SsdParams
from unified_logger import LogLevel, get_logger

DEFAULT_ALPHA_MAX = 50
MAX_NEWTON_ITERATIONS = 200
MAX_HALVINGS = 30
THETA_SOLVE_ITERATIONS = 200
PROFILE_TOL = 1e-8        # |score_theta| < PROFILE_TOL * n
GRADIENT_TOL = 1e-6       # gradient norm < GRADIENT_TOL * n

MODE_PROFILE = "profile-integer"
MODE_CONTINUOUS = "continuous"
MODE_CLOSED_FORM = "closed-form"


@dataclass(frozen=True)
class MixtureFamily:
    """A two-component gamma mixture with common rate, indexed by alpha.

    Attributes:
        name: Model name used in reports.
        base_shape: Shape s1 of the first component.
        shape_offset: Second shape is s1 + alpha + shape_offset.
        alpha_floor: Smallest admissible alpha.
        alpha_open: Whether alpha_floor itself is excluded.
    """

    name: str
    base_shape: float
    shape_offset: float = 0.0
    alpha_floor: float = 0.0
    alpha_open: bool = False

    def shapes(self, alpha):
        return self.base_shape, self.base_shape + alpha + self.shape_offset

    def check_alpha(self, alpha):
        if not math.isfinite(alpha) or alpha < self.alpha_floor or (self.alpha_open and alpha == self.alpha_floor):
            bound = ">" if self.alpha_open else ">="
            raise DomainError(f"{self.name}: alpha must be {bound} {self.alpha_floor}, got {alpha}")

    @property
    def first_integer_alpha(self) -> int:
        if self.alpha_open:
            return math.floor(self.alpha_floor) + 1
        return math.ceil(self.alpha_floor)

    @property
    def search_floor(self) -> float:
        """Lower bound used by the continuous search."""
        return self.alpha_floor + (1e-8 if self.alpha_open else 0.0)


SSD_FAMILY = MixtureFamily("ssd", base_shape=2.0)
SD_FAMILY = MixtureFamily("sd", base_shape=1.0)
RKD_FAMILY = MixtureFamily("rkd", base_shape=1.0, shape_offset=-1.0, alpha_floor=0.0, alpha_open=True)


@dataclass(frozen=True)
class ModelSpec:
    """A named model with its parameter values."""

    name: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        values = {str(k): float(v) for k, v in self.params.items()}
        if not 1 <= len(values) <= 2:
            raise DomainError(f"{self.name}: expected 1 or 2 parameters, got {len(values)}")
        if not all(math.isfinite(v) for v in values.values()):
            raise DomainError(f"{self.name}: parameters must be finite, got {values}")
        if values.get('theta', 1.0) <= 0:
            raise DomainError(f"{self.name}: rate theta must be > 0, got {values['theta']}")
        object.__setattr__(self, "params", values)

    @property
    def param_count(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class FitResult:
    """Outcome of a maximum-likelihood fit.

    `profile` holds (alpha, theta, loglik) for each integer alpha visited by
    the profile search; it is empty for other modes.
    """

    model: ModelSpec
    loglik: float
    iterations: int
    converged: bool
    mode: str
    gradient_norm: float
    n: int
    profile: tuple = ()
    message: str = ""

    @property
    def estimates(self) -> dict:
        return dict(self.model.params)

    @property
    def neg2ll(self) -> float:
        return -2.0 * self.loglik

    def ssd_params(self) -> SsdParams:
        """The estimates as SsdParams (SSD-shaped models only)."""
        return SsdParams(self.model.params['alpha'], self.model.params['theta'])


def require_fit_data(data: Dataset, minimum=2):
    if data.n < minimum:
        raise FitError(f"fitting needs at least {minimum} observations, got {data.n}")


def mixture_weight_terms(family, alpha, theta):
    """(p, log denominator) with p = Gamma(s1) theta^d / (Gamma(s1) theta^d + Gamma(s2))."""
    s1, s2 = family.shapes(alpha)
    d = s2 - s1
    a = special.gammaln(s1) + d * math.log(theta)
    b = special.gammaln(s2)
    return float(special.expit(a - b)), float(np.logaddexp(a, b))


def family_log_likelihood(family: MixtureFamily, alpha, theta, data: Dataset) -> float:
    family.check_alpha(alpha)
    if not theta > 0:
        raise DomainError(f"theta must be > 0, got {theta}")
    s1, s2 = family.shapes(alpha)
    _, log_den = mixture_weight_terms(family, alpha, theta)
    log_x = np.log(data.array)
    data_term = np.logaddexp((s1 - 1.0) * log_x, (s2 - 1.0) * log_x).sum()
    return float(data.n * (s2 * math.log(theta) - log_den) - theta * data.sum + data_term)


def family_score(family: MixtureFamily, alpha, theta, data: Dataset):
    """(d logL/d theta, d logL/d alpha)."""
    family.check_alpha(alpha)
    s1, s2 = family.shapes(alpha)
    d = s2 - s1
    n = data.n
    p, _ = mixture_weight_terms(family, alpha, theta)
    log_theta = math.log(theta)
    d_theta = n * s2 / theta - n * d * p / theta - data.sum
    log_x = np.log(data.array)
    # x^(s2-1) / (x^(s1-1) + x^(s2-1)) = expit(d log x)
    data_term = float((log_x * special.expit(d * log_x)).sum())
    d_alpha = n * log_theta - n * (p * log_theta + (1.0 - p) * special.digamma(s2)) + data_term
    return float(d_theta), float(d_alpha)


def log_likelihood(params: SsdParams, data: Dataset) -> float:
    """SSD log-likelihood; equals sum of log pdf over the data."""
    return family_log_likelihood(SSD_FAMILY, params.alpha, params.theta, data)


def score(params: SsdParams, data: Dataset):
    """SSD score vector (d_dtheta, d_dalpha)."""
    return family_score(SSD_FAMILY, params.alpha, params.theta, data)


def solve_theta(family: MixtureFamily, alpha, data: Dataset):
    """
    Root of the theta-score at fixed alpha by safeguarded Newton.

    Dividing the score by n/theta gives g(theta) = s2 - d p(theta) - theta mean,
    strictly decreasing with its root inside [min(s1,s2), max(s1,s2)] / mean.
    Newton steps leaving the bracket are replaced by bisection.

    Returns:
        tuple: (theta, iterations).

    Raises:
        ConvergenceError: the tolerance is not reached.
    """
    family.check_alpha(alpha)
    s1, s2 = family.shapes(alpha)
    d = s2 - s1
    xbar = data.mean
    lo, hi = min(s1, s2) / xbar, max(s1, s2) / xbar
    if hi - lo <= 1e-15 * hi:
        return lo, 0

    def g_and_slope(theta):
        p, _ = mixture_weight_terms(family, alpha, theta)
        return s2 - d * p - theta * xbar, -d * d * p * (1.0 - p) / theta - xbar

    theta = 0.5 * (lo + hi)
    for iteration in range(1, THETA_SOLVE_ITERATIONS + 1):
        g, slope = g_and_slope(theta)
        if abs(g) < PROFILE_TOL * theta:
            return theta, iteration
        if g > 0:
            lo = theta
        else:
            hi = theta
        step = theta - g / slope
        theta = step if lo < step < hi else 0.5 * (lo + hi)
    raise ConvergenceError(f"{family.name}: theta solve at alpha={alpha} did not converge",
                           last_iterate=theta, iterations=THETA_SOLVE_ITERATIONS)


def fit_profile(data: Dataset, alpha_max: int = DEFAULT_ALPHA_MAX,
                family: MixtureFamily = SSD_FAMILY) -> FitResult:
    """
    Best integer-alpha fit: solve the theta-score at every integer alpha in
    [first admissible, alpha_max] and keep the largest log-likelihood.

    Raises:
        FitError: too little data, or every alpha failed.
    """
    require_fit_data(data)
    if alpha_max < family.first_integer_alpha:
        raise DomainError(f"{family.name}: alpha_max must be >= {family.first_integer_alpha}, got {alpha_max}")
    logger = get_logger()

    profile = []
    total_iterations = 0
    for alpha in range(family.first_integer_alpha, int(alpha_max) + 1):
        try:
            theta, iterations = solve_theta(family, float(alpha), data)
        except ConvergenceError as e:
            logger.log(LogLevel.WARNING, f"profile skipped alpha={alpha}: {e}",
                       source_file="fit.py", function_name="fit_profile")
            continue
        total_iterations += iterations
        profile.append((float(alpha), theta, family_log_likelihood(family, float(alpha), theta, data)))

    if not profile:
        raise FitError(f"{family.name}: no integer alpha in [0, {alpha_max}] produced a fit")

    alpha, theta, loglik = max(profile, key=lambda row: row[2])
    d_theta, _ = family_score(family, alpha, theta, data)
    return FitResult(
        model=ModelSpec(family.name, {'alpha': alpha, 'theta': theta}),
        loglik=loglik,
        iterations=total_iterations,
        converged=abs(d_theta) < PROFILE_TOL * data.n,
        mode=MODE_PROFILE,
        gradient_norm=abs(d_theta),
        n=data.n,
        profile=tuple(profile),
    )


def score_hessian(family: MixtureFamily, alpha, theta, data: Dataset):
    """Hessian of the log-likelihood by central differences of the analytic score."""
    h_alpha = 1e-5 * max(1.0, alpha)
    h_theta = 1e-5 * theta
    # Stay inside the alpha domain with a one-sided difference at the floor.
    a_lo = max(alpha - h_alpha, family.search_floor)
    a_hi = a_lo + 2.0 * h_alpha if a_lo > alpha - h_alpha else alpha + h_alpha
    g_a_hi = np.array(family_score(family, a_hi, theta, data))
    g_a_lo = np.array(family_score(family, a_lo, theta, data))
    g_t_hi = np.array(family_score(family, alpha, theta + h_theta, data))
    g_t_lo = np.array(family_score(family, alpha, theta - h_theta, data))
    # Rows/columns ordered (theta, alpha) like the score.
    col_theta = (g_t_hi - g_t_lo) / (2.0 * h_theta)
    col_alpha = (g_a_hi - g_a_lo) / (a_hi - a_lo)
    hessian = np.column_stack([col_theta, col_alpha])
    return 0.5 * (hessian + hessian.T)


def observed_information(params: SsdParams, data: Dataset, family: MixtureFamily = SSD_FAMILY):
    """Negative Hessian at params, ordered (theta, alpha)."""
    return -score_hessian(family, params.alpha, params.theta, data)


def standard_errors(params: SsdParams, data: Dataset, family: MixtureFamily = SSD_FAMILY) -> dict:
    """Observed-information standard errors for alpha and theta."""
    try:
        covariance = np.linalg.inv(observed_information(params, data, family))
    except np.linalg.LinAlgError as e:
        raise FitError(f"observed information is singular at {params}") from e
    return {'theta': float(math.sqrt(abs(covariance[0, 0]))),
            'alpha': float(math.sqrt(abs(covariance[1, 1])))}


def _projected_gradient(family, alpha, gradient):
    """Gradient with the alpha component dropped when pushing below the floor."""
    d_theta, d_alpha = gradient
    if alpha <= family.search_floor and d_alpha < 0:
        d_alpha = 0.0
    return np.array([d_theta, d_alpha])


def fit_continuous(data: Dataset, init: SsdParams | None = None,
                   family: MixtureFamily = SSD_FAMILY,
                   alpha_max: int = DEFAULT_ALPHA_MAX) -> FitResult:
    """
    Damped two-dimensional Newton-Raphson on the score.

    Starts from the profile winner unless `init` is given. Each step is
    halved (up to MAX_HALVINGS times) until the log-likelihood does not
    decrease and the iterate stays in the domain. When the finite-difference
    Hessian is singular or not negative definite a coordinate step is taken
    instead: theta is re-solved exactly and alpha moves along its score.

    Returns:
        FitResult: converged when the projected gradient norm falls below
            GRADIENT_TOL * n; otherwise the best iterate with converged=False.
    """
    require_fit_data(data)
    logger = get_logger()
    n = data.n
    tol = GRADIENT_TOL * n

    if init is None:
        start = fit_profile(data, alpha_max=alpha_max, family=family)
        alpha, theta = start.estimates['alpha'], start.estimates['theta']
    else:
        alpha, theta = init.alpha, init.theta
    alpha = max(alpha, family.search_floor)
    family.check_alpha(alpha)

    loglik = family_log_likelihood(family, alpha, theta, data)
    gradient = _projected_gradient(family, alpha, family_score(family, alpha, theta, data))
    iterations = 0
    message = ""

    while np.linalg.norm(gradient) >= tol and iterations < MAX_NEWTON_ITERATIONS:
        iterations += 1
        hessian = score_hessian(family, alpha, theta, data)
        try:
            if np.any(np.linalg.eigvalsh(hessian) >= 0):
                raise np.linalg.LinAlgError("Hessian is not negative definite")
            direction = -np.linalg.solve(hessian, gradient)
        except np.linalg.LinAlgError:
            direction = None

        if direction is None:
            alpha, theta, loglik = _coordinate_step(family, alpha, theta, loglik, data)
        else:
            scale = 1.0
            for _ in range(MAX_HALVINGS + 1):
                cand_theta = theta + scale * direction[0]
                cand_alpha = max(alpha + scale * direction[1], family.search_floor)
                if cand_theta > 0:
                    cand_loglik = family_log_likelihood(family, cand_alpha, cand_theta, data)
                    if cand_loglik >= loglik:
                        alpha, theta, loglik = cand_alpha, cand_theta, cand_loglik
                        break
                scale *= 0.5
            else:
                alpha, theta, loglik = _coordinate_step(family, alpha, theta, loglik, data)

        gradient = _projected_gradient(family, alpha, family_score(family, alpha, theta, data))

    gradient_norm = float(np.linalg.norm(gradient))
    converged = gradient_norm < tol
    if not converged:
        message = f"no convergence after {iterations} iterations (gradient norm {gradient_norm:.3g})"
        logger.log(LogLevel.WARNING, f"{family.name}: {message}",
                   source_file="fit.py", function_name="fit_continuous")

    return FitResult(
        model=ModelSpec(family.name, {'alpha': float(alpha), 'theta': float(theta)}),
        loglik=loglik,
        iterations=iterations,
        converged=converged,
        mode=MODE_CONTINUOUS,
        gradient_norm=gradient_norm,
        n=n,
        message=message,
    )


def _coordinate_step(family, alpha, theta, loglik, data):
    """Re-solve theta at the current alpha, then a halving step along the alpha score."""
    try:
        new_theta, _ = solve_theta(family, alpha, data)
    except ConvergenceError as e:
        new_theta = e.last_iterate
    new_loglik = family_log_likelihood(family, alpha, new_theta, data)
    if new_loglik >= loglik:
        theta, loglik = new_theta, new_loglik

    _, d_alpha = family_score(family, alpha, theta, data)
    h = 1e-5 * max(1.0, alpha)
    curvature = (family_score(family, alpha + h, theta, data)[1] - d_alpha) / h
    step = -d_alpha / curvature if curvature < 0 else math.copysign(min(1.0, abs(d_alpha) / data.n), d_alpha)
    for _ in range(MAX_HALVINGS + 1):
        cand_alpha = max(alpha + step, family.search_floor)
        cand_loglik = family_log_likelihood(family, cand_alpha, theta, data)
        if cand_loglik >= loglik:
            return cand_alpha, theta, cand_loglik
        step *= 0.5
    return alpha, theta, loglik
