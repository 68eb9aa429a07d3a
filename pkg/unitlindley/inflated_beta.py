"""
Zero-inflated (ZIB) and zero-and-one-inflated (ZOIB) beta distributions in
the mean-precision parameterization, with a = mu phi and b = (1 - mu) phi.

The inflation parameters have the same closed-form estimates as for the unit
Lindley models; (mu, phi) maximize the interior beta log-likelihood by
Newton's method.
"""
import dataclasses
import logging
import math
from typing import Dict, Optional, Tuple

import numpy as np
from scipy import optimize, special

from .estimation import (DEFAULT_LEVEL, FitReport, Method, ModelKind,
                         confidence_intervals, standard_errors)
from .exceptions import (BoundaryError, ConvergenceError, DomainError,
                         EstimationError, ModelMismatchError,
                         NoInteriorDataError, ParameterError, UsageError)
from .proportions import ProportionSample
from .special import digamma, trigamma
from .unit_lindley import ArrayLike, maybe_scalar

logger = logging.getLogger(__name__)

GRADIENT_TOLERANCE = 1e-8
MAX_NEWTON_STEPS = 100
MAX_HALVINGS = 60
MAX_COORDINATE_SWEEPS = 200
LOG_PHI_BOUNDS = (-20.0, 20.0)
MU_BOUNDS = (1e-10, 1.0 - 1e-10)


@dataclasses.dataclass(frozen=True)
class InflatedBetaParams:
    """
    Parameters of the inflated beta distribution.

    Parameters
    ----------
    alpha : float
        Total mass of the atoms, in (0, 1).

    mu : float
        Mean of the beta component, in (0, 1).

    phi : float
        Precision of the beta component, positive.

    p : float, optional
        Conditional mass at one given an atom (ZOIB only).
    """
    alpha: float
    mu: float
    phi: float
    p: Optional[float] = None

    def __post_init__(self):
        for name in ('alpha', 'mu') + (('p', ) if self.p is not None else ()):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ParameterError(
                    f'{name} must lie strictly inside (0, 1) (got {value!r})'
                )
        if not (self.phi > 0 and math.isfinite(self.phi)):
            raise ParameterError(f'phi must be positive (got {self.phi!r})')

    @property
    def kind(self) -> ModelKind:
        return ModelKind.ZIB if self.p is None else ModelKind.ZOIB

    @property
    def a(self) -> float:
        return self.mu * self.phi

    @property
    def b(self) -> float:
        return (1.0 - self.mu) * self.phi

    @property
    def mass_zero(self) -> float:
        if self.p is None:
            return self.alpha
        return self.alpha * (1.0 - self.p)

    @property
    def mass_one(self) -> float:
        if self.p is None:
            return 0.0
        return self.alpha * self.p


def beta_log_pdf(a: float, b: float, y: np.ndarray) -> np.ndarray:
    """Log density of Beta(a, b) at interior points."""
    return ((a - 1.0) * np.log(y) + (b - 1.0) * np.log1p(-y)
            - special.betaln(a, b))


def beta_inflated_density(params: InflatedBetaParams, y: ArrayLike) -> ArrayLike:
    """
    Mixed density: the atom masses at 0 (and 1 for ZOIB) and
    ``(1 - alpha)`` times the beta density inside.

    Raises
    ------
    DomainError
        If ``y`` lies outside [0, 1].
    """
    y = np.asarray(y, dtype=float)
    if np.any(~((y >= 0.0) & (y <= 1.0))):
        raise DomainError('Inflated beta densities are defined on [0, 1] only')
    interior = (y > 0.0) & (y < 1.0)
    out = np.zeros(y.shape)
    if np.any(interior):
        out[interior] = (1.0 - params.alpha) * np.exp(
            beta_log_pdf(params.a, params.b, y[interior])
        )
    out = np.where(y == 0.0, params.mass_zero, out)
    out = np.where(y == 1.0, params.mass_one, out)
    return maybe_scalar(out)


def beta_inflated_cdf(params: InflatedBetaParams, y: ArrayLike) -> ArrayLike:
    """
    Right-continuous mixed distribution function, using the regularized
    incomplete beta function for the continuous part.
    """
    y = np.asarray(y, dtype=float)
    atoms = (np.where(y >= 0.0, params.mass_zero, 0.0)
             + np.where(y >= 1.0, params.mass_one, 0.0))
    continuous = special.betainc(params.a, params.b, np.clip(y, 0.0, 1.0))
    value = atoms + (1.0 - params.alpha) * continuous
    return maybe_scalar(np.clip(value, 0.0, 1.0))


def sample_beta_inflated(params: InflatedBetaParams, n: int,
                         rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` variates by composition, as for the unit Lindley models."""
    u = rng.random(n)
    zero = u <= params.mass_zero
    one = ~zero & (u <= params.alpha)
    interior = ~(zero | one)
    out = np.where(one, 1.0, 0.0)
    draws = rng.beta(params.a, params.b, size=int(np.count_nonzero(interior)))
    out[interior] = np.clip(draws, np.finfo(float).tiny, np.nextafter(1.0, 0.0))
    return out


@dataclasses.dataclass(frozen=True)
class _InteriorStats:
    m: int
    log_y: float
    log_1my: float


def _interior_stats(sample: ProportionSample) -> _InteriorStats:
    interior = sample.interior
    return _InteriorStats(
        m=sample.m,
        log_y=float(np.sum(np.log(interior))),
        log_1my=float(np.sum(np.log1p(-interior))),
    )


def _loglik(mu: float, phi: float, st: _InteriorStats) -> float:
    a, b = mu * phi, (1.0 - mu) * phi
    return (st.m * (special.gammaln(phi) - special.gammaln(a) - special.gammaln(b))
            + (a - 1.0) * st.log_y + (b - 1.0) * st.log_1my)


def _gradient(mu: float, phi: float, st: _InteriorStats) -> np.ndarray:
    a, b = mu * phi, (1.0 - mu) * phi
    psi_a, psi_b = digamma(a), digamma(b)
    return np.array([
        st.m * phi * (psi_b - psi_a) + phi * (st.log_y - st.log_1my),
        (st.m * (digamma(phi) - mu * psi_a - (1.0 - mu) * psi_b)
         + mu * st.log_y + (1.0 - mu) * st.log_1my),
    ])


def _hessian(mu: float, phi: float, st: _InteriorStats) -> np.ndarray:
    a, b = mu * phi, (1.0 - mu) * phi
    psi_a, psi_b = digamma(a), digamma(b)
    tri_a, tri_b = trigamma(a), trigamma(b)
    h_mm = -st.m * phi * phi * (tri_a + tri_b)
    h_mp = (st.m * (psi_b - psi_a - phi * mu * tri_a + phi * (1.0 - mu) * tri_b)
            + st.log_y - st.log_1my)
    h_pp = st.m * (trigamma(phi) - mu * mu * tri_a - (1.0 - mu) ** 2 * tri_b)
    return np.array([[h_mm, h_mp], [h_mp, h_pp]])


def _in_domain(x: np.ndarray) -> bool:
    return 0.0 < x[0] < 1.0 and x[1] > 0.0 and math.isfinite(x[1])


def _moment_start(sample: ProportionSample) -> np.ndarray:
    interior = sample.interior
    mean = float(np.mean(interior))
    var = float(np.var(interior, ddof=1))
    phi = mean * (1.0 - mean) / var - 1.0 if var > 0 else math.nan
    if not (math.isfinite(phi) and phi > 0):
        phi = 1.0
    return np.array([mean, min(max(phi, 1e-3), 1e6)])


def _newton(x: np.ndarray, st: _InteriorStats) -> Tuple[np.ndarray, bool]:
    """Newton ascent with step halving; returns the iterate and convergence."""
    ll = _loglik(x[0], x[1], st)
    for step_no in range(MAX_NEWTON_STEPS):
        grad = _gradient(x[0], x[1], st)
        norm = float(np.linalg.norm(grad))
        if norm < GRADIENT_TOLERANCE:
            logger.debug('Newton converged after %d steps: %s', step_no, x)
            return x, True

        hess = _hessian(x[0], x[1], st)
        try:
            direction = np.linalg.solve(hess, -grad)
        except np.linalg.LinAlgError:
            direction = None
        if direction is None or float(np.dot(direction, grad)) <= 0.0:
            # Not an ascent direction; scaled gradient step instead.
            direction = grad / np.abs(np.diag(hess))

        t = 1.0
        for _ in range(MAX_HALVINGS):
            candidate = x + t * direction
            if _in_domain(candidate):
                candidate_ll = _loglik(candidate[0], candidate[1], st)
                if candidate_ll >= ll - 1e-12 * abs(ll):
                    break
            t *= 0.5
        else:
            # No progress possible: accept if the gradient is at round-off.
            scale = max(1.0, st.m * x[1])
            converged = norm < GRADIENT_TOLERANCE * scale
            logger.debug('Newton stalled at %s (|grad|=%g)', x, norm)
            return x, converged

        x, ll = candidate, candidate_ll
        logger.debug('Newton step %d: mu=%g phi=%g ll=%r |grad|=%g',
                     step_no, x[0], x[1], ll, norm)
    return x, False


def _coordinate_search(x: np.ndarray, st: _InteriorStats) -> np.ndarray:
    """Coordinate-wise bounded golden-section/parabolic search."""
    mu, log_phi = float(x[0]), math.log(x[1])
    ll = _loglik(mu, math.exp(log_phi), st)
    for _ in range(MAX_COORDINATE_SWEEPS):
        res_mu = optimize.minimize_scalar(
            lambda v: -_loglik(v, math.exp(log_phi), st),
            bounds=MU_BOUNDS, method='bounded', options={'xatol': 1e-12},
        )
        mu = float(res_mu.x)
        res_phi = optimize.minimize_scalar(
            lambda v: -_loglik(mu, math.exp(v), st),
            bounds=LOG_PHI_BOUNDS, method='bounded', options={'xatol': 1e-12},
        )
        log_phi = float(res_phi.x)
        new_ll = -float(res_phi.fun)
        if abs(new_ll - ll) <= 1e-13 * max(1.0, abs(ll)):
            break
        ll = new_ll
    return np.array([mu, math.exp(log_phi)])


def fit_interior_beta(sample: ProportionSample) -> Tuple[float, float, np.ndarray, float]:
    """
    Maximum likelihood (mu, phi) of the beta component.

    Returns
    -------
    mu, phi : float

    observed_information : numpy.ndarray
        Negative Hessian of the interior log-likelihood at the optimum.

    log_lik : float
        Interior log-likelihood at the optimum.

    Raises
    ------
    NoInteriorDataError
        With fewer than two distinct interior observations.

    ConvergenceError
        If neither Newton's method nor the coordinate search followed by
        Newton's method reaches the gradient tolerance.
    """
    if sample.m < 2 or np.ptp(sample.interior) == 0.0:
        raise NoInteriorDataError(
            'The beta component needs at least two distinct interior '
            'observations'
        )

    st = _interior_stats(sample)
    x, converged = _newton(_moment_start(sample), st)
    if not converged:
        logger.warning(
            'Newton iterations did not converge for the beta component; '
            'falling back to coordinate search'
        )
        x, converged = _newton(_coordinate_search(x, st), st)
    if not converged:
        raise ConvergenceError(
            f'Beta fit did not converge; last iterate mu={x[0]!r}, '
            f'phi={x[1]!r}',
            iterations=MAX_NEWTON_STEPS,
            last_iterate=tuple(x),
        )

    observed = -_hessian(x[0], x[1], st)
    return float(x[0]), float(x[1]), observed, _loglik(x[0], x[1], st)


def _xlogy(count: int, value: float) -> float:
    return count * math.log(value) if count else 0.0


def fit_beta_inflated(sample: ProportionSample, kind: ModelKind,
                      level: Optional[float] = DEFAULT_LEVEL) -> FitReport:
    """
    Maximum likelihood fit of ZIB or ZOIB.

    Parameters
    ----------
    sample : ProportionSample

    kind : ModelKind
        ``ModelKind.ZIB`` or ``ModelKind.ZOIB``.

    level : float, optional
        Confidence level of the attached Wald intervals.
    """
    n, n0, n1 = sample.n, sample.n0, sample.n1
    estimates: Dict[str, float] = {}
    if kind is ModelKind.ZIB:
        if n1:
            raise ModelMismatchError(
                f'Sample contains {n1} exact ones, which ZIB cannot produce',
                hint='sample contains ones; fit ZOIB',
            )
        if n0 == 0 or n0 == n:
            raise BoundaryError(
                'ZIB needs some but not all observations at 0 '
                f'(found {n0} of {n})'
            )
        alpha = n0 / n
        estimates['alpha'] = alpha
        atom_info = [n / (alpha * (1.0 - alpha))]
        atom_ll = _xlogy(n0, alpha) + _xlogy(n - n0, 1.0 - alpha)
    elif kind is ModelKind.ZOIB:
        atoms = n0 + n1
        if atoms == 0 or atoms == n:
            raise BoundaryError(
                'ZOIB needs some but not all observations at 0 or 1 '
                f'(found {atoms} of {n})'
            )
        if n0 == 0 or n1 == 0:
            raise BoundaryError(
                'ZOIB needs observations at both 0 and 1; fit ZIB instead'
            )
        alpha, p = atoms / n, n1 / atoms
        estimates.update(alpha=alpha, p=p)
        atom_info = [n / (alpha * (1.0 - alpha)), n * alpha / (p * (1.0 - p))]
        atom_ll = (_xlogy(atoms, alpha) + _xlogy(n - atoms, 1.0 - alpha)
                   + _xlogy(n1, p) + _xlogy(n0, 1.0 - p))
    else:
        raise UsageError(f'{kind.value} is not an inflated beta model')

    mu, phi, observed, interior_ll = fit_interior_beta(sample)
    estimates.update(mu=mu, phi=phi)

    size = len(estimates)
    fisher = np.zeros((size, size))
    fisher[np.arange(len(atom_info)), np.arange(len(atom_info))] = atom_info
    fisher[-2:, -2:] = observed

    try:
        np.linalg.cholesky(observed)
    except np.linalg.LinAlgError:
        raise EstimationError(
            'Observed information of the beta component is not positive '
            'definite at the optimum'
        ) from None

    report = FitReport(
        model=kind,
        method=Method.MLE,
        n=n,
        estimates=estimates,
        std_errors=standard_errors(fisher, list(estimates)),
        fisher=fisher,
        log_lik=atom_ll + interior_ll,
    )
    logger.info('%s fit: %s', kind.value, estimates)
    if level is not None:
        report = confidence_intervals(report, level)
    return report


def fitted_beta_params(report: FitReport) -> InflatedBetaParams:
    """The inflated beta parameter bundle of a fitted report."""
    est = report.estimates
    return InflatedBetaParams(alpha=est['alpha'], mu=est['mu'], phi=est['phi'],
                              p=est.get('p'))
