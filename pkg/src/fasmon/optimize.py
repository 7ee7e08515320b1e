"""Solvers for the jamming-power / rate trade-off.

All three maximize an average monitoring rate over the feasible rate band
[r_min, r_max] (rate and jamming power are in one-to-one correspondence
through the destination outage constraint):

* solve_bound_bisect   - bisection on the derivative sign of the bound
                         objective F(x) = log2(1+x) (1 - eta u^N), split as
                         dF/dx = h - g;
* solve_closed_form    - Lambert-W stationary point of R e^{-(2^R-1)/Gamma};
* solve_true_grid      - exhaustive grid search on the exact rate (the
                         expensive oracle the other two approximate).

The derivative split is NOT globally single-crossing: g decays to zero at
large x while h keeps a positive floor for mu > 0, so h - g can go
+ -> - -> + and the best point may sit on the boundary. The bisection solver
therefore always compares its interior root against both band endpoints and
returns the best of the three.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channel import DerivedLink, SystemParams, eta_factor
from .errors import AccuracyError, DomainError
from .outage import (RatePoint, pm_for_rate, rate_approx, rate_bound,
                     rate_bounds, rate_true)
from .specfun import QuadratureSpec, lambert_w0

_LN2 = math.log(2.0)
_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class Scheme(enum.Enum):
    PROPOSED_BISECT = "ProposedBisect"
    PROPOSED_CLOSED_FORM = "ProposedClosedForm"
    TRUE_GRID = "TrueGrid"
    CONSTANT_JAMMING = "ConstantJamming"
    PASSIVE = "Passive"
    CONVENTIONAL_SINGLE = "ConventionalSingle"


@dataclass(frozen=True)
class OptResult:
    """Solver output.

    r_star: chosen rate (bits/use); pm_star: jamming power meeting the
    destination constraint there; objective_value: the scheme's own objective
    at r_star; rate_true_at_rstar: the exact average monitoring rate at
    r_star; clamped: whether a band endpoint was returned instead of an
    interior stationary point; iterations: objective/derivative evaluations
    spent.
    """

    r_star: float
    pm_star: float
    objective_value: float
    rate_true_at_rstar: float
    clamped: bool
    iterations: int


def objective_terms(link: DerivedLink, n_ports: int, x):
    """(F, h, g) of the bound objective at threshold x = 2^R - 1.

        F(x) = log2(1+x) (1 - eta u^N),        u = 1 - e^{-x/c},
        h(x) = (1 - eta u^N) / (ln2 (1+x)),
        g(x) = (N log2(1+x) / c) eta u^{N-1} e^{-x/c},   c = Gamma (1-mu^2),

    with dF/dx = h - g. Accepts a float or an ndarray of x values.
    """
    if n_ports < 2:
        raise DomainError(f"objective split needs n_ports >= 2, got {n_ports!r}")
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0.0):
        raise DomainError("x must be >= 0")
    eta = eta_factor(link.mu, n_ports)
    c = link.gamma_cap * (1.0 - link.mu * link.mu)
    decay = np.exp(-xs / c)
    u = -np.expm1(-xs / c)
    log_term = np.log1p(xs) / _LN2
    survival = 1.0 - eta * u ** n_ports
    big_f = log_term * survival
    h = survival / (_LN2 * (1.0 + xs))
    g = (n_ports * log_term / c) * eta * u ** (n_ports - 1) * decay
    if np.isscalar(x):
        return float(big_f), float(h), float(g)
    return big_f, h, g


def _bound_rate_at(params: SystemParams, link: DerivedLink, r: float) -> float:
    return rate_bound(params, link, RatePoint(r))


def solve_bound_bisect(params: SystemParams, link: DerivedLink, tol: float = 1e-9) -> OptResult:
    """Maximize the bound objective by bisection on sign(h - g).

    Scans a 129-point grid over [r_min, r_max] for + -> - derivative sign
    transitions, bisects each bracket to `tol` on R, extends the interval
    upward when the derivative never turns negative inside, and returns the
    best of {interior roots clamped into the band, r_min, r_max} under the
    bound objective. `clamped` is False only when an interior root wins.
    """
    if tol <= 0.0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    if params.n_ports < 2:
        raise DomainError("solve_bound_bisect needs n_ports >= 2")
    r_min, r_max = rate_bounds(params)

    def deriv(r: float) -> float:
        _, h, g = objective_terms(link, params.n_ports, math.expm1(r * _LN2))
        return h - g

    grid = np.linspace(r_min, r_max, 129)
    _, h_vals, g_vals = objective_terms(link, params.n_ports, np.expm1(grid * _LN2))
    signs = h_vals - g_vals

    roots: list[float] = []
    iterations = 0
    for i in np.flatnonzero((signs[:-1] > 0.0) & (signs[1:] <= 0.0)):
        lo, hi = float(grid[i]), float(grid[i + 1])
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if deriv(mid) > 0.0:
                lo = mid
            else:
                hi = mid
            iterations += 1
        roots.append(0.5 * (lo + hi))

    if not roots and signs[-1] > 0.0:
        # derivative positive across the band: look for the turn above r_max
        width = max(r_max - r_min, 1.0)
        lo = r_max
        for k in range(1, 6):
            hi = r_max + width * (2.0 ** k)
            if deriv(hi) <= 0.0:
                while hi - lo > tol:
                    mid = 0.5 * (lo + hi)
                    if deriv(mid) > 0.0:
                        lo = mid
                    else:
                        hi = mid
                    iterations += 1
                roots.append(0.5 * (lo + hi))
                break
            lo = hi

    interior = [r for r in roots if r_min < r < r_max]
    candidates = [(r, False) for r in interior] + [(r_min, True), (r_max, True)]
    scored = [(_bound_rate_at(params, link, r), r, was_clamped)
              for r, was_clamped in candidates]
    best_val, r_star, clamped = max(scored, key=lambda s: (s[0], s[1]))

    return OptResult(
        r_star=r_star,
        pm_star=pm_for_rate(params, RatePoint(r_star)),
        objective_value=best_val,
        rate_true_at_rstar=rate_true(params, link, RatePoint(r_star)),
        clamped=clamped,
        iterations=iterations,
    )


def solve_closed_form(params: SystemParams, link: DerivedLink) -> OptResult:
    """Lambert-W maximizer of R e^{-(2^R-1)/Gamma}, clamped into the band.

    When the stationary point is interior, its stationarity is re-verified
    numerically to 1e-8 (the derivative has the closed form
    e^{-gamma/Gamma} (1 - R 2^R ln2 / Gamma)).
    """
    r_min, r_max = rate_bounds(params)
    r_bar = lambert_w0(link.gamma_cap) / _LN2
    r_star = min(max(r_min, r_bar), r_max)
    clamped = r_star != r_bar
    if not clamped:
        gamma = math.expm1(r_bar * _LN2)
        slope = math.exp(-gamma / link.gamma_cap) * (
            1.0 - r_bar * (gamma + 1.0) * _LN2 / link.gamma_cap
        )
        if abs(slope) > 1e-8:
            raise AccuracyError("closed-form stationarity check failed", r_bar, slope)
    rp = RatePoint(r_star)
    return OptResult(
        r_star=r_star,
        pm_star=pm_for_rate(params, rp),
        objective_value=rate_approx(params, link, rp),
        rate_true_at_rstar=rate_true(params, link, rp),
        clamped=clamped,
        iterations=0,
    )


def _argmax_upward(values) -> int:
    """Index of the maximum, ties broken toward the larger index."""
    arr = np.asarray(values)
    return arr.size - 1 - int(np.argmax(arr[::-1]))


def solve_true_grid(params: SystemParams, link: DerivedLink,
                    spec: QuadratureSpec | None = None,
                    grid_points: int = 4096) -> OptResult:
    """Exhaustive maximization of the exact rate on a uniform R grid,
    refined by one golden-section pass inside the winning bracket. Ties
    prefer the larger R."""
    if grid_points < 1000:
        raise DomainError(f"grid_points must be >= 1000, got {grid_points!r}")
    r_min, r_max = rate_bounds(params)
    grid = np.linspace(r_min, r_max, grid_points)

    def objective(r: float) -> float:
        return rate_true(params, link, RatePoint(r), spec)

    values = [objective(float(r)) for r in grid]
    evals = grid_points
    idx = _argmax_upward(values)

    lo = float(grid[max(idx - 1, 0)])
    hi = float(grid[min(idx + 1, grid_points - 1)])
    best_r, best_val = float(grid[idx]), values[idx]
    a, b = lo, hi
    x1 = b - _INV_GOLDEN * (b - a)
    x2 = a + _INV_GOLDEN * (b - a)
    f1, f2 = objective(x1), objective(x2)
    evals += 2
    for _ in range(40):
        if b - a <= 1e-7:
            break
        if f2 >= f1:  # prefer the upper subinterval on ties
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_GOLDEN * (b - a)
            f2 = objective(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_GOLDEN * (b - a)
            f1 = objective(x1)
        evals += 1
    for r, v in ((x1, f1), (x2, f2)):
        if v > best_val or (v == best_val and r > best_r):
            best_r, best_val = r, v

    return OptResult(
        r_star=best_r,
        pm_star=pm_for_rate(params, RatePoint(best_r)),
        objective_value=best_val,
        rate_true_at_rstar=best_val,
        clamped=idx in (0, grid_points - 1),
        iterations=evals,
    )


def evaluate_scheme(params: SystemParams, link: DerivedLink, scheme: Scheme,
                    spec: QuadratureSpec | None = None) -> OptResult:
    """Run one monitoring scheme and report its operating point.

    ConstantJamming pins p_m = p_m_max (so R = r_min); Passive pins p_m = 0
    (so R = r_max); ConventionalSingle is the single-antenna monitor, whose
    exact rate R e^{-gamma_th/Gamma} the Lambert-W point maximizes.
    """
    if scheme is Scheme.PROPOSED_BISECT:
        return solve_bound_bisect(params, link)
    if scheme is Scheme.PROPOSED_CLOSED_FORM:
        return solve_closed_form(params, link)
    if scheme is Scheme.TRUE_GRID:
        return solve_true_grid(params, link, spec)
    if scheme is Scheme.CONSTANT_JAMMING:
        r_min, _ = rate_bounds(params)
        rp = RatePoint(r_min)
        value = rate_true(params, link, rp, spec)
        return OptResult(r_star=r_min, pm_star=params.p_m_max, objective_value=value,
                         rate_true_at_rstar=value, clamped=False, iterations=0)
    if scheme is Scheme.PASSIVE:
        _, r_max = rate_bounds(params)
        rp = RatePoint(r_max)
        value = rate_true(params, link, rp, spec)
        return OptResult(r_star=r_max, pm_star=0.0, objective_value=value,
                         rate_true_at_rstar=value, clamped=False, iterations=0)
    if scheme is Scheme.CONVENTIONAL_SINGLE:
        r_min, r_max = rate_bounds(params)
        r_bar = lambert_w0(link.gamma_cap) / _LN2
        r_star = min(max(r_min, r_bar), r_max)
        rp = RatePoint(r_star)
        value = rp.rate_r * math.exp(-rp.gamma_th / link.gamma_cap)
        return OptResult(r_star=r_star, pm_star=pm_for_rate(params, rp),
                         objective_value=value, rate_true_at_rstar=value,
                         clamped=r_star != r_bar, iterations=0)
    raise DomainError(f"unknown scheme {scheme!r}")
