"""Analytic outage probabilities and monitoring rates.

Three quantities describe the monitor's side: the exact port-selection
outage (a Marcum-Q integral), a closed-form lower bound on it, and a
large-eta approximation. The destination side has a Rayleigh/interference
outage in closed form, which pins the one-to-one correspondence between the
suspicious rate R and the jamming power p_m through the equality constraint
P_out = delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import DerivedLink, SystemParams, eta_factor
from .errors import (AccuracyError, ComputationError,
                     ConstraintInfeasibleError, DegenerateRateError,
                     DomainError)
from .specfun import QuadratureSpec, integrate_expweighted, lambert_w0, marcum_q1

_LN2 = math.log(2.0)

# sigma_d2/(p_m_max*sigma_f2) beyond this would overflow exp() inside the
# Lambert-W argument; switch to the equivalent log-form root solve
_LAMBERT_FORM_LIMIT = 500.0


@dataclass(frozen=True)
class RatePoint:
    """A candidate suspicious rate R with its SNR threshold 2^R - 1.

    Constructing with only rate_r fills gamma_th; providing both checks
    consistency to 1e-12 relative.
    """

    rate_r: float
    gamma_th: float = None  # type: ignore[assignment]

    def __post_init__(self):
        if not (math.isfinite(self.rate_r) and self.rate_r >= 0.0):
            raise DomainError(f"rate_r must be finite and >= 0, got {self.rate_r!r}")
        implied = math.expm1(self.rate_r * _LN2)
        if self.gamma_th is None:
            object.__setattr__(self, "gamma_th", implied)
        elif abs(self.gamma_th - implied) > 1e-12 * max(1.0, implied):
            raise DomainError(
                f"gamma_th {self.gamma_th!r} inconsistent with rate_r {self.rate_r!r}"
            )


@dataclass(frozen=True)
class SdOutageBreakdown:
    """The two exponential-rate parameters of the destination outage and the
    resulting success probability. lambda2 is +inf when gamma_th or p_m is 0
    (no interference term)."""

    lambda1: float
    lambda2: float
    success_prob: float


def sd_outage(params: SystemParams, rp: RatePoint, p_m: float) -> tuple[float, SdOutageBreakdown]:
    """Destination outage probability under jamming power p_m.

        P_out = 1 - exp(-gamma_th sigma_d2 / (p_s sigma_h2))
                    / (1 + gamma_th p_m sigma_f2 / (p_s sigma_h2))

    Returns (outage, breakdown).
    """
    if not (math.isfinite(p_m) and p_m >= 0.0):
        raise DomainError(f"p_m must be finite and >= 0, got {p_m!r}")
    ps_h = params.p_s * params.sigma_h2
    gamma = rp.gamma_th
    success = math.exp(-gamma * params.sigma_d2 / ps_h) / (1.0 + gamma * p_m * params.sigma_f2 / ps_h)
    breakdown = SdOutageBreakdown(
        lambda1=1.0 / ps_h,
        lambda2=(1.0 / (params.sigma_f2 * gamma * p_m)) if gamma > 0.0 and p_m > 0.0 else math.inf,
        success_prob=success,
    )
    return 1.0 - success, breakdown


def _gamma_min_root(a_coef: float, b_coef: float, delta: float) -> float:
    """Solve exp(-A*g)/(1 + B*g) = 1 - delta for g > 0 via the substitution
    d = A*g:  d + log1p(d*B/A) = -ln(1-delta). Newton from d = -ln(1-delta);
    the left side is increasing and convex, so the iteration is monotone."""
    target = -math.log1p(-delta)
    ratio = b_coef / a_coef
    d = target
    for _ in range(100):
        f = d + math.log1p(d * ratio) - target
        fp = 1.0 + ratio / (1.0 + d * ratio)
        step = f / fp
        d -= step
        if abs(step) <= 1e-15 * max(1.0, abs(d)):
            break
    return d / a_coef


def rate_bounds(params: SystemParams) -> tuple[float, float]:
    """The feasible band [r_min, r_max] of suspicious rates.

    r_max comes from the no-jamming outage hitting delta; r_min from the
    full-power outage hitting delta, via the principal Lambert W branch:

        gamma_min = (1/A) W( (A/B) e^{A/B} / (1-delta) ) - 1/B,
        A = sigma_d2/(p_s sigma_h2),  B = p_m_max sigma_f2/(p_s sigma_h2).

    For A/B > 500 the W argument would overflow, so the equivalent
    well-conditioned root solve on d = A*gamma is used instead (both paths
    agree to 1e-12 where both are finite).
    """
    a_coef = params.sigma_d2 / (params.p_s * params.sigma_h2)
    b_coef = params.p_m_max * params.sigma_f2 / (params.p_s * params.sigma_h2)
    r_max = math.log2(1.0 - params.p_s * params.sigma_h2 * math.log1p(-params.delta) / params.sigma_d2)
    ratio = a_coef / b_coef
    if ratio <= _LAMBERT_FORM_LIMIT:
        arg = ratio * math.exp(ratio) / (1.0 - params.delta)
        gamma_min = lambert_w0(arg) / a_coef - 1.0 / b_coef
    else:
        gamma_min = _gamma_min_root(a_coef, b_coef, params.delta)
    r_min = math.log1p(gamma_min) / _LN2
    if not (0.0 < r_min <= r_max * (1.0 + 1e-12)):
        raise ComputationError(
            f"inconsistent rate bounds r_min={r_min!r}, r_max={r_max!r}"
        )
    return min(r_min, r_max), r_max


def pm_for_rate(params: SystemParams, rp: RatePoint) -> float:
    """The unique jamming power making the destination outage equal delta at
    rate R; the closed inversion of sd_outage.

    R = 0 can never meet the constraint (outage is 0 for every p_m), and
    rates outside [r_min, r_max] would need p_m outside [0, p_m_max]; both
    raise.
    """
    if rp.rate_r == 0.0:
        raise DegenerateRateError("R = 0 has zero outage for every jamming power")
    r_min, r_max = rate_bounds(params)
    slack = 1e-9
    if rp.rate_r < r_min * (1.0 - slack) or rp.rate_r > r_max * (1.0 + slack):
        raise ConstraintInfeasibleError(
            f"rate {rp.rate_r!r} outside the feasible band [{r_min!r}, {r_max!r}]"
        )
    ps_h = params.p_s * params.sigma_h2
    gamma = rp.gamma_th
    p_m = (ps_h / (gamma * params.sigma_f2)) * (
        math.exp(-gamma * params.sigma_d2 / ps_h) / (1.0 - params.delta) - 1.0
    )
    return min(max(p_m, 0.0), params.p_m_max)


def rate_for_pm(params: SystemParams, p_m: float) -> float:
    """The rate R at which the destination outage equals delta for a fixed
    jamming power; the inverse map of pm_for_rate. p_m = 0 lands on r_max,
    p_m = p_m_max on r_min."""
    if not (math.isfinite(p_m) and 0.0 <= p_m <= params.p_m_max * (1.0 + 1e-12)):
        raise DomainError(f"p_m must lie in [0, p_m_max], got {p_m!r}")
    a_coef = params.sigma_d2 / (params.p_s * params.sigma_h2)
    if p_m == 0.0:
        return rate_bounds(params)[1]
    b_coef = p_m * params.sigma_f2 / (params.p_s * params.sigma_h2)
    gamma = _gamma_min_root(a_coef, b_coef, params.delta)
    return math.log1p(gamma) / _LN2


# ---------------------------------------------------------------------------
# Monitor-side outage
# ---------------------------------------------------------------------------

def monitor_outage_true(link: DerivedLink, rp: RatePoint, n_ports: int,
                        spec: QuadratureSpec | None = None) -> float:
    """Exact port-selection outage probability.

        int_0^inf e^{-t} [1 - Q1( sqrt(2 mu^2/(1-mu^2)) sqrt(t),
                                  sqrt(2/(1-mu^2)) sqrt(gamma_th/Gamma) )]^N dt

    evaluated by refined Gauss-Laguerre quadrature. mu = 0 collapses to the
    i.i.d. closed form (1 - e^{-gamma_th/Gamma})^N without quadrature.
    """
    if n_ports < 1:
        raise DomainError(f"n_ports must be >= 1, got {n_ports!r}")
    gamma = rp.gamma_th
    if gamma == 0.0:
        return 0.0
    mu = link.mu
    ratio = gamma / link.gamma_cap
    if mu == 0.0:
        return (-math.expm1(-ratio)) ** n_ports
    one_minus_mu2 = 1.0 - mu * mu
    a_scale = math.sqrt(2.0 * mu * mu / one_minus_mu2)
    b_val = math.sqrt(2.0 * ratio / one_minus_mu2)

    def integrand(ts):
        return [
            (1.0 - marcum_q1(a_scale * math.sqrt(t), b_val)) ** n_ports
            for t in ts
        ]

    if spec is not None:
        value = integrate_expweighted(integrand, spec)
    else:
        try:
            value = integrate_expweighted(integrand, QuadratureSpec())
        except AccuracyError:
            # mu near 1 with many ports makes the port-selection transition
            # sharp; a denser starting rule (reaching 2048 nodes) resolves it
            value = integrate_expweighted(integrand, QuadratureSpec(node_count=128))
    return min(max(value, 0.0), 1.0)


def monitor_outage_bound(link: DerivedLink, rp: RatePoint, n_ports: int) -> float:
    """Closed-form lower bound on the exact outage:
    eta * (1 - e^{-gamma_th/(Gamma(1-mu^2))})^N."""
    if n_ports < 1:
        raise DomainError(f"n_ports must be >= 1, got {n_ports!r}")
    eta = eta_factor(link.mu, n_ports)
    scale = link.gamma_cap * (1.0 - link.mu * link.mu)
    return eta * (-math.expm1(-rp.gamma_th / scale)) ** n_ports


def monitor_outage_approx(link: DerivedLink, rp: RatePoint, n_ports: int) -> float:
    """Small-outage approximation 1 - N e^{-gamma_th/Gamma}.

    Returned raw (it goes negative when N e^{-gamma_th/Gamma} > 1): the
    optimizer needs the smooth form. Reporting layers clamp to [0, 1].
    """
    if n_ports < 1:
        raise DomainError(f"n_ports must be >= 1, got {n_ports!r}")
    return 1.0 - n_ports * math.exp(-rp.gamma_th / link.gamma_cap)


# ---------------------------------------------------------------------------
# Average monitoring rates
# ---------------------------------------------------------------------------

def rate_true(params: SystemParams, link: DerivedLink, rp: RatePoint,
              spec: QuadratureSpec | None = None) -> float:
    """R * (1 - exact monitor outage)."""
    if rp.rate_r == 0.0:
        return 0.0
    return rp.rate_r * (1.0 - monitor_outage_true(link, rp, params.n_ports, spec))


def rate_bound(params: SystemParams, link: DerivedLink, rp: RatePoint,
               spec: QuadratureSpec | None = None) -> float:
    """R * (1 - outage lower bound); an upper bound on rate_true. The spec
    argument is accepted for interchangeability and ignored (closed form)."""
    if rp.rate_r == 0.0:
        return 0.0
    return rp.rate_r * (1.0 - monitor_outage_bound(link, rp, params.n_ports))


def rate_approx(params: SystemParams, link: DerivedLink, rp: RatePoint,
                spec: QuadratureSpec | None = None) -> float:
    """N * R * e^{-gamma_th/Gamma}, the raw approximate rate (also an upper
    bound on rate_true). The spec argument is ignored (closed form)."""
    if rp.rate_r == 0.0:
        return 0.0
    return params.n_ports * rp.rate_r * math.exp(-rp.gamma_th / link.gamma_cap)
