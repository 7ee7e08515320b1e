"""Sweep runner: turns an ExperimentSpec into result rows.

Two row flavors exist. A ``p_m_db`` sweep (the ``fig1`` experiment) fixes the
jamming power at each grid point, solves the destination outage constraint
for R, and reports the three analytic rate expressions as pseudo-schemes
``true``, ``bound``, and ``approx``. The other sweeps run the configured
schemes at each point; each scheme picks its own operating point.

Monte Carlo columns, when enabled, always estimate the TRUE monitoring rate
at the row's operating point, so simulation never inherits the analytic
shortcut it is meant to check. Row seeds are spawned from (seed, experiment
id, sweep index, scheme index), making every row reproducible in isolation.
"""

from __future__ import annotations

import dataclasses
import math
import sys
from dataclasses import dataclass

import numpy as np

from .channel import SystemParams, derive_link
from .config import ExperimentSpec, db_to_linear
from .errors import FasmonError
from .mcsim import estimate_monitoring_rate
from .optimize import Scheme, evaluate_scheme
from .outage import RatePoint, rate_approx, rate_bound, rate_for_pm, rate_true

_EXPERIMENT_IDS = {"custom": 0, "fig1": 1, "fig2": 2, "fig3": 3}

_CURVE_TAGS = ("true", "bound", "approx")


@dataclass(frozen=True)
class ResultRow:
    """One CSV row: a scheme (or analytic curve) at one sweep point."""

    experiment: str
    scheme: str
    x_name: str
    x_value: float
    r_star_bits: float
    pm_star_db: float
    rate_analytic: float
    rate_mc_mean: float | None
    rate_mc_ci95: float | None
    clamped: bool


def row_seed(seed: int, experiment: str, sweep_idx: int, scheme_idx: int) -> int:
    """Deterministic per-row substream key, independent of run order."""
    ss = np.random.SeedSequence(
        [seed, _EXPERIMENT_IDS[experiment], sweep_idx, scheme_idx])
    return int(ss.generate_state(1)[0])


def expected_row_count(spec: ExperimentSpec) -> int:
    per_point = len(_CURVE_TAGS) if spec.sweep_variable == "p_m_db" else len(spec.schemes)
    return len(spec.sweep_values) * per_point


def _point_params(spec: ExperimentSpec, x_value: float) -> SystemParams:
    if spec.sweep_variable == "ratio_db":
        cross = db_to_linear(x_value) * spec.params.sigma_h2
        return dataclasses.replace(spec.params, sigma_g2=cross, sigma_f2=cross)
    if spec.sweep_variable == "n_ports":
        return dataclasses.replace(spec.params, n_ports=int(x_value))
    return spec.params


def _pm_db(p_m: float) -> float:
    return 10.0 * math.log10(p_m) if p_m > 0.0 else float("-inf")


def _mc_columns(spec: ExperimentSpec, params, link, rate_point: RatePoint,
                n_ports: int, seed: int):
    if spec.mc_samples <= 0:
        return None, None
    est = estimate_monitoring_rate(params, link, rate_point, n_ports,
                                   spec.mc_samples, seed)
    return est.mean, est.half_width_95


def _curve_rows(spec: ExperimentSpec, sweep_idx: int, x_value: float) -> list[ResultRow]:
    params = spec.params
    link = derive_link(params)
    p_m = db_to_linear(x_value)
    rate_r = rate_for_pm(params, p_m)
    rp = RatePoint(rate_r)
    evaluators = {"true": rate_true, "bound": rate_bound, "approx": rate_approx}
    rows = []
    for scheme_idx, tag in enumerate(_CURVE_TAGS):
        value = evaluators[tag](params, link, rp)
        mc_mean, mc_ci = (None, None)
        if tag == "true":
            mc_mean, mc_ci = _mc_columns(
                spec, params, link, rp, params.n_ports,
                row_seed(spec.seed, spec.experiment, sweep_idx, scheme_idx))
        rows.append(ResultRow(
            experiment=spec.experiment, scheme=tag,
            x_name=spec.sweep_variable, x_value=x_value,
            r_star_bits=rate_r, pm_star_db=x_value,
            rate_analytic=value, rate_mc_mean=mc_mean, rate_mc_ci95=mc_ci,
            clamped=False))
    return rows


def _scheme_rows(spec: ExperimentSpec, sweep_idx: int, x_value: float) -> list[ResultRow]:
    params = _point_params(spec, x_value)
    link = derive_link(params)
    rows = []
    for scheme_idx, scheme in enumerate(spec.schemes):
        try:
            result = evaluate_scheme(params, link, scheme)
        except FasmonError as exc:
            print(f"fasmon: {spec.sweep_variable}={x_value:g} {scheme.value}: "
                  f"{type(exc).__name__}: {exc}", file=sys.stderr)
            continue
        n_ports_mc = 1 if scheme is Scheme.CONVENTIONAL_SINGLE else params.n_ports
        mc_mean, mc_ci = _mc_columns(
            spec, params, link, RatePoint(result.r_star), n_ports_mc,
            row_seed(spec.seed, spec.experiment, sweep_idx, scheme_idx))
        rows.append(ResultRow(
            experiment=spec.experiment, scheme=scheme.value,
            x_name=spec.sweep_variable, x_value=x_value,
            r_star_bits=result.r_star, pm_star_db=_pm_db(result.pm_star),
            rate_analytic=result.rate_true_at_rstar,
            rate_mc_mean=mc_mean, rate_mc_ci95=mc_ci,
            clamped=result.clamped))
    return rows


def run_experiment(spec: ExperimentSpec) -> list[ResultRow]:
    """Run every sweep point; failed points are reported and skipped.

    The caller can compare len(result) with expected_row_count(spec) to
    detect partial output.
    """
    point_fn = _curve_rows if spec.sweep_variable == "p_m_db" else _scheme_rows
    rows: list[ResultRow] = []
    for sweep_idx, x_value in enumerate(spec.sweep_values):
        try:
            rows.extend(point_fn(spec, sweep_idx, x_value))
        except FasmonError as exc:
            print(f"fasmon: {spec.sweep_variable}={x_value:g}: "
                  f"{type(exc).__name__}: {exc}", file=sys.stderr)
    return rows
