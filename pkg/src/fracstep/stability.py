"""Stability analysis of the weighted-average schemes.

A von-Neumann-style analysis of a single subdiffusive mode
U_j^(m) = zeta_m exp(i q j dx) gives the closed-form bound: the scheme is
stable as long as 1/S >= 1/S_x with

    1/S_x = 2 (2 lam - 1) w(-1, 1 - gamma),

where w(z, alpha) is the generating function of the weight family.  The
right-hand side is non-positive for lam <= 1/2, so those schemes are
stable for every S.  This module exposes the bound, an empirical probe
that drives the worst-case checkerboard mode (q dx = pi) through the
actual stepper, a bisection estimator of the empirical threshold, and
grid sweeps for phase diagrams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from fracstep.coeffs import FormulaFamily, eval_generating_function
from fracstep.solver import (
    OverflowDetected,
    ProblemSpec,
    SchemeConfig,
    dt_for_mesh_ratio,
    run,
)

__all__ = [
    "StabilityReport",
    "UNCONDITIONAL",
    "inv_stability_bound",
    "stability_bound",
    "probe_stability",
    "find_empirical_threshold",
    "phase_diagram",
]

#: Marker returned by :func:`stability_bound` when lam <= 1/2.
UNCONDITIONAL = math.inf

INSTABILITY_THRESHOLD = 10.0
PROBE_AMPLITUDE = 1e-6
BISECTION_TOL = 1e-3


@dataclass(frozen=True)
class StabilityReport:
    """Outcome of one empirical stability probe.

    s_value: the probed mesh ratio S.
    s_cross: critical ratio S_x (math.inf when the bound is non-binding).
    theoretical_verdict: one of "stable", "unstable", "unconditionally_stable".
    growth_factor: max-norm(final level) / probe amplitude.
    empirical_verdict: "stable" or "unstable".
    probe_steps: number of levels actually computed.
    """

    s_value: float
    s_cross: float
    theoretical_verdict: str
    growth_factor: float
    empirical_verdict: str
    probe_steps: int


def _check_params(gamma: float, lam: float) -> None:
    if not (0.0 < gamma <= 1.0):
        raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
    if not (0.0 <= lam <= 1.0):
        raise ValueError(f"lam must lie in [0, 1], got {lam}")


def inv_stability_bound(family: FormulaFamily, gamma: float, lam: float) -> float:
    """Raw bound value 1/S_x = 2 (2 lam - 1) w(-1, 1 - gamma).

    Negative or zero means the scheme is stable for every S.
    """
    _check_params(gamma, lam)
    return 2.0 * (2.0 * lam - 1.0) * eval_generating_function(family, 1.0 - gamma, -1.0)


def stability_bound(family: FormulaFamily, gamma: float, lam: float) -> float:
    """Critical mesh ratio S_x; ``UNCONDITIONAL`` (inf) when lam <= 1/2."""
    inv = inv_stability_bound(family, gamma, lam)
    if inv <= 0.0:
        return UNCONDITIONAL
    return 1.0 / inv


def _theoretical_verdict(s: float, lam: float, s_cross: float) -> str:
    if lam <= 0.5:
        return "unconditionally_stable"
    return "stable" if s <= s_cross else "unstable"


def probe_stability(
    family: FormulaFamily,
    gamma: float,
    lam: float,
    s: float,
    nodes: int = 32,
    steps: int = 400,
) -> StabilityReport:
    """Drive the checkerboard mode through the stepper and measure growth.

    The probe problem lives on [0, 1] with zero Dirichlet data and the
    interior seeded with U_j(0) = (-1)^j * amplitude -- the discrete mode
    with q dx = pi, which maximizes the second-difference amplification.
    The node count must be even so the mode is compatible with the
    boundaries.  Growth beyond ``INSTABILITY_THRESHOLD`` (or an overflow
    signal) is classified unstable.
    """
    _check_params(gamma, lam)
    if nodes < 8 or nodes % 2 != 0:
        raise ValueError(f"nodes must be even and >= 8, got {nodes}")
    if steps < 50:
        raise ValueError(f"steps must be >= 50, got {steps}")
    if not (s > 0.0):
        raise ValueError(f"s must be > 0, got {s}")

    eps = PROBE_AMPLITUDE
    dx = 1.0 / nodes

    def checkerboard(x: float) -> float:
        j = round(x / dx)
        if j == 0 or j == nodes:
            return 0.0
        return eps if j % 2 == 0 else -eps

    problem = ProblemSpec(gamma=gamma, k_gamma=1.0, initial_condition=checkerboard)
    config = SchemeConfig(
        lam=lam,
        dx=dx,
        dt=dt_for_mesh_ratio(s, dx, gamma),
        family=family,
        steps=steps,
    )
    try:
        history = run(problem, config)
        growth = float(np.max(np.abs(history.level(history.top_level)))) / eps
        probe_steps = history.top_level
    except OverflowDetected as overflow:
        growth = math.inf
        probe_steps = overflow.level

    s_cross = stability_bound(family, gamma, lam)
    return StabilityReport(
        s_value=s,
        s_cross=s_cross,
        theoretical_verdict=_theoretical_verdict(s, lam, s_cross),
        growth_factor=growth,
        empirical_verdict="unstable" if growth > INSTABILITY_THRESHOLD else "stable",
        probe_steps=probe_steps,
    )


def find_empirical_threshold(
    family: FormulaFamily,
    gamma: float,
    lam: float,
    bracket: tuple[float, float],
    nodes: int = 32,
    steps: int = 400,
) -> float:
    """Bisect on S between a stable and an unstable probe verdict.

    The bracket endpoints must produce different verdicts.  Bisection
    stops when the bracket is narrower than ``BISECTION_TOL``; the
    midpoint is the empirical S_x.
    """
    s_lo, s_hi = float(bracket[0]), float(bracket[1])
    if not (0.0 < s_lo < s_hi):
        raise ValueError(f"bracket must satisfy 0 < s_lo < s_hi, got {bracket}")

    def is_unstable(s: float) -> bool:
        report = probe_stability(family, gamma, lam, s, nodes=nodes, steps=steps)
        return report.empirical_verdict == "unstable"

    lo_unstable = is_unstable(s_lo)
    hi_unstable = is_unstable(s_hi)
    if lo_unstable == hi_unstable:
        raise ValueError(
            f"bracket endpoints give the same verdict "
            f"({'unstable' if lo_unstable else 'stable'} at both {s_lo} and {s_hi})"
        )
    while s_hi - s_lo > BISECTION_TOL:
        mid = 0.5 * (s_lo + s_hi)
        if is_unstable(mid) == hi_unstable:
            s_hi = mid
        else:
            s_lo = mid
    return 0.5 * (s_lo + s_hi)


def phase_diagram(family: FormulaFamily, gamma_grid, lambda_grid) -> list[tuple[float, float, float]]:
    """Tabulate (gamma, lam, 1/S_x) over the grid.

    1/S_x is the raw bound value, so it crosses zero at lam = 1/2 and is
    negative in the unconditionally stable region.
    """
    gamma_grid = [float(g) for g in gamma_grid]
    lambda_grid = [float(l) for l in lambda_grid]
    if not gamma_grid or not lambda_grid:
        raise ValueError("grids must be non-empty")
    rows = []
    for g in gamma_grid:
        for l in lambda_grid:
            rows.append((g, l, inv_stability_bound(family, g, l)))
    return rows
