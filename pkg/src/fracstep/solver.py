"""Weighted-average time stepper for the fractional subdiffusion equation.

The scheme advances U_j^(m) (node j, level m) by

    U_j^(m+1) = U_j^(m)
              + (1 - lam) S sum_{k=0..m+1} w_k D_j^(m+1-k)
              + lam       S sum_{k=0..m}   w_k D_j^(m-k),

where D_j^(n) = U_{j-1}^(n) - 2 U_j^(n) + U_{j+1}^(n) is the second
difference, w_k are the fractional weights at exponent alpha = 1 - gamma,
and S = k_gamma dt^gamma / dx^2 is the mesh ratio (the operator step h is
identified with dt).  lam = 1 is the explicit method; lam < 1 couples the
unknown level through the k = 0 term of the first sum and requires a
tridiagonal solve with diagonal 1 + 2(1-lam) S w_0 and off-diagonals
-(1-lam) S w_0 -- strictly diagonally dominant, so elimination without
pivoting is stable.

Memory cost is O(M N): the fractional operator convolves over the entire
past, so all levels are kept, and the second-difference row of each level
is cached once so a step costs one dot product over the history.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from fracstep.coeffs import CoefficientTable, FormulaFamily, build_table

__all__ = [
    "ProblemSpec",
    "SchemeConfig",
    "SolutionHistory",
    "OverflowDetected",
    "mesh_ratio",
    "dt_for_mesh_ratio",
    "memory_term",
    "step",
    "run",
]

OVERFLOW_LIMIT = 1e150
_CONSISTENCY_TOL = 1e-12


class OverflowDetected(Exception):
    """Raised when a computed level exceeds the overflow limit.

    This is a signal, not a crash: the stability probe treats it as
    "instability detected".  ``level`` is the first offending time level;
    ``history`` holds all levels computed before it.
    """

    def __init__(self, level: int, history: "SolutionHistory"):
        super().__init__(f"solution overflow at time level {level}")
        self.level = level
        self.history = history


@dataclass(frozen=True)
class ProblemSpec:
    """One subdiffusion PDE instance.

    gamma: anomalous diffusion exponent in (0, 1]; gamma = 1 is classical.
    k_gamma: generalized diffusion coefficient (length^2 / time^gamma).
    domain_length: length of the spatial interval [0, L].
    initial_condition: u(x, 0), sampled at the grid nodes.
    left_value, right_value: Dirichlet data, constant in time.
    """

    gamma: float
    k_gamma: float
    domain_length: float = 1.0
    initial_condition: Callable[[float], float] = lambda x: 0.0
    left_value: float = 0.0
    right_value: float = 0.0

    def __post_init__(self):
        if not (0.0 < self.gamma <= 1.0):
            raise ValueError(f"gamma must lie in (0, 1], got {self.gamma}")
        if not (self.k_gamma > 0.0):
            raise ValueError(f"k_gamma must be > 0, got {self.k_gamma}")
        if not (self.domain_length > 0.0):
            raise ValueError(f"domain_length must be > 0, got {self.domain_length}")


@dataclass(frozen=True)
class SchemeConfig:
    """Numerical scheme parameters.

    lam: weight factor in [0, 1] (1 explicit, 0 fully implicit, 1/2
        Crank-Nicholson).
    dx, dt: grid spacings; the fractional-operator step equals dt.
    family: discretization formula family for the fractional weights.
    steps: number of time steps to take.
    startup_explicit_steps: hybrid mode -- this many initial steps run
        with lam = 1 regardless of ``lam``.
    """

    lam: float
    dx: float
    dt: float
    family: FormulaFamily = FormulaFamily.BDF1
    steps: int = 1
    startup_explicit_steps: int = 0

    def __post_init__(self):
        if not (0.0 <= self.lam <= 1.0):
            raise ValueError(f"lam must lie in [0, 1], got {self.lam}")
        if not (self.dx > 0.0):
            raise ValueError(f"dx must be > 0, got {self.dx}")
        if not (self.dt > 0.0):
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.steps < 0:
            raise ValueError(f"steps must be >= 0, got {self.steps}")
        if self.startup_explicit_steps < 0:
            raise ValueError("startup_explicit_steps must be >= 0")


def mesh_ratio(problem: ProblemSpec, config: SchemeConfig) -> float:
    """S = k_gamma dt^gamma / dx^2, the dimensionless stability ratio."""
    return problem.k_gamma * config.dt**problem.gamma / config.dx**2


def dt_for_mesh_ratio(s: float, dx: float, gamma: float, k_gamma: float = 1.0) -> float:
    """Invert the mesh ratio: dt = (S dx^2 / k_gamma)^(1/gamma)."""
    if not (s > 0.0):
        raise ValueError(f"mesh ratio must be > 0, got {s}")
    return (s * dx * dx / k_gamma) ** (1.0 / gamma)


class SolutionHistory:
    """Full time history U_j^(m), levels 0..M by nodes 0..N.

    Row 0 is the sampled initial condition; every later row carries the
    Dirichlet data at its endpoints.  Rows are append-only.  The second
    difference of each appended row is cached for the memory convolution.
    """

    def __init__(self, first_row: np.ndarray, dx: float, dt: float, capacity: int = 8):
        first_row = np.asarray(first_row, dtype=float)
        if first_row.ndim != 1 or first_row.size < 3:
            raise ValueError("a history row needs at least 3 nodes")
        if not np.all(np.isfinite(first_row)):
            raise ValueError("initial condition contains non-finite values")
        self.dx = float(dx)
        self.dt = float(dt)
        n_nodes = first_row.size
        cap = max(capacity, 1) + 1
        self._values = np.empty((cap, n_nodes))
        self._d2 = np.empty((cap, n_nodes - 2))
        self._top = -1
        self._append(first_row)

    @property
    def n_nodes(self) -> int:
        return self._values.shape[1]

    @property
    def top_level(self) -> int:
        """Index m of the newest level."""
        return self._top

    @property
    def values(self) -> np.ndarray:
        """Read-only (levels+1, nodes) view of the computed history."""
        view = self._values[: self._top + 1]
        view.flags.writeable = False
        return view

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.n_nodes) * self.dx

    def level(self, m: int) -> np.ndarray:
        if not (0 <= m <= self._top):
            raise IndexError(f"level {m} not computed (top is {self._top})")
        view = self._values[m]
        view.flags.writeable = False
        return view

    def second_difference(self, m: int) -> np.ndarray:
        if not (0 <= m <= self._top):
            raise IndexError(f"level {m} not computed (top is {self._top})")
        view = self._d2[m]
        view.flags.writeable = False
        return view

    def _append(self, row: np.ndarray) -> None:
        if self._top + 2 > self._values.shape[0]:
            grow = max(self._values.shape[0] * 2, self._top + 2)
            values = np.empty((grow, self.n_nodes))
            d2 = np.empty((grow, self.n_nodes - 2))
            values[: self._top + 1] = self._values[: self._top + 1]
            d2[: self._top + 1] = self._d2[: self._top + 1]
            self._values, self._d2 = values, d2
        self._top += 1
        self._values[self._top] = row
        self._d2[self._top] = row[:-2] - 2.0 * row[1:-1] + row[2:]


def memory_term(history: SolutionHistory, table: CoefficientTable, m: int, j: int) -> float:
    """Discrete fractional-derivative convolution of the second difference.

    Returns sum_{k=0..m} w_k [U_{j-1}^(m-k) - 2 U_j^(m-k) + U_{j+1}^(m-k)]
    for interior node j, without the 1/h^(1-gamma) prefactor (it is
    absorbed into the mesh ratio S).
    """
    if not (1 <= j <= history.n_nodes - 2):
        raise IndexError(f"node {j} is not interior")
    if not (0 <= m <= history.top_level):
        raise IndexError(f"level {m} not computed")
    if table.capacity < m:
        raise RuntimeError(
            f"coefficient table capacity {table.capacity} < level {m}; "
            "the stepper must pre-extend tables"
        )
    w = table.array(m)
    total = 0.0
    for k in range(m + 1):
        total += w[k] * history.second_difference(m - k)[j - 1]
    return total


def _thomas_factor(c: float, n: int):
    """Factor the constant tridiagonal matrix diag(1+2c) off(-c), size n."""
    d = np.empty(n)
    cp = np.empty(n)
    d[0] = 1.0 + 2.0 * c
    cp[0] = -c / d[0]
    for i in range(1, n):
        d[i] = (1.0 + 2.0 * c) + c * cp[i - 1]
        cp[i] = -c / d[i]
    return d, cp


def _thomas_solve(d: np.ndarray, cp: np.ndarray, c: float, rhs: np.ndarray) -> np.ndarray:
    n = rhs.size
    g = np.empty(n)
    g[0] = rhs[0] / d[0]
    for i in range(1, n):
        g[i] = (rhs[i] + c * g[i - 1]) / d[i]
    u = np.empty(n)
    u[-1] = g[-1]
    for i in range(n - 2, -1, -1):
        u[i] = g[i] - cp[i] * u[i + 1]
    return u


def step(
    history: SolutionHistory,
    problem: ProblemSpec,
    config: SchemeConfig,
    table: CoefficientTable,
    lam: float | None = None,
) -> np.ndarray:
    """Advance the history by one level and return the new row.

    ``lam`` overrides config.lam for this step (used by the hybrid
    startup).  Raises :class:`OverflowDetected` when the new row leaves
    the representable range.
    """
    m = history.top_level
    if table.capacity < m + 1:
        raise RuntimeError(
            f"coefficient table capacity {table.capacity} < {m + 1}; "
            "the stepper must pre-extend tables"
        )
    if lam is None:
        lam = config.lam
    s = mesh_ratio(problem, config)
    w = table.array(m + 1)
    d2 = history._d2[: m + 1]

    # known-level convolutions over the cached second differences:
    # explicit part sum_{k=0..m} w_k D^(m-k) and implicit known part
    # sum_{k=1..m+1} w_k D^(m+1-k) (the k=0 unknown term is the matrix);
    # either drops out at the pure schemes
    exp_conv = w[m::-1] @ d2 if lam != 0.0 else 0.0
    imp_conv = w[m + 1 : 0 : -1] @ d2 if lam != 1.0 else 0.0

    interior = history._values[m][1:-1]
    rhs = interior + s * ((1.0 - lam) * imp_conv + lam * exp_conv)

    c = (1.0 - lam) * s * w[0]
    new_row = np.empty(history.n_nodes)
    new_row[0] = problem.left_value
    new_row[-1] = problem.right_value
    if c == 0.0:
        new_row[1:-1] = rhs
    else:
        rhs[0] += c * problem.left_value
        rhs[-1] += c * problem.right_value
        d, cp = _thomas_factor(c, rhs.size)
        new_row[1:-1] = _thomas_solve(d, cp, c, rhs)

    if not np.all(np.isfinite(new_row)) or np.max(np.abs(new_row)) > OVERFLOW_LIMIT:
        raise OverflowDetected(m + 1, history)
    history._append(new_row)
    return new_row


def _sample_ic(problem: ProblemSpec, config: SchemeConfig) -> np.ndarray:
    n_intervals = problem.domain_length / config.dx
    n = round(n_intervals)
    if n < 2 or abs(n_intervals - n) > 1e-9 * max(1.0, n):
        raise ValueError(
            f"dx={config.dx} does not evenly divide domain_length={problem.domain_length}"
        )
    xs = np.arange(n + 1) * config.dx
    row = np.array([float(problem.initial_condition(x)) for x in xs])
    if abs(row[0] - problem.left_value) > _CONSISTENCY_TOL or abs(
        row[-1] - problem.right_value
    ) > _CONSISTENCY_TOL:
        raise ValueError(
            "initial condition endpoints do not match the Dirichlet data "
            f"(got {row[0]}, {row[-1]}; expected {problem.left_value}, {problem.right_value})"
        )
    return row


def run(
    problem: ProblemSpec,
    config: SchemeConfig,
    table: CoefficientTable | None = None,
) -> SolutionHistory:
    """Run the full scheme: sample the IC, then take config.steps steps.

    When config.startup_explicit_steps = s > 0 the first s steps use
    lam = 1 (explicit) and the remainder use config.lam.  A table passed
    in must already hold weights up to steps + 1; it is shared read-only.
    Raises :class:`OverflowDetected` (carrying the partial history) when
    the solution blows up.
    """
    alpha = 1.0 - problem.gamma
    if table is None:
        table = build_table(config.family, alpha, config.steps + 1)
    else:
        if table.family is not config.family or table.alpha != alpha:
            raise ValueError("provided table does not match (family, 1 - gamma)")
        if table.capacity < config.steps + 1:
            raise ValueError(
                f"provided table capacity {table.capacity} < steps + 1; "
                "pre-extend it or pass table=None"
            )
    row0 = _sample_ic(problem, config)
    history = SolutionHistory(row0, config.dx, config.dt, capacity=config.steps + 1)
    for m in range(config.steps):
        lam = 1.0 if m < config.startup_explicit_steps else config.lam
        step(history, problem, config, table, lam=lam)
    return history
