"""Central finite-difference oracle for validating analytic derivatives.

The oracle compares the analytic d/dx and d/dbeta kernels against
central differences of the forward kernel over a Cartesian grid of
(alpha, beta, x).  Relative error uses the denominator
``max(1, |analytic|)``: with h = 1e-5 in 64-bit arithmetic the
truncation and round-off of the difference quotient stay below ~1e-8
absolute for O(1)-magnitude functions, so a tolerance of 1e-6 on this
measure cleanly separates a correct kernel from a corrupted one.

Note for swish_t_c: keep |beta| >= 0.1 in the grids here; the alpha /
beta^2 terms of its beta-derivative amplify round-off below that, and
the small-beta regime is covered by the dedicated identity-limit
property instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .kinds import ActivationKind, ActParams

def central_diff(f: Callable[[float], float], x: float, h: float) -> float:
    """(f(x+h) - f(x-h)) / (2h); raises on non-finite evaluations."""
    if h <= 0.0:
        raise ValueError(f"h must be positive, got {h!r}")
    hi = f(x + h)
    lo = f(x - h)
    if not (math.isfinite(hi) and math.isfinite(lo)):
        raise ValueError(f"non-finite function value near x={x!r}: f(x+h)={hi!r}, f(x-h)={lo!r}")
    return (hi - lo) / (2.0 * h)


def _rel_err(analytic: np.ndarray, estimate: np.ndarray) -> np.ndarray:
    return np.abs(analytic - estimate) / np.maximum(np.abs(analytic), 1.0)


@dataclass
class GradCheckReport:
    kind: ActivationKind
    param_grid: list[tuple[float, float]]
    x_grid: np.ndarray
    h: float
    tol_rel: float
    max_rel_err_dx: float = 0.0
    max_rel_err_dbeta: float = 0.0
    worst_point: tuple[float, float, float] = (math.nan, math.nan, math.nan)
    failures: list[tuple[float, float, float]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return max(self.max_rel_err_dx, self.max_rel_err_dbeta) <= self.tol_rel

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "param_grid": [[a, b] for a, b in self.param_grid],
            "x_grid": {
                "min": float(self.x_grid.min()),
                "max": float(self.x_grid.max()),
                "points": int(self.x_grid.size),
            },
            "h": self.h,
            "tol_rel": self.tol_rel,
            "max_rel_err_dx": self.max_rel_err_dx,
            "max_rel_err_dbeta": self.max_rel_err_dbeta,
            "worst_point": {
                "alpha": self.worst_point[0],
                "beta": self.worst_point[1],
                "x": self.worst_point[2],
            },
            "passed": self.passed,
        }


def check_activation(
    kind: ActivationKind,
    alphas: Sequence[float],
    betas: Sequence[float],
    x_grid: np.ndarray,
    h: float = 1e-5,
    tol_rel: float = 1e-6,
) -> GradCheckReport:
    """Compare analytic derivatives against central differences on the grid."""
    if len(alphas) == 0 or len(betas) == 0 or len(x_grid) == 0:
        raise ValueError("gradcheck grids must be non-empty")
    if not (1e-7 <= h <= 1e-3):
        raise ValueError(f"h must lie in [1e-7, 1e-3], got {h!r}")

    x_grid = np.asarray(x_grid, dtype=np.float64)
    report = GradCheckReport(
        kind=kind,
        param_grid=[(float(a), float(b)) for a in alphas for b in betas],
        x_grid=x_grid,
        h=h,
        tol_rel=tol_rel,
    )
    worst = -1.0
    for alpha, beta in report.param_grid:
        params = ActParams(alpha=alpha, beta=beta)
        try:
            analytic_dx = kernels.act_dx_batch(kind, params, x_grid)
            fd_dx = (
                kernels.act_forward_batch(kind, params, x_grid + h)
                - kernels.act_forward_batch(kind, params, x_grid - h)
            ) / (2.0 * h)
            analytic_db = kernels.act_dbeta_batch(kind, params, x_grid)
            fd_db = (
                kernels.act_forward_batch(kind, ActParams(alpha, beta + h), x_grid)
                - kernels.act_forward_batch(kind, ActParams(alpha, beta - h), x_grid)
            ) / (2.0 * h)
        except Exception as exc:
            raise type(exc)(f"{exc} (at grid point alpha={alpha}, beta={beta})") from exc

        err_dx = _rel_err(analytic_dx, fd_dx)
        err_db = _rel_err(analytic_db, fd_db)
        report.max_rel_err_dx = max(report.max_rel_err_dx, float(err_dx.max()))
        report.max_rel_err_dbeta = max(report.max_rel_err_dbeta, float(err_db.max()))

        combined = np.maximum(err_dx, err_db)
        i = int(np.argmax(combined))
        if float(combined[i]) > worst:
            worst = float(combined[i])
            report.worst_point = (alpha, beta, float(x_grid[i]))
        for j in np.nonzero(combined > tol_rel)[0]:
            report.failures.append((alpha, beta, float(x_grid[j])))
    return report


def validate_oracle(h: float = 1e-5, tol_rel: float = 1e-9) -> float:
    """Self-check of central_diff on functions with closed-form derivatives.

    Returns the worst relative error over x^2, sigmoid and tanh; raises
    if it exceeds tol_rel.  Run before trusting the oracle against the
    activation kernels.
    """
    cases = [
        (lambda x: x * x, lambda x: 2.0 * x),
        (kernels.sigmoid, lambda x: kernels.sigmoid(x) * (1.0 - kernels.sigmoid(x))),
        (math.tanh, lambda x: 1.0 - math.tanh(x) ** 2),
    ]
    worst = 0.0
    for f, dfdx in cases:
        for x in np.linspace(-4.0, 4.0, 81):
            got = central_diff(f, float(x), h)
            want = dfdx(float(x))
            worst = max(worst, abs(got - want) / max(1.0, abs(want)))
    if worst > tol_rel:
        raise AssertionError(f"finite-difference oracle self-check failed: {worst:g} > {tol_rel:g}")
    return worst
