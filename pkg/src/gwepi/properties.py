"""Finite-difference property grids for f_q and the scalar weighting bound."""

from __future__ import annotations

import numpy as np

from gwepi.inequalities import InequalityReport, dyadic_power_bound
from gwepi.measures import Q_HIGH, Q_LOW, f_q, polygon_q_grid

FD_SLACK = 1e-10


def interior_grid(points: int = 200) -> np.ndarray:
    """``points`` equally spaced values strictly inside (0, 1)."""
    return np.arange(1, points + 1) / (points + 1)


def concave_range_grid(points: int = 50) -> np.ndarray:
    """q values on [Q_LOW, 2] U [3, Q_HIGH], where f_q is increasing and concave."""
    return polygon_q_grid(points)


def _second_differences(y: np.ndarray) -> np.ndarray:
    return y[2:] - 2.0 * y[1:-1] + y[:-2]


def fq_shape_reports(q_values=None, x_points: int = 200, slack: float = FD_SLACK) -> list[InequalityReport]:
    """Monotonicity and concavity of ``x -> f_q(x)``, one pair of reports per q.

    Each report has ``lhs = 0`` and ``rhs`` the worst difference, so its gap
    is the smallest forward difference (resp. the negated largest second
    difference).
    """
    q_values = concave_range_grid() if q_values is None else q_values
    x = interior_grid(x_points)
    out = []
    for q in q_values:
        y = f_q(x, float(q))
        out.append(InequalityReport("fq_increasing", 0.0, float(np.diff(y).min()), slack, q=float(q)))
        out.append(InequalityReport("fq_concave", 0.0, float(-_second_differences(y).max()), slack, q=float(q)))
    return out


def fq_square_reports(q_values=None, increasing_q=None, x_points: int = 200,
                   slack: float = FD_SLACK) -> list[InequalityReport]:
    """Convexity of ``x -> f_q(x^2)`` on [Q_LOW, Q_HIGH] and monotonicity on (0, Q_HIGH]."""
    q_values = np.linspace(Q_LOW, Q_HIGH, 50) if q_values is None else q_values
    increasing_q = np.linspace(Q_HIGH / 50, Q_HIGH, 50) if increasing_q is None else increasing_q
    x = interior_grid(x_points)
    out = []
    for q in q_values:
        y = f_q(x * x, float(q))
        out.append(InequalityReport("fq_sq_convex", 0.0, float(_second_differences(y).min()), slack, q=float(q)))
    for q in increasing_q:
        y = f_q(x * x, float(q))
        out.append(InequalityReport("fq_sq_increasing", 0.0, float(np.diff(y).min()), slack, q=float(q)))
    return out


def dyadic_power_grid(tol: float = 1e-12) -> list[InequalityReport]:
    """The scalar bound on x in {0.01, ..., 1} and beta in {0, 0.05, ..., 1}."""
    xs = np.round(np.arange(1, 101) * 0.01, 10)
    betas = np.round(np.arange(21) * 0.05, 10)
    return [dyadic_power_bound(float(x), float(b), tol) for b in betas for x in xs]


def tsallis_direct(spectrum, q: float) -> float:
    """``(1 - sum p^q) / (q - 1)`` with no special branch near q = 1."""
    p = np.asarray(spectrum, dtype=float)
    p = p[p > 0]
    return float((1.0 - np.sum(p**q)) / (q - 1.0))


def shannon(spectrum) -> float:
    p = np.asarray(spectrum, dtype=float)
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def q_one_limit_reports(spectra, eps: float = 1e-6, tol: float = 1e-5) -> list[InequalityReport]:
    """Direct Tsallis formula at ``1 +- eps`` against the entropy in nats (equality checks)."""
    out = []
    for i, spec in enumerate(spectra):
        target = shannon(spec)
        for q in (1.0 - eps, 1.0 + eps):
            out.append(InequalityReport("q_one_limit", tsallis_direct(spec, q), target, tol,
                                        q=q, focus=str(i), equality=True))
    return out


def fq_identity_errors(points: int = 1001) -> dict[str, float]:
    """Largest deviation of f_2, f_3, f_4 from their polynomial forms on [0, 1]."""
    x = np.linspace(0.0, 1.0, points)
    return {
        "f2": float(np.abs(f_q(x, 2.0) - x / 2).max()),
        "f3": float(np.abs(f_q(x, 3.0) - 3 * x / 8).max()),
        "f4": float(np.abs(f_q(x, 4.0) - (x / 3 - x * x / 24)).max()),
    }
