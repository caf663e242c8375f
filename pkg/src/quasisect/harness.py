"""Operator-norm convergence experiments for Euler and Chernoff approximants.

All errors are measured in the operator 2-norm.  Rates are fitted by
ordinary least squares of ``log(error)`` on ``log(n)`` after dropping
points at the ``1e-12`` double-precision noise floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import DegenerateFit
from .generators import euler_resolvent, semigroup_value
from .matcore import as_matrix, matrix_exp, op_norm

__all__ = [
    "BoundCheck",
    "ConvergenceReport",
    "PowerBoundReport",
    "RateFit",
    "bound_ok",
    "power_of_two_grid",
    "euler_power",
    "chernoff_exp",
    "chernoff_vector_bound",
    "cn_one_minus_c",
    "euler_error_curve",
    "chernoff_error_curve",
    "chernoff_family_check",
    "fit_rate",
    "matrix_power",
]

NOISE_FLOOR = 1e-12
MIN_FIT_POINTS = 4


def bound_ok(lhs: float, rhs: float) -> bool:
    return bool(lhs <= rhs * (1 + 1e-8) + 1e-12)


class BoundCheck(NamedTuple):
    n: int
    lhs: float
    rhs: float
    ok: bool


class RateFit(NamedTuple):
    slope: float
    logc: float
    residual: float


@dataclass(frozen=True)
class ConvergenceReport:
    """Per-``n`` operator-norm errors and their fitted log-log rate.

    ``constant`` holds the empirical envelope constant where one applies
    (``M_emp`` for the Chernoff curve).
    """

    t: float
    n_values: tuple[int, ...]
    errors: tuple[float, ...]
    fitted_slope: float
    fitted_logc: float
    residual: float
    constant: float | None = None
    extras: dict = field(default_factory=dict, compare=False)

    @property
    def converged(self) -> bool:
        """Last error is below both the first error and ``1e-2``."""
        return self.errors[-1] < self.errors[0] and self.errors[-1] < 1e-2

    def as_dict(self) -> dict:
        """JSON-ready record; NaN fit fields (degenerate fit) become ``None``."""

        def finite(x):
            return None if math.isnan(x) else x

        out = {
            "t": self.t,
            "n_values": list(self.n_values),
            "errors": list(self.errors),
            "fitted_slope": finite(self.fitted_slope),
            "fitted_logc": finite(self.fitted_logc),
            "residual": finite(self.residual),
        }
        out.update(self.extras)
        return out


@dataclass(frozen=True)
class PowerBoundReport:
    """``||C^n (I - C)||`` for ``n = 1..n_max`` with ``rhs = K_emp / (n + 1)``.

    ``bounded`` is the no-growth test: the largest ``(n+1) lhs_n`` over the
    last quartile of ``n`` does not exceed that over the first quartile.
    """

    checks: tuple[BoundCheck, ...]
    k_emp: float
    bounded: bool

    @property
    def scaled(self) -> np.ndarray:
        return np.array([(c.n + 1) * c.lhs for c in self.checks])


def power_of_two_grid(n_min: int = 8, n_max: int = 1024) -> list[int]:
    if n_min < 1 or n_max < n_min:
        raise ValueError(f"bad n range [{n_min}, {n_max}]")
    out, n = [], 1
    while n <= n_max:
        if n >= n_min:
            out.append(n)
        n *= 2
    return out


def matrix_power(M, n: int) -> np.ndarray:
    """``M**n`` by binary powering."""
    if n < 0:
        raise ValueError("negative powers are not supported")
    return np.linalg.matrix_power(as_matrix(M), n)


def euler_power(A, t: float, n: int) -> np.ndarray:
    """``(I + tA/n)^{-n}`` from one solved factor raised by binary powering."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return matrix_power(euler_resolvent(A, t / n), n)


def chernoff_exp(C, n: int) -> np.ndarray:
    """``exp(n (C - I))``."""
    M = as_matrix(C)
    return matrix_exp(n * (M - np.eye(M.shape[0])))


def chernoff_vector_bound(C, u, n: int) -> BoundCheck:
    """Vector bound ``||(C^n - exp(n(C - I))) u|| <= sqrt(n) ||(C - I) u||``."""
    M = as_matrix(C)
    u = np.asarray(u, dtype=complex)
    lhs = float(np.linalg.norm((matrix_power(M, n) - chernoff_exp(M, n)) @ u))
    rhs = math.sqrt(n) * float(np.linalg.norm(M @ u - u))
    return BoundCheck(n, lhs, rhs, bound_ok(lhs, rhs))


def cn_one_minus_c(C, n_max: int) -> PowerBoundReport:
    M = as_matrix(C)
    if n_max < 4:
        raise ValueError("n_max must be at least 4 for the quartile trend test")
    gap = np.eye(M.shape[0]) - M
    P = np.eye(M.shape[0], dtype=complex)
    lhs = []
    for _ in range(n_max):
        P = P @ M
        lhs.append(op_norm(P @ gap))
    ns = np.arange(1, n_max + 1)
    scaled = (ns + 1) * np.array(lhs)
    k_emp = float(np.max(scaled))
    q = n_max // 4
    bounded = bool(np.max(scaled[-q:]) <= np.max(scaled[:q]) + 1e-9)
    checks = tuple(
        BoundCheck(int(n), float(l), k_emp / (n + 1), bound_ok(l, k_emp / (n + 1)))
        for n, l in zip(ns, lhs)
    )
    return PowerBoundReport(checks, k_emp, bounded)


def fit_rate(n_values: Sequence[int], errors: Sequence[float]) -> RateFit:
    """Least-squares fit ``log(error) = slope * log(n) + logc``.

    Points with ``error <= 1e-12`` are dropped.  ``residual`` is the RMS of
    the fit residuals in log space.
    """
    n = np.asarray(n_values, dtype=float)
    e = np.asarray(errors, dtype=float)
    if n.shape != e.shape:
        raise ValueError("n_values and errors differ in length")
    keep = e > NOISE_FLOOR
    if np.count_nonzero(keep) < MIN_FIT_POINTS:
        raise DegenerateFit(
            f"only {np.count_nonzero(keep)} points above the {NOISE_FLOOR:g} noise floor"
        )
    x, y = np.log(n[keep]), np.log(e[keep])
    X = np.column_stack([x, np.ones_like(x)])
    (slope, logc), *_ = np.linalg.lstsq(X, y, rcond=None)
    res = y - (slope * x + logc)
    return RateFit(float(slope), float(logc), float(np.sqrt(np.mean(res**2))))


def _report(t, n_values, errors, strict, constant=None, extras=None) -> ConvergenceReport:
    try:
        fit = fit_rate(n_values, errors)
    except DegenerateFit:
        if strict:
            raise
        fit = RateFit(math.nan, math.nan, math.nan)
    return ConvergenceReport(
        float(t), tuple(int(n) for n in n_values), tuple(float(e) for e in errors),
        fit.slope, fit.logc, fit.residual, constant, extras or {},
    )


def _check_grid(n_values):
    ns = [int(n) for n in n_values]
    if not ns or any(n < 1 for n in ns) or any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("n_values must be ascending positive integers")
    return ns


def euler_error_curve(A, t: float, n_values: Sequence[int], *, strict: bool = True) -> ConvergenceReport:
    """Errors ``||(I + tA/n)^{-n} - exp(-tA)||`` and their fitted rate.

    With ``strict=False`` a degenerate fit yields NaN fit fields instead of
    raising :class:`DegenerateFit`.
    """
    ns = _check_grid(n_values)
    target = semigroup_value(A, t)
    errors = [op_norm(euler_power(A, t, n) - target) for n in ns]
    return _report(t, ns, errors, strict)


def chernoff_error_curve(C_family, t: float, n_values: Sequence[int], *, strict: bool = True) -> ConvergenceReport:
    """Errors ``||C^n - exp(n(C - I))||`` for the fixed contraction ``C``.

    ``C_family`` is either a matrix or a callable returning one for ``t``.
    The report carries ``M_emp = max_n error_n n^{1/3}`` as ``constant``
    and, in ``extras``, whether the ``M_emp n^{-1/3}`` envelope holds and
    whether ``error_n n^{1/3}`` is stable (max over the last half of the
    grid at most the max over the first half).
    """
    ns = _check_grid(n_values)
    C = as_matrix(C_family(t) if callable(C_family) else C_family)
    errors = [op_norm(matrix_power(C, n) - chernoff_exp(C, n)) for n in ns]
    scaled = np.array(errors) * np.cbrt(np.array(ns, dtype=float))
    m_emp = float(np.max(scaled))
    half = len(ns) // 2
    envelope = all(bound_ok(e, m_emp * n ** (-1.0 / 3.0)) for n, e in zip(ns, errors))
    stable = bool(np.max(scaled[half:]) <= np.max(scaled[:half]) + 1e-12) if half else True
    extras = {"M_emp": m_emp, "envelope_ok": envelope, "stable": stable}
    return _report(t, ns, errors, strict, m_emp, extras)


def chernoff_family_check(
    phi: Callable[[float], np.ndarray], A, t: float, n_values: Sequence[int], *, strict: bool = True
) -> ConvergenceReport:
    """Errors ``||Phi(t/n)^n - exp(-tA)||`` for a contraction family ``Phi``.

    Only the whole-space case is handled (the projection onto the limit
    subspace is the identity).  Inspect :attr:`ConvergenceReport.converged`
    for the convergence verdict.
    """
    ns = _check_grid(n_values)
    target = semigroup_value(A, t)
    errors = [op_norm(matrix_power(phi(t / n), n) - target) for n in ns]
    return _report(t, ns, errors, strict)
