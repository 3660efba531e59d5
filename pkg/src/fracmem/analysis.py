"""Analytic error bounds and operation-count models for the memory policies.

Includes the fixed-memory truncation bound, the per-subset bound of the
adaptive method with its A(m, alpha) / B(m, alpha) coefficient sums, the
power-law approximation bracket for B, closed-form operation counts, and a
log-log slope fit used by the order-of-accuracy studies.
"""

from __future__ import annotations

import math

import numpy as np

from .core import order_value
from .memory import PolicyKind

__all__ = [
    "fixed_memory_bound",
    "a_func",
    "b_func",
    "adaptive_bound",
    "adaptive_bound_terms",
    "b_approx_bracket",
    "op_count",
    "trapezoid_gap",
    "interval_error_term",
    "fit_loglog_slope",
]


def fixed_memory_bound(M: float, t: float, T: float, alpha) -> float:
    """Truncation-error bound of the fixed memory method:
    M / Gamma(2-a) * (t^(1-a) - T^(1-a)), with M = max |f'| on [0, t]."""
    a = order_value(alpha)
    if T > t:
        raise ValueError(f"memory length T={T} exceeds elapsed time t={t}")
    if T <= 0.0:
        raise ValueError(f"memory length must be positive, got {T}")
    return M / math.gamma(2.0 - a) * (t ** (1.0 - a) - T ** (1.0 - a))


def _ab_sum(base: np.ndarray, alpha: float) -> float:
    # sum of x^(1-a){2(x-1)+a} - (x-1)^(1-a){2x-a} over the given bases,
    # with the 0^(1-a) -> 0 convention so the alpha=1 identities hold
    x = base.astype(float)
    y = x - 1.0
    xa = x ** (1.0 - alpha)
    ya = np.where(y == 0.0, 0.0, y ** (1.0 - alpha))
    return float(np.sum(xa * (2.0 * y + alpha) - ya * (2.0 * x - alpha)))


def a_func(m: int, alpha: float) -> float:
    """Coefficient sum of the U_0 contribution to the adaptive bound.
    Defined for alpha in [0, 1]; A(m, 0) = 0 and A(m, 1) = 1."""
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    k = np.arange(m)
    return _ab_sum(m - k, alpha)


def b_func(m: int, alpha: float) -> float:
    """Coefficient sum of the per-subset U_l contribution to the adaptive
    bound.  B(m, 0) = 0 and B(m, 1) = 0."""
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    k = np.arange(m)
    return _ab_sum(2 * m - k, alpha)


def adaptive_bound_terms(M: float, dt: float, m: int, L: int, alpha) -> np.ndarray:
    """Per-subset contributions [U_0, U_1, .., U_L] to the adaptive bound."""
    a = order_value(alpha)
    if L < 0:
        raise ValueError(f"need L >= 0, got {L}")
    pref = M / (2.0 * math.gamma(3.0 - a))
    terms = [pref * dt ** (2.0 - a) * a_func(m, a)]
    if L > 0:
        b = b_func(m, a)
        ls = np.arange(1, L + 1)
        terms.extend(pref * (2.0 ** (ls - 1) * dt) ** (2.0 - a) * b)
    return np.asarray(terms)


def adaptive_bound(M: float, dt: float, m: int, L: int, alpha) -> float:
    """Total error bound of the adaptive memory method after the power-law
    layout has grown L coarsened subsets (T = m * dt)."""
    return float(np.sum(adaptive_bound_terms(M, dt, m, L, alpha)))


def b_approx_bracket(m: int, alpha: float) -> tuple[float, float]:
    """Bracket for the power-law approximation B(m, a) ~ c(a) * m^(-a).

    The proportionality constant is only bracketed, not pinned:
    c(a) = a(1-a)(2-a)/6 * s with s in (2^(-a-1), 1).
    """
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    base = alpha * (1.0 - alpha) * (2.0 - alpha) / 6.0 * m ** (-alpha)
    return (base * 2.0 ** (-alpha - 1.0), base)


def op_count(policy: PolicyKind | str, m: int, L: int) -> int:
    """Closed-form convolution-operation counts accumulated from t = 0 to
    2^L * T with T = m * dt."""
    if m < 1 or L < 0:
        raise ValueError(f"need m >= 1 and L >= 0, got m={m}, L={L}")
    kind = PolicyKind(policy) if isinstance(policy, str) else policy
    if kind is PolicyKind.FULL:
        n = 2**L * m
        return n * (n + 1) // 2
    if kind is PolicyKind.FIXED:
        return m * (m + 1) // 2 + m * m * (2**L - 1)
    if kind is PolicyKind.ADAPTIVE_PRESENT:
        total = m * (m + 1) / 2.0
        for l in range(1, L + 1):
            total += 2.0 ** (l - 2) * ((2 * l + 1) * m * m + m)
        return round(total)
    raise ValueError(f"no operation-count model for policy {kind}")


def trapezoid_gap(t_n: float, t_k: float, t_k1: float, alpha) -> float:
    """Exact trapezoid-rule error for the kernel antiderivative
    (t_n - tau)^(1-a) over [t_k, t_k1]; positive for every admissible
    interval since the integrand is concave there."""
    a = order_value(alpha)
    if not t_k < t_k1 <= t_n:
        raise ValueError(f"need t_k < t_k1 <= t_n, got ({t_k}, {t_k1}, {t_n})")
    left = t_n - t_k
    right = t_n - t_k1
    exact = (left ** (2.0 - a) - right ** (2.0 - a)) / (2.0 - a)
    trap = 0.5 * (left ** (1.0 - a) + right ** (1.0 - a)) * (t_k1 - t_k)
    return exact - trap


def interval_error_term(t_n: float, t_k: float, t_k1: float, alpha) -> float:
    """Per-interval summand of the adaptive error bound; equals
    2 * (2 - a) * trapezoid_gap and is non-negative."""
    a = order_value(alpha)
    left = t_n - t_k
    right = t_n - t_k1
    h = t_k1 - t_k
    return left ** (1.0 - a) * (2.0 * right + h * a) - right ** (1.0 - a) * (
        2.0 * left - h * a
    )


def fit_loglog_slope(points) -> float:
    """Least-squares slope of log(err) versus log(h)."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 3 or pts.shape[1] != 2:
        raise ValueError("need at least 3 (h, err) pairs")
    if np.any(pts <= 0.0):
        raise ValueError("slope fit requires positive abscissae and errors")
    slope, _ = np.polyfit(np.log(pts[:, 0]), np.log(pts[:, 1]), 1)
    return float(slope)
