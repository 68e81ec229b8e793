"""Closed forms for threshold rules and an exact finite-count success probability.

The exact probability conditions on which class maximum is the first
record after the threshold. With the maximum of class ``c`` at time
``s >= t`` (uniform density on ``[t, 1]``), the rule succeeds iff no
class shows a record in ``[t, s)``. For class ``c`` the remaining
``n_c - 1`` options give

    q_c(s) = (1-s)^(n_c-1) + (1 - (1-s)^(n_c-1)) * t/s

and every other class ``j`` independently gives

    r_j(s) = (1-s)^n_j + (1 - (1-s)^n_j) * t/s,

so ``p(t) = sum_c  integral_t^1 q_c(s) prod_{j != c} r_j(s) ds``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from bestchoice.model import ClassCounts


class DomainError(ValueError):
    """An argument lies outside the domain of the formula."""


def _check_k(k: int) -> None:
    if int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k}")


def _check_unit(name: str, x: float) -> None:
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {x}")


def optimal_threshold(k: int) -> float:
    """``k^(-1/(k-1))``; ``1/e`` at k = 1 (the limit)."""
    _check_k(k)
    if k == 1:
        return math.exp(-1.0)
    return k ** (-1.0 / (k - 1))


def lower_bound_h(k: float, t: float) -> float:
    """``(k/(k-1)) (t - t^k)``, continued by ``-t ln t`` at k = 1.

    ``k`` may be any real ``>= 1``; integer k is the usual case.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    _check_unit("t", t)
    if t == 0.0:
        return 0.0
    if k == 1:
        return -t * math.log(t)
    return k / (k - 1) * (t - t**k)


@dataclass(frozen=True)
class BoundCurve:
    k: int
    samples: tuple[tuple[float, float], ...]


def bound_curve(k: int, ts: Sequence[float]) -> BoundCurve:
    return BoundCurve(k, tuple((float(t), lower_bound_h(k, t)) for t in ts))


def density_f(i: int, t: float, s):
    """Density of the earliest of ``i`` maxima, all known to arrive in ``[t, 1]``."""
    if i < 1:
        raise DomainError("i must be >= 1")
    if not 0.0 <= t < 1.0:
        raise DomainError(f"t must lie in [0, 1), got {t}")
    s_arr = np.asarray(s, dtype=float)
    inside = (s_arr >= t) & (s_arr <= 1.0)
    val = np.where(inside, i * np.clip(1.0 - s_arr, 0.0, None) ** (i - 1) / (1.0 - t) ** i, 0.0)
    return float(val) if np.ndim(val) == 0 else val


def no_record_prob_exact(n: int, t: float, s: float) -> float:
    """P(no record in [t, s)) for ``n`` iid uniform, uniquely ranked arrivals."""
    if n < 0:
        raise DomainError("n must be non-negative")
    if not (0.0 <= t <= s <= 1.0) or s == 0.0:
        raise DomainError(f"need 0 <= t <= s <= 1 and s > 0, got t={t}, s={s}")
    none_before_s = (1.0 - s) ** n
    return none_before_s + (1.0 - none_before_s) * (t / s)


def no_record_bound(i: int, t: float, s: float) -> float:
    """``(t/s)^i``: lower bound on no record from ``i`` independent classes in [t, s)."""
    if s <= 0.0:
        raise DomainError("s must be positive")
    if not 0.0 <= t <= s <= 1.0:
        raise DomainError(f"need 0 <= t <= s <= 1, got t={t}, s={s}")
    return (t / s) ** i


def binomial_mean_sum(k: int, s: float) -> float:
    """``sum_i C(k,i) i (1-s)^i s^(k-i)``, which equals ``k (1-s)``."""
    return math.fsum(math.comb(k, i) * i * (1.0 - s) ** i * s ** (k - i) for i in range(1, k + 1))


# --------------------------------------------------------------------------
# composite Gauss-Legendre quadrature


@lru_cache(maxsize=None)
def _gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _mesh(t: float, panels: int, feature: float) -> np.ndarray:
    """Uniform panels on [t, 1] merged with geometric grading towards t.

    ``feature`` is the smallest length scale of the integrand near ``t``.
    """
    width = 1.0 - t
    pts = [t + width * np.arange(panels + 1) / panels]
    depth = 0
    while width * 0.5**depth > feature / 16.0 and depth < 60:
        depth += 1
    if depth:
        pts.append(t + width * 0.5 ** np.arange(1, depth + 1))
    mesh = np.unique(np.concatenate(pts))
    mesh[0], mesh[-1] = t, 1.0
    return mesh


def composite_gauss_legendre(f, mesh: np.ndarray, order: int = 8) -> float:
    x, w = _gauss_legendre(order)
    a, b = mesh[:-1, None], mesh[1:, None]
    half = 0.5 * (b - a)
    nodes = 0.5 * (a + b) + half * x[None, :]
    vals = f(nodes.ravel()).reshape(nodes.shape)
    # panel sums first, then panels in mesh order: fixed summation order
    return math.fsum((half[:, 0] * (vals @ w)).tolist())


@dataclass(frozen=True)
class ExactProbability:
    value: float
    abs_error_estimate: float
    quad_points: int


def _success_integrand(counts: Sequence[int], t: float):
    ns = np.asarray(counts, dtype=float)

    def f(s: np.ndarray) -> np.ndarray:
        g = t / s
        one_minus = 1.0 - s
        total = np.zeros_like(s)
        # r_j for every class and q_c share the same form with n -> n - 1
        r = [one_minus**n + (1.0 - one_minus**n) * g for n in ns]
        for c, n_c in enumerate(ns):
            b = one_minus ** (n_c - 1)
            term = b + (1.0 - b) * g
            for j, r_j in enumerate(r):
                if j != c:
                    term = term * r_j
            total += term
        return total

    return f


def exact_success_prob(
    counts: ClassCounts | Sequence[int], t: float, panels: int = 256, order: int = 8
) -> ExactProbability:
    """Exact success probability of the threshold-``t`` rule for fixed class counts.

    The value is computed on ``2 * panels`` panels; the error estimate is
    its distance to the ``panels`` result.
    """
    if not isinstance(counts, ClassCounts):
        try:
            counts = ClassCounts(tuple(counts))
        except ValueError as exc:
            raise DomainError(str(exc)) from exc
    _check_unit("t", t)
    if panels < 1:
        raise DomainError("panels must be positive")
    if t == 0.0:
        # first arrival is always taken; it is a class maximum w.p. k / N
        return ExactProbability(counts.k / counts.total, 0.0, 0)
    if t == 1.0:
        return ExactProbability(0.0, 0.0, 0)
    f = _success_integrand(counts.counts, t)
    feature = min(t, 1.0 / max(counts.counts))
    coarse_mesh = _mesh(t, panels, feature)
    fine_mesh = np.unique(np.concatenate([coarse_mesh, 0.5 * (coarse_mesh[:-1] + coarse_mesh[1:])]))
    coarse = composite_gauss_legendre(f, coarse_mesh, order)
    fine = composite_gauss_legendre(f, fine_mesh, order)
    value = min(max(fine, 0.0), 1.0)
    return ExactProbability(value, abs(fine - coarse), (len(fine_mesh) - 1) * order)
