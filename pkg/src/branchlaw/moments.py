"""Raw moments, cumulant-series coefficients and series oracles.

The k-th moment mu_k of the martingale limit obeys

    mu_1 = 1,
    mu_k = (1 - k^-(1+alpha))^-1 * sum_{m=1}^{k-1} C(k-1, m-1) mu_m mu_{k-m} / m^(1+alpha),

which is the classical moment-cumulant identity with cumulants
kappa_k = mu_k / k^(1+alpha) (the k-th derivative at 0 of the cumulant
generating function psi(r) = sum_k mu_k r^k / (k! k^(1+alpha))).  The table
stores c_k = mu_k/(k! k^(1+alpha)), the r^k series coefficient of psi, so
psi(r) = sum c_k r^k and kappa_k = k! c_k.

Everything is computed in the log domain (log-sum-exp over log binomials), so
tables up to K = 400 build without overflow even though mu_k itself leaves
double range near k = 170.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import DomainError, OrderTooLarge, RadiusExceeded

__all__ = [
    "MomentTable",
    "SeriesEval",
    "build_moment_table",
    "mgf_series",
    "cgf_series",
    "w1_log_mgf",
    "moment_table_to_csv",
]

_MAX_ORDER = 400


class SeriesEval(NamedTuple):
    """Truncated series value plus a bound on the first omitted term."""

    value: float
    first_omitted: float


@dataclass(frozen=True)
class MomentTable:
    """Moments mu_1..mu_K and series coefficients c_k for one alpha.

    mu and c are exposed as float arrays (index 0 <-> k=1); entries overflow
    to inf past k =~ 170 while log_mu stays exact, and the series evaluators
    only ever use the log representation.
    """

    alpha: float
    K: int
    log_mu: np.ndarray

    @property
    def mu(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.exp(self.log_mu)

    @property
    def log_c(self) -> np.ndarray:
        k = np.arange(1, self.K + 1, dtype=float)
        return self.log_mu - gammaln(k + 1.0) - (1.0 + self.alpha) * np.log(k)

    @property
    def c(self) -> np.ndarray:
        return np.exp(self.log_c)


def _next_log_mu(log_mu: np.ndarray, alpha: float) -> float:
    """log mu_{k+1} from log mu_1..log mu_k, in the log domain."""
    k = log_mu.size + 1
    m = np.arange(1, k, dtype=float)
    log_binom = gammaln(k) - gammaln(m) - gammaln(k - m + 1.0)
    terms = log_binom + log_mu[: k - 1] + log_mu[::-1][: k - 1] - (1.0 + alpha) * np.log(m)
    return float(logsumexp(terms) - math.log1p(-float(k) ** -(1.0 + alpha)))


def build_moment_table(alpha: float, K: int) -> MomentTable:
    """Build mu_1..mu_K by the recursion, stably, for any alpha > 0.

    Raises OrderTooLarge if K exceeds what the log-domain path supports.
    """
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if K < 1:
        raise DomainError(f"K must be >= 1, got {K}")
    if K > _MAX_ORDER:
        raise OrderTooLarge(f"K={K} beyond supported order {_MAX_ORDER}")
    log_mu = np.empty(K)
    log_mu[0] = 0.0
    for k in range(2, K + 1):
        log_mu[k - 1] = _next_log_mu(log_mu[: k - 1], alpha)
    if not np.all(np.isfinite(log_mu)):
        raise OrderTooLarge(f"log-domain moment recursion overflowed at K={K}")
    return MomentTable(alpha=float(alpha), K=K, log_mu=log_mu)


def _signed_series(log_terms: np.ndarray, r: float) -> float:
    signs = np.ones(log_terms.size)
    if r < 0:
        signs[::2] = -1.0  # odd k carry the sign of r
    return float(np.sum(signs * np.exp(log_terms)))


def _check_radius(log_terms: np.ndarray) -> None:
    # Estimate |r|/radius from tail term ratios t_{k+1}/t_k ~ x (k+2)/(k+1);
    # x >= 1 means the series cannot converge.
    if log_terms.size < 8:
        return
    k = np.arange(1, log_terms.size + 1, dtype=float)
    ratios = np.exp(np.diff(log_terms[-6:])) * (k[-6:-1] + 1.0) / (k[-6:-1] + 2.0)
    if np.median(ratios) >= 1.0:
        raise RadiusExceeded(
            f"series terms grow geometrically (tail ratio {np.median(ratios):.3f} >= 1)"
        )


def mgf_series(r: float, table: MomentTable) -> SeriesEval:
    """phi(r) = 1 + sum_{k<=K} mu_k r^k / k!, with the first omitted term.

    Valid for |r| inside the explosion radius; a geometric growth of the
    trailing terms raises RadiusExceeded.
    """
    if r == 0.0:
        return SeriesEval(1.0, 0.0)
    k = np.arange(1, table.K + 1, dtype=float)
    log_terms = table.log_mu + k * math.log(abs(r)) - gammaln(k + 1.0)
    _check_radius(log_terms)
    value = 1.0 + _signed_series(log_terms, r)
    log_next = _next_log_mu(table.log_mu, table.alpha) \
        + (table.K + 1) * math.log(abs(r)) - gammaln(table.K + 2.0)
    return SeriesEval(value, math.exp(log_next))


def cgf_series(r: float, table: MomentTable) -> SeriesEval:
    """psi(r) = sum_{k<=K} c_k r^k with c_k = mu_k/(k! k^(1+alpha))."""
    if r == 0.0:
        return SeriesEval(0.0, 0.0)
    k = np.arange(1, table.K + 1, dtype=float)
    log_terms = table.log_c + k * math.log(abs(r))
    _check_radius(log_terms)
    value = _signed_series(log_terms, r)
    log_next = _next_log_mu(table.log_mu, table.alpha) \
        + (table.K + 1) * math.log(abs(r)) - gammaln(table.K + 2.0) \
        - (1.0 + table.alpha) * math.log(table.K + 1.0)
    return SeriesEval(value, math.exp(log_next))


def w1_log_mgf(alpha: float, r: float, K: int) -> SeriesEval:
    """log E exp(r W1) = sum_{k<=K} r^k/(k! k^(1+alpha)).

    The full series converges for every real r (the k! kills any geometric
    factor), so only the truncation matters; the reported bound is
    |r|^(K+1)/(K+1)!, which dominates the omitted tail for |r| <= K.
    """
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if K < 1:
        raise DomainError(f"K must be >= 1, got {K}")
    if r == 0.0:
        return SeriesEval(0.0, 0.0)
    k = np.arange(1, K + 1, dtype=float)
    log_terms = k * math.log(abs(r)) - gammaln(k + 1.0) - (1.0 + alpha) * np.log(k)
    value = _signed_series(log_terms, r)
    bound = math.exp((K + 1) * math.log(abs(r)) - gammaln(K + 2.0))
    return SeriesEval(value, bound)


def moment_table_to_csv(table: MomentTable, path) -> None:
    """Write columns k, mu_k, c_k (floats; inf where k is past double range)."""
    mu, c = table.mu, table.c
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "mu_k", "c_k"])
        for i in range(table.K):
            writer.writerow([i + 1, repr(float(mu[i])), repr(float(c[i]))])
