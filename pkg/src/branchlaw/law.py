"""Exact law of the martingale limit W: MGF, CGF, Laplace transform, tails.

The moment-generating function on (0, r*) is phi(r) = F^{-1}(log r* - log r);
its logarithm psi satisfies the first-order relation

    r^2 psi'(r)^2 = 2 (e^psi - psi - 1),

whose separated form is H(psi(r)) = log r* - log r.  On the negative axis the
same equation governs the Laplace transform phi_L(r) = exp(psi(-r)); here it
is integrated numerically (in tau = log(-s) the equation is autonomous,
dpsi/dtau = -sqrt(2(e^psi - psi - 1))), started from the cumulant series near
zero where the original form is 0/0.  The exact first integral of that branch
is G(phi_L(r)) = sqrt(2) log r, which the verification suite checks against
independent quadrature.

This module is specific to alpha = 1, where the law is explicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, OdeFailure
from .moments import MomentTable, cgf_series
from .numerics import LawTables, _em1, invert_F

__all__ = [
    "MgfValue",
    "mgf",
    "cgf",
    "ode_residual",
    "laplace",
    "laplace_grid",
    "explosion_asymptote_check",
    "right_tail_rate",
    "left_tail_asymptote",
]

# refuse arguments this close to the explosion point: F^-1 would underflow
_GUARD_BAND = 1e-12

# the ODE start: below this the cumulant series is exact to ~1e-33
_SERIES_EDGE = 1e-3


@dataclass(frozen=True)
class MgfValue:
    """One evaluation of the transform, tagged with how it was obtained."""

    r: float
    value: float
    method: Literal["f_inversion", "series", "ode"]


def mgf(r: float, tables: LawTables) -> float:
    """phi(r) = E e^{rW} for 0 < r < r*; strictly increasing, explodes at r*."""
    if not r > 0.0:
        raise DomainError(f"mgf requires r > 0, got {r}")
    if r >= tables.r_star * (1.0 - _GUARD_BAND):
        raise DomainError(
            f"mgf explodes at r* = {tables.r_star}; got r = {r} inside the guard band"
        )
    return invert_F(tables.log_r_star - math.log(r), tables)


def cgf(r: float, tables: LawTables) -> float:
    """psi(r) = log phi(r); satisfies H(psi(r)) = log r* - log r."""
    return math.log(mgf(r, tables))


def ode_residual(r: float, h: float, tables: LawTables) -> float:
    """|r^2 psi_fd'(r)^2 - 2(e^psi - psi - 1)| with a central difference psi_fd'.

    A small residual certifies the F-inversion pipeline against the defining
    differential relation through an independent (finite-difference) route.
    """
    if not h > 0.0:
        raise DomainError(f"step h must be positive, got {h}")
    if not (r - h > 0.0 and r + h < tables.r_star * (1.0 - _GUARD_BAND)):
        raise DomainError(f"central-difference stencil [{r - h}, {r + h}] leaves (0, r*)")
    psi = cgf(r, tables)
    dpsi = (cgf(r + h, tables) - cgf(r - h, tables)) / (2.0 * h)
    rhs = 2.0 * float(_em1(psi))
    return abs(r * r * dpsi * dpsi - rhs)


def _laplace_ode(tau_end: float, psi0: float, tau0: float, t_eval=None):
    sol = solve_ivp(
        lambda _tau, y: -np.sqrt(2.0 * _em1(y)),
        (tau0, tau_end),
        [psi0],
        method="DOP853",
        rtol=1e-12,
        atol=1e-14,
        t_eval=t_eval,
    )
    if not sol.success:
        raise OdeFailure(f"Laplace-branch integration failed: {sol.message}")
    return sol


def laplace(r: float, moment_table: MomentTable, tables: LawTables) -> float:
    """phi_L(r) = E e^{-rW} in (0, 1], for r >= 0.

    For r below the series edge the cumulant series is used directly; beyond
    it the autonomous log-coordinate ODE is integrated with a high-order
    embedded pair.  The positive branch psi' > 0 (psi increasing toward
    psi(0) = 0, psi < 0) is selected, as befits a cumulant generating
    function of a nonnegative variable.
    """
    if moment_table.alpha != 1.0:
        raise DomainError("the explicit law requires the alpha = 1 moment table")
    if moment_table.K < 10:
        raise DomainError("moment table too short for the ODE start (need K >= 10)")
    if r < 0.0:
        raise DomainError(f"laplace requires r >= 0, got {r}")
    if r == 0.0:
        return 1.0
    if r <= _SERIES_EDGE:
        return math.exp(cgf_series(-r, moment_table).value)
    psi0 = cgf_series(-_SERIES_EDGE, moment_table).value
    sol = _laplace_ode(math.log(r), psi0, math.log(_SERIES_EDGE))
    psi = float(sol.y[0, -1])
    if not (math.isfinite(psi) and psi < 0.0):
        raise OdeFailure(f"Laplace branch left its domain: psi({-r}) = {psi}")
    return math.exp(psi)


def laplace_grid(rs, moment_table: MomentTable, tables: LawTables) -> np.ndarray:
    """phi_L on an increasing grid of nonnegative r, one ODE sweep."""
    rs = np.asarray(rs, dtype=float)
    if rs.ndim != 1 or rs.size == 0 or np.any(np.diff(rs) <= 0):
        raise DomainError("laplace_grid needs a strictly increasing 1-d grid")
    if np.any(rs < 0):
        raise DomainError("laplace_grid requires r >= 0")
    out = np.empty_like(rs)
    small = rs <= _SERIES_EDGE
    for i in np.nonzero(small)[0]:
        out[i] = laplace(rs[i], moment_table, tables)
    big = np.nonzero(~small)[0]
    if big.size:
        psi0 = cgf_series(-_SERIES_EDGE, moment_table).value
        taus = np.log(rs[big])
        sol = _laplace_ode(float(taus[-1]), psi0, math.log(_SERIES_EDGE), t_eval=taus)
        out[big] = np.exp(sol.y[0])
    return out


def explosion_asymptote_check(eps: float, tables: LawTables) -> float:
    """phi(r* - eps) eps^2 / (2 r*^2); tends to 1 as eps -> 0+."""
    if not (0.0 < eps < tables.r_star / 2.0):
        raise DomainError(f"eps must lie in (0, r*/2), got {eps}")
    r = tables.r_star - eps
    return mgf(r, tables) * eps * eps / (2.0 * tables.r_star * tables.r_star)


def right_tail_rate(tables: LawTables) -> float:
    """Exponential decay rate of -log P(W > x), which equals r*."""
    return tables.r_star


def left_tail_asymptote(x: float) -> float:
    """Reference curve (1/2) (log x)^2 for -log P(W < x), 0 < x < 1."""
    if not (0.0 < x < 1.0):
        raise DomainError(f"left tail asymptote needs x in (0, 1), got {x}")
    lx = math.log(x)
    return 0.5 * lx * lx
