"""Self-contained real-analysis toolkit behind the explicit law.

Provides adaptive quadrature for improper integrals, bracketed root finding,
and the three special functions the closed-form law is written in:

    H(y) = int_y^infty du / sqrt(2 (e^u - u - 1)),              y > 0,
    F(y) = H(log y)  (strictly decreasing bijection (1,inf) -> (0,inf)),
    G(y) = int_y^v1 du / (u sqrt(u - log u - 1)),               0 < y < v1 < 1,

together with the explosion constant

    r* = exp( int_0^infty [ (2(e^u - u - 1))^{-1/2} - u^{-1} 1{u<1} ] du ).

Everything here is deterministic given a QuadratureSpec; no RNG is used.
Evaluations of H/F/G are memoized on the argument rounded to 12 significant
digits; the memo is safe to share between concurrent callers (a stale read
merely recomputes the same value).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BracketFailure, DomainError, ToleranceFailure

__all__ = [
    "QuadratureSpec",
    "LawTables",
    "build_tables",
    "integrate_adaptive",
    "find_root_bracketed",
    "compute_r_star",
    "eval_H",
    "eval_F",
    "invert_F",
    "eval_G",
]

_GL_LO_X, _GL_LO_W = np.polynomial.legendre.leggauss(10)
_GL_HI_X, _GL_HI_W = np.polynomial.legendre.leggauss(21)

_EPS = np.finfo(float).eps


def tail_cutoff_for(abs_tol: float) -> float:
    """Upper limit U with sqrt(2) e^{-U/2} <= abs_tol/10.

    sqrt(2) e^{-U/2} bounds int_U^inf du/sqrt(2 e^u), which dominates the
    remainder of every infinite-limit integrand in this module.
    """
    return 2.0 * math.log(10.0 * math.sqrt(2.0) / abs_tol) + 1.0


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and limits governing adaptive quadrature.

    tail_cutoff substitutes for an infinite upper limit; it must be large
    enough that the analytic remainder bound sqrt(2) e^{-U/2} stays below
    abs_tol/10 (validated here).
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_subdivisions: int = 4000
    tail_cutoff: float | None = None

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise DomainError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")
        if self.tail_cutoff is None:
            object.__setattr__(self, "tail_cutoff", tail_cutoff_for(self.abs_tol))
        if math.sqrt(2.0) * math.exp(-self.tail_cutoff / 2.0) > self.abs_tol / 10.0:
            raise DomainError(
                f"tail_cutoff {self.tail_cutoff} too small for abs_tol {self.abs_tol}"
            )


def _panel(f, a: float, b: float) -> tuple[float, float]:
    # 21-point Gauss-Legendre estimate with the 10-point difference as error.
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    hi = half * float(np.dot(_GL_HI_W, f(mid + half * _GL_HI_X)))
    lo = half * float(np.dot(_GL_LO_W, f(mid + half * _GL_LO_X)))
    return hi, abs(hi - lo)


def integrate_adaptive(f, lo: float, hi: float, spec: QuadratureSpec) -> float:
    """Globally adaptive Gauss-Legendre quadrature of a vectorized integrand.

    Returns I with |I - int_lo^hi f| <= abs_tol + rel_tol |I| for integrands
    whose worst behaviour is an integrable endpoint singularity.  An infinite
    upper limit is replaced by max(tail_cutoff, lo + tail_cutoff); the caller
    owns the analytic remainder bound implied by that substitution.

    Raises ToleranceFailure (carrying the best estimate and an error bound)
    if max_subdivisions interval splits do not reach the tolerance.
    """
    if math.isinf(hi):
        hi = max(spec.tail_cutoff, lo + spec.tail_cutoff)
    if not hi > lo:
        raise DomainError(f"empty integration range [{lo}, {hi}]")

    val, err = _panel(f, lo, hi)
    # heap entries: (-err, a, b, value); exhausted intervals leave the heap
    heap = [(-err, lo, hi, val)]
    total, total_err = val, err
    for _ in range(spec.max_subdivisions):
        if total_err <= max(spec.abs_tol, spec.rel_tol * abs(total)):
            return total
        neg_err, a, b, v = heapq.heappop(heap)
        if b - a <= 1e-15 * max(1.0, abs(a), abs(b)):
            # cannot split below machine width; accept the panel as converged
            total_err += neg_err
            continue
        m = 0.5 * (a + b)
        v1, e1 = _panel(f, a, m)
        v2, e2 = _panel(f, m, b)
        total += v1 + v2 - v
        total_err += e1 + e2 + neg_err
        heapq.heappush(heap, (-e1, a, m, v1))
        heapq.heappush(heap, (-e2, m, b, v2))
    if total_err <= max(spec.abs_tol, spec.rel_tol * abs(total)):
        return total
    raise ToleranceFailure("quadrature did not converge", total, total_err)


def find_root_bracketed(f, a: float, b: float, *, xtol_abs: float = 1e-15,
                        max_iter: int = 200) -> float:
    """Brent's method on a bracketing interval [a, b] with f(a) f(b) <= 0."""
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa < 0.0) == (fb < 0.0):
        raise BracketFailure(f"f({a})={fa} and f({b})={fb} do not bracket a root")
    c, fc = a, fa
    d = e = b - a
    for _ in range(max_iter):
        if (fb < 0.0) != (fc < 0.0):
            pass
        else:
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol = 2.0 * _EPS * abs(b) + xtol_abs
        m = 0.5 * (c - b)
        if abs(m) <= tol or fb == 0.0:
            return b
        if abs(e) < tol or abs(fa) <= abs(fb):
            d = e = m
        else:
            s = fb / fa
            if a == c:
                p = 2.0 * m * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            else:
                p = -p
            if 2.0 * p < min(3.0 * m * q - abs(tol * q), abs(e * q)):
                e = d
                d = p / q
            else:
                d = e = m
        a, fa = b, fb
        b += d if abs(d) > tol else (tol if m > 0.0 else -tol)
        fb = f(b)
    return b


# --- stable evaluation of e^u - u - 1 and derived integrands ----------------

def _em1(u):
    """e^u - u - 1, elementwise, cancellation-free for small |u|."""
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    small = np.abs(u) < 0.5
    if np.any(small):
        us = u[small]
        term = us * us / 2.0
        acc = term.copy()
        for n in range(3, 24):
            term = term * us / n
            acc += term
        out[small] = acc
    if np.any(~small):
        ub = u[~small]
        out[~small] = np.expm1(ub) - ub
    return out


def _qm1(u):
    """2 (e^u - u - 1)/u^2 - 1 = sum_{n>=1} 2 u^n/(n+2)!, stable on (0, 1]."""
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    small = u < 0.5
    if np.any(small):
        us = u[small]
        term = us / 3.0
        acc = term.copy()
        for n in range(1, 22):
            term = term * us / (n + 3.0)
            acc += term
        out[small] = acc
    if np.any(~small):
        ub = u[~small]
        out[~small] = 2.0 * (np.expm1(ub) - ub) / (ub * ub) - 1.0
    return out


def _inv_sqrt_2em1(u):
    """(2 (e^u - u - 1))^{-1/2}, elementwise, stable from 1e-300 to 1e300."""
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    small = u < 0.5
    large = u > 600.0
    mid = ~small & ~large
    if np.any(small):
        us = u[small]
        out[small] = np.exp(-0.5 * np.log1p(_qm1(us))) / us
    if np.any(mid):
        um = u[mid]
        out[mid] = 1.0 / np.sqrt(2.0 * (np.expm1(um) - um))
    if np.any(large):
        # (u+1) e^{-u} < 1e-257 here; the subtraction is invisible
        out[large] = np.exp(-0.5 * u[large]) / math.sqrt(2.0)
    return out


def _subtracted(u):
    """(2(e^u-u-1))^{-1/2} - 1/u on (0, 1]; -1/6 + O(u^2) near zero."""
    u = np.asarray(u, dtype=float)
    return np.expm1(-0.5 * np.log1p(_qm1(u))) / u


def _g_integrand(v):
    # G in the variable v = -log u: 1/sqrt(e^{-v} + v - 1) = 1/sqrt(em1(-v))
    return 1.0 / np.sqrt(_em1(-np.asarray(v, dtype=float)))


# --- the explosion constant and law tables -----------------------------------

def compute_r_star(spec: QuadratureSpec) -> float:
    """The explosion constant r*, via the subtracted integrand on (0,1].

    The removable singularity at 0 is handled analytically: the integrand is
    evaluated through the series of 2(e^u-u-1)/u^2, never by direct
    subtraction, so no catastrophic cancellation occurs.
    """
    log_r = integrate_adaptive(_subtracted, 0.0, 1.0, spec) \
        + integrate_adaptive(_inv_sqrt_2em1, 1.0, math.inf, spec)
    return math.exp(log_r)


@dataclass
class LawTables:
    """Cached constant r*, quadrature spec and memoized special-function values."""

    r_star: float
    log_r_star: float
    quad: QuadratureSpec
    memo: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not (math.isfinite(self.r_star) and self.r_star > 0):
            raise DomainError("r_star must be finite and positive")


def build_tables(quad: QuadratureSpec | None = None) -> LawTables:
    spec = quad if quad is not None else QuadratureSpec()
    r_star = compute_r_star(spec)
    return LawTables(r_star=r_star, log_r_star=math.log(r_star), quad=spec)


def _key(tag: str, y: float) -> tuple:
    return (tag, float(f"{y:.12g}"))


def _H_raw(y: float, tables: LawTables) -> float:
    spec = tables.quad
    if y < 1.0:
        # H(y) = -log y + int_y^1 (subtracted) + H(1); the subtracted
        # integrand is bounded, so small y costs nothing extra
        head = integrate_adaptive(_subtracted, y, 1.0, spec)
        return -math.log(y) + head + _H_one(tables)
    return integrate_adaptive(_inv_sqrt_2em1, y, math.inf, spec)


def _H_one(tables: LawTables) -> float:
    key = ("H", 1.0)
    if key not in tables.memo:
        tables.memo[key] = integrate_adaptive(_inv_sqrt_2em1, 1.0, math.inf, tables.quad)
    return tables.memo[key]


def eval_H(y: float, tables: LawTables) -> float:
    """H(y) = int_y^inf du/sqrt(2(e^u-u-1)); strictly decreasing, y > 0.

    H(y) + log y -> log r* as y -> 0+.
    """
    if not y > 0.0:
        raise DomainError(f"H requires y > 0, got {y}")
    key = _key("H", y)
    if key not in tables.memo:
        tables.memo[key] = _H_raw(key[1], tables)
    return tables.memo[key]


def eval_F(y: float, tables: LawTables) -> float:
    """F(y) = H(log y) for y > 1."""
    if not y > 1.0:
        raise DomainError(f"F requires y > 1, got {y}")
    return eval_H(math.log1p(y - 1.0), tables)


def _F_raw(y: float, tables: LawTables) -> float:
    # unmemoized; used inside root refinement where argument quantization
    # would put a floor on the attainable accuracy
    return _H_raw(math.log1p(y - 1.0), tables)


def invert_F(v: float, tables: LawTables) -> float:
    """Solve F(y) = v for y > 1.

    Brackets with [1 + delta, y_hi] where y_hi doubles until F(y_hi) < v; the
    lower offset delta starts at 1e-12 and shrinks toward machine resolution
    for very large v.  Values v > F(1 + 4 eps) =~ 36.6 have no representable
    solution in binary64 (y - 1 underflows) and raise BracketFailure.
    """
    if not v > 0.0:
        raise DomainError(f"invert_F requires v > 0, got {v}")
    delta = 1e-12
    while _F_raw(1.0 + delta, tables) < v:
        delta /= 32.0
        if delta < 1e-16:
            raise BracketFailure(
                f"F^-1({v}) is within 1e-16 of 1; not representable in double precision"
            )
    hi = 2.0
    while _F_raw(hi, tables) > v:
        hi *= 2.0
        if hi > 1e16:
            raise BracketFailure("upper bracket for invert_F grew past 1e16")
    return find_root_bracketed(lambda y: _F_raw(y, tables) - v, 1.0 + delta, hi)


def eval_G(y: float, varphi1: float, tables: LawTables) -> float:
    """G(y) = int_y^varphi1 du/(u sqrt(u - log u - 1)), 0 < y < varphi1 < 1.

    Computed in the variable v = -log u, where the integrand
    1/sqrt(e^{-v} + v - 1) is smooth on the whole range; near y -> 0+ the
    value behaves like 2 sqrt(-log y) + const + o(1).
    """
    if not (0.0 < varphi1 < 1.0):
        raise DomainError(f"G requires 0 < varphi1 < 1, got {varphi1}")
    if not (0.0 < y <= varphi1):
        raise DomainError(f"G requires 0 < y <= varphi1={varphi1}, got {y}")
    if y == varphi1:
        return 0.0
    key = ("G", _key("", y)[1], _key("", varphi1)[1])
    if key not in tables.memo:
        tables.memo[key] = integrate_adaptive(
            _g_integrand, -math.log(varphi1), -math.log(y), tables.quad
        )
    return tables.memo[key]
