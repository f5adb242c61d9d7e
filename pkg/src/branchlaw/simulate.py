"""Monte Carlo engine for the Poisson branching random walk.

Offspring of an atom at (t, x) are a Poisson point process on the quadrant
with intensity x'^(alpha-1)/Gamma(alpha) dx' dt', truncated to the triangle
{t' + x' <= T}; the additive martingale weights atoms by e^{-t-x}.

Exact simulation is impossible: the weighted mass performs a random walk with
Gamma-distributed increments, so the number of atoms above any absolute
weight floor eps grows like cosh(-log eps) per tree while everything below
the floor still carries most of the late-generation mass.  The engine
therefore samples children *only* inside the weight barrier (a thinned
Poisson process on the sub-triangle {t'+x' <= B - sigma}, B = -log prune_eps,
sigma = parent's t+x) and adds the exact expected weighted mass of the cut
region to a per-tree compensator, using E W_subtree = weight.  The resulting
value is the martingale stopped on the barrier line: its mean is exactly 1,
its second moment is low by only ~0.13 eps, and its law differs from the
terminal law at second order in eps because the unresolved remainder is
conditionally centered.

Batches are generated in fixed chunks of 4096 trees; chunk i of a batch draws
from Philox keyed by SeedSequence(seed, (stream, i)), so results are
bit-identical for a given (params, seed) regardless of worker count.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
from math import gamma as _gamma_fn

import numpy as np
from scipy.special import gammaincc

from .errors import BiasBudgetExceeded, DomainError, ResourceBudgetExceeded

__all__ = [
    "ModelParams",
    "Atom",
    "BatchKind",
    "SampleBatch",
    "sample_offspring",
    "simulate_W",
    "simulate_W1",
    "simulate_yule_W",
    "simulate_Vt",
    "simulate_selfdecomp_pair",
    "w_batch",
    "w1_batch",
    "yule_batch",
    "vt_batch",
    "selfdecomp_batches",
    "tilted_batch",
    "batch_to_json",
    "batch_from_json",
    "batch_to_csv",
]

CHUNK_TREES = 4096  # fixed: part of the reproducibility contract
_MAX_LIVE_ATOMS = 50_000_000

_STREAMS = {
    "w": 0,
    "w1": 1,
    "yule": 2,
    "vt": 3,
    "sd_lhs": 4,
    "sd_rhs": 5,
    "tilt": 6,
}


@dataclass(frozen=True)
class ModelParams:
    """One simulation configuration.

    trunc_T bounds each birth's displacement triangle {t'+x' <= T};
    prune_eps is the absolute weight barrier below which subtrees are
    replaced by their exact conditional expectation; bias_budget bounds the
    per-sample *uncompensated* discarded mass (the compensated part is
    unbiased by construction).
    """

    alpha: float = 1.0
    trunc_T: float = 25.0
    prune_eps: float = 1e-3
    n_generations: int = 12
    seed: int = 0
    bias_budget: float = 1e-4

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if not self.trunc_T > 0:
            raise DomainError(f"trunc_T must be positive, got {self.trunc_T}")
        if not 0 < self.prune_eps < 1:
            raise DomainError(f"prune_eps must lie in (0, 1), got {self.prune_eps}")
        if self.n_generations < 0:
            raise DomainError("n_generations must be >= 0")
        if self.prune_eps < math.exp(-self.trunc_T):
            raise DomainError(
                "prune_eps below e^{-trunc_T}: pruning would be finer than the "
                "truncation it is meant to dominate"
            )
        # per-birth truncation mass, Q(alpha+1, T); must sit inside the budget
        if float(gammaincc(self.alpha + 1.0, self.trunc_T)) > self.bias_budget:
            raise DomainError(
                f"trunc_T={self.trunc_T} leaves more than bias_budget={self.bias_budget} "
                "expected mass outside the triangle"
            )

    @property
    def barrier(self) -> float:
        return -math.log(self.prune_eps)


@dataclass(frozen=True)
class Atom:
    """A particle: cumulative (time, space) coordinates and its weight."""

    t: float
    x: float
    weight: float = field(init=False)

    def __post_init__(self):
        if not (math.isfinite(self.t) and math.isfinite(self.x)):
            raise DomainError("atom coordinates must be finite")
        if self.t < 0 or self.x < 0:
            raise DomainError("atom coordinates must be nonnegative")
        object.__setattr__(self, "weight", math.exp(-(self.t + self.x)))


class BatchKind(str, Enum):
    W = "w"
    W1 = "w1"
    YULE = "yule"
    VT = "vt"
    SELFDECOMP_LHS = "selfdecomp_lhs"
    SELFDECOMP_RHS = "selfdecomp_rhs"
    W_TILTED = "w_tilted"


@dataclass
class SampleBatch:
    """Seeded, reproducible collection of simulated values with provenance."""

    values: np.ndarray
    kind: BatchKind
    params: ModelParams
    pruned_mass_bound: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.size and float(self.values.min()) < 0:
            raise DomainError("batch values must be nonnegative")
        if self.pruned_mass_bound > self.params.bias_budget * max(self.values.size, 1):
            raise BiasBudgetExceeded(
                f"pruned mass bound {self.pruned_mass_bound} exceeds budget "
                f"{self.params.bias_budget} x {self.values.size}"
            )

    @property
    def n(self) -> int:
        return int(self.values.size)


def _rng_for(seed: int, stream: int, chunk: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(stream, chunk))
    return np.random.Generator(np.random.Philox(ss))


def _lam_triangle(S, ap1: float) -> np.ndarray:
    # Poisson intensity mass of {t'+x' <= S}: S^(alpha+1)/Gamma(alpha+2)
    return np.asarray(S, dtype=float) ** ap1 / _gamma_fn(ap1 + 1.0)


# --- core growth loop --------------------------------------------------------

def _grow_core(rng, n_trees, tree, sig, comp, params: ModelParams, n_gens: int,
               *, mode: str = "std", tilt_c: float = 1.0, record: bool = False):
    """Grow barrier-stopped trees from the given root atoms.

    tree/sig hold the root atoms' tree indices and weight exponents; comp is
    the per-tree compensator (modified in place).  Returns
    (values, gen_values, uncompensated_bound): values[i] = frontier weight
    plus compensator for tree i after n_gens generations; gen_values is the
    list of running martingale values per generation when record=True.
    """
    a = params.alpha
    ap1 = a + 1.0
    B = params.barrier
    T = params.trunc_T
    bound = 0.0
    gen_values = []

    def _frontier():
        out = np.bincount(tree, weights=np.exp(-sig), minlength=n_trees)
        return out + comp

    if record:
        gen_values.append(_frontier())
    for _ in range(n_gens):
        if sig.size == 0:
            if record:
                gen_values.append(comp.copy())
            continue
        w = np.exp(-sig)
        S = B - sig  # > 0 for every alive atom, and <= B < T by params guard
        if mode == "yule":
            lam = S
            cut = np.exp(-S)
        else:
            lam = _lam_triangle(S, ap1)
            cut = gammaincc(ap1, S)
        comp += np.bincount(tree, weights=w * cut, minlength=n_trees)
        counts = rng.poisson(lam)
        if int(counts.sum()) > _MAX_LIVE_ATOMS:
            raise ResourceBudgetExceeded(
                f"{int(counts.sum())} live atoms in one chunk; increase prune_eps"
            )
        par = np.repeat(np.arange(sig.size), counts)
        if par.size == 0:
            tree = tree[:0]
            sig = sig[:0]
            if record:
                gen_values.append(comp.copy())
            continue
        U = rng.random(par.size)
        if mode == "yule":
            ds = S[par] * U
        elif mode == "std":
            ds = S[par] * U ** (1.0 / ap1)
        elif mode == "tilt":
            # sigma-coordinates (u, v) = (c t', x'/c) are Lebesgue with unit
            # Jacobian; the kept region is the standard triangle there.  The
            # physical triangle {t'+x' <= T} is enforced by rejection and the
            # rejected (unborn) tilted mass is only bounded, not compensated.
            s = S[par] * np.sqrt(U)
            uu = s * rng.random(par.size)
            vv = s - uu
            keep = uu / tilt_c + vv * tilt_c <= T
            if not np.all(keep):
                bound += float(np.sum(np.exp(-(sig[par] + s))[~keep]))
                par, s = par[keep], s[keep]
            ds = s
        else:  # pragma: no cover
            raise ValueError(f"unknown growth mode {mode!r}")
        sig = sig[par] + ds
        tree = tree[par]
        if record:
            gen_values.append(_frontier())
    return _frontier(), gen_values, bound


def _w_chunk(rng, n, params, *, mode="std", tilt_c=1.0, record=False):
    tree = np.arange(n)
    sig = np.zeros(n)
    comp = np.zeros(n)
    return _grow_core(rng, n, tree, sig, comp, params, params.n_generations,
                      mode=mode, tilt_c=tilt_c, record=record)


# --- public single-draw operations (spec surface) ----------------------------

def sample_offspring(parent: Atom, params: ModelParams, rng: np.random.Generator) -> list[Atom]:
    """One fresh offspring point process of the given parent.

    The child count is Poisson(T^(alpha+1)/Gamma(alpha+2)); displacements are
    sampled exactly via s = t'+x' ~ CDF (s/T)^(alpha+1) and x'|s = s V^(1/alpha),
    which reproduces the x'-marginal ~ x^(alpha-1)(T-x) with t' uniform given x'.
    """
    a, T = params.alpha, params.trunc_T
    ap1 = a + 1.0
    k = int(rng.poisson(float(_lam_triangle(T, ap1))))
    if k == 0:
        return []
    s = T * rng.random(k) ** (1.0 / ap1)
    x = s * rng.random(k) ** (1.0 / a)
    t = s - x
    return [Atom(parent.t + float(ti), parent.x + float(xi)) for ti, xi in zip(t, x)]


def simulate_W(params: ModelParams, rng: np.random.Generator) -> tuple[float, float]:
    """One barrier-stopped martingale value; returns (w_hat, uncompensated_bound)."""
    vals, _, bound = _w_chunk(rng, 1, params)
    return float(vals[0]), bound


def simulate_W1(params: ModelParams, rng: np.random.Generator) -> float:
    """One first-generation value W1 = sum of e^{-t-x} over a single litter."""
    kids = sample_offspring(Atom(0.0, 0.0), params, rng)
    return float(sum(child.weight for child in kids))


def simulate_yule_W(params: ModelParams, rng: np.random.Generator) -> float:
    """One stopped-martingale value for the one-dimensional unit-rate walk."""
    vals, _, _ = _w_chunk(rng, 1, params, mode="yule")
    return float(vals[0])


def simulate_Vt(theta: float, t_slice: float, params: ModelParams,
                rng: np.random.Generator) -> float:
    """One time-slice martingale value V_t(theta)."""
    v, _ = _vt_chunk(rng, 1, params, theta, t_slice)
    return float(v[0])


def simulate_selfdecomp_pair(s: float, params: ModelParams,
                             rng: np.random.Generator) -> tuple[float, float]:
    """(lhs, rhs) with lhs ~ W and rhs = e^{-s} W' + A_s, all independent."""
    if not s > 0:
        raise DomainError(f"self-decomposition needs s > 0, got {s}")
    lhs, _, _ = _w_chunk(rng, 1, params)
    rhs = _sd_rhs_chunk(rng, 1, params, s)
    return float(lhs[0]), float(rhs[0])


# --- the V_t coupled engine ---------------------------------------------------

_GL24_X, _GL24_W = np.polynomial.legendre.leggauss(24)


def _v_cut_compensation(S, tau, theta: float, a: float) -> np.ndarray:
    """E V-contribution of children cut by the barrier, per unit e^{-theta x_parent}.

    Integral over the cut region {t' <= tau, t'+x' > S} of
    e^{-theta x'} e^{(tau - t') theta^-a} x'^(a-1)/Gamma(a):
        J = int_0^tau e^{(tau-u) theta^-a} theta^-a Q(a, theta (S-u)^+) du,
    split at u = S where Q saturates at 1 (closed form beyond).
    """
    S = np.asarray(S, dtype=float)
    tau = np.asarray(tau, dtype=float)
    c = theta ** (-a)
    m = np.minimum(S, tau)
    m = np.maximum(m, 0.0)
    # smooth piece on [0, m]
    nodes = 0.5 * m[:, None] * (_GL24_X[None, :] + 1.0)
    halfw = 0.5 * m
    qvals = gammaincc(a, theta * np.maximum(S[:, None] - nodes, 0.0))
    integ = np.exp((tau[:, None] - nodes) * c) * c * qvals
    out = halfw * (integ @ _GL24_W)
    # saturated piece on [S, tau] where the whole fibre is cut
    sat = tau > S
    if np.any(sat):
        out[sat] += np.expm1((tau[sat] - S[sat]) * c)
    return out


def _vt_chunk(rng, n, params: ModelParams, theta: float, t_slice: float,
              max_extra_generations: int = 64):
    """Coupled (V_t, W) draws from a single tree per sample.

    Phase 1 grows the full barrier tree for n_generations (W read at the
    end); V accumulates every atom with time <= t_slice plus exact
    compensation for barrier-cut children.  Phase 2 keeps growing only
    V-active atoms (time <= t_slice) until none remain; any survivors at the
    cap are compensated exactly via the martingale mean e^{t theta^-alpha}.
    """
    if not theta > 0:
        raise DomainError(f"theta must be positive, got {theta}")
    if not t_slice > 0:
        raise DomainError(f"t_slice must be positive, got {t_slice}")
    a = params.alpha
    ap1 = a + 1.0
    c = theta ** (-a)
    # barrier shifted so a cut child's V-potential is ~ prune_eps
    B = params.barrier + t_slice * c
    if B > params.trunc_T:
        raise DomainError("V_t barrier would exceed the truncation triangle; "
                          "raise trunc_T or prune_eps")
    tree = np.arange(n)
    tt = np.zeros(n)
    xx = np.zeros(n)
    dw = np.zeros(n)
    dv = np.zeros(n)
    vsum = np.ones(n)  # the root atom: time 0 <= t_slice, weight e^0
    w_vals = None

    for gen in range(params.n_generations + max_extra_generations):
        phase2 = gen >= params.n_generations
        if phase2 and w_vals is None:
            w_vals = np.bincount(tree, weights=np.exp(-(tt + xx)), minlength=n) + dw
            live = tt <= t_slice
            tree, tt, xx = tree[live], tt[live], xx[live]
        if tree.size == 0:
            break
        sig = tt + xx
        S = B - sig
        tau = t_slice - tt
        w = np.exp(-sig)
        if not phase2:
            # V-compensation only matters for atoms that still have time budget
            act = tau > 0
            if np.any(act):
                j = _v_cut_compensation(S[act], tau[act], theta, a)
                dv += np.bincount(tree[act], weights=np.exp(-theta * xx[act]) * j,
                                  minlength=n)
            dw += np.bincount(tree, weights=w * gammaincc(ap1, S), minlength=n)
            lam = _lam_triangle(S, ap1)
            counts = rng.poisson(lam)
            if int(counts.sum()) > _MAX_LIVE_ATOMS:
                raise ResourceBudgetExceeded("V_t population too large; raise prune_eps")
            par = np.repeat(np.arange(sig.size), counts)
            U = rng.random(par.size)
            s_child = S[par] * U ** (1.0 / ap1)
            x_child = s_child * rng.random(par.size) ** (1.0 / a)
            t_child = s_child - x_child
        else:
            act = tau > 0
            tree, tt, xx, S, tau = tree[act], tt[act], xx[act], S[act], tau[act]
            if tree.size == 0:
                break
            j = _v_cut_compensation(S, tau, theta, a)
            dv += np.bincount(tree, weights=np.exp(-theta * xx) * j, minlength=n)
            m = np.minimum(tau, S)
            top = S ** ap1 - (S - m) ** ap1
            lam = top / _gamma_fn(ap1 + 1.0)
            counts = rng.poisson(lam)
            par = np.repeat(np.arange(S.size), counts)
            U = rng.random(par.size)
            t_child = S[par] - (S[par] ** ap1 - U * top[par]) ** (1.0 / ap1)
            x_child = (S[par] - t_child) * rng.random(par.size) ** (1.0 / a)
        tt = tt[par] + t_child
        xx = xx[par] + x_child
        tree = tree[par]
        intime = tt <= t_slice
        if np.any(intime):
            vsum += np.bincount(tree[intime], weights=np.exp(-theta * xx[intime]),
                                minlength=n)
    else:
        # generation cap: compensate surviving V-active atoms exactly
        live = tt <= t_slice
        if np.any(live):
            extra = np.exp(-theta * xx[live]) * np.expm1((t_slice - tt[live]) * c)
            dv += np.bincount(tree[live], weights=extra, minlength=n)
    if w_vals is None:
        w_vals = np.bincount(tree, weights=np.exp(-(tt + xx)), minlength=n) + dw
    v_vals = math.exp(-t_slice * c) * (vsum + dv)
    return v_vals, w_vals


# --- self-decomposition right-hand side ---------------------------------------

def _strip_A_chunk(rng, n, params: ModelParams, s_cut: float) -> np.ndarray:
    """A_s: subtrees hanging off the first-generation strip {t < s_cut}."""
    a = params.alpha
    ap1 = a + 1.0
    B = params.barrier
    m = min(s_cut, B)
    top = B ** ap1 - (B - m) ** ap1
    lam = top / _gamma_fn(ap1 + 1.0)
    counts = rng.poisson(lam, n)
    par = np.repeat(np.arange(n), counts)
    U = rng.random(par.size)
    t0 = B - (B ** ap1 - U * top) ** (1.0 / ap1)
    x0 = (B - t0) * rng.random(par.size) ** (1.0 / a)
    sig0 = t0 + x0
    # mass of the strip beyond the barrier: int_0^{s_cut} e^-t Q(a, B-t) dt
    nodes = 0.5 * s_cut * (_GL24_X + 1.0)
    d0 = 0.5 * s_cut * float(np.dot(
        _GL24_W, np.exp(-nodes) * gammaincc(a, np.maximum(B - nodes, 0.0))))
    comp = np.full(n, d0)
    a_vals, _, _ = _grow_core(rng, n, par, sig0, comp, params, params.n_generations)
    return a_vals


def _sd_rhs_chunk(rng, n, params: ModelParams, s_cut: float) -> np.ndarray:
    """e^{-s} W' + A_s with A_s grown from the strip {t < s_cut} of generation 1."""
    w_prime, _, _ = _w_chunk(rng, n, params)
    a_vals = _strip_A_chunk(rng, n, params, s_cut)
    return math.exp(-s_cut) * w_prime + a_vals


# --- batch builders -----------------------------------------------------------

def _run_chunks(total: int, stream: str, params: ModelParams, fn, workers: int = 1):
    """fn(rng, m) per fixed-size chunk, reassembled in order."""
    n_chunks = (total + CHUNK_TREES - 1) // CHUNK_TREES
    sizes = [min(CHUNK_TREES, total - i * CHUNK_TREES) for i in range(n_chunks)]

    def one(i):
        rng = _rng_for(params.seed, _STREAMS[stream], i)
        return fn(rng, sizes[i])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, range(n_chunks)))
    return [one(i) for i in range(n_chunks)]


def w_batch(n: int, params: ModelParams, *, record_generations: bool = False,
            workers: int = 1):
    """SampleBatch of n stopped-martingale values; optionally the per-generation
    running values as an (n_generations+1, n) matrix for the flatness diagnostic."""
    def fn(rng, m):
        return _w_chunk(rng, m, params, record=record_generations)

    parts = _run_chunks(n, "w", params, fn, workers)
    values = np.concatenate([p[0] for p in parts])
    bound = sum(p[2] for p in parts)
    batch = SampleBatch(values, BatchKind.W, params, pruned_mass_bound=bound)
    if record_generations:
        gens = np.hstack([np.asarray(p[1]) for p in parts])
        return batch, gens
    return batch


def w1_batch(n: int, params: ModelParams, *, workers: int = 1) -> SampleBatch:
    """n independent first-generation values (exact within the triangle)."""
    a, T = params.alpha, params.trunc_T
    ap1 = a + 1.0
    lam = float(_lam_triangle(T, ap1))

    def fn(rng, m):
        counts = rng.poisson(lam, m)
        par = np.repeat(np.arange(m), counts)
        s = T * rng.random(par.size) ** (1.0 / ap1)
        return np.bincount(par, weights=np.exp(-s), minlength=m)

    parts = _run_chunks(n, "w1", params, fn, workers)
    bound = n * float(gammaincc(ap1, T))
    return SampleBatch(np.concatenate(parts), BatchKind.W1, params,
                       pruned_mass_bound=bound)


def yule_batch(n: int, params: ModelParams, *, workers: int = 1) -> SampleBatch:
    def fn(rng, m):
        return _w_chunk(rng, m, params, mode="yule")[0]

    parts = _run_chunks(n, "yule", params, fn, workers)
    return SampleBatch(np.concatenate(parts), BatchKind.YULE, params)


def tilted_batch(n: int, params: ModelParams, c: float, *, workers: int = 1) -> SampleBatch:
    """Terminal values under the tilted weights e^{-c t - x/c} (alpha = 1 only)."""
    if params.alpha != 1.0:
        raise DomainError("tilted weights are defined for alpha = 1")
    if not c > 0:
        raise DomainError(f"tilt constant must be positive, got {c}")

    def fn(rng, m):
        return _w_chunk(rng, m, params, mode="tilt", tilt_c=c)

    parts = _run_chunks(n, "tilt", params, fn, workers)
    values = np.concatenate([p[0] for p in parts])
    bound = sum(p[2] for p in parts)
    return SampleBatch(values, BatchKind.W_TILTED, params,
                       pruned_mass_bound=bound, meta={"tilt_c": c})


def vt_batch(n: int, params: ModelParams, theta: float, t_slice: float,
             *, workers: int = 1):
    """(SampleBatch of V_t values, coupled W values from the same trees)."""
    def fn(rng, m):
        return _vt_chunk(rng, m, params, theta, t_slice)

    parts = _run_chunks(n, "vt", params, fn, workers)
    v = np.concatenate([p[0] for p in parts])
    w = np.concatenate([p[1] for p in parts])
    batch = SampleBatch(v, BatchKind.VT, params,
                        meta={"theta": theta, "t_slice": t_slice})
    return batch, w


def selfdecomp_batches(n: int, params: ModelParams, s: float, *, workers: int = 1):
    """Independent (lhs, rhs) batches for the decomposition W =d e^{-s} W + A_s."""
    if not s > 0:
        raise DomainError(f"self-decomposition needs s > 0, got {s}")

    def fn_l(rng, m):
        return _w_chunk(rng, m, params)[0]

    def fn_r(rng, m):
        return _sd_rhs_chunk(rng, m, params, s)

    lhs = np.concatenate(_run_chunks(n, "sd_lhs", params, fn_l, workers))
    rhs = np.concatenate(_run_chunks(n, "sd_rhs", params, fn_r, workers))
    meta = {"s": s}
    return (SampleBatch(lhs, BatchKind.SELFDECOMP_LHS, params, meta=meta),
            SampleBatch(rhs, BatchKind.SELFDECOMP_RHS, params, meta=meta))


# --- batch serialization ------------------------------------------------------

def batch_to_json(batch: SampleBatch, path) -> None:
    payload = {
        "schema_version": 1,
        "kind": batch.kind.value,
        "params": asdict(batch.params),
        "pruned_mass_bound": batch.pruned_mass_bound,
        "meta": batch.meta,
        "values": [float(v) for v in batch.values],  # repr-exact in json
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True, indent=1)
        fh.write("\n")


def batch_from_json(path) -> SampleBatch:
    with open(path) as fh:
        payload = json.load(fh)
    return SampleBatch(
        values=np.array([float(v) for v in payload["values"]]),
        kind=BatchKind(payload["kind"]),
        params=ModelParams(**payload["params"]),
        pruned_mass_bound=payload["pruned_mass_bound"],
        meta=payload.get("meta", {}),
    )


def batch_to_csv(batch: SampleBatch, path) -> None:
    header = {
        "schema_version": 1,
        "kind": batch.kind.value,
        "params": asdict(batch.params),
        "pruned_mass_bound": batch.pruned_mass_bound,
        "meta": batch.meta,
    }
    with open(path, "w") as fh:
        fh.write("# " + json.dumps(header, sort_keys=True) + "\n")
        fh.write("index,value\n")
        for i, v in enumerate(batch.values):
            fh.write(f"{i},{float(v)!r}\n")
