"""Command-line surface.

Commands
--------
constants   print r* with quadrature diagnostics
mgf         tabulate phi/psi on a grid of r in (0, r*)
laplace     tabulate the Laplace transform on a grid of r >= 0
moments     emit the moment table for one alpha
simulate    write a sample batch (csv or json)
verify      run the verification suite and emit a JSON report

All randomness is controlled by --seed; identical configurations produce
byte-identical output files.  BRANCHLAW_OUTDIR sets the default output
directory (default: current directory).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import law, moments
from .numerics import QuadratureSpec, build_tables, compute_r_star
from .simulate import (
    ModelParams,
    batch_to_csv,
    batch_to_json,
    selfdecomp_batches,
    tilted_batch,
    vt_batch,
    w1_batch,
    w_batch,
    yule_batch,
)
from .verify import run_verification

SCHEMA_VERSION = 1


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run's output, embedded in every artifact."""

    command: str
    alpha: float = 1.0
    samples: int = 10000
    generations: int = 12
    trunc_T: float = 25.0
    prune_eps: float = 1e-3
    seed: int = 42
    out_format: str = "csv"
    out_path: str | None = None
    slow_suite: bool = False
    extra: dict = dataclasses.field(default_factory=dict)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["schema_version"] = SCHEMA_VERSION
        return d


def _out_path(cfg: RunConfig, default_name: str) -> Path:
    if cfg.out_path:
        return Path(cfg.out_path)
    outdir = Path(os.environ.get("BRANCHLAW_OUTDIR", "."))
    outdir.mkdir(parents=True, exist_ok=True)
    return outdir / default_name


def _write_table(cfg: RunConfig, rows: list[dict], default_name: str) -> Path:
    path = _out_path(cfg, f"{default_name}.{cfg.out_format}")
    if cfg.out_format == "json":
        with open(path, "w") as fh:
            json.dump({"config": cfg.to_dict(), "rows": rows}, fh, sort_keys=True, indent=1)
            fh.write("\n")
    else:
        with open(path, "w") as fh:
            fh.write("# " + json.dumps(cfg.to_dict(), sort_keys=True) + "\n")
            if rows:
                cols = list(rows[0])
                fh.write(",".join(cols) + "\n")
                for row in rows:
                    fh.write(",".join(repr(row[c]) if isinstance(row[c], float)
                                      else str(row[c]) for c in cols) + "\n")
    return path


def _grid(arg: str) -> np.ndarray:
    lo, hi, n = arg.split(":")
    return np.linspace(float(lo), float(hi), int(n))


def cmd_constants(cfg: RunConfig) -> int:
    abs_tol = cfg.extra.get("abs_tol", 1e-12)
    spec = QuadratureSpec(abs_tol=abs_tol, rel_tol=abs_tol)
    tight = QuadratureSpec(abs_tol=abs_tol / 100.0, rel_tol=abs_tol / 100.0)
    r1 = compute_r_star(spec)
    r2 = compute_r_star(tight)
    print(f"r* = {r1:.12g}   (abs_tol {abs_tol:g})")
    print(f"r* = {r2:.12g}   (abs_tol {abs_tol / 100.0:g})")
    print(f"|difference| = {abs(r1 - r2):.3e}")
    print(f"log r* = {math.log(r2):.12g}")
    print(f"tail cutoff = {spec.tail_cutoff:.3f} (remainder bound "
          f"{math.sqrt(2.0) * math.exp(-spec.tail_cutoff / 2.0):.2e})")
    return 0


def cmd_mgf(cfg: RunConfig) -> int:
    tables = build_tables()
    fracs = cfg.extra.get("grid")
    rs = (_grid(fracs) if fracs else np.linspace(0.05, 0.95, 19)) * tables.r_star
    rows = []
    for r in rs:
        phi = law.mgf(float(r), tables)
        rows.append({"r": float(r), "r_over_rstar": float(r) / tables.r_star,
                     "mgf": phi, "cgf": math.log(phi), "method": "f_inversion"})
    path = _write_table(cfg, rows, "mgf")
    print(f"r* = {tables.r_star:.12g}; wrote {len(rows)} rows to {path}")
    return 0


def cmd_laplace(cfg: RunConfig) -> int:
    tables = build_tables()
    table = moments.build_moment_table(1.0, 40)
    fracs = cfg.extra.get("grid")
    rs = np.sort(_grid(fracs)) if fracs else np.linspace(0.0, 20.0, 21)
    vals = law.laplace_grid([float(r) for r in rs], table, tables) \
        if np.all(np.diff(rs) > 0) else np.array(
            [law.laplace(float(r), table, tables) for r in rs])
    rows = [{"r": float(r), "laplace": float(v), "method": "ode" if r > 1e-3 else "series"}
            for r, v in zip(rs, vals)]
    path = _write_table(cfg, rows, "laplace")
    print(f"wrote {len(rows)} rows to {path}")
    return 0


def cmd_moments(cfg: RunConfig) -> int:
    K = cfg.extra.get("K", 40)
    table = moments.build_moment_table(cfg.alpha, K)
    mu, c = table.mu, table.c
    rows = [{"k": k + 1, "mu_k": float(mu[k]), "c_k": float(c[k])} for k in range(K)]
    path = _write_table(cfg, rows, "moments")
    print(f"alpha={cfg.alpha}, K={K}; wrote {path}")
    return 0


def cmd_simulate(cfg: RunConfig) -> int:
    kind = cfg.extra["kind"]
    params = ModelParams(alpha=cfg.alpha, trunc_T=cfg.trunc_T, prune_eps=cfg.prune_eps,
                         n_generations=cfg.generations, seed=cfg.seed)
    n = cfg.samples
    if kind == "w":
        batch = w_batch(n, params)
    elif kind == "w1":
        batch = w1_batch(n, params)
    elif kind == "yule":
        batch = yule_batch(n, params)
    elif kind == "vt":
        batch, _ = vt_batch(n, params, theta=cfg.extra.get("theta", 1.0),
                            t_slice=cfg.extra.get("t_slice", 2.0))
    elif kind == "selfdecomp":
        lhs, rhs = selfdecomp_batches(n, params, s=cfg.extra.get("s", 1.0))
        for side, b in (("lhs", lhs), ("rhs", rhs)):
            path = _out_path(cfg, f"batch_selfdecomp_{side}.{cfg.out_format}")
            (batch_to_json if cfg.out_format == "json" else batch_to_csv)(b, path)
            print(f"wrote {b.n} samples to {path}")
        return 0
    elif kind == "tilted":
        batch = tilted_batch(n, params, c=cfg.extra.get("tilt_c", 2.0))
    else:  # pragma: no cover
        raise ValueError(kind)
    path = _out_path(cfg, f"batch_{kind}.{cfg.out_format}")
    (batch_to_json if cfg.out_format == "json" else batch_to_csv)(batch, path)
    print(f"wrote {batch.n} samples to {path} "
          f"(pruned mass bound {batch.pruned_mass_bound:.3e})")
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    results = run_verification(seed=cfg.seed, samples=cfg.samples,
                               slow=cfg.slow_suite, echo=print)
    report = {
        "schema_version": SCHEMA_VERSION,
        "config": cfg.to_dict(),
        "checks": [r.to_dict() for r in results],
        "all_pass": all(r.passed for r in results),
    }
    path = _out_path(cfg, "verify_report.json")
    with open(path, "w") as fh:
        json.dump(report, fh, sort_keys=True, indent=1)
        fh.write("\n")
    n_pass = sum(r.passed for r in results)
    print(f"{n_pass}/{len(results)} checks passed; report at {path}")
    return 0 if report["all_pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="branchlaw", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("constants", help="print r* and quadrature diagnostics")
    c.add_argument("--abs-tol", type=float, default=1e-12)

    for name in ("mgf", "laplace"):
        g = sub.add_parser(name, help=f"tabulate the {name} on a grid")
        g.add_argument("--grid", help="lo:hi:n " + (
            "(fractions of r*)" if name == "mgf" else "(absolute r)"))
        g.add_argument("--format", choices=("csv", "json"), default="csv")
        g.add_argument("--out")

    m = sub.add_parser("moments", help="emit the moment table")
    m.add_argument("--alpha", type=float, default=1.0)
    m.add_argument("-K", type=int, default=40)
    m.add_argument("--format", choices=("csv", "json"), default="csv")
    m.add_argument("--out")

    s = sub.add_parser("simulate", help="write a sample batch")
    s.add_argument("--kind", choices=("w", "w1", "yule", "vt", "selfdecomp", "tilted"),
                   default="w")
    s.add_argument("--samples", type=int, default=10000)
    s.add_argument("--alpha", type=float, default=1.0)
    s.add_argument("--generations", type=int, default=12)
    s.add_argument("--trunc-T", type=float, default=25.0)
    s.add_argument("--prune-eps", type=float, default=1e-3)
    s.add_argument("--seed", type=int, default=42)
    s.add_argument("--theta", type=float, default=1.0)
    s.add_argument("--t-slice", type=float, default=2.0)
    s.add_argument("--s", type=float, default=1.0, help="self-decomposition shift")
    s.add_argument("--tilt-c", type=float, default=2.0)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--out")

    v = sub.add_parser("verify", help="run the verification suite")
    v.add_argument("--samples", type=int, default=10**6,
                   help="size of the shared terminal-value batch")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--slow-suite", action="store_true",
                   help="include the N=1e7 left-tail check")
    v.add_argument("--out")

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    ns = vars(args)
    command = ns.pop("command")
    base = {k: ns.pop(k) for k in
            ("alpha", "samples", "generations", "seed", "slow_suite") if k in ns}
    base["trunc_T"] = ns.pop("trunc_T", 25.0)
    base["prune_eps"] = ns.pop("prune_eps", 1e-3)
    base["out_format"] = ns.pop("format", "csv")
    base["out_path"] = ns.pop("out", None)
    cfg = RunConfig(command=command, extra={k: v for k, v in ns.items() if v is not None},
                    **base)
    handler = {
        "constants": cmd_constants,
        "mgf": cmd_mgf,
        "laplace": cmd_laplace,
        "moments": cmd_moments,
        "simulate": cmd_simulate,
        "verify": cmd_verify,
    }[command]
    return handler(cfg)


if __name__ == "__main__":
    sys.exit(main())
