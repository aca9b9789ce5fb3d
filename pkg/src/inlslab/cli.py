"""Command-line front end: ``inlslab <subcommand> [--config F] [--out D] [--jobs N] [--seed S]``.

Every subcommand writes CSV tables, an SVG plot and appends a record to
``manifest.jsonl`` in the output directory. Exit status is 0 on success and
1 on an invalid configuration, a numerical precondition failure or a failed
``verify`` criterion.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .config import ConfigError, load_config
from .inls import PicardDivergence

SUBCOMMANDS = ("region", "decay", "homog", "inhomog", "necessity", "solve", "picard", "appendix", "verify")


class RunFailure(Exception):
    """A subcommand finished but reported a failed check."""


def _map(fn: Callable, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


class Run:
    """Collects outputs and verdicts of one invocation."""

    def __init__(self, out: Path):
        self.out = out
        self.outputs: list[str] = []
        self.verdicts: list[dict] = []

    def csv(self, name: str, rows: list[dict]) -> None:
        from .report import write_csv
        self.outputs.append(str(write_csv(self.out / name, rows)))

    def svg(self, name: str, text: str) -> None:
        from .report import atomic_write
        self.outputs.append(str(atomic_write(self.out / name, text.encode())))


# --- subcommands ----------------------------------------------------------------------------------

def cmd_region(cfg: dict, run: Run, args) -> None:
    from .exponents import ExponentConfig, inhomogeneous_admissible, necessary_conditions, region_polygon
    from .report import polygon_svg
    r = cfg["region"]
    reg = region_polygon(r["gamma"], r["gamma_t"], r["sigma"])
    rows = []
    for piece in reg.pieces():
        for i, v in enumerate(piece.vertices):
            c = reg.config_at(v)
            rows.append({"piece": piece.branch, "index": i, "inv_r": v[0], "inv_rt": v[1],
                         "inv_q": c.inv_q, "inv_qt": c.inv_qt})
    run.csv("region.csv", rows)
    run.svg("region.svg", polygon_svg({p.branch: p.vertices for p in reg.pieces()},
                                      f"region gamma={r['gamma']} gamma~={r['gamma_t']} sigma={r['sigma']}"))
    e = cfg["exponents"]
    tup = ExponentConfig(e["inv_q"], e["inv_r"], e["inv_qt"], e["inv_rt"], e["gamma"], e["gamma_t"])
    mrows = []
    for test, m in (("admissible", inhomogeneous_admissible(tup)), ("necessary", necessary_conditions(tup))):
        mrows += [{"test": test, "status": m.status.value, "condition": c.name, "relation": c.relation.value,
                   "lhs": c.lhs, "rhs": c.rhs, "verdict": c.verdict.value} for c in m.conditions]
    run.csv("membership.csv", mrows)


def _decay_job(item):
    from .dispersive import decay_rate_fit
    from .fields import gaussian
    args, times = item
    return decay_rate_fit(gaussian(1), *args, times=times)


def cmd_decay(cfg: dict, run: Run, args) -> None:
    from .report import loglog_svg
    d = cfg["decay"]
    times = np.geomspace(d["t_min"], d["t_max"], d["points"])
    exps = _map(_decay_job, [(tuple(s), times) for s in d["sets"]], args.jobs)
    rows = []
    for e in exps:
        rows += [{"q": e.q, "p_prime": e.p_prime, "gamma": e.gamma, "gamma_t": e.gamma_t, **r} for r in e.rows()]
    run.csv("decay.csv", rows)
    labels = [f"q={e.q} p'={e.p_prime} g={e.gamma} g~={e.gamma_t}" for e in exps]
    fits = []
    for lab, e in zip(labels, exps):
        b = np.mean(np.log(e.norms) - e.fitted_slope * np.log(e.times))
        fits.append((lab, e.fitted_slope, float(b)))
    run.svg("decay.svg", loglog_svg([(lab, e.times, e.norms) for lab, e in zip(labels, exps)], fits,
                                    "weighted decay", "t", "norm"))


def _ratio_outputs(run: Run, name: str, r) -> None:
    from .report import loglog_svg
    rows = [{"window": w, "lhs": l, "rhs": r.rhs, "ratio": l / r.rhs} for w, l in zip(r.windows, r.lhs)]
    run.csv(f"{name}.csv", rows)
    run.svg(f"{name}.svg", loglog_svg([("ratio", r.windows, r.ratios)], (), f"{name} Strichartz ratio",
                                      "T", "ratio"))


def cmd_homog(cfg: dict, run: Run, args) -> None:
    from .dispersive import homogeneous_strichartz_ratio
    from .fields import gaussian
    h = cfg["homog"]
    r = homogeneous_strichartz_ratio(gaussian(1), h["inv_q"], h["inv_r"], h["gamma"], h["sigma"],
                                     tuple(h["windows"]))
    _ratio_outputs(run, "homog", r)


def cmd_inhomog(cfg: dict, run: Run, args) -> None:
    from .dispersive import default_forcing, inhomogeneous_strichartz_ratio
    from .exponents import wellposedness_exponents
    h = cfg["inhomog"]
    wp = wellposedness_exponents(h["alpha"], h["delta"], h["gamma0"])
    r = inhomogeneous_strichartz_ratio(default_forcing(), wp.config, tuple(h["windows"]))
    _ratio_outputs(run, "inhomog", r)


def _n2_job(case):
    from .necessity import necessity_n2_scan
    return necessity_n2_scan(*case)


def _n5_job(item):
    from .exponents import ExponentConfig
    from .necessity import necessity_n5_scan
    six, radii = item
    return necessity_n5_scan(ExponentConfig(*six), R_list=radii)


def cmd_necessity(cfg: dict, run: Run, args) -> None:
    from .report import loglog_svg
    n = cfg["necessity"]
    n2 = _map(_n2_job, [tuple(c) for c in n["n2"]], args.jobs)
    n5 = _map(_n5_job, [(tuple(c), tuple(n["radii"])) for c in n["n5"]], args.jobs)
    rows = []
    for s in n2:
        rows += [{"inv_q": s.inv_q, "inv_r": s.inv_r, "gamma": s.gamma, **r} for r in s.rows()]
    run.csv("necessity_n2.csv", rows)
    rows = []
    for s in n5:
        c = s.cfg
        rows += [{"inv_q": c.inv_q, "inv_r": c.inv_r, "inv_qt": c.inv_qt, "inv_rt": c.inv_rt,
                  "gamma": c.gamma, "gamma_t": c.gamma_t, **r} for r in s.rows()]
    run.csv("necessity_n5.csv", rows)
    series = [(f"n2 {s.inv_q} {s.inv_r} {s.gamma}", s.N, s.lhs) for s in n2 if not s.divergent]
    series += [(f"n5 1/r~={s.cfg.inv_rt}", s.R, s.ratios) for s in n5]
    run.svg("necessity.svg", loglog_svg(series, (), "counterexample growth", "N or R", "size"))


def _solver_setup(sec: dict):
    from .inls import EquationParams
    return EquationParams(sec["alpha"], sec["lam"])


def cmd_solve(cfg: dict, run: Run, args) -> None:
    from .fields import save_field
    from .inls import SolverConfig, initial_gaussian, splitstep_evolve
    from .report import loglog_svg
    s = cfg["solve"]
    params = _solver_setup(s)
    sc = SolverConfig(s["box_length"], s["n"], s["dt"], s["final_time"], s["eta"], s["cadence"])
    tr = splitstep_evolve(initial_gaussian(sc), params, sc)
    rows = [{**r, "sup": float(np.max(np.abs(u.samples)))} for r, u in zip(tr.rows(), tr.snapshots)]
    run.csv("trajectory.csv", rows)
    path = run.out / "final.fld"
    save_field(path, tr.final)
    run.outputs.append(str(path))
    t = tr.times[1:]
    run.svg("trajectory.svg", loglog_svg([("sup |u|", t, [r["sup"] for r in rows[1:]])], (),
                                         "split-step solution", "t", "sup |u|"))
    run.verdicts.append({"check": "mass_drift", "value": tr.mass_drift()})


def cmd_picard(cfg: dict, run: Run, args) -> None:
    from .inls import SolverConfig, initial_gaussian, picard_iterate
    from .report import loglog_svg
    p = cfg["picard"]
    params = _solver_setup(p)
    sc = SolverConfig(p["box_length"], p["n"], p["dt"], p["interval"], p["eta"])
    res = picard_iterate(initial_gaussian(sc), params, p["interval"], p["iterations"], sc,
                         delta=p["delta"], gamma0=p["gamma0"])
    run.csv("picard.csv", res.rows())
    run.verdicts.append({"check": "free_evolution_norm", "value": res.free_norm})
    m = [t.m for t in res.traces]
    run.svg("picard.svg", loglog_svg([("d_m", m, [t.difference for t in res.traces])], (),
                                     "Picard differences", "m", "d_m"))


def cmd_appendix(cfg: dict, run: Run, args) -> None:
    from .exponents import appendix_interp_verify
    from .report import loglog_svg
    a = cfg["appendix"]
    n = a["thetas"]
    thetas = [Fraction(k, max(n - 1, 1)) for k in range(n)]
    rep = appendix_interp_verify(thetas, a["endpoints"], a["eps"], seed=args.seed)
    rows = [{"eps": rep.eps, "checked": rep.n_checked, "violations": len(rep.violations)}]
    run.csv("appendix.csv", rows)
    run.csv("appendix_violations.csv", [{"family": v.family, "stage": v.stage, "theta": v.theta,
                                         "branch": v.branch, "failed": " ".join(v.failed)}
                                        for v in rep.violations])
    counts = [sum(1 for v in rep.violations if v.theta == t) + 1 for t in thetas]
    run.svg("appendix.svg", loglog_svg([("violations + 1", [float(t) + 1 for t in thetas], counts)], (),
                                       "appendix sweep", "1 + theta", "1 + violations"))
    run.verdicts.append({"check": "appendix", "pass": rep.ok})
    if not rep.ok:
        raise RunFailure(f"{len(rep.violations)} appendix violations")


def cmd_verify(cfg: dict, run: Run, args) -> None:
    from .checks import check_determinism, run_checks
    from .report import csv_bytes, text_svg
    results = run_checks(set(cfg["verify"]["criteria"]), seed=args.seed)
    rendered = {}
    for r in results:
        data = csv_bytes(r.rows)
        rendered[r.name] = data
        run.csv(f"criterion_{r.number:02d}.csv", r.rows)
        print(r.line(), flush=True)
    det = check_determinism(rendered, lambda res: csv_bytes(res.rows), seed=args.seed)
    print(det.line(), flush=True)
    results.append(det)
    run.csv("verify.csv", [{"criterion": r.number, "name": r.name, "pass": r.passed} for r in results])
    run.svg("verify.svg", text_svg([r.line() for r in results], "acceptance criteria"))
    run.verdicts += [r.verdict_record() for r in results]
    failed = [r.number for r in results if not r.ok]
    if failed:
        raise RunFailure(f"criteria failed: {failed}")


COMMANDS = {name: globals()[f"cmd_{name}"] for name in SUBCOMMANDS}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="inlslab", description="Weighted Strichartz and INLS numerics.")
    p.add_argument("--version", action="version", version=f"inlslab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    helps = {
        "region": "exponent polygons and membership tables",
        "decay": "weighted dispersive decay fits",
        "homog": "homogeneous Strichartz ratio",
        "inhomog": "inhomogeneous Strichartz ratio",
        "necessity": "counterexample growth scans",
        "solve": "split-step solution",
        "picard": "Picard contraction traces",
        "appendix": "interpolation closure sweep",
        "verify": "full acceptance suite",
    }
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name, help=helps[name])
        sp.add_argument("--config", type=Path, default=None, help="TOML configuration file")
        sp.add_argument("--out", type=Path, default=Path("out"), help="output directory")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes for independent jobs")
        sp.add_argument("--seed", type=int, default=0, help="seed for random test points (0 <= seed < 2^64)")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if not 0 <= args.seed < 2 ** 64:
        print("error: --seed must lie in [0, 2^64)", file=sys.stderr)
        return 1
    if args.jobs < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return 1
    try:
        cfg, snapshot = load_config(args.config)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    from .report import append_manifest
    run = Run(args.out)
    status, message = 0, "ok"
    try:
        COMMANDS[args.command](cfg, run, args)
    except RunFailure as e:
        status, message = 1, str(e)
    except (ValueError, PicardDivergence) as e:
        status, message = 1, f"{type(e).__name__}: {e}"
    append_manifest(args.out, {
        "subcommand": args.command, "config": snapshot, "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "seed": args.seed, "jobs": args.jobs, "outputs": run.outputs, "verdicts": run.verdicts,
        "status": status, "message": message,
    })
    if status:
        print(f"error: {message}", file=sys.stderr)
    else:
        print(f"{args.command}: wrote {len(run.outputs)} files to {args.out}")
    return status


if __name__ == "__main__":
    sys.exit(main())
