"""The acceptance criteria of the build, each as a self-contained check.

Every check returns a :class:`CheckResult` carrying a verdict, a one-line
summary, the elapsed time against its budget and the table rows written by
``inlslab verify``. Tolerances are fixed here; a failing check reports the
measured numbers instead of raising.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .dispersive import decay_rate_fit
from .exponents import (
    ExponentConfig, appendix_interp_verify, feasible_parameters, implication_sweep, inhomogeneous_admissible,
    perturb_exponents, wellposedness_exponents,
)
from .exponents.sweep import decode, random_configs
from .fields import gaussian
from .inls import (
    EquationParams, SolverConfig, hdot1_norm, initial_gaussian, picard_iterate, rescale_solution,
    splitstep_evolve,
)
from .necessity import (
    annulus_plateau_slope, chirped_lower_constant, critical_point_chirp, chirped_phase_problem,
    necessity_n2_scan, necessity_n5_scan, remainder_slope,
)

F = Fraction

DECAY_SETS = ((6, F(6, 5), 0, 0), (2, 2, F(3, 10), F(3, 10)), (3, F(3, 2), F(3, 10), F(3, 10)))
N2_CASES = ((F(2, 5), F(1, 2), F(3, 10)), (F(1, 5), F(1, 2), F(3, 10)))
N5_CASES = (ExponentConfig(F(3, 8), F(8, 15), F(2, 5), F(3, 20), F(3, 10), F(3, 10)),
            ExponentConfig(F(3, 8), F(8, 15), F(2, 5), F(1, 5), F(3, 10), F(3, 10)))
WP_ALPHAS = (F(3, 2), F(8, 5), F(17, 10), F(9, 5), F(11, 6) - F(1, 100))


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    summary: str
    elapsed: float
    budget: float
    rows: list[dict] = field(default_factory=list)

    @property
    def within_budget(self) -> bool:
        return self.elapsed <= self.budget

    @property
    def ok(self) -> bool:
        return self.passed and self.within_budget

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        budget = "" if self.within_budget else f" (over budget {self.budget:.0f} s)"
        return f"[{verdict}] {self.number:2d} {self.name}: {self.summary} [{self.elapsed:.1f} s]{budget}"

    def verdict_record(self) -> dict:
        return {"criterion": self.number, "name": self.name, "pass": self.ok, "summary": self.summary}


def _timed(number: int, name: str, budget: float):
    def wrap(fn: Callable[..., tuple[bool, str, list[dict]]]):
        def run(**kw) -> CheckResult:
            t0 = time.perf_counter()
            ok, summary, rows = fn(**kw)
            return CheckResult(number, name, bool(ok), summary, time.perf_counter() - t0, budget, rows)
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        run.number = number
        run.takes_seed = "seed" in fn.__code__.co_varnames[:fn.__code__.co_argcount + fn.__code__.co_kwonlyargcount]
        return run
    return wrap


@_timed(1, "exponent implication sweep", 30)
def check_sweep(seed: int = 0, n_configs: int = 100_000):
    """Admissible implies necessary on random rational tuples, with an exact re-check."""
    rep = implication_sweep(n_configs, seed=seed)
    ok = rep.ok and rep.n_configs >= 100_000
    rows = [{"n_configs": rep.n_configs, "n_admissible": rep.n_admissible, "n_necessary": rep.n_necessary,
             "counterexamples": len(rep.counterexamples), "crosscheck": rep.crosscheck_size,
             "mismatches": len(rep.crosscheck_mismatches)}]
    return ok, (f"{rep.n_configs} configs, {rep.n_admissible} admissible, "
                f"{len(rep.counterexamples)} counterexamples"), rows


@_timed(2, "perturbation bookkeeping", 1)
def check_perturbation(seed: int = 0, count: int = 100):
    """Betas of the three perturbed tuples are exactly (2, -1, -1)/100."""
    eps0 = F(1, 100)
    want = (F(2, 100), F(-1, 100), F(-1, 100))
    rows_arr, D = random_configs(4 * count, seed=seed)
    rows, bad = [], 0
    for row in rows_arr:
        cfg = decode(row, D)
        try:
            p = perturb_exponents(cfg, eps0)
        except ValueError:
            continue
        bad += p.betas != want
        rows.append({"config": " ".join(str(v) for v in (cfg.inv_q, cfg.inv_r, cfg.inv_qt, cfg.inv_rt,
                                                         cfg.gamma, cfg.gamma_t)),
                     "betas": " ".join(str(b) for b in p.betas)})
        if len(rows) == count:
            break
    ok = len(rows) == count and bad == 0
    return ok, f"{len(rows)} configs, {bad} with betas != (1/50, -1/100, -1/100)", rows


@_timed(3, "well-posedness exponents", 5)
def check_wellposedness():
    """Derived tuple is admissible on the lower branch; feasible sets are nonempty."""
    wp = wellposedness_exponents(F(3, 2), F(1, 100), F(1, 4), F(1, 2))
    m = inhomogeneous_admissible(wp.config)
    lower = m.member and m.branch == "lower" and all(
        m.condition(c).verdict.value == "holds" for c in ("main_cond_31", "main_cond_32"))
    counts = {a: len(feasible_parameters(a)) for a in WP_ALPHAS}
    rows = [{"alpha": str(a), "feasible": n} for a, n in counts.items()]
    ok = lower and wp.admissibility.member and all(counts.values())
    return ok, (f"1/q0={wp.inv_q0}, 1/r0={wp.inv_r0}, branch {m.branch}; "
                f"feasible counts {list(counts.values())}"), rows


@_timed(4, "appendix closure", 10)
def check_appendix(seed: int = 0):
    """Interpolated endpoint chains stay inside the localized region."""
    thetas = [F(k, 99) for k in range(100)]
    rep = appendix_interp_verify(thetas, n_endpoints=50, seed=seed)
    rows = [{"family": v.family, "stage": v.stage, "theta": str(v.theta), "failed": " ".join(v.failed)}
            for v in rep.violations]
    return rep.ok, f"{rep.n_checked} interpolants, {len(rep.violations)} violations", rows


def _decay_rows(e) -> list[dict]:
    return [{"q": str(e.q), "p_prime": str(e.p_prime), "gamma": str(e.gamma), "gamma_t": str(e.gamma_t), **r}
            for r in e.rows()]


@_timed(5, "weighted decay fits", 30)
def check_decay():
    """Fitted decay slopes of a Gaussian within 0.02 of the predicted exponent."""
    errs, rows = [], []
    for args in DECAY_SETS:
        e = decay_rate_fit(gaussian(1), *args)
        errs.append(e.slope_error)
        rows += _decay_rows(e)
    return max(errs) <= 0.02, "slope errors " + ", ".join(f"{x:.4f}" for x in errs), rows


@_timed(6, "classical decay limit", 10)
def check_classical():
    """Unweighted q = 6 slope equals -1."""
    e = decay_rate_fit(gaussian(1), 6, F(6, 5), 0, 0)
    return abs(e.fitted_slope + 1) <= 0.02, f"slope {e.fitted_slope:.4f}", _decay_rows(e)


@_timed(7, "annulus counterexample", 120)
def check_annulus():
    """Plateau decays like t^{-3/2}; n2 scans reproduce the predicted exponents."""
    slope = annulus_plateau_slope()
    rows = [{"kind": "plateau", "case": "", "fitted": slope, "predicted": -1.5}]
    ok = abs(slope + 1.5) <= 0.05
    parts = [f"plateau {slope:.4f}"]
    for iq, ir, g in N2_CASES:
        s = necessity_n2_scan(iq, ir, g)
        ok &= abs(s.fitted_exponent - float(s.predicted_exponent)) <= 0.03
        rows.append({"kind": "n2", "case": f"{iq} {ir} {g}", "fitted": s.fitted_exponent,
                     "predicted": float(s.predicted_exponent)})
        parts.append(f"n2 {s.fitted_exponent:.4f} vs {s.predicted_exponent}")
    return ok, "; ".join(parts), rows


@_timed(8, "chirped-ball counterexample", 300)
def check_chirped():
    """Lower constant within a factor 4 of 1/8 and n5 growth exponents within 0.05."""
    rows = []
    const_ok = True
    consts = []
    for R in (8, 16, 32):
        c = chirped_lower_constant(R)
        consts.append(c)
        const_ok &= 1 / 32 <= c <= 1 / 2
        rows.append({"kind": "constant", "case": f"R={R}", "fitted": c, "predicted": 0.125})
    fit_ok = True
    fits = []
    for cfg in N5_CASES:
        s = necessity_n5_scan(cfg)
        fits.append((s.fitted_exponent, s.predicted_exponent))
        fit_ok &= abs(s.fitted_exponent - float(s.predicted_exponent)) <= 0.05
        rows.append({"kind": "n5", "case": f"1/rt={cfg.inv_rt}", "fitted": s.fitted_exponent,
                     "predicted": float(s.predicted_exponent)})
    summary = ("c = " + ", ".join(f"{c:.5f}" for c in consts) + " (band [1/32, 1/2]"
               + (")" if const_ok else ", outside)") + "; n5 "
               + ", ".join(f"{a:.4f} vs {b}" for a, b in fits))
    return const_ok and fit_ok, summary, rows


@_timed(9, "stationary phase", 30)
def check_stationary_phase():
    """Remainder slope at most -0.9 with bounded N * remainder; critical point location."""
    Ns = (16, 32, 64, 128, 256, 512, 1024)
    slope, n_rem = remainder_slope(chirped_phase_problem(4.0, 1.0), Ns)
    s = critical_point_chirp(4.0, 1.0)
    s_ok = abs(s - 0.01575) <= 1e-4 and 1 / 100 <= s <= 1 / 9
    rows = [{"N": n, "N_remainder": float(v), "slope": slope} for n, v in zip(Ns, n_rem)]
    # N * remainder stays bounded exactly when the remainder slope is at most -1 (up to the tolerance)
    ok = slope <= -0.9 and s_ok
    return ok, (f"slope {slope:.4f}, N*rem {n_rem[0]:.3f}..{np.max(n_rem):.3f}, "
                f"s* {s:.8f}"), rows


@_timed(10, "solver", 180)
def check_solver():
    """Mass drift at N = 128, Picard contraction, and scaling invariance of the energy norm."""
    p = EquationParams()
    big = SolverConfig(box_length=32, n=128, dt=1 / 100, final_time=1.0, eta=1 / 100, cadence=100)
    drift = splitstep_evolve(initial_gaussian(big), p, big).mass_drift()
    small = SolverConfig(box_length=10, n=32, dt=1 / 64, final_time=0.5, eta=1 / 100, cadence=8)
    pic = picard_iterate(initial_gaussian(small), p, 0.5, 5, small)
    ratios = pic.ratios
    tr = splitstep_evolve(initial_gaussian(small), p, small)
    inv = max(abs(hdot1_norm(b) / hdot1_norm(a) - 1)
              for d in (0.5, 2.0) for a, b in zip(tr.snapshots, rescale_solution(tr, d).snapshots))
    rows = [{"quantity": "mass_drift", "value": drift}]
    rows += [{"quantity": f"picard_ratio_{m + 2}", "value": r} for m, r in enumerate(ratios)]
    rows.append({"quantity": "hdot1_invariance", "value": inv})
    ok = drift <= 1e-9 and len(ratios) >= 4 and max(ratios) <= 0.1 and inv <= 1e-6
    return ok, (f"mass drift {drift:.1e}, Picard ratios max {max(ratios):.2e}, "
                f"H1 invariance {inv:.1e}"), rows


CHECKS = (check_sweep, check_perturbation, check_wellposedness, check_appendix, check_decay,
          check_classical, check_annulus, check_chirped, check_stationary_phase, check_solver)

# cheap checks re-run by the determinism criterion
REPEATABLE = (check_perturbation, check_wellposedness, check_classical)


def run_checks(numbers=None, seed: int = 0) -> list[CheckResult]:
    """Run criteria 1-10 (or the selected numbers) in order."""
    out = []
    for fn in CHECKS:
        if numbers is not None and fn.number not in numbers:
            continue
        kw = {"seed": seed} if fn.takes_seed else {}
        out.append(fn(**kw))
    return out


def check_determinism(first: dict[str, bytes], render: Callable[[CheckResult], bytes], seed: int = 0) -> CheckResult:
    """Re-run the cheap criteria and compare their CSV bytes with the first run.

    Args:
        first: CSV bytes of the first run keyed by check name.
        render: serializer used for the first run.
    """
    t0 = time.perf_counter()
    compared, differ = 0, []
    for fn in REPEATABLE:
        res = fn(**({"seed": seed} if fn.takes_seed else {}))
        if res.name not in first:
            continue
        compared += 1
        if render(res) != first[res.name]:
            differ.append(res.name)
    elapsed = time.perf_counter() - t0
    ok = compared > 0 and not differ
    summary = f"{compared} CSVs compared, {len(differ)} differ" + (f" ({', '.join(differ)})" if differ else "")
    return CheckResult(11, "determinism", ok, summary, elapsed, 1.0, [])
