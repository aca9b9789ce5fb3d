"""Time the compiled and pure-Python kernel backends on representative inputs.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5] [--scale 1.0]

Each kernel is run on identical inputs for every importable backend. The
script reports the best wall time, the speedup over the Python backend and
the maximum deviation between backend outputs.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from inlslab.exponents.sweep import random_configs
from inlslab.kernels import available_backends


def cases(scale: float, rng: np.random.Generator) -> dict:
    n = lambda k: max(1, int(k * scale))  # noqa: E731
    rows, denom = random_configs(n(1_000_000), 60, 0)
    m, p = n(4000), n(2000)
    amp = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    base, coef, pts = rng.uniform(0, 6, m), rng.uniform(-3, 3, m), np.linspace(0, 10, p)
    nodes = np.ascontiguousarray(rng.uniform(-1, 1, (n(3000), 3)))
    weights = rng.standard_normal(len(nodes)) + 0j
    targets = np.ascontiguousarray(rng.uniform(-20, 20, (n(500), 3)))
    g = n(64)
    u = (rng.standard_normal((g, g, g)) + 1j * rng.standard_normal((g, g, g))).reshape(-1)
    w = rng.uniform(0, 2, u.size)
    return {
        "classify_configs": (lambda b: b.classify_configs(rows, denom, 3), len(rows)),
        "expsum": (lambda b: b.expsum(amp, base, coef, pts), m * p),
        "kernel_sum": (lambda b: b.kernel_sum(nodes, weights, targets, 0.25), len(nodes) * len(targets)),
        "nonlinear_phase": (lambda b: _phase(b, u, w), u.size),
    }


def _phase(backend, u, w):
    out = u.copy()
    backend.nonlinear_phase(out, w, 1.0, 0.01)
    return out


def _deviation(a, b) -> float:
    if isinstance(a, tuple):
        return max(float(np.count_nonzero(np.asarray(x) != np.asarray(y))) for x, y in zip(a, b))
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--scale", type=float, default=1.0, help="multiplier on problem sizes")
    args = ap.parse_args(argv)

    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'kernel':<18}{'work':>12}" + "".join(f"{name + ' [ms]':>16}" for name in backends)
          + f"{'speedup':>10}{'max dev':>12}")
    for name, (fn, work) in cases(args.scale, np.random.default_rng(0)).items():
        times, outs = {}, {}
        for bname, mod in backends.items():
            outs[bname] = fn(mod)
            times[bname] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        speedup = times["python"] / times["cython"] if "cython" in times else float("nan")
        dev = _deviation(outs["python"], outs["cython"]) if "cython" in outs else float("nan")
        print(f"{name:<18}{work:>12}" + "".join(f"{1e3 * t:>16.2f}" for t in times.values())
              + f"{speedup:>10.2f}{dev:>12.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
