"""Run configuration: TOML sections validated field by field, rationals kept exact.

Rationals are written as ``"p/q"`` strings (integers are accepted too);
floats are rejected for rational fields so that no exponent passes through
binary floating point.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

__all__ = ["ConfigError", "DEFAULTS", "load_config", "validate_config"]


class ConfigError(ValueError):
    """Invalid configuration; ``errors`` lists ``section.field: message`` entries."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("invalid configuration:\n  " + "\n  ".join(self.errors))


class _Invalid(Exception):
    pass


def _rational(v) -> Fraction:
    if isinstance(v, bool) or isinstance(v, float):
        raise _Invalid(f"write rationals as 'p/q' strings, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            raise _Invalid(f"cannot parse {v!r} as a rational") from None
    raise _Invalid(f"expected a rational, got {type(v).__name__}")


def _unit(v) -> Fraction:
    x = _rational(v)
    if not 0 <= x <= 1:
        raise _Invalid(f"reciprocal {x} outside [0, 1]")
    return x


def _pos_float(v) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise _Invalid(f"expected a number, got {v!r}")
    if not v > 0:
        raise _Invalid(f"must be positive, got {v}")
    return float(v)


def _pos_int(v) -> int:
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise _Invalid(f"expected a positive integer, got {v!r}")
    return v


def _pow2(v) -> int:
    n = _pos_int(v)
    if n & (n - 1):
        raise _Invalid(f"must be a power of two, got {n}")
    return n


def _sign(v) -> int:
    if v not in (-1, 1) or isinstance(v, bool):
        raise _Invalid(f"must be +1 or -1, got {v!r}")
    return int(v)


def _list(item: Callable, length: int | None = None, min_len: int = 1) -> Callable:
    def parse(v):
        if not isinstance(v, list):
            raise _Invalid(f"expected a list, got {type(v).__name__}")
        if length is not None and len(v) != length:
            raise _Invalid(f"expected {length} entries, got {len(v)}")
        if len(v) < min_len:
            raise _Invalid(f"expected at least {min_len} entries")
        out = []
        for i, x in enumerate(v):
            try:
                out.append(item(x))
            except _Invalid as e:
                raise _Invalid(f"entry {i}: {e}") from None
        return out
    return parse


def _criteria(v):
    out = _list(_pos_int)(v)
    if any(c > 10 for c in out):
        raise _Invalid("criteria are numbered 1..10 (11 always runs)")
    return out


@dataclass(frozen=True)
class _Field:
    parse: Callable[[Any], Any]
    default: Any


SIX = _list(_unit, 6)

SCHEMA: dict[str, dict[str, _Field]] = {
    "exponents": {
        "inv_q": _Field(_unit, "3/8"), "inv_r": _Field(_unit, "8/15"), "inv_qt": _Field(_unit, "2/5"),
        "inv_rt": _Field(_unit, "3/20"), "gamma": _Field(_rational, "3/10"), "gamma_t": _Field(_rational, "3/10"),
    },
    "region": {"gamma": _Field(_rational, "3/10"), "gamma_t": _Field(_rational, "3/10"),
               "sigma": _Field(_rational, "0")},
    "decay": {
        "sets": _Field(_list(_list(_rational, 4)),
                       [["6", "6/5", "0", "0"], ["2", "2", "3/10", "3/10"], ["3", "3/2", "3/10", "3/10"]]),
        "t_min": _Field(_pos_float, 10.0), "t_max": _Field(_pos_float, 1000.0), "points": _Field(_pos_int, 9),
    },
    "homog": {
        "inv_q": _Field(_unit, "3/10"), "inv_r": _Field(_unit, "2/5"), "gamma": _Field(_rational, "3/10"),
        "sigma": _Field(_rational, "0"), "windows": _Field(_list(_pos_float), [10.0, 100.0, 1000.0]),
    },
    "inhomog": {
        "alpha": _Field(_rational, "3/2"), "delta": _Field(_rational, "1/100"), "gamma0": _Field(_rational, "1/4"),
        "windows": _Field(_list(_pos_float), [10.0, 100.0, 1000.0]),
    },
    "necessity": {
        "n2": _Field(_list(_list(_unit, 3)), [["2/5", "1/2", "3/10"], ["1/5", "1/2", "3/10"]]),
        "n5": _Field(_list(SIX), [["3/8", "8/15", "2/5", "3/20", "3/10", "3/10"],
                                  ["3/8", "8/15", "2/5", "1/5", "3/10", "3/10"]]),
        "radii": _Field(_list(_pos_float, min_len=3), [32.0, 64.0, 128.0]),
    },
    "solve": {
        "alpha": _Field(_rational, "3/2"), "lam": _Field(_sign, 1), "box_length": _Field(_pos_float, 16.0),
        "n": _Field(_pow2, 64), "dt": _Field(_pos_float, 0.01), "final_time": _Field(_pos_float, 1.0),
        "eta": _Field(_pos_float, 0.01), "cadence": _Field(_pos_int, 10),
    },
    "picard": {
        "alpha": _Field(_rational, "3/2"), "lam": _Field(_sign, 1), "box_length": _Field(_pos_float, 10.0),
        "n": _Field(_pow2, 32), "dt": _Field(_pos_float, 0.015625), "interval": _Field(_pos_float, 0.5),
        "eta": _Field(_pos_float, 0.01), "iterations": _Field(_pos_int, 5),
        "delta": _Field(_rational, "1/100"), "gamma0": _Field(_rational, "1/4"),
    },
    "appendix": {"thetas": _Field(_pos_int, 100), "endpoints": _Field(_pos_int, 50),
                 "eps": _Field(_rational, "1/100")},
    "verify": {"criteria": _Field(_criteria, list(range(1, 11)))},
}

DEFAULTS = {sec: {k: f.default for k, f in fields.items()} for sec, fields in SCHEMA.items()}


def _snapshot(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, list):
        return [_snapshot(x) for x in v]
    return v


def validate_config(raw: dict) -> tuple[dict, dict]:
    """Validate a raw mapping against the schema.

    Returns:
        ``(parsed, snapshot)``: parsed values (rationals as ``Fraction``) and
        a normalized plain-data copy that re-validates to the same result.

    Raises:
        ConfigError: unknown sections or fields, or values that fail to parse.
    """
    errors = []
    parsed: dict[str, dict] = {}
    for sec in raw:
        if sec not in SCHEMA:
            errors.append(f"{sec}: unknown section")
        elif not isinstance(raw[sec], dict):
            errors.append(f"{sec}: expected a table")
    for sec, fields in SCHEMA.items():
        given = raw.get(sec, {}) if isinstance(raw.get(sec, {}), dict) else {}
        for key in given:
            if key not in fields:
                errors.append(f"{sec}.{key}: unknown field")
        out = {}
        for key, f in fields.items():
            try:
                out[key] = f.parse(given.get(key, f.default))
            except _Invalid as e:
                errors.append(f"{sec}.{key}: {e}")
        parsed[sec] = out
    if errors:
        raise ConfigError(errors)
    snapshot = {sec: {k: _snapshot(v) for k, v in vals.items()} for sec, vals in parsed.items()}
    return parsed, snapshot


def load_config(path: str | Path | None) -> tuple[dict, dict]:
    """Read and validate a TOML file; ``None`` gives the defaults."""
    if path is None:
        return validate_config({})
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError([f"{path}: {e}"]) from None
    except OSError as e:
        raise ConfigError([f"{path}: {e.strerror}"]) from None
    return validate_config(raw)
