"""Run configuration: typed sections in a flat key-value (INI) format with a
single canonical serialization.  Unknown sections or keys are errors, and a
parsed configuration round-trips to identical canonical text."""

from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from typing import List

from .errors import ConfigError

STATEMENTS = ("T1a", "T1b", "T2", "T3", "C1", "L1", "L2", "L3", "L4", "L5", "CMP")


@dataclass(frozen=True)
class Tolerances:
    """The centralized error budget.  Values follow the module defaults."""

    explicit_abs: float = 1e-6     # absolute slack for explicit-constant checks
    explicit_rel: float = 1e-3     # quadrature allowance, relative to the bound
    monotonicity: float = 1e-9     # monotone-suite violation threshold
    fit_floor: float = 1e-12       # bound floor below which fitting is excluded
    anomaly_lhs: float = 1e-9      # left side above this with zero bound is an anomaly
    halving_rel: float = 1e-9      # relative slack in halving comparisons
    oracle_gap: float = 0.02       # direct-vs-global agreement band
    cross_check: float = 1e-7      # coefficient-vs-kernel agreement


@dataclass(frozen=True)
class RunConfig:
    """Everything a verification campaign needs, in one place."""

    corpus: List[str] = field(default_factory=lambda: ["all"])
    statements: List[str] = field(default_factory=lambda: list(STATEMENTS))
    n_list: List[int] = field(default_factory=lambda: [4, 8, 16, 32, 64, 128])
    m_rules: List[Fraction] = field(default_factory=lambda: [
        Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1)])
    p_list: List[float] = field(default_factory=lambda: [1.0, 2.0, math.inf])
    x_count: int = 17
    samples: int = 4096
    out_dir: str = "reports"
    seed: int = 0  # reserved; no randomized component yet
    quiet: bool = False
    # per-check grids
    c1_points: List[float] = field(default_factory=lambda: [0.3, 0.5, -1.3, 2.4])
    c1_n_list: List[int] = field(default_factory=lambda: [8, 16, 32, 64, 128, 256, 512])
    l1_deltas: List[float] = field(default_factory=lambda: [
        math.pi, 15 * math.pi / 16, 7 * math.pi / 8])
    l1_x_count: int = 5
    l1_n_list: List[int] = field(default_factory=lambda: [0, 1, 2, 4, 8])
    l2_x_count: int = 3
    l2_n_max: int = 32
    l2_delta_count: int = 20
    cmp_x_count: int = 64
    cmp_delta_count: int = 20
    tolerances: Tolerances = field(default_factory=Tolerances)

    def m_values(self, n: int) -> List[int]:
        out = []
        for rule in self.m_rules:
            m = int(n * rule)
            if 0 <= m <= n and m not in out:
                out.append(m)
        return sorted(out)

    def validate(self) -> "RunConfig":
        if self.samples < 16 or self.samples & (self.samples - 1):
            raise ConfigError(f"samples must be a power of two >= 16, got {self.samples}")
        for s in self.statements:
            if s not in STATEMENTS:
                raise ConfigError(f"unknown statement id {s!r}; known: {', '.join(STATEMENTS)}")
        if any(n <= 0 for n in self.n_list):
            raise ConfigError("grid orders must be positive")
        if max(self.n_list, default=0) * 2 > self.samples // 4:
            raise ConfigError("largest grid order needs more samples (aliasing guard)")
        for p in self.p_list:
            if not (p == math.inf or p >= 1.0):
                raise ConfigError(f"exponents must be >= 1 or inf, got {p}")
        if self.x_count < 1 or self.cmp_x_count < 1 or self.l1_x_count < 1:
            raise ConfigError("point counts must be positive")
        return self


_SCHEMA = {
    "corpus": {"names"},
    "grid": {"n", "m_rule", "x_count", "p", "samples"},
    "statements": {"ids"},
    "output": {"directory", "seed", "quiet"},
    "c1": {"points", "n"},
    "l1": {"deltas", "x_count", "n"},
    "l2": {"x_count", "n_max", "delta_count"},
    "cmp": {"x_count", "delta_count"},
    "tolerances": {f.name for f in fields(Tolerances)},
}


def _format_float(v: float) -> str:
    if math.isinf(v):
        return "inf"
    return repr(float(v))


def _parse_float(text: str) -> float:
    t = text.strip().lower()
    if t in ("inf", "infinity"):
        return math.inf
    try:
        return float(t)
    except ValueError as exc:
        raise ConfigError(f"bad number {text!r}") from exc


def _parse_list(text: str, conv):
    items = [t.strip() for t in text.split(",") if t.strip()]
    return [conv(t) for t in items]


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad fraction {text!r}") from exc


def canonical_text(cfg: RunConfig) -> str:
    """The one canonical serialization (stable section and key order)."""
    t = cfg.tolerances
    out = io.StringIO()

    def section(name, pairs):
        out.write(f"[{name}]\n")
        for k, v in pairs:
            out.write(f"{k} = {v}\n")
        out.write("\n")

    section("corpus", [("names", ",".join(cfg.corpus))])
    section("grid", [
        ("n", ",".join(str(n) for n in cfg.n_list)),
        ("m_rule", ",".join(str(r) for r in cfg.m_rules)),
        ("x_count", cfg.x_count),
        ("p", ",".join(_format_float(p) for p in cfg.p_list)),
        ("samples", cfg.samples),
    ])
    section("statements", [("ids", ",".join(cfg.statements))])
    section("output", [("directory", cfg.out_dir), ("seed", cfg.seed),
                       ("quiet", str(cfg.quiet).lower())])
    section("c1", [("points", ",".join(_format_float(x) for x in cfg.c1_points)),
                   ("n", ",".join(str(n) for n in cfg.c1_n_list))])
    section("l1", [("deltas", ",".join(_format_float(d) for d in cfg.l1_deltas)),
                   ("x_count", cfg.l1_x_count),
                   ("n", ",".join(str(n) for n in cfg.l1_n_list))])
    section("l2", [("x_count", cfg.l2_x_count), ("n_max", cfg.l2_n_max),
                   ("delta_count", cfg.l2_delta_count)])
    section("cmp", [("x_count", cfg.cmp_x_count), ("delta_count", cfg.cmp_delta_count)])
    section("tolerances", [(f.name, _format_float(getattr(t, f.name)))
                           for f in fields(Tolerances)])
    return out.getvalue()


def parse_config(text: str) -> RunConfig:
    """Parse and validate configuration text; unknown keys are errors."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse failure: {exc}") from exc
    for sec in parser.sections():
        if sec not in _SCHEMA:
            raise ConfigError(f"unknown section [{sec}]")
        for key in parser[sec]:
            if key not in _SCHEMA[sec]:
                raise ConfigError(f"unknown key {key!r} in section [{sec}]")

    cfg = RunConfig()

    def get(sec, key, default=None):
        if parser.has_option(sec, key):
            return parser.get(sec, key)
        return default

    updates = {}
    if (v := get("corpus", "names")) is not None:
        updates["corpus"] = _parse_list(v, str)
    if (v := get("grid", "n")) is not None:
        updates["n_list"] = _parse_list(v, int)
    if (v := get("grid", "m_rule")) is not None:
        updates["m_rules"] = _parse_list(v, _parse_fraction)
    if (v := get("grid", "x_count")) is not None:
        updates["x_count"] = int(v)
    if (v := get("grid", "p")) is not None:
        updates["p_list"] = _parse_list(v, _parse_float)
    if (v := get("grid", "samples")) is not None:
        updates["samples"] = int(v)
    if (v := get("statements", "ids")) is not None:
        updates["statements"] = _parse_list(v, str)
    if (v := get("output", "directory")) is not None:
        updates["out_dir"] = v
    if (v := get("output", "seed")) is not None:
        updates["seed"] = int(v)
    if (v := get("output", "quiet")) is not None:
        updates["quiet"] = v.strip().lower() in ("1", "true", "yes", "on")
    if (v := get("c1", "points")) is not None:
        updates["c1_points"] = _parse_list(v, _parse_float)
    if (v := get("c1", "n")) is not None:
        updates["c1_n_list"] = _parse_list(v, int)
    if (v := get("l1", "deltas")) is not None:
        updates["l1_deltas"] = _parse_list(v, _parse_float)
    if (v := get("l1", "x_count")) is not None:
        updates["l1_x_count"] = int(v)
    if (v := get("l1", "n")) is not None:
        updates["l1_n_list"] = _parse_list(v, int)
    if (v := get("l2", "x_count")) is not None:
        updates["l2_x_count"] = int(v)
    if (v := get("l2", "n_max")) is not None:
        updates["l2_n_max"] = int(v)
    if (v := get("l2", "delta_count")) is not None:
        updates["l2_delta_count"] = int(v)
    if (v := get("cmp", "x_count")) is not None:
        updates["cmp_x_count"] = int(v)
    if (v := get("cmp", "delta_count")) is not None:
        updates["cmp_delta_count"] = int(v)
    tol_updates = {}
    for f in fields(Tolerances):
        if (v := get("tolerances", f.name)) is not None:
            tol_updates[f.name] = _parse_float(v)
    if tol_updates:
        updates["tolerances"] = replace(Tolerances(), **tol_updates)

    try:
        cfg = replace(cfg, **updates)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg.validate()


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
