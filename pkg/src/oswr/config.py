"""INI experiment configuration: parsing, defaulting and validation.

A config file has sections [problem], [grid], [decomposition], [iteration],
[diagnostics], [sweep] and [output].  Unknown sections or keys are rejected
so typos fail loudly; missing keys fall back to documented defaults
(gamma = 5/(beta-alpha), zero initial guess, p = 1, ...).
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .decomposition import DecompositionSpec
from .engine import InitialGuess, SWRConfig
from .errors import ParseError, ValidationError
from .problem import (PRESET_NAMES, DomainSpec, ParabolicProblem,
                      problem_from_table, problem_preset)
from .subdomain import RobinParameter

_SCHEMA = {
    "problem": ("preset", "table", "n", "alpha", "beta", "T",
                "cross_lo", "cross_hi"),
    "grid": ("nx_axis", "nt", "nx_cross"),
    "decomposition": ("count", "overlap", "a_list", "b_list"),
    "iteration": ("p", "orientation", "max_iters", "stop_tol", "guess",
                  "guess_value", "seed", "workers", "record_timing"),
    "diagnostics": ("gamma", "theta", "gamma_max"),
    "sweep": ("p_values", "overlap_values"),
    "output": ("directory",),
}


@dataclass
class ExperimentConfig:
    """Fully resolved experiment description (defaults already applied)."""

    preset: Optional[str] = "heat1d"
    table: Optional[str] = None
    n: int = 1
    alpha: float = 0.0
    beta: float = 1.0
    T: float = 1.0
    cross: Tuple[float, float] = (0.0, 1.0)
    nx_axis: int = 101
    nt: int = 50
    nx_cross: Optional[int] = None
    count: int = 2
    overlap: float = 0.2
    a_list: Optional[List[float]] = None
    b_list: Optional[List[float]] = None
    p: float = 1.0
    orientation: str = "outward"
    max_iters: int = 60
    stop_tol: float = 1e-20
    guess: str = "zero"
    guess_value: float = 0.0
    seed: int = 0
    workers: int = 1
    record_timing: bool = False
    gamma: Optional[float] = None  # None -> 5/(beta-alpha)
    theta: float = 0.0
    gamma_max: float = 0.99
    p_values: Optional[List[float]] = None
    overlap_values: Optional[List[float]] = None
    directory: str = "out"
    source_path: Optional[str] = None

    def resolved_gamma(self) -> float:
        if self.gamma is not None:
            return self.gamma
        return 5.0 / (self.beta - self.alpha)

    def build_problem(self) -> ParabolicProblem:
        if self.table is not None:
            domain = DomainSpec(n=self.n, alpha=self.alpha, beta=self.beta,
                                T=self.T,
                                cross=self.cross if self.n == 2 else None)
            return problem_from_table(self.table, domain)
        return problem_preset(self.preset, alpha=self.alpha, beta=self.beta,
                              T=self.T,
                              cross=self.cross if self.n == 2 else None)

    def decomposition_spec(self, domain, overlap: Optional[float] = None
                           ) -> DecompositionSpec:
        if self.a_list is not None:
            return DecompositionSpec(count=len(self.a_list),
                                     a=tuple(self.a_list),
                                     b=tuple(self.b_list))
        return DecompositionSpec.uniform(
            domain, self.count, overlap if overlap is not None else self.overlap)

    def swr_config(self, p: Optional[float] = None) -> SWRConfig:
        guess = InitialGuess(kind=self.guess, value=self.guess_value,
                             seed=self.seed)
        robin = RobinParameter(p if p is not None else self.p,
                               orientation=self.orientation)
        return SWRConfig(p=robin, max_iters=self.max_iters,
                         stop_tol=self.stop_tol, guess=guess,
                         workers=self.workers, gamma=self.resolved_gamma(),
                         theta=self.theta, record_timing=self.record_timing)

    def scheduled_runs(self, sweep: bool) -> List[Tuple[float, float]]:
        """(p, overlap) pairs: one for `run`, a Cartesian grid for `sweep`."""
        if not sweep:
            return [(self.p, self.overlap)]
        ps = self.p_values if self.p_values else [self.p]
        ovs = self.overlap_values if self.overlap_values else [self.overlap]
        return [(p, ov) for p in ps for ov in ovs]

    def as_items(self) -> List[Tuple[str, str]]:
        pairs = []
        for key in ("preset", "table", "n", "alpha", "beta", "T", "cross",
                    "nx_axis", "nt", "nx_cross", "count", "overlap", "a_list",
                    "b_list", "p", "orientation", "max_iters", "stop_tol",
                    "guess", "guess_value", "seed", "workers", "record_timing",
                    "theta", "gamma_max", "p_values", "overlap_values",
                    "directory"):
            pairs.append((key, repr(getattr(self, key))))
        pairs.append(("gamma", repr(self.resolved_gamma())))
        return pairs


def _float_list(raw: str, name: str) -> List[float]:
    items = [s.strip() for s in raw.replace(";", ",").split(",") if s.strip()]
    if not items:
        raise ValidationError(f"{name} must be a nonempty list of numbers")
    try:
        return [float(s) for s in items]
    except ValueError:
        raise ValidationError(f"{name} must be a comma-separated list of numbers")


def _get(parser, section, key, cast, default, name=None):
    name = name or f"[{section}] {key}"
    if not parser.has_option(section, key):
        return default
    raw = parser.get(section, key).strip()
    try:
        if cast is bool:
            low = raw.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        return cast(raw)
    except ValueError:
        raise ValidationError(f"{name} has invalid value {raw!r}")


def load_config(path: str) -> ExperimentConfig:
    """Parse an INI config, apply defaults, and validate every field."""
    if not os.path.exists(path):
        raise ValidationError(f"config file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path) as fh:
            parser.read_file(fh, source=path)
    except configparser.ParsingError as exc:
        lineno = exc.errors[0][0] if exc.errors else "?"
        raise ParseError(f"{path}: malformed line {lineno}") from exc
    except configparser.MissingSectionHeaderError as exc:
        raise ParseError(f"{path}: missing section header at line {exc.lineno}") from exc
    except configparser.Error as exc:
        raise ParseError(f"{path}: {exc}") from exc

    for section in parser.sections():
        if section not in _SCHEMA:
            raise ValidationError(f"unknown section [{section}]")
        for key in parser.options(section):
            if key not in _SCHEMA[section]:
                raise ValidationError(f"unknown key '{key}' in section [{section}]")

    cfg = ExperimentConfig(source_path=path)
    cfg.preset = _get(parser, "problem", "preset", str, cfg.preset)
    cfg.table = _get(parser, "problem", "table", str, None)
    cfg.n = _get(parser, "problem", "n", int, cfg.n)
    cfg.alpha = _get(parser, "problem", "alpha", float, cfg.alpha)
    cfg.beta = _get(parser, "problem", "beta", float, cfg.beta)
    cfg.T = _get(parser, "problem", "T", float, cfg.T)
    lo = _get(parser, "problem", "cross_lo", float, cfg.cross[0])
    hi = _get(parser, "problem", "cross_hi", float, cfg.cross[1])
    cfg.cross = (lo, hi)
    cfg.nx_axis = _get(parser, "grid", "nx_axis", int, cfg.nx_axis)
    cfg.nt = _get(parser, "grid", "nt", int, cfg.nt)
    cfg.nx_cross = _get(parser, "grid", "nx_cross", int, None)
    cfg.count = _get(parser, "decomposition", "count", int, cfg.count)
    cfg.overlap = _get(parser, "decomposition", "overlap", float, cfg.overlap)
    if parser.has_option("decomposition", "a_list"):
        cfg.a_list = _float_list(parser.get("decomposition", "a_list"), "a_list")
    if parser.has_option("decomposition", "b_list"):
        cfg.b_list = _float_list(parser.get("decomposition", "b_list"), "b_list")
    cfg.p = _get(parser, "iteration", "p", float, cfg.p)
    cfg.orientation = _get(parser, "iteration", "orientation", str, cfg.orientation)
    cfg.max_iters = _get(parser, "iteration", "max_iters", int, cfg.max_iters)
    cfg.stop_tol = _get(parser, "iteration", "stop_tol", float, cfg.stop_tol)
    cfg.guess = _get(parser, "iteration", "guess", str, cfg.guess)
    cfg.guess_value = _get(parser, "iteration", "guess_value", float, cfg.guess_value)
    cfg.seed = _get(parser, "iteration", "seed", int, cfg.seed)
    cfg.workers = _get(parser, "iteration", "workers", int, cfg.workers)
    cfg.record_timing = _get(parser, "iteration", "record_timing", bool,
                             cfg.record_timing)
    cfg.gamma = _get(parser, "diagnostics", "gamma", float, None)
    cfg.theta = _get(parser, "diagnostics", "theta", float, cfg.theta)
    cfg.gamma_max = _get(parser, "diagnostics", "gamma_max", float, cfg.gamma_max)
    if parser.has_option("sweep", "p_values"):
        cfg.p_values = _float_list(parser.get("sweep", "p_values"), "p_values")
    if parser.has_option("sweep", "overlap_values"):
        cfg.overlap_values = _float_list(parser.get("sweep", "overlap_values"),
                                         "overlap_values")
    cfg.directory = _get(parser, "output", "directory", str, cfg.directory)
    validate_config(cfg)
    return cfg


def validate_config(cfg: ExperimentConfig) -> None:
    if cfg.table is None:
        if cfg.preset not in PRESET_NAMES:
            raise ValidationError(
                f"preset must be one of {sorted(PRESET_NAMES)}, got {cfg.preset!r}")
        preset_n = 2 if cfg.preset.endswith("2d") else 1
        if cfg.n != preset_n:
            raise ValidationError(
                f"preset {cfg.preset!r} is {preset_n}-dimensional; set n = {preset_n}")
    elif not os.path.exists(cfg.table):
        raise ValidationError(f"coefficient table not found: {cfg.table}")
    if cfg.n not in (1, 2):
        raise ValidationError("n must be 1 or 2")
    if not cfg.beta > cfg.alpha:
        raise ValidationError("beta must exceed alpha")
    if not cfg.T > 0:
        raise ValidationError("T must be positive")
    if cfg.n == 2 and not cfg.cross[1] > cfg.cross[0]:
        raise ValidationError("cross_hi must exceed cross_lo")
    if cfg.nx_axis < 3:
        raise ValidationError("nx_axis must be at least 3")
    if cfg.nt < 1:
        raise ValidationError("nt must be at least 1")
    if cfg.nx_cross is not None and cfg.nx_cross < 3:
        raise ValidationError("nx_cross must be at least 3")
    if (cfg.a_list is None) != (cfg.b_list is None):
        raise ValidationError("a_list and b_list must be given together")
    if cfg.a_list is not None and len(cfg.a_list) != len(cfg.b_list):
        raise ValidationError("a_list and b_list must have equal length")
    if cfg.a_list is None:
        if cfg.count < 1:
            raise ValidationError("count must be at least 1")
        if not cfg.overlap > 0:
            raise ValidationError("overlap must be positive")
    if not cfg.p > 0:
        raise ValidationError("p must be positive")
    if cfg.orientation not in ("paper", "outward"):
        raise ValidationError("orientation must be 'paper' or 'outward'")
    if cfg.max_iters < 1:
        raise ValidationError("max_iters must be at least 1")
    if not cfg.stop_tol > 0:
        raise ValidationError("stop_tol must be positive")
    if cfg.guess not in ("zero", "constant", "random-smooth"):
        raise ValidationError("guess must be zero, constant or random-smooth")
    if cfg.workers < 1:
        raise ValidationError("workers must be at least 1")
    if cfg.gamma is not None and not cfg.gamma > 0:
        raise ValidationError("gamma must be positive")
    if cfg.theta < 0:
        raise ValidationError("theta must be nonnegative")
    if not 0 < cfg.gamma_max:
        raise ValidationError("gamma_max must be positive")
    for name, vals in (("p_values", cfg.p_values),
                       ("overlap_values", cfg.overlap_values)):
        if vals is not None and any(v <= 0 for v in vals):
            raise ValidationError(f"{name} entries must be positive")
