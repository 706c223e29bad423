"""Experiment configuration: flat dotted ``key = value`` text (or a flat
JSON object with the same keys).  Unknown keys are rejected so that typos
fail loudly, and the echoed copy written next to the outputs reparses to an
identical configuration.
"""
from __future__ import annotations

import json
import re
from typing import Dict, List

from .errors import ConfigError
from .families import (CantorIFS, ChebyshevSegment, ExplicitList, FamilySpec,
                       Iterates, PowersUnity, RandomIID)
from .measures import (ArcsineSegment, CantorHausdorff, JuliaEquilibrium,
                       TargetMeasure, UniformCircle, WeightedCircles)
from .regions import Annulus, Box, CappedComplement, Disk, Region, Union

__all__ = ["ExperimentConfig", "parse_config", "parse_complex"]

_KNOWN_KEYS = {
    "family.kind", "family.poly", "family.q0", "family.seed", "family.kmax",
    "family.schedule",
    "measure.kind", "measure.r", "measure.poly", "measure.truncation",
    "region.A", "region.L", "region.L2", "region.K",
    "grid.center", "grid.r", "grid.n", "grid.points",
    "k.min", "k.max", "k.list", "m", "m_max",
    "tolerance", "theorem.eps", "demo.center", "demo.radius",
    "seed", "expect", "roots.k", "roots.m",
}

_COMPLEX_RE = re.compile(r"^[0-9eE+\-.]*i?$")


def parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "")
    if not t or not _COMPLEX_RE.match(t):
        raise ConfigError(f"bad complex literal {text!r}")
    try:
        if t.endswith("i"):
            return complex(t[:-1] + "j")
        return complex(float(t))
    except ValueError as exc:
        raise ConfigError(f"bad complex literal {text!r}") from exc


def _parse_scalar(text: str):
    t = text.strip()
    if t.startswith("[") and t.endswith("]"):
        inner = t[1:-1].strip()
        return [] if not inner else [_parse_scalar(x) for x in inner.split(",")]
    for caster in (int, float):
        try:
            return caster(t)
        except ValueError:
            pass
    if t.endswith("i") and _COMPLEX_RE.match(t.replace(" ", "")):
        return parse_complex(t)
    return t


class ExperimentConfig:
    """Validated flat key/value store with typed accessors."""

    def __init__(self, entries: Dict[str, str]):
        unknown = set(entries) - _KNOWN_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        self.raw = dict(entries)

    # -- accessors --------------------------------------------------------
    def has(self, key: str) -> bool:
        return key in self.raw

    def get(self, key: str, default=None):
        if key not in self.raw:
            if default is None:
                raise ConfigError(f"missing config key {key!r}")
            return default
        return _parse_scalar(self.raw[key])

    def get_int(self, key: str, default=None) -> int:
        v = self.get(key, default)
        if not isinstance(v, int):
            raise ConfigError(f"{key} must be an integer, got {v!r}")
        return v

    def get_float(self, key: str, default=None) -> float:
        v = self.get(key, default)
        if not isinstance(v, (int, float)):
            raise ConfigError(f"{key} must be a number, got {v!r}")
        return float(v)

    def get_complex(self, key: str, default=None) -> complex:
        if key not in self.raw:
            if default is None:
                raise ConfigError(f"missing config key {key!r}")
            return complex(default)
        return parse_complex(self.raw[key])

    def get_complex_list(self, key: str) -> List[complex]:
        t = self.raw.get(key, "").strip()
        if not (t.startswith("[") and t.endswith("]")):
            raise ConfigError(f"{key} must be a [..] list")
        inner = t[1:-1].strip()
        return [parse_complex(x) for x in inner.split(",")] if inner else []

    # -- builders ----------------------------------------------------------
    def family(self, seed_override: int | None = None) -> FamilySpec:
        kind = self.get("family.kind")
        seed = seed_override if seed_override is not None \
            else self.get_int("family.seed", self.get_int("seed", 0))
        schedule = None
        if self.has("family.schedule"):
            schedule = [int(x.real) if isinstance(x, complex) else int(x)
                        for x in self.get("family.schedule")]
        if kind == "iterates":
            return Iterates(self.get_complex_list("family.poly"), seed=seed)
        if kind == "cantor-ifs":
            q0 = self.get_complex_list("family.q0") \
                if self.has("family.q0") else None
            return CantorIFS(q0, seed=seed)
        if kind == "random-iid":
            return RandomIID(self.measure(), seed=seed, schedule=schedule)
        if kind == "chebyshev":
            return ChebyshevSegment(schedule=schedule)
        if kind == "powers-unity":
            return PowersUnity(schedule=schedule)
        if kind == "explicit":
            return ExplicitList([self.get_complex_list("family.poly")])
        raise ConfigError(f"unknown family.kind {kind!r}")

    def measure(self) -> TargetMeasure:
        kind = self.get("measure.kind")
        if kind == "circle":
            return UniformCircle(self.get_float("measure.r", 1.0))
        if kind == "circles":
            return WeightedCircles(self.get_int("measure.truncation", 40))
        if kind == "arcsine":
            return ArcsineSegment()
        if kind == "cantor":
            return CantorHausdorff()
        if kind == "julia":
            return JuliaEquilibrium(self.get_complex_list("measure.poly"))
        raise ConfigError(f"unknown measure.kind {kind!r}")

    def region(self, key: str = "region.A") -> Region:
        return parse_region(self.raw.get(key, "") or
                            _fail_missing(key))

    def k_range(self) -> List[int]:
        if self.has("k.list"):
            return [int(x) for x in self.get("k.list")]
        lo = self.get_int("k.min")
        hi = self.get_int("k.max")
        if hi < lo:
            raise ConfigError("k.max must be >= k.min")
        return list(range(lo, hi + 1))

    def echo_text(self) -> str:
        return "".join(f"{k} = {self.raw[k]}\n" for k in sorted(self.raw))


def _fail_missing(key):
    raise ConfigError(f"missing config key {key!r}")


_REGION_RE = re.compile(r"^([a-z-]+)\((.*)\)$")


def parse_region(text: str) -> Region:
    """disk(c, r) | box(c0, c1) | annulus(c, r_in, r_out) |
    capped-complement(c, r, r_cap) | union(region; region; ...)"""
    t = text.strip()
    m = _REGION_RE.match(t)
    if not m:
        raise ConfigError(f"bad region syntax {text!r}")
    name, body = m.group(1), m.group(2)
    if name == "union":
        return Union([parse_region(part) for part in body.split(";")])
    args = [parse_complex(a) for a in body.split(",")]
    try:
        if name == "disk":
            return Disk(args[0], args[1].real)
        if name == "box":
            return Box(args[0], args[1])
        if name == "annulus":
            return Annulus(args[0], args[1].real, args[2].real)
        if name == "capped-complement":
            return CappedComplement(args[0], args[1].real, args[2].real)
    except (IndexError, ValueError) as exc:
        raise ConfigError(f"bad region arguments in {text!r}: {exc}") from exc
    raise ConfigError(f"unknown region shape {name!r}")


def parse_config(path: str) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"bad JSON config: {exc}") from exc
        if not isinstance(obj, dict):
            raise ConfigError("JSON config must be an object")
        return ExperimentConfig({str(k): _json_value(v) for k, v in obj.items()})
    entries: Dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        if "=" not in s:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, _, value = s.partition("=")
        key = key.strip()
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = value.strip()
    return ExperimentConfig(entries)


def _json_value(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)
