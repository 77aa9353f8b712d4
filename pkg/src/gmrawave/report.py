"""Check records with matching text and JSON renderings."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import __version__


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, tuple):
        return [_jsonable(c) for c in v]
    if isinstance(v, list):
        return [_jsonable(c) for c in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def format_location(loc) -> str:
    if loc is None:
        return "-"
    if isinstance(loc, tuple):
        return "(" + ", ".join(format_location(c) for c in loc) + ")"
    if isinstance(loc, Fraction):
        return str(loc)
    return str(loc)


@dataclass
class Check:
    name: str
    passed: bool
    residual: float | None = None
    tolerance: float | None = None
    location: object = None
    detail: str = ""


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    config_hash: str | None = None

    def add(self, name, passed, residual=None, tolerance=None, location=None, detail=""):
        self.checks.append(Check(name, bool(passed), residual, tolerance, location, detail))
        return self.checks[-1]

    def extend(self, other: "Report", prefix: str = ""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.residual, c.tolerance,
                                     c.location, c.detail))
        self.data.update({prefix + k: v for k, v in other.data.items()})

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "version": __version__,
            "config_hash": self.config_hash,
            "checks": [
                {**{k: _jsonable(v) for k, v in asdict(c).items() if k != "location"},
                 "location": format_location(c.location)}
                for c in self.checks
            ],
            "data": _jsonable(self.data),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"{self.title}", f"version {__version__}  config {self.config_hash or '-'}", ""]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            res = "-" if c.residual is None else f"{c.residual:.3e}"
            tol = "-" if c.tolerance is None else f"{c.tolerance:.1e}"
            line = f"{status}  {c.name:<40} residual={res:<11} tol={tol:<8} at {format_location(c.location)}"
            if c.detail:
                line += f"  {c.detail}"
            lines.append(line)
        for k, v in self.data.items():
            lines.append(f"{k}: {_jsonable(v)}")
        lines.append("")
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines) + "\n"


def config_digest(obj) -> str:
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:16]
