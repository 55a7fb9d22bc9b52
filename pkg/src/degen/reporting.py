"""Deterministic run reports: named checks, CSV tables, JSON documents, configs.

Every command of the front end produces a :class:`Report` — a list of named
pass/fail checks plus the paths of the tabular artifacts it wrote.  Numbers in
CSV output are printed with 17 significant digits so that doubles round-trip
exactly and two runs with identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
import numbers
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .errors import ParseError

SCHEMA_VERSION = 1


def format_value(value: Any) -> str:
    """Canonical text form of one CSV cell.

    Floats use ``%.17g`` (shortest form that still round-trips any double),
    bools the lowercase words, everything else ``str``.
    """
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real):
        return f"{float(value):.17g}"
    return str(value)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Write a comma-separated table with a header row; returns the path.

    Cells are joined without quoting — all producers in this package emit
    plain identifiers and numbers, never text containing commas.
    """
    lines = [",".join(header)]
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row width {len(row)} != header width {len(header)}")
        lines.append(",".join(format_value(v) for v in row))
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return str(out)


@dataclass(frozen=True)
class Check:
    """One verified claim: a left-hand side compared against a right-hand side.

    ``name`` is the stable identifier of the claim being checked; ``ratio``
    is ``lhs / rhs`` unless the producer supplies a more meaningful quotient.
    """

    name: str
    lhs: float
    rhs: float
    ratio: float
    passed: bool

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "pass": self.passed,
        }


def make_check(name: str, lhs: float, rhs: float, *, passed: bool | None = None,
               ratio: float | None = None) -> Check:
    """Build a check, defaulting to the ``lhs <= rhs`` reading."""
    lhs = float(lhs)
    rhs = float(rhs)
    if ratio is None:
        if rhs == 0.0:
            ratio = float("inf") if lhs != 0.0 else 1.0
        else:
            ratio = lhs / rhs
    if passed is None:
        passed = lhs <= rhs
    return Check(name, lhs, rhs, float(ratio), bool(passed))


@dataclass
class Report:
    """Outcome of one command: parameters, checks, and emitted files."""

    command: str
    params: dict[str, Any] = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    artifacts: list[str] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def n_failed(self) -> int:
        return sum(not c.passed for c in self.checks)

    def add(self, name: str, lhs: float, rhs: float, *, passed: bool | None = None,
            ratio: float | None = None) -> Check:
        chk = make_check(name, lhs, rhs, passed=passed, ratio=ratio)
        self.checks.append(chk)
        return chk

    def extend(self, checks: Iterable[Check]) -> None:
        self.checks.extend(checks)

    def add_artifact(self, path: str | Path) -> None:
        self.artifacts.append(str(path))

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "params": dict(self.params),
            "checks": [c.as_dict() for c in self.checks],
            "artifacts": list(self.artifacts),
            "wall_time": self.wall_time,
        }

    def write_json(self, path: str | Path) -> str:
        out = Path(path)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n",
                       encoding="utf-8", newline="\n")
        return str(out)

    def checks_table(self) -> tuple[list[str], list[tuple]]:
        """The checks as a CSV-ready (header, rows) pair."""
        header = ["name", "lhs", "rhs", "ratio", "pass"]
        rows = [(c.name, c.lhs, c.rhs, c.ratio, c.passed) for c in self.checks]
        return header, rows


def load_config(path: str | Path) -> dict[str, str]:
    """Parse a flat ``key = value`` config file.

    ``#`` starts a comment (whole line or trailing); blank lines are ignored;
    keys may not repeat.  Values are returned as raw strings — the caller owns
    the conversion, since it knows each option's type.
    """
    out: dict[str, str] = {}
    first_line: dict[str, int] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {raw.strip()!r}", line=lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ParseError("empty key", line=lineno)
        if key in out:
            raise ParseError(
                f"duplicate key {key!r} (first set at line {first_line[key]})", line=lineno)
        out[key] = value
        first_line[key] = lineno
    return out


def merge_config(defaults: Mapping[str, Any], config: Mapping[str, str],
                 given: Mapping[str, Any]) -> dict[str, Any]:
    """Resolve option values: defaults, overridden by config, overridden by flags.

    ``defaults`` fixes the set of known keys and each key's type (via the
    default's type, or the converter attached to a ``(default, converter)``
    pair).  Unknown config keys are errors.
    """
    resolved: dict[str, Any] = {}
    converters: dict[str, Any] = {}
    for key, spec in defaults.items():
        if isinstance(spec, tuple):
            resolved[key], converters[key] = spec
        else:
            resolved[key] = spec
            converters[key] = type(spec) if spec is not None else str
    for key, raw in config.items():
        if key not in resolved:
            raise ParseError(f"unknown key {key!r}")
        conv = converters[key]
        if conv is bool:
            low = raw.lower()
            if low not in ("true", "false", "0", "1", "yes", "no"):
                raise ParseError(f"key {key!r}: expected a boolean, got {raw!r}")
            resolved[key] = low in ("true", "1", "yes")
        else:
            try:
                resolved[key] = conv(raw)
            except ValueError as exc:
                raise ParseError(f"key {key!r}: {exc}") from exc
    for key, value in given.items():
        if key in resolved and value is not None:
            resolved[key] = value
    return resolved
