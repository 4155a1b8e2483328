"""Verification records and deterministic JSON serialization."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Optional

SCHEMA_VERSION = 1

PAPER_TAGS = frozenset(
    {
        "Eq.1", "Eq.2", "Eq.5", "Eq.6", "Eq.9", "Eq.11", "Eq.12", "Eq.13", "Eq.14",
        "Eq.15", "Eq.17", "Eq.19", "Eq.22", "Eq.23", "Eq.24", "Eq.25", "Eq.26",
        "Eq.27", "Eq.28", "Eq.29", "Jacobi", "Antisym", "Linearity",
    }
)


@dataclass(frozen=True)
class Record:
    check_id: str
    tag: str
    residual: float
    tolerance: float

    def __post_init__(self) -> None:
        if self.tag not in PAPER_TAGS:
            raise ValueError(f"unknown tag {self.tag!r}")

    @property
    def passed(self) -> bool:
        # NaN residuals fail
        return bool(self.residual <= self.tolerance)

    def to_dict(self) -> dict:
        return {
            "id": self.check_id,
            "tag": self.tag,
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
        }


@dataclass
class VerificationReport:
    records: list[Record]
    config: dict
    seed: int
    version: str
    timestamp: Optional[str] = None

    def __post_init__(self) -> None:
        self.records = sorted(self.records, key=lambda r: r.check_id)
        ids = [r.check_id for r in self.records]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate check ids")

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def failures(self) -> list[Record]:
        return [r for r in self.records if not r.passed]

    def to_dict(self) -> dict:
        n_pass = sum(r.passed for r in self.records)
        d = {
            "schema": SCHEMA_VERSION,
            "toolkit_version": self.version,
            "seed": self.seed,
            "config": self.config,
            "records": [r.to_dict() for r in self.records],
            "summary": {
                "total": len(self.records),
                "passed": n_pass,
                "failed": len(self.records) - n_pass,
                "pass": self.passed,
            },
        }
        if self.timestamp is not None:
            d["generated_at"] = self.timestamp
        return d

    def to_json(self) -> str:
        return canonical_json(self.to_dict()) + "\n"


def _format_float(x: float) -> str:
    if math.isnan(x):
        return '"NaN"'
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    return format(x, ".17g")


def canonical_json(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON with sorted keys and floats written with 17 significant digits.

    Non-finite floats become the strings "NaN", "Infinity", "-Infinity".
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, float):
        return _format_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(k))}: {canonical_json(v, indent, _level + 1)}"
            for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))
        ]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + canonical_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "item"):  # numpy scalars
        return canonical_json(obj.item(), indent, _level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")
