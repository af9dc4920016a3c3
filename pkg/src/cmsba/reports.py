"""Structured outcomes of symbolic and numeric property checks."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any


@dataclass
class VerifyReport:
    check_id: str
    parameters: dict[str, Any]
    passed: bool
    residual: str | float
    tolerance: float | None = None  # None: exact symbolic check
    seed: int | None = None
    runtime_ms: float = 0.0

    def to_dict(self, canonical: bool = False) -> dict[str, Any]:
        return {
            "check-id": self.check_id,
            "parameters": self.parameters,
            "seed": self.seed,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "runtime-ms": 0.0 if canonical else round(self.runtime_ms, 3),
        }

    def to_json(self, canonical: bool = False) -> str:
        return json.dumps(self.to_dict(canonical), sort_keys=True, separators=(",", ":"))

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tol = "exact" if self.tolerance is None else f"tol={self.tolerance:g}"
        return f"[{status}] {self.check_id} residual={self.residual} ({tol})"


class Stopwatch:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = (time.perf_counter() - self.t0) * 1000.0
        return False
