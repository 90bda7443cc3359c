"""Structured outcomes of individual checks."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


class CapExceededError(RuntimeError):
    """A computation would exceed a configured size cap."""


def jsonable(value: Any) -> Any:
    """Convert numpy scalars, sets, tuples and fractions into JSON-native values."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(jsonable(v) for v in value)
    if isinstance(value, Fraction):
        return str(value)
    if hasattr(value, "item") and callable(value.item):
        return value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


@dataclass
class VerificationReport:
    """One bound or structural check on one instance.

    ``hard`` marks a check run inside the regime where the claim is
    guaranteed; a failure there is a genuine counterexample.
    """

    check: str
    params: dict = field(default_factory=dict)
    passed: bool = False
    margin: float | None = None
    hard: bool = False
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def hard_violation(self) -> bool:
        return self.hard and not self.passed

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "params": jsonable(self.params),
            "pass": bool(self.passed),
            "margin": jsonable(self.margin),
            "hard": bool(self.hard),
            "witnesses": jsonable(self.witnesses),
            "details": jsonable(self.details),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())
