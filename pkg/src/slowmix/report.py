"""Machine-readable verification outcomes and deterministic serialization.

Margins follow one convention everywhere: ``margin = bound / |worst value|``
(or slack expressed as a ratio), so a check passes iff ``margin >= 1``.
Reports must be bit-reproducible from (parameters, seed); all floats are
rendered with 17 significant digits and arbitrary-precision values as
30-digit decimal strings.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import mpmath
from gmpy2 import mpfr

__all__ = ["CriterionReport", "render_value", "report_json", "payload_digest"]

#: report outcome classes beyond plain pass/fail
STATUSES = ("decided", "undecided", "vacuous", "capacity", "insufficient-data", "warning")


def render_value(v: Any) -> Any:
    """Canonical JSON-safe rendering; stable across runs."""
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, int):
        return v if abs(v) < 2**53 else str(v)
    if isinstance(v, float):
        return float(repr(v))
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, mpfr):
        return mpmath.nstr(mpmath.mpf(v.as_mantissa_exp()[0].__int__()) *
                           mpmath.mpf(2) ** int(v.as_mantissa_exp()[1]), 30)
    if isinstance(v, mpmath.mpf):
        return mpmath.nstr(v, 30)
    if isinstance(v, (list, tuple)):
        return [render_value(x) for x in v]
    if isinstance(v, dict):
        return {str(k): render_value(v[k]) for k in sorted(v, key=str)}
    return str(v)


@dataclass
class CriterionReport:
    """Outcome of one verification sweep."""

    criterion: str
    passed: bool
    margin: float | None = None
    threshold: Any = None
    witness: dict | None = None
    status: str = "decided"
    parameters: dict = field(default_factory=dict)
    sampling: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    subchecks: list["CriterionReport"] = field(default_factory=list)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown report status {self.status!r}")
        if not self.passed and self.status == "decided" and self.witness is None:
            # every decided failure carries a witness
            self.witness = {"note": "no witness recorded"}

    def to_dict(self) -> dict:
        d = {
            "criterion": self.criterion,
            "passed": self.passed,
            "status": self.status,
            "margin": render_value(self.margin),
            "threshold": render_value(self.threshold),
            "witness": render_value(self.witness),
            "parameters": render_value(self.parameters),
            "sampling": render_value(self.sampling),
            "details": render_value(self.details),
        }
        if self.subchecks:
            d["subchecks"] = [s.to_dict() for s in self.subchecks]
        return d

    def all_passed(self) -> bool:
        return self.passed and all(s.all_passed() for s in self.subchecks)

    def summary_line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        if self.status != "decided":
            tag = self.status.upper()
        m = "" if self.margin is None else f"  margin={self.margin:.6g}"
        return f"[{tag}] {self.criterion}{m}"


def report_json(obj) -> str:
    """Deterministic JSON payload (sorted keys, fixed separators)."""
    if isinstance(obj, CriterionReport):
        obj = obj.to_dict()
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def payload_digest(payload: str | bytes) -> str:
    if isinstance(payload, str):
        payload = payload.encode()
    return hashlib.sha256(payload).hexdigest()
