"""Verification reports and their JSON form."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np


def _cjson(v) -> dict:
    v = complex(v)
    return {"re": v.real, "im": v.imag}


def _plain(obj):
    """JSON-safe copy: complex -> {re, im}, numpy scalars/arrays -> python."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return _cjson(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if hasattr(obj, "parts"):
        return list(obj.parts)
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


@dataclass
class VerificationReport:
    """LHS vs RHS of one identity at one parameter tuple.

    ``mode`` is ``"relative"`` (rel_err <= tol), ``"absolute"`` (abs_err <= tol)
    or ``"mc"`` (abs_err <= tol * stderr, tol being the number of standard errors).
    """

    name: str
    params: dict
    lhs: complex
    rhs: complex
    tol: float
    mode: str = "relative"
    stderr: float | None = None
    seed: int | None = None
    extras: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)  # further named pass flags that must all hold
    atol: float = 0.0  # floor for round-off in a deterministic oracle; only used in "mc" mode

    @property
    def abs_err(self) -> float:
        return abs(complex(self.lhs) - complex(self.rhs))

    @property
    def rel_err(self) -> float:
        scale = max(abs(complex(self.lhs)), abs(complex(self.rhs)))
        return self.abs_err / scale if scale > 0 else self.abs_err

    @property
    def passed(self) -> bool:
        if self.mode == "mc":
            ok = self.stderr is not None and self.abs_err <= self.tol * self.stderr + self.atol
        elif self.mode == "absolute":
            ok = self.abs_err <= self.tol
        else:
            ok = self.rel_err <= self.tol
        return bool(ok and all(self.checks.values()))

    def to_dict(self) -> dict[str, Any]:
        out = {
            "name": self.name,
            "params": _plain(self.params),
            "lhs": _cjson(self.lhs),
            "rhs": _cjson(self.rhs),
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
        }
        if self.stderr is not None:
            out["stderr"] = float(self.stderr)
        if self.atol:
            out["atol"] = self.atol
        out.update({"tol": self.tol, "seed": self.seed, "pass": self.passed})
        if self.checks:
            out["checks"] = {k: bool(v) for k, v in self.checks.items()}
        if self.extras:
            out["extras"] = _plain(self.extras)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def summary(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        se = f" stderr={self.stderr:.3g}" if self.stderr is not None else ""
        return f"{flag} {self.name}: abs_err={self.abs_err:.3g} rel_err={self.rel_err:.3g}{se} tol={self.tol:g}"


REPORT_KEYS = ("name", "params", "lhs", "rhs", "abs_err", "rel_err", "tol", "seed", "pass")


def validate_report_dict(d: dict) -> None:
    missing = [k for k in REPORT_KEYS if k not in d]
    if missing:
        raise ValueError(f"report is missing keys {missing}")
    for side in ("lhs", "rhs"):
        if not isinstance(d[side], dict) or set(d[side]) != {"re", "im"}:
            raise ValueError(f"report field {side!r} must be {{re, im}}")
