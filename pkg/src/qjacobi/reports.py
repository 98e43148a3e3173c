"""Result record shared by every identity check."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional


@dataclass
class IdentityReport:
    """Outcome of checking one identity at one parameter point.

    ``residual`` defaults to ``|lhs - rhs| / max(1, |rhs|)``; checks whose
    natural scale is different (alternating sums, Gram matrices) pass an
    explicit residual and say which scale they used in ``detail``.
    """

    identity_id: str
    params: Dict[str, float]
    lhs: float
    rhs: float
    residual: float
    tolerance: float
    passed: bool
    terms_used: int = 0
    wall_ms: float = 0.0
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "identity_id": self.identity_id,
            "params": {k: _finite_or_str(v) for k, v in sorted(self.params.items())},
            "lhs": _finite_or_str(self.lhs),
            "rhs": _finite_or_str(self.rhs),
            "residual": _finite_or_str(self.residual),
            "tolerance": _finite_or_str(self.tolerance),
            "pass": bool(self.passed),
            "terms_used": int(self.terms_used),
            "wall_ms": round(float(self.wall_ms), 3),
            "detail": self.detail,
        }


def _finite_or_str(v):
    if isinstance(v, str):
        return v
    v = float(v)
    return v if math.isfinite(v) else str(v)


def make_report(identity_id: str, params: Dict[str, float], lhs: float, rhs: float,
                tolerance: float, terms_used: int = 0, residual: Optional[float] = None,
                converged: bool = True, detail: str = "") -> IdentityReport:
    if residual is None:
        residual = abs(lhs - rhs) / max(1.0, abs(rhs))
    ok = converged and math.isfinite(residual) and residual <= tolerance
    return IdentityReport(identity_id, dict(params), float(lhs), float(rhs), float(residual),
                          float(tolerance), bool(ok), int(terms_used), 0.0, detail)


@dataclass
class Timer:
    """Context manager recording elapsed wall time in milliseconds."""

    ms: float = field(default=0.0)

    def __enter__(self):
        import time
        self._t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        import time
        self.ms = (time.perf_counter() - self._t0) * 1e3
        return False
