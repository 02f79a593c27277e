"""Report model and serialization.

The structured format is a single self-describing JSON tree with explicit
provenance (tool version, input digest, seed) and every rational rendered
as an exact "num/den" string; no floats appear anywhere.  Reports are
byte-identical across runs with the same input, seed and version, which is
why wall-clock timings are only attached on explicit request.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from . import __version__
from .etale import Element
from .exact import Poly, RealAlgebraic
from .spectra import CheckRecord, Section


def _q_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def to_jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return _q_str(x)
    if isinstance(x, Poly):
        return [_q_str(c) for c in x.coeffs]
    if isinstance(x, Element):
        return {"coords": [[_q_str(c) for c in p.coeffs] for p in x.coords]}
    if isinstance(x, RealAlgebraic):
        return {
            "defining": to_jsonable(x.defining),
            "lo": _q_str(x.lo),
            "hi": _q_str(x.hi),
        }
    if isinstance(x, Section):
        return ",".join(f"p{p}:e{e}" for p, e in x.items())
    if isinstance(x, CheckRecord):
        return {"name": x.name, "passed": x.passed, "details": to_jsonable(x.details)}
    if isinstance(x, dict):
        return {str(to_jsonable(k)): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = list(x)
        if isinstance(x, (set, frozenset)):
            items = sorted(items, key=repr)
        return [to_jsonable(v) for v in items]
    if dataclasses.is_dataclass(x) and not isinstance(x, type):
        return {f.name: to_jsonable(getattr(x, f.name)) for f in dataclasses.fields(x)}
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return repr(x)


@dataclass
class RunCheck:
    id: str
    claim: str
    status: str  # "pass" | "fail"
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass
class Report:
    input_path: str
    input_sha256: str
    seed: int
    checks: list[RunCheck] = field(default_factory=list)
    timings_ms: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def structured(self) -> str:
        tree = {
            "tool": "poring-lab",
            "version": __version__,
            "input": {"path": self.input_path, "sha256": self.input_sha256},
            "seed": self.seed,
            "status": self.status,
            "checks": [
                {
                    "id": c.id,
                    "claim": c.claim,
                    "status": c.status,
                    "details": to_jsonable(c.details),
                }
                for c in self.checks
            ],
        }
        if self.timings_ms is not None:
            tree["timings_ms"] = self.timings_ms
        return json.dumps(tree, indent=2, sort_keys=True) + "\n"

    def text(self) -> str:
        lines = [
            f"poring-lab {__version__}  input={self.input_path}  "
            f"sha256={self.input_sha256[:12]}  seed={self.seed}"
        ]
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            summary = c.details.get("summary", "")
            lines.append(f"[{mark}] {c.id}  {summary}".rstrip())
            if not c.passed and "message" in c.details:
                lines.append(f"       {c.details['message']}")
            if self.timings_ms and c.id in self.timings_ms:
                lines[-1] += f"  ({self.timings_ms[c.id]} ms)"
        lines.append(f"overall: {self.status.upper()}")
        return "\n".join(lines) + "\n"
