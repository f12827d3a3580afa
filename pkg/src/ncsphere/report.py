"""Check records shared by the verification routines and the command line."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable


class InvariantFailed(AssertionError):
    def __init__(self, what: str, residual=None):
        super().__init__(f"{what}: residual {residual}")
        self.what = what
        self.residual = residual


@dataclass
class Check:
    id: str
    anchor: str
    ok: bool
    residual: float = 0.0
    detail: str = ""
    seconds: float = 0.0

    @property
    def status(self) -> str:
        return "pass" if self.ok else "fail"

    def to_json(self) -> dict:
        out = {"id": self.id, "anchor": self.anchor, "status": self.status,
               "residual": float(self.residual) if math.isfinite(self.residual) else None, "seconds": round(self.seconds, 6)}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    name: str
    checks: list = field(default_factory=list)

    def add(self, id: str, anchor: str, ok: bool, residual: float = 0.0, detail: str = "", seconds: float = 0.0) -> Check:
        c = Check(id, anchor, bool(ok), float(residual), detail, seconds)
        self.checks.append(c)
        return c

    def run(self, id: str, anchor: str, fn: Callable[[], tuple]) -> Check:
        """Time ``fn`` which returns ``(ok, residual)`` or ``(ok, residual, detail)``."""
        from .ncalg import StepBudgetExceeded

        t0 = time.perf_counter()
        try:
            out = fn()
        except StepBudgetExceeded as exc:
            return self.add(id, anchor, False, float("inf"), str(exc), time.perf_counter() - t0)
        dt = time.perf_counter() - t0
        ok, residual, detail = (tuple(out) + ("",))[:3]
        return self.add(id, anchor, ok, residual, detail, dt)

    def extend(self, other: "Report") -> "Report":
        self.checks.extend(other.checks)
        return self

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def __bool__(self) -> bool:
        return self.ok

    def __getitem__(self, id: str) -> Check:
        for c in self.checks:
            if c.id == id:
                return c
        raise KeyError(id)

    def failures(self) -> list:
        return [c for c in self.checks if not c.ok]

    def text(self) -> str:
        lines = [f"[{c.status.upper()}] {c.id}  ({c.anchor})  residual={c.residual:.3g}" + (f"  {c.detail}" if c.detail else "")
                 for c in self.checks]
        lines.append(f"{self.name}: {len(self.checks) - len(self.failures())}/{len(self.checks)} passed")
        return "\n".join(lines)
