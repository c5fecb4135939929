from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Verdict:
    """Result of a property check.

    ``mode`` is ``"exact"`` when every qualifying configuration was examined
    and ``"sampled"`` otherwise; a sampled ``holds=True`` only means no
    counterexample was drawn. ``witness`` is set whenever ``holds`` is False.
    """

    holds: bool
    mode: str
    checked: int
    witness: Any = None
    detail: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.holds


class StageFailure(RuntimeError):
    """A pipeline stage could not complete; ``stage`` names it."""

    def __init__(self, stage: str, message: str = "", witness: Any = None, detail: dict | None = None):
        super().__init__(f"{stage}: {message}" if message else stage)
        self.stage = stage
        self.message = message
        self.witness = witness
        self.detail = dict(detail or {})


class BudgetExceeded(StageFailure):
    def __init__(self, stage: str = "budget", message: str = "time budget exhausted"):
        super().__init__(stage, message)
