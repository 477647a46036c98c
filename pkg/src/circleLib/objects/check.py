from __future__ import annotations

from typing import Dict

from attrs import define, field

from circleLib.serde import serde


@serde
@define
class CheckResult:
    """Outcome of one numerical property check."""

    name: str
    passed: bool = field(metadata={"omit_if_default": False})
    values: Dict[str, float] = field(factory=dict)
    """Measured quantities, keyed by name."""

    informational: bool = False
    """Informational checks never fail a suite; they only report values."""

    message: str = ""
