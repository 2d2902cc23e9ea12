"""Shared result value for finders that can fail honestly."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class NotFound:
    """Definite or stuck negative outcome of a constructive search.

    ``reason`` is a short machine-readable tag; ``details`` carries the
    concrete stuck state (witness vertices, phase, sizes) so harnesses
    can aggregate failure modes.  Finders return this rather than
    raising: an absent structure is an answer, not an error.
    """

    reason: str
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return False
