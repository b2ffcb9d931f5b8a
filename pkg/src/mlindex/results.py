"""Result records shared by the exhaustive and randomized index computations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class IndexReport:
    """Value of alpha or beta (any kind) with optional witness bases.

    ``witness`` holds one basis (list of vectors) per mode for general maps
    and a single basis for alternating/symmetric maps.
    """

    index: str
    kind: str
    value: int
    method: str
    witness: list[list[list[int]]] | None = None
    epsilon: float | None = None
    flags: list[str] = field(default_factory=list)
    stats: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "kind": self.kind,
            "value": self.value,
            "method": self.method,
            "witness": self.witness,
            "epsilon": self.epsilon,
            "flags": list(self.flags),
            "stats": dict(self.stats),
        }
