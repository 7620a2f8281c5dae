"""Finite labelled transition systems with a designated initial state."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import InputError

#: The distinguished internal action label used everywhere in this package.
TAU = "tau"


@dataclass(frozen=True)
class ExplorationLimits:
    """Caps for state-space exploration."""

    max_states: int = 100_000


@dataclass(frozen=True)
class Lts:
    """States are 0..n_states-1; `labels` (if present) are opaque display strings.

    The action set always contains the internal action, and must cover every
    edge label. Equality ignores display labels.
    """

    n_states: int
    initial: int
    edges: frozenset[tuple[int, str, int]]
    actions: frozenset[str]
    labels: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(self.edges))
        object.__setattr__(self, "actions", frozenset(self.actions) | {TAU})
        object.__setattr__(self, "labels", tuple(self.labels))
        if self.n_states <= 0:
            raise InputError("an LTS needs at least one state")
        if not (0 <= self.initial < self.n_states):
            raise InputError(f"initial state {self.initial} out of range")
        for src, action, dst in self.edges:
            if not (0 <= src < self.n_states and 0 <= dst < self.n_states):
                raise InputError(f"edge ({src}, {action!r}, {dst}) has an endpoint out of range")
            if action not in self.actions:
                raise InputError(f"edge label {action!r} missing from the action set")
        if self.labels and len(self.labels) != self.n_states:
            raise InputError("display labels must cover every state or be omitted")

    @cached_property
    def successors(self) -> tuple[tuple[tuple[str, int], ...], ...]:
        """Outgoing (action, target) pairs per state, sorted for determinism."""
        out: list[list[tuple[str, int]]] = [[] for _ in range(self.n_states)]
        for src, action, dst in self.edges:
            out[src].append((action, dst))
        return tuple(tuple(sorted(moves)) for moves in out)

    def label_of(self, state: int) -> str:
        return self.labels[state] if self.labels else str(state)
