"""CCS terms, defining equations, transition moves, and LTS construction.

The term grammar is stratified: a sequential process is nil, a prefix, or a
sum of sequential processes; a general process may also be a parallel
composition, a restriction, or a reference to a defined name. Defining
equations map names to restriction-free bodies, and states are kept in a
canonical multiset form (restrictions pulled to a single top-level set,
parallel factors flattened and sorted), which is what makes state equality
and breadth-first exploration cheap.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import InputError, PreconditionError, ResourceLimitError, UnsupportedStructureError
from .lts import TAU, ExplorationLimits, Lts


@dataclass(frozen=True)
class Action:
    """τ, an input action `a`, or its co-action (output) `'a`."""

    kind: str  # "tau" | "in" | "out"
    name: str | None = None

    def __post_init__(self):
        if self.kind == "tau":
            if self.name is not None:
                raise InputError("the internal action carries no name")
        elif self.kind in ("in", "out"):
            if not self.name or "'" in self.name:
                raise InputError(f"bad action name {self.name!r}")
        else:
            raise InputError(f"unknown action kind {self.kind!r}")

    def label(self) -> str:
        if self.kind == "tau":
            return TAU
        return self.name if self.kind == "in" else "'" + self.name

    @staticmethod
    def inp(name: str) -> "Action":
        return Action("in", name)

    @staticmethod
    def out(name: str) -> "Action":
        return Action("out", name)


TAU_ACTION = Action("tau")


def co(action: Action) -> Action:
    """Swap input and output; undefined for the internal action."""
    if action.kind == "in":
        return Action("out", action.name)
    if action.kind == "out":
        return Action("in", action.name)
    raise PreconditionError("the internal action has no co-action")


class Process:
    """Base class for CCS terms; all nodes are immutable and hashable."""

    __slots__ = ()


@dataclass(frozen=True)
class Nil(Process):
    pass


NIL = Nil()


@dataclass(frozen=True)
class Prefix(Process):
    action: Action
    continuation: Process


@dataclass(frozen=True)
class Sum(Process):
    """Choice between at least two sequential branches; never nested."""

    branches: tuple[Process, ...]

    def __post_init__(self):
        if len(self.branches) < 2:
            raise InputError("a sum needs at least two branches")
        for b in self.branches:
            if isinstance(b, Sum):
                raise InputError("sums must be flattened")
            if not is_sequential(b):
                raise InputError("sum branches must be sequential processes")


@dataclass(frozen=True)
class Parallel(Process):
    """Parallel composition of at least two factors; flattened, no nil factors."""

    factors: tuple[Process, ...]

    def __post_init__(self):
        if len(self.factors) < 2:
            raise InputError("a parallel composition needs at least two factors")
        for f in self.factors:
            if isinstance(f, Parallel):
                raise InputError("parallel compositions must be flattened")
            if isinstance(f, Nil):
                raise InputError("nil factors must be dropped from parallel compositions")


@dataclass(frozen=True)
class Restriction(Process):
    name: str
    body: Process


@dataclass(frozen=True)
class NameRef(Process):
    """Occurrence of a process name defined in the equations."""

    ident: str


def is_sequential(p: Process) -> bool:
    return isinstance(p, (Nil, Prefix, Sum))


def sum_of(branches: Iterable[Process]) -> Process:
    """Build a flattened sum; empty means nil, a single branch stands alone."""
    flat: list[Process] = []
    for b in branches:
        if isinstance(b, Sum):
            flat.extend(b.branches)
        else:
            flat.append(b)
    if not flat:
        return NIL
    if len(flat) == 1:
        return flat[0]
    return Sum(tuple(flat))


def par_of(factors: Iterable[Process]) -> Process:
    """Build a flattened parallel composition, dropping nil factors."""
    flat: list[Process] = []
    for f in factors:
        if isinstance(f, Parallel):
            flat.extend(f.factors)
        elif not isinstance(f, Nil):
            flat.append(f)
    if not flat:
        return NIL
    if len(flat) == 1:
        return flat[0]
    return Parallel(tuple(flat))


def restrict_chain(names: Iterable[str], body: Process) -> Process:
    result = body
    for name in reversed(list(names)):
        result = Restriction(name, result)
    return result


def _action_key(a: Action):
    order = {"tau": 0, "in": 1, "out": 2}
    return (order[a.kind], a.name or "")


def term_key(p: Process):
    """Structural total order on terms; drives every canonical sort."""
    if isinstance(p, Nil):
        return (0,)
    if isinstance(p, Prefix):
        return (1, _action_key(p.action), term_key(p.continuation))
    if isinstance(p, Sum):
        return (2, tuple(term_key(b) for b in p.branches))
    if isinstance(p, Parallel):
        return (3, tuple(term_key(f) for f in p.factors))
    if isinstance(p, NameRef):
        return (4, p.ident)
    if isinstance(p, Restriction):
        return (5, p.name, term_key(p.body))
    raise InputError(f"not a CCS term: {p!r}")


def term_size(p: Process) -> int:
    """Node count of a term, the symbol measure used for size bounds."""
    if isinstance(p, (Nil, NameRef)):
        return 1
    if isinstance(p, Prefix):
        return 1 + term_size(p.continuation)
    if isinstance(p, Sum):
        return 1 + sum(term_size(b) for b in p.branches)
    if isinstance(p, Parallel):
        return 1 + sum(term_size(f) for f in p.factors)
    if isinstance(p, Restriction):
        return 1 + term_size(p.body)
    raise InputError(f"not a CCS term: {p!r}")


def render_action(a: Action) -> str:
    return a.label()


def _render(p: Process) -> str:
    if isinstance(p, Nil):
        return "0"
    if isinstance(p, NameRef):
        return p.ident
    if isinstance(p, Prefix):
        cont = p.continuation
        if isinstance(cont, (Nil, NameRef, Prefix)):
            return f"{render_action(p.action)}.{_render(cont)}"
        return f"{render_action(p.action)}.({_render(cont)})"
    if isinstance(p, Sum):
        return " + ".join(_render(b) for b in p.branches)
    if isinstance(p, Parallel):
        return " | ".join(_render(f) for f in p.factors)
    if isinstance(p, Restriction):
        names = []
        body = p
        while isinstance(body, Restriction):
            names.append(body.name)
            body = body.body
        return f"new {', '.join(names)} in ({_render(body)})"
    raise InputError(f"not a CCS term: {p!r}")


def render_process(p: Process) -> str:
    """Concrete syntax: prefix binds tighter than sum, sum tighter than parallel."""
    return _render(p)


@dataclass(frozen=True)
class DefiningEquations:
    """Name-to-body mapping; bodies are restriction-free and reference only defined names."""

    equations: Mapping[str, Process]

    def __post_init__(self):
        eqs = {name: body for name, body in sorted(dict(self.equations).items())}
        object.__setattr__(self, "equations", MappingProxyType(eqs))
        for name, body in eqs.items():
            if not isinstance(name, str) or not name:
                raise InputError(f"bad process name {name!r}")
            if _contains_restriction(body):
                raise InputError(f"definition of {name} contains a restriction; equations must be restriction-free")
        undefined = referenced_names(eqs.values()) - set(eqs)
        if undefined:
            raise InputError(f"undefined process names in equations: {', '.join(sorted(undefined))}")

    def __getitem__(self, name: str) -> Process:
        try:
            return self.equations[name]
        except KeyError:
            raise InputError(f"undefined process name {name}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.equations

    def __len__(self) -> int:
        return len(self.equations)

    def items(self):
        return self.equations.items()

    def __eq__(self, other):
        return isinstance(other, DefiningEquations) and self.equations == other.equations


def _contains_restriction(p: Process) -> bool:
    if isinstance(p, Restriction):
        return True
    if isinstance(p, Prefix):
        return _contains_restriction(p.continuation)
    if isinstance(p, (Sum, Parallel)):
        children = p.branches if isinstance(p, Sum) else p.factors
        return any(_contains_restriction(c) for c in children)
    return False


def referenced_names(terms: Iterable[Process]) -> set[str]:
    found: set[str] = set()

    def walk(p: Process) -> None:
        if isinstance(p, NameRef):
            found.add(p.ident)
        elif isinstance(p, Prefix):
            walk(p.continuation)
        elif isinstance(p, Sum):
            for b in p.branches:
                walk(b)
        elif isinstance(p, Parallel):
            for f in p.factors:
                walk(f)
        elif isinstance(p, Restriction):
            walk(p.body)

    for term in terms:
        walk(term)
    return found


@dataclass(frozen=True)
class CcsState:
    """Canonical state: top-level restricted names plus a sorted factor multiset.

    A state whose factors all reduced to nil keeps a single nil marker.
    """

    restricted: tuple[str, ...]
    factors: tuple[Process, ...]

    def key(self):
        return (self.restricted, tuple(term_key(f) for f in self.factors))


def canonicalize(q: Process) -> CcsState:
    """Flatten a process into canonical state form.

    Restrictions are accepted only as an outermost chain; anything deeper is
    rejected rather than silently mis-scoped.
    """
    names: list[str] = []
    while isinstance(q, Restriction):
        names.append(q.name)
        q = q.body

    factors: list[Process] = []

    def collect(p: Process) -> None:
        if isinstance(p, Parallel):
            for f in p.factors:
                collect(f)
        elif isinstance(p, Nil):
            pass
        elif isinstance(p, Restriction):
            raise UnsupportedStructureError("restriction below the top level is not supported")
        else:
            factors.append(p)

    collect(q)
    factors.sort(key=term_key)
    if not factors:
        factors = [NIL]
    return CcsState(tuple(sorted(set(names))), tuple(factors))


def state_to_process(state: CcsState) -> Process:
    return restrict_chain(state.restricted, par_of(state.factors))


def render_state(state: CcsState) -> str:
    body = " | ".join(_render(f) for f in state.factors)
    if state.restricted:
        return f"new {', '.join(state.restricted)} in ({body})"
    return body


def _proc_moves(p: Process, defs: DefiningEquations, visiting: frozenset[str]) -> tuple[tuple[Action, Process], ...]:
    """Immediate moves of a restriction-free process under the transition rules."""
    if isinstance(p, Nil):
        return ()
    if isinstance(p, Prefix):
        return ((p.action, p.continuation),)
    if isinstance(p, Sum):
        moves: list[tuple[Action, Process]] = []
        for b in p.branches:
            moves.extend(_proc_moves(b, defs, visiting))
        return tuple(moves)
    if isinstance(p, NameRef):
        if p.ident in visiting:
            # A name defined (transitively) as itself has no derivable move.
            return ()
        return _proc_moves(defs[p.ident], defs, visiting | {p.ident})
    if isinstance(p, Parallel):
        per_factor = [_proc_moves(f, defs, visiting) for f in p.factors]
        moves = []
        for i, factor_moves in enumerate(per_factor):
            rest = p.factors[:i] + p.factors[i + 1 :]
            for action, residual in factor_moves:
                moves.append((action, par_of((residual, *rest))))
        for i in range(len(per_factor)):
            for j in range(i + 1, len(per_factor)):
                rest = tuple(f for k, f in enumerate(p.factors) if k not in (i, j))
                for a1, r1 in per_factor[i]:
                    if a1.kind == "tau":
                        continue
                    partner = co(a1)
                    for a2, r2 in per_factor[j]:
                        if a2 == partner:
                            moves.append((TAU_ACTION, par_of((r1, r2, *rest))))
        return tuple(moves)
    if isinstance(p, Restriction):
        raise UnsupportedStructureError("restriction inside a definition body is not supported")
    raise InputError(f"not a CCS term: {p!r}")


def _factor_moves(factor: Process, defs: DefiningEquations, cache: dict) -> tuple[tuple[Action, Process], ...]:
    moves = cache.get(factor)
    if moves is None:
        moves = _proc_moves(factor, defs, frozenset())
        cache[factor] = moves
    return moves


def _rebuild(state: CcsState, replacements: dict[int, Process]) -> CcsState:
    factors: list[Process] = []

    def collect(p: Process) -> None:
        if isinstance(p, Parallel):
            for f in p.factors:
                collect(f)
        elif not isinstance(p, Nil):
            factors.append(p)

    for idx, factor in enumerate(state.factors):
        if idx in replacements:
            collect(replacements[idx])
        else:
            factors.append(factor)
    factors.sort(key=term_key)
    if not factors:
        factors = [NIL]
    return CcsState(state.restricted, tuple(factors))


def step(state: CcsState, defs: DefiningEquations, _cache: dict | None = None) -> set[tuple[Action, CcsState]]:
    """All moves of a canonical state: factor moves plus pairwise synchronisation.

    Visible moves whose action name is restricted at the top level are
    filtered out; τ moves always survive, so synchronisations over restricted
    names remain observable as internal steps.
    """
    cache = _cache if _cache is not None else {}
    per_factor = [_factor_moves(f, defs, cache) for f in state.factors]
    restricted = set(state.restricted)
    result: set[tuple[Action, CcsState]] = set()
    for i, factor_moves in enumerate(per_factor):
        for action, residual in factor_moves:
            if action.kind != "tau" and action.name in restricted:
                continue
            result.add((action, _rebuild(state, {i: residual})))
    for i in range(len(per_factor)):
        for j in range(i + 1, len(per_factor)):
            for a1, r1 in per_factor[i]:
                if a1.kind == "tau":
                    continue
                partner = co(a1)
                for a2, r2 in per_factor[j]:
                    if a2 == partner:
                        result.add((TAU_ACTION, _rebuild(state, {i: r1, j: r2})))
    return result


def build_ccs_lts(q: Process, defs: DefiningEquations, limits: ExplorationLimits = ExplorationLimits()) -> Lts:
    """Breadth-first closure of `step` from the canonical form of q."""
    if limits.max_states <= 0:
        raise InputError("exploration limit must be positive")
    for name in referenced_names([q]):
        if name not in defs:
            raise InputError(f"undefined process name {name}")

    start = canonicalize(q)
    index: dict[CcsState, int] = {start: 0}
    display = [render_state(start)]
    queue: deque[CcsState] = deque([start])
    edges: set[tuple[int, str, int]] = set()
    actions: set[str] = set()
    cache: dict = {}

    while queue:
        state = queue.popleft()
        src = index[state]
        moves = sorted(step(state, defs, cache), key=lambda mv: (mv[0].label(), mv[1].key()))
        for action, target in moves:
            dst = index.get(target)
            if dst is None:
                if len(index) >= limits.max_states:
                    raise ResourceLimitError(
                        f"reachable CCS states exceed the cap of {limits.max_states}",
                        explored=len(index),
                        frontier=len(queue) + 1,
                    )
                dst = len(index)
                index[target] = dst
                display.append(render_state(target))
                queue.append(target)
            label = action.label()
            actions.add(label)
            edges.add((src, label, dst))

    return Lts(
        n_states=len(index),
        initial=0,
        edges=frozenset(edges),
        actions=frozenset(actions),
        labels=tuple(display),
    )
