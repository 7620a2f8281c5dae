"""Labelled Petri nets: firing semantics, reachability LTS, and net-class predicates.

A net is the tuple (places, transitions, edges, actions, labelling) with
unweighted edges and a total labelling of transitions by actions. Identifiers
are nonempty strings; every iteration order in this module derives from their
lexicographic order, so all operations are deterministic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Mapping

from .errors import InputError, PreconditionError, ResourceLimitError
from .lts import TAU, ExplorationLimits, Lts

#: Marker reserved for CCS co-actions; never allowed inside net action names.
CO_MARK = "'"


def _check_identifier(kind: str, ident) -> str:
    if not isinstance(ident, str) or not ident:
        raise InputError(f"{kind} identifier must be a nonempty string, got {ident!r}")
    return ident


@dataclass(frozen=True)
class PetriNet:
    """Immutable labelled Petri net.

    `actions` may list extra action names; it always contains the internal
    action and every label in use.
    """

    places: tuple[str, ...]
    transitions: tuple[str, ...]
    edges: frozenset[tuple[str, str]]
    labelling: Mapping[str, str]
    actions: frozenset[str] = frozenset()

    def __post_init__(self):
        places = tuple(sorted({_check_identifier("place", p) for p in self.places}))
        transitions = tuple(sorted({_check_identifier("transition", t) for t in self.transitions}))
        labelling = dict(self.labelling)
        edges = frozenset((str(a), str(b)) for a, b in self.edges)
        actions = frozenset(self.actions) | set(labelling.values()) | {TAU}
        object.__setattr__(self, "places", places)
        object.__setattr__(self, "transitions", transitions)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "labelling", MappingProxyType(labelling))
        object.__setattr__(self, "actions", actions)

        place_set, transition_set = set(places), set(transitions)
        overlap = place_set & transition_set
        if overlap:
            raise InputError(f"places and transitions must be disjoint; shared: {sorted(overlap)}")
        for src, dst in edges:
            if src in place_set and dst in transition_set:
                continue
            if src in transition_set and dst in place_set:
                continue
            raise InputError(f"edge ({src}, {dst}) must join a place and a transition, in either direction")
        for t in transitions:
            if t not in labelling:
                raise InputError(f"transition {t} has no action label")
        for t in labelling:
            if t not in transition_set:
                raise InputError(f"labelling mentions unknown transition {t}")
        for a in actions:
            _check_identifier("action", a)
            if CO_MARK in a:
                raise InputError(f"action name {a!r} contains the co-action marker, which is exclusive to CCS")

    @cached_property
    def _preset(self) -> dict[str, tuple[str, ...]]:
        pre: dict[str, list[str]] = {t: [] for t in self.transitions}
        for src, dst in self.edges:
            if dst in pre:
                pre[dst].append(src)
        return {t: tuple(sorted(ps)) for t, ps in pre.items()}

    @cached_property
    def _post_of_transition(self) -> dict[str, tuple[str, ...]]:
        post: dict[str, list[str]] = {t: [] for t in self.transitions}
        for src, dst in self.edges:
            if src in post:
                post[src].append(dst)
        return {t: tuple(sorted(ps)) for t, ps in post.items()}

    @cached_property
    def _post_of_place(self) -> dict[str, tuple[str, ...]]:
        post: dict[str, list[str]] = {p: [] for p in self.places}
        for src, dst in self.edges:
            if src in post:
                post[src].append(dst)
        return {p: tuple(sorted(ts)) for p, ts in post.items()}

    @cached_property
    def _pre_of_place(self) -> dict[str, tuple[str, ...]]:
        pre: dict[str, list[str]] = {p: [] for p in self.places}
        for src, dst in self.edges:
            if dst in pre:
                pre[dst].append(src)
        return {p: tuple(sorted(ts)) for p, ts in pre.items()}

    def preset(self, t: str) -> tuple[str, ...]:
        """Places with an edge to transition t."""
        if t not in self._preset:
            raise InputError(f"unknown transition {t}")
        return self._preset[t]

    def postset_of_transition(self, t: str) -> tuple[str, ...]:
        """Places with an edge from transition t."""
        if t not in self._post_of_transition:
            raise InputError(f"unknown transition {t}")
        return self._post_of_transition[t]

    def label(self, t: str) -> str:
        if t not in self.labelling:
            raise InputError(f"unknown transition {t}")
        return self.labelling[t]

    def size(self) -> int:
        """|P| + |T| + |F|, the usual net size measure."""
        return len(self.places) + len(self.transitions) + len(self.edges)


@dataclass(frozen=True)
class Marking:
    """Token counts per place; absent entries mean zero.

    Stored zero-free and sorted, so equal markings compare and hash equal.
    """

    tokens: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        raw = dict(self.tokens)
        for place, count in raw.items():
            _check_identifier("place", place)
            if not isinstance(count, int) or count < 0:
                raise InputError(f"token count for {place} must be a non-negative integer, got {count!r}")
        canonical = tuple(sorted((p, c) for p, c in raw.items() if c > 0))
        object.__setattr__(self, "tokens", canonical)

    def count(self, place: str) -> int:
        for p, c in self.tokens:
            if p == place:
                return c
        return 0

    __getitem__ = count

    def as_dict(self) -> dict[str, int]:
        return dict(self.tokens)

    def places(self) -> tuple[str, ...]:
        return tuple(p for p, _ in self.tokens)

    def total(self) -> int:
        return sum(c for _, c in self.tokens)

    def describe(self) -> str:
        if not self.tokens:
            return "-"
        return " ".join(f"{p}={c}" for p, c in self.tokens)


@dataclass(frozen=True)
class NetClassification:
    """Membership flags for every net class, with violation notes per flag."""

    is_workflow: bool
    is_free_choice: bool
    is_free_choice_workflow: bool
    is_ccs_net: bool
    is_2tau_sync: bool
    is_group_choice: bool
    diagnostics: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "diagnostics", MappingProxyType(dict(self.diagnostics)))

    def as_dict(self) -> dict[str, bool]:
        return {
            "workflow": self.is_workflow,
            "free_choice": self.is_free_choice,
            "free_choice_workflow": self.is_free_choice_workflow,
            "ccs_net": self.is_ccs_net,
            "2tau_sync": self.is_2tau_sync,
            "group_choice": self.is_group_choice,
        }


def _check_marking(net: PetriNet, m: Marking) -> None:
    known = set(net.places)
    for place, _ in m.tokens:
        if place not in known:
            raise InputError(f"marking references unknown place {place}")


def enabled_transitions(net: PetriNet, m: Marking) -> set[str]:
    """Transitions whose every ingoing place holds a token; zero-preset ones always qualify."""
    _check_marking(net, m)
    counts = m.as_dict()
    return {t for t in net.transitions if all(counts.get(p, 0) >= 1 for p in net.preset(t))}


def fire(net: PetriNet, m: Marking, t: str) -> tuple[str, Marking]:
    """Fire t: consume one token per ingoing place, produce one per outgoing place."""
    _check_marking(net, m)
    if t not in net.labelling:
        raise InputError(f"unknown transition {t}")
    counts = m.as_dict()
    pre = net.preset(t)
    if any(counts.get(p, 0) < 1 for p in pre):
        raise PreconditionError(f"transition {t} is not enabled in marking {m.describe()}")
    for p in pre:
        counts[p] = counts.get(p, 0) - 1
    for p in net.postset_of_transition(t):
        counts[p] = counts.get(p, 0) + 1
    return net.label(t), Marking(counts)


def build_net_lts(net: PetriNet, m0: Marking, limits: ExplorationLimits = ExplorationLimits()) -> Lts:
    """Breadth-first closure of the firing rule over all reachable markings.

    States are canonical markings numbered by discovery order; each firing of t
    contributes an edge labelled with t's action.
    """
    if limits.max_states <= 0:
        raise InputError("exploration limit must be positive")
    _check_marking(net, m0)

    index: dict[tuple[tuple[str, int], ...], int] = {m0.tokens: 0}
    display = [m0.describe()]
    queue: deque[Marking] = deque([m0])
    edges: set[tuple[int, str, int]] = set()

    while queue:
        marking = queue.popleft()
        src = index[marking.tokens]
        counts = marking.as_dict()
        for t in net.transitions:
            if any(counts.get(p, 0) < 1 for p in net.preset(t)):
                continue
            action, nxt = fire(net, marking, t)
            dst = index.get(nxt.tokens)
            if dst is None:
                if len(index) >= limits.max_states:
                    raise ResourceLimitError(
                        f"reachable markings exceed the cap of {limits.max_states} states",
                        explored=len(index),
                        frontier=len(queue) + 1,
                    )
                dst = len(index)
                index[nxt.tokens] = dst
                display.append(nxt.describe())
                queue.append(nxt)
            edges.add((src, action, dst))

    return Lts(
        n_states=len(index),
        initial=0,
        edges=frozenset(edges),
        actions=net.actions,
        labels=tuple(display),
    )


def postset(net: PetriNet, p: str) -> set[str]:
    """Transitions with an ingoing edge from place p."""
    if p not in net._post_of_place:
        raise InputError(f"unknown place {p}")
    return set(net._post_of_place[p])


def unique_choice(net: PetriNet) -> bool:
    """Places with more than one outgoing edge only feed transitions with one ingoing edge."""
    for p in net.places:
        if len(net._post_of_place[p]) > 1:
            for t in net._post_of_place[p]:
                if len(net.preset(t)) != 1:
                    return False
    return True


def unique_synchronisation(net: PetriNet) -> bool:
    """Transitions with more than one ingoing edge only draw from places with one outgoing edge."""
    for t in net.transitions:
        if len(net.preset(t)) > 1:
            for p in net.preset(t):
                if len(net._post_of_place[p]) != 1:
                    return False
    return True


def _workflow_diagnostics(net: PetriNet) -> tuple[bool, tuple[str, ...]]:
    notes: list[str] = []
    sources = [p for p in net.places if not net._pre_of_place[p]]
    sinks = [p for p in net.places if not net._post_of_place[p]]
    if len(sources) != 1:
        notes.append(
            "no source place (place without ingoing edges)"
            if not sources
            else f"multiple source places: {', '.join(sources)}"
        )
    if len(sinks) != 1:
        notes.append(
            "no sink place (place without outgoing edges)"
            if not sinks
            else f"multiple sink places: {', '.join(sinks)}"
        )
    if notes:
        return False, tuple(notes)

    source, sink = sources[0], sinks[0]
    succ: dict[str, list[str]] = {n: [] for n in (*net.places, *net.transitions)}
    pred: dict[str, list[str]] = {n: [] for n in (*net.places, *net.transitions)}
    for a, b in net.edges:
        succ[a].append(b)
        pred[b].append(a)

    def reach(start: str, adjacency: dict[str, list[str]]) -> set[str]:
        seen = {start}
        stack = [start]
        while stack:
            for nxt in adjacency[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return seen

    on_path = reach(source, succ) & reach(sink, pred)
    stray = sorted(set(succ) - on_path)
    if stray:
        return False, tuple(f"node {n} lies on no path from {source} to {sink}" for n in stray)
    if source == sink:
        notes.append(f"degenerate workflow net: source place {source} is also the sink")
    return True, tuple(notes)


def _free_choice_diagnostics(net: PetriNet) -> tuple[bool, tuple[str, ...]]:
    notes = []
    for p in net.places:
        if len(net._post_of_place[p]) > 1:
            for t in net._post_of_place[p]:
                if len(net.preset(t)) != 1:
                    notes.append(
                        f"place {p} chooses between several transitions but {t} has "
                        f"{len(net.preset(t))} ingoing edges"
                    )
    return not notes, tuple(notes)


def _preset_count_diagnostics(net: PetriNet, allow_zero: bool) -> tuple[bool, tuple[str, ...]]:
    notes = []
    for t in net.transitions:
        k = len(net.preset(t))
        if k == 0 and not allow_zero:
            notes.append(f"transition {t} has no ingoing edges")
        elif k > 2:
            notes.append(f"transition {t} has {k} ingoing edges")
        elif k == 2 and net.label(t) != TAU:
            notes.append(f"transition {t} has two ingoing edges but visible label {net.label(t)}")
    return not notes, tuple(notes)


def _group_choice_diagnostics(net: PetriNet) -> tuple[bool, tuple[str, ...]]:
    # Pairwise "same or disjoint postsets" holds iff all places feeding any
    # given transition share one postset; checked per transition to stay linear.
    postset_key = {p: frozenset(net._post_of_place[p]) for p in net.places}
    notes = []
    for t in net.transitions:
        feeders = net.preset(t)
        if len(feeders) < 2:
            continue
        first = feeders[0]
        for other in feeders[1:]:
            if postset_key[other] != postset_key[first]:
                notes.append(f"places {first} and {other} have partially overlapping postsets")
                break
    return not notes, tuple(notes)


def classify(net: PetriNet) -> NetClassification:
    """Compute membership in every net class handled by this package."""
    diagnostics: dict[str, tuple[str, ...]] = {}
    is_wf, wf_notes = _workflow_diagnostics(net)
    if wf_notes:
        diagnostics["workflow"] = wf_notes
    is_fc, fc_notes = _free_choice_diagnostics(net)
    if fc_notes:
        diagnostics["free_choice"] = fc_notes
    is_ccs, ccs_notes = _preset_count_diagnostics(net, allow_zero=False)
    if ccs_notes:
        diagnostics["ccs_net"] = ccs_notes
    is_2tau, tau_notes = _preset_count_diagnostics(net, allow_zero=True)
    if tau_notes:
        diagnostics["2tau_sync"] = tau_notes
    is_gc, gc_notes = _group_choice_diagnostics(net)
    if gc_notes:
        diagnostics["group_choice"] = gc_notes
    return NetClassification(
        is_workflow=is_wf,
        is_free_choice=is_fc,
        is_free_choice_workflow=is_wf and is_fc,
        is_ccs_net=is_ccs,
        is_2tau_sync=is_2tau,
        is_group_choice=is_gc,
        diagnostics=diagnostics,
    )


def place_groups(net: PetriNet) -> tuple[tuple[str, ...], ...]:
    """Partition the places so that each block shares one postset.

    Places with an empty postset stay in singleton blocks: nothing observes a
    merge of unrelated sinks. Requires a group-choice net.
    """
    ok, notes = _group_choice_diagnostics(net)
    if not ok:
        raise PreconditionError(f"not a group-choice net: {notes[0]}", violations=notes)
    blocks: dict[frozenset[str], list[str]] = {}
    singletons: list[tuple[str, ...]] = []
    for p in net.places:
        key = frozenset(net._post_of_place[p])
        if not key:
            singletons.append((p,))
        else:
            blocks.setdefault(key, []).append(p)
    grouped = [tuple(members) for members in blocks.values()]
    return tuple(sorted(grouped + singletons))
