"""Preset-reduction rewrites that drive nets toward binary synchronisation.

A single preset step replaces two ingoing edges of a chosen transition with a
fresh internal buffer (place plus τ-transition); the group variant retargets
the whole shared postset of two places through one fresh buffer. Iterating
either until every visible transition has at most one ingoing edge and every
internal one at most two yields a net the encoders accept.

Selection of the rewritten transition and place pair is fixed lexicographic
by default so runs are reproducible; a seed switches both choices to a
pseudo-random policy for property-test campaigns.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass

from .errors import InputError, PreconditionError
from .lts import TAU
from .nets import Marking, PetriNet, classify


@dataclass(frozen=True)
class RewriteRecord:
    """One rewrite: the reduced transition, the chosen place pair, and the fresh elements."""

    transition: str
    pair: tuple[str, str]
    fresh_transition: str
    fresh_place: str


@dataclass(frozen=True)
class TransformTrace:
    records: tuple[RewriteRecord, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        fresh = [ident for r in self.records for ident in (r.fresh_transition, r.fresh_place)]
        if len(fresh) != len(set(fresh)):
            raise InputError("fresh identifiers in a trace must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


class _FreshNames:
    """Monotone _p<k>/_t<k> generator that never collides with existing identifiers."""

    def __init__(self, net: PetriNet):
        self.taken = set(net.places) | set(net.transitions)
        self.counter = 0

    def next_pair(self) -> tuple[str, str]:
        while True:
            self.counter += 1
            t, p = f"_t{self.counter}", f"_p{self.counter}"
            if t not in self.taken and p not in self.taken:
                self.taken.update((t, p))
                return t, p


class _Workbench:
    """Mutable net view so iterated rewrites stay linear in the net size."""

    def __init__(self, net: PetriNet, m0: Marking):
        self.places = set(net.places)
        self.transitions = set(net.transitions)
        self.edges = set(net.edges)
        self.labelling = dict(net.labelling)
        self.actions = set(net.actions)
        self.preset = {t: set(net.preset(t)) for t in net.transitions}
        self.post_of_place = {p: set(net._post_of_place[p]) for p in net.places}
        self.marking = m0
        self.names = _FreshNames(net)

    def preset_step(self, t_star: str, pair: tuple[str, str]) -> RewriteRecord:
        p1, p2 = pair
        t_plus, p_plus = self.names.next_pair()
        self.places.add(p_plus)
        self.transitions.add(t_plus)
        self.labelling[t_plus] = TAU
        self.actions.add(TAU)
        self.edges -= {(p1, t_star), (p2, t_star)}
        self.edges |= {(p1, t_plus), (p2, t_plus), (t_plus, p_plus), (p_plus, t_star)}
        self.preset[t_star] -= {p1, p2}
        self.preset[t_star].add(p_plus)
        self.preset[t_plus] = {p1, p2}
        self.post_of_place[p1] = (self.post_of_place[p1] - {t_star}) | {t_plus}
        self.post_of_place[p2] = (self.post_of_place[p2] - {t_star}) | {t_plus}
        self.post_of_place[p_plus] = {t_star}
        return RewriteRecord(t_star, (p1, p2), t_plus, p_plus)

    def group_step(self, p1: str, p2: str) -> RewriteRecord:
        shared = self.post_of_place[p1]
        t_plus, p_plus = self.names.next_pair()
        self.places.add(p_plus)
        self.transitions.add(t_plus)
        self.labelling[t_plus] = TAU
        self.actions.add(TAU)
        self.edges -= {(p1, t) for t in shared} | {(p2, t) for t in shared}
        self.edges |= {(p1, t_plus), (p2, t_plus), (t_plus, p_plus)}
        self.edges |= {(p_plus, t) for t in shared}
        for t in shared:
            self.preset[t] -= {p1, p2}
            self.preset[t].add(p_plus)
        self.preset[t_plus] = {p1, p2}
        self.post_of_place[p_plus] = set(shared)
        self.post_of_place[p1] = {t_plus}
        self.post_of_place[p2] = {t_plus}
        return RewriteRecord(min(shared), (p1, p2), t_plus, p_plus)

    def violating_transitions(self) -> list[str]:
        out = []
        for t in self.transitions:
            threshold = 2 if self.labelling[t] == TAU else 1
            if len(self.preset[t]) > threshold:
                out.append(t)
        return sorted(out)

    def freeze(self) -> tuple[PetriNet, Marking]:
        net = PetriNet(
            places=tuple(self.places),
            transitions=tuple(self.transitions),
            edges=frozenset(self.edges),
            labelling=self.labelling,
            actions=frozenset(self.actions),
        )
        return net, self.marking


def reduce_preset_step(
    net: PetriNet,
    m0: Marking,
    t_star: str,
    pair: tuple[str, str] | None = None,
) -> tuple[PetriNet, Marking, RewriteRecord]:
    """Detach two ingoing edges of t_star onto a fresh τ-buffer feeding it.

    The rewritten pair defaults to the lexicographically smallest two places of
    the preset; an explicit pair realises the free choice the rewrite allows.
    The returned marking gives the fresh place zero tokens.
    """
    if t_star not in net.labelling:
        raise InputError(f"unknown transition {t_star}")
    preset = net.preset(t_star)
    if len(preset) < 2:
        raise PreconditionError(f"transition {t_star} has {len(preset)} ingoing edges; need at least two")
    if pair is None:
        pair = (preset[0], preset[1])
    else:
        p1, p2 = pair
        if p1 == p2 or p1 not in preset or p2 not in preset:
            raise InputError(f"pair {pair} must name two distinct places with edges to {t_star}")
    bench = _Workbench(net, m0)
    record = bench.preset_step(t_star, pair)
    new_net, new_m0 = bench.freeze()
    return new_net, new_m0, record


def group_reduce_step(
    net: PetriNet,
    m0: Marking,
    p_star: str,
    p_star2: str,
) -> tuple[PetriNet, Marking, RewriteRecord]:
    """Route the shared postset of two places through a fresh τ-buffer.

    Every transition in the shared postset loses exactly one ingoing edge.
    Requires equal, non-empty postsets.
    """
    for p in (p_star, p_star2):
        if p not in net._post_of_place:
            raise InputError(f"unknown place {p}")
    if p_star == p_star2:
        raise PreconditionError("the two places must be distinct")
    post1 = set(net._post_of_place[p_star])
    post2 = set(net._post_of_place[p_star2])
    if post1 != post2 or not post1:
        raise PreconditionError(
            f"places {p_star} and {p_star2} need equal non-empty postsets; "
            f"got {sorted(post1)} and {sorted(post2)}"
        )
    bench = _Workbench(net, m0)
    record = bench.group_step(p_star, p_star2)
    new_net, new_m0 = bench.freeze()
    return new_net, new_m0, record


def _validate_class(net: PetriNet, wanted: str, force: bool) -> None:
    flags = classify(net)
    ok = flags.is_free_choice if wanted == "free-choice" else flags.is_group_choice
    if ok:
        return
    key = "free_choice" if wanted == "free-choice" else "group_choice"
    notes = flags.diagnostics.get(key, ())
    if force:
        warnings.warn(
            f"input is not a {wanted} net; rewriting anyway, equivalence guarantees are void",
            stacklevel=3,
        )
        return
    raise PreconditionError(f"not a {wanted} net: {'; '.join(notes)}", violations=notes)


def reduce_presets(
    net: PetriNet,
    m0: Marking,
    *,
    force: bool = False,
    seed: int | None = None,
) -> tuple[PetriNet, Marking, TransformTrace]:
    """Iterate preset steps until visible presets are unary and internal ones at most binary.

    τ-transitions that already have exactly two ingoing edges are left alone,
    whether original or introduced. On free-choice input the result is a net
    every encoder accepts; zero-preset transitions are never touched.
    """
    _validate_class(net, "free-choice", force)
    rng = random.Random(seed) if seed is not None else None
    bench = _Workbench(net, m0)
    records = []
    while True:
        violating = bench.violating_transitions()
        if not violating:
            break
        t_star = rng.choice(violating) if rng else violating[0]
        candidates = sorted(bench.preset[t_star])
        pair = tuple(rng.sample(candidates, 2)) if rng else (candidates[0], candidates[1])
        records.append(bench.preset_step(t_star, pair))
    new_net, new_m0 = bench.freeze()
    return new_net, new_m0, TransformTrace(tuple(records))


def group_reduce(
    net: PetriNet,
    m0: Marking,
    *,
    force: bool = False,
    seed: int | None = None,
) -> tuple[PetriNet, Marking, TransformTrace]:
    """Iterate group steps under the same loop guard as `reduce_presets`.

    On group-choice input every selected pair shares its postset, so the step
    precondition holds throughout and the result satisfies the binary-τ
    synchronisation shape.
    """
    _validate_class(net, "group-choice", force)
    rng = random.Random(seed) if seed is not None else None
    bench = _Workbench(net, m0)
    records = []
    while True:
        violating = bench.violating_transitions()
        if not violating:
            break
        t_star = rng.choice(violating) if rng else violating[0]
        candidates = sorted(bench.preset[t_star])
        p1, p2 = tuple(rng.sample(candidates, 2)) if rng else (candidates[0], candidates[1])
        if bench.post_of_place[p1] != bench.post_of_place[p2] or not bench.post_of_place[p1]:
            raise PreconditionError(
                f"places {p1} and {p2} feeding {t_star} have different postsets; "
                "the input is not a group-choice net"
            )
        records.append(bench.group_step(p1, p2))
    new_net, new_m0 = bench.freeze()
    return new_net, new_m0, TransformTrace(tuple(records))
