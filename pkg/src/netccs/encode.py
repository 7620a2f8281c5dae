"""Net-to-CCS encoders and the composed translation pipelines.

Every place p becomes one defining equation: a choice with one summand per
transition in p's postset. A transition with a single ingoing edge contributes
its label prefixing the parallel production of its output places. A
τ-transition with two ingoing edges becomes a synchronisation over a fresh
restricted action: the lexicographically larger ingoing place carries the
input-prefixed production, the smaller carries the co-action followed by nil.
Zero-preset transitions (allowed by the binary-τ class only) become
self-respawning generator equations added on top. The top-level process is the
restriction of all fresh synchronisation actions over one parallel replica of
a place process per token.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .ccs import (
    Action,
    DefiningEquations,
    NIL,
    NameRef,
    Prefix,
    Process,
    Restriction,
    TAU_ACTION,
    par_of,
    restrict_chain,
    sum_of,
    term_size,
)
from .errors import PreconditionError
from .lts import TAU
from .nets import Marking, PetriNet, classify
from .transform import TransformTrace, group_reduce, reduce_presets


@dataclass(frozen=True)
class EncodingResult:
    """Top-level process, its defining equations, and the net-element name map."""

    process: Process
    defs: DefiningEquations
    name_map: Mapping[str, str] = field(default_factory=dict)

    def equation_count(self) -> int:
        return len(self.defs)

    def restricted_names(self) -> tuple[str, ...]:
        names = []
        node = self.process
        while isinstance(node, Restriction):
            names.append(node.name)
            node = node.body
        return tuple(names)

    def symbol_count(self) -> int:
        total = term_size(self.process)
        for _, body in self.defs.items():
            total += 1 + term_size(body)
        return total


def _prefix_action(label: str) -> Action:
    return TAU_ACTION if label == TAU else Action.inp(label)


def _sync_names(net: PetriNet) -> dict[str, str]:
    """Fresh restricted action per two-preset τ-transition, dodging the net alphabet."""
    taken = set(net.actions)
    names: dict[str, str] = {}
    for t in net.transitions:
        if len(net.preset(t)) != 2:
            continue
        base = f"s_{t}"
        candidate, k = base, 1
        while candidate in taken:
            k += 1
            candidate = f"{base}_{k}"
        taken.add(candidate)
        names[t] = candidate
    return names


def _production(net: PetriNet, t: str) -> Process:
    return par_of(NameRef(f"X_{p}") for p in net.postset_of_transition(t))


def _place_equations(net: PetriNet, syncs: dict[str, str]) -> dict[str, Process]:
    defs: dict[str, Process] = {}
    for p in net.places:
        terms = []
        for t in net._post_of_place[p]:
            pre = net.preset(t)
            if len(pre) == 1:
                terms.append(Prefix(_prefix_action(net.label(t)), _production(net, t)))
            else:
                smaller, larger = pre
                if p == larger:
                    terms.append(Prefix(Action.inp(syncs[t]), _production(net, t)))
                else:
                    terms.append(Prefix(Action.out(syncs[t]), NIL))
        defs[f"X_{p}"] = sum_of(terms)
    return defs


def _token_factors(net: PetriNet, m0: Marking) -> list[Process]:
    factors: list[Process] = []
    for p in net.places:
        factors.extend([NameRef(f"X_{p}")] * m0.count(p))
    return factors


def encode_ccs_net(net: PetriNet, m0: Marking) -> EncodingResult:
    """Encode a net whose transitions have one or two ingoing edges (two implies τ)."""
    flags = classify(net)
    if not flags.is_ccs_net:
        notes = flags.diagnostics.get("ccs_net", ())
        raise PreconditionError(f"not a CCS net: {'; '.join(notes)}", violations=notes)
    syncs = _sync_names(net)
    defs = _place_equations(net, syncs)
    process = restrict_chain(sorted(syncs.values()), par_of(_token_factors(net, m0)))
    name_map = {p: f"X_{p}" for p in net.places}
    name_map.update(syncs)
    return EncodingResult(process, DefiningEquations(defs), name_map)


def encode_2tau(net: PetriNet, m0: Marking) -> EncodingResult:
    """Encode a net with at most two ingoing edges per transition (two implies τ).

    Zero-preset transitions become generator equations that respawn themselves,
    and one replica of each generator joins the top-level composition.
    """
    flags = classify(net)
    if not flags.is_2tau_sync:
        notes = flags.diagnostics.get("2tau_sync", ())
        raise PreconditionError(f"not a 2-tau-synchronisation net: {'; '.join(notes)}", violations=notes)
    syncs = _sync_names(net)
    defs = _place_equations(net, syncs)
    generators = [t for t in net.transitions if not net.preset(t)]
    for t in generators:
        body = par_of([NameRef(f"X_{t}"), *(NameRef(f"X_{p}") for p in net.postset_of_transition(t))])
        defs[f"X_{t}"] = Prefix(_prefix_action(net.label(t)), body)
    factors = _token_factors(net, m0) + [NameRef(f"X_{t}") for t in generators]
    process = restrict_chain(sorted(syncs.values()), par_of(factors))
    name_map = {p: f"X_{p}" for p in net.places}
    name_map.update({t: f"X_{t}" for t in generators})
    name_map.update(syncs)
    return EncodingResult(process, DefiningEquations(defs), name_map)


def _require(net: PetriNet, flag: str, force: bool) -> None:
    flags = classify(net)
    ok = {
        "free_choice_workflow": flags.is_free_choice_workflow,
        "free_choice": flags.is_free_choice,
        "group_choice": flags.is_group_choice,
    }[flag]
    if ok or force:
        return
    notes = []
    if flag == "free_choice_workflow":
        notes = list(flags.diagnostics.get("workflow", ())) + list(flags.diagnostics.get("free_choice", ()))
    else:
        notes = list(flags.diagnostics.get(flag, ()))
    raise PreconditionError(f"not a {flag.replace('_', '-')} net: {'; '.join(notes)}", violations=notes)


def encode_free_choice_workflow(
    net: PetriNet, m0: Marking, *, force: bool = False, seed: int | None = None
) -> tuple[EncodingResult, TransformTrace]:
    """Preset-reduce a free-choice workflow net, then encode the resulting net directly."""
    _require(net, "free_choice_workflow", force)
    reduced, m, trace = reduce_presets(net, m0, force=force, seed=seed)
    return encode_ccs_net(reduced, m), trace


def encode_free_choice(
    net: PetriNet, m0: Marking, *, force: bool = False, seed: int | None = None
) -> tuple[EncodingResult, TransformTrace]:
    """Preset-reduce a free-choice net, then encode with generator support."""
    _require(net, "free_choice", force)
    reduced, m, trace = reduce_presets(net, m0, force=force, seed=seed)
    return encode_2tau(reduced, m), trace


def encode_group_choice(
    net: PetriNet, m0: Marking, *, force: bool = False, seed: int | None = None
) -> tuple[EncodingResult, TransformTrace]:
    """Group-reduce a group-choice net, then encode with generator support."""
    _require(net, "group_choice", force)
    reduced, m, trace = group_reduce(net, m0, force=force, seed=seed)
    return encode_2tau(reduced, m), trace
