"""Bisimulation checking and related finite-LTS analyses.

Strong equivalence is decided by partition refinement on the disjoint union
of the two systems: states are regrouped by the signature of their outgoing
moves (action, target block) until the partition stabilises, which yields the
relational coarsest partition. The weak checker runs the same refinement on
the saturated systems produced by `weak_closure`, so a τ challenge is answered
by ε-reachability and a visible challenge by the saturated visible move, which
matches the transfer conditions of weak bisimulation.

Divergence is reported as a reachable cycle of internal moves, the
finite-state reading of an infinite internal path.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lts import TAU, Lts


@dataclass(frozen=True)
class Distinguisher:
    """A shortest action sequence one side can follow and the other cannot match."""

    actions: tuple[str, ...]
    refusing_side: int  # 1 or 2

    def describe(self) -> str:
        return f"after {' '.join(self.actions) or '<empty>'}, side {self.refusing_side} cannot answer"


@dataclass(frozen=True)
class EquivalenceReport:
    mode: str  # "strong" | "weak"
    verdict: bool
    relation: frozenset[tuple[int, int]] | None = None
    distinguisher: Distinguisher | None = None


def _epsilon_closure(lts: Lts) -> list[set[int]]:
    succ = lts.successors
    closures: list[set[int]] = []
    for start in range(lts.n_states):
        seen = {start}
        stack = [start]
        while stack:
            q = stack.pop()
            for action, nxt in succ[q]:
                if action == TAU and nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        closures.append(seen)
    return closures


def weak_closure(lts: Lts) -> Lts:
    """Saturate the transition relation.

    In the result an internal edge means "reachable by zero or more internal
    steps" (so every state carries a reflexive one), and a visible edge means
    "internal steps, one visible step, internal steps".
    """
    closures = _epsilon_closure(lts)
    succ = lts.successors
    edges: set[tuple[int, str, int]] = set()
    for q in range(lts.n_states):
        for mid in closures[q]:
            edges.add((q, TAU, mid))
            for action, nxt in succ[mid]:
                if action == TAU:
                    continue
                for target in closures[nxt]:
                    edges.add((q, action, target))
    return Lts(
        n_states=lts.n_states,
        initial=lts.initial,
        edges=frozenset(edges),
        actions=lts.actions,
        labels=lts.labels,
    )


def _disjoint_union(l1: Lts, l2: Lts) -> tuple[int, list[tuple[int, str, int]], int, int]:
    offset = l1.n_states
    edges = list(l1.edges) + [(s + offset, a, d + offset) for s, a, d in l2.edges]
    return l1.n_states + l2.n_states, edges, l1.initial, l2.initial + offset


def _refine(n: int, edges: list[tuple[int, str, int]], history: list[list[int]] | None = None) -> list[int]:
    """Signature-based partition refinement to the coarsest stable partition."""
    block = [0] * n
    n_blocks = 1
    if history is not None:
        history.append(block[:])
    while True:
        sigs: list[list[tuple[str, int]]] = [[] for _ in range(n)]
        for src, action, dst in edges:
            sigs[src].append((action, block[dst]))
        table: dict = {}
        new = [0] * n
        for q in range(n):
            key = (block[q], frozenset(sigs[q]))
            idx = table.get(key)
            if idx is None:
                idx = len(table)
                table[key] = idx
            new[q] = idx
        if len(table) == n_blocks:
            return block
        block = new
        n_blocks = len(table)
        if history is not None:
            history.append(block[:])


def _relation_from_blocks(block: list[int], l1: Lts, l2: Lts) -> frozenset[tuple[int, int]]:
    offset = l1.n_states
    left: dict[int, list[int]] = {}
    right: dict[int, list[int]] = {}
    for q in range(l1.n_states):
        left.setdefault(block[q], []).append(q)
    for q in range(l2.n_states):
        right.setdefault(block[q + offset], []).append(q)
    pairs = set()
    for b, qs in left.items():
        for q1 in qs:
            for q2 in right.get(b, ()):
                pairs.add((q1, q2))
    return frozenset(pairs)


def _extract_distinguisher(l1: Lts, l2: Lts) -> Distinguisher:
    """Shortest-first extraction over the refinement history.

    The k-th refinement round separates exactly the states distinguishable by
    depth-k play, so walking the first separating rounds downwards yields a
    shortest sequence; ties break on action-name order.
    """
    n, edges, u0, v0 = _disjoint_union(l1, l2)
    history: list[list[int]] = []
    _refine(n, edges, history)
    succ: list[dict[str, list[int]]] = [{} for _ in range(n)]
    for src, action, dst in edges:
        succ[src].setdefault(action, []).append(dst)

    def sep_round(u: int, v: int) -> int | None:
        for r, blocks in enumerate(history):
            if blocks[u] != blocks[v]:
                return r
        return None

    def extract(u: int, v: int, r: int) -> tuple[list[str], int]:
        prev = history[r - 1]
        for action in sorted(set(succ[u]) | set(succ[v])):
            u_targets = {prev[d] for d in succ[u].get(action, ())}
            v_targets = {prev[d] for d in succ[v].get(action, ())}
            for challenger, defender, only in ((u, v, u_targets - v_targets), (v, u, v_targets - u_targets)):
                if not only:
                    continue
                defender_side = 1 if defender < l1.n_states else 2
                d_moves = succ[defender].get(action, [])
                if not d_moves:
                    return [action], defender_side
                chosen_block = min(only)
                c_target = min(d for d in succ[challenger].get(action, ()) if prev[d] == chosen_block)
                best = None
                for d in d_moves:
                    depth = sep_round(c_target, d)
                    if depth is None:
                        continue
                    if best is None or depth > best[0] or (depth == best[0] and d < best[1]):
                        best = (depth, d)
                if best is None:
                    return [action], defender_side
                rest, side = extract(c_target, best[1], best[0])
                return [action] + rest, side
        raise AssertionError("separated states must differ on some signature")

    first = sep_round(u0, v0)
    assert first is not None and first >= 1
    actions, side = extract(u0, v0, first)
    return Distinguisher(tuple(actions), side)


def _bisim(l1: Lts, l2: Lts, mode: str) -> EquivalenceReport:
    n, edges, u0, v0 = _disjoint_union(l1, l2)
    block = _refine(n, edges)
    if block[u0] == block[v0]:
        return EquivalenceReport(mode=mode, verdict=True, relation=_relation_from_blocks(block, l1, l2))
    return EquivalenceReport(mode=mode, verdict=False, distinguisher=_extract_distinguisher(l1, l2))


def strong_bisim(l1: Lts, l2: Lts) -> EquivalenceReport:
    """Are the initial states strongly bisimilar?"""
    return _bisim(l1, l2, "strong")


def weak_bisim(l1: Lts, l2: Lts) -> EquivalenceReport:
    """Are the initial states weakly bisimilar?

    Divergence is deliberately ignored here; pair this with
    `has_divergent_path` when divergence equivalence matters.
    """
    return _bisim(weak_closure(l1), weak_closure(l2), "weak")


def has_divergent_path(lts: Lts) -> bool:
    """Is a cycle of internal moves (including a self-loop) reachable from the initial state?"""
    succ = lts.successors
    reachable = {lts.initial}
    stack = [lts.initial]
    while stack:
        q = stack.pop()
        for _, nxt in succ[q]:
            if nxt not in reachable:
                reachable.add(nxt)
                stack.append(nxt)

    tau_succ = {q: [d for a, d in succ[q] if a == TAU] for q in reachable}
    WHITE, GREY, BLACK = 0, 1, 2
    colour = dict.fromkeys(reachable, WHITE)
    for root in reachable:
        if colour[root] != WHITE:
            continue
        stack = [(root, iter(tau_succ[root]))]
        colour[root] = GREY
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt not in reachable:
                    continue
                if colour[nxt] == GREY:
                    return True
                if colour[nxt] == WHITE:
                    colour[nxt] = GREY
                    stack.append((nxt, iter(tau_succ[nxt])))
                    advanced = True
                    break
            if not advanced:
                colour[node] = BLACK
                stack.pop()
    return False


def deadlocks(lts: Lts) -> frozenset[int]:
    """States with no outgoing edges at all."""
    succ = lts.successors
    return frozenset(q for q in range(lts.n_states) if not succ[q])
