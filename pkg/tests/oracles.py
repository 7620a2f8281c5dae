"""Independent oracles for the test suite.

Everything here recomputes expected values from first principles (naive
fixpoints, explicit enumeration, matrix powering) without touching the
algorithms under test, so agreement is meaningful.
"""

from itertools import product

TAU = "tau"


# --- naive greatest-fixpoint bisimulations ----------------------------------

def _succ_map(lts):
    succ = {q: [] for q in range(lts.n_states)}
    for s, a, d in lts.edges:
        succ[s].append((a, d))
    return succ


def naive_strong_bisim(l1, l2) -> bool:
    """Greatest fixpoint of the strong transfer conditions over Q1 x Q2."""
    succ1, succ2 = _succ_map(l1), _succ_map(l2)
    related = set(product(range(l1.n_states), range(l2.n_states)))
    changed = True
    while changed:
        changed = False
        for (q1, q2) in list(related):
            ok = all(
                any((a2 == a1 and (d1, d2) in related) for a2, d2 in succ2[q2])
                for a1, d1 in succ1[q1]
            ) and all(
                any((a1 == a2 and (d1, d2) in related) for a1, d1 in succ1[q1])
                for a2, d2 in succ2[q2]
            )
            if not ok:
                related.discard((q1, q2))
                changed = True
    return (l1.initial, l2.initial) in related


def _eps_reach(succ, q):
    seen = {q}
    stack = [q]
    while stack:
        cur = stack.pop()
        for a, d in succ[cur]:
            if a == TAU and d not in seen:
                seen.add(d)
                stack.append(d)
    return seen


def _weak_answers(succ, q, action):
    """States reachable by (eps, action, eps) for visible actions, or eps alone."""
    first = _eps_reach(succ, q)
    if action == TAU:
        return first
    mids = set()
    for m in first:
        for a, d in succ[m]:
            if a == action:
                mids.add(d)
    out = set()
    for m in mids:
        out |= _eps_reach(succ, m)
    return out


def naive_weak_bisim(l1, l2) -> bool:
    """Greatest fixpoint of the weak transfer conditions: single-step challenges,
    saturated answers."""
    succ1, succ2 = _succ_map(l1), _succ_map(l2)
    related = set(product(range(l1.n_states), range(l2.n_states)))
    changed = True
    while changed:
        changed = False
        for (q1, q2) in list(related):
            ok = all(
                any((d1, d2) in related for d2 in _weak_answers(succ2, q2, a1))
                for a1, d1 in succ1[q1]
            ) and all(
                any((d1, d2) in related for d1 in _weak_answers(succ1, q1, a2))
                for a2, d2 in succ2[q2]
            )
            if not ok:
                related.discard((q1, q2))
                changed = True
    return (l1.initial, l2.initial) in related


def audit_relation(l1, l2, relation, weak=False) -> bool:
    """Replay the transfer conditions for every pair of a claimed bisimulation."""
    succ1, succ2 = _succ_map(l1), _succ_map(l2)
    pairs = set(relation)
    if (l1.initial, l2.initial) not in pairs:
        return False
    for q1, q2 in pairs:
        for a1, d1 in succ1[q1]:
            answers = _weak_answers(succ2, q2, a1) if weak else {d for a, d in succ2[q2] if a == a1}
            if not any((d1, d2) in pairs for d2 in answers):
                return False
        for a2, d2 in succ2[q2]:
            answers = _weak_answers(succ1, q1, a2) if weak else {d for a, d in succ1[q1] if a == a2}
            if not any((d1, d2) in pairs for d1 in answers):
                return False
    return True


# --- explicit net reachability ------------------------------------------------

def enumerate_reachability(places, transitions, edges, labelling, m0, cap=100_000):
    """Explicit reachability graph over dict markings.

    Returns (markings, triples) where markings are frozensets of (place, count)
    items and triples are (marking, action, marking).
    """
    pre = {t: sorted(p for p, t2 in edges if t2 == t) for t in transitions}
    post = {t: sorted(p for t2, p in edges if t2 == t) for t in transitions}

    def freeze(m):
        return frozenset((p, c) for p, c in m.items() if c > 0)

    start = dict(m0)
    seen = {freeze(start)}
    stack = [start]
    triples = set()
    while stack:
        m = stack.pop()
        for t in transitions:
            if all(m.get(p, 0) >= 1 for p in pre[t]):
                nxt = dict(m)
                for p in pre[t]:
                    nxt[p] -= 1
                for p in post[t]:
                    nxt[p] = nxt.get(p, 0) + 1
                triples.add((freeze(m), labelling[t], freeze(nxt)))
                if freeze(nxt) not in seen:
                    if len(seen) >= cap:
                        raise RuntimeError("oracle cap exceeded")
                    seen.add(freeze(nxt))
                    stack.append(nxt)
    return seen, triples


def lts_triples(lts):
    """Edges of an LTS as (display label, action, display label) triples."""
    return {(lts.labels[s], a, lts.labels[d]) for s, a, d in lts.edges}


# --- boolean matrix closure ---------------------------------------------------

def matrix_weak_edges(lts):
    """Saturated edge set computed by boolean matrix powering (small LTSs only)."""
    n = lts.n_states
    tau = [[i == j for j in range(n)] for i in range(n)]
    for s, a, d in lts.edges:
        if a == TAU:
            tau[s][d] = True
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if not tau[i][j] and any(tau[i][k] and tau[k][j] for k in range(n)):
                    tau[i][j] = True
                    changed = True
    out = set()
    for i in range(n):
        for j in range(n):
            if tau[i][j]:
                out.add((i, TAU, j))
    visible = {}
    for s, a, d in lts.edges:
        if a != TAU:
            visible.setdefault(a, set()).add((s, d))
    for a, pairs in visible.items():
        for i in range(n):
            for j in range(n):
                if any(tau[i][s] and tau[d][j] for s, d in pairs):
                    out.add((i, a, j))
    return out


def has_reachable_tau_cycle(lts) -> bool:
    """Divergence oracle: for every reachable state, search a τ-path back to itself."""
    succ = _succ_map(lts)
    reachable = {lts.initial}
    stack = [lts.initial]
    while stack:
        for _, d in succ[stack.pop()]:
            if d not in reachable:
                reachable.add(d)
                stack.append(d)
    for q in reachable:
        seen = set()
        stack = [d for a, d in succ[q] if a == TAU]
        while stack:
            cur = stack.pop()
            if cur == q:
                return True
            if cur in seen:
                continue
            seen.add(cur)
            stack.extend(d for a, d in succ[cur] if a == TAU)
    return False
