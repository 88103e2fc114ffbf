"""Brute-force reference implementations used only by the tests.

Nothing here shares code with the algorithms under test beyond the ``Lts``
accessors.
"""

from __future__ import annotations

import math
from collections import deque
from itertools import combinations

import numpy as np

from fairequiv.fairness import FairnessMode, FairnessSpec
from fairequiv.gen import GenParams, random_lts
from fairequiv.lts import FiniteRun, Lasso, Lts, RunLasso


# -- equivalences ---------------------------------------------------------


def naive_bisimilar(lts: Lts) -> set[tuple[int, int]]:
    """Greatest bisimulation by deleting violating pairs until stable."""
    n = lts.state_count
    rel = {(x, y) for x in range(n) for y in range(n)}
    changed = True
    while changed:
        changed = False
        for x, y in sorted(rel):
            ok = all(
                any((x2, y2) in rel for y2 in lts.successors(y, a))
                for a in lts.alphabet for x2 in lts.successors(x, a)
            ) and all(
                any((x2, y2) in rel for x2 in lts.successors(x, a))
                for a in lts.alphabet for y2 in lts.successors(y, a)
            )
            if not ok:
                rel.discard((x, y))
                changed = True
    return rel


def naive_simulates(lts: Lts) -> set[tuple[int, int]]:
    """Pairs ``(x, y)`` with ``y`` simulating ``x``."""
    n = lts.state_count
    rel = {(x, y) for x in range(n) for y in range(n)}
    changed = True
    while changed:
        changed = False
        for x, y in sorted(rel):
            if not all(
                any((x2, y2) in rel for y2 in lts.successors(y, a))
                for a in lts.alphabet for x2 in lts.successors(x, a)
            ):
                rel.discard((x, y))
                changed = True
    return rel


# -- fair runs ------------------------------------------------------------


def same_omega_word(a: Lasso, b: Lasso) -> bool:
    n = max(len(a.stem), len(b.stem)) + math.lcm(len(a.cycle), len(b.cycle))
    return a.prefix(n) == b.prefix(n)


def fair_by_definition(lts: Lts, run: RunLasso, spec: FairnessSpec) -> bool:
    """Strong: an action enabled at some cycle state must be taken on the
    cycle.  Weak: an action enabled at every cycle state must be taken."""
    taken = set(run.cycle.labels)
    cycle_states = run.cycle.states
    for a in spec.actions:
        enabled_at = [a in lts.enabled(s) for s in cycle_states]
        relevant = any(enabled_at) if spec.mode is FairnessMode.STRONG else all(enabled_at)
        if relevant and a not in taken:
            return False
    return True


def _product(lts: Lts, start: int, word: Lasso | None):
    """Product nodes ``(state, position)`` reachable from ``(start, 0)`` and
    labelled edges.  Without a word the position is always 0."""
    def step(pos):
        if word is None:
            return 0
        nxt = pos + 1
        return nxt if nxt < len(word.stem) + len(word.cycle) else len(word.stem)

    def moves(node):
        s, pos = node
        labels = lts.alphabet if word is None else (word.letter(pos),)
        for a in labels:
            for t in sorted(lts.successors(s, a)):
                yield a, (t, step(pos))

    root = (start, 0)
    seen = {root}
    order = [root]
    edges = {}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        edges[u] = list(moves(u))
        for _, v in edges[u]:
            if v not in seen:
                seen.add(v)
                order.append(v)
                queue.append(v)
    return order, edges


def _bfs_path(edges, src, goal, allowed):
    """Labelled edges of a shortest non-empty path from ``src`` to ``goal``
    inside ``allowed`` (``src`` == ``goal`` asks for a cycle)."""
    queue = deque([src])
    parent = {}
    while queue:
        u = queue.popleft()
        for a, v in edges[u]:
            if v not in allowed or v in parent or (v == src and v != goal):
                continue
            parent[v] = (u, a)
            if v == goal:
                path = []
                while True:
                    pu, pa = parent[v]
                    path.append((pu, pa, v))
                    v = pu
                    if v == src:
                        return path[::-1]
            queue.append(v)
    return None


def product_size(lts: Lts, start: int, word: Lasso | None) -> int:
    return len(_product(lts, start, word)[0])


def exhaustive_fair_run(lts: Lts, start: int, word: Lasso | None, spec: FairnessSpec) -> RunLasso | None:
    """Try every set ``D`` of product nodes as the set visited infinitely often.

    For a strongly connected ``D`` the run that walks every edge inside ``D``
    takes the most actions while visiting the same states, so it is fair iff
    any run with infinity set ``D`` is.
    """
    nodes, edges = _product(lts, start, word)
    root = nodes[0]
    for r in range(1, len(nodes) + 1):
        for combo in combinations(nodes, r):
            d = set(combo)
            inner = [(u, a, v) for u in combo for a, v in edges[u] if v in d]
            if not inner:
                continue
            first = combo[0]
            if any(_bfs_path(edges, first, x, d) is None or _bfs_path(edges, x, first, d) is None
                   for x in combo):
                continue
            # covering closed walk: visit every inner edge from ``first``
            walk, here = [], first
            for u, a, v in inner:
                if here != u:
                    walk += _bfs_path(edges, here, u, d)
                walk.append((u, a, v))
                here = v
            if here != first:
                walk += _bfs_path(edges, here, first, d)
            stem = [] if root == first else _bfs_path(edges, root, first, set(nodes))
            run = RunLasso(_as_run(root, stem), _as_run(first, walk))
            if fair_by_definition(lts, run, spec):
                return run
    return None


def _as_run(start_node, path) -> FiniteRun:
    states = [start_node[0]] + [v[0] for _, _, v in path]
    return FiniteRun(tuple(states), tuple(a for _, a, _ in path))


def infinite_trace(lts: Lts, p: int, word: Lasso) -> bool:
    """Whether ``word`` is the trace of some infinite run, by a greatest
    fixpoint over states: keep the states that can read the cycle and land
    in the set again."""
    keep = set(range(lts.state_count))
    while True:
        nxt = {s for s in keep if lts.after(s, word.cycle) & keep}
        if nxt == keep:
            break
        keep = nxt
    return bool(lts.after(p, word.stem) & keep)


# -- sampling -------------------------------------------------------------


def random_walk_word(lts: Lts, p: int, rng: np.random.Generator, length: int) -> tuple[str, ...]:
    word, s = [], p
    for _ in range(length):
        moves = [(a, t) for a in lts.alphabet for t in sorted(lts.successors(s, a))]
        if not moves:
            break
        a, s = moves[int(rng.integers(len(moves)))]
        word.append(a)
    return tuple(word)


def sample_triples(count: int, seed: int):
    """``(lts, process, lasso, spec)`` with about half the lassos following a
    run of the process, so memberships are not mostly negative."""
    rng = np.random.default_rng(seed)
    out = []
    i = 0
    while len(out) < count:
        lts = random_lts(GenParams(states=(1, 6), letters=(1, 3), density=0.3, seed=(seed, i)))
        i += 1
        p = int(rng.integers(lts.state_count))
        sigma = lts.alphabet
        stem_len, cyc_len = int(rng.integers(0, 4)), int(rng.integers(1, 4))
        walk = random_walk_word(lts, p, rng, stem_len + cyc_len)
        if rng.random() < 0.5 and len(walk) == stem_len + cyc_len:
            stem, cycle = walk[:stem_len], walk[stem_len:]
        else:
            letters = rng.integers(len(sigma), size=stem_len + cyc_len)
            word = tuple(sigma[j] for j in letters)
            stem, cycle = word[:stem_len], word[stem_len:]
        actions = frozenset(a for a in sigma if rng.random() < 0.5)
        mode = FairnessMode.STRONG if rng.random() < 0.5 else FairnessMode.WEAK
        out.append((lts, p, Lasso(stem, cycle), FairnessSpec(mode, actions)))
    return out
