"""Brute-force observation enumeration and witness replay.

Nothing here uses the subset-pair exploration of :mod:`.linear`; these
functions read the definitions directly and serve as the reference the
checkers are tested against.
"""

from __future__ import annotations

from ..lts import Lts, LtsError
from .branching import replay_attack
from .kinds import SemanticsKind, Verdict

K = SemanticsKind

MAX_DEPTH = 12


def minimized_trace_classes(lts: Lts) -> tuple[int, ...]:
    """Trace-language classes via the global subset automaton and Moore minimisation.

    Each class is named by its least state index, matching
    :func:`~fairequiv.equiv.linear.trace_classes`.
    """
    n, letters = lts.state_count, range(len(lts.alphabet))
    nodes = {frozenset([s]) for s in range(n)}
    stack = list(nodes)
    delta = {}
    while stack:
        u = stack.pop()
        for a in letters:
            v = lts.post(u, a)
            delta[u, a] = v
            if v not in nodes:
                nodes.add(v)
                stack.append(v)
    block = {u: int(bool(u)) for u in nodes}
    while True:
        ids: dict = {}
        new = {
            u: ids.setdefault((block[u],) + tuple(block[delta[u, a]] for a in letters), len(ids))
            for u in nodes
        }
        if len(ids) == len(set(block.values())):
            break
        block = new
    first: dict[int, int] = {}
    return tuple(first.setdefault(block[frozenset([s])], s) for s in range(n))


def _level_sets(lts: Lts, p: int, depth: int):
    """Yield ``(trace, reached states)`` pairs level by level."""
    frontier = {(): frozenset([p])}
    for d in range(depth + 1):
        yield from frontier.items()
        if d == depth:
            return
        nxt: dict[tuple, set] = {}
        for word, states in frontier.items():
            for s in states:
                for a, ts in lts.out(s).items():
                    nxt.setdefault(word + (lts.alphabet[a],), set()).update(ts)
        frontier = {w: frozenset(ts) for w, ts in nxt.items()}


def _subsets(mask: int):
    sub = mask
    while True:
        yield sub
        if not sub:
            return
        sub = (sub - 1) & mask


def _vectors(lts: Lts, p: int, depth: int, annotate) -> set[tuple]:
    """All ``(X0, a1, X1, ..., an, Xn)`` words along runs of length <= depth."""
    memo: dict[tuple[int, int], set[tuple]] = {}

    def words(s: int, d: int) -> set[tuple]:
        got = memo.get((s, d))
        if got is None:
            head = (annotate(s),)
            got = {head}
            if d:
                for a, ts in lts.out(s).items():
                    pre = head + (a,)
                    for t in ts:
                        got.update(pre + w for w in words(t, d - 1))
            memo[s, d] = got
        return got

    return words(p, depth)


def _maximal_refusal_vectors(lts: Lts, p: int, depth: int) -> dict[tuple, list[tuple]]:
    """Per action sequence of length <= depth, the pointwise-maximal
    ``(X0, ..., Xn)`` refusal vectors along runs with those actions.

    Prefixing the same refusal keeps domination, so maximality can be
    taken level by level instead of on the full set of runs."""
    memo: dict[tuple[int, int], dict[tuple, list[tuple]]] = {}

    def vectors(s: int, d: int) -> dict[tuple, list[tuple]]:
        got = memo.get((s, d))
        if got is None:
            x = lts.refusal_mask(s)
            buckets: dict[tuple, list[tuple]] = {(): [(x,)]}
            if d:
                for a, ts in lts.out(s).items():
                    for t in ts:
                        for actions, tails in vectors(t, d - 1).items():
                            buckets.setdefault((a,) + actions, []).extend((x,) + v for v in tails)
            got = memo[s, d] = {k: _pointwise_maximal(v) for k, v in buckets.items()}
        return got

    return vectors(p, depth)


def _pointwise_maximal(sets: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    # a dominating vector has strictly more elements, so scanning by size
    # only needs to compare against the maximal vectors found so far
    if len(sets) == 1:
        return sets
    ordered = sorted(set(sets), key=lambda xs: -sum(x.bit_count() for x in xs))
    maximal: list[tuple[int, ...]] = []
    for xs in ordered:
        if not any(all(x & y == x for x, y in zip(xs, ys)) for ys in maximal):
            maximal.append(xs)
    return maximal


def enumerate_observations(lts: Lts, p: int, kind: SemanticsKind, depth: int) -> frozenset:
    """Observations of ``p`` of the given kind with at most ``depth`` actions.

    Trace, ready, failures and possible-futures observations are listed in
    full (possible futures name the reached trace class by its least state).
    Failure and ready traces are listed in their saturated form, a set letter
    after every action: ``X0 a1 X1 ... an Xn``.  For ready traces that is the
    unique letter each state allows; for failure traces ``Xi`` is the
    maximal refusal and only the pointwise-maximal words are kept.  Every
    other failure (ready) trace of bounded length is obtained from these by
    shrinking or dropping set letters, so two processes have equal bounded
    observation sets exactly when these representations are equal.
    """
    lts._check_state(p)
    if kind in (K.SIMULATION, K.BISIMULATION):
        raise LtsError(f"{kind.value} has no observation sets")
    if not 0 <= depth <= MAX_DEPTH:
        raise LtsError(f"depth must lie in [0, {MAX_DEPTH}]")
    names = lts.names
    if kind == K.TRACE:
        return frozenset(w for w, _ in _level_sets(lts, p, depth))
    if kind == K.READY:
        return frozenset(
            (w, names(lts.enabled_mask(s))) for w, states in _level_sets(lts, p, depth) for s in states
        )
    if kind == K.FAILURES:
        return frozenset(
            (w, names(x))
            for w, states in _level_sets(lts, p, depth)
            for s in states
            for x in _subsets(lts.refusal_mask(s))
        )
    if kind == K.POSSIBLE_FUTURES:
        classes = minimized_trace_classes(lts)
        return frozenset((w, classes[s]) for w, states in _level_sets(lts, p, depth) for s in states)
    if kind == K.READY_TRACE:
        vectors = _vectors(lts, p, depth, lts.enabled_mask)
    elif kind == K.FAILURE_TRACE:
        vectors = set()
        for actions, maximal in _maximal_refusal_vectors(lts, p, depth).items():
            for xs in maximal:
                word = [xs[0]]
                for a, x in zip(actions, xs[1:]):
                    word += [a, x]
                vectors.add(tuple(word))
    else:
        raise LtsError(f"unsupported kind {kind}")
    table = {x: names(x) for x in {x for v in vectors for x in v[0::2]}}
    alphabet = lts.alphabet
    out = set()
    for v in vectors:
        w = [None] * len(v)
        w[0::2] = map(table.__getitem__, v[0::2])
        w[1::2] = map(alphabet.__getitem__, v[1::2])
        out.add(tuple(w))
    return frozenset(out)


# -- membership of single observations ------------------------------------


def _run_extended(lts: Lts, p: int, word, admits) -> bool:
    current = frozenset([p])
    for letter in word:
        if isinstance(letter, str):
            current = lts.post(current, lts.index(letter))
        else:
            x = lts.mask(letter)
            current = frozenset(s for s in current if admits(s, x))
        if not current:
            return False
    return True


def has_observation(lts: Lts, p: int, kind: SemanticsKind, observation) -> bool:
    """Decide directly from the definition whether ``p`` has ``observation``."""
    if kind == K.TRACE:
        return bool(lts.after(p, observation))
    if kind == K.FAILURE_TRACE:
        return _run_extended(lts, p, observation, lambda s, x: x & lts.refusal_mask(s) == x)
    if kind == K.READY_TRACE:
        return _run_extended(lts, p, observation, lambda s, x: lts.enabled_mask(s) == x)
    trace, extra = observation
    reached = lts.after(p, trace)
    if kind == K.READY:
        return any(lts.enabled(s) == extra for s in reached)
    if kind == K.FAILURES:
        return any(extra <= lts.maximal_refusal(s) for s in reached)
    if kind == K.POSSIBLE_FUTURES:
        classes = minimized_trace_classes(lts)
        return any(classes[s] == extra for s in reached)
    raise LtsError(f"unsupported kind {kind}")


def replay_witness(lts: Lts, p: int, q: int, verdict: Verdict) -> bool:
    """True iff the verdict's witness is an observation of exactly the process it names."""
    if verdict.witness is None:
        return False
    w = verdict.witness
    if verdict.kind in (K.SIMULATION, K.BISIMULATION):
        one_sided = verdict.kind == K.SIMULATION
        if one_sided and w.observation.side != w.present_in:
            return False
        return replay_attack(lts, p, q, w.observation, one_sided=one_sided)
    procs = (p, q)
    return has_observation(lts, procs[w.present_in], verdict.kind, w.observation) and not has_observation(
        lts, procs[1 - w.present_in], verdict.kind, w.observation
    )
