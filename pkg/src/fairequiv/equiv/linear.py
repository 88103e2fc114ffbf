"""Subset-construction checkers for the trace-like semantics.

Every check explores pairs ``(S, T)`` of state sets reached from ``{p}`` and
``{q}`` by the same (possibly extended) word, breadth first with letters in
a fixed order, and compares an annotation of each pair.  The first mismatch
therefore yields a shortest, then lexicographically least, witness.

Infinite traces need no separate treatment: a finite LTS is finitely
branching, so by Koenig's lemma an infinite (failure/ready) word is an
infinite trace exactly when all its finite prefixes are traces.  Equality of
the finite observation sets thus decides the infinitary equivalences.
"""

from __future__ import annotations

from collections import deque
from typing import Callable, Iterable

from ..lts import Lts, LtsError
from .kinds import SemanticsKind, Verdict, Witness

K = SemanticsKind

DEFAULT_ALPHABET_CAP = 16

StateSet = frozenset
# internal letters: action index (int) or ("set", mask)
Letter = object


def _mask_key(mask: int):
    return (bin(mask).count("1"), [i for i in range(mask.bit_length()) if mask >> i & 1])


def _antichain_max(masks: Iterable[int]) -> frozenset[int]:
    ms = set(masks)
    return frozenset(m for m in ms if not any(m != o and m & o == m for o in ms))


def _public_letter(lts: Lts, letter) -> object:
    if isinstance(letter, int):
        return lts.alphabet[letter]
    return lts.names(letter[1])


def _explore(
    lts: Lts,
    p: int,
    q: int,
    letters: Callable[[StateSet, StateSet], list],
    step: Callable[[StateSet, object], StateSet],
    mismatch: Callable[[StateSet, StateSet], tuple[object, int] | None],
) -> tuple[tuple, object, int] | None:
    """Breadth-first search for a pair with differing annotations.

    Returns ``(path, detail, side)`` for the first mismatch, or ``None``.
    """
    lts._check_state(p)
    lts._check_state(q)
    start = (frozenset([p]), frozenset([q]))
    seen = {start}
    queue = deque([(start, ())])
    while queue:
        (S, T), path = queue.popleft()
        found = mismatch(S, T)
        if found is not None:
            return path, found[0], found[1]
        for letter in letters(S, T):
            nxt = (step(S, letter), step(T, letter))
            if not nxt[0] and not nxt[1]:
                continue
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, path + (letter,)))
    return None


def _action_letters(lts: Lts, S: StateSet, T: StateSet) -> list[int]:
    m = 0
    for s in S | T:
        m |= lts.enabled_mask(s)
    return [i for i in range(len(lts.alphabet)) if m >> i & 1]


def _emptiness(S: StateSet, T: StateSet):
    if bool(S) != bool(T):
        return None, 0 if S else 1
    return None


def _trace_of(lts: Lts, path) -> tuple[str, ...]:
    return tuple(lts.alphabet[a] for a in path)


def check_trace_equiv(lts: Lts, p: int, q: int) -> Verdict:
    found = _explore(
        lts, p, q,
        lambda S, T: _action_letters(lts, S, T),
        lts.post,
        _emptiness,
    )
    if found is None:
        return Verdict(K.TRACE, True)
    path, _, side = found
    return Verdict(K.TRACE, False, Witness(_trace_of(lts, path), side))


def _set_annotation_check(kind: SemanticsKind, lts: Lts, p: int, q: int, annotate, choose) -> Verdict:
    """Generic check comparing ``annotate(S)`` with ``annotate(T)`` along traces.

    ``choose(ann_S, ann_T)`` returns ``(detail, side)`` for differing annotations.
    """

    def mismatch(S, T):
        a, b = annotate(S), annotate(T)
        return None if a == b else choose(a, b)

    found = _explore(lts, p, q, lambda S, T: _action_letters(lts, S, T), lts.post, mismatch)
    if found is None:
        return Verdict(kind, True)
    path, detail, side = found
    return Verdict(kind, False, Witness((_trace_of(lts, path), detail), side))


def _least_of_difference(a: frozenset, b: frozenset, key) -> tuple[object, int]:
    candidates = [(key(x), x, 0) for x in a - b] + [(key(x), x, 1) for x in b - a]
    _, x, side = min(candidates, key=lambda c: (c[0], c[2]))
    return x, side


def check_ready_equiv(lts: Lts, p: int, q: int) -> Verdict:
    def choose(a, b):
        mask, side = _least_of_difference(a, b, _mask_key)
        return lts.names(mask), side

    return _set_annotation_check(
        K.READY, lts, p, q,
        lambda S: frozenset(lts.enabled_mask(s) for s in S),
        choose,
    )


def check_failures_equiv(lts: Lts, p: int, q: int) -> Verdict:
    """Failure pairs are the downward closure of the maximal refusals, so
    comparing the antichains of maximal refusals along each trace suffices."""

    def choose(a, b):
        if not a or not b:
            return frozenset(), 0 if a else 1
        # a maximal refusal of one side that no refusal of the other covers
        candidates = [(m, 0) for m in a if not any(m & o == m for o in b)]
        candidates += [(m, 1) for m in b if not any(m & o == m for o in a)]
        mask, side = min(candidates, key=lambda c: (_mask_key(c[0]), c[1]))
        return lts.names(mask), side

    return _set_annotation_check(
        K.FAILURES, lts, p, q,
        lambda S: _antichain_max(lts.refusal_mask(s) for s in S),
        choose,
    )


def trace_classes(lts: Lts) -> tuple[int, ...]:
    """Finite-trace-language class of every state, named by its least member."""
    reps: list[int] = []
    classes = []
    for s in range(lts.state_count):
        for r in reps:
            if check_trace_equiv(lts, r, s).equivalent:
                classes.append(r)
                break
        else:
            reps.append(s)
            classes.append(s)
    return tuple(classes)


def check_possible_futures_equiv(lts: Lts, p: int, q: int, classes: tuple[int, ...] | None = None) -> Verdict:
    """Possible futures pair a trace with the full trace language reached.

    ``classes`` may pass a precomputed :func:`trace_classes` result.
    """
    lts._check_state(p)
    lts._check_state(q)
    if classes is None:
        classes = trace_classes(lts)
    return _set_annotation_check(
        K.POSSIBLE_FUTURES, lts, p, q,
        lambda S: frozenset(classes[s] for s in S),
        lambda a, b: _least_of_difference(a, b, lambda c: c),
    )


def _extended_check(kind, lts, p, q, set_letters, admits) -> Verdict:
    def letters(S, T):
        sets = sorted(set_letters(S | T), key=_mask_key)
        return _action_letters(lts, S, T) + [("set", m) for m in sets]

    def step(S, letter):
        if isinstance(letter, int):
            return lts.post(S, letter)
        return frozenset(s for s in S if admits(s, letter[1]))

    found = _explore(lts, p, q, letters, step, _emptiness)
    if found is None:
        return Verdict(kind, True)
    path, _, side = found
    word = tuple(_public_letter(lts, x) for x in path)
    return Verdict(kind, False, Witness(word, side))


def _intersection_closure(masks: Iterable[int]) -> set[int]:
    closure = set(masks)
    frontier = set(closure)
    while frontier:
        new = {a & b for a in frontier for b in closure} - closure
        closure |= new
        frontier = new
    return closure


def check_failure_trace_equiv(
    lts: Lts,
    p: int,
    q: int,
    *,
    max_alphabet: int = DEFAULT_ALPHABET_CAP,
    refusal_letters: str = "closure",
) -> Verdict:
    """Failure-trace equivalence.

    A refusal letter ``X`` keeps exactly the states whose maximal refusal
    contains ``X``.  Which states survive depends only on the intersection
    of their refusals, so with ``refusal_letters="closure"`` only the
    intersection closure of the refusals present is tried.  ``"powerset"``
    tries every subset of the alphabet (reference mode, small alphabets).
    """
    if len(lts.alphabet) > max_alphabet:
        raise LtsError(
            f"alphabet of size {len(lts.alphabet)} exceeds the failure-trace cap {max_alphabet}"
        )
    if refusal_letters == "closure":
        set_letters = lambda S: _intersection_closure(lts.refusal_mask(s) for s in S)  # noqa: E731
    elif refusal_letters == "powerset":
        all_masks = range(lts.full_mask + 1)
        set_letters = lambda S: all_masks  # noqa: E731
    else:
        raise ValueError(f"unknown refusal letter mode {refusal_letters!r}")
    refusal = [lts.refusal_mask(s) for s in range(lts.state_count)]
    return _extended_check(
        K.FAILURE_TRACE, lts, p, q, set_letters,
        lambda s, x: x & refusal[s] == x,
    )


def check_ready_trace_equiv(lts: Lts, p: int, q: int) -> Verdict:
    enabled = [lts.enabled_mask(s) for s in range(lts.state_count)]
    return _extended_check(
        K.READY_TRACE, lts, p, q,
        lambda S: {enabled[s] for s in S},
        lambda s, x: enabled[s] == x,
    )
