"""Finite labelled transition systems, runs and the Aldebaran ``.aut`` format.

Processes are plain state indices of an :class:`Lts`.  Sets of actions are
exposed as ``frozenset`` of action names; internally they are bitmasks over
the (sorted) alphabet.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "AutParseError",
    "FiniteRun",
    "Lasso",
    "Lts",
    "LtsError",
    "RunLasso",
    "disjoint_union",
    "enumerate_runs",
    "parallel_compose",
    "parse_aut",
    "reachable",
    "write_aut",
]

_BAD_LABEL_CHARS = re.compile(r"[\s\"']")
_BARE_LABEL = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_HEADER = re.compile(r"des\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*\Z")


class LtsError(ValueError):
    """Raised for structurally invalid LTS input or queries."""


class AutParseError(LtsError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _check_label(name: str) -> str:
    if not isinstance(name, str) or not name or _BAD_LABEL_CHARS.search(name):
        raise LtsError(f"invalid action name {name!r}")
    return name


@dataclass(frozen=True)
class Lts:
    """A finite LTS ``(Q, Sigma, ->)`` with ``Q = range(state_count)``.

    ``alphabet`` is kept sorted so that two systems built from the same data
    compare equal.  Letters that label no transition are allowed; they still
    count for refusal sets.  ``initial`` only records the ``.aut`` header.
    """

    state_count: int
    alphabet: tuple[str, ...]
    transitions: tuple[tuple[int, int, int], ...]
    initial: int = 0
    _succ: tuple = field(init=False, repr=False, compare=False)
    _enabled: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.state_count < 0:
            raise LtsError("state_count must be non-negative")
        if self.state_count and not 0 <= self.initial < self.state_count:
            raise LtsError(f"initial state {self.initial} out of range")
        alphabet = tuple(self.alphabet)
        for name in alphabet:
            _check_label(name)
        if list(alphabet) != sorted(set(alphabet)):
            raise LtsError("alphabet must be sorted and duplicate free")
        trans = sorted(tuple(t) for t in self.transitions)
        for i, (src, lab, dst) in enumerate(trans):
            if not (0 <= src < self.state_count and 0 <= dst < self.state_count):
                raise LtsError(f"transition {(src, lab, dst)} leaves the state range")
            if not 0 <= lab < len(alphabet):
                raise LtsError(f"transition {(src, lab, dst)} has no alphabet letter")
            if i and trans[i - 1] == (src, lab, dst):
                raise LtsError(f"duplicate transition {(src, lab, dst)}")
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "transitions", tuple(trans))

        succ: list[dict[int, list[int]]] = [{} for _ in range(self.state_count)]
        for src, lab, dst in trans:
            succ[src].setdefault(lab, []).append(dst)
        object.__setattr__(
            self, "_succ", tuple({a: tuple(ts) for a, ts in d.items()} for d in succ)
        )
        object.__setattr__(
            self, "_enabled", tuple(sum(1 << a for a in d) for d in succ)
        )

    @classmethod
    def from_edges(
        cls,
        state_count: int,
        edges: Iterable[tuple[int, str, int]],
        alphabet: Iterable[str] = (),
        initial: int = 0,
    ) -> "Lts":
        """Build from ``(src, action_name, dst)`` triples."""
        edges = list(edges)
        letters = sorted(set(alphabet) | {a for _, a, _ in edges})
        index = {a: i for i, a in enumerate(letters)}
        return cls(state_count, tuple(letters), tuple((s, index[a], t) for s, a, t in edges), initial)

    # -- alphabet helpers -------------------------------------------------

    @property
    def full_mask(self) -> int:
        return (1 << len(self.alphabet)) - 1

    def index(self, action: str) -> int:
        try:
            return self.alphabet.index(action)
        except ValueError:
            raise LtsError(f"unknown action {action!r}") from None

    def mask(self, actions: Iterable[str]) -> int:
        m = 0
        for a in actions:
            m |= 1 << self.index(a)
        return m

    def names(self, mask: int) -> frozenset[str]:
        return frozenset(a for i, a in enumerate(self.alphabet) if mask >> i & 1)

    def _check_state(self, state: int) -> None:
        if not (isinstance(state, int) and 0 <= state < self.state_count):
            raise LtsError(f"state {state!r} out of range")

    # -- semantic queries -------------------------------------------------

    def enabled_mask(self, state: int) -> int:
        return self._enabled[state]

    def refusal_mask(self, state: int) -> int:
        return self.full_mask & ~self._enabled[state]

    def enabled(self, state: int) -> frozenset[str]:
        self._check_state(state)
        return self.names(self._enabled[state])

    def maximal_refusal(self, state: int) -> frozenset[str]:
        self._check_state(state)
        return self.names(self.refusal_mask(state))

    def successors(self, state: int, action: str) -> frozenset[int]:
        self._check_state(state)
        return frozenset(self._succ[state].get(self.index(action), ()))

    def out(self, state: int) -> Mapping[int, tuple[int, ...]]:
        """Outgoing transitions of ``state`` as ``{label index: targets}``."""
        return self._succ[state]

    def post(self, states: Iterable[int], label: int) -> frozenset[int]:
        return frozenset(t for s in states for t in self._succ[s].get(label, ()))

    def after(self, state: int, word: Sequence[str]) -> frozenset[int]:
        """States reachable from ``state`` by the finite trace ``word``."""
        current = frozenset([state])
        for a in word:
            current = self.post(current, self.index(a))
            if not current:
                break
        return current

    def validate_run(self, run: "FiniteRun") -> bool:
        states, labels = run.states, run.labels
        if not states or len(labels) != len(states) - 1:
            return False
        if not all(isinstance(s, int) and 0 <= s < self.state_count for s in states):
            return False
        for src, a, dst in zip(states, labels, states[1:]):
            if a not in self.alphabet:
                return False
            if dst not in self._succ[src].get(self.alphabet.index(a), ()):
                return False
        return True


@dataclass(frozen=True)
class FiniteRun:
    states: tuple[int, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def trace(self) -> tuple[str, ...]:
        return self.labels


@dataclass(frozen=True)
class Lasso:
    """The ultimately periodic word ``stem . cycle^omega``.

    No canonicalisation: ``Lasso(("a",), ("b", "a"))`` and
    ``Lasso(("a", "b"), ("a", "b"))`` are different objects for the same word.
    """

    stem: tuple[str, ...]
    cycle: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "stem", tuple(self.stem))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise ValueError("lasso cycle must be non-empty")

    def letter(self, i: int) -> str:
        if i < len(self.stem):
            return self.stem[i]
        return self.cycle[(i - len(self.stem)) % len(self.cycle)]

    def prefix(self, n: int) -> tuple[str, ...]:
        return tuple(self.letter(i) for i in range(n))

    def __str__(self) -> str:
        sep = "" if all(len(a) == 1 for a in self.stem + self.cycle) else " "
        return f"{sep.join(self.stem)}({sep.join(self.cycle)})^w"


@dataclass(frozen=True)
class RunLasso:
    """An infinite run: ``stem`` followed by ``cycle`` repeated forever."""

    stem: FiniteRun
    cycle: FiniteRun

    def __post_init__(self):
        if self.stem.states[-1] != self.cycle.states[0]:
            raise ValueError("stem must end where the cycle starts")
        if not self.cycle.labels or self.cycle.states[-1] != self.cycle.states[0]:
            raise ValueError("cycle must be a non-empty closed run")

    @property
    def trace(self) -> Lasso:
        return Lasso(self.stem.labels, self.cycle.labels)


# -- Aldebaran format -----------------------------------------------------


def _parse_transition(line: str, lineno: int) -> tuple[int, str, int]:
    if not (line.startswith("(") and line.endswith(")")):
        raise AutParseError(lineno, f"malformed transition {line!r}")
    body = line[1:-1]
    src_text, sep, rest = body.partition(",")
    if not sep:
        raise AutParseError(lineno, f"malformed transition {line!r}")
    rest = rest.strip()
    if rest.startswith('"'):
        close = rest.find('"', 1)
        if close < 0:
            raise AutParseError(lineno, "unterminated quoted label")
        label, tail = rest[1:close], rest[close + 1 :].strip()
        if not tail.startswith(","):
            raise AutParseError(lineno, f"malformed transition {line!r}")
        dst_text = tail[1:]
    else:
        label, sep, dst_text = rest.rpartition(",")
        label = label.strip()
        if not sep or not _BARE_LABEL.match(label):
            raise AutParseError(lineno, f"malformed transition {line!r}")
    try:
        src, dst = int(src_text.strip()), int(dst_text.strip())
    except ValueError:
        raise AutParseError(lineno, f"malformed state index in {line!r}") from None
    if not label or _BAD_LABEL_CHARS.search(label):
        raise AutParseError(lineno, f"invalid label {label!r}")
    return src, label, dst


def parse_aut(text: str) -> Lts:
    """Parse an Aldebaran ``.aut`` document.

    Besides the standard header and transition lines this accepts ``#``
    comments and an ``alphabet: a b ...`` line (before the first transition)
    declaring letters that label no transition.
    """
    header = None
    extra: list[str] = []
    edges: list[tuple[int, str, int]] = []
    seen: set[tuple[int, str, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            m = _HEADER.match(line)
            if not m:
                raise AutParseError(lineno, f"malformed header {line!r}")
            header = tuple(int(g) for g in m.groups())
            if header[0] >= max(header[2], 1):
                raise AutParseError(lineno, f"initial state {header[0]} out of range (have {header[2]})")
            continue
        if line.startswith("alphabet:"):
            if edges:
                raise AutParseError(lineno, "alphabet line must precede transitions")
            for name in line[len("alphabet:") :].split():
                if _BAD_LABEL_CHARS.search(name.strip('"')):
                    raise AutParseError(lineno, f"invalid label {name!r}")
                extra.append(name.strip('"'))
            continue
        src, label, dst = _parse_transition(line, lineno)
        for s in (src, dst):
            if s >= header[2]:
                raise AutParseError(lineno, f"state {s} out of range (have {header[2]})")
        if (src, label, dst) in seen:
            raise AutParseError(lineno, f"duplicate transition {line!r}")
        seen.add((src, label, dst))
        edges.append((src, label, dst))
    if header is None:
        raise AutParseError(1, "missing header")
    initial, n_trans, n_states = header
    if n_trans != len(edges):
        raise AutParseError(1, f"header declares {n_trans} transitions, found {len(edges)}")
    return Lts.from_edges(n_states, edges, extra, initial)


def write_aut(lts: Lts) -> str:
    lines = [f"des ({lts.initial},{len(lts.transitions)},{lts.state_count})"]
    used = {lab for _, lab, _ in lts.transitions}
    unused = [a for i, a in enumerate(lts.alphabet) if i not in used]
    if unused:
        lines.append("alphabet: " + " ".join(unused))
    for src, lab, dst in lts.transitions:
        lines.append(f'({src},"{lts.alphabet[lab]}",{dst})')
    return "\n".join(lines)


# -- constructions --------------------------------------------------------


def parallel_compose(
    left: Lts, right: Lts, sync: Iterable[str] | None = None
) -> tuple[Lts, dict[tuple[int, int], int]]:
    """Synchronous product of ``left`` and ``right``.

    Actions in ``sync`` (default: the shared letters) need both sides to move;
    every other action moves one side alone.  All state pairs are built, pair
    ``(p, q)`` getting index ``p * right.state_count + q``.
    """
    la, ra = set(left.alphabet), set(right.alphabet)
    sync_set = la & ra if sync is None else set(sync)
    stray = sync_set - (la | ra)
    if stray:
        raise LtsError(f"sync actions {sorted(stray)} occur in neither alphabet")
    n_right = right.state_count
    index = {
        (p, q): p * n_right + q
        for p in range(left.state_count)
        for q in range(n_right)
    }
    edges = []
    for p, q in index:
        src = index[p, q]
        for lab, targets in left.out(p).items():
            a = left.alphabet[lab]
            if a in sync_set:
                if a not in ra:
                    continue
                for q2 in right.out(q).get(right.index(a), ()):
                    edges.extend((src, a, index[p2, q2]) for p2 in targets)
            else:
                edges.extend((src, a, index[p2, q]) for p2 in targets)
        for lab, targets in right.out(q).items():
            a = right.alphabet[lab]
            if a not in sync_set:
                edges.extend((src, a, index[p, q2]) for q2 in targets)
    # both sides moving alone on a shared unsynchronised action can
    # produce the same pair transition twice
    composed = Lts.from_edges(left.state_count * n_right, dict.fromkeys(edges), la | ra)
    return composed, index


def reachable(lts: Lts, root: int) -> tuple[Lts, dict[int, int]]:
    """Restrict ``lts`` to the states reachable from ``root``.

    States are renumbered in breadth-first order so the root becomes 0.
    Returns the restricted system and the old-to-new index map.
    """
    lts._check_state(root)
    order = {root: 0}
    queue = deque([root])
    while queue:
        s = queue.popleft()
        for lab in sorted(lts.out(s)):
            for t in lts.out(s)[lab]:
                if t not in order:
                    order[t] = len(order)
                    queue.append(t)
    trans = [
        (order[s], lab, order[t]) for s, lab, t in lts.transitions if s in order
    ]
    return Lts(len(order), lts.alphabet, tuple(trans), 0), order


def disjoint_union(left: Lts, right: Lts) -> tuple[Lts, int]:
    """Place ``right`` after ``left``; returns the union and the offset of ``right``."""
    offset = left.state_count
    edges = [(s, left.alphabet[a], t) for s, a, t in left.transitions]
    edges += [(s + offset, right.alphabet[a], t + offset) for s, a, t in right.transitions]
    union = Lts.from_edges(
        offset + right.state_count, edges, set(left.alphabet) | set(right.alphabet)
    )
    return union, offset


def enumerate_runs(lts: Lts, start: int, depth: int) -> Iterator[FiniteRun]:
    """All finite runs of ``start`` with at most ``depth`` steps, breadth first."""
    lts._check_state(start)
    level = [FiniteRun((start,), ())]
    for d in range(depth + 1):
        yield from level
        if d == depth:
            break
        nxt = []
        for run in level:
            s = run.states[-1]
            for lab in sorted(lts.out(s)):
                for t in lts.out(s)[lab]:
                    nxt.append(FiniteRun(run.states + (t,), run.labels + (lts.alphabet[lab],)))
        level = nxt
