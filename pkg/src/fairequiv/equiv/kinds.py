from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union


class SemanticsKind(enum.Enum):
    TRACE = "trace"
    FAILURES = "failures"
    READY = "ready"
    FAILURE_TRACE = "failure-trace"
    READY_TRACE = "ready-trace"
    POSSIBLE_FUTURES = "possible-futures"
    SIMULATION = "simulation"
    BISIMULATION = "bisimulation"

    @classmethod
    def parse(cls, text: str) -> "SemanticsKind":
        key = text.strip().lower().replace("_", "-")
        for kind in cls:
            if kind.value == key or kind.name.lower().replace("_", "-") == key:
                return kind
        raise ValueError(f"unknown semantics {text!r}")


K = SemanticsKind

# finer -> coarser; equivalence under the finer kind implies the coarser one
LATTICE_EDGES: tuple[tuple[SemanticsKind, SemanticsKind], ...] = (
    (K.BISIMULATION, K.READY_TRACE),
    (K.BISIMULATION, K.POSSIBLE_FUTURES),
    (K.BISIMULATION, K.SIMULATION),
    (K.POSSIBLE_FUTURES, K.READY),
    (K.READY_TRACE, K.READY),
    (K.READY_TRACE, K.FAILURE_TRACE),
    (K.READY, K.FAILURES),
    (K.FAILURE_TRACE, K.FAILURES),
    (K.FAILURES, K.TRACE),
    (K.SIMULATION, K.TRACE),
)

# kinds whose equivalence implies equal strong and weak fair languages
FAIRNESS_PRESERVING = frozenset({K.BISIMULATION, K.READY_TRACE, K.FAILURE_TRACE})


def finer_or_equal(a: SemanticsKind, b: SemanticsKind) -> bool:
    """True if ``a``-equivalence implies ``b``-equivalence (reflexive-transitive)."""
    if a == b:
        return True
    return any(x == a and finer_or_equal(y, b) for x, y in LATTICE_EDGES)


# A letter of a failure/ready trace: an action name or a set of action names.
ExtendedLetter = Union[str, frozenset]


def letter_key(letter: ExtendedLetter, alphabet: tuple[str, ...]):
    """Sort key: actions in alphabet order first, then sets by size and content."""
    if isinstance(letter, str):
        return (0, alphabet.index(letter), ())
    return (1, len(letter), tuple(sorted(alphabet.index(a) for a in letter)))


def format_letter(letter: ExtendedLetter) -> str:
    if isinstance(letter, str):
        return letter
    return "{" + ",".join(sorted(letter)) + "}"


def canonical_word(word) -> tuple:
    """Collapse immediately repeated set letters (they are idempotent self-loops)."""
    out: list = []
    for letter in word:
        if out and not isinstance(letter, str) and out[-1] == letter:
            continue
        out.append(letter)
    return tuple(out)


@dataclass(frozen=True)
class Attack:
    """One attacker move of a distinguishing (bi)simulation game strategy.

    Positions are ``(left, right)`` pairs.  ``side`` 0 moves the left process
    along ``action`` to ``target``; ``replies`` lists every answer of the
    right process with the continuation strategy for the resulting position
    (side 1 mirrors this).  An empty ``replies`` means the defender is stuck.
    """

    side: int
    action: str
    target: int
    replies: tuple[tuple[int, "Attack"], ...] = ()

    def depth(self) -> int:
        return 1 + max((r.depth() for _, r in self.replies), default=0)


@dataclass(frozen=True)
class Witness:
    """An observation of exactly one of the two compared processes.

    ``present_in`` is 0 for the first process and 1 for the second.  The
    shape of ``observation`` depends on the semantics:

    * trace: tuple of actions
    * ready / failures: ``(trace, frozenset)``
    * failure-trace / ready-trace: tuple of :data:`ExtendedLetter`
    * possible-futures: ``(trace, class_id)`` where ``class_id`` is the least
      state index with the same finite-trace language as the reached state
    * simulation / bisimulation: an :class:`Attack` strategy (``present_in``
      names the side that cannot be matched)
    """

    observation: object
    present_in: int


@dataclass(frozen=True)
class Verdict:
    kind: SemanticsKind
    equivalent: bool
    witness: Witness | None = None

    def __post_init__(self):
        if self.equivalent != (self.witness is None):
            raise ValueError("a witness is present exactly when not equivalent")

    def __bool__(self) -> bool:
        return self.equivalent


def format_observation(kind: SemanticsKind, observation) -> str:
    if kind in (K.SIMULATION, K.BISIMULATION):
        return f"attacker strategy of depth {observation.depth()} opening with {observation.action}"
    if kind == K.TRACE:
        return ".".join(observation) or "eps"
    if kind in (K.FAILURE_TRACE, K.READY_TRACE):
        return ".".join(format_letter(x) for x in observation) or "eps"
    trace, extra = observation
    extra_text = format_letter(extra) if kind != K.POSSIBLE_FUTURES else f"class {extra}"
    return f"({'.'.join(trace) or 'eps'}, {extra_text})"
