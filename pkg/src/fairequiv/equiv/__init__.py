"""Deciding the eight process equivalences on a finite LTS."""

from __future__ import annotations

from ..lts import Lts
from .branching import check_bisimulation, check_simulation_equiv, replay_attack, simulates
from .kinds import (
    FAIRNESS_PRESERVING,
    LATTICE_EDGES,
    Attack,
    ExtendedLetter,
    SemanticsKind,
    Verdict,
    Witness,
    canonical_word,
    finer_or_equal,
    format_letter,
    format_observation,
)
from .linear import (
    check_failure_trace_equiv,
    check_failures_equiv,
    check_possible_futures_equiv,
    check_ready_equiv,
    check_ready_trace_equiv,
    check_trace_equiv,
    trace_classes,
)
from .oracle import enumerate_observations, has_observation, minimized_trace_classes, replay_witness

K = SemanticsKind

CHECKERS = {
    K.TRACE: check_trace_equiv,
    K.FAILURES: check_failures_equiv,
    K.READY: check_ready_equiv,
    K.FAILURE_TRACE: check_failure_trace_equiv,
    K.READY_TRACE: check_ready_trace_equiv,
    K.POSSIBLE_FUTURES: check_possible_futures_equiv,
    K.SIMULATION: check_simulation_equiv,
    K.BISIMULATION: check_bisimulation,
}


class LatticeViolation(RuntimeError):
    """Two verdicts contradict an implication of the equivalence spectrum."""


def check(lts: Lts, p: int, q: int, kind: SemanticsKind) -> Verdict:
    return CHECKERS[kind](lts, p, q)


def lattice_violations(verdicts: dict[SemanticsKind, Verdict]) -> list[tuple[SemanticsKind, SemanticsKind]]:
    return [
        (finer, coarser)
        for finer, coarser in LATTICE_EDGES
        if finer in verdicts and coarser in verdicts
        and verdicts[finer].equivalent and not verdicts[coarser].equivalent
    ]


def check_all(lts: Lts, p: int, q: int) -> dict[SemanticsKind, Verdict]:
    """Run every check and insist the results respect the spectrum."""
    verdicts = {kind: check(lts, p, q, kind) for kind in SemanticsKind}
    bad = lattice_violations(verdicts)
    if bad:
        edges = ", ".join(f"{a.value}->{b.value}" for a, b in bad)
        raise LatticeViolation(f"verdicts for ({p}, {q}) violate {edges}")
    return verdicts


__all__ = [
    "Attack",
    "CHECKERS",
    "ExtendedLetter",
    "FAIRNESS_PRESERVING",
    "LATTICE_EDGES",
    "LatticeViolation",
    "SemanticsKind",
    "Verdict",
    "Witness",
    "canonical_word",
    "check",
    "check_all",
    "check_bisimulation",
    "check_failure_trace_equiv",
    "check_failures_equiv",
    "check_possible_futures_equiv",
    "check_ready_equiv",
    "check_ready_trace_equiv",
    "check_simulation_equiv",
    "check_trace_equiv",
    "enumerate_observations",
    "finer_or_equal",
    "format_letter",
    "format_observation",
    "has_observation",
    "lattice_violations",
    "minimized_trace_classes",
    "replay_attack",
    "replay_witness",
    "simulates",
    "trace_classes",
]
