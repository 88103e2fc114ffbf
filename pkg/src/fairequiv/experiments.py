"""Randomised experiment suites.

``theorem1``/``theorem2``: failure-trace equivalent pairs must have equal
strong/weak fair languages.  ``lattice``: verdicts must respect the
implications of the spectrum.  ``conjecture-pf-weak``: search for possible-
futures equivalent finite-state pairs whose weak fair languages differ; any
such pair is reported as a finding, not as a failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .equiv import (
    SemanticsKind,
    check,
    check_bisimulation,
    check_failure_trace_equiv,
    check_possible_futures_equiv,
    lattice_violations,
    trace_classes,
)
from .fairness import FairLanguageProbe, FairnessMode, FairnessSpec, enumerate_lassos, finite_words
from .gen import GenParams, bisim_preserving_transform, random_lts
from .lts import Lts, disjoint_union

SUITES = ("theorem1", "theorem2", "conjecture-pf-weak", "lattice")


@dataclass
class SuiteResult:
    suite: str
    cases: int
    seed: int
    stats: dict = field(default_factory=dict)
    problems: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def as_dict(self) -> dict:
        return {"suite": self.suite, "cases": self.cases, "seed": self.seed, "ok": self.ok,
                "stats": self.stats, "problems": self.problems}


def small_specs(lts: Lts, mode: FairnessMode) -> list[FairnessSpec]:
    """Every singleton and doubleton action set."""
    sets = [c for r in (1, 2) for c in combinations(lts.alphabet, r)]
    return [FairnessSpec(mode, frozenset(c)) for c in sets]


def compare_fair_languages(lts: Lts, p: int, q: int, specs, stem_bound: int, cycle_bound: int) -> list[dict]:
    """All (spec, word) combinations on which ``p`` and ``q`` disagree."""
    cache: dict = {}
    probes = FairLanguageProbe(lts, p, cache), FairLanguageProbe(lts, q, cache)
    words = finite_words(lts.alphabet, stem_bound) + enumerate_lassos(lts.alphabet, stem_bound, cycle_bound)
    out = []
    for spec in specs:
        for word in words:
            a, b = probes[0].member(word, spec), probes[1].member(word, spec)
            if a != b:
                out.append({"spec": str(spec), "word": str(word) if not isinstance(word, tuple) else " ".join(word),
                            "present_in": 0 if a else 1})
    return out


def ft_equivalent_pairs(cases: int, seed: int) -> list[tuple[Lts, int, int, str]]:
    """Bisimilar pairs from duplication rewrites, plus rejection-sampled
    failure-trace equivalent pairs that are not bisimilar."""
    pairs = []
    for i in range(cases):
        base = random_lts(GenParams(states=(1, 6), letters=(1, 4), density=0.25, seed=(seed, 0, i)))
        root = int(np.random.default_rng((seed, 1, i)).integers(base.state_count))
        moved, root2 = bisim_preserving_transform(base, root, (seed, 2, i), steps=10)
        union, offset = disjoint_union(base, moved)
        pairs.append((union, root, root2 + offset, "bisim-rewrite"))
    for i in range(4 * cases):
        lts = random_lts(GenParams(states=(2, 5), letters=(1, 3), density=0.3, seed=(seed, 3, i)))
        for p, q in combinations(range(lts.state_count), 2):
            if check_failure_trace_equiv(lts, p, q).equivalent and not check_bisimulation(lts, p, q).equivalent:
                pairs.append((lts, p, q, "ft-sampled"))
                break
    return pairs


def theorem_suite(mode: FairnessMode, cases: int = 50, seed: int = 7,
                  stem_bound: int = 3, cycle_bound: int = 4) -> SuiteResult:
    name = "theorem1" if mode is FairnessMode.STRONG else "theorem2"
    result = SuiteResult(name, cases, seed)
    pairs = ft_equivalent_pairs(cases, seed)
    origins: dict[str, int] = {}
    compared = 0
    for idx, (lts, p, q, origin) in enumerate(pairs):
        origins[origin] = origins.get(origin, 0) + 1
        if not check_failure_trace_equiv(lts, p, q).equivalent:
            result.problems.append({"case": idx, "origin": origin, "error": "pair is not failure-trace equivalent"})
            continue
        specs = small_specs(lts, mode)
        compared += len(specs)
        for d in compare_fair_languages(lts, p, q, specs, stem_bound, cycle_bound):
            result.problems.append({"case": idx, "origin": origin, **d})
    result.stats = {"pairs": len(pairs), "origins": origins, "spec_comparisons": compared,
                    "disagreements": len(result.problems),
                    "bounds": {"stem": stem_bound, "cycle": cycle_bound}}
    return result


def sample_pair(seed: int, i: int) -> tuple[Lts, int, int]:
    """Cycle through four pair shapes so that every verdict occurs often:
    two distinct random states, a rewrite pair (bisimilar), a random state of
    a rewritten copy against the original root, and the most equivalent
    distinct pair of a small-alphabet system."""
    rng = np.random.default_rng((seed, 4, i))
    if i % 4 == 3:
        lts = random_lts(GenParams(states=(3, 8), letters=(1, 2), density=0.25, seed=(seed, 8, i)))
        pairs = list(combinations(range(lts.state_count), 2))
        score = {pq: sum(check(lts, *pq, k).equivalent for k in SemanticsKind) for pq in pairs}
        p, q = max(pairs, key=lambda pq: (score[pq] < len(SemanticsKind), score[pq]))
        return lts, p, q
    base = random_lts(GenParams(states=(1, 8), letters=(1, 4),
                                density=float(rng.uniform(0.05, 0.35)), seed=(seed, 5, i)))
    n = base.state_count
    if i % 4 == 0:
        p = int(rng.integers(n))
        q = (p + 1 + int(rng.integers(n - 1))) % n if n > 1 else p
        return base, p, q
    root = int(rng.integers(n))
    moved, root2 = bisim_preserving_transform(base, root, (seed, 6, i), steps=int(rng.integers(1, 4)))
    union, offset = disjoint_union(base, moved)
    if i % 4 == 1:
        return union, root, root2 + offset
    return union, root, offset + int(rng.integers(moved.state_count))


def lattice_suite(cases: int = 200, seed: int = 7) -> SuiteResult:
    result = SuiteResult("lattice", cases, seed)
    equivalent_counts = {k.value: 0 for k in SemanticsKind}
    for i in range(cases):
        lts, p, q = sample_pair(seed, i)
        verdicts = {k: check(lts, p, q, k) for k in SemanticsKind}
        for k, v in verdicts.items():
            equivalent_counts[k.value] += v.equivalent
        for finer, coarser in lattice_violations(verdicts):
            result.problems.append({"case": i, "finer": finer.value, "coarser": coarser.value})
    result.stats = {"equivalent_counts": equivalent_counts, "violations": len(result.problems)}
    return result


def conjecture_pf_weak(cases: int = 50, seed: int = 7, stem_bound: int = 3, cycle_bound: int = 4,
                       max_attempts: int | None = None) -> SuiteResult:
    """Weak fair languages of possible-futures equivalent, non-bisimilar pairs.

    Disagreements are collected under ``findings``; they would refute the
    conjecture, not indicate a defect, so they never make the result fail.
    """
    result = SuiteResult("conjecture-pf-weak", cases, seed)
    max_attempts = 40 * cases if max_attempts is None else max_attempts
    findings = []
    accepted = attempts = also_ft = 0
    while accepted < cases and attempts < max_attempts:
        lts = random_lts(GenParams(states=(3, 8), letters=(1, 2), density=0.25, seed=(seed, 7, attempts)))
        attempts += 1
        classes = trace_classes(lts)
        for p, q in combinations(range(lts.state_count), 2):
            if not check_possible_futures_equiv(lts, p, q, classes).equivalent:
                continue
            if check_bisimulation(lts, p, q).equivalent:
                continue
            accepted += 1
            also_ft += check_failure_trace_equiv(lts, p, q).equivalent
            specs = small_specs(lts, FairnessMode.WEAK)
            for d in compare_fair_languages(lts, p, q, specs, stem_bound, cycle_bound):
                findings.append({"attempt": attempts - 1, "p": p, "q": q, **d})
            break
    result.stats = {"accepted": accepted, "attempts": attempts, "also_failure_trace_equivalent": also_ft,
                    "findings": findings, "exhausted": accepted < cases}
    return result


def run_suite(name: str, cases: int, seed: int, stem_bound: int = 3, cycle_bound: int = 4) -> SuiteResult:
    if name == "theorem1":
        return theorem_suite(FairnessMode.STRONG, cases, seed, stem_bound, cycle_bound)
    if name == "theorem2":
        return theorem_suite(FairnessMode.WEAK, cases, seed, stem_bound, cycle_bound)
    if name == "lattice":
        return lattice_suite(cases, seed)
    if name == "conjecture-pf-weak":
        return conjecture_pf_weak(cases, seed, stem_bound, cycle_bound)
    raise ValueError(f"unknown suite {name!r}")
