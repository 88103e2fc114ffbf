"""Strong and weak fair languages on ultimately periodic words.

A lasso ``u v^w`` is fair in ``p`` when some run of ``p`` with that trace is
fair.  Runs of ``p`` along the word are paths in the product of the LTS with
the word positions ``0 .. |u|+|v|-1``; an ultimately periodic run keeps
cycling through one strongly connected set ``D`` of product nodes, so:

* strong fairness: every ``a`` in ``F`` enabled somewhere in ``D`` labels an
  edge of ``D`` (a Streett condition, one pair per action);
* weak fairness: every ``a`` in ``F`` enabled everywhere in ``D`` labels an
  edge of ``D``.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from itertools import product as cartesian
from typing import Iterable, Sequence

import networkx as nx

from .lts import FiniteRun, Lasso, Lts, LtsError, RunLasso

DEFAULT_BUDGET = 10**6
DEFAULT_WORK_LIMIT = 10**6


class BudgetExceeded(RuntimeError):
    pass


class FairnessMode(enum.Enum):
    STRONG = "strong"
    WEAK = "weak"


@dataclass(frozen=True)
class FairnessSpec:
    mode: FairnessMode
    actions: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "mode", FairnessMode(self.mode))
        object.__setattr__(self, "actions", frozenset(self.actions))

    @classmethod
    def strong(cls, actions: Iterable[str] = ()) -> "FairnessSpec":
        return cls(FairnessMode.STRONG, frozenset(actions))

    @classmethod
    def weak(cls, actions: Iterable[str] = ()) -> "FairnessSpec":
        return cls(FairnessMode.WEAK, frozenset(actions))

    def mask(self, lts: Lts) -> int:
        missing = self.actions - set(lts.alphabet)
        if missing:
            raise LtsError(f"fairness actions {sorted(missing)} are not in the alphabet")
        return lts.mask(self.actions)

    def __str__(self) -> str:
        return f"{self.mode.value}{{{','.join(sorted(self.actions))}}}"


def _violations(spec_mask: int, mode: FairnessMode, enabled: Iterable[int], taken: int) -> int:
    """Actions of ``spec_mask`` treated unfairly by a cycle with the given
    enabled sets (one per visited state) and taken labels."""
    if mode is FairnessMode.STRONG:
        relevant = 0
        for e in enabled:
            relevant |= e
    else:
        relevant = -1
        for e in enabled:
            relevant &= e
    return spec_mask & relevant & ~taken


def is_fair_run_lasso(lts: Lts, run: RunLasso, spec: FairnessSpec) -> bool:
    """Fairness of the infinite run ``stem . cycle^w``.

    States visited infinitely often are exactly the cycle states and actions
    occurring infinitely often are the cycle labels.
    """
    spec_mask = spec.mask(lts)
    enabled = [lts.enabled_mask(s) for s in run.cycle.states]
    taken = lts.mask(run.cycle.labels)
    return _violations(spec_mask, spec.mode, enabled, taken) == 0


# -- product of an LTS with a lasso word ----------------------------------


class _Product:
    """Product nodes ``(state, position)`` reachable from the given roots.

    Without a word every transition is allowed and the position stays 0.
    """

    def __init__(self, lts: Lts, roots: Iterable[int], word: Lasso | None, budget: int = DEFAULT_BUDGET):
        self.lts = lts
        if word is None:
            letters: list[int | None] = [None]
            nxt = [0]
        else:
            letters = [lts.index(a) for a in word.stem + word.cycle]
            n = len(letters)
            nxt = [i + 1 if i + 1 < n else len(word.stem) for i in range(n)]
        self.nodes: list[tuple[int, int]] = []
        self.index: dict[tuple[int, int], int] = {}
        self.edges: list[list[tuple[int, int]]] = []  # node -> [(label, node)]
        queue = deque()
        for r in roots:
            self._add((r, 0), queue)
        while queue:
            i = queue.popleft()
            s, pos = self.nodes[i]
            out = []
            want = letters[pos]
            for lab in sorted(lts.out(s)):
                if want is not None and lab != want:
                    continue
                for t in lts.out(s)[lab]:
                    out.append((lab, self._add((t, nxt[pos]), queue)))
            self.edges[i] = out
            if len(self.nodes) > budget:
                raise BudgetExceeded(f"product exceeds {budget} nodes")

    def _add(self, node, queue) -> int:
        i = self.index.get(node)
        if i is None:
            i = self.index[node] = len(self.nodes)
            self.nodes.append(node)
            self.edges.append([])
            queue.append(i)
        return i

    def enabled(self, i: int) -> int:
        return self.lts.enabled_mask(self.nodes[i][0])

    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(len(self.nodes)))
        g.add_edges_from((u, v) for u, out in enumerate(self.edges) for _, v in out)
        return g

    def labels_within(self, comp: set[int]) -> int:
        m = 0
        for u in comp:
            for lab, v in self.edges[u]:
                if v in comp:
                    m |= 1 << lab
        return m

    def has_cycle(self, comp: set[int]) -> bool:
        if len(comp) > 1:
            return True
        (u,) = comp
        return any(v == u for _, v in self.edges[u])


def accepting_components(prod: _Product, spec_mask: int, mode: FairnessMode) -> list[frozenset[int]]:
    """Strongly connected node sets on which some run is fair.

    Every fair ultimately periodic run eventually stays inside one of them.
    For strong fairness an SCC violating the obligation for ``a`` cannot
    contain a fair cycle through an ``a``-enabled node, so those nodes are
    deleted and the rest decomposed again.  For weak fairness a violating SCC
    has ``a`` enabled everywhere and never taken, which every sub-cycle
    inherits, so no decomposition is needed.
    """
    g = prod.graph()
    found = []
    pending = [set(g.nodes)]
    while pending:
        sub = pending.pop()
        for comp in nx.strongly_connected_components(g.subgraph(sub)):
            if not prod.has_cycle(comp):
                continue
            bad = _violations(spec_mask, mode, (prod.enabled(u) for u in comp), prod.labels_within(comp))
            if not bad:
                found.append(frozenset(comp))
            elif mode is FairnessMode.STRONG:
                rest = {u for u in comp if not prod.enabled(u) & bad}
                if rest:
                    pending.append(rest)
    return found


def _path_within(prod: _Product, src: int, goal, allowed) -> list[tuple[int, int]]:
    """Shortest path ``[(label, node), ...]`` from ``src`` to a node satisfying ``goal``."""
    if goal(src):
        return []
    parent = {src: None}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for lab, v in prod.edges[u]:
            if v in parent or not allowed(v):
                continue
            parent[v] = (u, lab)
            if goal(v):
                path = []
                while parent[v] is not None:
                    u2, lab2 = parent[v]
                    path.append((lab2, v))
                    v = u2
                return path[::-1]
            queue.append(v)
    raise AssertionError("target unreachable")


def _covering_cycle(prod: _Product, comp: frozenset[int], entry: int) -> list[tuple[int, int]]:
    """A closed walk from ``entry`` through every edge inside ``comp``."""
    walk: list[tuple[int, int]] = []
    here = entry
    inside = comp.__contains__
    for u in sorted(comp):
        for lab, v in prod.edges[u]:
            if v not in comp:
                continue
            walk += _path_within(prod, here, lambda x, u=u: x == u, inside)
            walk.append((lab, v))
            here = v
    walk += _path_within(prod, here, lambda x: x == entry, inside)
    return walk


def _to_run(prod: _Product, start: int, steps: list[tuple[int, int]]) -> FiniteRun:
    states = [prod.nodes[start][0]] + [prod.nodes[v][0] for _, v in steps]
    labels = [prod.lts.alphabet[lab] for lab, _ in steps]
    return FiniteRun(tuple(states), tuple(labels))


def fair_run_exists(
    lts: Lts,
    start: int,
    constraint: Lasso | None,
    spec: FairnessSpec,
    *,
    budget: int = DEFAULT_BUDGET,
) -> RunLasso | None:
    """Find a fair infinite run of ``start``, following ``constraint`` if given."""
    lts._check_state(start)
    spec_mask = spec.mask(lts)
    prod = _Product(lts, [start], constraint, budget)
    comps = accepting_components(prod, spec_mask, spec.mode)
    if not comps:
        return None
    member = {u: c for c in comps for u in c}
    root = 0
    stem = _path_within(prod, root, member.__contains__, lambda v: True)
    entry = stem[-1][1] if stem else root
    cycle = _covering_cycle(prod, member[entry], entry)
    return RunLasso(_to_run(prod, root, stem), _to_run(prod, entry, cycle))


def _check_letters(lts: Lts, letters: Iterable[str]) -> None:
    for a in letters:
        lts.index(a)


def fair_member(lts: Lts, p: int, word: Sequence[str] | Lasso, spec: FairnessSpec) -> bool:
    """Membership in the fair language of ``p``.

    Finite runs are fair by definition, so a finite word only needs to be a trace.
    """
    lts._check_state(p)
    spec.mask(lts)
    if isinstance(word, Lasso):
        _check_letters(lts, word.stem + word.cycle)
        return fair_run_exists(lts, p, word, spec) is not None
    _check_letters(lts, word)
    return bool(lts.after(p, word))


# -- bounded comparison of fair languages ---------------------------------


def lyndon_words(k: int, max_len: int) -> list[tuple[int, ...]]:
    """Aperiodic words over ``range(k)`` that are least among their rotations,
    ordered by length, then lexicographically (Duval's generation)."""
    if k == 0 or max_len < 1:
        return []
    words = []
    w = [-1]
    while w:
        w[-1] += 1
        words.append(tuple(w))
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
    return sorted(words, key=lambda x: (len(x), x))


def enumerate_lassos(alphabet: Sequence[str], stem_bound: int, cycle_bound: int) -> list[Lasso]:
    """All lassos with ``|stem| <= stem_bound`` and ``|cycle| <= cycle_bound``.

    Cycles are taken up to rotation and repetition (the least rotation of a
    primitive word).  Ordered by stem length, stem, cycle length, cycle.
    """
    if stem_bound < 0 or cycle_bound < 0:
        raise ValueError("bounds must be non-negative")
    letters = list(alphabet)
    cycles = [tuple(letters[i] for i in c) for c in lyndon_words(len(letters), cycle_bound)]
    out = []
    for n in range(stem_bound + 1):
        for stem in cartesian(letters, repeat=n):
            out.extend(Lasso(stem, c) for c in cycles)
    return out


def finite_words(alphabet: Sequence[str], max_len: int) -> list[tuple[str, ...]]:
    return [w for n in range(max_len + 1) for w in cartesian(list(alphabet), repeat=n)]


class FairLanguageProbe:
    """Answers fair-membership queries for one process, sharing work across words.

    The fair part of a lasso only depends on its cycle: for each cycle and
    spec the product of the whole LTS with the cycle positions is analysed
    once, marking the entry nodes ``(s, 0)`` from which a fair run exists.
    A lasso is then fair iff its stem leads ``p`` to a marked state.
    """

    def __init__(self, lts: Lts, p: int, shared_cache: dict | None = None):
        lts._check_state(p)
        self.lts = lts
        self.p = p
        self._stems: dict[tuple[str, ...], frozenset[int]] = {}
        # cycle analyses do not depend on p; probes of one LTS may share them
        self._cycles: dict[tuple[tuple[str, ...], FairnessSpec], frozenset[int]] = (
            {} if shared_cache is None else shared_cache
        )

    def after(self, word: tuple[str, ...]) -> frozenset[int]:
        got = self._stems.get(word)
        if got is None:
            if word:
                got = self.lts.post(self.after(word[:-1]), self.lts.index(word[-1]))
            else:
                got = frozenset([self.p])
            self._stems[word] = got
        return got

    def fair_entries(self, cycle: tuple[str, ...], spec: FairnessSpec) -> frozenset[int]:
        key = (cycle, spec)
        got = self._cycles.get(key)
        if got is None:
            lts = self.lts
            prod = _Product(lts, range(lts.state_count), Lasso((), cycle))
            comps = accepting_components(prod, spec.mask(lts), spec.mode)
            good = set().union(*comps) if comps else set()
            # backward closure: nodes that can reach an accepting component
            preds: dict[int, list[int]] = {}
            for u, out in enumerate(prod.edges):
                for _, v in out:
                    preds.setdefault(v, []).append(u)
            stack = list(good)
            while stack:
                v = stack.pop()
                for u in preds.get(v, ()):
                    if u not in good:
                        good.add(u)
                        stack.append(u)
            got = frozenset(s for s, pos in (prod.nodes[u] for u in good) if pos == 0)
            self._cycles[key] = got
        return got

    def member(self, word: Sequence[str] | Lasso, spec: FairnessSpec) -> bool:
        if isinstance(word, Lasso):
            return bool(self.after(word.stem) & self.fair_entries(word.cycle, spec))
        return bool(self.after(tuple(word)))


@dataclass(frozen=True)
class FairComparison:
    """Outcome of a bounded fair-language comparison.

    ``witness`` is the first word (finite tuple or :class:`Lasso`) in the fair
    language of exactly one process, ``present_in`` naming which (0 or 1).
    """

    equal: bool
    witness: tuple[str, ...] | Lasso | None = None
    present_in: int | None = None
    words_checked: int = 0


def fair_compare_bounded(
    lts: Lts,
    p: int,
    q: int,
    spec: FairnessSpec,
    stem_bound: int,
    cycle_bound: int,
    *,
    work_limit: int = DEFAULT_WORK_LIMIT,
) -> FairComparison:
    """Compare the fair languages of ``p`` and ``q`` on all short words.

    Finite words up to ``stem_bound`` are checked first, then every lasso of
    :func:`enumerate_lassos`.
    """
    if stem_bound < 1 or cycle_bound < 1:
        raise ValueError("bounds must be at least 1")
    spec.mask(lts)
    if len(lts.alphabet) ** (stem_bound + cycle_bound) > work_limit:
        raise BudgetExceeded(
            f"{len(lts.alphabet)}^{stem_bound + cycle_bound} words exceed the work limit {work_limit}"
        )
    cache: dict = {}
    probes = FairLanguageProbe(lts, p, cache), FairLanguageProbe(lts, q, cache)
    checked = 0
    words: list = finite_words(lts.alphabet, stem_bound)
    words += enumerate_lassos(lts.alphabet, stem_bound, cycle_bound)
    for word in words:
        checked += 1
        a, b = (probe.member(word, spec) for probe in probes)
        if a != b:
            return FairComparison(False, word, 0 if a else 1, checked)
    return FairComparison(True, None, None, checked)
