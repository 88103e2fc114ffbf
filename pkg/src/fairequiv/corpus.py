"""Built-in example systems.

Root processes are called ``p``, ``q``, ``r``, ``s``; the other states of
a process ``x`` are ``x1, x2, ...``, numbered top to bottom, left to right.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from .lts import Lts


class UnknownCorpusEntry(KeyError):
    pass


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    lts: Lts
    named_states: Mapping[str, int] = field(default_factory=dict)
    notes: str = ""

    def __post_init__(self):
        for name, s in self.named_states.items():
            if not 0 <= s < self.lts.state_count:
                raise ValueError(f"{self.id}: state {name}={s} out of range")
        object.__setattr__(self, "named_states", MappingProxyType(dict(self.named_states)))

    def state(self, ref: str | int) -> int:
        """Resolve a state name or index."""
        if isinstance(ref, int):
            return ref
        if ref in self.named_states:
            return self.named_states[ref]
        if ref.isdigit() and int(ref) < self.lts.state_count:
            return int(ref)
        raise KeyError(f"{self.id} has no process {ref!r}")


def _entry(id, names, edges, notes, alphabet=()):
    index = {n: i for i, n in enumerate(names)}
    lts = Lts.from_edges(len(names), [(index[s], a, index[t]) for s, a, t in edges], alphabet)
    return CorpusEntry(id, lts, index, notes)


def _fig1a():
    return _entry(
        "fig1a",
        ["q", "q1", "q2"],
        [("q", "a", "q1"), ("q1", "a", "q"), ("q", "c", "q2"), ("q2", "a", "q2")],
        "q1 is the partner of the a two-cycle, q2 the a-loop reached by c. "
        "a^w is weak fair but not strong fair w.r.t. {c} in q.",
    )


def _fig1b():
    return _entry(
        "fig1b",
        ["p", "p1"],
        [("p", "a", "p"), ("p", "c", "p1"), ("p1", "a", "p1")],
        "a^w is not weak fair w.r.t. {c} in p.",
    )


def _fig3_left():
    return _entry(
        "fig3-left",
        ["p", "q", "q1"],
        [
            ("p", "a", "p"), ("p", "b", "p"),
            ("q", "a", "q"), ("q", "b", "q"), ("q", "b", "q1"), ("q1", "b", "q1"),
        ],
        "p and q are trace and simulation equivalent but not failure-trace "
        "equivalent; b^w is strong fair w.r.t. {a} in q but not in p.",
    )


def _fig3_right():
    def half(x):
        n = [x] + [f"{x}{i}" for i in range(1, 7)]
        # n1,n2: left abc loop; n3,n4: right abc loop; n5,n6: d exits
        loops = [
            (n[0], "a", n[1]), (n[1], "b", n[2]), (n[2], "c", n[0]),
            (n[0], "a", n[3]), (n[3], "b", n[4]), (n[4], "c", n[0]),
        ]
        return n, loops

    r, r_edges = half("r")
    s, s_edges = half("s")
    r_edges += [("r3", "d", "r5"), ("r4", "d", "r6")]
    s_edges += [("s3", "d", "s5"), ("s2", "d", "s6")]
    return _entry(
        "fig3-right",
        r + s,
        r_edges + s_edges,
        "r1-r2 and r3-r4 are the intermediate states of the left and right abc "
        "loops (likewise for s); r has both d exits on the right loop, s one per loop. "
        "r and s are ready equivalent; (abc)^w is strong fair w.r.t. {d} in r, not in s.",
    )


def _fig4():
    p = ["p", "p1", "p2", "p3"]
    q = ["q"] + [f"q{i}" for i in range(1, 7)]
    edges = [
        ("p", "a", "p1"), ("p1", "a", "p"), ("p", "a", "p2"), ("p2", "a", "p"), ("p2", "c", "p3"),
        ("q", "a", "q1"), ("q1", "a", "q2"), ("q2", "a", "q3"), ("q3", "a", "q"), ("q3", "c", "q4"),
        ("q", "a", "q5"), ("q5", "a", "q"), ("q5", "c", "q6"),
    ]
    return _entry(
        "fig4",
        p + q,
        edges,
        "p1 closes the plain a two-cycle, p2 the two-cycle with a c exit to p3; "
        "q1..q3 form the a four-cycle with c exit q3->q4, q5 the two-cycle with c exit to q6. "
        "p and q are possible-futures equivalent; a^w is strong fair w.r.t. {c} in p only.",
    )


def _fig5():
    def half(x, exits):
        n = [x] + [f"{x}{i}" for i in range(1, 9)]
        edges = [
            (n[0], "a", n[1]), (n[1], "b", n[2]), (n[2], "c", n[1]),
            (n[0], "a", n[3]), (n[3], "b", n[4]), (n[4], "c", n[3]),
        ]
        for (src, act), dst in zip(exits, n[5:]):
            edges.append((f"{x}{src}", act, dst))
        return n, edges

    p, p_edges = half("p", [(3, "e"), (4, "e"), (1, "d"), (2, "d")])
    q, q_edges = half("q", [(3, "e"), (4, "d"), (1, "d"), (2, "e")])
    return _entry(
        "fig5",
        p + q,
        p_edges + q_edges,
        "x1,x2: left bc loop; x3,x4: right bc loop; x5..x8: exit targets. "
        "p and q are ready equivalent; a(bc)^w is weak fair w.r.t. {d,e} in q only.",
    )


def _fig7_p():
    return _entry("fig7-p", ["p"], [("p", "a", "p"), ("p", "b", "p")], "a and b loops.")


def _fig7_q():
    return _entry("fig7-q", ["q", "q1"], [("q", "c", "q1"), ("q1", "a", "q")], "c then a back.")


def _fig7_composed():
    return _entry(
        "fig7-composed",
        ["pq", "pq1"],
        [("pq", "b", "pq"), ("pq1", "b", "pq1"), ("pq", "c", "pq1"), ("pq1", "a", "pq")],
        "pq is the composed root (p,q), pq1 stands for (p,q1). "
        "b^w is fair w.r.t. {a} here although it is unfair in fig7-p.",
    )


_BUILDERS = {
    "fig1a": _fig1a,
    "fig1b": _fig1b,
    "fig3-left": _fig3_left,
    "fig3-right": _fig3_right,
    "fig4": _fig4,
    "fig5": _fig5,
    "fig7-p": _fig7_p,
    "fig7-q": _fig7_q,
    "fig7-composed": _fig7_composed,
}

IDS = tuple(_BUILDERS)


def builtin(id: str) -> CorpusEntry:
    try:
        return _BUILDERS[id]()
    except KeyError:
        raise UnknownCorpusEntry(f"unknown corpus entry {id!r}; known: {', '.join(IDS)}") from None
