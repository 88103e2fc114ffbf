"""Simulation and bisimulation, with attacker strategies as witnesses."""

from __future__ import annotations

from ..lts import Lts
from .kinds import Attack, SemanticsKind, Verdict, Witness

K = SemanticsKind


def bisimulation_rounds(lts: Lts) -> list[list[int]]:
    """Partition refinement history.

    Entry ``k`` assigns each state its block after ``k`` rounds; round 0 is
    the trivial partition and the last entry is the coarsest bisimulation.
    """
    n = lts.state_count
    block = [0] * n
    history = [block]
    while True:
        ids: dict = {}
        new = [
            ids.setdefault(
                (block[s], frozenset((a, block[t]) for a, ts in lts.out(s).items() for t in ts)),
                len(ids),
            )
            for s in range(n)
        ]
        if len(ids) == len(set(block)):
            return history
        history.append(new)
        block = new


def _bisim_strategy(lts: Lts, history, left: int, right: int, memo) -> Attack:
    if (left, right) in memo:
        return memo[left, right]
    k = next(i for i, b in enumerate(history) if b[left] != b[right])
    prev = history[k - 1]
    for side, mover, other in ((0, left, right), (1, right, left)):
        for a in sorted(lts.out(mover)):
            answers = lts.out(other).get(a, ())
            for t in lts.out(mover)[a]:
                if all(prev[t] != prev[d] for d in answers):
                    pos = (lambda d: (t, d)) if side == 0 else (lambda d: (d, t))
                    replies = tuple(
                        (d, _bisim_strategy(lts, history, *pos(d), memo)) for d in answers
                    )
                    memo[left, right] = Attack(side, lts.alphabet[a], t, replies)
                    return memo[left, right]
    raise AssertionError("refinement history does not separate the pair")


def check_bisimulation(lts: Lts, p: int, q: int) -> Verdict:
    lts._check_state(p)
    lts._check_state(q)
    history = bisimulation_rounds(lts)
    if history[-1][p] == history[-1][q]:
        return Verdict(K.BISIMULATION, True)
    attack = _bisim_strategy(lts, history, p, q, {})
    return Verdict(K.BISIMULATION, False, Witness(attack, attack.side))


def simulation_rounds(lts: Lts) -> dict[tuple[int, int], int]:
    """Greatest-fixpoint computation of the simulation preorder.

    Returns, for every pair ``(x, y)`` where ``y`` does *not* simulate ``x``,
    the round in which the pair was removed.  Pairs absent from the result
    belong to the preorder.
    """
    n = lts.state_count
    alive = {(x, y) for x in range(n) for y in range(n)}
    removed: dict[tuple[int, int], int] = {}
    k = 0
    while True:
        k += 1
        drop = [
            (x, y)
            for x, y in alive
            if not all(
                any((xt, yt) in alive for yt in lts.out(y).get(a, ()))
                for a, xts in lts.out(x).items()
                for xt in xts
            )
        ]
        if not drop:
            return removed
        for pair in drop:
            alive.discard(pair)
            removed[pair] = k


def _sim_strategy(lts: Lts, removed, x: int, y: int, side: int, memo) -> Attack:
    """Strategy showing ``y`` cannot simulate ``x``; the attacker always moves ``x``."""
    if (x, y) in memo:
        return memo[x, y]
    k = removed[x, y]
    for a in sorted(lts.out(x)):
        answers = lts.out(y).get(a, ())
        for xt in lts.out(x)[a]:
            if all(removed.get((xt, yt), k) < k for yt in answers):
                replies = tuple(
                    (yt, _sim_strategy(lts, removed, xt, yt, side, memo)) for yt in answers
                )
                memo[x, y] = Attack(side, lts.alphabet[a], xt, replies)
                return memo[x, y]
    raise AssertionError("removal rounds do not justify the pair")


def simulates(lts: Lts, x: int, y: int) -> bool:
    """Whether ``y`` simulates ``x``."""
    return (x, y) not in simulation_rounds(lts)


def check_simulation_equiv(lts: Lts, p: int, q: int) -> Verdict:
    lts._check_state(p)
    lts._check_state(q)
    removed = simulation_rounds(lts)
    if (p, q) in removed:
        attack = _sim_strategy(lts, removed, p, q, 0, {})
        return Verdict(K.SIMULATION, False, Witness(attack, 0))
    if (q, p) in removed:
        attack = _sim_strategy(lts, removed, q, p, 1, {})
        return Verdict(K.SIMULATION, False, Witness(attack, 1))
    return Verdict(K.SIMULATION, True)


def replay_attack(lts: Lts, left: int, right: int, attack: Attack, *, one_sided: bool = False) -> bool:
    """Check that ``attack`` wins the (bi)simulation game from ``(left, right)``.

    With ``one_sided`` every move must be made on the side of the first
    move, as in the simulation game.
    """
    mover, other = (left, right) if attack.side == 0 else (right, left)
    a = lts.index(attack.action)
    if attack.target not in lts.out(mover).get(a, ()):
        return False
    answers = set(lts.out(other).get(a, ()))
    if answers != {d for d, _ in attack.replies} or len(answers) != len(attack.replies):
        return False
    for d, sub in attack.replies:
        if one_sided and sub.side != attack.side:
            return False
        nxt = (attack.target, d) if attack.side == 0 else (d, attack.target)
        if not replay_attack(lts, *nxt, sub, one_sided=one_sided):
            return False
    return True
