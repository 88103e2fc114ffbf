"""Seeded random systems and bisimilarity-preserving rewrites."""

from __future__ import annotations

import string
from dataclasses import dataclass

import numpy as np

from .lts import Lts


@dataclass(frozen=True)
class GenParams:
    states: tuple[int, int] = (1, 8)
    letters: tuple[int, int] = (1, 4)
    density: float = 0.2
    seed: int = 0

    def __post_init__(self):
        lo, hi = self.states
        if not 1 <= lo <= hi:
            raise ValueError(f"bad state range {self.states}")
        lo, hi = self.letters
        if not 0 <= lo <= hi <= 26:
            raise ValueError(f"bad alphabet size range {self.letters}")
        if not 0.0 <= self.density <= 1.0:
            raise ValueError("density must lie in [0, 1]")


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed))


def random_lts(params: GenParams) -> Lts:
    """Each potential transition ``(s, a, t)`` is present with probability ``density``."""
    rng = _rng(params.seed)
    n = int(rng.integers(params.states[0], params.states[1] + 1))
    k = int(rng.integers(params.letters[0], params.letters[1] + 1))
    alphabet = tuple(string.ascii_lowercase[:k])
    present = rng.random((n, k, n)) < params.density
    trans = tuple((int(s), int(a), int(t)) for s, a, t in np.argwhere(present))
    return Lts(n, alphabet, trans)


def bisim_preserving_transform(lts: Lts, root: int, seed, steps: int = 10) -> tuple[Lts, int]:
    """Apply ``steps`` random state duplications.

    A step clones a state ``s`` into a fresh state ``c`` with the same
    outgoing transitions, then redirects a random subset of the transitions
    entering ``s`` to ``c``.  ``{(s, c)}`` plus the identity is a
    bisimulation, so every state keeps its behaviour; in particular the
    returned ``root`` (its index is unchanged) is bisimilar to the original.
    """
    lts._check_state(root)
    rng = _rng(seed)
    n = lts.state_count
    trans = set(lts.transitions)
    for _ in range(steps):
        s = int(rng.integers(n))
        c = n
        n += 1
        trans |= {(c, a, t) for src, a, t in trans if src == s}
        incoming = sorted(t for t in trans if t[2] == s)
        flips = rng.random(len(incoming)) < 0.5
        for (src, a, _), flip in zip(incoming, flips):
            if flip:
                trans.discard((src, a, s))
                trans.add((src, a, c))
    return Lts(n, lts.alphabet, tuple(trans)), root
