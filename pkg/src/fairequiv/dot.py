"""Graphviz rendering of systems and runs."""

from __future__ import annotations

from typing import Iterable, Mapping

from .lts import Lts


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(
    lts: Lts,
    names: Mapping[str, int] | None = None,
    highlight: Iterable[int] = (),
    path: Iterable[tuple[int, str, int]] = (),
    title: str | None = None,
) -> str:
    """One node per state (labelled ``index`` or ``index:name``), one edge per
    transition.  ``highlight`` states are drawn bold, ``path`` edges red."""
    by_state = {s: n for n, s in (names or {}).items()}
    bold = set(highlight)
    red = set(path)
    lines = ["digraph lts {", "  rankdir=LR;"]
    if title:
        lines.append(f"  label={_quote(title)};")
    for s in range(lts.state_count):
        label = f"{s}:{by_state[s]}" if s in by_state else str(s)
        style = ", penwidth=2" if s in bold else ""
        lines.append(f"  {s} [label={_quote(label)}{style}];")
    for src, lab, dst in lts.transitions:
        a = lts.alphabet[lab]
        style = ", color=red" if (src, a, dst) in red else ""
        lines.append(f"  {src} -> {dst} [label={_quote(a)}{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
