"""Command-line interface.

Exit codes: 0 positive answer, 1 negative answer, 2 usage or input error,
3 budget exceeded (or an experiment that could not collect enough samples).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import re
import shlex
import sys
import time
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from . import corpus
from .dot import to_dot
from .equiv import Attack, SemanticsKind, Verdict, check, format_observation
from .experiments import SUITES, run_suite
from .fairness import BudgetExceeded, FairnessSpec, fair_compare_bounded, fair_member, fair_run_exists
from .lts import FiniteRun, Lasso, Lts, LtsError, RunLasso, disjoint_union, parallel_compose, parse_aut, reachable, write_aut

EXIT_YES, EXIT_NO, EXIT_ERROR, EXIT_BUDGET = 0, 1, 2, 3

_NAMES_COMMENT = "# states:"


class CliError(Exception):
    pass


@dataclass
class Source:
    ref: str
    lts: Lts
    names: Mapping[str, int]
    sha256: str

    def state(self, name: str) -> int:
        if name in self.names:
            return self.names[name]
        if name.isdigit() and int(name) < self.lts.state_count:
            return int(name)
        raise CliError(f"{self.ref} has no process {name!r}")


def export_text(entry: corpus.CorpusEntry) -> str:
    """``.aut`` text of a corpus entry, with its state names kept in a comment."""
    names = " ".join(f"{n}={s}" for n, s in entry.named_states.items())
    return f"{_NAMES_COMMENT} {names}\n{write_aut(entry.lts)}\n"


def load(ref: str) -> Source:
    if ref.startswith("corpus:"):
        try:
            entry = corpus.builtin(ref[len("corpus:"):])
        except corpus.UnknownCorpusEntry as e:
            raise CliError(e.args[0]) from None
        text = export_text(entry)
        return Source(ref, entry.lts, entry.named_states, hashlib.sha256(text.encode()).hexdigest())
    try:
        data = Path(ref).read_bytes()
    except OSError as e:
        raise CliError(f"cannot read {ref}: {e.strerror}") from None
    text = data.decode("utf-8")
    names = {}
    for line in text.splitlines():
        if line.startswith(_NAMES_COMMENT):
            for item in line[len(_NAMES_COMMENT):].split():
                n, _, s = item.partition("=")
                if s.isdigit():
                    names[n] = int(s)
    lts = parse_aut(text)
    names = {n: s for n, s in names.items() if s < lts.state_count}
    return Source(ref, lts, names, hashlib.sha256(data).hexdigest())


def merge(a: Source, b: Source) -> tuple[Lts, int, dict]:
    """One system holding both sources; same ref means same system.

    Returns the system, the offset of ``b``'s states and merged state names.
    """
    if a.ref == b.ref:
        return a.lts, 0, dict(a.names)
    union, offset = disjoint_union(a.lts, b.lts)
    names = {f"A.{n}": s for n, s in a.names.items()}
    names.update({f"B.{n}": s + offset for n, s in b.names.items()})
    return union, offset, names


# -- words ----------------------------------------------------------------

_LASSO = re.compile(r"^(?P<stem>[^()]*)\((?P<cycle>[^()]*)\)\s*\^\s*(?:w|ω|omega)$")


def _letters(text: str, alphabet: Sequence[str]) -> tuple[str, ...]:
    known = set(alphabet)
    single = all(len(a) == 1 for a in alphabet)
    out: list[str] = []
    for tok in re.split(r"[\s,]+", text.strip()):
        if not tok or tok in ("eps", "ε"):
            continue
        if tok in known:
            out.append(tok)
        elif single and all(ch in known for ch in tok):
            out.extend(tok)
        else:
            raise CliError(f"word letter {tok!r} is not in the alphabet {{{', '.join(alphabet)}}}")
    return tuple(out)


def parse_word(text: str, alphabet: Sequence[str]) -> tuple[str, ...] | Lasso:
    """``u(v)^w`` (``u`` optional) is a lasso, anything else a finite word.

    Letters are separated by whitespace or commas; when every action name is
    a single character, ``abc`` also reads as ``a b c``.
    """
    text = text.strip()
    m = _LASSO.match(text)
    if m:
        cycle = _letters(m["cycle"], alphabet)
        if not cycle:
            raise CliError(f"lasso {text!r} has an empty cycle")
        return Lasso(_letters(m["stem"], alphabet), cycle)
    if any(ch in text for ch in "()^"):
        raise CliError(f"malformed word {text!r}; expected u(v)^w or a finite word")
    return _letters(text, alphabet)


def word_text(word) -> str:
    if isinstance(word, Lasso):
        return str(word)
    return " ".join(word) if word else "eps"


def _finite_run(lts: Lts, p: int, word: Sequence[str]) -> FiniteRun | None:
    parents: list[dict[int, int]] = []
    frontier = {p: p}
    for a in word:
        lab = lts.index(a)
        nxt: dict[int, int] = {}
        for s in sorted(frontier):
            for t in lts.out(s).get(lab, ()):
                nxt.setdefault(t, s)
        if not nxt:
            return None
        parents.append(nxt)
        frontier = nxt
    states = deque([min(frontier)])
    for level in reversed(parents):
        states.appendleft(level[states[0]])
    return FiniteRun(tuple(states), tuple(word))


# -- JSON helpers ----------------------------------------------------------


def jsonable(obj):
    if isinstance(obj, (frozenset, set)):
        return sorted(jsonable(x) for x in obj)
    if isinstance(obj, (tuple, list)):
        return [jsonable(x) for x in obj]
    if isinstance(obj, Lasso):
        return {"stem": list(obj.stem), "cycle": list(obj.cycle), "text": str(obj)}
    if isinstance(obj, FiniteRun):
        return {"states": list(obj.states), "labels": list(obj.labels)}
    if isinstance(obj, RunLasso):
        return {"stem": jsonable(obj.stem), "cycle": jsonable(obj.cycle)}
    if isinstance(obj, Attack):
        return {
            "side": obj.side,
            "action": obj.action,
            "target": obj.target,
            "replies": [{"defender": s, "then": jsonable(a)} for s, a in obj.replies],
        }
    return obj


def verdict_dict(v: Verdict) -> dict:
    out = {"kind": v.kind.value, "equivalent": v.equivalent, "witness": None}
    if v.witness is not None:
        out["witness"] = {
            "observation": jsonable(v.witness.observation),
            "text": format_observation(v.kind, v.witness.observation),
            "present_in": v.witness.present_in,
        }
    return out


def _spec(args) -> FairnessSpec:
    actions = [a for a in re.split(r"[\s,]+", args.actions or "") if a]
    return FairnessSpec(args.mode, frozenset(actions))


def _run_edges(run) -> list[tuple[int, str, int]]:
    runs = [run] if isinstance(run, FiniteRun) else [run.stem, run.cycle]
    return [(r.states[i], r.labels[i], r.states[i + 1]) for r in runs for i in range(len(r.labels))]


# -- commands --------------------------------------------------------------


@dataclass
class Outcome:
    code: int
    inputs: list[Source]
    results: dict
    lines: list[str]
    dot: str | None = None
    seed: int | None = None
    bounds: dict | None = None


def cmd_equiv(args) -> Outcome:
    a, b = load(args.ref_a), load(args.ref_b)
    lts, offset, names = merge(a, b)
    p, q = a.state(args.proc_a), b.state(args.proc_b) + offset
    if args.kind == "all":
        kinds = list(SemanticsKind)
    else:
        try:
            kinds = [SemanticsKind.parse(args.kind)]
        except ValueError as e:
            raise CliError(str(e)) from None
    verdicts = [check(lts, p, q, k) for k in kinds]
    procs = (args.proc_a, args.proc_b)
    lines = []
    for v in verdicts:
        if v.equivalent:
            lines.append(f"{v.kind.value}: equivalent")
        else:
            obs = format_observation(v.kind, v.witness.observation)
            where = procs[v.witness.present_in]
            if v.kind in (SemanticsKind.SIMULATION, SemanticsKind.BISIMULATION):
                lines.append(f"{v.kind.value}: not equivalent; {obs}, playing on {where}")
            else:
                lines.append(f"{v.kind.value}: not equivalent; witness {obs} (only in {where})")
    results = {
        "p": p,
        "q": q,
        "alphabet": list(lts.alphabet),
        "verdicts": [verdict_dict(v) for v in verdicts],
    }
    code = EXIT_YES if all(v.equivalent for v in verdicts) else EXIT_NO
    dot = to_dot(lts, names, highlight=(p, q))
    return Outcome(code, [a, b], results, lines, dot)


def cmd_fair(args) -> Outcome:
    src = load(args.ref)
    p = src.state(args.proc)
    word = parse_word(args.word, src.lts.alphabet)
    spec = _spec(args)
    member = fair_member(src.lts, p, word, spec)
    witness = None
    if member:
        if isinstance(word, Lasso):
            witness = fair_run_exists(src.lts, p, word, spec)
        else:
            witness = _finite_run(src.lts, p, word)
    verdict = "a member" if member else "not a member"
    lines = [f"{word_text(word)} is {verdict} of the {spec} fair language of {args.proc}"]
    if witness is not None:
        lines.append(f"run: {json.dumps(jsonable(witness))}")
    results = {
        "process": p,
        "word": jsonable(word) if isinstance(word, Lasso) else list(word),
        "spec": {"mode": spec.mode.value, "actions": sorted(spec.actions)},
        "member": member,
        "witness": jsonable(witness),
    }
    dot = to_dot(src.lts, src.names, highlight=(p,), path=_run_edges(witness) if witness else ())
    return Outcome(EXIT_YES if member else EXIT_NO, [src], results, lines, dot)


def cmd_fair_compare(args) -> Outcome:
    a, b = load(args.ref_a), load(args.ref_b)
    lts, offset, names = merge(a, b)
    p, q = a.state(args.proc_a), b.state(args.proc_b) + offset
    spec = _spec(args)
    bounds = {"stem": args.stem_bound, "cycle": args.cycle_bound, "work_limit": args.work_limit}
    res = fair_compare_bounded(lts, p, q, spec, args.stem_bound, args.cycle_bound, work_limit=args.work_limit)
    procs = (args.proc_a, args.proc_b)
    if res.equal:
        lines = [f"{spec} fair languages agree on {res.words_checked} words"]
    else:
        lines = [f"{spec} fair languages differ: {word_text(res.witness)} only in {procs[res.present_in]}"]
    results = {
        "p": p,
        "q": q,
        "spec": {"mode": spec.mode.value, "actions": sorted(spec.actions)},
        "equal": res.equal,
        "witness": None if res.witness is None else (
            jsonable(res.witness) if isinstance(res.witness, Lasso) else {"finite": list(res.witness)}
        ),
        "present_in": res.present_in,
        "words_checked": res.words_checked,
    }
    dot = to_dot(lts, names, highlight=(p, q))
    return Outcome(EXIT_YES if res.equal else EXIT_NO, [a, b], results, lines, dot, bounds=bounds)


def cmd_compose(args) -> Outcome:
    a, b = load(args.ref_a), load(args.ref_b)
    if args.sync is not None and args.sync_shared:
        raise CliError("--sync and --sync-shared are mutually exclusive")
    sync = None if args.sync is None else [x for x in re.split(r"[\s,]+", args.sync) if x]
    if args.root:
        parts = args.root.split(",")
        if len(parts) != 2:
            raise CliError("--root expects two processes, e.g. p,q")
        ra, rb = a.state(parts[0]), b.state(parts[1])
    else:
        ra, rb = a.lts.initial, b.lts.initial
    composed, index = parallel_compose(a.lts, b.lts, sync)
    result, renumber = reachable(composed, index[ra, rb])
    text = write_aut(result) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    used_sync = sorted(set(a.lts.alphabet) & set(b.lts.alphabet) if sync is None else set(sync))
    results = {
        "sync": used_sync,
        "roots": [ra, rb],
        "states": result.state_count,
        "transitions": len(result.transitions),
        "out": args.out,
    }
    lines = [f"composed system: {result.state_count} states, {len(result.transitions)} transitions"]
    if args.out:
        lines.append(f"written to {args.out}")
    else:
        lines.append(text.rstrip("\n"))
    pair_names = {}
    for (x, y), i in index.items():
        if i in renumber:
            pair_names[f"({x},{y})"] = renumber[i]
    return Outcome(EXIT_YES, [a, b], results, lines, to_dot(result, pair_names, highlight=(0,)))


def cmd_experiment(args) -> Outcome:
    cases = args.cases if args.cases is not None else (200 if args.suite == "lattice" else 50)
    if cases < 1:
        raise CliError("--cases must be at least 1")
    res = run_suite(args.suite, cases, args.seed, args.stem_bound, args.cycle_bound)
    bounds = None if args.suite == "lattice" else {"stem": args.stem_bound, "cycle": args.cycle_bound}
    if args.suite == "conjecture-pf-weak":
        exhausted = res.stats["exhausted"]
        code = EXIT_BUDGET if exhausted else EXIT_YES
        lines = [
            f"{res.stats['accepted']} pairs accepted in {res.stats['attempts']} attempts, "
            f"{len(res.stats['findings'])} findings" + (" (sampling exhausted)" if exhausted else "")
        ]
    else:
        code = EXIT_YES if res.ok else EXIT_NO
        lines = [f"{res.suite}: {'ok' if res.ok else 'FAILED'}, {len(res.problems)} problems"]
    lines.append(json.dumps(res.stats, sort_keys=True))
    return Outcome(code, [], res.as_dict(), lines, seed=args.seed, bounds=bounds)


def cmd_corpus(args) -> Outcome:
    if args.action == "list":
        entries = [corpus.builtin(i) for i in corpus.IDS]
        lines = [f"{e.id}: {', '.join(f'{n}={s}' for n, s in e.named_states.items())}" for e in entries]
        results = {"entries": [
            {"id": e.id, "states": e.lts.state_count, "transitions": len(e.lts.transitions),
             "named_states": dict(e.named_states), "notes": e.notes}
            for e in entries
        ]}
        return Outcome(EXIT_YES, [], results, lines)
    if not args.id:
        raise CliError("corpus export needs an entry id")
    src = load(f"corpus:{args.id}")
    text = export_text(corpus.builtin(args.id))
    if args.out:
        Path(args.out).write_text(text)
        lines = [f"written to {args.out}"]
    else:
        lines = [text.rstrip("\n")]
    results = {"id": args.id, "out": args.out, "states": src.lts.state_count,
               "transitions": len(src.lts.transitions)}
    return Outcome(EXIT_YES, [src], results, lines, to_dot(src.lts, src.names))


# -- argument parsing ----------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the JSON report instead of text")
    common.add_argument("--no-timing", action="store_true", help="report elapsed_ms as 0 for reproducible output")
    common.add_argument("--dot", metavar="FILE", help="write a Graphviz rendering to FILE")

    parser = argparse.ArgumentParser(prog="fairequiv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("equiv", parents=[common], help="decide an equivalence between two processes")
    p.add_argument("ref_a")
    p.add_argument("proc_a")
    p.add_argument("ref_b")
    p.add_argument("proc_b")
    p.add_argument("--kind", default="all", help="semantics name or 'all'")
    p.set_defaults(func=cmd_equiv)

    def fairness_flags(p):
        p.add_argument("--mode", choices=("strong", "weak"), default="strong")
        p.add_argument("--actions", default="", help="comma separated fairness actions")

    p = sub.add_parser("fair", parents=[common], help="fair-language membership of a word")
    p.add_argument("ref")
    p.add_argument("proc")
    p.add_argument("word", help="u(v)^w lasso or finite word")
    fairness_flags(p)
    p.set_defaults(func=cmd_fair)

    p = sub.add_parser("fair-compare", parents=[common], help="compare fair languages on short words")
    p.add_argument("ref_a")
    p.add_argument("proc_a")
    p.add_argument("ref_b")
    p.add_argument("proc_b")
    fairness_flags(p)
    p.add_argument("--stem-bound", type=int, default=2)
    p.add_argument("--cycle-bound", type=int, default=3)
    p.add_argument("--work-limit", type=int, default=10**6)
    p.set_defaults(func=cmd_fair_compare)

    p = sub.add_parser("compose", parents=[common], help="reachable parallel composition")
    p.add_argument("ref_a")
    p.add_argument("ref_b")
    p.add_argument("--sync", help="comma separated synchronised actions")
    p.add_argument("--sync-shared", action="store_true", help="synchronise on the shared actions (default)")
    p.add_argument("--root", help="initial processes as pA,pB")
    p.add_argument("--out", help="write the .aut here")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("experiment", parents=[common], help="run a randomised suite")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--cases", type=int)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--stem-bound", type=int, default=3)
    p.add_argument("--cycle-bound", type=int, default=4)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("corpus", parents=[common], help="list or export built-in systems")
    p.add_argument("action", choices=("list", "export"))
    p.add_argument("id", nargs="?")
    p.add_argument("--out")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_YES
    start = time.perf_counter()
    try:
        out = args.func(args)
    except BudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (CliError, LtsError, ValueError, KeyError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_ERROR
    elapsed = 0 if args.no_timing else round((time.perf_counter() - start) * 1000, 3)
    if args.dot and out.dot is not None:
        Path(args.dot).write_text(out.dot)
    if args.json:
        report = {
            "command": shlex.join(argv),
            "inputs": [{"ref": s.ref, "sha256": s.sha256} for s in {s.ref: s for s in out.inputs}.values()],
            "results": out.results,
            "seed": out.seed,
            "bounds": out.bounds,
            "elapsed_ms": elapsed,
        }
        print(json.dumps(report, indent=2, ensure_ascii=False))
    else:
        print("\n".join(out.lines))
    return out.code


if __name__ == "__main__":
    sys.exit(main())
