import pytest

from fairequiv import builtin
from fairequiv.corpus import IDS
from fairequiv.equiv import check_bisimulation
from fairequiv.gen import GenParams, random_lts
from fairequiv.lts import (
    AutParseError,
    FiniteRun,
    Lasso,
    Lts,
    LtsError,
    RunLasso,
    disjoint_union,
    enumerate_runs,
    parallel_compose,
    parse_aut,
    reachable,
    write_aut,
)

LOOPS = 'des (0,2,1)\n(0,"a",0)\n(0,"b",0)'


def test_parse_loops():
    lts = parse_aut(LOOPS)
    assert lts.state_count == 1
    assert lts.alphabet == ("a", "b")
    assert lts.enabled(0) == {"a", "b"}


def test_parse_empty():
    lts = parse_aut("des (0,0,1)")
    assert (lts.state_count, lts.alphabet, lts.transitions) == (1, (), ())
    assert write_aut(lts) == "des (0,0,1)"


def test_write_is_exact():
    assert write_aut(parse_aut(LOOPS)) == LOOPS


def test_write_fig3_q():
    e = builtin("fig3-left")
    sub, _ = reachable(e.lts, e.state("q"))
    text = write_aut(sub)
    assert text.startswith("des (0,4,2)")
    assert len(text.splitlines()) == 5


def test_parse_extensions():
    text = "# comment\ndes (1,1,2)\nalphabet: z\n(0, a, 1)\n"
    lts = parse_aut(text)
    assert lts.initial == 1 and lts.alphabet == ("a", "z")
    assert parse_aut(write_aut(lts)) == lts


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("des 0,0,1", 1),
        ('des (0,1,1)\n(0,"a",1)', 2),
        ('des (0,2,1)\n(0,"a",0)', 1),
        ('des (0,2,1)\n(0,"a",0)\n(0,"a",0)', 3),
        ('des (0,1,1)\n(0,"a,0)', 2),
        ('des (0,1,1)\n(x,"a",0)', 2),
        ('des (0,1,1)\n(0,"a",0)\nalphabet: b', 3),
        ('des (3,0,1)', 1),
    ],
)
def test_parse_errors_carry_lines(text, line):
    with pytest.raises(AutParseError) as info:
        parse_aut(text)
    assert info.value.lineno == line


@pytest.mark.parametrize("seed", range(100))
def test_round_trip_random(seed):
    lts = random_lts(GenParams(states=(1, 8), letters=(0, 4), density=0.3, seed=seed))
    assert parse_aut(write_aut(lts)) == lts


@pytest.mark.parametrize("id", IDS)
def test_round_trip_corpus(id):
    lts = builtin(id).lts
    assert parse_aut(write_aut(lts)) == lts


def test_enabled_examples():
    a = builtin("fig1a")
    assert a.lts.enabled(a.state("q")) == {"a", "c"}
    assert a.lts.successors(a.state("q"), "a") == {a.state("q1")}
    assert a.lts.successors(a.state("q1"), "c") == frozenset()
    r = builtin("fig3-right")
    assert r.lts.enabled(r.state("r3")) == {"b", "d"}
    assert len(r.lts.successors(r.state("r"), "a")) == 2
    assert r.lts.enabled(r.state("r5")) == frozenset()
    left = builtin("fig3-left")
    assert left.lts.maximal_refusal(left.state("p")) == frozenset()
    assert left.lts.maximal_refusal(left.state("q1")) == {"a"}
    assert r.lts.maximal_refusal(r.state("r5")) == set(r.lts.alphabet)


@pytest.mark.parametrize("id", IDS)
def test_enabled_and_refusal_partition(id):
    lts = builtin(id).lts
    for s in range(lts.state_count):
        en, ref = lts.enabled(s), lts.maximal_refusal(s)
        assert en | ref == set(lts.alphabet) and not en & ref


def test_unknown_action_and_state():
    lts = builtin("fig1a").lts
    with pytest.raises(LtsError):
        lts.successors(0, "zz")
    with pytest.raises(LtsError):
        lts.enabled(7)


def test_validate_run_examples():
    b = builtin("fig1b")
    p, p1 = b.state("p"), b.state("p1")
    assert b.lts.validate_run(FiniteRun((p,)))
    assert b.lts.validate_run(FiniteRun((p, p, p1), ("a", "c")))
    assert not b.lts.validate_run(FiniteRun((p, p1, p1), ("c", "c")))


@pytest.mark.parametrize("id", IDS)
def test_validate_run_matches_enumeration(id):
    lts = builtin(id).lts
    for start in range(lts.state_count):
        runs = set(enumerate_runs(lts, start, 6))
        for run in runs:
            assert lts.validate_run(run)
        # every one-step extension outside the enumeration is rejected
        for run in runs:
            if len(run.labels) == 6:
                continue
            for a in lts.alphabet:
                for t in range(lts.state_count):
                    ext = FiniteRun(run.states + (t,), run.labels + (a,))
                    assert lts.validate_run(ext) == (ext in runs)


def test_lasso_and_run_lasso():
    w = Lasso(("a",), ("b", "c"))
    assert w.prefix(5) == ("a", "b", "c", "b", "c")
    assert str(w) == "a(bc)^w"
    assert str(Lasso(("aa", "b"), ("c",))) == "aa b(c)^w"
    with pytest.raises(ValueError):
        Lasso(("a",), ())
    run = RunLasso(FiniteRun((0, 1), ("a",)), FiniteRun((1, 1), ("b",)))
    assert run.trace == Lasso(("a",), ("b",))
    with pytest.raises(ValueError):
        RunLasso(FiniteRun((0,)), FiniteRun((1, 1), ("b",)))


def _composed_root(left, right, sync, pair):
    composed, index = parallel_compose(left, right, sync)
    return reachable(composed, index[pair])[0]


def test_compose_fig7():
    p, q, pq = builtin("fig7-p"), builtin("fig7-q"), builtin("fig7-composed")
    small = _composed_root(p.lts, q.lts, {"a"}, (p.state("p"), q.state("q")))
    assert small.state_count == 2
    union, off = disjoint_union(small, pq.lts)
    assert check_bisimulation(union, 0, off + pq.state("pq")).equivalent


def test_compose_with_unit():
    e = builtin("fig3-right")
    unit = Lts(1, (), ())
    composed = _composed_root(e.lts, unit, set(), (e.state("r"), 0))
    original = reachable(e.lts, e.state("r"))[0]
    union, off = disjoint_union(composed, original)
    assert check_bisimulation(union, 0, off).equivalent


def test_compose_rejects_stray_sync():
    with pytest.raises(LtsError):
        parallel_compose(builtin("fig7-p").lts, builtin("fig7-q").lts, {"x"})


@pytest.mark.parametrize("seed", range(20))
def test_compose_symmetric(seed):
    a = random_lts(GenParams(states=(1, 4), letters=(1, 3), density=0.3, seed=(seed, 0)))
    b = random_lts(GenParams(states=(1, 4), letters=(1, 3), density=0.3, seed=(seed, 1)))
    sync = set(a.alphabet[:1])
    ab = _composed_root(a, b, sync, (0, 0))
    ba = _composed_root(b, a, sync, (0, 0))
    union, off = disjoint_union(ab, ba)
    assert check_bisimulation(union, 0, off).equivalent


def test_reachable_renumbers_from_root():
    e = builtin("fig3-left")
    sub, mapping = reachable(e.lts, e.state("q"))
    assert mapping[e.state("q")] == 0 and sub.state_count == 2
    assert e.state("p") not in mapping
