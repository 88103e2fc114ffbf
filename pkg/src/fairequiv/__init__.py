"""Process equivalences and fair languages on finite labelled transition systems."""

from .corpus import CorpusEntry, UnknownCorpusEntry, builtin
from .equiv import SemanticsKind, Verdict, Witness, check, check_all
from .fairness import (
    BudgetExceeded,
    FairnessMode,
    FairnessSpec,
    fair_compare_bounded,
    fair_member,
    fair_run_exists,
)
from .gen import GenParams, bisim_preserving_transform, random_lts
from .lts import (
    AutParseError,
    FiniteRun,
    Lasso,
    Lts,
    LtsError,
    RunLasso,
    disjoint_union,
    parallel_compose,
    parse_aut,
    reachable,
    write_aut,
)

__all__ = [
    "AutParseError",
    "BudgetExceeded",
    "CorpusEntry",
    "FairnessMode",
    "FairnessSpec",
    "FiniteRun",
    "GenParams",
    "Lasso",
    "Lts",
    "LtsError",
    "RunLasso",
    "SemanticsKind",
    "UnknownCorpusEntry",
    "Verdict",
    "Witness",
    "bisim_preserving_transform",
    "builtin",
    "check",
    "check_all",
    "disjoint_union",
    "fair_compare_bounded",
    "fair_member",
    "fair_run_exists",
    "parallel_compose",
    "parse_aut",
    "random_lts",
    "reachable",
    "write_aut",
]
