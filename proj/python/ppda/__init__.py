"""Bisimilarity of probabilistic pushdown automata."""

from ._core import (
    Ppda,
    PpdaError,
    __version__,
    afa_to_poca,
    check,
    classify,
    dist,
    game_to_pvpda,
    inc,
    reduce,
    run_cli,
    validate,
    vpda_decide,
)

__all__ = [
    "Ppda",
    "PpdaError",
    "__version__",
    "afa_to_poca",
    "check",
    "classify",
    "dist",
    "game_to_pvpda",
    "inc",
    "reduce",
    "run_cli",
    "validate",
    "vpda_decide",
]
