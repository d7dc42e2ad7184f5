"""The metrics module computes the expected reciprocal rank (ERR) of graded rankings."""
from dataclasses import dataclass
from typing import Sequence, Iterable
import numpy as np

from ..corpus import Judgments, RankedList, MERGED_MAX_GRADE, RAW_MAX_GRADE

@dataclass(frozen=True)
class GradedRanking:
    """The grades of a ranking, in rank order, and the maximum possible grade."""

    grades: tuple[int, ...]
    g_max: int = MERGED_MAX_GRADE

    def __post_init__(self):
        if any(g > self.g_max for g in self.grades):
            raise ValueError(f"The grades {self.grades} exceed the maximum grade {self.g_max}.")

def err_at_k(ranking: GradedRanking | Sequence[int], k: int, g_max: int = MERGED_MAX_GRADE) -> float:
    """
    Return the expected reciprocal rank at the cutoff k:
    sum over r <= k of (1/r) R(g_r) prod_{i<r} (1 - R(g_i)), with R(g) = (2^g - 1) / 2^g_max.
    The grades of the unjudged documents must be given as 0.
    """
    if k < 1:
        raise ValueError(f"The cutoff must be at least 1, got {k}.")
    if isinstance(ranking, GradedRanking):
        grades, g_max = ranking.grades, ranking.g_max
    else:
        grades = tuple(ranking)
        GradedRanking(grades, g_max)
    err = 0.0
    not_stopped = 1.0
    for rank, grade in enumerate(grades[:k], start=1):
        stop = (2.0 ** max(grade, 0) - 1.0) / 2.0 ** g_max
        err += not_stopped * stop / rank
        not_stopped *= 1.0 - stop
    return err

def graded_ranking(ranked: RankedList, judgments: Judgments, merge: bool = True) -> GradedRanking:
    """Return the grades of a ranked list, 0 for the unjudged documents."""
    grades = tuple(judgments.grade(ranked.query_id, doc_id, merge) for doc_id in ranked.doc_ids)
    return GradedRanking(grades, MERGED_MAX_GRADE if merge else RAW_MAX_GRADE)

def per_query_err(run: Iterable[RankedList], judgments: Judgments, k: int = 20, merge: bool = True) -> dict[str, float]:
    """Return the ERR@k of every query of a run."""
    return {ranked.query_id: err_at_k(graded_ranking(ranked, judgments, merge), k) for ranked in run}

def mean_err(run: Iterable[RankedList], judgments: Judgments, k: int = 20, merge: bool = True) -> float:
    """Return the ERR@k of a run, averaged over its queries with equal weights; 0 for an empty run."""
    values = list(per_query_err(run, judgments, k, merge).values())
    return float(np.mean(values)) if values else 0.0
