"""The rerank module reorders candidate lists with a scorer and measures the change of ERR."""
from dataclasses import dataclass, field
from typing import Callable, Sequence
import logging
import math

from .metrics import mean_err
from ..corpus import RankedList, Judgments

LOGGER = logging.getLogger(__name__)

Scorer = Callable[[str, str], float | None]
Run = Sequence[RankedList]

def rerank_with_model(candidates: RankedList, scorer: Scorer) -> RankedList:
    """
    Reorder the candidates by decreasing score, the ties keeping the original rank order.
    A document the scorer cannot score (None, e.g. its text is missing) gets -inf and sinks; a warning counts them.
    """
    scored = []
    missing = 0
    for entry in candidates:
        score = scorer(candidates.query_id, entry.doc_id)
        if score is None:
            missing += 1
            score = -math.inf
        scored.append((entry.doc_id, float(score)))
    if missing:
        LOGGER.warning("Query %s: %d documents could not be scored and were ranked last.", candidates.query_id, missing)
    return RankedList.from_scores(candidates.query_id, scored)

def append_tail(head: RankedList, ranked: RankedList) -> RankedList:
    """
    Append the documents of ranked missing from head, in their original order.
    Their scores are replaced by decreasing integers below the lowest score of head, so the scores never increase.
    """
    kept = set(head.doc_ids)
    tail = [entry.doc_id for entry in ranked if entry.doc_id not in kept]
    if not tail:
        return head
    lowest = min((entry.score for entry in head), default=0.0)
    floor = math.floor(lowest) if math.isfinite(lowest) else lowest
    scored = [(entry.doc_id, entry.score) for entry in head]
    scored += [(doc_id, floor - position) for position, doc_id in enumerate(tail, start=1)]
    return RankedList.from_scores(head.query_id, scored)

def rerank_run(run: Run, scorer: Scorer, depth: int | None = None, keep_tail: bool = False) -> list[RankedList]:
    """
    Rerank the first depth candidates of every query of a run.
    With keep_tail, the candidates below depth follow the reranked ones in their original order.
    """
    reranked = [rerank_with_model(ranked.top(depth), scorer) for ranked in run]
    if keep_tail:
        return [append_tail(head, ranked) for head, ranked in zip(reranked, run)]
    return reranked

@dataclass
class RunComparison:
    """The mean ERR@k of a run before and after re-ranking."""

    name: str
    before: float
    after: float

    @property
    def relative_delta(self) -> float | None:
        """(after - before) / before, None when before is 0."""
        return None if self.before == 0 else (self.after - self.before) / self.before

@dataclass
class RerankAllStats:
    """
    - improved_fraction: the share of runs whose ERR increased after re-ranking.
    - mean_relative_delta: the mean relative change, over the runs whose ERR before was not 0.
    - excluded: the number of runs left out of the mean because their ERR before was 0.
    """

    improved_fraction: float
    mean_relative_delta: float
    excluded: int
    runs: list[RunComparison] = field(default_factory=list)

def compare_runs(comparisons: list[RunComparison]) -> RerankAllStats:
    """Aggregate the comparisons of several runs."""
    if not comparisons:
        raise ValueError("At least one run is needed.")
    improved = sum(c.after > c.before for c in comparisons)
    deltas = [c.relative_delta for c in comparisons if c.relative_delta is not None]
    return RerankAllStats(
        improved_fraction=improved / len(comparisons),
        mean_relative_delta=sum(deltas) / len(deltas) if deltas else 0.0,
        excluded=len(comparisons) - len(deltas),
        runs=comparisons,
    )

def rerank_simple(run: Run, scorer: Scorer, judgments: Judgments, k: int = 20, depth: int | None = None, merge: bool = True, name: str = 'run') -> RunComparison:
    """Compare the mean ERR@k of one initial run before and after re-ranking."""
    before = mean_err([r.top(depth) for r in run], judgments, k, merge)
    after = mean_err(rerank_run(run, scorer, depth), judgments, k, merge)
    return RunComparison(name, before, after)

def rerank_all_stats(runs: Sequence[Run], scorer: Scorer, judgments: Judgments, k: int = 20, depth: int | None = None, merge: bool = True, names: Sequence[str] | None = None) -> RerankAllStats:
    """Rerank every run and report the share of improved runs and the mean relative change of ERR@k."""
    names = list(names) if names is not None else [f"run{i}" for i in range(len(runs))]
    return compare_runs([rerank_simple(run, scorer, judgments, k, depth, merge, name) for run, name in zip(runs, names)])
