"""The pair_accuracy module measures how many differently-graded document pairs a scorer orders correctly."""
from dataclasses import dataclass, field
from typing import Iterable

from .rerank import Scorer
from ..corpus import Judgments, LABEL_PAIRS, label_pair_name

@dataclass
class LabelPairCount:
    """The counters of one label pair."""

    tested: int = 0
    correct: float = 0.0
    ties: int = 0

    @property
    def accuracy(self) -> float:
        """The share of correct pairs, 0 when no pair was tested."""
        return self.correct / self.tested if self.tested else 0.0

@dataclass
class PairAccuracyReport:
    """
    The pair accuracy of a scorer for the label pairs HRel-NRel, HRel-Rel and Rel-NRel.
    skipped counts the pairs with a document the scorer could not score.
    """

    counts: dict[str, LabelPairCount] = field(default_factory=lambda: {name: LabelPairCount() for name in LABEL_PAIRS})
    skipped: int = 0

    def accuracy(self, label_pair: str) -> float:
        """The accuracy of a label pair."""
        return self.counts[label_pair].accuracy

    def as_dict(self) -> dict[str, float]:
        """The accuracy of every label pair."""
        return {name: count.accuracy for name, count in self.counts.items()}

    def add(self, other: 'PairAccuracyReport'):
        """Add the counters of another report, to aggregate several folds or seeds."""
        for name, count in other.counts.items():
            mine = self.counts[name]
            mine.tested += count.tested
            mine.correct += count.correct
            mine.ties += count.ties
        self.skipped += other.skipped

def pair_accuracy(judgments: Judgments, scorer: Scorer, queries: Iterable[str], tie_credit: float = 0.0) -> PairAccuracyReport:
    """
    Test every pair of judged documents with different merged grades, for every query.
    A pair is correct when the document with the higher grade gets the strictly higher score.
    A tie counts tie_credit, 0 by default.
    """
    report = PairAccuracyReport()
    for query_id in queries:
        scores = {}
        for high_doc, low_doc, high, low in judgments.graded_pairs(query_id):
            name = label_pair_name(high, low)
            for doc_id in (high_doc, low_doc):
                if doc_id not in scores:
                    scores[doc_id] = scorer(query_id, doc_id)
            high_score, low_score = scores[high_doc], scores[low_doc]
            if high_score is None or low_score is None:
                report.skipped += 1
                continue
            count = report.counts[name]
            count.tested += 1
            if high_score > low_score:
                count.correct += 1
            elif high_score == low_score:
                count.ties += 1
                count.correct += tie_credit
    return report
