"""The pairs module builds the training pairs (q, d+, d-) from the judgments and samples them."""
from typing import NamedTuple, Callable, Iterable, Sequence
import logging
import numpy as np

from ..corpus import Judgments, LABEL_PAIRS, label_pair_name
from ..error import DataError

LOGGER = logging.getLogger(__name__)

class TrainingPair(NamedTuple):
    """A judged document d+ with a strictly higher merged grade than the judged document d- of the same query."""

    query_id: str
    pos_doc_id: str
    neg_doc_id: str
    pos_grade: int
    neg_grade: int

    @property
    def label_pair(self) -> str:
        """The name of the label pair, e.g. HRel-NRel."""
        return label_pair_name(self.pos_grade, self.neg_grade)

def candidate_pairs(
    judgments: Judgments,
    query_ids: Iterable[str],
    label_pairs: Sequence[str] | None = None,
    usable: Callable[[str, str], bool] | None = None
) -> tuple[list[TrainingPair], list[str]]:
    """
    Return every legal training pair of the queries, and the ids of the queries without any.
    Only the label pairs listed are kept (all three by default); the documents rejected by usable are ignored.
    """
    label_pairs = list(LABEL_PAIRS) if label_pairs is None else list(label_pairs)
    pairs = []
    skipped = []
    for query_id in query_ids:
        found = [
            TrainingPair(query_id, high_doc, low_doc, high, low)
            for high_doc, low_doc, high, low in judgments.graded_pairs(query_id)
            if label_pair_name(high, low) in label_pairs
            and (usable is None or (usable(query_id, high_doc) and usable(query_id, low_doc)))
        ]
        if found:
            pairs.extend(found)
        else:
            skipped.append(query_id)
    return pairs, skipped

class PairSampler:
    """
    The PairSampler draws training pairs uniformly over every (query, ordered document pair) of the queries.
    The queries without any legal pair are skipped and counted.
    Iterating over a sampler yields an endless stream of pairs drawn with its generator.
    """

    def __init__(
        self,
        judgments: Judgments,
        query_ids: Iterable[str],
        rng: np.random.Generator,
        label_pairs: Sequence[str] | None = None,
        usable: Callable[[str, str], bool] | None = None
    ):
        self.pairs, self.skipped_queries = candidate_pairs(judgments, query_ids, label_pairs, usable)
        self.rng = rng
        if self.skipped_queries:
            LOGGER.warning("%d queries have no training pair and are skipped.", len(self.skipped_queries))
        if not self.pairs:
            raise DataError("No training pair can be built from the training queries.")

    @property
    def skipped(self) -> int:
        """The number of skipped queries."""
        return len(self.skipped_queries)

    def __len__(self):
        return len(self.pairs)

    def sample(self, size: int) -> list[TrainingPair]:
        """Draw size pairs, with replacement."""
        return [self.pairs[i] for i in self.rng.integers(0, len(self.pairs), size=size)]

    def __iter__(self):
        while True:
            yield self.pairs[int(self.rng.integers(0, len(self.pairs)))]

def sample_pairs(
    judgments: Judgments,
    query_set: Iterable[str],
    rng: np.random.Generator,
    label_pairs: Sequence[str] | None = None
) -> PairSampler:
    """Return the stream of training pairs of a query set."""
    return PairSampler(judgments, query_set, rng, label_pairs)
