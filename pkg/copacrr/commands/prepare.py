"""The prepare command computes and caches the inputs of every judged (query, document) pair."""
from dataclasses import dataclass, field
import logging

from .._base import Experiment
from ..config import RunConfig

LOGGER = logging.getLogger(__name__)

@dataclass
class PrepareReport:
    """The counters of a preparation: a pair is a hit when none of its inputs had to be computed."""

    pairs: int = 0
    hits: int = 0
    misses: int = 0
    missing_documents: int = 0
    oov_queries: list[str] = field(default_factory=list)

def cmd_prepare(config: RunConfig) -> PrepareReport:
    """Cache the inputs of every judged pair. A second call without changes computes nothing."""
    config.require_paths('embeddings', 'docs', 'queries', 'qrels')
    experiment = Experiment(config)
    model_config = config.model_config()
    report = PrepareReport()
    cache = experiment.cache
    hits, misses = cache.pair_hits, cache.pair_misses
    for query_id in sorted(experiment.corpus.queries):
        for doc_id in sorted(experiment.judgments.for_query(query_id, merge=False)):
            if experiment.corpus.get_document(doc_id) is None:
                report.missing_documents += 1
                continue
            experiment.sim_input(query_id, doc_id, model_config)
            report.pairs += 1
    report.hits = cache.pair_hits - hits
    report.misses = cache.pair_misses - misses
    report.oov_queries = list(experiment.oov_queries)
    if report.missing_documents:
        LOGGER.warning("%d judged documents have no text and were not prepared.", report.missing_documents)
    LOGGER.info("Prepared %d pairs: %d from the cache, %d computed.", report.pairs, report.hits, report.misses)
    return report
