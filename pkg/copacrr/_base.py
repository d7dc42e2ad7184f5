"""An Experiment gathers what every command needs: the config, the collection, the embeddings and the input cache."""
from functools import cached_property
import logging
import os
import numpy as np

from .config import RunConfig
from .corpus import Corpus, Judgments, RankedList, read_qrels, read_run, NO_YEAR
from .embedding import EmbeddingTable, SimCache, SimInput, query_vec
from .evaluation import Scorer
from .file import file_digest, get_file
from .logger import Logger
from .model import ModelConfig, ModelParams, score_inference
from .training import Trainer, FoldQueries, FoldResult, Fold, round_robin, holdout
from .error import DataError

LOGGER = logging.getLogger(__name__)

def load_embeddings(path: str, cache_dir: str | None = None) -> tuple[EmbeddingTable, str]:
    """
    Load an embedding file and return the table with the digest of the file.
    A text file is parsed once, then read from its binary copy in the cache.
    """
    if not os.path.exists(path):
        raise DataError(f"The embedding file {path} does not exist.")
    digest = file_digest(path)
    with open(path, 'rb') as f:
        is_binary = f.read(4) == b'CPEM'
    if is_binary:
        return EmbeddingTable.load_binary(path), digest
    cached = get_file('embeddings', digest + '.cpem', cache_dir)
    if os.path.exists(cached):
        return EmbeddingTable.load_binary(cached), digest
    # read back: the first run sees the float32 values of the cache, like the next ones.
    EmbeddingTable.load_word2vec_text(path).save_binary(cached)
    return EmbeddingTable.load_binary(cached), digest

class Experiment:
    """
    The Experiment loads the parts of the collection lazily, so that a command only reads the files it uses.

    Params:
    ----
    - config: the RunConfig of the command.
    - persist: bool, whether the inputs are stored in the cache directory.
    """

    def __init__(self, config: RunConfig, persist: bool = True) -> None:
        self.config = config
        self.persist = persist
        self._q_vectors: dict[str, np.ndarray | None] = {}
        self._inputs: dict[tuple, SimInput | None] = {}
        self.oov_queries: list[str] = []

    @cached_property
    def corpus(self) -> Corpus:
        """The documents and queries."""
        return Corpus.load(self.config.get('docs'), self.config.get('queries'))

    @cached_property
    def judgments(self) -> Judgments:
        """The relevance judgments."""
        return read_qrels(self.config.get('qrels'))

    @cached_property
    def cache(self) -> SimCache:
        """The input cache, built on the embeddings."""
        table, digest = load_embeddings(self.config.get('embeddings'), self.config.cache_dir)
        return SimCache(table, digest, self.config.cache_dir, self.persist)

    @cached_property
    def runs(self) -> list[tuple[str, list[RankedList]]]:
        """The initial runs, named after their files."""
        return [(os.path.basename(path), read_run(path)) for path in self.config.get('runs', [])]

    def q_vector(self, query_id: str) -> np.ndarray | None:
        """The mean vector of a query, None when every term is out of vocabulary."""
        if query_id not in self._q_vectors:
            try:
                self._q_vectors[query_id] = query_vec(self.corpus.queries[query_id], self.cache.table)
            except DataError:
                LOGGER.warning("Every term of the query %s is out of vocabulary, its querysim is zero.", query_id)
                self.oov_queries.append(query_id)
                self._q_vectors[query_id] = None
        return self._q_vectors[query_id]

    def sim_input(self, query_id: str, doc_id: str, config: ModelConfig) -> SimInput | None:
        """Return the inputs of a pair, None if the query or the document text is missing."""
        key = (query_id, doc_id, config.l_q, config.l_d, config.w_c)
        if key not in self._inputs:
            query = self.corpus.queries.get(query_id)
            doc = self.corpus.get_document(doc_id)
            if query is None or doc is None:
                self._inputs[key] = None
            else:
                self._inputs[key] = self.cache.sim_input(query, doc, config.l_q, config.l_d, config.w_c, self.q_vector(query_id))
        return self._inputs[key]

    def provider(self, config: ModelConfig):
        """Return the input provider of the trainer."""
        return lambda query_id, doc_id: self.sim_input(query_id, doc_id, config)

    def scorer(self, params: ModelParams) -> Scorer:
        """Return the scorer of the parameters, None for the pairs without inputs."""
        def score(query_id: str, doc_id: str) -> float | None:
            sim_input = self.sim_input(query_id, doc_id, params.config)
            return None if sim_input is None else score_inference(sim_input, params, params.config)
        return score

    def judged_queries(self) -> list[str]:
        """The sorted ids of the queries with text and merged judgments."""
        return [q for q in self.judgments.query_ids() if q in self.corpus.queries]

    def candidates(self) -> dict[str, RankedList]:
        """
        The candidates of every judged query: the first rerank_depth documents of the first run,
        or the judged documents ordered by id when the run does not hold the query or when there is no run.
        """
        depth = self.config.get('rerank_depth') or None
        candidates = {}
        if self.runs:
            for ranked in self.runs[0][1]:
                candidates[ranked.query_id] = ranked.top(depth)
        for query_id in self.judged_queries():
            if query_id not in candidates:
                docs = sorted(self.judgments.for_query(query_id))
                candidates[query_id] = RankedList.from_scores(query_id, [(doc_id, 0.0) for doc_id in docs]).top(depth)
        return candidates

    def _years(self) -> dict[str, list[str]]:
        judged = set(self.judged_queries())
        return {year: [q for q in ids if q in judged] for year, ids in self.corpus.years().items()}

    def fold(self) -> FoldQueries:
        """
        The fold of a training: the configured years if any,
        otherwise a random holdout of the judged queries not belonging to the test years.
        """
        train_years = self.config.get('train_years')
        if train_years:
            fold = Fold('configured', tuple(train_years), tuple(self.config.get('validation_years')), tuple(self.config.get('test_years')))
            return fold.resolve(self._years())
        years = self._years()
        test = sorted(q for year in self.config.get('test_years') for q in years.get(year, []))
        pool = [q for q in self.judged_queries() if q not in set(test)]
        fold = holdout(pool, self.config.get('validation_fraction'), self.config.seed)
        return FoldQueries(fold.name, fold.train, fold.validation, tuple(test))

    def folds(self) -> list[FoldQueries]:
        """
        The folds of a comparison: the round robin over the years when the queries have at least three years
        and no year is configured, the single fold of a training otherwise.
        """
        years = [year for year in self._years() if year != NO_YEAR]
        if not self.config.get('train_years') and len(years) >= 3:
            return [fold.resolve(self._years()) for fold in round_robin(years)]
        return [self.fold()]

    def trainer(self, config: ModelConfig, logger: Logger | None = None) -> Trainer:
        """Return a trainer for a model config, with the settings of the run config."""
        return Trainer(
            config,
            self.provider(config),
            self.judgments,
            learning_rate=self.config.get('learning_rate'),
            batch_size=self.config.get('batch_size'),
            batches_per_iteration=self.config.get('batches_per_iteration'),
            workers=self.config.workers,
            k=self.config.k,
            label_pairs=self.config.get('label_pairs'),
            merge=self.config.merge,
            logger=logger,
        )

    def train(self, config: ModelConfig, fold: FoldQueries, seed: int, logger: Logger | None = None) -> FoldResult:
        """Train a model on a fold."""
        return self.trainer(config, logger).run_fold(fold, self.candidates(), self.config.get('iterations'), seed)
