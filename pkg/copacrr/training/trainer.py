"""
The trainer module trains the model on sampled pairs with the pairwise loss,
and selects the epoch maximizing ERR@k on the validation queries.
"""
from concurrent.futures import ThreadPoolExecutor
from contextlib import nullcontext
from dataclasses import dataclass, field
from typing import Callable, Sequence
import logging
import numpy as np

from .pairs import PairSampler, TrainingPair
from .splits import FoldQueries
from ..corpus import Judgments, RankedList
from ..embedding import SimInput
from ..evaluation import rerank_run, mean_err
from ..logger import Logger
from ..model import ModelConfig, ModelParams, forward, score_inference, MAX_MARGIN
from ..numerics import Adam, pairwise_ce_loss, pairwise_margin_loss
from ..error import NumericalError, DataError

LOGGER = logging.getLogger(__name__)

InputProvider = Callable[[str, str], SimInput | None]

@dataclass
class EpochRecord:
    """The mean training loss and the validation ERR of an epoch."""

    epoch: int
    mean_loss: float
    validation_err: float | None = None

class TrainState:
    """
    The TrainState holds everything a training run changes: the parameters, the optimizer moments,
    the epoch counter, the random generator and the best epoch found so far.
    The same seed with the same data gives the same parameter trajectory.
    """

    def __init__(self, params: ModelParams, learning_rate: float, seed: int, rng: np.random.Generator | None = None):
        self.params = params
        self.optimizer = Adam(learning_rate)
        self.epoch = 0
        self.seed = seed
        self.rng = rng if rng is not None else np.random.default_rng(seed)
        self.best_metric: float | None = None
        self.best_epoch: int | None = None
        self.best_params: ModelParams | None = None
        self.history: list[EpochRecord] = []

    @classmethod
    def initialize(cls, config: ModelConfig, learning_rate: float, seed: int) -> 'TrainState':
        """Draw new parameters with the seed; the same generator then drives the sampling and the shuffling."""
        rng = np.random.default_rng(seed)
        return cls(ModelParams.initialize(config, rng), learning_rate, seed, rng)

    def record(self, mean_loss: float, validation_err: float | None = None) -> EpochRecord:
        """Record the end of an epoch. A strictly better validation ERR replaces the kept parameters."""
        record = EpochRecord(self.epoch, mean_loss, validation_err)
        self.history.append(record)
        if validation_err is not None and (self.best_metric is None or validation_err > self.best_metric):
            self.best_metric = validation_err
            self.best_epoch = self.epoch
            self.best_params = self.params.copy()
        return record

def select_best(metrics: Sequence[float]) -> int:
    """Return the 1-based epoch of the highest metric, the earliest one on ties."""
    if not metrics:
        raise ValueError("No epoch to select.")
    return int(np.argmax(metrics)) + 1

def pair_loss(config: ModelConfig):
    """Return the loss function of the config."""
    return pairwise_margin_loss if config.loss == MAX_MARGIN else pairwise_ce_loss

def example_gradients(
    pos: SimInput,
    neg: SimInput,
    params: ModelParams,
    config: ModelConfig,
    perm: np.ndarray | None = None
) -> tuple[float, list[np.ndarray]]:
    """Return the loss of one pair and its gradients with respect to every parameter array."""
    graph = params.leaves(requires_grad=True)
    rel_pos = forward(pos, params, config, perm, graph).tensor
    rel_neg = forward(neg, params, config, perm, graph).tensor
    loss = pair_loss(config)(rel_pos, rel_neg)
    loss.backward()
    return loss.item(), graph.gradients()

@dataclass
class FoldResult:
    """The outcome of the training on a fold: the selected parameters and the history of the epochs."""

    name: str
    params: ModelParams
    best_epoch: int
    best_metric: float
    history: list[EpochRecord] = field(default_factory=list)

    @property
    def validation_errs(self) -> list[float]:
        """The validation ERR of every epoch."""
        return [record.validation_err for record in self.history]

class Trainer:
    """
    The Trainer trains a model with minibatches of pairs.

    Params:
    ----
    - config: the model config.
    - provider: returns the SimInput of a (query_id, doc_id) pair, None if the document text is missing.
    - judgments: the relevance judgments.
    - learning_rate, batch_size, batches_per_iteration: the optimization settings. An epoch is batches_per_iteration batches.
    - workers: the number of threads computing the examples of a batch. The gradients are summed in example order.
    - k: the cutoff of the validation ERR.
    - label_pairs: the label pairs used to build the training pairs.
    - logger: the Logger of the training log, if any.
    """

    def __init__(
        self,
        config: ModelConfig,
        provider: InputProvider,
        judgments: Judgments,
        learning_rate: float = 1e-3,
        batch_size: int = 16,
        batches_per_iteration: int = 32,
        workers: int = 1,
        k: int = 20,
        label_pairs: Sequence[str] | None = None,
        merge: bool = True,
        logger: Logger | None = None
    ):
        self.config = config
        self.provider = provider
        self.judgments = judgments
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.batches_per_iteration = batches_per_iteration
        self.workers = workers
        self.k = k
        self.label_pairs = label_pairs
        self.merge = merge
        self.logger = logger

    def _usable(self, query_id: str, doc_id: str) -> bool:
        return self.provider(query_id, doc_id) is not None

    def sampler(self, state: TrainState, query_ids: Sequence[str]) -> PairSampler:
        """Return the pair sampler of the training queries, drawing with the generator of the state."""
        return PairSampler(self.judgments, query_ids, state.rng, self.label_pairs, self._usable)

    def _examples(self, state: TrainState, pairs: list[TrainingPair]):
        # the permutations are drawn in example order before any parallel work.
        perms = [state.rng.permutation(self.config.l_q) if self.config.shuffle else None for _ in pairs]
        return [
            (self.provider(p.query_id, p.pos_doc_id), self.provider(p.query_id, p.neg_doc_id), perm)
            for p, perm in zip(pairs, perms)
        ]

    def train_epoch(self, state: TrainState, sampler: PairSampler, executor: ThreadPoolExecutor | None = None) -> float:
        """
        Run one epoch: for every batch, compute the loss of every pair, then apply one optimizer step
        on the mean of the gradients. The embeddings are not parameters and are never updated.
        Return the mean loss of the epoch.
        """
        state.epoch += 1
        def compute(example):
            return example_gradients(example[0], example[1], state.params, self.config, example[2])
        losses = []
        for batch in range(self.batches_per_iteration):
            pairs = sampler.sample(self.batch_size)
            examples = self._examples(state, pairs)
            try:
                results = list(executor.map(compute, examples)) if executor is not None else [compute(e) for e in examples]
            except NumericalError as error:
                raise NumericalError(f"Non-finite value at epoch {state.epoch}, batch {batch}: {error}") from error
            batch_loss = sum(loss for loss, _ in results) / len(results)
            if not np.isfinite(batch_loss):
                ids = ', '.join(f"{p.query_id}:{p.pos_doc_id}>{p.neg_doc_id}" for p in pairs)
                raise NumericalError(f"Non-finite loss {batch_loss} at epoch {state.epoch}, batch {batch} ({ids}).")
            gradients = [np.zeros_like(a) for a in state.params.arrays]
            for _, example_grads in results:
                for total, grad in zip(gradients, example_grads):
                    total += grad
            state.optimizer.step(state.params.arrays, [g / len(results) for g in gradients])
            losses.append(batch_loss)
        return float(np.mean(losses))

    def scorer(self, params: ModelParams):
        """Return the scorer of the parameters, None for the documents without text."""
        def score(query_id: str, doc_id: str) -> float | None:
            sim_input = self.provider(query_id, doc_id)
            return None if sim_input is None else score_inference(sim_input, params, self.config)
        return score

    def validation_err(self, params: ModelParams, candidates: Sequence[RankedList]) -> float:
        """Rerank the validation candidates with the parameters and return their mean ERR@k."""
        return mean_err(rerank_run(candidates, self.scorer(params)), self.judgments, self.k, self.merge)

    def run_fold(self, fold: FoldQueries, candidates: dict[str, RankedList], iterations: int, seed: int) -> FoldResult:
        """
        Train at most iterations epochs on the training queries of the fold. After every epoch,
        rerank the candidates of the validation queries and keep the parameters of the best ERR@k, the earliest on ties.
        """
        validation = [candidates[q] for q in fold.validation if q in candidates and len(candidates[q])]
        if not validation:
            raise DataError(f"The fold {fold.name} has no validation query with candidates.")
        state = TrainState.initialize(self.config, self.learning_rate, seed)
        sampler = self.sampler(state, fold.train)
        LOGGER.info("Fold %s: %d training pairs, %d validation queries.", fold.name, len(sampler), len(validation))
        with ThreadPoolExecutor(self.workers) if self.workers > 1 else nullcontext() as executor:
            for _ in range(iterations):
                mean_loss = self.train_epoch(state, sampler, executor)
                record = state.record(mean_loss, self.validation_err(state.params, validation))
                LOGGER.debug("Fold %s, epoch %d: loss %.6f, validation ERR %.6f", fold.name, record.epoch, record.mean_loss, record.validation_err)
                if self.logger is not None:
                    self.logger.write({'fold': fold.name, 'epoch': record.epoch, 'mean_loss': record.mean_loss, 'validation_err': record.validation_err})
        if state.best_params is None:
            # no epoch was run: the initial parameters are kept.
            return FoldResult(fold.name, state.params, 0, self.validation_err(state.params, validation), state.history)
        return FoldResult(fold.name, state.best_params, state.best_epoch, state.best_metric, state.history)

