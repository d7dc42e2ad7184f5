"""The train command trains a model and saves the checkpoint of its best epoch."""
import logging

from .._base import Experiment
from ..config import RunConfig
from ..logger import Logger
from ..model import save_checkpoint
from ..training import FoldResult

LOGGER = logging.getLogger(__name__)

def checkpoint_path(config: RunConfig) -> str:
    """The configured checkpoint, <output>.cprk by default."""
    return config.get('checkpoint', config.output + '.cprk')

def cmd_train(config: RunConfig) -> FoldResult:
    """Train on the fold of the config, log every epoch in <output>.log.jsonl and save the selected parameters."""
    config.require_paths('embeddings', 'docs', 'queries', 'qrels')
    experiment = Experiment(config)
    model_config = config.model_config()
    fold = experiment.fold()
    with Logger(config.output + '.log.jsonl') as logger:
        result = experiment.train(model_config, fold, config.seed, logger)
    path = checkpoint_path(config)
    save_checkpoint(result.params, path)
    LOGGER.info("%s: epoch %d selected with a validation ERR@%d of %.4f, saved in %s.",
                model_config.variant, result.best_epoch, config.k, result.best_metric, path)
    return result
