"""The rerank command reorders the candidates of every initial run with a trained model."""
import logging
import os

from .._base import Experiment
from ..config import RunConfig
from ..corpus import write_run
from ..evaluation import rerank_run
from ..model import load_checkpoint

LOGGER = logging.getLogger(__name__)

RUN_TAG = 'copacrr'

def cmd_rerank(config: RunConfig) -> list[str]:
    """
    Write one reranked TREC run per initial run in the output folder, under the name of the initial run.
    The candidates below the rerank depth are kept after the reranked ones, in their original order.
    """
    config.require_paths('embeddings', 'docs', 'queries', 'checkpoint', 'runs')
    params = load_checkpoint(config.get('checkpoint'))
    experiment = Experiment(config)
    scorer = experiment.scorer(params)
    depth = config.get('rerank_depth') or None
    paths = []
    for name, run in experiment.runs:
        path = os.path.join(config.output, name).replace('\\', '/')
        write_run(rerank_run(run, scorer, depth, keep_tail=True), path, RUN_TAG)
        paths.append(path)
        LOGGER.info("Reranked %s into %s.", name, path)
    return paths
