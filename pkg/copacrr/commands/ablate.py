"""
The ablate command trains and evaluates every variant under the same seeds and folds,
and the sweep command does the same for several cascade positions and context windows.
"""
from dataclasses import dataclass, field
import logging

from .._base import Experiment
from ..config import RunConfig
from ..corpus import LABEL_PAIRS
from ..evaluation import PairAccuracyReport, pair_accuracy, format_table, write_report
from ..model import ModelConfig, VARIANTS

LOGGER = logging.getLogger(__name__)

CO_PACRR = 'Co-PACRR'

@dataclass
class Comparison:
    """The pair accuracy on the held-out queries and the validation ERR of the selected epochs of one model config."""

    name: str
    accuracy: PairAccuracyReport = field(default_factory=PairAccuracyReport)
    validation_errs: list[float] = field(default_factory=list)

    @property
    def mean_validation_err(self) -> float:
        """The mean of the validation ERR of every fold and seed."""
        return sum(self.validation_errs) / len(self.validation_errs) if self.validation_errs else 0.0

def compare(experiment: Experiment, name: str, model_config: ModelConfig, seeds: list[int], folds) -> Comparison:
    """Train a model config on every fold with every seed and aggregate the pair accuracy of the held-out queries."""
    comparison = Comparison(name)
    judgments = experiment.judgments
    tie_credit = experiment.config.get('tie_credit')
    for seed in seeds:
        for fold in folds:
            result = experiment.train(model_config, fold, seed)
            held_out = fold.test or fold.validation
            comparison.accuracy.add(pair_accuracy(judgments, experiment.scorer(result.params), held_out, tie_credit))
            comparison.validation_errs.append(result.best_metric)
            LOGGER.info("%s, fold %s, seed %d: epoch %d selected.", name, fold.name, seed, result.best_epoch)
    return comparison

def cmd_ablate(config: RunConfig) -> dict[str, Comparison]:
    """
    Compare the eight variants, from PACRR to Co-PACRR, with the seeds of ablate_seeds.
    The variants are the columns of the table, the label pairs and the validation ERR its rows.
    """
    config.require_paths('embeddings', 'docs', 'queries', 'qrels')
    experiment = Experiment(config)
    base = config.model_config()
    folds = experiment.folds()
    seeds = config.get('ablate_seeds')
    results = {variant: compare(experiment, variant, base.with_variant(variant), seeds, folds) for variant in VARIANTS}
    metric = f"validation ERR@{config.k}"
    rows = [[name] + [results[v].accuracy.accuracy(name) for v in VARIANTS] for name in LABEL_PAIRS]
    rows.append([metric] + [results[v].mean_validation_err for v in VARIANTS])
    records = []
    for variant, comparison in results.items():
        for name in LABEL_PAIRS:
            records.append({'run': variant, 'metric': f"pair_accuracy:{name}", 'value': comparison.accuracy.accuracy(name)})
        records.append({'run': variant, 'metric': metric, 'value': comparison.mean_validation_err})
    write_report(config.output, [format_table(['metric'] + list(VARIANTS), rows)], records)
    return results

def cmd_sweep(config: RunConfig) -> dict[str, Comparison]:
    """Train Co-PACRR for every n_c of sweep_n_c and every w_c of sweep_w_c, on the same fold and seed."""
    config.require_paths('embeddings', 'docs', 'queries', 'qrels')
    experiment = Experiment(config)
    base = config.model_config().with_variant(CO_PACRR)
    folds = [experiment.fold()]
    settings = [(f"n_c={n_c}", {'n_c': n_c}) for n_c in config.get('sweep_n_c')]
    settings += [(f"w_c={w_c}", {'w_c': w_c}) for w_c in config.get('sweep_w_c')]
    results = {}
    for name, values in settings:
        model_config = ModelConfig.from_dict({**base.to_dict(), **values})
        results[name] = compare(experiment, name, model_config, [config.seed], folds)
    rows = [[name] + [comparison.accuracy.accuracy(p) for p in LABEL_PAIRS] for name, comparison in results.items()]
    records = [
        {'run': name, 'metric': f"pair_accuracy:{p}", 'value': comparison.accuracy.accuracy(p)}
        for name, comparison in results.items() for p in LABEL_PAIRS
    ]
    write_report(config.output, [format_table(['setting'] + list(LABEL_PAIRS), rows)], records)
    return results
