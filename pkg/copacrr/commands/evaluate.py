"""The eval command reports the ERR@k of the runs, before and after re-ranking, and the pair accuracy of a model."""
from dataclasses import dataclass, field
import logging

from .._base import Experiment
from ..config import RunConfig
from ..corpus import LABEL_PAIRS
from ..evaluation import (
    RerankAllStats, PairAccuracyReport, RunComparison, mean_err, rerank_all_stats, pair_accuracy, format_table, write_report
)
from ..model import load_checkpoint

LOGGER = logging.getLogger(__name__)

@dataclass
class EvalReport:
    """The ERR of every run, and with a model, the re-ranking statistics and the pair accuracy."""

    errs: dict[str, float] = field(default_factory=dict)
    stats: RerankAllStats | None = None
    accuracy: PairAccuracyReport | None = None

def _delta(comparison: RunComparison):
    return '-' if comparison.relative_delta is None else comparison.relative_delta

def cmd_eval(config: RunConfig) -> EvalReport:
    """
    Evaluate the runs. With a checkpoint, the runs are also reranked with the model
    and the pair accuracy of the model is measured on the judged queries.
    The table is written in <output>, the records in <output>.jsonl.
    """
    config.require_paths('qrels', 'runs')
    with_model = config.get('checkpoint') is not None
    if with_model:
        config.require_paths('checkpoint', 'embeddings', 'docs', 'queries')
    experiment = Experiment(config)
    judgments = experiment.judgments
    k, merge = config.k, config.merge
    metric = f"ERR@{k}"
    report = EvalReport()
    records = []
    for name, run in experiment.runs:
        report.errs[name] = mean_err(run, judgments, k, merge)
        records.append({'run': name, 'metric': metric, 'value': report.errs[name]})
    tables = []
    if not with_model:
        tables.append(format_table(['run', metric], [[name, err] for name, err in report.errs.items()]))
    else:
        params = load_checkpoint(config.get('checkpoint'))
        scorer = experiment.scorer(params)
        names = [name for name, _ in experiment.runs]
        report.stats = rerank_all_stats([run for _, run in experiment.runs], scorer, judgments, k,
                                        config.get('rerank_depth') or None, merge, names)
        rows = []
        for comparison in report.stats.runs:
            rows.append([comparison.name, comparison.before, comparison.after, _delta(comparison)])
            records.append({'run': comparison.name, 'metric': f"{metric} reranked", 'value': comparison.after})
        tables.append(format_table(['run', metric, f"{metric} reranked", 'relative delta'], rows, params.config.variant))
        tables.append(format_table(['statistic', 'value'], [
            ['improved fraction', report.stats.improved_fraction],
            ['mean relative delta', report.stats.mean_relative_delta],
            ['excluded runs', report.stats.excluded],
        ]))
        records.append({'run': 'all', 'metric': 'improved_fraction', 'value': report.stats.improved_fraction})
        records.append({'run': 'all', 'metric': 'mean_relative_delta', 'value': report.stats.mean_relative_delta})
        report.accuracy = pair_accuracy(judgments, scorer, experiment.judged_queries(), config.get('tie_credit'))
        tables.append(format_table(['label pair', 'tested', 'accuracy'], [
            [name, report.accuracy.counts[name].tested, report.accuracy.accuracy(name)] for name in LABEL_PAIRS
        ]))
        for name in LABEL_PAIRS:
            records.append({'run': params.config.variant, 'metric': f"pair_accuracy:{name}", 'value': report.accuracy.accuracy(name)})
    write_report(config.output, tables, records)
    LOGGER.info("Evaluated %d runs, report written in %s.", len(report.errs), config.output)
    return report
