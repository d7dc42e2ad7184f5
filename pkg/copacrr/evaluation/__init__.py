"""The evaluation package contains the ERR metric, the re-ranking benchmarks and the pair accuracy."""
from .metrics import GradedRanking, err_at_k, graded_ranking, per_query_err, mean_err
from .rerank import (
    Scorer, rerank_with_model, rerank_run, append_tail, rerank_simple, rerank_all_stats, compare_runs, RunComparison, RerankAllStats
)
from .pair_accuracy import pair_accuracy, PairAccuracyReport, LabelPairCount
from .report import format_table, write_report

__all__ = ['GradedRanking', 'err_at_k', 'graded_ranking', 'per_query_err', 'mean_err',
           'Scorer', 'rerank_with_model', 'rerank_run', 'append_tail', 'rerank_simple', 'rerank_all_stats', 'compare_runs',
           'RunComparison', 'RerankAllStats', 'pair_accuracy', 'PairAccuracyReport', 'LabelPairCount',
           'format_table', 'write_report']
