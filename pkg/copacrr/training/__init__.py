"""The training package samples the training pairs, trains the model and selects the best epoch."""
from .pairs import TrainingPair, PairSampler, sample_pairs, candidate_pairs
from .splits import Fold, FoldQueries, SplitPlan, round_robin, holdout
from .trainer import TrainState, Trainer, FoldResult, EpochRecord, select_best, example_gradients, pair_loss

__all__ = ['TrainingPair', 'PairSampler', 'sample_pairs', 'candidate_pairs',
           'Fold', 'FoldQueries', 'SplitPlan', 'round_robin', 'holdout',
           'TrainState', 'Trainer', 'FoldResult', 'EpochRecord', 'select_best', 'example_gradients', 'pair_loss']
