import unittest
from concurrent.futures import ThreadPoolExecutor
from collections import Counter
import numpy as np
from copacrr.corpus import Judgments, RankedList
from copacrr.embedding import SimInput
from copacrr.model import ModelConfig, ModelParams
from copacrr.training import (
    PairSampler, sample_pairs, Trainer, TrainState, Fold, FoldQueries, round_robin, holdout, select_best
)
from copacrr.error import ConfigError, DataError, NumericalError

CONFIG = ModelConfig(l_q=3, l_d=10, l_g=2, n_f=2, n_s=2, n_c=2, w_c=1, hidden_sizes=(4,))

def make_input(rng: np.random.Generator, relevant: bool, config: ModelConfig = CONFIG) -> SimInput:
    """A relevant document matches strongly, a non-relevant one weakly."""
    low, high = (0.5, 1.0) if relevant else (-1.0, 0.0)
    return SimInput(
        sim=rng.uniform(low, high, size=(config.l_q, config.l_d)),
        querysim=rng.uniform(low, high, size=config.l_d),
        idf=np.full(config.l_q, 1 / config.l_q),
        q_len=config.l_q,
        d_len=config.l_d,
    )

def collection(rng: np.random.Generator, n_queries: int = 4, n_docs: int = 4):
    """Judgments and inputs of a small collection: half of the documents of each query are relevant."""
    grades, inputs = {}, {}
    for q in range(n_queries):
        for d in range(n_docs):
            grade = 1 if d < n_docs // 2 else 0
            grades[(f"q{q}", f"q{q}d{d}")] = grade
            inputs[(f"q{q}", f"q{q}d{d}")] = make_input(rng, grade > 0)
    return Judgments(grades), inputs

def candidates(judgments: Judgments) -> dict[str, RankedList]:
    return {q: RankedList.from_scores(q, [(d, 0.0) for d in sorted(judgments.for_query(q))]) for q in judgments.query_ids()}

class TestPairs(unittest.TestCase):
    """Testing of the pair sampling."""

    def test_examples(self):
        rng = np.random.default_rng(0)
        sampler = sample_pairs(Judgments({('q', 'd1'): 2, ('q', 'd2'): 0}), ['q'], rng)
        self.assertEqual({(p.pos_doc_id, p.neg_doc_id) for p in sampler.sample(50)}, {('d1', 'd2')})
        with self.assertRaises(DataError, msg="Equal grades give no pair."):
            with self.assertLogs('copacrr.training.pairs', 'WARNING'):
                sample_pairs(Judgments({('q', 'd1'): 1, ('q', 'd2'): 1}), ['q'], rng)

    def test_uniform_sampling(self):
        judgments = Judgments({('q', 'd1'): 2, ('q', 'd2'): 1, ('q', 'd3'): 0})
        sampler = sample_pairs(judgments, ['q'], np.random.default_rng(1))
        counts = Counter((p.pos_doc_id, p.neg_doc_id) for p in sampler.sample(10000))
        self.assertEqual(set(counts), {('d1', 'd2'), ('d1', 'd3'), ('d2', 'd3')})
        chi2 = sum((count - 10000 / 3) ** 2 / (10000 / 3) for count in counts.values())
        self.assertLess(chi2, 13.8, "The pairs must be drawn uniformly (chi-square, 2 degrees of freedom, p=0.001).")

    def test_legality_and_skips(self):
        grades = {('q1', 'a'): 2, ('q1', 'b'): 1, ('q1', 'c'): 0, ('q1', 'n'): 4, ('q1', 'k'): 3,
                  ('q2', 'a'): 1, ('q2', 'b'): 1, ('q3', 'x'): -2, ('q3', 'y'): 1}
        judgments = Judgments(grades)
        with self.assertLogs('copacrr.training.pairs', 'WARNING'):
            sampler = PairSampler(judgments, ['q1', 'q2', 'q3'], np.random.default_rng(2))
        self.assertEqual(sampler.skipped_queries, ['q2'])
        for pair in sampler.sample(10000):
            self.assertGreater(judgments.merged(pair.query_id, pair.pos_doc_id), judgments.merged(pair.query_id, pair.neg_doc_id))
            self.assertNotEqual(pair.pos_doc_id, 'n', "Nav documents are excluded.")
            self.assertNotEqual(pair.neg_doc_id, 'n', "Nav documents are excluded.")
        self.assertEqual({p.label_pair for p in sampler.pairs}, {'HRel-NRel', 'HRel-Rel', 'Rel-NRel'})
        restricted = PairSampler(judgments, ['q1', 'q3'], np.random.default_rng(2), ['Rel-NRel'])
        self.assertEqual({p.label_pair for p in restricted.pairs}, {'Rel-NRel'})

class TestSplits(unittest.TestCase):
    """Testing of the folds."""

    def test_round_robin(self):
        plan = round_robin([str(year) for year in range(2009, 2015)])
        self.assertEqual(len(plan), 30)
        for year in range(2009, 2015):
            folds = plan.for_test_year(str(year))
            self.assertEqual(len(folds), 5, "Six years give five folds per test year.")
            for fold in folds:
                self.assertEqual(len(fold.train_years), 4)
                self.assertFalse(set(fold.train_years) & set(fold.validation_years))
        with self.assertRaises(ConfigError):
            round_robin(['2009', '2010'])

    def test_fold_roles(self):
        with self.assertRaises(ConfigError, msg="A year cannot have two roles."):
            Fold('f', ('2009', '2010'), ('2010',), ('2011',))
        fold = Fold('f', ('2009',), ('2010',), ('2011',))
        queries = fold.resolve({'2009': ['b', 'a'], '2010': ['c'], '2011': ['d']})
        self.assertEqual((queries.train, queries.validation, queries.test), (('a', 'b'), ('c',), ('d',)))
        with self.assertRaises(DataError):
            fold.resolve({'2009': ['a']})
        with self.assertRaises(ConfigError):
            FoldQueries('f', ('a',), ('a',))

    def test_holdout(self):
        ids = [f"q{i}" for i in range(10)]
        fold = holdout(ids, 0.2, 3)
        self.assertEqual((len(fold.train), len(fold.validation)), (8, 2))
        self.assertEqual(set(fold.train) | set(fold.validation), set(ids))
        self.assertEqual(fold, holdout(list(reversed(ids)), 0.2, 3), "The split only depends on the ids and the seed.")
        self.assertEqual(len(holdout(['a', 'b'], 0.01, 0).validation), 1)
        with self.assertRaises(DataError):
            holdout(['a'], 0.5, 0)

class TestSelection(unittest.TestCase):
    """Testing of the epoch selection."""

    def test_select_best(self):
        self.assertEqual(select_best([0.1, 0.3, 0.2]), 2)
        self.assertEqual(select_best([0.4, 0.4, 0.4]), 1, "Ties go to the earliest epoch.")

    def test_state_keeps_the_earliest_best(self):
        state = TrainState.initialize(CONFIG, 1e-3, 0)
        for metric in (0.2, 0.5, 0.5, 0.1):
            state.epoch += 1
            state.record(1.0, metric)
        self.assertEqual((state.best_epoch, state.best_metric), (2, 0.5))

class TestTrainer(unittest.TestCase):
    """Testing of the training loop."""

    def setUp(self):
        self.judgments, self.inputs = collection(np.random.default_rng(10))

    def trainer(self, **kwargs) -> Trainer:
        settings = {'learning_rate': 1e-2, 'batch_size': 4, 'batches_per_iteration': 2}
        settings.update(kwargs)
        return Trainer(settings.pop('config', CONFIG), lambda q, d: self.inputs.get((q, d)), self.judgments, **settings)

    def test_zero_learning_rate(self):
        trainer = self.trainer(learning_rate=0.0)
        state = TrainState.initialize(CONFIG, 0.0, 0)
        before = state.params.copy()
        trainer.train_epoch(state, trainer.sampler(state, self.judgments.query_ids()))
        for a, b in zip(before.arrays, state.params.arrays):
            np.testing.assert_array_equal(a, b)

    def test_determinism_and_workers(self):
        checksums = []
        for workers in (1, 1, 3):
            trainer = self.trainer(workers=workers)
            state = TrainState.initialize(CONFIG, 1e-2, 42)
            sampler = trainer.sampler(state, self.judgments.query_ids())
            with ThreadPoolExecutor(workers) as executor:
                for _ in range(2):
                    trainer.train_epoch(state, sampler, executor if workers > 1 else None)
            checksums.append(state.params.checksum())
        self.assertEqual(checksums[0], checksums[1], "The same seed must give the same parameters.")
        self.assertEqual(checksums[0], checksums[2], "The parallel reduction must not change the parameters.")

    def test_inputs_are_not_modified(self):
        copies = {key: (value.sim.copy(), value.querysim.copy()) for key, value in self.inputs.items()}
        trainer = self.trainer()
        state = TrainState.initialize(CONFIG, 1e-2, 0)
        trainer.train_epoch(state, trainer.sampler(state, self.judgments.query_ids()))
        for key, (sim, querysim) in copies.items():
            np.testing.assert_array_equal(self.inputs[key].sim, sim)
            np.testing.assert_array_equal(self.inputs[key].querysim, querysim)

    def test_overfit_one_pair(self):
        rng = np.random.default_rng(11)
        judgments = Judgments({('q', 'pos'): 2, ('q', 'neg'): 0})
        inputs = {('q', 'pos'): make_input(rng, True), ('q', 'neg'): make_input(rng, False)}
        trainer = Trainer(CONFIG, lambda q, d: inputs.get((q, d)), judgments, 1e-2, batch_size=1, batches_per_iteration=1)
        state = TrainState.initialize(CONFIG, 1e-2, 0)
        sampler = trainer.sampler(state, ['q'])
        losses = [trainer.train_epoch(state, sampler) for _ in range(200)]
        self.assertLess(losses[-1], 1e-3)

    def test_loss_decreases(self):
        judgments, inputs = collection(np.random.default_rng(12), n_queries=4, n_docs=8)
        trainer = Trainer(CONFIG, lambda q, d: inputs.get((q, d)), judgments, 1e-3, batch_size=16, batches_per_iteration=4)
        state = TrainState.initialize(CONFIG, 1e-3, 1)
        sampler = trainer.sampler(state, judgments.query_ids())
        self.assertEqual(len(sampler), 64)
        losses = [trainer.train_epoch(state, sampler) for _ in range(30)]
        self.assertLess(np.mean(losses[-10:]), np.mean(losses[:10]))

    def test_non_finite_loss(self):
        trainer = self.trainer()
        state = TrainState.initialize(CONFIG, 1e-2, 0)
        state.params.arrays[-2][0, 0] = np.nan
        with self.assertRaises(NumericalError) as context:
            trainer.train_epoch(state, trainer.sampler(state, self.judgments.query_ids()))
        self.assertIn("batch 0", str(context.exception))

    def test_run_fold(self):
        trainer = self.trainer(workers=2)
        fold = FoldQueries('f', ('q0', 'q1', 'q2'), ('q3',))
        result = trainer.run_fold(fold, candidates(self.judgments), 3, 0)
        self.assertEqual(len(result.history), 3)
        self.assertEqual(result.best_epoch, select_best(result.validation_errs))
        self.assertEqual(result.best_metric, max(result.validation_errs))
        self.assertEqual(result.params.checksum(), trainer.run_fold(fold, candidates(self.judgments), 3, 0).params.checksum())
        with self.assertRaises(DataError, msg="An empty validation set must be rejected."):
            trainer.run_fold(FoldQueries('g', ('q0',), ('missing',)), candidates(self.judgments), 1, 0)

if __name__ == '__main__':
    unittest.main()
