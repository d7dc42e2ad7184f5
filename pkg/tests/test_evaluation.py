import os
import tempfile
import unittest
import numpy as np
from copacrr.corpus import Judgments, RankedList
from copacrr.evaluation import (
    GradedRanking, err_at_k, graded_ranking, per_query_err, mean_err, rerank_with_model, rerank_run, append_tail, rerank_simple,
    rerank_all_stats, compare_runs, RunComparison, pair_accuracy, format_table, write_report
)
from copacrr.logger import read_records

def ranked(query_id: str, doc_ids: list[str]) -> RankedList:
    return RankedList.from_scores(query_id, [(doc_id, float(len(doc_ids) - i)) for i, doc_id in enumerate(doc_ids)])

class TestErr(unittest.TestCase):
    """Testing of the expected reciprocal rank."""

    def test_hand_computed_values(self):
        self.assertAlmostEqual(err_at_k([2], 20), 0.75, delta=1e-12)
        self.assertEqual(err_at_k([0, 0, 0], 20), 0.0)
        self.assertAlmostEqual(err_at_k([2, 2], 2), 0.84375, delta=1e-12)
        self.assertAlmostEqual(err_at_k([2, 2], 1), 0.75, delta=1e-12, msg="The documents after the cutoff do not count.")
        self.assertAlmostEqual(err_at_k(GradedRanking((4,), 4), 20), 15 / 16, delta=1e-12)
        self.assertEqual(err_at_k([], 20), 0.0)
        with self.assertRaises(ValueError):
            err_at_k([1], 0)
        with self.assertRaises(ValueError, msg="A grade above g_max is invalid."):
            err_at_k([3], 20)

    def test_promoting_a_higher_grade_never_decreases(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            grades = rng.integers(0, 3, size=10).tolist()
            i, j = sorted(rng.choice(10, size=2, replace=False).tolist())
            if grades[j] <= grades[i]:
                continue
            swapped = list(grades)
            swapped[i], swapped[j] = swapped[j], swapped[i]
            self.assertGreaterEqual(err_at_k(swapped, 10) + 1e-15, err_at_k(grades, 10))

    def test_non_decreasing_in_k(self):
        rng = np.random.default_rng(1)
        grades = rng.integers(0, 3, size=30).tolist()
        values = [err_at_k(grades, k) for k in range(1, 31)]
        self.assertEqual(values, sorted(values))
        self.assertTrue(all(0.0 <= v <= 1.0 for v in values))

    def test_runs(self):
        judgments = Judgments({('q1', 'a'): 2, ('q1', 'b'): 4, ('q2', 'c'): 1})
        run = [ranked('q1', ['x', 'a', 'b']), ranked('q2', ['c'])]
        self.assertEqual(graded_ranking(run[0], judgments).grades, (0, 2, 0), "Unjudged and Nav documents count as 0.")
        self.assertEqual(graded_ranking(run[0], judgments, merge=False).grades, (0, 2, 4))
        errs = per_query_err(run, judgments)
        self.assertAlmostEqual(errs['q1'], 0.375)
        self.assertAlmostEqual(errs['q2'], 0.25)
        self.assertAlmostEqual(mean_err(run, judgments), 0.3125, msg="The queries have equal weights.")
        self.assertEqual(mean_err([], judgments), 0.0)

class TestRerank(unittest.TestCase):
    """Testing of the re-ranking."""

    def test_orders(self):
        candidates = ranked('q', ['a', 'b', 'c', 'd'])
        positions = {doc_id: rank for rank, doc_id in enumerate(candidates.doc_ids)}
        self.assertEqual(rerank_with_model(candidates, lambda q, d: positions[d]).doc_ids, ['d', 'c', 'b', 'a'])
        self.assertEqual(rerank_with_model(candidates, lambda q, d: 1.0).doc_ids, ['a', 'b', 'c', 'd'],
                         "Ties keep the original order.")

    def test_sort_oracle_and_transforms(self):
        rng = np.random.default_rng(2)
        doc_ids = [f"d{i}" for i in range(30)]
        candidates = ranked('q', doc_ids)
        scores = dict(zip(doc_ids, rng.integers(0, 8, size=30).tolist()))
        reranked = rerank_with_model(candidates, lambda q, d: scores[d])
        oracle = sorted(doc_ids, key=lambda d: (-scores[d], doc_ids.index(d)))
        self.assertEqual(reranked.doc_ids, oracle)
        self.assertEqual(sorted(reranked.doc_ids), sorted(doc_ids), "The documents must be preserved.")
        transformed = rerank_with_model(candidates, lambda q, d: np.exp(scores[d]) - 3)
        self.assertEqual(transformed.doc_ids, reranked.doc_ids)

    def test_missing_documents_sink(self):
        candidates = ranked('q', ['a', 'b', 'c'])
        with self.assertLogs('copacrr.evaluation.rerank', 'WARNING'):
            reranked = rerank_with_model(candidates, lambda q, d: None if d == 'a' else 1.0)
        self.assertEqual(reranked.doc_ids, ['b', 'c', 'a'])
        self.assertEqual(rerank_run([candidates], lambda q, d: 0.0, depth=2)[0].doc_ids, ['a', 'b'])

    def test_tail_is_kept(self):
        candidates = ranked('q', ['a', 'b', 'c', 'd', 'e'])
        scores = {'a': 0.1, 'b': 0.7, 'c': 0.3}
        result = rerank_run([candidates], lambda q, d: scores.get(d), depth=3, keep_tail=True)[0]
        self.assertEqual(result.doc_ids, ['b', 'c', 'a', 'd', 'e'], "The tail follows the reranked head in its order.")
        self.assertEqual([e.rank for e in result], [1, 2, 3, 4, 5])
        self.assertEqual(append_tail(candidates, candidates).doc_ids, candidates.doc_ids)
        with self.assertLogs('copacrr.evaluation.rerank', 'WARNING'):
            sunk = rerank_run([candidates], lambda q, d: None, depth=2, keep_tail=True)[0]
        self.assertEqual(sunk.doc_ids, ['a', 'b', 'c', 'd', 'e'], "Unscored heads and the tail keep their order.")

    def test_rerank_all(self):
        judgments = Judgments({('q1', 'a'): 2, ('q1', 'b'): 1, ('q1', 'c'): 0, ('q2', 'd'): 1, ('q2', 'e'): 0})
        runs = [
            [ranked('q1', ['c', 'b', 'a']), ranked('q2', ['e', 'd'])],
            [ranked('q1', ['b', 'c', 'a']), ranked('q2', ['d', 'e'])],
        ]
        same = runs[0]
        order = {(r.query_id, d): -i for r in same for i, d in enumerate(r.doc_ids)}
        stats = rerank_all_stats([same], lambda q, d: order[(q, d)], judgments)
        self.assertEqual((stats.improved_fraction, stats.mean_relative_delta), (0.0, 0.0))
        oracle = rerank_all_stats(runs, lambda q, d: judgments.grade(q, d), judgments, names=['one', 'two'])
        self.assertEqual(oracle.improved_fraction, 1.0)
        self.assertEqual([c.name for c in oracle.runs], ['one', 'two'])
        simple = rerank_simple(runs[0], lambda q, d: judgments.grade(q, d), judgments)
        self.assertGreater(simple.after, simple.before)

    def test_compare_runs(self):
        stats = compare_runs([RunComparison('a', 0.5, 0.55), RunComparison('b', 0.5, 0.45), RunComparison('c', 0.0, 0.1)])
        self.assertAlmostEqual(stats.improved_fraction, 2 / 3)
        self.assertAlmostEqual(stats.mean_relative_delta, 0.0)
        self.assertEqual(stats.excluded, 1, "A run whose ERR before is 0 is excluded from the mean.")
        stats = compare_runs([RunComparison('a', 0.5, 0.55), RunComparison('b', 0.5, 0.45)])
        self.assertEqual(stats.improved_fraction, 0.5)
        with self.assertRaises(ValueError):
            compare_runs([])

class TestPairAccuracy(unittest.TestCase):
    """Testing of the pair accuracy."""

    def setUp(self):
        self.judgments = Judgments({('q', 'h'): 2, ('q', 'r'): 1, ('q', 'n'): 0, ('q', 'k'): 3, ('q', 'v'): 4})

    def test_examples(self):
        oracle = pair_accuracy(self.judgments, lambda q, d: self.judgments.grade(q, d), ['q'])
        self.assertEqual(oracle.as_dict(), {'HRel-NRel': 1.0, 'HRel-Rel': 1.0, 'Rel-NRel': 1.0})
        self.assertEqual(oracle.counts['HRel-NRel'].tested, 2, "Key documents are HRel, Nav documents are excluded.")
        constant = pair_accuracy(self.judgments, lambda q, d: 0.5, ['q'])
        self.assertEqual(constant.as_dict(), {'HRel-NRel': 0.0, 'HRel-Rel': 0.0, 'Rel-NRel': 0.0}, "Ties are incorrect.")
        half = pair_accuracy(self.judgments, lambda q, d: 0.5, ['q'], tie_credit=0.5)
        self.assertEqual(half.accuracy('Rel-NRel'), 0.5)
        judgments = Judgments({('q', 'a'): 2, ('q', 'b'): 1, ('q', 'c'): 0})
        scores = {'a': 0.9, 'b': 0.1, 'c': 0.5}
        report = pair_accuracy(judgments, lambda q, d: scores[d], ['q'])
        self.assertEqual(report.as_dict(), {'HRel-NRel': 1.0, 'HRel-Rel': 1.0, 'Rel-NRel': 0.0})

    def test_negation_and_transform(self):
        rng = np.random.default_rng(3)
        grades = {('q', f"d{i}"): int(g) for i, g in enumerate(rng.integers(0, 3, size=30))}
        judgments = Judgments(grades)
        scores = {d: s for (_, d), s in zip(grades, rng.permutation(30).tolist())}
        report = pair_accuracy(judgments, lambda q, d: scores[d], ['q'])
        negated = pair_accuracy(judgments, lambda q, d: -scores[d], ['q'])
        transformed = pair_accuracy(judgments, lambda q, d: np.log1p(scores[d]), ['q'])
        for name in report.counts:
            if not report.counts[name].tested:
                continue
            self.assertAlmostEqual(report.accuracy(name) + negated.accuracy(name), 1.0)
            self.assertEqual(report.accuracy(name), transformed.accuracy(name))

    def test_unscored_pairs_are_skipped(self):
        report = pair_accuracy(self.judgments, lambda q, d: None if d == 'n' else 1.0, ['q'])
        self.assertEqual(report.skipped, 3)
        self.assertEqual(report.counts['HRel-NRel'].tested, 0)
        report.add(pair_accuracy(self.judgments, lambda q, d: self.judgments.grade(q, d), ['q']))
        self.assertEqual(report.counts['HRel-NRel'].tested, 2)
        self.assertEqual(report.skipped, 3)

class TestReport(unittest.TestCase):
    """Testing of the reports."""

    def test_format_table(self):
        table = format_table(['run', 'ERR@20'], [['a', 0.5], ['long', 0.25]], 'title')
        self.assertEqual(table, "title\nrun   ERR@20\n----  ------\na     0.5000\nlong  0.2500\n")

    def test_write_report(self):
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, 'report.txt')
            records = [{'run': 'a', 'metric': 'ERR@20', 'value': 0.5}]
            write_report(path, ["table\n"], records)
            with open(path, 'rb') as f:
                first = f.read()
            with open(path + '.jsonl', 'rb') as f:
                first_records = f.read()
            self.assertEqual(read_records(path + '.jsonl'), records, "The report records carry no timestamp.")
            write_report(path, ["table\n"], records)
            with open(path, 'rb') as f:
                self.assertEqual(f.read(), first)
            with open(path + '.jsonl', 'rb') as f:
                self.assertEqual(f.read(), first_records)

if __name__ == '__main__':
    unittest.main()
