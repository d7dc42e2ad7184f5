import os
import tempfile
import unittest
import numpy as np
from copacrr.embedding import SimInput
from copacrr.model import (
    ModelConfig, ModelParams, VARIANTS, forward, score_inference, pooled_features, combine, permutation_sensitivity,
    pooled_feature_width, parameter_count, save_checkpoint, load_checkpoint, dump_checkpoint, parse_checkpoint
)
from copacrr.numerics import pairwise_ce_loss, permute_rows
from copacrr.error import ConfigError, ShapeError, CheckpointError

TINY = ModelConfig(l_q=3, l_d=8, l_g=3, n_f=2, n_s=2, n_c=2, w_c=1, hidden_sizes=(4,))

def random_input(rng: np.random.Generator, config: ModelConfig) -> SimInput:
    return SimInput(
        sim=rng.uniform(-1, 1, size=(config.l_q, config.l_d)),
        querysim=rng.uniform(-1, 1, size=config.l_d),
        idf=rng.dirichlet(np.ones(config.l_q)),
        q_len=config.l_q,
        d_len=config.l_d,
    )

def reference_score(sim_input: SimInput, params: ModelParams, config: ModelConfig) -> float:
    """PACRR without any component, written with plain loops and sorts."""
    l_q, l_d = config.l_q, config.l_d
    matrices = [sim_input.sim]
    for g in range(2, config.l_g + 1):
        kernels = params.kernel(g)
        before, after = g // 2, g - 1 - g // 2
        padded = np.pad(sim_input.sim, ((before, after), (before, after)))
        conv = np.zeros((l_q, l_d, config.n_f))
        for a in range(g):
            for b in range(g):
                conv += padded[a:a + l_q, b:b + l_d, None] * kernels[a, b]
        matrices.append(conv.max(axis=2))
    rows = []
    for i in range(l_q):
        row = []
        for matrix in matrices:
            row.extend(sorted(matrix[i], reverse=True)[:config.n_s])
        row.append(sim_input.idf[i])
        rows.append(row)
    x = np.array(rows).reshape(-1)
    layers = params.dense_layers()
    for weights, bias in layers[:-1]:
        x = np.maximum(x @ weights + bias, 0.0)
    weights, bias = layers[-1]
    return float((x @ weights + bias)[0])

class TestModelConfig(unittest.TestCase):
    """Testing of the model config."""

    def test_defaults(self):
        config = ModelConfig()
        self.assertEqual(config.variant, 'Co-PACRR')
        self.assertEqual(pooled_feature_width(config), 73, "3 n-gram sizes, 3 signals, doubled, 4 positions, plus the idf.")
        self.assertEqual(config.cpos, [0.25, 0.5, 0.75, 1.0])
        self.assertEqual(config.boundaries, [200, 400, 600, 800])
        self.assertEqual(ModelConfig(l_d=10, n_c=3).boundaries, [4, 7, 10], "The boundaries are rounded up.")
        self.assertEqual(ModelConfig(cascade=False).boundaries, [800])
        self.assertEqual(pooled_feature_width(ModelConfig().with_variant('PACRR')), 10)

    def test_variants(self):
        self.assertEqual(list(VARIANTS), ['PACRR', 'C-PACRR', 'D-PACRR', 'S-PACRR', 'CD-PACRR', 'CS-PACRR', 'DS-PACRR', 'Co-PACRR'])
        for name in VARIANTS:
            self.assertEqual(TINY.with_variant(name).variant, name)
        with self.assertRaises(ConfigError):
            TINY.with_variant('X-PACRR')

    def test_invalid_values(self):
        with self.assertRaises(ConfigError):
            ModelConfig(n_f=0)
        with self.assertRaises(ConfigError):
            ModelConfig(w_c=-1)
        with self.assertRaises(ConfigError):
            ModelConfig(loss='square')
        with self.assertRaises(ConfigError):
            ModelConfig.from_dict({'l_q': 3, 'size': 2})
        self.assertEqual(ModelConfig.from_dict(TINY.to_dict()), TINY)

class TestForward(unittest.TestCase):
    """Testing of the forward pass."""

    def test_width_of_every_variant(self):
        rng = np.random.default_rng(0)
        for name in VARIANTS:
            config = TINY.with_variant(name)
            params = ModelParams.initialize(config, rng)
            features = pooled_features(random_input(rng, config), params.leaves(False), config)
            self.assertEqual(features.shape, (config.l_q, pooled_feature_width(config)), f"Wrong width for {name}.")
            self.assertEqual(params.count(), parameter_count(config))

    def test_pacrr_reference(self):
        rng = np.random.default_rng(1)
        config = TINY.with_variant('PACRR')
        for _ in range(5):
            params = ModelParams.initialize(config, rng)
            sim_input = random_input(rng, config)
            self.assertAlmostEqual(score_inference(sim_input, params, config), reference_score(sim_input, params, config), 10)

    def test_single_cascade_position(self):
        rng = np.random.default_rng(2)
        with_cascade = ModelConfig(l_q=3, l_d=8, l_g=3, n_f=2, n_s=2, n_c=1, hidden_sizes=(4,), shuffle=False)
        without = ModelConfig(l_q=3, l_d=8, l_g=3, n_f=2, n_s=2, n_c=1, hidden_sizes=(4,), shuffle=False, cascade=False)
        params = ModelParams.initialize(with_cascade, rng)
        other = ModelParams(without, params.arrays)
        for _ in range(5):
            sim_input = random_input(rng, with_cascade)
            self.assertEqual(forward(sim_input, params, with_cascade).rel, forward(sim_input, other, without).rel,
                             "One cascade position must be exactly the pooling of the whole document.")

    def test_shuffle_equivariance(self):
        rng = np.random.default_rng(3)
        params = ModelParams.initialize(TINY, rng)
        sim_input = random_input(rng, TINY)
        graph = params.leaves(False)
        features = pooled_features(sim_input, graph, TINY)
        for _ in range(100):
            perm = rng.permutation(TINY.l_q)
            expected = combine(permute_rows(features, perm), graph).item()
            self.assertEqual(forward(sim_input, params, TINY, perm).rel, expected)
        with self.assertRaises(ConfigError, msg="Only the shuffling variants accept a permutation."):
            forward(sim_input, ModelParams(TINY.with_variant('CD-PACRR'), params.arrays), TINY.with_variant('CD-PACRR'), [0, 1, 2])

    def test_inputs_are_checked(self):
        rng = np.random.default_rng(4)
        params = ModelParams.initialize(TINY, rng)
        wrong = SimInput(np.zeros((3, 7)), np.zeros(7), np.zeros(3), 3, 7)
        with self.assertRaises(ShapeError):
            forward(wrong, params, TINY)
        with self.assertRaises(ConfigError, msg="Parameters of other dimensions must be rejected."):
            forward(random_input(rng, TINY), params, TINY.with_variant('PACRR'))

    def test_trace_and_sentinels(self):
        rng = np.random.default_rng(5)
        config = ModelConfig(l_q=2, l_d=4, l_g=2, n_f=2, n_s=3, n_c=4, hidden_sizes=(3,))
        params = ModelParams.initialize(config, rng)
        sim_input = random_input(rng, config)
        output = forward(sim_input, params, config, trace=True)
        self.assertEqual(len(output.trace), config.l_g * config.n_c)
        first = output.trace[0]
        self.assertEqual((first.g, first.segment, first.end), (1, 0, 1))
        self.assertEqual(first.positions[:, 1:].tolist(), [[-1, -1], [-1, -1]], "A prefix of one position keeps one signal.")
        features = output.features.data
        # g=1, first segment: 3 values then their 3 querysims
        np.testing.assert_array_equal(features[:, 4:6], 0.0, "The padded slots get a querysim of 0.")
        np.testing.assert_array_equal(features[:, 3], sim_input.querysim[first.positions[:, 0]])
        np.testing.assert_array_equal(features[:, -1], sim_input.idf)

    def test_gradient_end_to_end(self):
        rng = np.random.default_rng(6)
        params = ModelParams.initialize(TINY, rng)
        pos, neg = random_input(rng, TINY), random_input(rng, TINY)
        perm = np.array([2, 0, 1])

        def loss() -> float:
            return pairwise_ce_loss(forward(pos, params, TINY, perm).tensor, forward(neg, params, TINY, perm).tensor).item()

        graph = params.leaves(True)
        value = pairwise_ce_loss(forward(pos, params, TINY, perm, graph).tensor, forward(neg, params, TINY, perm, graph).tensor)
        value.backward()
        analytic = np.concatenate([g.reshape(-1) for g in graph.gradients()])
        numeric = []
        eps = 1e-6
        for array in params.arrays:
            grad = np.zeros_like(array)
            for index in np.ndindex(array.shape):
                original = array[index]
                array[index] = original + eps
                plus = loss()
                array[index] = original - eps
                minus = loss()
                array[index] = original
                grad[index] = (plus - minus) / (2 * eps)
            numeric.append(grad.reshape(-1))
        numeric = np.concatenate(numeric)
        error = np.linalg.norm(analytic - numeric) / (np.linalg.norm(analytic) + np.linalg.norm(numeric))
        self.assertLess(error, 1e-3, "The gradients of the whole model must match the finite differences.")

    def test_permutation_sensitivity(self):
        rng = np.random.default_rng(7)
        params = ModelParams.initialize(TINY, rng)
        self.assertGreaterEqual(permutation_sensitivity(random_input(rng, TINY), params, TINY, rng), 0.0)
        single = ModelConfig(l_q=1, l_d=8, l_g=2, n_f=2, n_s=2, n_c=2, hidden_sizes=(3,))
        single_params = ModelParams.initialize(single, rng)
        self.assertEqual(permutation_sensitivity(random_input(rng, single), single_params, single, rng), 0.0)

    def test_querysim_is_ignored_without_disambiguation(self):
        rng = np.random.default_rng(8)
        for name in ('PACRR', 'C-PACRR', 'S-PACRR', 'CS-PACRR'):
            config = TINY.with_variant(name)
            params = ModelParams.initialize(config, rng)
            sim_input = random_input(rng, config)
            score = score_inference(sim_input, params, config)
            for querysim in (np.zeros(config.l_d), np.ones(config.l_d), rng.uniform(-1, 1, size=config.l_d)):
                other = SimInput(sim_input.sim, querysim, sim_input.idf, sim_input.q_len, sim_input.d_len)
                self.assertEqual(score_inference(other, params, config), score, f"{name} must not read the querysim.")

    def test_cascade_prefixes_are_monotone(self):
        rng = np.random.default_rng(9)
        config = ModelConfig(l_q=3, l_d=12, l_g=3, n_f=2, n_s=3, n_c=4, hidden_sizes=(4,))
        params = ModelParams.initialize(config, rng)
        for _ in range(10):
            output = forward(random_input(rng, config), params, config, trace=True)
            for g in range(1, config.l_g + 1):
                segments = sorted((t for t in output.trace if t.g == g), key=lambda t: t.segment)
                self.assertEqual([t.end for t in segments], config.boundaries)
                last = segments[-1]
                for earlier in segments[:-1]:
                    self.assertTrue(np.all(last.values[:, 0] >= earlier.values[:, 0]),
                                    "The strongest signal of the whole document bounds every prefix.")
                for shorter, longer in zip(segments, segments[1:]):
                    valid = shorter.positions >= 0
                    self.assertTrue(np.all(longer.values[valid] >= shorter.values[valid]))

    def test_no_signal_gives_a_constant_score(self):
        rng = np.random.default_rng(10)
        idf = rng.dirichlet(np.ones(TINY.l_q))
        for name in VARIANTS:
            config = TINY.with_variant(name)
            params = ModelParams.initialize(config, rng)
            scores = {
                score_inference(SimInput(np.zeros((config.l_q, config.l_d)), np.zeros(config.l_d), idf, config.l_q, d_len), params, config)
                for d_len in (0, 1, 5, config.l_d)
            }
            self.assertEqual(len(scores), 1, f"{name} must give the same score to every document without signal.")

class TestCheckpoint(unittest.TestCase):
    """Testing of the checkpoints."""

    def test_save_and_load(self):
        params = ModelParams.initialize(TINY, np.random.default_rng(8))
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, 'model.cprk')
            save_checkpoint(params, path)
            loaded = load_checkpoint(path)
            self.assertEqual(loaded.config, TINY)
            for a, b in zip(params.arrays, loaded.arrays):
                np.testing.assert_allclose(a, b, rtol=1e-6, atol=1e-7)
            self.assertEqual(os.listdir(folder), ['model.cprk'], "No temporary file may remain.")
            with self.assertRaises(CheckpointError):
                load_checkpoint(os.path.join(folder, 'missing.cprk'))
        self.assertEqual(dump_checkpoint(params), dump_checkpoint(params.copy()))

    def test_corruption(self):
        data = bytearray(dump_checkpoint(ModelParams.initialize(TINY, np.random.default_rng(9))))
        data[40] ^= 0xFF
        with self.assertRaises(CheckpointError, msg="A flipped byte must break the checksum."):
            parse_checkpoint(bytes(data))
        with self.assertRaises(CheckpointError):
            parse_checkpoint(b'XXXX' + bytes(data[4:]))
        with self.assertRaises(CheckpointError):
            parse_checkpoint(bytes(data[:6]))

if __name__ == '__main__':
    unittest.main()
