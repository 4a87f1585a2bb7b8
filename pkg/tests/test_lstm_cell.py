import math
import unittest

import numpy as np
import numpy.testing as npt

from core.errors import DimensionMismatch, EmptyWindow
from core.lstm_cell import (
    PARAM_NAMES,
    CellState,
    LstmParams,
    batch_forward,
    cell_forward,
    init_params,
    sequence_forward,
    sigmoid,
    tanh_act,
)


def zero_params(hidden_size, input_size=1):
    concat = hidden_size + input_size
    return LstmParams(
        **{name: np.zeros((hidden_size, concat)) for name in ("W_f", "W_i", "W_c", "W_o")},
        **{name: np.zeros(hidden_size) for name in ("b_f", "b_i", "b_c", "b_o", "W_y")},
        b_y=np.array(0.0),
    )


def random_params(rng, hidden_size, input_size=1, scale=0.8):
    params = zero_params(hidden_size, input_size)
    for name in PARAM_NAMES:
        tensor = getattr(params, name)
        setattr(params, name, rng.uniform(-scale, scale, size=tensor.shape))
    return params


# --- Scalar reference, one entry at a time ---
def _scalar_sigmoid(a):
    return 1.0 / (1.0 + math.exp(-a))


def scalar_cell(params, x, h_prev, c_prev):
    hidden = params.hidden_size
    hx = list(h_prev) + list(x)

    def affine(W, b, j):
        total = b[j]
        for k in range(len(hx)):
            total += W[j][k] * hx[k]
        return total

    h, c = [], []
    for j in range(hidden):
        z_f = _scalar_sigmoid(affine(params.W_f, params.b_f, j))
        z_i = _scalar_sigmoid(affine(params.W_i, params.b_i, j))
        z = math.tanh(affine(params.W_c, params.b_c, j))
        c_j = z_f * c_prev[j] + z_i * z
        z_o = _scalar_sigmoid(affine(params.W_o, params.b_o, j))
        c.append(c_j)
        h.append(z_o * math.tanh(c_j))
    return h, c


def scalar_sequence(params, window):
    h = [0.0] * params.hidden_size
    c = [0.0] * params.hidden_size
    for value in window:
        h, c = scalar_cell(params, [value], h, c)
    total = float(params.b_y)
    for j in range(params.hidden_size):
        total += params.W_y[j] * h[j]
    return total


class TestActivations(unittest.TestCase):
    def test_centre(self):
        self.assertEqual(sigmoid(0.0), 0.5)
        self.assertEqual(tanh_act(0.0), 0.0)

    def test_symmetry(self):
        xs = np.linspace(-40, 40, 161)
        npt.assert_allclose(sigmoid(xs) + sigmoid(-xs), 1.0, rtol=0, atol=1e-15)

    def test_no_overflow(self):
        with np.errstate(over="raise"):
            self.assertEqual(sigmoid(500.0), 1.0)
            self.assertEqual(sigmoid(-1000.0), 0.0)
            npt.assert_array_equal(sigmoid(np.array([-800.0, 800.0])), [0.0, 1.0])

    def test_matches_direct_formula_in_range(self):
        xs = np.linspace(-30, 30, 121)
        npt.assert_allclose(sigmoid(xs), 1.0 / (1.0 + np.exp(-xs)), rtol=1e-14)


class TestCellForward(unittest.TestCase):
    def test_zero_params(self):
        params = zero_params(4)
        state, cache = cell_forward(params, np.array([3.7]), CellState.zeros(4))
        npt.assert_array_equal(cache.z_f, 0.5)
        npt.assert_array_equal(cache.z_i, 0.5)
        npt.assert_array_equal(cache.z_o, 0.5)
        npt.assert_array_equal(cache.z, 0.0)
        npt.assert_array_equal(state.c, 0.0)
        npt.assert_array_equal(state.h, 0.0)

    def test_carried_cell_state(self):
        params = zero_params(1)
        state, _ = cell_forward(params, np.array([0.0]), CellState(h=np.zeros(1), c=np.ones(1)))
        self.assertEqual(state.c[0], 0.5)
        self.assertAlmostEqual(state.h[0], 0.2310585786, delta=1e-10)

    def test_scalar_oracle(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            hidden = int(rng.integers(1, 6))
            params = random_params(rng, hidden)
            x = rng.normal(size=1)
            h_prev = rng.normal(size=hidden)
            c_prev = rng.normal(size=hidden)
            state, _ = cell_forward(params, x, CellState(h=h_prev, c=c_prev))
            h_ref, c_ref = scalar_cell(params, x, h_prev, c_prev)
            npt.assert_allclose(state.h, h_ref, rtol=0, atol=1e-12)
            npt.assert_allclose(state.c, c_ref, rtol=0, atol=1e-12)

    def test_gate_ranges(self):
        rng = np.random.default_rng(1)
        params = random_params(rng, 5, scale=3.0)
        state = CellState(h=rng.normal(size=5), c=rng.normal(size=5) * 4)
        _, cache = cell_forward(params, rng.normal(size=1), state)
        for gate in (cache.z_f, cache.z_i, cache.z_o):
            self.assertTrue(np.all((gate >= 0.0) & (gate <= 1.0)))
        self.assertTrue(np.all(np.abs(cache.z) <= 1.0))
        self.assertTrue(np.all(np.abs(cache.h) <= 1.0))

    def test_saturated_forget_gate_keeps_cell(self):
        params = zero_params(3)
        params.b_f = np.full(3, 50.0)
        params.b_i = np.full(3, -50.0)
        c_prev = np.array([0.3, -1.2, 2.0])
        state, _ = cell_forward(params, np.array([1.0]), CellState(h=np.zeros(3), c=c_prev))
        npt.assert_allclose(state.c, c_prev, atol=1e-12)

    def test_batch_matches_single(self):
        rng = np.random.default_rng(2)
        params = random_params(rng, 3)
        xs = rng.normal(size=(4, 1))
        hs = rng.normal(size=(4, 3))
        cs = rng.normal(size=(4, 3))
        batched, _ = cell_forward(params, xs, CellState(h=hs, c=cs))
        for row in range(4):
            single, _ = cell_forward(params, xs[row], CellState(h=hs[row], c=cs[row]))
            npt.assert_allclose(batched.h[row], single.h, rtol=0, atol=1e-13)

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            cell_forward(zero_params(3), np.array([1.0, 2.0]), CellState.zeros(3))
        with self.assertRaises(DimensionMismatch):
            cell_forward(zero_params(3), np.array([1.0]), CellState.zeros(2))


class TestSequenceForward(unittest.TestCase):
    def test_zero_params(self):
        prediction, caches = sequence_forward(zero_params(6), [0.4, 0.9, 0.1])
        self.assertEqual(prediction, 0.0)
        self.assertEqual(len(caches), 3)

    def test_single_step_is_head_of_one_cell(self):
        params = random_params(np.random.default_rng(3), 4)
        prediction, _ = sequence_forward(params, [0.7])
        state, _ = cell_forward(params, np.array([0.7]), CellState.zeros(4))
        self.assertEqual(prediction, float(state.h @ params.W_y + params.b_y))

    def test_fixed_window_scalar_oracle(self):
        params = init_params(5, 1, seed=11)
        prediction, _ = sequence_forward(params, [0.1, 0.2, 0.3])
        self.assertAlmostEqual(prediction, scalar_sequence(params, [0.1, 0.2, 0.3]), delta=1e-12)

    def test_random_windows_scalar_oracle(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            hidden = int(rng.integers(1, 6))
            params = random_params(rng, hidden)
            window = rng.uniform(0, 1, size=int(rng.integers(1, 12)))
            prediction, _ = sequence_forward(params, window)
            self.assertAlmostEqual(prediction, scalar_sequence(params, window), delta=1e-12)

    def test_batch_forward_matches_sequence(self):
        rng = np.random.default_rng(5)
        params = random_params(rng, 4)
        inputs = rng.uniform(size=(6, 8))
        predictions, caches = batch_forward(params, inputs)
        self.assertEqual(len(caches), 8)
        for row in range(6):
            single, _ = sequence_forward(params, inputs[row])
            self.assertAlmostEqual(predictions[row], single, delta=1e-12)

    def test_deterministic(self):
        params = init_params(8, 1, seed=0)
        window = np.linspace(0, 1, 30)
        self.assertEqual(sequence_forward(params, window)[0], sequence_forward(params, window)[0])

    def test_empty_window(self):
        with self.assertRaises(EmptyWindow):
            sequence_forward(zero_params(2), [])


class TestInitParams(unittest.TestCase):
    def test_shapes(self):
        params = init_params(8, 1, seed=0)
        self.assertEqual(params.W_f.shape, (8, 9))
        self.assertEqual(params.b_o.shape, (8,))
        self.assertEqual(params.W_y.shape, (8,))
        self.assertEqual(params.b_y.shape, ())
        self.assertEqual((params.hidden_size, params.input_size), (8, 1))
        params.validate()

    def test_same_seed_identical(self):
        first, second = init_params(6, 1, seed=5), init_params(6, 1, seed=5)
        for name in PARAM_NAMES:
            npt.assert_array_equal(getattr(first, name), getattr(second, name))

    def test_different_seed_differs(self):
        self.assertFalse(np.array_equal(init_params(6, 1, seed=1).W_f, init_params(6, 1, seed=2).W_f))

    def test_ranges_and_biases(self):
        params = init_params(16, 1, seed=0)
        bound = 1.0 / math.sqrt(16)
        for name in ("W_f", "W_i", "W_c", "W_o", "W_y"):
            self.assertTrue(np.all(np.abs(getattr(params, name)) <= bound))
        npt.assert_array_equal(params.b_f, 1.0)
        for name in ("b_i", "b_c", "b_o", "b_y"):
            npt.assert_array_equal(getattr(params, name), 0.0)

    def test_validate_rejects_bad_shape(self):
        params = init_params(4, 1, seed=0)
        params.W_o = np.zeros((4, 4))
        with self.assertRaises(DimensionMismatch):
            params.validate()

    def test_validate_rejects_nan(self):
        params = init_params(4, 1, seed=0)
        params.b_c = np.array([0.0, np.nan, 0.0, 0.0])
        with self.assertRaises(DimensionMismatch):
            params.validate()


if __name__ == "__main__":
    unittest.main()
