import unittest

import numpy as np
import numpy.testing as npt
from sklearn.preprocessing import MinMaxScaler

from core.errors import DegenerateRange, EmptyInput
from core.scaling import ScalerParams, fit, inverse_transform, transform


class TestFit(unittest.TestCase):
    def test_min_max(self):
        params = fit([2, 4, 10])
        self.assertEqual((params.x_min, params.x_max), (2.0, 10.0))

    def test_degenerate(self):
        with self.assertRaises(DegenerateRange):
            fit([5, 5, 5])

    def test_empty(self):
        with self.assertRaises(EmptyInput):
            fit([])

    def test_params_reject_inverted_range(self):
        with self.assertRaises(DegenerateRange):
            ScalerParams(x_min=3.0, x_max=1.0)


class TestTransform(unittest.TestCase):
    params = ScalerParams(x_min=2.0, x_max=10.0)

    def test_boundaries(self):
        npt.assert_array_equal(transform(self.params, [2, 10]), [0.0, 1.0])

    def test_interior(self):
        self.assertEqual(transform(self.params, [4])[0], 0.25)

    def test_extrapolates(self):
        self.assertEqual(transform(self.params, [12])[0], 1.25)

    def test_inverse(self):
        npt.assert_array_equal(inverse_transform(self.params, [0.25, 0.0]), [4.0, 2.0])

    def test_monotone_and_argmax(self):
        rng = np.random.default_rng(0)
        values = rng.normal(size=100)
        params = fit(values)
        scaled = transform(params, values)
        order = np.argsort(values)
        self.assertTrue(np.all(np.diff(scaled[order]) >= 0))
        self.assertEqual(np.argmax(scaled), np.argmax(values))
        self.assertEqual(np.argmin(scaled), np.argmin(values))
        self.assertTrue(np.all((scaled >= 0.0) & (scaled <= 1.0)))

    def test_fitted_boundaries_are_exact(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            values = rng.uniform(-1e6, 1e6, size=20)
            scaled = transform(fit(values), values)
            self.assertEqual(scaled.min(), 0.0)
            self.assertEqual(scaled.max(), 1.0)

    def test_round_trip(self):
        rng = np.random.default_rng(2)
        for _ in range(1000):
            values = rng.uniform(-1e5, 1e5, size=int(rng.integers(2, 50)))
            params = fit(values)
            # an out-of-range tail as well, as forecasts produce
            extended = np.concatenate([values, values * 1.5])
            back = inverse_transform(params, transform(params, extended))
            npt.assert_allclose(back, extended, rtol=1e-12, atol=1e-12 * params.span)

    def test_matches_minmax_scaler(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            train = rng.uniform(-1e5, 1e5, size=int(rng.integers(2, 40)))
            later = rng.uniform(-2e5, 2e5, size=10)
            reference = MinMaxScaler(feature_range=(0, 1), clip=False).fit(train.reshape(-1, 1))
            params = fit(train)
            self.assertEqual((params.x_min, params.x_max), (reference.data_min_[0], reference.data_max_[0]))
            npt.assert_allclose(
                transform(params, later),
                reference.transform(later.reshape(-1, 1)).ravel(),
                rtol=1e-12,
                atol=1e-12 * np.abs(later).max() / params.span,
            )
            scaled = rng.uniform(-0.5, 1.5, size=10)
            npt.assert_allclose(
                inverse_transform(params, scaled),
                reference.inverse_transform(scaled.reshape(-1, 1)).ravel(),
                rtol=1e-12,
                atol=1e-12 * (abs(params.x_min) + abs(params.x_max)),
            )


if __name__ == "__main__":
    unittest.main()
