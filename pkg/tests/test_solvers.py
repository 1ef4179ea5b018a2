"""Scalar solver routines on problems with known answers."""

import math

import pytest

from spherefacets.solvers import BracketError, bisect_root, golden_max, newton_bracketed


class TestBisect:
    def test_sqrt_two(self):
        root = bisect_root(lambda x: x * x - 2.0, 0.0, 2.0, xtol=1e-12)
        assert root == pytest.approx(math.sqrt(2.0), abs=1e-11)

    def test_endpoint_root(self):
        assert bisect_root(lambda x: x, 0.0, 1.0) == 0.0

    def test_requires_sign_change(self):
        with pytest.raises(BracketError):
            bisect_root(lambda x: x * x + 1.0, -1.0, 1.0)


class TestNewtonBracketed:
    def test_cubic(self):
        f = lambda x: x**3 - 2.0 * x - 5.0
        df = lambda x: 3.0 * x**2 - 2.0
        root = newton_bracketed(f, df, 1.0, 3.0, xtol=1e-13)
        assert f(root) == pytest.approx(0.0, abs=1e-10)

    def test_survives_bad_derivative(self):
        # derivative lies; bisection fallback must still converge
        f = lambda x: math.tanh(x - 0.7)
        root = newton_bracketed(f, lambda x: 1e-30, 0.0, 2.0, xtol=1e-12)
        assert root == pytest.approx(0.7, abs=1e-10)

    def test_requires_sign_change(self):
        with pytest.raises(BracketError):
            newton_bracketed(lambda x: 1.0, lambda x: 0.0, 0.0, 1.0)


class TestGoldenMax:
    def test_parabola(self):
        x, fx = golden_max(lambda x: -(x - 0.3) ** 2, 0.0, 1.0, xtol=1e-14)
        assert x == pytest.approx(0.3, abs=1e-9)
        assert fx == pytest.approx(0.0, abs=1e-17)

    def test_monotone_function_picks_endpoint(self):
        x, _ = golden_max(lambda x: x, 0.0, 1.0, xtol=1e-12)
        assert x == pytest.approx(1.0, abs=1e-9)

    def test_tolerates_neg_inf(self):
        f = lambda x: -math.inf if x < 0.5 else -(x - 0.8) ** 2
        x, _ = golden_max(f, 0.0, 1.0, xtol=1e-12)
        assert x == pytest.approx(0.8, abs=1e-9)
