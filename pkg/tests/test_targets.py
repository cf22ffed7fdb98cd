import numpy as np
import pytest

from sobrecon.analytic import (
    available_examples,
    finite_difference_error,
    get_example,
)
from sobrecon.core import multiindex_range
from sobrecon.targets import example1, example2, v_derivative


class TestExample1:
    def test_value_at_origin(self):
        u = example1()
        assert u(0.0) == pytest.approx(-413 / 1140, rel=1e-15)

    def test_fifth_derivative_formula(self):
        u = example1()
        for s in (0.5, -0.25, 0.9):
            assert u.eval_derivative((5,), (s,)) == \
                pytest.approx(1.0 / (2.0 * abs(s) ** 0.25), rel=1e-13)

    def test_sixth_derivative_not_available(self):
        u = example1()
        assert u.delta == (5,)
        with pytest.raises(ValueError, match="not guaranteed"):
            u.eval_derivative((6,), (0.5,))

    def test_rejects_point_outside(self):
        u = example1()
        with pytest.raises(ValueError, match="outside"):
            u.eval_derivative((0,), (1.5,))

    def test_finite_difference_consistency(self):
        u = example1()
        pts = [(s,) for s in (-0.8, -0.55, 0.35, 0.6, 0.9)]
        for k in range(4):
            assert finite_difference_error(u, (k,), 0, pts) < 1e-5

    def test_zero_order_is_function(self):
        u = example1()
        xs = np.linspace(-1, 1, 7)
        assert np.allclose(u(xs), u.derivatives[(0,)](xs))


class TestExample2:
    def test_branch_continuity_at_half(self):
        for k in range(3):  # v, v', v'' continuous at +-1/2
            for x in (-0.5, 0.5):
                left = v_derivative(k, x - 1e-13)
                right = v_derivative(k, x + 1e-13)
                assert abs(left - right) < 1e-12

    def test_third_derivative_step(self):
        assert v_derivative(3, 0.75) == pytest.approx(1.0)
        assert v_derivative(3, -0.75) == pytest.approx(1.0)
        assert v_derivative(3, 0.0) == pytest.approx(-1.0)
        assert v_derivative(3, 0.5) == pytest.approx(-1.0)  # boundary -> middle branch

    def test_endpoint_values(self):
        # left branch at -1 and right branch at +1 (frozen by hand substitution)
        assert v_derivative(0, -1.0) == pytest.approx(-2 / 3, rel=1e-14)
        assert v_derivative(0, 1.0) == pytest.approx(1 / 4, rel=1e-14)
        assert v_derivative(0, 0.0) == pytest.approx(-5 / 24, rel=1e-14)

    def test_tensor_structure(self):
        w = example2()
        x, y = 0.3, -0.7
        for alpha in multiindex_range((3, 3)):
            got = w.eval_derivative(alpha, (x, y))
            expected = v_derivative(alpha[0], x) * v_derivative(alpha[1], y)
            assert got == pytest.approx(expected, rel=1e-14)

    def test_finite_difference_consistency(self):
        w = example2()
        pts = [(-0.8, 0.3), (0.2, 0.2), (0.7, -0.9)]
        for alpha in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 2)]:
            for axis in range(2):
                up = list(alpha)
                up[axis] += 1
                if tuple(up) in w.derivatives or (up[0] <= 3 and up[1] <= 3):
                    assert finite_difference_error(w, alpha, axis, pts) < 1e-5


class TestTraces:
    def test_trace_layout_for_monomial(self):
        # x^2 y on [0,1]^2 has the six-entry trace table (0,0,0,0,0,2)
        from sobrecon.analytic import AnalyticFunction
        from sobrecon.core import HyperRect

        derivs = {
            (0, 0): lambda x, y: x**2 * y,
            (1, 0): lambda x, y: 2 * x * y,
            (2, 0): lambda x, y: 2 * y + 0 * x,
            (0, 1): lambda x, y: x**2 + 0 * y,
            (1, 1): lambda x, y: 2 * x + 0 * y,
            (2, 1): lambda x, y: 2.0 + 0 * x + 0 * y,
        }
        u = AnalyticFunction(HyperRect((0, 0), (1, 1)), (2, 1), derivs)
        bundle = u.extract_traces()
        assert bundle.entries[(0, 0)].values == pytest.approx(0.0)
        assert bundle.entries[(1, 0)].values == pytest.approx(0.0)
        t20 = bundle.entries[(2, 0)]
        assert t20.face == (0, -1)
        assert float(t20(np.array([0.7]))[0]) == pytest.approx(0.0)
        t21 = bundle.entries[(2, 1)]
        assert t21.face == (0, 0)
        assert float(np.asarray(t21(0.3, 0.9))) == pytest.approx(2.0)

    def test_order_zero_bundle_is_function(self):
        u = example1()
        bundle = u.extract_traces((0,))
        assert set(bundle.entries) == {(0,)}
        t = bundle.entries[(0,)]
        assert float(t(np.array([0.5]))[0]) == pytest.approx(u(0.5))

    def test_top_trace_is_full_derivative(self):
        w = example2()
        t = w.extract_traces().entries[(3, 3)]
        assert t.face == (0, 0)
        assert float(np.asarray(t(0.3, 0.1))) == pytest.approx(
            w.eval_derivative((3, 3), (0.3, 0.1)))

    def test_derivative_table_validation(self):
        from sobrecon.analytic import AnalyticFunction
        from sobrecon.core import HyperRect

        with pytest.raises(ValueError, match="cover exactly"):
            AnalyticFunction(HyperRect.cube(1), (1,), {(0,): lambda x: x})


def test_registry():
    names = available_examples()
    assert {"example1-1d", "example2-2d", "poly-random"} <= set(names)
    u = get_example("poly-random", seed=3, ndim=2, delta=(1, 2))
    assert u.delta == (1, 2)
    with pytest.raises(KeyError):
        get_example("missing-example")
