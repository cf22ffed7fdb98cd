import numpy as np
import pytest

from sobrecon.core import HyperRect, multiindex_range
from sobrecon.expansion import (
    AxisOperator,
    PolyTraceBundle,
    bundle_from,
    check_membership,
    extract_traces_poly,
    fund_int_pair,
    reconstruct,
    term_at_point,
)
from sobrecon.piecewise import PiecewisePoly, coeff_distance
from sobrecon.verify import random_domain, random_tensor_poly, random_trace_bundle


def abs_poly():
    return PiecewisePoly(
        HyperRect.cube(1), (np.array([0.0]),),
        np.array([[1.0, -1.0], [0.0, 1.0]]),
    )


class TestAxisOperator:
    def test_modes(self):
        assert AxisOperator(0, 1, 2).mode == "multiplier"
        assert AxisOperator(0, 2, 2).mode == "volterra"
        assert AxisOperator(0, 0, 0).mode == "identity"
        with pytest.raises(ValueError):
            AxisOperator(0, 3, 2)

    def test_volterra_on_constant(self):
        dom = HyperRect((0.0,), (1.0,))
        one = PiecewisePoly.constant(dom, 1.0)
        out = AxisOperator(0, 2, 2)(one)
        assert out.allclose(PiecewisePoly.kernel(dom, 0, 2), 1e-14)  # s^2/2

    def test_multiplier_on_constant(self):
        dom = HyperRect((0.5,), (2.0,))
        c = PiecewisePoly.constant(dom, 3.0)
        out = AxisOperator(0, 1, 2)(c)
        for s in (0.5, 1.0, 2.0):
            assert out(s) == pytest.approx(3.0 * (s - 0.5))

    def test_identity(self):
        f = abs_poly()
        assert AxisOperator(0, 0, 0)(f) is f


class TestReconstruct:
    def test_monomial_from_top_trace(self):
        # delta=(2,1) on [0,1]^2, only trace D^(2,1) = 2: reconstructs x^2 y
        dom = HyperRect((0.0, 0.0), (1.0, 1.0))
        mapping = {a: 0.0 for a in multiindex_range((2, 1))}
        mapping[(2, 1)] = 2.0
        u = reconstruct(bundle_from((2, 1), mapping, dom))
        target = 2.0 * PiecewisePoly.kernel(dom, 0, 2) * PiecewisePoly.kernel(dom, 1, 1)
        assert u.allclose(target, 1e-13)

    def test_order_zero_is_identity(self):
        dom = HyperRect.cube(2)
        rng = np.random.default_rng(1)
        v = random_tensor_poly(rng, dom, (2, 2))
        out = reconstruct(PolyTraceBundle((0, 0), {(0, 0): v}))
        assert out.allclose(v, 1e-15)

    def test_incomplete_bundle_rejected(self):
        dom = HyperRect.cube(1)
        with pytest.raises(ValueError):
            PolyTraceBundle((1,), {(0,): PiecewisePoly.constant(dom, 1.0)})

    def test_trace_varying_on_inactive_axis_rejected(self):
        dom = HyperRect.cube(2)
        bad = PiecewisePoly.kernel(dom, 0, 1)  # varies along axis 0
        good = PiecewisePoly.constant(dom, 0.0)
        entries = {a: good for a in multiindex_range((1, 0))}
        entries[(0, 0)] = bad  # face (-1, 0): axis 0 inactive
        with pytest.raises(ValueError):
            PolyTraceBundle((1, 0), entries)


class TestExtract:
    def test_monomial_traces(self):
        dom = HyperRect((0.0, 0.0), (1.0, 1.0))
        u = 2.0 * PiecewisePoly.kernel(dom, 0, 2) * PiecewisePoly.kernel(dom, 1, 1)
        bundle = extract_traces_poly(u, (2, 1))
        for alpha in multiindex_range((2, 1)):
            e = bundle.entries[alpha]
            expected = 2.0 if alpha == (2, 1) else 0.0
            assert np.allclose(e.coeffs.reshape(-1), [expected] if e.coeffs.size == 1
                               else np.full(e.coeffs.size, expected))

    def test_abs_value_traces(self):
        bundle = extract_traces_poly(abs_poly(), (1,))
        v0 = bundle.entries[(0,)]
        assert float(np.squeeze(v0.coeffs)) == pytest.approx(1.0)
        v1 = bundle.entries[(1,)]
        assert v1(-0.5) == pytest.approx(-1.0)
        assert v1(0.5) == pytest.approx(1.0)

    def test_smoothness_admission(self):
        u = abs_poly()
        with pytest.raises(ValueError, match="order-1 derivative along axis 0"):
            extract_traces_poly(u, (2,))
        check_membership(u, (1,))  # |x| is fine at order 1


class TestRoundtrips:
    @pytest.mark.parametrize("ndim,delta", [(1, (2,)), (2, (2, 1)), (3, (1, 2, 1))])
    def test_forward(self, ndim, delta):
        rng = np.random.default_rng(101 + ndim)
        for _ in range(10):
            dom = random_domain(rng, ndim)
            u = random_tensor_poly(rng, dom, tuple(d + 2 for d in delta))
            again = reconstruct(extract_traces_poly(u, delta))
            assert coeff_distance(u, again) <= 1e-10

    @pytest.mark.parametrize("ndim,delta", [(1, (3,)), (2, (2, 2))])
    def test_inverse(self, ndim, delta):
        rng = np.random.default_rng(7 + ndim)
        for _ in range(10):
            dom = random_domain(rng, ndim)
            b = random_trace_bundle(rng, delta, dom)
            back = extract_traces_poly(reconstruct(b), delta)
            assert b.allclose(back, 1e-10)


class TestFundInt:
    def test_multiplier_case(self):
        dom = HyperRect((0.0,), (1.0,))
        one = PiecewisePoly.constant(dom, 1.0)
        lhs, rhs = fund_int_pair(0, 1, one)
        assert lhs.allclose(rhs, 1e-14)
        assert lhs(0.7) == pytest.approx(0.7)  # both sides are s

    def test_volterra_case(self):
        dom = HyperRect((0.0,), (1.0,))
        one = PiecewisePoly.constant(dom, 1.0)
        lhs, rhs = fund_int_pair(1, 1, one)
        assert lhs.allclose(rhs, 1e-14)
        assert lhs(0.8) == pytest.approx(0.32)  # s^2/2

    def test_p1_input(self):
        dom = HyperRect((0.0,), (1.0,))
        p1 = PiecewisePoly.kernel(dom, 0, 1)
        lhs, rhs = fund_int_pair(1, 1, p1)
        assert lhs.allclose(rhs, 1e-14)
        assert lhs(1.0) == pytest.approx(1 / 6)  # s^3/6


def test_term_table_sums_to_value():
    # u(x,y) = x^2 y at (1,1): only the top summand contributes, value 1
    dom = HyperRect((0.0, 0.0), (1.0, 1.0))
    u = 2.0 * PiecewisePoly.kernel(dom, 0, 2) * PiecewisePoly.kernel(dom, 1, 1)
    delta = (2, 1)
    total = 0.0
    for alpha in multiindex_range(delta):
        trace = u.boundary_trace(alpha, delta)
        total += term_at_point(alpha, delta, trace, (1.0, 1.0), dom)
    assert total == pytest.approx(1.0, rel=1e-9)
