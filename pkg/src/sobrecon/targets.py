"""Built-in approximation targets used by the convergence experiments.

``example1``: a univariate quintic-smoothness function whose fifth
derivative has an inverse-fourth-root singularity at the origin (so the
sixth derivative is not square-integrable).

``example2``: the bivariate tensor square w(x, y) = v(x) v(y) of a C^2
piecewise cubic whose third derivative is a step function on cells of
width 1/2: mixed smoothness order (3, 3), with the top mixed derivative
piecewise constant on a 4 x 4 grid.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.polynomial import Polynomial

from .analytic import AnalyticFunction, register_example
from .core import HyperRect, as_multiindex, multiindex_range
from .piecewise import PiecewisePoly

# ----------------------------------------------------------------- example 1

_P1 = Polynomial([-413 / 1140, 29 / 90, -3 / 55, 17 / 210, 1 / 36])
_C1 = 512.0 / 65835.0
_E1 = 19.0 / 4.0


def _example1_derivative(k: int):
    poly = _P1 if k == 0 else _P1.deriv(k)
    factor = _C1 * math.prod(_E1 - j for j in range(k))
    exponent = _E1 - k
    signed = k % 2 == 0  # odd-symmetric tail: even-order derivatives keep sign(s)

    def ev(s, _poly=poly, _f=factor, _e=exponent, _signed=signed):
        s = np.asarray(s, float)
        mag = np.abs(s) ** _e
        tail = _f * (np.sign(s) * mag if _signed else mag)
        return _poly(s) + tail

    return ev


def example1() -> AnalyticFunction:
    """Quintic-smoothness target on [-1, 1]; fifth derivative 1/(2|s|^(1/4))."""
    return AnalyticFunction(
        domain=HyperRect.cube(1),
        delta=(5,),
        derivatives={(k,): _example1_derivative(k) for k in range(6)},
        breakpoints=((0.0,),),
        singular_points=((0.0,),),
        name="example1-1d",
    )


# ----------------------------------------------------------------- example 2

# The three cubic branches of v: left of -1/2, middle, right of +1/2.
# Chosen so v, v', v'' are continuous at +-1/2 while v''' jumps between
# +1 (outer branches) and -1 (middle branch).
_V_LEFT = Polynomial([-1 / 6, 5 / 6, 1 / 2, 1 / 6])
_V_MID = Polynomial([-5 / 24, 7 / 12, 0.0, -1 / 6])
_V_RIGHT = Polynomial([-1 / 4, 5 / 6, -1 / 2, 1 / 6])


def v_derivative(k: int, x):
    """k-th derivative of the piecewise cubic factor v (k <= 3)."""
    x = np.asarray(x, float)
    branches = []
    for b in (_V_LEFT, _V_MID, _V_RIGHT):
        branches.append((b if k == 0 else b.deriv(k))(x))
    left, mid, right = branches
    return np.where(x < -0.5, left, np.where(np.abs(x) <= 0.5, mid, right))


def example2() -> AnalyticFunction:
    """Tensor-square target w(x, y) = v(x) v(y) on [-1, 1]^2, order (3, 3)."""

    def make(k1, k2):
        def ev(x, y, _k1=k1, _k2=k2):
            return v_derivative(_k1, x) * v_derivative(_k2, y)

        return ev

    return AnalyticFunction(
        domain=HyperRect.cube(2),
        delta=(3, 3),
        derivatives={(k1, k2): make(k1, k2) for k1 in range(4) for k2 in range(4)},
        breakpoints=((-0.5, 0.5), (-0.5, 0.5)),
        singular_points=((), ()),
        name="example2-2d",
    )


# ------------------------------------------------------------- random target


def random_poly_function(seed: int = 0, ndim: int = 1, delta=(2,),
                         degree_margin: int = 2, domain: HyperRect | None = None
                         ) -> AnalyticFunction:
    """Random tensor polynomial wrapped as an analytic target (property tests)."""
    delta = as_multiindex(delta, ndim=ndim)
    domain = domain or HyperRect.cube(ndim)
    rng = np.random.default_rng(seed)
    degrees = tuple(d + degree_margin for d in delta)
    coeffs = rng.standard_normal((1,) * ndim + tuple(d + 1 for d in degrees))
    pw = PiecewisePoly(domain, (np.array([]),) * ndim, coeffs)
    derivatives = {a: pw.mixed_derivative(a) for a in multiindex_range(delta)}
    return AnalyticFunction(
        domain=domain,
        delta=delta,
        derivatives=derivatives,
        name=f"poly-random(seed={seed})",
    )


register_example("example1-1d", example1)
register_example("example2-2d", example2)
register_example("poly-random", random_poly_function)
