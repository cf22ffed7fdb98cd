"""Reconstruction of a function from its boundary traces, and the inverse.

A function with mixed smoothness of order ``delta`` is the sum, over all
derivative orders ``alpha <= delta``, of a tensor-product operator applied
to the trace of D^alpha on a lower boundary face.  Per axis the operator is
the identity (order 0 of 0), multiplication by the kernel z^k/k! (below top
order), or a Volterra integral with kernel z^(k-1)/(k-1)! (at top order),
which for polynomial inputs reduces to repeated exact antidifferentiation.

Trace functions are carried as PiecewisePoly values on the full domain,
constant along their face-inactive axes (the constant extension the tensor
operators act on).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .core import (
    HyperRect,
    MultiIndex,
    TraceFunction,
    active_axes,
    as_multiindex,
    face_spec,
    multiindex_range,
)
from .piecewise import PiecewisePoly, _powers


@dataclass(frozen=True)
class AxisOperator:
    """Single-axis factor of the reconstruction operator.

    ``order`` is the derivative order alpha_i of the trace being lifted and
    ``top`` the smoothness order delta_i of the expansion along this axis.
    """

    axis: int
    order: int
    top: int

    def __post_init__(self):
        if not 0 <= self.order <= self.top:
            raise ValueError(f"need 0 <= order <= top, got {self.order}, {self.top}")

    @property
    def mode(self) -> str:
        if self.order < self.top:
            return "multiplier"
        return "volterra" if self.top > 0 else "identity"

    def __call__(self, f: PiecewisePoly) -> PiecewisePoly:
        mode = self.mode
        if mode == "identity":
            return f
        if mode == "multiplier":
            return PiecewisePoly.kernel(f.domain, self.axis, self.order) * f
        out = f
        for _ in range(self.order):  # Cauchy repeated integration
            out = out.antiderivative(self.axis)
        return out


def tensor_operator(alpha, delta) -> tuple[AxisOperator, ...]:
    alpha = as_multiindex(alpha)
    delta = as_multiindex(delta, ndim=len(alpha))
    return tuple(AxisOperator(i, a, d) for i, (a, d) in enumerate(zip(alpha, delta)))


def apply_tensor(alpha, delta, f: PiecewisePoly) -> PiecewisePoly:
    """Apply the full tensor-product operator for one lattice index."""
    out = f
    for op in tensor_operator(alpha, delta):
        out = op(out)
    return out


@dataclass(frozen=True, eq=False)
class PolyTraceBundle:
    """The complete family of boundary traces of an order-`order` expansion.

    One PiecewisePoly per lattice index alpha <= order, each constant along
    its face-inactive axes.
    """

    order: MultiIndex
    entries: Mapping[MultiIndex, PiecewisePoly]

    def __post_init__(self):
        order = as_multiindex(self.order)
        object.__setattr__(self, "order", order)
        lattice = multiindex_range(order)
        entries = dict(self.entries)
        if set(entries) != set(lattice):
            raise ValueError("bundle entries do not cover the lattice 0 <= alpha <= order")
        domain = entries[lattice[0]].domain
        for alpha in lattice:
            e = entries[alpha]
            if e.domain != domain:
                raise ValueError("bundle entries live on different domains")
            face = face_spec(alpha, order)
            for i, b in enumerate(face):
                if b < 0 and (e.breaks[i].size or e.degree[i] > 0):
                    raise ValueError(
                        f"entry {alpha} varies along inactive axis {i} of face {face}"
                    )
        object.__setattr__(self, "entries", entries)

    @property
    def domain(self) -> HyperRect:
        return self.entries[multiindex_range(self.order)[0]].domain

    def norm(self) -> float:
        """Root-sum-of-squares of the exact face L2 norms of all traces."""
        total = 0.0
        for alpha in multiindex_range(self.order):
            face = face_spec(alpha, self.order)
            e = self.entries[alpha]
            total += (e * e).integral(axes=active_axes(face))
        return math.sqrt(total)

    def scaled(self, factor: float) -> "PolyTraceBundle":
        return PolyTraceBundle(
            self.order, {a: float(factor) * e for a, e in self.entries.items()}
        )

    def __add__(self, other: "PolyTraceBundle") -> "PolyTraceBundle":
        if self.order != other.order:
            raise ValueError("bundle orders differ")
        return PolyTraceBundle(
            self.order, {a: e + other.entries[a] for a, e in self.entries.items()}
        )

    def allclose(self, other: "PolyTraceBundle", tol: float = 1e-10) -> bool:
        if self.order != other.order:
            return False
        return all(
            self.entries[a].allclose(other.entries[a], tol)
            for a in multiindex_range(self.order)
        )


def bundle_from(order, mapping, domain: HyperRect) -> PolyTraceBundle:
    """Wrap a mapping whose values may be scalars or PiecewisePoly traces."""
    entries = {}
    for alpha, value in mapping.items():
        alpha = as_multiindex(alpha)
        if isinstance(value, PiecewisePoly):
            entries[alpha] = value
        else:
            entries[alpha] = PiecewisePoly.constant(domain, float(value))
    return PolyTraceBundle(as_multiindex(order), entries)


def reconstruct(bundle: PolyTraceBundle) -> PiecewisePoly:
    """Sum of the lifted traces; the inverse of extract_traces_poly."""
    total = None
    for alpha in multiindex_range(bundle.order):
        term = apply_tensor(alpha, bundle.order, bundle.entries[alpha])
        total = term if total is None else total + term
    return total


def check_membership(u: PiecewisePoly, delta, tol: float = 1e-10):
    """Verify the cross-break smoothness that order-`delta` membership needs.

    Along each axis i, the derivatives of order k < delta_i must be
    continuous across every axis-i breakpoint (as functions of the other
    variables).  Raises with the offending order and breakpoint otherwise.
    """
    delta = as_multiindex(delta, ndim=u.ndim)
    for axis, d in enumerate(delta):
        if d == 0 or u.breaks[axis].size == 0:
            continue
        for k in range(d):
            g = u.derivative(axis, k)
            arr = np.moveaxis(g.coeffs, (axis, g.ndim + axis), (0, 1))
            widths = np.diff(g.edges(axis))
            left = np.einsum("ck,ck...->c...", _powers(widths, g.degree[axis]), arr)[:-1]
            right = arr[1:, 0, ...]
            scale = max(float(np.max(np.abs(g.coeffs))), 1.0)
            err = np.abs(left - right).reshape(left.shape[0], -1).max(axis=1)
            if np.any(err > tol * scale):
                j = int(np.argmax(err))
                raise ValueError(
                    f"order-{k} derivative along axis {axis} jumps by {err[j]:.3e} "
                    f"across break s_{axis} = {g.breaks[axis][j]!r}; "
                    f"input is not smooth enough for order {delta}"
                )


def extract_traces_poly(u: PiecewisePoly, delta, tol: float = 1e-10) -> PolyTraceBundle:
    """All boundary traces of an admissible piecewise polynomial."""
    delta = as_multiindex(delta, ndim=u.ndim)
    check_membership(u, delta, tol)
    entries = {
        alpha: u.mixed_derivative(alpha).restrict(face_spec(alpha, delta))
        for alpha in multiindex_range(delta)
    }
    return PolyTraceBundle(delta, entries)


def fund_int_pair(k: int, top: int, v: PiecewisePoly, axis: int = 0):
    """Both sides of the one-axis integration identity used in the induction:
    the antiderivative of the (k, top) lift equals the (k+1, top+1) lift."""
    if not 0 <= k <= top:
        raise ValueError(f"need 0 <= k <= top, got {k}, {top}")
    lhs = AxisOperator(axis, k, top)(v).antiderivative(axis)
    rhs = AxisOperator(axis, k + 1, top + 1)(v)
    return lhs, rhs


def term_at_point(alpha, delta, trace: TraceFunction, point, domain: HyperRect,
                  rule=None) -> float:
    """Numeric value at one point of a single lifted-trace summand.

    Volterra factors are integrated by quadrature over the sub-box
    prod [lo_i, s_i]; multiplier factors contribute scalar kernel values.
    Intended for inspection tables, not for bulk evaluation.
    """
    from . import quadrature  # runtime import keeps module deps one-way

    alpha = as_multiindex(alpha)
    delta = as_multiindex(delta, ndim=len(alpha))
    point = tuple(float(p) for p in point)
    if not domain.contains(point):
        raise ValueError(f"point {point} outside domain")
    rule = rule or quadrature.QuadratureRule()

    factor = 1.0
    volterra, identity = [], []
    for i, (a, d) in enumerate(zip(alpha, delta)):
        if a < d:
            z = point[i] - domain.lo[i]
            factor *= z**a / math.factorial(a)
        elif d > 0:
            volterra.append(i)
        else:
            identity.append(i)

    active = sorted(volterra + identity)
    if not volterra:
        if trace.is_scalar:
            return factor * float(trace.values)
        coords = [point[i] for i in active]
        return factor * float(np.squeeze(trace(*[np.array([c]) for c in coords])))

    axes, weights, kernels = [], [], []
    for i in volterra:
        if point[i] <= domain.lo[i]:
            return 0.0
        x, w = quadrature.axis_quadrature(
            domain.lo[i], point[i], quadrature._axis_splits(rule, i),
            quadrature._axis_grading(rule, i), rule.nodes, rule.panels,
        )
        axes.append(x)
        weights.append(w)
        k = delta[i] - 1
        kernels.append((point[i] - x) ** k / math.factorial(k))

    grids = np.meshgrid(*axes, indexing="ij", sparse=True)
    args = []
    g_iter = iter(grids)
    for i in active:
        args.append(next(g_iter) if i in volterra else point[i])
    values = np.asarray(trace(*args), float)
    shape = tuple(len(x) for x in axes)
    total = np.broadcast_to(values, shape)
    for i in range(len(axes)):
        shape_i = [1] * len(axes)
        shape_i[i] = -1
        total = total * (weights[i] * kernels[i]).reshape(shape_i)
    return factor * float(total.sum())
