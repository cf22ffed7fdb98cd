"""L2 projections of boundary traces and the approximants built from them.

Two pipelines: coefficients in the orthonormal Legendre basis (spectral,
kept in coefficient form so degrees in the hundreds stay stable), and cell
averages on a uniform grid (the step-function basis, immune to the
oscillation that smooth bases develop at jumps).  Either projection is
applied trace-by-trace and the approximant of the original function is then
reassembled through the reconstruction operators; projecting at order zero
reduces to the plain L2 projection of the function itself.

Scalar traces (vertex values) pass through both projections unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import AnalyticFunction
from .core import (
    HyperRect,
    MultiIndex,
    TraceFunction,
    active_axes,
    as_multiindex,
    face_spec,
    leq,
    meet,
    multiindex_range,
)
from .expansion import PolyTraceBundle, reconstruct
from .legseries import LegendreSeries, legendre_values
from .piecewise import PiecewisePoly
from .quadrature import QuadratureRule, grid_quadrature, grid_values, rule_for

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def kappa(degree, face) -> MultiIndex:
    """Per-axis degree cap of a face projection: the requested degree on
    active axes, zero on pinned ones."""
    degree = as_multiindex(degree)
    if len(face) != len(degree):
        raise ValueError("face selector and degree have different lengths")
    return tuple(d if b == 0 else 0 for d, b in zip(degree, face))


def cell_edges(counts, ndim: int) -> tuple[tuple[float, ...], ...]:
    """Interior edges of the uniform cell grid on the standard hypercube."""
    counts = as_multiindex(counts, ndim=ndim)
    return tuple(tuple(np.linspace(-1.0, 1.0, k + 1)[1:-1]) for k in counts)


def _legendre_from_grid(f, degree: MultiIndex, axes, weights) -> LegendreSeries:
    values = grid_values(f, axes)
    ops, subs = [values], [_LETTERS[: len(axes)]]
    out = _LETTERS[len(axes): 2 * len(axes)]
    for i, (x, w) in enumerate(zip(axes, weights)):
        ops.append(legendre_values(degree[i], x) * w[None, :])
        subs.append(out[i] + _LETTERS[i])
    coeffs = np.einsum(",".join(subs) + "->" + out, *ops, optimize=True)
    return LegendreSeries(coeffs)


def _cell_averages_from_grid(f, counts: MultiIndex, axes, weights) -> np.ndarray:
    values = grid_values(f, axes)
    ops, subs = [values], [_LETTERS[: len(axes)]]
    out = _LETTERS[len(axes): 2 * len(axes)]
    for i, (x, w) in enumerate(zip(axes, weights)):
        k = counts[i]
        idx = np.clip(((x + 1.0) * 0.5 * k).astype(int), 0, k - 1)
        agg = np.zeros((k, x.size))
        agg[idx, np.arange(x.size)] = w
        ops.append(agg)
        subs.append(out[i] + _LETTERS[i])
    sums = np.einsum(",".join(subs) + "->" + out, *ops, optimize=True)
    volume = math.prod(2.0 / k for k in counts)
    return sums / volume


def project_legendre(f, degree, rule: QuadratureRule | None = None) -> LegendreSeries:
    """Orthonormal Legendre coefficients of f on the standard hypercube."""
    degree = as_multiindex(degree)
    rule = rule or QuadratureRule(nodes=max(16, max(degree) + 8), panels=8)
    axes, weights = grid_quadrature(HyperRect.cube(len(degree)), rule)
    return _legendre_from_grid(f, degree, axes, weights)


@dataclass(frozen=True, eq=False)
class CellGrid:
    """Per-cell averages on the uniform grid: the step-function projection."""

    counts: MultiIndex
    values: np.ndarray

    def __post_init__(self):
        counts = as_multiindex(self.counts)
        values = np.asarray(self.values, float)
        if values.shape != counts:
            raise ValueError(f"values shape {values.shape} != grid {counts}")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "values", values)

    @property
    def cell_volume(self) -> float:
        return math.prod(2.0 / k for k in self.counts)

    def to_piecewise(self, positions=None, ndim: int | None = None) -> PiecewisePoly:
        """Embed as a piecewise-constant polynomial on the hypercube; with
        `positions`, the grid varies on those axes and is constant elsewhere."""
        m = len(self.counts)
        ndim = m if ndim is None else ndim
        positions = tuple(range(m)) if positions is None else tuple(positions)
        shape = [1] * ndim
        for pos, k in zip(positions, self.counts):
            shape[pos] = k
        order = list(positions) + [i for i in range(ndim) if i not in positions]
        values = np.transpose(
            self.values.reshape(self.values.shape + (1,) * (ndim - m)),
            np.argsort(order),
        )
        breaks = [np.array([])] * ndim
        for pos, k in zip(positions, self.counts):
            breaks[pos] = np.linspace(-1.0, 1.0, k + 1)[1:-1]
        return PiecewisePoly.from_cell_values(
            HyperRect.cube(ndim), tuple(breaks), values.reshape(shape)
        )


def project_step(f, counts, rule: QuadratureRule | None = None) -> CellGrid:
    """Cell averages of f on the uniform grid: the L2-orthogonal projection
    onto the span of the cell indicators."""
    counts = as_multiindex(counts)
    m = len(counts)
    rule = rule_for(ndim=m, base=rule or QuadratureRule(nodes=16, panels=8),
                    extra_splits=cell_edges(counts, m))
    axes, weights = grid_quadrature(HyperRect.cube(m), rule)
    return CellGrid(counts, _cell_averages_from_grid(f, counts, axes, weights))


# --------------------------------------------------------- order-gamma drivers


def _face_quadrature(face, rule: QuadratureRule):
    from .quadrature import _face_axes

    return _face_axes(HyperRect.cube(len(face)), face, rule)


class LegendreReconstruction:
    """Approximant assembled from Legendre-projected boundary traces.

    Holds one projected trace per lattice index alpha <= gamma (a scalar on
    vertex faces, an active-axes Legendre series otherwise).  Derivatives of
    the approximant are reassembled from the stored traces through the
    reconstruction operators in coefficient space, so no high-degree
    monomial representation is ever formed; orders beyond gamma fall back to
    coefficient-space differentiation of the assembled series.
    """

    def __init__(self, gamma: MultiIndex, degree: MultiIndex, traces: dict):
        self.gamma = as_multiindex(gamma)
        self.degree = as_multiindex(degree, ndim=len(self.gamma))
        self.traces = dict(traces)
        if set(self.traces) != set(multiindex_range(self.gamma)):
            raise ValueError("need exactly one trace per lattice index")
        self._cache: dict[MultiIndex, LegendreSeries] = {}

    @property
    def ndim(self) -> int:
        return len(self.gamma)

    @property
    def domain(self) -> HyperRect:
        return HyperRect.cube(self.ndim)

    def trace_series(self, alpha):
        return self.traces[as_multiindex(alpha, ndim=self.ndim)]

    def boundary_trace(self, alpha, order=None) -> TraceFunction:
        order = self.gamma if order is None else as_multiindex(order, ndim=self.ndim)
        if order != self.gamma:
            raise ValueError(f"traces are stored at order {self.gamma}, not {order}")
        alpha = as_multiindex(alpha, ndim=self.ndim)
        face = face_spec(alpha, self.gamma)
        value = self.traces[alpha]
        if not active_axes(face):
            return TraceFunction(face, float(value))
        return TraceFunction(face, value)

    def _assembled_derivative(self, mu: MultiIndex) -> LegendreSeries:
        """D^mu of the approximant for mu <= gamma, by re-expanding at order
        gamma - mu: a sum of lifted traces, no differentiation involved."""
        total = None
        for alpha in multiindex_range(self.gamma):
            if not leq(mu, alpha):
                continue
            value = self.traces[alpha]
            face = face_spec(alpha, self.gamma)
            act = active_axes(face)
            if act:
                term = value.extend(act, self.ndim)
            else:
                term = LegendreSeries.constant(float(value), self.ndim)
            for i in range(self.ndim):
                order, top = alpha[i] - mu[i], self.gamma[i] - mu[i]
                if order < top:
                    term = term.multiply_kernel(i, order)
                else:
                    for _ in range(order):
                        term = term.antiderivative(i)
            total = term if total is None else total + term
        return total

    def derivative_series(self, alpha) -> LegendreSeries:
        alpha = as_multiindex(alpha, ndim=self.ndim)
        if alpha not in self._cache:
            mu = meet(alpha, self.gamma)
            series = self._assembled_derivative(mu)
            for i, extra in enumerate(a - m for a, m in zip(alpha, mu)):
                if extra:
                    series = series.derivative(i, extra)
            self._cache[alpha] = series
        return self._cache[alpha]

    def derivative_grid(self, alpha, axes) -> np.ndarray:
        return self.derivative_series(alpha).eval_grid(axes)

    def eval_grid(self, axes) -> np.ndarray:
        return self.derivative_grid((0,) * self.ndim, axes)

    def __call__(self, *coords):
        return self.derivative_series((0,) * self.ndim)(*coords)

    def to_piecewise_poly(self) -> PiecewisePoly:
        """Exact reassembly through the piecewise-polynomial operators
        (moderate degrees only; see LegendreSeries.to_piecewise)."""
        entries = {}
        for alpha in multiindex_range(self.gamma):
            face = face_spec(alpha, self.gamma)
            act = active_axes(face)
            value = self.traces[alpha]
            if act:
                entries[alpha] = value.extend(act, self.ndim).to_piecewise()
            else:
                entries[alpha] = PiecewisePoly.constant(self.domain, float(value))
        return reconstruct(PolyTraceBundle(self.gamma, entries))


def sobolev_project_legendre(u: AnalyticFunction, gamma, degree,
                             rule: QuadratureRule | None = None
                             ) -> LegendreReconstruction:
    """Order-gamma approximant: project each boundary trace onto Legendre
    polynomials of (face-restricted) degree `degree`, then reassemble.

    The result is a polynomial of degree at most degree + gamma per axis.
    At order zero this is the plain L2 Legendre projection of u.
    """
    nd = u.domain.ndim
    gamma = as_multiindex(gamma, ndim=nd)
    degree = as_multiindex(degree, ndim=nd)
    if not leq(gamma, u.delta):
        raise ValueError(f"projection order {gamma} exceeds smoothness {u.delta}")
    if u.domain != HyperRect.cube(nd):
        raise ValueError("trace projections assume the standard hypercube")
    rule = rule or rule_for(u, nodes=max(16, max(degree) + 8), panels=8)
    traces = {}
    for alpha in multiindex_range(gamma):
        trace = u.boundary_trace(alpha, gamma)
        act = trace.active
        if not act:
            traces[alpha] = float(trace.values)
            continue
        axes, weights = _face_quadrature(trace.face, rule)
        degs = tuple(degree[i] for i in act)
        traces[alpha] = _legendre_from_grid(trace, degs, axes, weights)
    return LegendreReconstruction(gamma, degree, traces)


def sobolev_project_step(u: AnalyticFunction, gamma, counts,
                         rule: QuadratureRule | None = None) -> PiecewisePoly:
    """Order-gamma approximant from cell-averaged boundary traces: a
    piecewise polynomial of degree at most gamma per axis on the cell grid."""
    nd = u.domain.ndim
    gamma = as_multiindex(gamma, ndim=nd)
    counts = as_multiindex(counts, ndim=nd)
    if not leq(gamma, u.delta):
        raise ValueError(f"projection order {gamma} exceeds smoothness {u.delta}")
    if u.domain != HyperRect.cube(nd):
        raise ValueError("step grids assume the standard hypercube")
    rule = rule_for(u, base=rule or QuadratureRule(nodes=16, panels=8),
                    extra_splits=cell_edges(counts, nd))
    entries = {}
    for alpha in multiindex_range(gamma):
        trace = u.boundary_trace(alpha, gamma)
        act = trace.active
        if not act:
            entries[alpha] = PiecewisePoly.constant(u.domain, float(trace.values))
            continue
        axes, weights = _face_quadrature(trace.face, rule)
        face_counts = tuple(counts[i] for i in act)
        averages = _cell_averages_from_grid(trace, face_counts, axes, weights)
        entries[alpha] = CellGrid(face_counts, averages).to_piecewise(act, nd)
    return reconstruct(PolyTraceBundle(gamma, entries))


def random_legendre_poly(rng: np.random.Generator, degree) -> LegendreSeries:
    """Random coefficient tensor, used as a perturbation direction."""
    degree = as_multiindex(degree)
    return LegendreSeries(rng.standard_normal(tuple(d + 1 for d in degree)))
