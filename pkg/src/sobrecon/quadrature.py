"""Composite Gauss-Legendre quadrature and the norms built on it.

Panels are laid out per axis from a uniform baseline plus mandatory split
points (function breakpoints, approximant cell edges), with optional
geometric grading toward an integrable singularity.  Gauss nodes are
strictly interior, so singular points and breakpoints are never evaluated.

Three norms are provided: plain L2, the mixed-smoothness Sobolev norm
(sum over the box alpha <= order; the "isotropic" family restricts to the
simplex |alpha|_1 <= max(order)), and the discrete-continuous norm that
aggregates the face L2 norms of all boundary traces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import (
    HyperRect,
    active_axes,
    as_multiindex,
    face_spec,
    multiindex_range,
)

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class AxisGrading:
    """Geometric panel refinement toward one point of an axis."""

    center: float
    ratio: float = 0.25
    panels: int = 40

    def __post_init__(self):
        if not 0.0 < self.ratio < 1.0:
            raise ValueError(f"grading ratio must be in (0, 1), got {self.ratio}")
        if self.panels < 1:
            raise ValueError("grading needs at least one panel")


@dataclass(frozen=True)
class QuadratureRule:
    """Composite tensor Gauss rule: node count per panel, baseline panel
    count per axis, mandatory per-axis splits, optional per-axis grading."""

    nodes: int = 16
    panels: int = 32
    splits: tuple[tuple[float, ...], ...] | None = None
    grading: tuple[AxisGrading | None, ...] | None = None

    def __post_init__(self):
        if self.nodes < 2:
            raise ValueError("need at least 2 Gauss nodes per panel")
        if self.panels < 1:
            raise ValueError("need at least 1 panel per axis")


def _axis_splits(rule: QuadratureRule, axis: int) -> tuple[float, ...]:
    if rule.splits is None or axis >= len(rule.splits):
        return ()
    return tuple(rule.splits[axis])


def _axis_grading(rule: QuadratureRule, axis: int):
    if rule.grading is None or axis >= len(rule.grading):
        return None
    return rule.grading[axis]


def rule_for(u=None, *, ndim=None, base: QuadratureRule | None = None,
             extra_splits=None, nodes=None, panels=None, grade=True,
             grade_ratio: float | None = None) -> QuadratureRule:
    """Concrete rule for a target function: splits at its breakpoints and
    geometric grading toward its singular points."""
    base = base or QuadratureRule()
    if ndim is None:
        if u is None:
            raise ValueError("need either a function or an explicit ndim")
        ndim = u.domain.ndim
    splits = [set(_axis_splits(base, i)) for i in range(ndim)]
    grading = [_axis_grading(base, i) for i in range(ndim)]
    if u is not None:
        for i in range(ndim):
            splits[i] |= set(float(b) for b in u.breakpoints[i])
            sing = tuple(getattr(u, "singular_points", ((),) * ndim)[i])
            splits[i] |= set(float(s) for s in sing)
            if grade and sing and grading[i] is None:
                if grade_ratio is None:
                    grading[i] = AxisGrading(center=float(sing[0]))
                else:
                    grading[i] = AxisGrading(center=float(sing[0]), ratio=grade_ratio)
    if extra_splits is not None:
        for i in range(ndim):
            splits[i] |= set(float(s) for s in extra_splits[i])
    return QuadratureRule(
        nodes=nodes or base.nodes,
        panels=panels or base.panels,
        splits=tuple(tuple(sorted(s)) for s in splits),
        grading=tuple(grading),
    )


@lru_cache(maxsize=None)
def _gauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def axis_quadrature(lo: float, hi: float, splits=(), grading=None,
                    nodes: int = 16, panels: int = 32):
    """Nodes and weights of the composite rule on [lo, hi].

    Segments between mandatory splits are subdivided uniformly with a panel
    budget proportional to their length; segments touching the grading
    center are subdivided geometrically toward it instead.
    """
    if hi <= lo:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    cuts = {float(s) for s in splits if lo < float(s) < hi}
    center = None
    if grading is not None and lo < grading.center < hi:
        center = float(grading.center)
        cuts.add(center)
    edges = np.array(sorted({lo, hi} | cuts))

    panel_edges = []
    for a, b in zip(edges[:-1], edges[1:]):
        if center is not None and (a == center or b == center):
            m = grading.panels
            r = grading.ratio
            steps = (b - a) * r ** np.arange(m, -1, -1.0)
            sub = a + steps if a == center else b - steps[::-1]
            sub[0], sub[-1] = a, b
        else:
            n = max(1, round(panels * (b - a) / (hi - lo)))
            sub = np.linspace(a, b, n + 1)
        panel_edges.append(sub[:-1])
    panel_edges.append(np.array([hi]))
    grid = np.concatenate(panel_edges)

    ref_x, ref_w = _gauss(nodes)
    half = 0.5 * np.diff(grid)
    mid = grid[:-1] + half
    x = (mid[:, None] + half[:, None] * ref_x[None, :]).reshape(-1)
    w = (half[:, None] * ref_w[None, :]).reshape(-1)
    return x, w


def grid_quadrature(domain: HyperRect, rule: QuadratureRule):
    """Per-axis node and weight arrays of the tensor rule on the domain."""
    axes, weights = [], []
    for i in range(domain.ndim):
        x, w = axis_quadrature(
            domain.lo[i], domain.hi[i], _axis_splits(rule, i),
            _axis_grading(rule, i), rule.nodes, rule.panels,
        )
        axes.append(x)
        weights.append(w)
    return axes, weights


def grid_values(f, axes) -> np.ndarray:
    """Evaluate a function on the tensor grid of per-axis node arrays."""
    shape = tuple(len(a) for a in axes)
    if hasattr(f, "eval_grid"):
        return np.broadcast_to(np.asarray(f.eval_grid(list(axes)), float), shape)
    grids = np.meshgrid(*axes, indexing="ij", sparse=True)
    return np.broadcast_to(np.asarray(f(*grids), float), shape)


def _check_finite(values: np.ndarray, axes):
    if np.all(np.isfinite(values)):
        return
    at = np.argwhere(~np.isfinite(values))[0]
    node = tuple(float(axes[i][j]) for i, j in enumerate(at))
    raise ValueError(f"integrand is not finite at quadrature node {node}")


def _contract(values: np.ndarray, weights) -> float:
    total = values
    for w in reversed(weights):
        total = np.tensordot(total, w, axes=([-1], [0]))
    return float(total)


def integrate(f, domain: HyperRect, rule: QuadratureRule | None = None) -> float:
    """Tensor-product composite Gauss approximation of the integral over the domain."""
    rule = rule or QuadratureRule()
    axes, weights = grid_quadrature(domain, rule)
    values = grid_values(f, axes)
    _check_finite(values, axes)
    return _contract(values, weights)


def l2_norm(f, domain: HyperRect, rule: QuadratureRule | None = None) -> float:
    rule = rule or QuadratureRule()
    axes, weights = grid_quadrature(domain, rule)
    values = grid_values(f, axes)
    _check_finite(values, axes)
    return math.sqrt(max(_contract(values * values, weights), 0.0))


def l2_error(f, g, domain: HyperRect, rule: QuadratureRule | None = None) -> float:
    rule = rule or QuadratureRule()
    axes, weights = grid_quadrature(domain, rule)
    diff = grid_values(f, axes) - grid_values(g, axes)
    _check_finite(diff, axes)
    return math.sqrt(max(_contract(diff * diff, weights), 0.0))


def _deriv_values(obj, alpha, axes) -> np.ndarray:
    shape = tuple(len(a) for a in axes)
    if hasattr(obj, "derivative_grid"):
        return np.broadcast_to(np.asarray(obj.derivative_grid(alpha, axes), float), shape)
    if any(alpha):
        raise TypeError(f"{type(obj).__name__} cannot supply derivatives")
    return grid_values(obj, axes)


def norm_index_set(order, family: str = "mixed"):
    """Derivative orders entering the norm: the full box for the
    mixed-smoothness norm, the simplex |alpha|_1 <= max(order) otherwise."""
    order = as_multiindex(order)
    box = multiindex_range(order)
    if family == "mixed":
        return box
    if family == "isotropic":
        cap = max(order)
        return [a for a in box if sum(a) <= cap]
    raise ValueError(f"unknown norm family {family!r}")


def sobolev_error(f, g, order, domain: HyperRect,
                  rule: QuadratureRule | None = None, family: str = "mixed") -> float:
    """Sobolev norm of f - g (of f alone when g is None), by quadrature.

    Both operands must supply derivative values on tensor grids up to the
    requested order; `order` multi-indexes the derivative box.
    """
    rule = rule or QuadratureRule()
    axes, weights = grid_quadrature(domain, rule)
    total = 0.0
    for alpha in norm_index_set(order, family):
        values = _deriv_values(f, alpha, axes)
        if g is not None:
            values = values - _deriv_values(g, alpha, axes)
        _check_finite(values, axes)
        total += _contract(values * values, weights)
    return math.sqrt(max(total, 0.0))


def sobolev_norm(f, order, domain: HyperRect,
                 rule: QuadratureRule | None = None, family: str = "mixed") -> float:
    return sobolev_error(f, None, order, domain, rule, family)


def _face_axes(domain: HyperRect, face, rule: QuadratureRule):
    axes, weights = [], []
    for i in active_axes(face):
        x, w = axis_quadrature(
            domain.lo[i], domain.hi[i], _axis_splits(rule, i),
            _axis_grading(rule, i), rule.nodes, rule.panels,
        )
        axes.append(x)
        weights.append(w)
    return axes, weights


def dc_error(f, g, order, domain: HyperRect,
             rule: QuadratureRule | None = None) -> float:
    """Discrete-continuous norm of f - g (of f alone when g is None):
    root-sum-of-squares of the face L2 norms of all boundary traces.

    Operands must implement boundary_trace(alpha, order)."""
    rule = rule or QuadratureRule()
    order = as_multiindex(order)
    total = 0.0
    for alpha in multiindex_range(order):
        face = face_spec(alpha, order)
        tf = f.boundary_trace(alpha, order)
        tg = g.boundary_trace(alpha, order) if g is not None else None
        if not active_axes(face):
            d = float(tf.values) - (float(tg.values) if tg is not None else 0.0)
            total += d * d
            continue
        axes, weights = _face_axes(domain, face, rule)
        values = tf.eval_grid(axes)
        if tg is not None:
            values = values - tg.eval_grid(axes)
        _check_finite(values, axes)
        total += _contract(np.asarray(values, float) ** 2, weights)
    return math.sqrt(max(total, 0.0))


def dc_norm(f, order, domain: HyperRect, rule: QuadratureRule | None = None) -> float:
    return dc_error(f, None, order, domain, rule)
