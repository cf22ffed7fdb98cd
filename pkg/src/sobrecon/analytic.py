"""Target functions with exact derivative evaluators.

Approximation targets carry a closed-form evaluator for every admissible
mixed derivative, plus per-axis breakpoint and singular-point metadata that
drives quadrature panel placement.  Derivatives are never obtained by
numerical differentiation; finite differences appear only as a cross-check
away from breakpoints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .core import (
    HyperRect,
    MultiIndex,
    TraceFunction,
    active_axes,
    as_multiindex,
    face_spec,
    leq,
    multiindex_range,
)


@dataclass(frozen=True)
class AnalyticFunction:
    """A function with exact point evaluators for all derivatives up to `delta`.

    ``derivatives`` maps every multi-index alpha <= delta (exactly that set)
    to a vectorized evaluator of D^alpha; the zero index must evaluate the
    function itself.  ``breakpoints`` lists interior points per axis where
    some derivative loses smoothness; ``singular_points`` the subset where a
    derivative is unbounded (quadrature grades its panels toward these).
    """

    domain: HyperRect
    delta: MultiIndex
    derivatives: Mapping[MultiIndex, Callable]
    breakpoints: tuple[tuple[float, ...], ...] = ()
    singular_points: tuple[tuple[float, ...], ...] = ()
    name: str = ""

    def __post_init__(self):
        delta = as_multiindex(self.delta, ndim=self.domain.ndim)
        object.__setattr__(self, "delta", delta)
        lattice = multiindex_range(delta)
        derivs = {as_multiindex(a, ndim=self.domain.ndim): f
                  for a, f in self.derivatives.items()}
        if set(derivs) != set(lattice):
            missing = set(lattice) - set(derivs)
            extra = set(derivs) - set(lattice)
            raise ValueError(
                f"derivative table must cover exactly alpha <= {delta}; "
                f"missing {sorted(missing)}, extraneous {sorted(extra)}"
            )
        object.__setattr__(self, "derivatives", derivs)
        nd = self.domain.ndim
        bp = self.breakpoints or ((),) * nd
        sp = self.singular_points or ((),) * nd
        bp = tuple(tuple(float(x) for x in axis) for axis in bp)
        sp = tuple(tuple(float(x) for x in axis) for axis in sp)
        if len(bp) != nd or len(sp) != nd:
            raise ValueError("breakpoints and singular_points need one tuple per axis")
        for i in range(nd):
            for x in bp[i] + sp[i]:
                if not self.domain.lo[i] < x < self.domain.hi[i]:
                    raise ValueError(f"breakpoint {x} not strictly inside axis {i}")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "singular_points", sp)

    def __call__(self, *coords):
        return self.derivatives[(0,) * self.domain.ndim](*coords)

    def eval_derivative(self, alpha, point) -> float:
        """D^alpha at a single point; rejects orders beyond delta and points
        outside the domain."""
        alpha = as_multiindex(alpha, ndim=self.domain.ndim)
        if not leq(alpha, self.delta):
            raise ValueError(
                f"derivative {alpha} is not guaranteed square-integrable "
                f"(smoothness order is {self.delta})"
            )
        point = tuple(float(p) for p in point)
        if not self.domain.contains(point):
            raise ValueError(f"point {point} outside domain")
        return float(self.derivatives[alpha](*point))

    def derivative_grid(self, alpha, axes) -> np.ndarray:
        alpha = as_multiindex(alpha, ndim=self.domain.ndim)
        if not leq(alpha, self.delta):
            raise ValueError(f"derivative {alpha} unavailable (delta={self.delta})")
        grids = np.meshgrid(*axes, indexing="ij", sparse=True)
        shape = tuple(len(a) for a in axes)
        return np.broadcast_to(np.asarray(self.derivatives[alpha](*grids), float), shape)

    def boundary_trace(self, alpha, order=None) -> TraceFunction:
        """Trace of D^alpha on its face in an order-`order` expansion,
        obtained by pinning the inactive coordinates at the lower corner."""
        order = self.delta if order is None else as_multiindex(order, ndim=self.domain.ndim)
        if not leq(order, self.delta):
            raise ValueError(f"expansion order {order} exceeds smoothness {self.delta}")
        alpha = as_multiindex(alpha, ndim=self.domain.ndim)
        face = face_spec(alpha, order)
        act = active_axes(face)
        if not act:
            value = float(self.derivatives[alpha](*self.domain.lo))
            return TraceFunction(face, value)
        ev = self.derivatives[alpha]
        lo = self.domain.lo

        def pinned(*coords, _ev=ev, _act=act, _lo=lo):
            it = iter(coords)
            args = [next(it) if i in _act else _lo[i] for i in range(len(_lo))]
            return _ev(*args)

        return TraceFunction(face, pinned)

    def extract_traces(self, order=None) -> "TraceBundle":
        order = self.delta if order is None else as_multiindex(order, ndim=self.domain.ndim)
        entries = {a: self.boundary_trace(a, order) for a in multiindex_range(order)}
        return TraceBundle(order, entries)


@dataclass(frozen=True)
class TraceBundle:
    """Boundary traces of an analytic target, one per lattice index."""

    order: MultiIndex
    entries: Mapping[MultiIndex, TraceFunction]

    def __post_init__(self):
        order = as_multiindex(self.order)
        object.__setattr__(self, "order", order)
        lattice = multiindex_range(order)
        entries = dict(self.entries)
        if set(entries) != set(lattice):
            raise ValueError("bundle must cover exactly the lattice 0 <= alpha <= order")
        for alpha in lattice:
            if entries[alpha].face != face_spec(alpha, order):
                raise ValueError(f"entry {alpha} sits on the wrong face")
        object.__setattr__(self, "entries", entries)


def finite_difference_error(u: AnalyticFunction, alpha, axis: int, points,
                            h: float = 1e-4) -> float:
    """Max relative error of the central difference of D^alpha along `axis`
    against the stored next-order evaluator, over the given points."""
    alpha = as_multiindex(alpha, ndim=u.domain.ndim)
    up = tuple(a + (1 if i == axis else 0) for i, a in enumerate(alpha))
    lo_ev, hi_ev = u.derivatives[alpha], u.derivatives[up]
    worst = 0.0
    for p in points:
        p = tuple(float(x) for x in p)
        plus = tuple(x + h if i == axis else x for i, x in enumerate(p))
        minus = tuple(x - h if i == axis else x for i, x in enumerate(p))
        fd = (float(lo_ev(*plus)) - float(lo_ev(*minus))) / (2 * h)
        exact = float(hi_ev(*p))
        worst = max(worst, abs(fd - exact) / max(abs(exact), 1.0))
    return worst


_REGISTRY: dict[str, Callable] = {}


def register_example(name: str, factory: Callable):
    _REGISTRY[name] = factory


def available_examples() -> list[str]:
    _load_builtins()
    return sorted(_REGISTRY)


def get_example(name: str, **kwargs) -> AnalyticFunction:
    """Look up a named example target ("example1-1d", "example2-2d",
    "poly-random")."""
    _load_builtins()
    try:
        factory = _REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; have {sorted(_REGISTRY)}") from None
    return factory(**kwargs)


def _load_builtins():
    from . import targets  # noqa: F401  (registers on import)
