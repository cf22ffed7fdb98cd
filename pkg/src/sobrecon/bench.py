"""Convergence sweeps over projection degree / cell count, with slope fits.

Reproduces the four convergence experiments: Legendre and step-function
approximation of the 1-D quintic-smoothness target and of the 2-D tensor
target, with errors recorded in the L2 norm, the mixed-smoothness norm at
the target's full order, and the isotropic Sobolev norm.  Results are
emitted as CSV (param, l2_error, s_error, w_error, runtime_s), one file per
(example, method, order) combination.
"""

from __future__ import annotations

import csv
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .analytic import AnalyticFunction
from .core import MultiIndex, as_multiindex, multiindex_range
from .projection import cell_edges, sobolev_project_legendre, sobolev_project_step
from .quadrature import (
    QuadratureRule,
    _check_finite,
    _contract,
    _deriv_values,
    grid_quadrature,
    norm_index_set,
    rule_for,
)
from .verify import CheckResult

THREADS_ENV = "SOBOLEV_RECON_THREADS"


@dataclass
class SweepResult:
    """Errors of one (example, method, order) sweep over a parameter list."""

    example: str
    method: str
    gamma: MultiIndex
    params: list[int]
    l2: list[float]
    s: list[float]
    w: list[float]
    runtime: list[float]
    failures: list[tuple[int, str]] = field(default_factory=list)

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["param", "l2_error", "s_error", "w_error", "runtime_s"])
            for row in zip(self.params, self.l2, self.s, self.w, self.runtime):
                writer.writerow([repr(v) if isinstance(v, float) else v for v in row])

    def column(self, norm: str) -> list[float]:
        try:
            return {"l2": self.l2, "s": self.s, "w": self.w}[norm]
        except KeyError:
            raise ValueError(f"unknown norm {norm!r}; use l2, s, or w") from None

    def ratio(self, norm: str) -> float:
        """Last error over first error (drop of the curve across the sweep)."""
        col = self.column(norm)
        return col[-1] / col[0]


def _workers() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map(fn, items):
    n = _workers()
    if n == 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _error_components(u, approx, order, rule) -> dict:
    """Squared derivative-error integrals for every alpha <= order."""
    axes, weights = grid_quadrature(u.domain, rule)
    components = {}
    for alpha in multiindex_range(order):
        diff = _deriv_values(u, alpha, axes) - _deriv_values(approx, alpha, axes)
        _check_finite(diff, axes)
        components[alpha] = _contract(diff * diff, weights)
    return components


def error_norms(u: AnalyticFunction, approx, order, rule) -> tuple[float, float, float]:
    """(L2, mixed-order, isotropic) error norms in one quadrature pass."""
    order = as_multiindex(order, ndim=u.domain.ndim)
    comp = _error_components(u, approx, order, rule)
    zero = (0,) * u.domain.ndim
    simplex = set(norm_index_set(order, "isotropic"))
    l2 = math.sqrt(max(comp[zero], 0.0))
    s = math.sqrt(max(sum(comp.values()), 0.0))
    w = math.sqrt(max(sum(v for a, v in comp.items() if a in simplex), 0.0))
    return l2, s, w


def _norm_rule(u: AnalyticFunction, extra_splits=None, panels=None,
               grade_ratio=None) -> QuadratureRule:
    if panels is None:
        panels = 32 if u.domain.ndim == 1 else 16
    return rule_for(u, extra_splits=extra_splits, panels=panels,
                    grade_ratio=grade_ratio)


def sweep_point(u: AnalyticFunction, method: str, gamma, param: int,
                norm_order=None, nodes=None, panels=None, grade_ratio=None):
    """Build one approximant and return (l2, s, w, runtime_seconds)."""
    nd = u.domain.ndim
    gamma = as_multiindex(gamma, ndim=nd)
    norm_order = u.delta if norm_order is None else as_multiindex(norm_order, ndim=nd)
    start = time.perf_counter()
    if method == "legendre":
        degree = (int(param),) * nd
        proj_rule = rule_for(u, nodes=nodes or max(16, param + 8), panels=4,
                             grade_ratio=grade_ratio)
        approx = sobolev_project_legendre(u, gamma, degree, proj_rule)
        rule = _norm_rule(u, panels=panels, grade_ratio=grade_ratio)
    elif method == "step":
        counts = (int(param),) * nd
        proj_rule = rule_for(u, nodes=nodes or 16, panels=4,
                             extra_splits=cell_edges(counts, nd),
                             grade_ratio=grade_ratio)
        approx = sobolev_project_step(u, gamma, counts, proj_rule)
        rule = _norm_rule(u, extra_splits=cell_edges(counts, nd), panels=panels,
                          grade_ratio=grade_ratio)
    else:
        raise ValueError(f"unknown method {method!r}; use 'legendre' or 'step'")
    l2, s, w = error_norms(u, approx, norm_order, rule)
    return l2, s, w, time.perf_counter() - start


def run_sweep(u: AnalyticFunction, method: str, gamma, params,
              norm_order=None, nodes=None, panels=None, grade_ratio=None,
              example_name: str | None = None) -> SweepResult:
    """Sweep the approximation parameter; point failures are recorded and
    the sweep continues with NaN entries."""
    gamma = as_multiindex(gamma, ndim=u.domain.ndim)
    params = [int(p) for p in params]
    if any(b >= a for a, b in zip(params[1:], params[:-1])):
        raise ValueError("parameter values must increase strictly")

    def one(param):
        try:
            return sweep_point(u, method, gamma, param, norm_order, nodes, panels,
                               grade_ratio)
        except Exception as exc:  # noqa: BLE001 - failures are data here
            return exc

    rows = _map(one, params)
    result = SweepResult(example_name or u.name, method, gamma, params,
                         [], [], [], [])
    for param, row in zip(params, rows):
        if isinstance(row, Exception):
            result.failures.append((param, str(row)))
            row = (math.nan, math.nan, math.nan, math.nan)
        l2, s, w, dt = row
        result.l2.append(l2)
        result.s.append(s)
        result.w.append(w)
        result.runtime.append(dt)
    return result


def fit_slope(result: SweepResult, norm: str = "l2", window=None) -> float:
    """Least-squares slope of log(error) against log(param).

    `window` restricts the fit to params in [window[0], window[1]]; at least
    three points with strictly positive errors are required."""
    errors = result.column(norm)
    pairs = [
        (p, e) for p, e in zip(result.params, errors)
        if window is None or window[0] <= p <= window[1]
    ]
    if len(pairs) < 3:
        raise ValueError(f"window {window} keeps only {len(pairs)} points; need >= 3")
    if any((not math.isfinite(e)) or e <= 0.0 for _, e in pairs):
        raise ValueError(f"window {window} contains zero/invalid errors")
    x = np.log([p for p, _ in pairs])
    y = np.log([e for _, e in pairs])
    return float(np.polyfit(x, y, 1)[0])


def monotone_ratio_ok(result: SweepResult, norm: str = "l2",
                      uptick: float = 0.05, drop: float = 0.1) -> bool:
    """Decreasing trend check: no uptick beyond the tolerance and an overall
    drop below `drop` * first error."""
    col = result.column(norm)
    for a, b in zip(col[:-1], col[1:]):
        if b > a * (1.0 + uptick):
            return False
    return col[-1] < col[0] * drop


# ------------------------------------------------------------ figure presets

FIGURES = {
    "fig1": dict(example="example1-1d", method="legendre",
                 gammas=[(0,), (1,), (3,), (5,)],
                 params=[2, 4, 8, 16, 32, 64, 128, 256]),
    "fig2": dict(example="example1-1d", method="step",
                 gammas=[(0,), (1,), (3,), (5,)],
                 params=[2, 4, 8, 16, 32, 64, 128, 256]),
    "fig3": dict(example="example2-2d", method="legendre",
                 gammas=[(0, 0), (1, 1), (2, 2), (3, 3)],
                 params=[2, 4, 8, 16, 32]),
    "fig4": dict(example="example2-2d", method="step",
                 gammas=[(0, 0), (1, 1), (2, 2), (3, 3)],
                 params=[2, 4, 8, 16, 32, 64]),
}


def _slope_check(name, result, norm, window, target, tol) -> CheckResult:
    slope = fit_slope(result, norm, window)
    return CheckResult(
        name, abs(slope - target) <= tol,
        f"slope {slope:+.3f}, want {target:+g} +- {tol:g}")


def _ratio_check(name, result, norm, decreasing: bool) -> CheckResult:
    ratio = result.ratio(norm)
    if decreasing:
        return CheckResult(name, ratio < 1.0, f"last/first {ratio:.3g}, want < 1")
    return CheckResult(name, ratio >= 0.5, f"last/first {ratio:.3g}, want >= 0.5")


def figure_criteria(figure: str, sweeps: dict) -> list[CheckResult]:
    """Pass/fail lines for one figure's sweeps (keyed by gamma)."""
    out = []
    if figure == "fig1":
        window = (16, 256)
        for g in ((0,), (5,)):
            out.append(_slope_check(f"fig1 L2 slope gamma={g[0]}", sweeps[g],
                                    "l2", window, -5.0, 0.5))
        out.append(_slope_check("fig1 S slope gamma=5", sweeps[(5,)],
                                "s", window, -0.25, 0.15))
        out.append(_ratio_check("fig1 S non-decreasing gamma=0", sweeps[(0,)],
                                "s", decreasing=False))
    elif figure == "fig2":
        window = (16, 256)
        out.append(_slope_check("fig2 L2 slope gamma=0", sweeps[(0,)],
                                "l2", window, -1.0, 0.3))
        for g in ((1,), (3,), (5,)):
            out.append(_slope_check(f"fig2 L2 slope gamma={g[0]}", sweeps[g],
                                    "l2", window, -2.0, 0.4))
        out.append(_ratio_check("fig2 S decreasing gamma=5", sweeps[(5,)],
                                "s", decreasing=True))
        for g in ((0,), (1,), (3,)):
            out.append(_ratio_check(f"fig2 S non-decreasing gamma={g[0]}", sweeps[g],
                                    "s", decreasing=False))
    elif figure == "fig3":
        window = (2, 32)
        for g in ((0, 0), (1, 1), (2, 2), (3, 3)):
            out.append(_slope_check(f"fig3 L2 slope gamma={g}", sweeps[g],
                                    "l2", window, -3.0, 0.6))
        for g in ((2, 2), (3, 3)):
            out.append(_ratio_check(f"fig3 S decreasing gamma={g}", sweeps[g],
                                    "s", decreasing=True))
        for g in ((0, 0), (1, 1)):
            out.append(_ratio_check(f"fig3 S non-decreasing gamma={g}", sweeps[g],
                                    "s", decreasing=False))
    elif figure == "fig4":
        result = sweeps[(3, 3)]
        idx = result.params.index(4)
        l2, s = result.l2[idx], result.s[idx]
        out.append(CheckResult("fig4 exact recovery at K=4 (L2)", l2 <= 1e-12,
                               f"error {l2:.2e}, want <= 1e-12"))
        out.append(CheckResult("fig4 exact recovery at K=4 (S)", s <= 1e-12,
                               f"error {s:.2e}, want <= 1e-12"))
    else:
        raise ValueError(f"unknown figure {figure!r}; have {sorted(FIGURES)}")
    return out
