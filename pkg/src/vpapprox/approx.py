"""Best trigonometric approximation, globally and through windows.

The global solver dispatches on the exponent: orthogonal projection for
p = 2 (error from the grid norm of the residual), exchange minimax for
p = inf, IRLS for other finite p (p = 1 is allowed but flagged uncertified
because the minimizer need not be unique).

Windowed best-approximation errors come in two methods.  The "via_global"
method evaluates the windowed norm of the global residual, an upper bound
on the window infimum that the window solvers probe.  The "direct" method
minimizes over the window itself and serves as the oracle; it supports the
fixed window variant for finite p and both variants for p = inf (where they
coincide).

Results are memoized per (function, sample count, exponent, degree); the
caches are safe for concurrent reads with single-writer inserts and can be
dropped with clear_caches().
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import WindowTooSmallError
from .fourier import FourierCoefficients, TrigPolynomial, fourier_coefficients
from .grid import TWO_PI, GridFunction, grid_norm, validate_exponent
from .errors import SolverConvergenceError
from .solvers import (
    exchange_minimax,
    irls_lp,
    lawson_minimax,
    solve_weighted_l2,
    uniform_quadrature_weights,
    vector_to_poly,
    window_quadrature_weights,
)
from .windows import Variant, WindowProfile, WindowSpec, windowed_norm

Method = Literal["via_global", "direct"]


@dataclass(frozen=True)
class BestApproxResult:
    """Outcome of one best-approximation solve."""

    degree: int
    p: float
    polynomial: TrigPolynomial
    error: float
    method: str
    certified: bool = True
    iterations: int = 0


@dataclass(frozen=True)
class AveragedErrorTable:
    """Windowed best-approximation errors on the radius ladder
    delta_k = pi/(k+1) for k = 0..m, together with their mean."""

    n: int
    m: int
    x: float
    p: float
    variant: Variant
    entries: np.ndarray
    average: float

    def to_csv_rows(self):
        rows = [(k, float(np.pi / (k + 1)), float(v)) for k, v in enumerate(self.entries)]
        rows.append(("average", "", float(self.average)))
        return rows


_lock = threading.Lock()
_best_cache: dict = {}
_etable_cache: dict = {}


def clear_caches() -> None:
    with _lock:
        _best_cache.clear()
        _etable_cache.clear()


def best_approximation(f: GridFunction, degree: int, p: float) -> BestApproxResult:
    """Best approximation of f from H_degree in the global p-norm."""
    p = validate_exponent(p)
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    key = (f.cache_key, f.n_samples, p, degree)
    with _lock:
        hit = _best_cache.get(key)
    if hit is not None:
        return hit
    result = _solve_best(f, degree, p)
    with _lock:
        _best_cache.setdefault(key, result)
    return result


def _solve_best(f: GridFunction, degree: int, p: float) -> BestApproxResult:
    n = f.n_samples
    if n < 4 * max(degree, 1):
        raise ValueError(f"{n} samples are too few for degree {degree}")
    if p == 2.0:
        coeffs = fourier_coefficients(f, degree)
        poly = coeffs.truncated(degree)
        residual = f.samples - poly.values_on_grid(n)
        return BestApproxResult(degree, p, poly, grid_norm(residual, 2.0), "exact-L2")
    if math.isinf(p):
        c, err, iters = _minimax_with_fallback(
            f.samples, f.grid, degree, circular=True, y_full=f.samples,
            weights=uniform_quadrature_weights(n), sub_idx=np.arange(n))
        return BestApproxResult(degree, p, vector_to_poly(c, degree), err, "exchange-minimax",
                                iterations=iters)
    w = uniform_quadrature_weights(n)
    init = _irls_warm_start(f, degree, p)
    c, err, iters = irls_lp(w, f.samples, degree, p, init=init)
    return BestApproxResult(degree, p, vector_to_poly(c, degree),
                            float(err), "iterative-p",
                            certified=(p != 1.0), iterations=iters)


def _minimax_with_fallback(y_sub: np.ndarray, nodes: np.ndarray, degree: int, *,
                           circular: bool, y_full: np.ndarray,
                           weights: np.ndarray,
                           sub_idx: np.ndarray) -> tuple[np.ndarray, float, int]:
    """Exchange first; on a degeneracy stall, certified Lawson reweighting.

    `y_sub`/`nodes` feed the exchange (window nodes in monotone order);
    `y_full`/`weights`/`sub_idx` feed the reweighting fallback, which works
    on the full grid with the weight support marking the window.
    """
    try:
        return exchange_minimax(y_sub, nodes, degree, circular=circular)
    except SolverConvergenceError:
        return lawson_minimax(y_full, degree, weights, sub_idx, circular)


def _irls_warm_start(f: GridFunction, degree: int, p: float) -> np.ndarray | None:
    """Reuse the cached next-lower-degree minimizer when available."""
    for lower in (degree - 1, degree - 2):
        if lower < 0:
            break
        hit = _best_cache.get((f.cache_key, f.n_samples, p, lower))
        if hit is not None:
            from .solvers import poly_to_vector

            return poly_to_vector(hit.polynomial, degree)
    return None


def residual_function(f: GridFunction, result: BestApproxResult) -> GridFunction:
    """f minus its best approximation, as a grid function."""
    poly = result.polynomial
    samples = f.samples - poly.values_on_grid(f.n_samples)
    if f.evaluator is not None:
        ev = f.evaluator
        return GridFunction(samples=samples, evaluator=lambda t: ev(t) - poly(t))
    return GridFunction(samples=samples)


def windowed_error(f: GridFunction, poly: TrigPolynomial, spec: WindowSpec) -> float:
    """Windowed norm of f - poly under the given window."""
    samples = f.samples - poly.values_on_grid(f.n_samples)
    if spec.delta == 0.0:
        return float(abs(f.value_at(spec.x) - poly(spec.x)))
    profile = WindowProfile(samples, spec.x, spec.p)
    return profile.sup_value(spec.delta) if spec.variant is Variant.SUP \
        else profile.fixed_value(spec.delta)


def windowed_best_error(f: GridFunction, degree: int, spec: WindowSpec,
                        method: Method = "via_global") -> float:
    """Windowed best-approximation error at the given window.

    "via_global" uses the global best polynomial; "direct" solves on the
    window and is the expensive oracle.
    """
    if method == "via_global":
        result = best_approximation(f, degree, spec.p)
        return windowed_error(f, result.polynomial, spec)
    if method != "direct":
        raise ValueError(f"unknown method {method!r}")
    return _direct_window_error(f, degree, spec)


def _direct_window_error(f: GridFunction, degree: int, spec: WindowSpec) -> float:
    if spec.delta == 0.0:
        return 0.0  # a constant matches any single point
    n = f.n_samples
    if math.isinf(spec.p):
        w, idx = window_quadrature_weights(n, spec.x, spec.delta)
        if idx.shape[0] >= n:  # window covers the circle: the global problem
            result = best_approximation(f, degree, spec.p)
            return result.error
        nodes = f.grid[idx]
        # off-window nodes wrap; rebuild monotone coordinates around x
        nodes = spec.x + wrap_offsets(nodes - spec.x)
        order = np.argsort(nodes)
        _, err, _ = _minimax_with_fallback(
            f.samples[idx][order], nodes[order], degree, circular=False,
            y_full=f.samples, weights=w, sub_idx=idx[order])
        return float(err)
    if spec.variant is Variant.SUP:
        raise ValueError("the direct solver supports the fixed variant for finite p")
    w, idx = window_quadrature_weights(n, spec.x, spec.delta)
    if idx.shape[0] < 2 * degree + 1:
        raise WindowTooSmallError(
            f"{idx.shape[0]} nodes cannot determine a degree-{degree} fit")
    if spec.p == 2.0:
        c = solve_weighted_l2(w, f.samples, degree)
        r = f.samples - vector_to_poly(c, degree).values_on_grid(n)
        obj = float(np.sum(w * r * r))
        return (max(obj, 0.0) / (2.0 * spec.delta)) ** 0.5
    _, err, _ = irls_lp(w, f.samples, degree, spec.p)
    return float(err) / (2.0 * spec.delta) ** (1.0 / spec.p)


def wrap_offsets(t: np.ndarray) -> np.ndarray:
    """Map offsets to (-pi, pi] so window nodes order monotonically."""
    return np.pi - np.mod(np.pi - t, TWO_PI)


def _ladder_entry(f: GridFunction, degree: int, x: float, p: float,
                  variant: Variant, length: int) -> tuple[np.ndarray, np.ndarray]:
    p = validate_exponent(p)
    key = (f.cache_key, f.n_samples, p, x, variant, degree)
    with _lock:
        hit = _etable_cache.get(key)
    if hit is not None and hit[0].shape[0] >= length:
        return hit
    result = best_approximation(f, degree, p)
    samples = f.samples - result.polynomial.values_on_grid(f.n_samples)
    profile = WindowProfile(samples, x, p)
    radii = np.pi / (np.arange(length) + 1.0)
    values = profile.values(radii, variant)
    entry = (values, np.cumsum(values))
    with _lock:
        cur = _etable_cache.get(key)
        if cur is None or cur[0].shape[0] < length:
            _etable_cache[key] = entry
        else:
            entry = cur
    return entry


def error_ladder(f: GridFunction, degree: int, x: float, p: float,
                 variant: Variant, length: int) -> np.ndarray:
    """Windowed errors of the global residual at radii pi/(k+1), k < length.

    Cached per (function, degree, exponent, center, variant); extending an
    existing ladder recomputes it at the larger length.
    """
    return _ladder_entry(f, degree, x, p, variant, length)[0][:length]


def error_prefix_sums(f: GridFunction, degree: int, x: float, p: float,
                      variant: Variant, length: int) -> np.ndarray:
    """Running sums of the error ladder, so that the mean over indices
    0..m is sums[m] / (m + 1)."""
    return _ladder_entry(f, degree, x, p, variant, length)[1][:length]


def averaged_error(f: GridFunction, n: int, m: int, x: float, p: float,
                   variant: Variant = Variant.SUP) -> float:
    """Mean windowed best-approximation error over the ladder k = 0..m."""
    if m < 0 or n < 0:
        raise ValueError("orders must be nonnegative")
    ladder = error_ladder(f, n, x, p, variant, m + 1)
    return float(ladder.mean())


def averaged_error_table(f: GridFunction, n: int, m: int, x: float, p: float,
                         variant: Variant = Variant.SUP) -> AveragedErrorTable:
    """Ladder entries and their mean, as a table."""
    ladder = error_ladder(f, n, x, p, variant, m + 1)
    return AveragedErrorTable(n=n, m=m, x=x, p=p, variant=variant,
                              entries=ladder.copy(), average=float(ladder.mean()))


def pointwise_error(f: GridFunction, degree: int, x: float, p: float) -> float:
    """Windowed error at radius zero: |f(x) - T(x)| for the global best T."""
    result = best_approximation(f, degree, p)
    return float(abs(f.value_at(x) - result.polynomial(x)))
