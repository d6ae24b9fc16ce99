"""Local windowed norms, the pointwise difference operator, and moduli of
continuity (pointwise, averaged, and global).

Two window variants exist. The fixed variant averages |f|^p over the single
window [x-delta, x+delta] (prefactor 1/(2*delta)); for p = inf it takes the
sup of |f| over the window. The sup variant maximizes the fixed value over
all window radii h <= delta drawn from the grid-offset ladder plus delta
itself. At delta = 0 both reduce to |f(x)|.

Window integrals use the trapezoid rule on the sub-grid; fractional window
endpoints enter through linear interpolation of the integrand, which makes
every window integral continuous in the radius.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .grid import TWO_PI, ArrayLike, GridFunction, grid_norm, uniform_grid, validate_exponent


class Variant(enum.Enum):
    """Window flavor: sup over admissible radii, or the single fixed radius."""

    SUP = "sup"
    FIXED = "fixed"


@dataclass(frozen=True)
class WindowSpec:
    """Parameters of one pointwise norm: center, radius, exponent, variant."""

    x: float
    delta: float
    p: float
    variant: Variant = Variant.SUP

    def __post_init__(self):
        object.__setattr__(self, "p", validate_exponent(self.p))
        if not 0.0 <= self.delta <= np.pi:
            raise ValueError(f"window radius must lie in [0, pi], got {self.delta}")


class WindowProfile:
    """Precomputed cumulative data for evaluating window norms of one sample
    array around one center at one exponent.

    The samples are tiled over three periods so any window with radius up to
    pi around a center in [-pi, pi] stays inside the tiled range.  Finite-p
    windows come from a running trapezoid integral of |f|^p; p = inf windows
    come from maxima accumulated outward from the center.
    """

    def __init__(self, samples: np.ndarray, center: float, p: float):
        self.p = validate_exponent(p)
        self.x = float(center)
        n = samples.shape[0]
        self.n = n
        self.dx = TWO_PI / n
        self.x0 = -3.0 * np.pi
        absx = np.abs(np.tile(np.asarray(samples, dtype=float), 3))
        if np.isinf(self.p):
            self._abs = absx
            c0 = int(np.floor((self.x - self.x0) / self.dx))
            self._c0 = c0
            self._left_max = np.maximum.accumulate(absx[c0::-1])
            self._right_max = np.maximum.accumulate(absx[c0 + 1:])
        else:
            g = absx ** self.p
            self._pow = g
            incr = 0.5 * self.dx * (g[:-1] + g[1:])
            t = np.empty(g.shape[0])
            t[0] = 0.0
            np.cumsum(incr, out=t[1:])
            self._cum = t
        self._ladder_max: Optional[np.ndarray] = None

    # -- finite p ------------------------------------------------------

    def _running_integral(self, y: np.ndarray) -> np.ndarray:
        """Integral of the piecewise-linear interpolant of |f|^p from the
        start of the tiled range up to each point y."""
        pos = (y - self.x0) / self.dx
        i = np.clip(np.floor(pos).astype(np.int64), 0, 3 * self.n - 2)
        frac = pos - i
        g = self._pow
        gy = (1.0 - frac) * g[i] + frac * g[i + 1]
        return self._cum[i] + 0.5 * self.dx * frac * (g[i] + gy)

    def _point_value(self, y: np.ndarray) -> np.ndarray:
        arr = self._abs if np.isinf(self.p) else self._pow
        pos = (y - self.x0) / self.dx
        i = np.clip(np.floor(pos).astype(np.int64), 0, 3 * self.n - 2)
        frac = pos - i
        v = (1.0 - frac) * arr[i] + frac * arr[i + 1]
        return v if np.isinf(self.p) else v ** (1.0 / self.p)

    # -- shared --------------------------------------------------------

    def fixed_values(self, radii: ArrayLike) -> np.ndarray:
        """Fixed-variant norm values at the given radii (vectorized)."""
        h = np.atleast_1d(np.asarray(radii, dtype=float))
        if np.any(h < 0) or np.any(h > np.pi):
            raise ValueError("window radii must lie in [0, pi]")
        if np.isinf(self.p):
            return self._fixed_sup(h)
        out = np.empty_like(h)
        zero = h == 0.0
        if np.any(zero):
            out[zero] = self._point_value(np.full(zero.sum(), self.x))
        pos = ~zero
        if np.any(pos):
            hp = h[pos]
            integral = self._running_integral(self.x + hp) - self._running_integral(self.x - hp)
            out[pos] = (np.maximum(integral, 0.0) / (2.0 * hp)) ** (1.0 / self.p)
        return out

    def _fixed_sup(self, h: np.ndarray) -> np.ndarray:
        c0 = self._c0
        left = np.ceil((self.x - h - self.x0) / self.dx).astype(np.int64)
        right = np.floor((self.x + h - self.x0) / self.dx).astype(np.int64)
        out = np.maximum(self._point_value(self.x - h), self._point_value(self.x + h))
        has_left = left <= c0
        if np.any(has_left):
            out[has_left] = np.maximum(out[has_left], self._left_max[c0 - left[has_left]])
        has_right = right >= c0 + 1
        if np.any(has_right):
            out[has_right] = np.maximum(out[has_right], self._right_max[right[has_right] - c0 - 1])
        return out

    def fixed_value(self, radius: float) -> float:
        return float(self.fixed_values(np.array([radius]))[0])

    def sup_values(self, radii: ArrayLike) -> np.ndarray:
        """Sup-variant values: max of the fixed norm over grid-offset radii
        up to each requested radius, plus the radius itself.

        For p = inf the fixed norm over a window already dominates the fixed
        norms over all smaller radii, so the sup equals the fixed value.
        """
        h = np.atleast_1d(np.asarray(radii, dtype=float))
        if np.isinf(self.p):
            return self.fixed_values(h)
        if self._ladder_max is None:
            jmax = int(np.floor(np.pi / self.dx))
            ladder = self.dx * np.arange(1, jmax + 1)
            self._ladder_max = np.maximum.accumulate(self.fixed_values(ladder))
        out = self.fixed_values(h)
        j = np.floor(h / self.dx).astype(np.int64)
        j = np.minimum(j, self._ladder_max.shape[0])
        has = j >= 1
        if np.any(has):
            out[has] = np.maximum(out[has], self._ladder_max[j[has] - 1])
        return out

    def sup_value(self, radius: float) -> float:
        return float(self.sup_values(np.array([radius]))[0])

    def values(self, radii: ArrayLike, variant: Variant) -> np.ndarray:
        if variant is Variant.SUP:
            return self.sup_values(radii)
        return self.fixed_values(radii)


def windowed_norm(f: GridFunction, spec: WindowSpec) -> float:
    """Pointwise windowed norm of a function under the given spec.

    At delta = 0 this is |f(x)|, using the exact evaluator when present.
    """
    if spec.delta == 0.0:
        return float(abs(f.value_at(spec.x)))
    profile = WindowProfile(f.samples, spec.x, spec.p)
    if spec.variant is Variant.SUP:
        return profile.sup_value(spec.delta)
    return profile.fixed_value(spec.delta)


def pointwise_difference(f: GridFunction, x: float, t: ArrayLike) -> ArrayLike:
    """The local difference f(x+t) - f(x)."""
    return f.value_at(np.asarray(x, dtype=float) + np.asarray(t, dtype=float)) - f.value_at(x)


def difference_function(f: GridFunction, x: float) -> GridFunction:
    """The difference t -> f(x+t) - f(x) as a grid function in t."""
    grid = uniform_grid(f.n_samples)
    if f.evaluator is not None:
        fx = float(f.evaluator(np.asarray(x, dtype=float)))
        ev = f.evaluator
        samples = np.asarray(ev(x + grid), dtype=float) - fx
        return GridFunction(samples=samples, evaluator=lambda t: ev(np.asarray(t) + x) - fx)
    fx = float(f.interpolate(x))
    return GridFunction(samples=f.interpolate(x + grid) - fx)


def pointwise_modulus(f: GridFunction, x: float, delta: float, p: float,
                      variant: Variant = Variant.SUP) -> float:
    """Local modulus of continuity at x: windowed norm (centered at the
    origin) of the difference t -> f(x+t) - f(x)."""
    g = difference_function(f, x)
    return windowed_norm(g, WindowSpec(x=0.0, delta=delta, p=p, variant=variant))


@dataclass(frozen=True)
class ModulusTable:
    """Local modulus values on the radius ladder delta_k = pi/(k+1)."""

    n: int
    p: float
    variant: Variant
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.n + 1,):
            raise ValueError("need one value per ladder index 0..n")
        object.__setattr__(self, "values", vals)

    @property
    def radii(self) -> np.ndarray:
        return np.pi / (np.arange(self.n + 1) + 1.0)

    def average(self) -> float:
        return float(self.values.mean())

    def to_csv_rows(self):
        return [(k, float(r), float(v))
                for k, (r, v) in enumerate(zip(self.radii, self.values))]


def modulus_table(f: GridFunction, x: float, n: int, p: float,
                  variant: Variant = Variant.SUP) -> ModulusTable:
    """Local modulus at x on the ladder pi/(k+1), k = 0..n, in one pass."""
    if n < 0:
        raise ValueError("table order must be nonnegative")
    g = difference_function(f, x)
    profile = WindowProfile(g.samples, 0.0, p)
    radii = np.pi / (np.arange(n + 1) + 1.0)
    return ModulusTable(n=n, p=p, variant=variant, values=profile.values(radii, variant))


def averaged_modulus(f: GridFunction, x: float, n: int, p: float,
                     variant: Variant = Variant.SUP) -> float:
    """Arithmetic mean of the local modulus over the radius ladder."""
    return modulus_table(f, x, n, p, variant).average()


class GlobalModulusProfile:
    """Shift-ladder machinery behind the global modulus of continuity.

    Holds the global norm of f(.+h) - f(.) for every grid-aligned shift h,
    with a running maximum; fractional shifts are evaluated on demand.
    """

    def __init__(self, f: GridFunction, p: float):
        self.f = f
        self.p = validate_exponent(p)
        n = f.n_samples
        self.dx = f.spacing
        norms = np.empty(n // 2)
        s = f.samples
        for j in range(1, n // 2 + 1):
            norms[j - 1] = grid_norm(np.roll(s, -j) - s, self.p)
        self._ladder_max = np.maximum.accumulate(norms)
        self._grid = uniform_grid(n)

    def _fractional(self, h: float) -> float:
        shifted = self.f.value_at(self._grid + h)
        return grid_norm(shifted - self.f.samples, self.p)

    def value(self, delta: float) -> float:
        if not 0.0 < delta <= np.pi:
            raise ValueError(f"shift bound must lie in (0, pi], got {delta}")
        j = min(int(np.floor(delta / self.dx)), self._ladder_max.shape[0])
        out = self._fractional(delta)
        if j >= 1:
            out = max(out, float(self._ladder_max[j - 1]))
        return out


def global_modulus(f: GridFunction, delta: float, p: float) -> float:
    """Modulus of continuity in the global norm: the largest norm of
    f(.+h) - f(.) over shifts 0 < h <= delta (grid ladder plus delta)."""
    return GlobalModulusProfile(f, p).value(delta)


def averaged_global_modulus(f: GridFunction, n: int, p: float) -> float:
    """Mean of the global modulus over the ladder pi/(k+1), k = 0..n."""
    if n < 0:
        raise ValueError("order must be nonnegative")
    profile = GlobalModulusProfile(f, p)
    return float(np.mean([profile.value(np.pi / (k + 1)) for k in range(n + 1)]))
