"""Uniform-grid representation of 2*pi-periodic real functions."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

TWO_PI = 2.0 * np.pi

ArrayLike = Union[float, np.ndarray]


def uniform_grid(n: int) -> np.ndarray:
    """Nodes x_j = -pi + 2*pi*j/n for j = 0..n-1."""
    return -np.pi + TWO_PI * np.arange(n) / n


def wrap_angle(x: ArrayLike) -> ArrayLike:
    """Reduce to the half-open period (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(x, dtype=float), TWO_PI)


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridFunction:
    """A 2*pi-periodic function given by uniform samples.

    Samples live on x_j = -pi + 2*pi*j/N.  The sample count must be a
    power of two and at least 16.  An optional exact evaluator takes
    precedence over linear interpolation for off-grid points; when it is
    present the samples are required to coincide with it on the nodes.
    """

    samples: np.ndarray
    evaluator: Optional[Callable[[np.ndarray], np.ndarray]] = None
    label: Optional[str] = None
    _key: str = field(default="", repr=False, compare=False)

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.samples, dtype=float))
        if arr.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        n = arr.shape[0]
        if n < 16 or not _is_power_of_two(n):
            raise ValueError(f"sample count must be a power of two >= 16, got {n}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("samples must be finite")
        object.__setattr__(self, "samples", arr)
        if self.label is not None:
            key = f"{self.label}:{n}"
        else:
            key = hashlib.sha1(arr.tobytes()).hexdigest()[:16]
        object.__setattr__(self, "_key", key)

    @classmethod
    def from_evaluator(cls, fn: Callable[[np.ndarray], np.ndarray], n: int,
                       label: Optional[str] = None) -> "GridFunction":
        samples = np.asarray(fn(uniform_grid(n)), dtype=float)
        return cls(samples=samples, evaluator=fn, label=label)

    @classmethod
    def from_samples(cls, samples: np.ndarray, label: Optional[str] = None) -> "GridFunction":
        return cls(samples=np.asarray(samples, dtype=float), label=label)

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def spacing(self) -> float:
        return TWO_PI / self.n_samples

    @property
    def grid(self) -> np.ndarray:
        return uniform_grid(self.n_samples)

    @property
    def cache_key(self) -> str:
        return self._key

    def value_at(self, x: ArrayLike) -> ArrayLike:
        """Point evaluation: exact when an evaluator exists, else periodic
        linear interpolation of the samples."""
        if self.evaluator is not None:
            return self.evaluator(np.asarray(x, dtype=float))
        return self.interpolate(x)

    def interpolate(self, x: ArrayLike) -> ArrayLike:
        """Periodic linear interpolation of the samples."""
        xs = np.asarray(x, dtype=float)
        n = self.n_samples
        pos = (xs + np.pi) / self.spacing
        j = np.floor(pos).astype(np.int64)
        frac = pos - j
        j = np.mod(j, n)
        jn = np.mod(j + 1, n)
        out = (1.0 - frac) * self.samples[j] + frac * self.samples[jn]
        if np.isscalar(x) or xs.ndim == 0:
            return float(out)
        return out

    def extended_samples(self, copies: int = 3) -> np.ndarray:
        """Samples tiled over `copies` periods, starting at -copies/2 * 2*pi."""
        return np.tile(self.samples, copies)


def grid_norm(values: np.ndarray, p: float) -> float:
    """Global norm on the sample grid: p-th power mean scaled by the period
    for finite p, and the maximum for p = inf."""
    v = np.abs(np.asarray(values, dtype=float))
    if np.isinf(p):
        return float(v.max())
    n = v.shape[0]
    return float(((TWO_PI / n) * np.sum(v ** p)) ** (1.0 / p))


def validate_exponent(p: float) -> float:
    """Normalize a Lebesgue exponent: a finite real >= 1 or inf."""
    p = float(p)
    if np.isnan(p) or p < 1.0:
        raise ValueError(f"exponent must satisfy p >= 1 (or inf), got {p}")
    return p
