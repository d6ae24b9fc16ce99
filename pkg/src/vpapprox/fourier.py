"""Trigonometric Fourier analysis: coefficients, partial sums, Dirichlet and
de la Vallee-Poussin kernels, and the means built from averaged partial sums.

Coefficient convention: f ~ a0/2 + sum_k (a_k cos kx + b_k sin kx), with
a_k = (1/pi) * integral of f(t) cos(kt) over one period (trapezoid rule on
the sample grid, which is exact for band-limited inputs).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AliasingError
from .grid import TWO_PI, ArrayLike, GridFunction, uniform_grid

# Below this, sin(t/2) is too close to 0 for the closed kernel form.
KERNEL_SINGULARITY_EPS = 1e-8


@dataclass(frozen=True)
class TrigPolynomial:
    """Element of H_n: a0/2 + sum_{k=1..n} (a_k cos kx + b_k sin kx)."""

    degree: int
    a0: float
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if a.shape != (self.degree,) or b.shape != (self.degree,):
            raise ValueError("coefficient arrays must have length equal to the degree")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __call__(self, x: ArrayLike) -> ArrayLike:
        xs = np.asarray(x, dtype=float)
        scalar = xs.ndim == 0
        xs = np.atleast_1d(xs)
        out = np.full(xs.shape, self.a0 / 2.0)
        if self.degree:
            k = np.arange(1, self.degree + 1)
            kx = np.outer(xs, k)
            out = out + np.cos(kx) @ self.a + np.sin(kx) @ self.b
        return float(out[0]) if scalar else out

    def values_on_grid(self, n: int) -> np.ndarray:
        """Synthesize the polynomial on the uniform n-point grid via FFT."""
        if n < 2 * (self.degree + 1):
            raise AliasingError(f"grid of {n} points cannot carry degree {self.degree}")
        spec = np.zeros(n // 2 + 1, dtype=complex)
        spec[0] = n * self.a0 / 2.0
        if self.degree:
            k = np.arange(1, self.degree + 1)
            spec[1:self.degree + 1] = (n / 2.0) * ((-1.0) ** k) * (self.a - 1j * self.b)
        return np.fft.irfft(spec, n=n)

    def as_grid_function(self, n: int) -> GridFunction:
        return GridFunction(samples=self.values_on_grid(n), evaluator=self.__call__)


@dataclass(frozen=True)
class FourierCoefficients:
    """Coefficients a_0..a_kmax, b_1..b_kmax of a sampled function."""

    kmax: int
    a0: float
    a: np.ndarray
    b: np.ndarray

    def truncated(self, k: int) -> TrigPolynomial:
        if not 0 <= k <= self.kmax:
            raise ValueError(f"truncation order {k} outside [0, {self.kmax}]")
        return TrigPolynomial(degree=k, a0=self.a0, a=self.a[:k].copy(), b=self.b[:k].copy())


def fourier_coefficients(f: GridFunction, kmax: int) -> FourierCoefficients:
    """Trapezoid-rule Fourier coefficients through order kmax.

    Requires n_samples >= 4*kmax so that the trapezoid sums carry no
    aliasing for the band-limited part of the input.
    """
    if kmax < 0:
        raise ValueError("kmax must be nonnegative")
    n = f.n_samples
    if kmax > 0 and n < 4 * kmax:
        raise AliasingError(f"need at least {4 * kmax} samples for kmax={kmax}, have {n}")
    spec = np.fft.rfft(f.samples)
    # Grid starts at -pi, so the DFT picks up a phase of (-1)^k per mode.
    signs = (-1.0) ** np.arange(kmax + 1)
    a_all = (2.0 / n) * signs * spec[:kmax + 1].real
    b_all = -(2.0 / n) * signs * spec[:kmax + 1].imag
    return FourierCoefficients(kmax=kmax, a0=float(a_all[0]), a=a_all[1:].copy(), b=b_all[1:].copy())


def partial_sum(c: FourierCoefficients, k: int) -> TrigPolynomial:
    """The k-th partial sum of the series, i.e. truncation to degree k."""
    return c.truncated(k)


def dirichlet_kernel(k: int, t: ArrayLike) -> ArrayLike:
    """Dirichlet kernel sin((2k+1)t/2) / (2 sin(t/2)).

    Near the singularities of the closed form the equivalent cosine sum
    1/2 + sum_{j<=k} cos(jt) is used, so the function is total.
    """
    if k < 0:
        raise ValueError("kernel order must be nonnegative")
    ts = np.asarray(t, dtype=float)
    scalar = ts.ndim == 0
    ts = np.atleast_1d(ts)
    half = ts / 2.0
    s = np.sin(half)
    out = np.empty_like(ts)
    regular = np.abs(s) >= KERNEL_SINGULARITY_EPS
    out[regular] = np.sin((2 * k + 1) * half[regular]) / (2.0 * s[regular])
    if not np.all(regular):
        sing = ~regular
        acc = np.full(sing.sum(), 0.5)
        for j in range(1, k + 1):
            acc += np.cos(j * ts[sing])
        out[sing] = acc
    return float(out[0]) if scalar else out


def vp_kernel(n: int, m: int, t: ArrayLike) -> ArrayLike:
    """De la Vallee-Poussin kernel: the mean of D_{n-m}..D_n."""
    _validate_mean_orders(n, m)
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    acc = np.zeros_like(ts)
    for k in range(n - m, n + 1):
        acc += dirichlet_kernel(k, ts)
    acc /= (m + 1)
    return float(acc[0]) if np.asarray(t).ndim == 0 else acc


def vp_mean_weights(n: int, m: int) -> np.ndarray:
    """Coefficient multipliers of the (n, m) mean for orders 1..n: one for
    k <= n-m, then a linear taper (n+1-k)/(m+1)."""
    _validate_mean_orders(n, m)
    k = np.arange(1, n + 1)
    return np.where(k <= n - m, 1.0, (n + 1.0 - k) / (m + 1.0))


def vp_mean(c: FourierCoefficients, n: int, m: int) -> TrigPolynomial:
    """Average of the partial sums S_{n-m}..S_n, in coefficient form."""
    _validate_mean_orders(n, m)
    if n > c.kmax:
        raise ValueError(f"mean of order {n} needs kmax >= {n}, have {c.kmax}")
    w = vp_mean_weights(n, m)
    return TrigPolynomial(degree=n, a0=c.a0, a=w * c.a[:n], b=w * c.b[:n])


def vp_mean_by_kernel(f: GridFunction, n: int, m: int, x: float) -> float:
    """Kernel-quadrature route to the same mean: (1/pi) * trapezoid sum of
    f(x+t) V_{n,m}(t) over one period.  Serves as an independent check of
    the coefficient route."""
    _validate_mean_orders(n, m)
    t = uniform_grid(f.n_samples)
    vals = f.value_at(x + t)
    kern = vp_kernel(n, m, t)
    return float((2.0 / f.n_samples) * np.sum(vals * kern))


def _validate_mean_orders(n: int, m: int) -> None:
    if not 0 <= m <= n:
        raise ValueError(f"orders must satisfy 0 <= m <= n, got n={n}, m={m}")
