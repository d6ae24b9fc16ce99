"""Approximation solvers on the sample grid.

Three routes produce best (or near-best) trigonometric approximations of a
sampled function under a nonnegative weight:

* weighted least squares, with the normal matrix assembled from Fourier
  moments of the weight array (two FFTs per solve instead of an O(N d^2)
  matrix product);
* iteratively reweighted least squares (IRLS) for finite p != 2, with a
  halving smoothing schedule down to a fixed weight floor;
* a multi-point exchange iteration for discrete minimax, on either the full
  circular grid or a window of consecutive nodes.

The coefficient vector layout is [1, cos x, sin x, cos 2x, sin 2x, ...], so
leading sub-vectors correspond to lower degrees.
"""

from __future__ import annotations

import numpy as np

from .errors import SolverConvergenceError, WindowTooSmallError
from .fourier import TrigPolynomial
from .grid import uniform_grid

IRLS_EPS_FLOOR = 1e-9
IRLS_TOL = 1e-10
IRLS_MAX_ITER = 2500
EXCHANGE_SPREAD_TOL = 1e-8
EXCHANGE_MAX_ITER = 200


def vector_to_poly(c: np.ndarray, degree: int) -> TrigPolynomial:
    """Interleaved coefficient vector -> polynomial (a0 = 2 * c[0])."""
    a = c[1::2].copy() if degree else np.zeros(0)
    b = c[2::2].copy() if degree else np.zeros(0)
    return TrigPolynomial(degree=degree, a0=2.0 * float(c[0]), a=a, b=b)


def poly_to_vector(t: TrigPolynomial, degree: int) -> np.ndarray:
    """Polynomial -> interleaved vector, zero-padded to the given degree."""
    if degree < t.degree:
        raise ValueError("target degree too small")
    c = np.zeros(2 * degree + 1)
    c[0] = t.a0 / 2.0
    c[1:2 * t.degree + 1:2] = t.a
    c[2:2 * t.degree + 1:2] = t.b
    return c


def weight_moments(w: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Raw sums (sum w_j cos(k x_j), sum w_j sin(k x_j)) for k = 0..order on
    the uniform grid starting at -pi."""
    n = w.shape[0]
    if order > n // 2:
        raise ValueError(f"moment order {order} exceeds Nyquist {n // 2}")
    spec = np.fft.rfft(w)[:order + 1]
    signs = (-1.0) ** np.arange(order + 1)
    return signs * spec.real, -signs * spec.imag


def weighted_normal_system(w: np.ndarray, y: np.ndarray, degree: int):
    """Normal matrix, right-hand side, and weighted sum of squares of y for
    min_c sum w (y - basis c)^2 in the interleaved basis."""
    dim = 2 * degree + 1
    wc, ws = weight_moments(w, 2 * degree)
    yc, ys = weight_moments(w * y, degree)
    g = np.empty((dim, dim))
    g[0, 0] = wc[0]
    if degree:
        k = np.arange(1, degree + 1)
        ci = 2 * k - 1
        si = 2 * k
        g[0, ci] = wc[k]
        g[ci, 0] = wc[k]
        g[0, si] = ws[k]
        g[si, 0] = ws[k]
        diff = np.abs(k[:, None] - k[None, :])
        tot = k[:, None] + k[None, :]
        sgn = np.sign(k[:, None] - k[None, :])
        g[np.ix_(ci, ci)] = 0.5 * (wc[diff] + wc[tot])
        g[np.ix_(si, si)] = 0.5 * (wc[diff] - wc[tot])
        cs = 0.5 * (ws[tot] - sgn * ws[diff])
        g[np.ix_(ci, si)] = cs
        g[np.ix_(si, ci)] = cs.T
    rhs = np.empty(dim)
    rhs[0] = yc[0]
    if degree:
        rhs[2 * np.arange(1, degree + 1) - 1] = yc[1:]
        rhs[2 * np.arange(1, degree + 1)] = ys[1:]
    yy = float(np.sum(w * y * y))
    return g, rhs, yy


def solve_weighted_l2(w: np.ndarray, y: np.ndarray, degree: int,
                      ridge_rel: float = 0.0) -> np.ndarray:
    """Weighted least-squares coefficient vector.

    `ridge_rel` adds a diagonal shift relative to the matrix trace; it is
    also applied as a fallback when the normal matrix is singular (weights
    concentrated on too few nodes)."""
    g, rhs, _ = weighted_normal_system(w, y, degree)
    if ridge_rel > 0.0:
        g[np.diag_indices_from(g)] += ridge_rel * (np.trace(g) / g.shape[0] + 1e-300)
    try:
        return np.linalg.solve(g, rhs)
    except np.linalg.LinAlgError:
        ridge = 1e-12 * np.trace(g) / g.shape[0] + 1e-300
        g[np.diag_indices_from(g)] += ridge
        return np.linalg.solve(g, rhs)


def progressive_l2_errors(w: np.ndarray, y: np.ndarray, max_degree: int) -> np.ndarray:
    """Minimal weighted sums of squares for every degree 0..max_degree from
    one Cholesky factorization.

    With the degree-nested basis ordering, the best squared error at degree
    d is yy minus the partial sum of squares of the transformed right-hand
    side, so the returned array is nonincreasing by construction.
    """
    g, rhs, yy = weighted_normal_system(w, y, max_degree)
    ridge = 1e-12 * (np.trace(g) / g.shape[0] + 1.0)
    g[np.diag_indices_from(g)] += ridge
    chol = np.linalg.cholesky(g)
    z = np.linalg.solve(chol, rhs)
    partial = np.cumsum(z * z)
    errors = yy - partial[2 * np.arange(max_degree + 1)]
    errors = np.maximum(errors, 0.0)
    return np.minimum.accumulate(errors)


def irls_lp(w: np.ndarray, y: np.ndarray, degree: int, p: float, *,
            eps_floor: float = IRLS_EPS_FLOOR, tol: float = IRLS_TOL,
            max_iter: int = IRLS_MAX_ITER,
            init: np.ndarray | None = None) -> tuple[np.ndarray, float, int]:
    """Minimize (sum w |y - T|^p)^(1/p) over degree-`degree` polynomials by
    iteratively reweighted least squares.

    The reweighting exponent |r|^(p-2) is smoothed as max(|r|, eps)^(p-2),
    with eps halved each sweep until the floor; convergence requires the
    floor to be reached and the error change to fall under `tol` relative.
    Returns (coefficient vector, error, iterations); raises
    SolverConvergenceError when the iteration budget runs out.
    """
    n_grid = y.shape[0]
    support = w > 0
    c = solve_weighted_l2(w, y, degree) if init is None else np.asarray(init, dtype=float)
    damp = 0.5 if p > 2 else 1.0
    eps = max(eps_floor, 1e-2 * (1.0 + float(np.max(np.abs(y[support]), initial=0.0))))
    prev_err = np.inf
    for it in range(1, max_iter + 1):
        r = y - vector_to_poly(c, degree).values_on_grid(n_grid)
        err = float(np.sum(w * np.abs(r) ** p) ** (1.0 / p))
        at_floor = eps <= eps_floor * (1.0 + 1e-12)
        if at_floor and abs(err - prev_err) <= tol * (1.0 + err):
            return c, err, it
        prev_err = err
        wr = w * np.maximum(np.abs(r), eps) ** (p - 2.0)
        c_new = solve_weighted_l2(wr, y, degree)
        c = damp * c_new + (1.0 - damp) * c
        eps = max(eps_floor, eps / 2.0)
    raise SolverConvergenceError(
        f"IRLS did not settle within {max_iter} sweeps (p={p}, degree={degree})")


class _ResidualEvaluator:
    """Residual of a coefficient vector on the solver's node set."""

    def __init__(self, y: np.ndarray, nodes: np.ndarray, degree: int, circular: bool):
        self.y = y
        self.nodes = nodes
        self.degree = degree
        self.circular = circular and nodes.shape[0] >= 2 * (degree + 1)
        if not self.circular:
            k = np.arange(1, degree + 1)
            self.basis = np.empty((nodes.shape[0], 2 * degree + 1))
            self.basis[:, 0] = 1.0
            if degree:
                kx = np.outer(nodes, k)
                self.basis[:, 2 * k - 1] = np.cos(kx)
                self.basis[:, 2 * k] = np.sin(kx)

    def residual(self, c: np.ndarray) -> np.ndarray:
        if self.circular:
            return self.y - vector_to_poly(c, self.degree).values_on_grid(self.y.shape[0])
        return self.y - self.basis @ c

    def initial_coeffs(self) -> np.ndarray:
        if self.circular:
            # uniform-weight least squares is plain spectral truncation
            n = self.y.shape[0]
            spec = np.fft.rfft(self.y)[:self.degree + 1]
            signs = (-1.0) ** np.arange(self.degree + 1)
            c = np.empty(2 * self.degree + 1)
            c[0] = spec[0].real / n
            if self.degree:
                c[1::2] = (2.0 / n) * signs[1:] * spec[1:].real
                c[2::2] = -(2.0 / n) * signs[1:] * spec[1:].imag
            return c
        sol, *_ = np.linalg.lstsq(self.basis, self.y, rcond=None)
        return sol


def _local_extrema(r: np.ndarray, circular: bool) -> np.ndarray:
    n = r.shape[0]
    if circular:
        prev = np.roll(r, 1)
        nxt = np.roll(r, -1)
        mask = (r - prev) * (nxt - r) <= 0
        return np.nonzero(mask)[0]
    mask = np.zeros(n, dtype=bool)
    mask[0] = mask[-1] = True
    interior = (r[1:-1] - r[:-2]) * (r[2:] - r[1:-1]) <= 0
    mask[1:-1] = interior
    return np.nonzero(mask)[0]


def _alternating_reference(r: np.ndarray, idx: np.ndarray, target: int,
                           level: float | None = None,
                           old_ref: list[int] | None = None) -> list[int]:
    """Reduce extremum candidates to `target` alternating-sign points,
    keeping the largest magnitudes (the global maximum always survives).

    When the current levelled error is known, candidates below it are
    discarded and the old reference (where the residual sits exactly at the
    level with alternating signs) is merged in; this keeps the levelled
    error strictly ascending across exchanges.
    """
    if level is not None:
        keep = np.abs(r[idx]) >= level * (1.0 - 1e-12)
        idx = idx[keep]
    if old_ref:
        idx = np.unique(np.concatenate([idx, np.asarray(old_ref, dtype=np.int64)]))
    signs = np.where(r[idx] >= 0, 1, -1)
    groups: list[int] = []
    for i, s in zip(idx, signs):
        if groups and (r[groups[-1]] >= 0) == (s >= 0):
            if abs(r[i]) > abs(r[groups[-1]]):
                groups[-1] = int(i)
        else:
            groups.append(int(i))
    while len(groups) > target:
        mags = [abs(r[i]) for i in groups]
        if len(groups) - target == 1:
            drop = 0 if mags[0] <= mags[-1] else len(groups) - 1
            groups.pop(drop)
            continue
        weakest = int(np.argmin(mags))
        if weakest in (0, len(groups) - 1):
            groups.pop(weakest)
            continue
        left, right = groups[weakest - 1], groups[weakest + 1]
        keep = left if abs(r[left]) >= abs(r[right]) else right
        groups[weakest - 1:weakest + 2] = [keep]
    return groups


def _certified_gap(r: np.ndarray, circular: bool, dim: int) -> tuple[float, float]:
    """(max residual, lower bound on the attainable minimax error).

    The bound is the smallest magnitude over a set of `dim` alternating-sign
    residual extrema: no polynomial of the corresponding degree can do
    better on these nodes.  Returns bound 0 when no full alternating set
    exists.
    """
    emax = float(np.max(np.abs(r)))
    ref = _alternating_reference(r, _local_extrema(r, circular), dim)
    if len(ref) < dim:
        return emax, 0.0
    return emax, float(min(abs(r[i]) for i in ref))


def exchange_minimax(y: np.ndarray, nodes: np.ndarray, degree: int, *,
                     circular: bool,
                     spread_tol: float = EXCHANGE_SPREAD_TOL,
                     max_iter: int = EXCHANGE_MAX_ITER) -> tuple[np.ndarray, float, int]:
    """Discrete minimax approximation on the given nodes by multi-point
    exchange.

    Starts from the alternating extrema of the least-squares residual and
    exchanges references until the largest residual meets the certified
    equioscillation level to `spread_tol` relative.  Returns (coefficient
    vector, max residual, iterations).  Raises SolverConvergenceError when
    the levelled error stops ascending (degenerate tie structure) or the
    iteration budget runs out; callers may fall back to lawson_minimax.
    """
    n_nodes = nodes.shape[0]
    dim = 2 * degree + 2
    if n_nodes < dim:
        raise WindowTooSmallError(
            f"{n_nodes} nodes cannot determine a degree-{degree} minimax ({dim} needed)")
    ev = _ResidualEvaluator(y, nodes, degree, circular)
    c = ev.initial_coeffs()
    r = ev.residual(c)
    emax = float(np.max(np.abs(r)))
    if emax <= 1e-12 * (1.0 + float(np.max(np.abs(y)))):
        return c, emax, 0  # already a polynomial of this degree, numerically
    emax, bound = _certified_gap(r, circular, dim)
    if emax - bound <= spread_tol * (1.0 + emax):
        return c, emax, 0  # least-squares solution already levelled
    ref = _alternating_reference(r, _local_extrema(r, circular), dim)
    if len(ref) < dim:
        ref = [int(i) for i in np.linspace(0, n_nodes - 1, dim).round()]
        ref = sorted(set(ref))
        while len(ref) < dim:  # duplicates from rounding on tiny node sets
            ref.append(max(ref) + 1)
    k = np.arange(1, degree + 1)
    level = 0.0
    stagnant = 0
    for it in range(1, max_iter + 1):
        pts = nodes[ref]
        a = np.empty((len(ref), dim))
        a[:, 0] = 1.0
        if degree:
            kx = np.outer(pts, k)
            a[:, 2 * k - 1] = np.cos(kx)
            a[:, 2 * k] = np.sin(kx)
        srange = np.where(r[ref] >= 0, 1.0, -1.0)
        a[:, -1] = srange
        try:
            sol = np.linalg.solve(a, y[ref])
        except np.linalg.LinAlgError:
            sol, *_ = np.linalg.lstsq(a, y[ref], rcond=None)
        c, h = sol[:-1], sol[-1]
        r = ev.residual(c)
        emax, bound = _certified_gap(r, circular, dim)
        if emax - max(bound, abs(h)) <= spread_tol * (1.0 + emax):
            return c, emax, it
        new_ref = _alternating_reference(r, _local_extrema(r, circular), dim,
                                         level=abs(h), old_ref=ref)
        stagnant = stagnant + 1 if abs(h) <= level * (1.0 + 1e-14) else 0
        if len(new_ref) < dim or stagnant >= 3:
            raise SolverConvergenceError(
                f"exchange stalled at iteration {it} (degree={degree}, spread="
                f"{emax - abs(h):.3e})")
        level = max(level, abs(h))
        ref = new_ref
    raise SolverConvergenceError(
        f"exchange did not level within {max_iter} iterations (degree={degree})")


LAWSON_MAX_ITER = 4000


def lawson_minimax(y: np.ndarray, degree: int, weights: np.ndarray,
                   sub_idx: np.ndarray, circular: bool, *,
                   spread_tol: float = EXCHANGE_SPREAD_TOL,
                   accel: float = 1.5,
                   max_iter: int = LAWSON_MAX_ITER) -> tuple[np.ndarray, float, int]:
    """Minimax by multiplicatively reweighted least squares.

    Robust against the tie degeneracies that stall reference exchanges; used
    as the fallback route.  `weights` is the starting quadrature weight
    array over the full grid (zero off the node support); `sub_idx` lists
    the support nodes in evaluation order.  Stops on the same certified
    equioscillation criterion as the exchange.
    """
    dim = 2 * degree + 2
    n_grid = y.shape[0]
    w = weights.copy()
    for it in range(max_iter):
        # the relative floor and ridge keep the weighted systems solvable
        # once the weights concentrate near the active set
        c = solve_weighted_l2(w, y, degree, ridge_rel=1e-14)
        r_full = y - vector_to_poly(c, degree).values_on_grid(n_grid)
        r = r_full[sub_idx]
        emax, bound = _certified_gap(r, circular, dim)
        if emax - bound <= spread_tol * (1.0 + emax):
            return c, emax, it
        w = w * np.abs(r_full) ** accel
        total = w[sub_idx].sum()
        if not np.isfinite(total) or total <= 0.0:
            break
        w *= (2.0 * np.pi) / total
        w[sub_idx] = np.maximum(w[sub_idx], 1e-15 * float(w[sub_idx].max()))
    raise SolverConvergenceError(
        f"reweighting did not level within {max_iter} sweeps (degree={degree})")


def uniform_quadrature_weights(n: int) -> np.ndarray:
    """Trapezoid weights over the full period (uniform by periodicity)."""
    return np.full(n, 2.0 * np.pi / n)


def window_quadrature_weights(n: int, x: float, delta: float) -> tuple[np.ndarray, np.ndarray]:
    """Trapezoid weights supported on the nodes inside [x-delta, x+delta].

    Returns (weights over the full grid with periodic wrap, node indices of
    the window in left-to-right order).  Fractional end cells are dropped;
    the two boundary nodes carry half weight.
    """
    dx = 2.0 * np.pi / n
    left = int(np.ceil((x - delta + np.pi) / dx))
    right = int(np.floor((x + delta + np.pi) / dx))
    if right < left:
        raise WindowTooSmallError(f"window radius {delta} holds no grid nodes")
    count = right - left + 1
    idx = np.arange(left, right + 1)
    w = np.zeros(n)
    if count >= n:  # window covers the whole circle
        w[:] = dx
        return w, np.mod(idx[:n], n)
    wrapped = np.mod(idx, n)
    w[wrapped] = dx
    w[wrapped[0]] *= 0.5
    w[wrapped[-1]] *= 0.5
    return w, wrapped
