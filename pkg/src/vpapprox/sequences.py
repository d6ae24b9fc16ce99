"""Index-sequence constructions used by the telescoping arguments: the
halving decreasing sequence, the adaptive increasing sequence with its
threshold indices, and the scaled difference of consecutive means."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .approx import averaged_error
from .fourier import FourierCoefficients, vp_mean
from .grid import GridFunction
from .windows import Variant


@dataclass(frozen=True)
class DecreasingIndexSequence:
    """m = m_0 > m_1 > ... > m_t = 1 with m_s = m_{s-1} - floor(m_{s-1}/2)."""

    m: int
    values: tuple[int, ...]
    t: int

    def check_invariants(self) -> dict[str, bool]:
        v = self.values
        checks = {
            "starts_at_m": v[0] == self.m,
            "ends_at_one": v[-1] == 1,
            "strictly_decreasing": all(a > b for a, b in zip(v, v[1:])),
            "recurrence": all(v[s] == v[s - 1] - v[s - 1] // 2 for s in range(1, len(v))),
            "at_least_half": all(2 * v[s] >= v[s - 1] for s in range(1, len(v))),
            "step_sandwich": all(
                v[s - 1] - v[s] <= v[s] <= 3 * (v[s] - v[s + 1])
                for s in range(1, len(v) - 1)
            ),
        }
        return checks

    def to_json_dict(self) -> dict:
        return {"kind": "decreasing", "m": self.m, "t": self.t,
                "values": list(self.values),
                "invariants": self.check_invariants()}


def decreasing_index_sequence(m: int) -> DecreasingIndexSequence:
    """Halve (rounding up) from m down to 1.  Requires m >= 2."""
    if m < 2:
        raise ValueError(f"the construction needs m >= 2, got {m}")
    values = [m]
    while values[-1] > 1:
        prev = values[-1]
        values.append(prev - prev // 2)
    seq = DecreasingIndexSequence(m=m, values=tuple(values), t=len(values) - 1)
    bad = [k for k, ok in seq.check_invariants().items() if not ok]
    assert not bad, f"sequence invariants violated: {bad}"
    return seq


@dataclass(frozen=True)
class MeanDifference:
    """(m+1) times the gap between the means of orders (n+m+1, m) and (n, m)."""

    n: int
    m: int
    x: float
    value: float


def mean_difference(c: FourierCoefficients, n: int, m: int, x: float) -> MeanDifference:
    """Scaled difference of consecutive de la Vallee-Poussin means at x."""
    if not 0 <= m <= n:
        raise ValueError(f"orders must satisfy 0 <= m <= n, got n={n}, m={m}")
    if n + m + 1 > c.kmax:
        raise ValueError(f"need coefficients through {n + m + 1}, have {c.kmax}")
    upper = vp_mean(c, n + m + 1, m)
    lower = vp_mean(c, n, m)
    return MeanDifference(n=n, m=m, x=x, value=float((m + 1) * (upper(x) - lower(x))))


@dataclass(frozen=True)
class IncreasingIndexSequence:
    """n = n_0 < ... < n_t with halving thresholds nu_0..nu_{t-1}.

    diagnostics records, per step, the chosen threshold and how the
    all-indices halving condition compares with the single-index reading.
    """

    n: int
    m: int
    values: tuple[int, ...]
    thresholds: tuple[int, ...]
    t: int
    diagnostics: tuple[dict, ...] = field(default=(), compare=False)

    def check_invariants(self) -> dict[str, bool]:
        v = self.values
        return {
            "starts_at_n": v[0] == self.n,
            "strictly_increasing": all(a < b for a, b in zip(v, v[1:])),
            "final_between_2n_and_2n_plus_m": 2 * self.n <= v[-1] <= 2 * self.n + self.m,
            "gaps_at_least_m_plus_1": all(b - a >= self.m + 1 for a, b in zip(v, v[1:])),
        }

    def to_json_dict(self) -> dict:
        return {"kind": "increasing", "n": self.n, "m": self.m, "t": self.t,
                "values": list(self.values), "thresholds": list(self.thresholds),
                "diagnostics": list(self.diagnostics),
                "invariants": self.check_invariants()}


def increasing_index_sequence(f: GridFunction, x: float, n: int, m: int, p: float,
                              *, variant: Variant = Variant.SUP,
                              halving_rel_tol: float = 1e-9) -> IncreasingIndexSequence:
    """Adaptive index refinement driven by halving of the averaged windowed
    errors.

    At each step the threshold nu_s is the smallest index >= 1 such that
    F(n_s - m + nu_s, nu) <= F(n_s - m, nu) / 2 for every nu in 0..n, and
    the next index follows the three-way rule: n_s + m + 1 when nu_s <= m,
    n_s + nu_s in the middle band, and 2n + m when nu_s reaches the cap (or
    no admissible threshold exists).  Stops once the index reaches 2n.
    """
    if not 0 < m <= n:
        raise ValueError(f"need 0 < m <= n, got n={n}, m={m}")

    def favg(first: int, second: int) -> float:
        return averaged_error(f, first, second, x, p, variant)

    def halves_for_all(base: int, step: int) -> bool:
        for nu in range(n + 1):
            ref = favg(base, nu)
            if favg(base + step, nu) > 0.5 * ref + halving_rel_tol * (1.0 + ref):
                return False
        return True

    values = [n]
    thresholds: list[int] = []
    diagnostics: list[dict] = []
    max_steps = 4 * n
    while values[-1] < 2 * n:
        if len(values) > max_steps:
            raise AssertionError("index refinement failed to terminate")
        ns = values[-1]
        base = ns - m
        cap = 2 * n + m - ns
        nu_s = None
        for candidate in range(1, cap + 1):
            if halves_for_all(base, candidate):
                nu_s = candidate
                break
        diagnostics.append(_step_diagnostics(favg, base, n, nu_s, cap, halving_rel_tol))
        if nu_s is None or nu_s >= cap:
            nxt = 2 * n + m
            thresholds.append(cap if nu_s is None else nu_s)
        elif nu_s <= m:
            nxt = ns + m + 1
            thresholds.append(nu_s)
        else:
            nxt = ns + nu_s
            thresholds.append(nu_s)
        values.append(nxt)
    seq = IncreasingIndexSequence(n=n, m=m, values=tuple(values),
                                  thresholds=tuple(thresholds), t=len(values) - 1,
                                  diagnostics=tuple(diagnostics))
    bad = [k for k, ok in seq.check_invariants().items() if not ok]
    assert not bad, f"sequence invariants violated: {bad}"
    return seq


def _step_diagnostics(favg, base: int, n: int, nu_all: Optional[int], cap: int,
                      tol: float) -> dict:
    """Compare the all-indices halving threshold with the single-index one.

    single_nu is the smallest index whose own averaged error halves;
    largest_failing_nu is the largest nu at which the all-indices condition
    would fail when that single index is used instead.
    """
    single_nu = None
    for candidate in range(1, cap + 1):
        ref = favg(base, candidate)
        if favg(base + candidate, candidate) <= 0.5 * ref + tol * (1.0 + ref):
            single_nu = candidate
            break
    largest_failing = -1
    if single_nu is not None:
        for nu in range(n, -1, -1):
            ref = favg(base, nu)
            if favg(base + single_nu, nu) > 0.5 * ref + tol * (1.0 + ref):
                largest_failing = nu
                break
    return {"nu_all_indices": nu_all, "nu_single_index": single_nu,
            "largest_failing_nu_under_single": largest_failing}
