"""The built-in function corpus: seven 2*pi-periodic test functions spanning
smoothness classes from analytic to jump discontinuous."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable, Dict, Tuple

import numpy as np

from .grid import GridFunction, wrap_angle


@dataclass(frozen=True)
class CorpusFunction:
    """A named corpus member with an exact periodic evaluator.

    `jumps` lists the discontinuity abscissas in (-pi, pi]; at a jump the
    evaluator takes the one-sided value from the left-closed convention, so
    a separation between the mean and the function value survives there.
    """

    name: str
    evaluator: Callable[[np.ndarray], np.ndarray]
    smoothness: str
    jumps: Tuple[float, ...] = ()
    _grids: Dict[int, GridFunction] = field(default_factory=dict, repr=False, compare=False)

    @property
    def is_continuous(self) -> bool:
        return not self.jumps

    def materialize(self, n: int) -> GridFunction:
        with _corpus_lock:
            hit = self._grids.get(n)
            if hit is None:
                hit = GridFunction.from_evaluator(self.evaluator, n, label=f"corpus:{self.name}")
                self._grids[n] = hit
            return hit

    def min_jump_distance(self, x: float) -> float:
        if not self.jumps:
            return np.inf
        return min(abs(float(wrap_angle(x - j))) for j in self.jumps)


_corpus_lock = threading.Lock()


def _poly5(x):
    x = np.asarray(x, dtype=float)
    return (0.7 - 1.1 * np.cos(x) + 0.8 * np.sin(x) + 0.45 * np.cos(2 * x)
            - 0.35 * np.sin(3 * x) + 0.2 * np.cos(4 * x) + 0.12 * np.sin(5 * x))


def _abs_x(x):
    return np.abs(wrap_angle(x))


def _sawtooth(x):
    return wrap_angle(x)


_WEIER_J = np.arange(9)


def _weierstrass(x):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.sum(2.0 ** (-_WEIER_J / 2.0) * np.cos(np.outer(x, 2 ** _WEIER_J)), axis=1)
    return out if out.shape != (1,) else out.reshape(())


def _exp_cos(x):
    return np.exp(np.cos(np.asarray(x, dtype=float)))


def _abs_sin_3_2(x):
    return np.abs(np.sin(np.asarray(x, dtype=float))) ** 1.5


def _step(x):
    w = wrap_angle(x)
    return np.where(w <= 1.0, 1.0, -1.0)


DEFAULT_CORPUS: Dict[str, CorpusFunction] = {
    fn.name: fn
    for fn in (
        CorpusFunction("poly5", _poly5, "polynomial"),
        CorpusFunction("abs_x", _abs_x, "lipschitz"),
        CorpusFunction("sawtooth", _sawtooth, "bounded-variation-with-jump",
                       jumps=(np.pi,)),
        CorpusFunction("weier", _weierstrass, "hoelder(0.5)"),
        CorpusFunction("exp_cos", _exp_cos, "analytic"),
        CorpusFunction("abs_sin_3_2", _abs_sin_3_2, "lipschitz"),
        CorpusFunction("step", _step, "bounded-variation-with-jump",
                       jumps=(1.0, np.pi)),
    )
}

POLYNOMIAL_DEGREES = {"poly5": 5, "weier": 256}


def corpus_members(names) -> list[CorpusFunction]:
    """Resolve a name list (or the string "all") against the registry."""
    if names == "all" or names == ["all"]:
        return list(DEFAULT_CORPUS.values())
    members = []
    for name in names:
        if name not in DEFAULT_CORPUS:
            raise KeyError(f"unknown corpus function {name!r}; "
                           f"known: {', '.join(DEFAULT_CORPUS)}")
        members.append(DEFAULT_CORPUS[name])
    return members
