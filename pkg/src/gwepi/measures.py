"""Concurrence and Tsallis-q entanglement, the tangle-to-Tsallis map f_q,
and closed-form values for reductions of GW states."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from gwepi.states import DensityMatrix, GWState, SparseState, StateError, eigenvalues
from gwepi.states import reduced_density

Q_LOW = (5.0 - math.sqrt(13.0)) / 2.0
Q_HIGH = (5.0 + math.sqrt(13.0)) / 2.0
# slack so that 6-decimal renderings of the endpoints are accepted
RANGE_SLACK = 1e-6
Q_ONE_BRANCH = 1e-6
X_CLAMP = 1e-12


class RangeError(ValueError):
    """q outside the window where the requested statement is established."""


def in_fq_window(q: float) -> bool:
    return Q_LOW - RANGE_SLACK <= q <= Q_HIGH + RANGE_SLACK


def in_polygon_range(q: float) -> bool:
    return (Q_LOW - RANGE_SLACK <= q <= 2.0 + RANGE_SLACK) or (
        3.0 - RANGE_SLACK <= q <= Q_HIGH + RANGE_SLACK
    )


def polygon_q_grid(points: int = 25) -> np.ndarray:
    """``points`` values spread over [Q_LOW, 2] and [3, Q_HIGH] (first interval gets the odd one)."""
    if points < 2:
        raise ValueError("need at least 2 grid points")
    lo = (points + 1) // 2
    return np.concatenate([np.linspace(Q_LOW, 2.0, lo), np.linspace(3.0, Q_HIGH, points - lo)])


@dataclass(frozen=True)
class MeasureSpec:
    """Which pure-state measure a convex roof is built from.

    ``strict`` enforces the window where f_q describes GW reductions;
    ``exploratory`` lifts it.
    """

    mode: str = "concurrence"
    q: float = 2.0
    strict: bool = True
    exploratory: bool = False

    def __post_init__(self):
        if self.mode not in ("concurrence", "tsallis"):
            raise ValueError(f"unknown measure mode {self.mode!r}")
        if self.q <= 0:
            raise RangeError(f"q must be positive, got {self.q}")
        if self.mode == "tsallis" and self.strict and not self.exploratory:
            if not in_fq_window(self.q):
                raise RangeError(f"q={self.q} outside [{Q_LOW:.6f}, {Q_HIGH:.6f}]")

    @property
    def range_extension(self) -> bool:
        """True for q < 1, where the Tsallis entropy is used beyond its usual definition."""
        return self.mode == "tsallis" and self.q < 1.0

    def pure_value(self, spectrum: np.ndarray) -> np.ndarray:
        """Measure of pure states given their reduced spectra (last axis)."""
        spectrum = np.asarray(spectrum, dtype=float)
        if self.mode == "concurrence":
            purity = np.sum(spectrum**2, axis=-1)
            return np.sqrt(np.maximum(2.0 * (1.0 - purity), 0.0))
        return tsallis_from_spectrum(spectrum, self.q)


@dataclass(frozen=True)
class Bipartition:
    left: frozenset
    right: frozenset

    def __init__(self, left: Iterable[int], right: Iterable[int]):
        left = frozenset(int(x) for x in left)
        right = frozenset(int(x) for x in right)
        if not left or not right:
            raise ValueError("both sides of a cut must be nonempty")
        if left & right:
            raise ValueError(f"cut sides overlap: {sorted(left & right)}")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    @classmethod
    def split(cls, parties: Iterable[int], left: Iterable[int]) -> "Bipartition":
        parties = set(parties)
        left = set(left)
        return cls(left, parties - left)

    def swapped(self) -> "Bipartition":
        return Bipartition(self.right, self.left)

    @property
    def parties(self) -> frozenset:
        return self.left | self.right

    def validate_for(self, n_parties: int) -> None:
        if self.parties != frozenset(range(n_parties)):
            raise ValueError(
                f"cut {sorted(self.left)}|{sorted(self.right)} does not cover parties 0..{n_parties - 1}"
            )


def tsallis_from_spectrum(spectrum, q: float):
    """Tsallis-q entropy of probability vectors along the last axis."""
    p = np.clip(np.asarray(spectrum, dtype=float), 0.0, 1.0)
    if abs(q - 1.0) < Q_ONE_BRANCH:
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(p > 0, -p * np.log(np.where(p > 0, p, 1.0)), 0.0)
        return np.sum(terms, axis=-1)
    with np.errstate(divide="ignore"):
        powered = np.where(p > 0, p ** q, 0.0)
    return (1.0 - np.sum(powered, axis=-1)) / (q - 1.0)


def tsallis_entropy(rho: DensityMatrix, q: float) -> float:
    if q <= 0:
        raise RangeError(f"q must be positive, got {q}")
    return float(tsallis_from_spectrum(eigenvalues(rho), q))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    return tsallis_entropy(rho, 1.0)


def f_q(x, q: float):
    """Tsallis-q entanglement of a rank-two pure state with tangle ``x``.

    Accepts scalars or arrays; inputs within 1e-12 outside [0, 1] are clamped.
    """
    if q <= 0:
        raise RangeError(f"q must be positive, got {q}")
    if isinstance(x, (float, int)):
        return _f_q_scalar(float(x), float(q))
    xa = np.asarray(x, dtype=float)
    if np.any(xa < -X_CLAMP) or np.any(xa > 1.0 + X_CLAMP) or np.any(np.isnan(xa)):
        raise ValueError(f"tangle outside [0, 1]: {x!r}")
    xa = np.clip(xa, 0.0, 1.0)
    root = np.sqrt(1.0 - xa)
    hi = 0.5 * (1.0 + root)
    lo = 0.5 * (1.0 - root)
    if abs(q - 1.0) < Q_ONE_BRANCH:
        with np.errstate(divide="ignore", invalid="ignore"):
            out = -hi * np.log(hi) - np.where(lo > 0, lo * np.log(np.where(lo > 0, lo, 1.0)), 0.0)
    else:
        out = (hi**q + lo**q - 1.0) / (1.0 - q)
    out = np.where(xa == 0.0, 0.0, out)
    return float(out) if out.ndim == 0 else out


def _f_q_scalar(x: float, q: float) -> float:
    if not -X_CLAMP <= x <= 1.0 + X_CLAMP:
        raise ValueError(f"tangle outside [0, 1]: {x!r}")
    x = min(max(x, 0.0), 1.0)
    if x == 0.0:
        return 0.0
    root = math.sqrt(1.0 - x)
    hi = 0.5 * (1.0 + root)
    lo = 0.5 * (1.0 - root)
    if abs(q - 1.0) < Q_ONE_BRANCH:
        return -hi * math.log(hi) - (lo * math.log(lo) if lo > 0 else 0.0)
    return (hi**q + lo**q - 1.0) / (1.0 - q)


def _cut_reduction(s: SparseState, cut: Bipartition) -> DensityMatrix:
    cut.validate_for(s.n_parties)
    # smaller side gives the same nonzero spectrum for a pure state
    left_dim = int(np.prod([s.dims[k] for k in cut.left]))
    right_dim = int(np.prod([s.dims[k] for k in cut.right]))
    side = cut.left if left_dim <= right_dim else cut.right
    return reduced_density(s, side)


def concurrence_pure(s: SparseState, cut: Bipartition) -> float:
    rho = _cut_reduction(s, cut)
    purity = float(np.sum(np.abs(rho.entries) ** 2))
    return math.sqrt(max(2.0 * (1.0 - purity), 0.0))


def tsallis_entanglement_pure(s: SparseState, cut: Bipartition, q: float) -> float:
    return tsallis_entropy(_cut_reduction(s, cut), q)


def _block_weights(g: GWState, subset, block) -> tuple[float, float]:
    subset = set(int(x) for x in subset)
    block = set(int(x) for x in block)
    if not block:
        raise ValueError("block must be nonempty")
    if not block <= subset:
        raise ValueError(f"block {sorted(block)} is not inside subset {sorted(subset)}")
    if max(subset) >= g.n or min(subset) < 0:
        raise ValueError(f"subset {sorted(subset)} has parties outside 0..{g.n - 1}")
    lam = g.weights
    lam_block = sum(lam[i] for i in block)
    lam_rest = sum(lam[i] for i in subset - block)
    return lam_block, lam_rest


def tangle_from_weights(lam_block, lam_rest):
    """Squared concurrence ``4 L_P L_R`` of a block against the rest of a GW reduction."""
    return 4.0 * np.asarray(lam_block) * np.asarray(lam_rest)


def gw_tangle(g: GWState, subset, block) -> float:
    """Squared concurrence of ``block`` against ``subset - block`` in the GW reduction on ``subset``."""
    lam_block, lam_rest = _block_weights(g, subset, block)
    return min(4.0 * lam_block * lam_rest, 1.0)


def gw_tsallis(g: GWState, subset, block, q: float, exploratory: bool = False) -> float:
    if not exploratory and not in_fq_window(q):
        raise RangeError(f"q={q} outside [{Q_LOW:.6f}, {Q_HIGH:.6f}]; pass exploratory=True")
    return f_q(gw_tangle(g, subset, block), q)


__all__ = [
    "Bipartition",
    "MeasureSpec",
    "Q_HIGH",
    "Q_LOW",
    "RangeError",
    "StateError",
    "concurrence_pure",
    "f_q",
    "gw_tangle",
    "gw_tsallis",
    "in_fq_window",
    "in_polygon_range",
    "tangle_from_weights",
    "polygon_q_grid",
    "tsallis_entanglement_pure",
    "tsallis_entropy",
    "tsallis_from_spectrum",
    "von_neumann_entropy",
]
