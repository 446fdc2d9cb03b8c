"""Generalized W-class qudit states, sparse pure states and reduced density matrices."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from gwepi.linalg import jacobi_eigh

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-10
NEGATIVE_EIG_ERROR = -1e-8
RENORMALIZE_DRIFT = 1e-8


class StateError(ValueError):
    """Raised for malformed or unnormalized state input."""


@dataclass(frozen=True)
class GWState:
    """Coefficients ``a[i, j-1]`` of level ``j`` on party ``i`` of an n-qudit GW state."""

    n: int
    d: int
    coeffs: np.ndarray
    weights: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=np.complex128)
        if self.n < 2 or self.d < 2:
            raise StateError(f"need n >= 2 and d >= 2, got n={self.n}, d={self.d}")
        if coeffs.shape != (self.n, self.d - 1):
            raise StateError(
                f"coefficient matrix must have shape {(self.n, self.d - 1)}, got {coeffs.shape}"
            )
        norm = float(np.sum(np.abs(coeffs) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise StateError(f"coefficients are not normalized: sum |a|^2 = {norm!r}")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "weights", tuple(float(w) for w in np.sum(np.abs(coeffs) ** 2, axis=1)))

    @classmethod
    def from_weights(cls, weights: Iterable[float], d: int = 2) -> "GWState":
        """Real GW state whose per-party weights are ``weights`` (all on level 1)."""
        weights = np.asarray(list(weights), dtype=float)
        if np.any(weights < 0):
            raise StateError("party weights must be nonnegative")
        coeffs = np.zeros((len(weights), d - 1), dtype=np.complex128)
        coeffs[:, 0] = np.sqrt(weights / weights.sum())
        return cls(len(weights), d, coeffs)

    @classmethod
    def uniform(cls, n: int, d: int = 2) -> "GWState":
        """The n-party W state, equal weight ``1/n`` per party."""
        return cls.from_weights(np.full(n, 1.0 / n), d)

    @property
    def parties(self) -> tuple[int, ...]:
        return tuple(range(self.n))


@dataclass(frozen=True)
class SparseState:
    """Pure state stored as ``{basis tuple: amplitude}``."""

    dims: tuple[int, ...]
    amplitudes: Mapping[tuple[int, ...], complex]

    def __post_init__(self):
        dims = tuple(int(x) for x in self.dims)
        amps = {}
        for key, val in self.amplitudes.items():
            key = tuple(int(k) for k in key)
            if len(key) != len(dims) or any(k < 0 or k >= dim for k, dim in zip(key, dims)):
                raise StateError(f"basis tuple {key} invalid for dims {dims}")
            if val != 0:
                amps[key] = complex(val)
        norm = sum(abs(v) ** 2 for v in amps.values())
        if abs(norm - 1.0) > NORM_TOL:
            raise StateError(f"state is not normalized: norm^2 = {norm!r}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @classmethod
    def from_dense(cls, vec, dims) -> "SparseState":
        vec = np.asarray(vec, dtype=np.complex128).reshape(tuple(dims))
        amps = {idx: vec[idx] for idx in zip(*np.nonzero(vec))}
        return cls(tuple(dims), amps)

    def to_dense(self) -> np.ndarray:
        """Flat state vector; only sensible for small total dimension."""
        out = np.zeros(tuple(self.dims), dtype=np.complex128)
        for key, val in self.amplitudes.items():
            out[key] = val
        return out.reshape(-1)


@dataclass(frozen=True)
class DensityMatrix:
    dims: tuple[int, ...]
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = tuple(int(x) for x in self.dims)
        entries = np.array(self.entries, dtype=np.complex128)
        side = int(np.prod(dims)) if dims else 1
        if entries.shape != (side, side):
            raise StateError(f"matrix shape {entries.shape} does not match dims {dims}")
        if np.abs(entries - entries.conj().T).max() > HERMITIAN_TOL:
            raise StateError("density matrix is not Hermitian")
        if abs(np.trace(entries).real - 1.0) > HERMITIAN_TOL:
            raise StateError(f"density matrix trace {np.trace(entries).real!r} != 1")
        entries.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def build_gw_state(g: GWState) -> SparseState:
    amps = {}
    for i in range(g.n):
        for j in range(1, g.d):
            a = g.coeffs[i, j - 1]
            if a != 0:
                key = [0] * g.n
                key[i] = j
                amps[tuple(key)] = complex(a)
    return SparseState((g.d,) * g.n, amps)


def lambda_weights(g: GWState) -> np.ndarray:
    """Per-party weights ``sum_j |a_ij|^2``."""
    return np.array(g.weights)


def reduced_density(s: SparseState, keep: Iterable[int]) -> DensityMatrix:
    """Partial trace of ``|s><s|`` onto the parties in ``keep`` (kept in ascending order).

    Works directly on the stored amplitudes: two basis tuples contribute to
    ``rho[kept(x), kept(y)]`` only when they agree on every traced party.
    """
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise StateError("keep set must be nonempty")
    if keep[0] < 0 or keep[-1] >= s.n_parties:
        raise StateError(f"party indices {keep} out of range for {s.n_parties} parties")
    traced = [k for k in range(s.n_parties) if k not in keep]
    kdims = tuple(s.dims[k] for k in keep)
    side = int(np.prod(kdims))

    groups: dict[tuple[int, ...], list[tuple[int, complex]]] = {}
    for key, amp in s.amplitudes.items():
        env = tuple(key[k] for k in traced)
        row = int(np.ravel_multi_index(tuple(key[k] for k in keep), kdims))
        groups.setdefault(env, []).append((row, amp))

    rho = np.zeros((side, side), dtype=np.complex128)
    for members in groups.values():
        rows = np.array([r for r, _ in members])
        amps = np.array([a for _, a in members])
        rho[np.ix_(rows, rows)] += np.outer(amps, amps.conj())
    return DensityMatrix(kdims, rho)


def eigh_density(rho: DensityMatrix):
    """Validated eigen-decomposition ``(w, v)`` of a density matrix, descending ``w``."""
    w, v = jacobi_eigh(rho.entries)
    w = _clean_spectrum(w)
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def eigenvalues(rho: DensityMatrix) -> np.ndarray:
    """Spectrum of ``rho`` clamped to [0, 1], sorted descending."""
    w, _ = jacobi_eigh(rho.entries)
    return np.sort(_clean_spectrum(w))[::-1]


def _clean_spectrum(w: np.ndarray) -> np.ndarray:
    if w.min() < NEGATIVE_EIG_ERROR:
        raise StateError(f"negative eigenvalue {w.min()!r}: not a valid density matrix")
    w = np.clip(w, 0.0, 1.0)
    total = w.sum()
    if abs(total - 1.0) < RENORMALIZE_DRIFT:
        w = w / total
    return w


def read_gw_state(path) -> GWState:
    """Parse the plain-text GW file: ``n d`` then one row of ``re im`` pairs per party."""
    return parse_gw_state(Path(path).read_text())


def parse_gw_state(text: str) -> GWState:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise StateError("empty GW state file")
    header = lines[0].split()
    if len(header) != 2:
        raise StateError(f"header must be 'n d', got {lines[0]!r}")
    try:
        n, d = int(header[0]), int(header[1])
    except ValueError:
        raise StateError(f"header must be two integers, got {lines[0]!r}") from None
    rows = lines[1:]
    if len(rows) != n:
        raise StateError(f"expected {n} party rows, found {len(rows)}")
    coeffs = np.zeros((n, d - 1), dtype=np.complex128)
    for i, row in enumerate(rows):
        try:
            vals = [float(x) for x in row.split()]
        except ValueError:
            raise StateError(f"party row {i} is not numeric: {row!r}") from None
        if len(vals) != 2 * (d - 1):
            raise StateError(f"party row {i} needs {2 * (d - 1)} numbers, got {len(vals)}")
        coeffs[i] = np.array(vals[0::2]) + 1j * np.array(vals[1::2])
    return GWState(n, d, coeffs)


def format_gw_state(g: GWState) -> str:
    out = [f"{g.n} {g.d}"]
    for row in g.coeffs:
        out.append(" ".join(f"{float(a.real)!r} {float(a.imag)!r}" for a in row))
    return "\n".join(out) + "\n"


def write_gw_state(g: GWState, path) -> None:
    Path(path).write_text(format_gw_state(g))

