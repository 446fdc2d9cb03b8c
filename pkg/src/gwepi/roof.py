"""Convex-roof extremization over pure-state decompositions of a mixed state.

Every decomposition of a rank-``r`` state with ``m >= r`` members is obtained
from an ``m x r`` isometry ``W`` acting on the weighted eigenvectors. The
search starts from random isometries and refines each one by sweeping over
two-member unitary mixings, so the iterate stays exactly on the isometry
manifold. Because a feasible ensemble is always exhibited, a minimization
returns an upper bound on the true roof and a maximization a lower bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from gwepi import _kernel
from gwepi.measures import Bipartition, MeasureSpec
from gwepi.states import DensityMatrix, SparseState, StateError, eigh_density

RANK_CUTOFF = 1e-12
ISOMETRY_TOL = 1e-10


@dataclass(frozen=True)
class Ensemble:
    """Pure-state decomposition ``sum_k p_k |psi_k><psi_k|``; vectors are rows."""

    dims: tuple[int, ...]
    probs: np.ndarray
    vectors: np.ndarray = field(repr=False)

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-10:
            raise StateError("ensemble probabilities must be nonnegative and sum to 1")
        object.__setattr__(self, "probs", probs)

    def __len__(self):
        return len(self.probs)

    def mixture(self) -> np.ndarray:
        v = self.vectors
        return (v.T * self.probs) @ v.conj()

    def member(self, k: int) -> SparseState:
        return SparseState.from_dense(self.vectors[k], self.dims)


@dataclass(frozen=True)
class RoofResult:
    value: float
    mode: str
    ensemble: Ensemble
    restarts_used: int
    certified_direction: str
    best_restart: int = 0
    sweeps: int = 0


@dataclass(frozen=True)
class RoofOptions:
    """Search effort. ``m_extra=None`` means ensembles of size ``2r``."""

    m_extra: int | None = None
    restarts: int = 200
    iters: int = 500
    tol: float = 1e-8
    seed: int = 0
    grid: int = 8
    golden_steps: int = 20


def restart_rng(seed: int, restart: int) -> np.random.Generator:
    """Counter-based stream for one restart; independent of how restarts are scheduled."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((int(seed), int(restart)))))


def random_isometry(m: int, r: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((m, r)) + 1j * rng.standard_normal((m, r))
    qmat, rmat = np.linalg.qr(z)
    # fix column phases so the draw is a deterministic function of z
    return qmat * (np.diag(rmat) / np.abs(np.diag(rmat)))


def ensemble_from_isometry(eigvals, eigvecs, W, dims) -> Ensemble:
    """Members ``|phi_k> = sum_l W[k, l] sqrt(eigvals[l]) |e_l>`` with eigenvectors as columns."""
    eigvals = np.asarray(eigvals, dtype=float)
    eigvecs = np.asarray(eigvecs, dtype=np.complex128)
    W = np.asarray(W, dtype=np.complex128)
    r = len(eigvals)
    if W.ndim != 2 or W.shape[1] != r or W.shape[0] < r:
        raise ValueError(f"isometry must be m x {r} with m >= {r}, got {W.shape}")
    if np.abs(W.conj().T @ W - np.eye(r)).max() > ISOMETRY_TOL:
        raise ValueError("W does not have orthonormal columns")
    sub = (W * np.sqrt(eigvals)) @ eigvecs.T
    probs = np.sum(np.abs(sub) ** 2, axis=1)
    keep = probs > 1e-15
    probs = probs[keep]
    vectors = sub[keep] / np.sqrt(probs)[:, None]
    return Ensemble(tuple(dims), probs / probs.sum(), vectors)


def _cut_axes(dims, cut: Bipartition):
    cut.validate_for(len(dims))
    left = sorted(cut.left)
    right = sorted(cut.right)
    dl = int(np.prod([dims[k] for k in left]))
    dr = int(np.prod([dims[k] for k in right]))
    if dl > dr:
        left, right, dl, dr = right, left, dr, dl
    return left + right, dl, dr


def _cut_matrices(vectors, dims, cut: Bipartition) -> np.ndarray:
    perm, dl, dr = _cut_axes(dims, cut)
    vectors = np.asarray(vectors, dtype=np.complex128)
    mats = vectors.reshape((-1,) + tuple(dims)).transpose([0] + [k + 1 for k in perm])
    return mats.reshape(-1, dl, dr)


def _minor_index(dl: int, dr: int):
    rows = list(combinations(range(dl), 2))
    cols = list(combinations(range(dr), 2))
    return [(i, j, k, l) for i, j in rows for k, l in cols]


def second_minors(mats: np.ndarray) -> np.ndarray:
    """All 2x2 minors of a batch of matrices, shape ``(N, n_minors)``."""
    idx = np.array(_minor_index(*mats.shape[1:]), dtype=int).reshape(-1, 4)
    i, j, k, l = idx.T
    return mats[:, i, k] * mats[:, j, l] - mats[:, i, l] * mats[:, j, k]


def member_spectra(vectors, dims, cut: Bipartition) -> np.ndarray:
    """Reduced spectra (smaller side of ``cut``) of normalized pure vectors given as rows."""
    mats = _cut_matrices(vectors, dims, cut)
    red = mats @ mats.conj().transpose(0, 2, 1)
    return np.clip(np.linalg.eigvalsh(red), 0.0, 1.0)


def member_values(vectors, dims, cut: Bipartition, measure: MeasureSpec) -> np.ndarray:
    """Pure-state measure of each normalized row vector across ``cut``."""
    if measure.mode == "concurrence":
        # 2(1 - tr rho^2) = 4 * sum |2x2 minors|^2 (Cauchy-Binet), free of cancellation
        minors = second_minors(_cut_matrices(vectors, dims, cut))
        return 2.0 * np.sqrt(np.sum(minors.real**2 + minors.imag**2, axis=-1))
    return measure.pure_value(member_spectra(vectors, dims, cut))


def ensemble_average(ens: Ensemble, cut: Bipartition, measure: MeasureSpec) -> float:
    return float(np.dot(ens.probs, member_values(ens.vectors, ens.dims, cut, measure)))


def _problem_tensors(eigvecs, dims, cut: Bipartition):
    """Per-problem data for the compiled search.

    ``xs[a*r + b]`` is the partial trace of ``|e_a><e_b|`` on the smaller cut
    side; ``tf`` is an upper-triangular factor with ``|tf (c x c)|`` equal to
    the norm of the 2x2 minors of ``sum_a c_a E_a``.
    """
    perm, dl, dr = _cut_axes(dims, cut)
    r = eigvecs.shape[1]
    e = eigvecs.T.reshape((r,) + tuple(dims)).transpose([0] + [k + 1 for k in perm])
    e = e.reshape(r, dl, dr)
    xs = np.einsum("aij,bkj->abik", e, e.conj()).reshape(r * r, dl, dl)
    idx = _minor_index(dl, dr)
    q = np.zeros((r, r, len(idx)), dtype=np.complex128)
    for mu, (i, j, k, l) in enumerate(idx):
        q[:, :, mu] = np.outer(e[:, i, k], e[:, j, l]) - np.outer(e[:, i, l], e[:, j, k])
    q = (0.5 * (q + q.transpose(1, 0, 2))).reshape(r * r, -1)
    tf = np.zeros((r * r, r * r), dtype=np.complex128)
    if q.shape[1]:
        # q = tf^T u^T with orthonormal u, so |s^T q| = |tf s|
        tri = np.linalg.qr(q.T, mode="r")
        tf[: tri.shape[0]] = tri
    return np.ascontiguousarray(xs), tf, dl


def _spectral_data(rho: DensityMatrix):
    w, v = eigh_density(rho)
    keep = w > RANK_CUTOFF
    w, v = w[keep], v[:, keep]
    return w / w.sum(), v


def roof_extremize(
    rho: DensityMatrix,
    cut: Bipartition,
    measure: MeasureSpec,
    mode: str = "min",
    opts: RoofOptions | None = None,
) -> RoofResult:
    """Best decomposition average found over ``opts.restarts`` independent starts."""
    return roof_extremize_many([(rho, cut)], measure, mode, opts)[0]


def roof_extremize_many(problems, measure: MeasureSpec, mode: str = "min", opts: RoofOptions | None = None):
    """Run :func:`roof_extremize` on a list of ``(rho, cut)`` pairs.

    Problems sharing rank and cut shape are searched together in one batch;
    each restart still follows its own trajectory.
    """
    if mode not in ("min", "max"):
        raise ValueError(f"mode must be 'min' or 'max', got {mode!r}")
    opts = opts or RoofOptions()
    direction = "upper_bound_on_min" if mode == "min" else "lower_bound_on_max"
    sign = 1.0 if mode == "min" else -1.0
    results: list[RoofResult | None] = [None] * len(problems)

    groups: dict[tuple, list[int]] = {}
    spectral = []
    for i, (rho, cut) in enumerate(problems):
        cut.validate_for(len(rho.dims))
        w, v = _spectral_data(rho)
        spectral.append((w, v))
        if len(w) == 1:
            ens = ensemble_from_isometry(w, v, np.eye(1), rho.dims)
            results[i] = RoofResult(ensemble_average(ens, cut, measure), mode, ens, 0, direction)
            continue
        _, dl, dr = _cut_axes(rho.dims, cut)
        groups.setdefault((len(w), rho.dims, dl, dr), []).append(i)

    mode_code = _kernel.CONCURRENCE if measure.mode == "concurrence" else _kernel.TSALLIS
    for (r, dims, _, _), members in groups.items():
        m = r + (r if opts.m_extra is None else opts.m_extra)
        starts = np.stack([random_isometry(m, r, restart_rng(opts.seed, j)) for j in range(opts.restarts)])
        roots = np.stack([np.sqrt(spectral[i][0]) for i in members])
        coef = (starts[None] * roots[:, None, None, :]).reshape(-1, m, r)
        coef = np.ascontiguousarray(coef)
        problem = np.repeat(np.arange(len(members)), opts.restarts)
        cuts = [problems[i][1] for i in members]
        prepared = [_problem_tensors(spectral[i][1], dims, cut) for i, cut in zip(members, cuts)]
        xs = np.stack([t[0] for t in prepared])
        tf = np.stack([t[1] for t in prepared])
        total, sweeps = _kernel.search_batch(
            coef, problem, xs, tf, prepared[0][2], mode_code, float(measure.q), sign,
            opts.grid, opts.golden_steps, opts.iters, opts.tol,
        )
        coef = coef.reshape(len(members), opts.restarts, m, r)
        total = total.reshape(len(members), opts.restarts)
        sweeps = sweeps.reshape(len(members), opts.restarts)
        for row, i in enumerate(members):
            # lowest restart index wins ties
            best = int(np.argmin(total[row]))
            w, v = spectral[i]
            W = coef[row, best] / np.sqrt(w)
            # polar projection removes rounding drift before certifying
            u, _, vh = np.linalg.svd(W, full_matrices=False)
            ens = ensemble_from_isometry(w, v, u @ vh, dims)
            results[i] = RoofResult(
                value=ensemble_average(ens, cuts[row], measure),
                mode=mode,
                ensemble=ens,
                restarts_used=opts.restarts,
                certified_direction=direction,
                best_restart=best,
                sweeps=int(sweeps[row, best]),
            )
    return results
