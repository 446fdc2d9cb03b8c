"""Array versions of the polygon checks for large random ensembles.

Everything here works directly on Lambda weights: for GW states every
block value is ``f_q(4 L_P (L_S - L_P))``, so a whole ensemble reduces to
small dense arrays. The scalar checks in :mod:`gwepi.inequalities` remain
the reference; tests compare the two on sampled states.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

from gwepi.inequalities import weighted_epi_bounds
from gwepi.measures import f_q


def tsallis_table(tangles, q_grid) -> np.ndarray:
    """``f_q`` of every tangle for every q; the q axis is appended last."""
    tangles = np.asarray(tangles, dtype=float)
    return np.stack([f_q(tangles, float(q)) for q in q_grid], axis=-1)


def triple_tangles(lam) -> tuple[np.ndarray, list[tuple[int, int, int]]]:
    """Tangle of each party of each triple against the other two, shape ``(T, 3)``."""
    lam = np.asarray(lam, dtype=float)
    triples = list(combinations(range(len(lam)), 3))
    if not triples:
        return np.zeros((0, 3)), triples
    w = lam[np.array(triples)]
    total = w.sum(axis=1, keepdims=True)
    return np.minimum(4.0 * w * (total - w), 1.0), triples


def epi_triple_gaps(lam, q_grid) -> np.ndarray:
    """Gaps ``T_b + T_c - T_a`` for every triple, focus and q: shape ``(T, 3, nq)``."""
    sides = tsallis_table(triple_tangles(lam)[0], q_grid)
    return sides.sum(axis=1, keepdims=True) - 2.0 * sides


def triangle_lower_gaps(lam, q_grid) -> np.ndarray:
    """Gaps ``T_a - |T_b - T_c|`` with the same layout as :func:`epi_triple_gaps`."""
    sides = tsallis_table(triple_tangles(lam)[0], q_grid)
    a, b, c = sides[:, 0], sides[:, 1], sides[:, 2]
    return np.stack([a - np.abs(b - c), b - np.abs(a - c), c - np.abs(a - b)], axis=1)


@lru_cache(maxsize=None)
def partition_membership(n: int, max_blocks: int, min_blocks: int = 2) -> np.ndarray:
    """0/1 array ``(P, max_blocks, n)`` of every partition of all n parties.

    Rows follow :func:`gwepi.harness.enumerate_partitions`; unused block
    slots are all-zero.
    """
    from gwepi.harness import enumerate_partitions

    parts = [p for p in enumerate_partitions(range(n), max_blocks) if len(p) >= min_blocks]
    out = np.zeros((len(parts), max_blocks, n))
    for i, part in enumerate(parts):
        for k, block in enumerate(part.blocks):
            out[i, k, list(block)] = 1.0
    out.flags.writeable = False
    return out


def partition_values(lam, q_grid, max_blocks: int = 5, min_blocks: int = 2) -> np.ndarray:
    """Block values ``T_q(P_k | rest)`` for every partition: shape ``(P, nq, max_blocks)``.

    Padded slots hold exactly 0.
    """
    lam = np.asarray(lam, dtype=float)
    member = partition_membership(len(lam), max_blocks, min_blocks)
    block = member @ lam
    used = member.any(axis=-1)
    tangles = np.where(used, np.minimum(4.0 * block * (lam.sum() - block), 1.0), 0.0)
    return np.moveaxis(tsallis_table(tangles, q_grid), -1, 1)


def weighted_epi_gaps(values, beta: float) -> np.ndarray:
    lhs, rhs = weighted_epi_bounds(values, beta)
    return rhs - lhs


def epi_partition_gaps(values) -> np.ndarray:
    """Unweighted polygon gap with the largest block in focus (the tightest focus)."""
    values = np.asarray(values, dtype=float)
    return values.sum(axis=-1) - 2.0 * values.max(axis=-1)


def bipartite_gaps(lam, a_blocks, b_blocks, q_grid) -> np.ndarray:
    """``sum_ij T(A_i|B_j) - T(A|B)`` for each q."""
    lam = np.asarray(lam, dtype=float)
    wa = np.array([lam[list(b)].sum() for b in a_blocks])
    wb = np.array([lam[list(b)].sum() for b in b_blocks])
    lhs = tsallis_table(min(4.0 * wa.sum() * wb.sum(), 1.0), q_grid)
    pair = np.minimum(4.0 * np.outer(wa, wb), 1.0)
    rhs = tsallis_table(pair, q_grid).sum(axis=(0, 1))
    return rhs - lhs
