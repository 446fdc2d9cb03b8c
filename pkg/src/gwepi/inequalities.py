"""Entanglement polygon inequalities for reductions of GW states.

Every check returns an :class:`InequalityReport`. Tsallis values come from
the closed form ``f_q(4 L_P (L_S - L_P))`` evaluated through
:func:`gwepi.measures.gw_tsallis`, so the reports here are exact up to
rounding; the convex-roof oracle is what certifies that closed form.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from gwepi.measures import RangeError, f_q, gw_tangle, gw_tsallis, in_polygon_range
from gwepi.states import GWState

logger = logging.getLogger(__name__)

CLOSED_FORM_TOL = 1e-9
ORACLE_TOL = 5e-3
REPORT_HEADER = ("check", "q", "beta", "focus", "lhs", "rhs", "gap", "satisfied", "exploratory")


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty blocks covering ``subset``."""

    subset: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]

    def __init__(self, blocks: Iterable[Iterable[int]], subset: Iterable[int] | None = None):
        blocks = tuple(tuple(sorted(int(x) for x in b)) for b in blocks)
        if any(len(b) == 0 for b in blocks):
            raise ValueError("partition blocks must be nonempty")
        flat = [x for b in blocks for x in b]
        if len(flat) != len(set(flat)):
            raise ValueError(f"partition blocks overlap: {blocks}")
        union = tuple(sorted(flat))
        subset = union if subset is None else tuple(sorted(int(x) for x in subset))
        if union != subset:
            raise ValueError(f"blocks {blocks} do not cover subset {subset}")
        object.__setattr__(self, "subset", subset)
        object.__setattr__(self, "blocks", blocks)

    def __len__(self):
        return len(self.blocks)

    def check_parties(self, n: int) -> None:
        if self.subset and (self.subset[0] < 0 or self.subset[-1] >= n):
            raise ValueError(f"partition uses parties outside 0..{n - 1}")


@dataclass(frozen=True)
class WeightedTerm:
    block: tuple[int, ...]
    rank: int
    weight: int
    coefficient: float
    value: float


@dataclass(frozen=True)
class InequalityReport:
    """``lhs <= rhs`` (or ``lhs == rhs`` for equality checks) with ``gap = rhs - lhs``."""

    check: str
    lhs: float
    rhs: float
    tol: float
    q: float | None = None
    beta: float | None = None
    focus: str = ""
    exploratory: bool = False
    equality: bool = False
    terms: tuple[WeightedTerm, ...] = field(default=(), repr=False)

    @property
    def gap(self) -> float:
        return self.rhs - self.lhs

    @property
    def satisfied(self) -> bool:
        if self.equality:
            return abs(self.gap) <= self.tol
        return self.gap >= -self.tol

    def csv_fields(self) -> tuple[str, ...]:
        return (
            self.check,
            _fmt(self.q),
            _fmt(self.beta),
            self.focus,
            _fmt(self.lhs),
            _fmt(self.rhs),
            _fmt(self.gap),
            str(int(self.satisfied)),
            str(int(self.exploratory)),
        )


def _fmt(x) -> str:
    if x is None:
        return ""
    return repr(float(x))


def block_label(block: Iterable[int]) -> str:
    return "+".join(str(x) for x in sorted(block))


def q_is_exploratory(q: float, exploratory: bool) -> bool:
    """Whether a check at ``q`` counts only as exploratory; raises if it is not allowed at all."""
    if in_polygon_range(q):
        return False
    if exploratory:
        return True
    raise RangeError(f"q={q} is outside [0.697224, 2] U [3, 4.302776]; pass exploratory=True")


def _tsallis(g, subset, block, q, explore):
    return gw_tsallis(g, subset, block, q, exploratory=explore)


def _triple(triple) -> tuple[int, int, int]:
    triple = tuple(int(x) for x in triple)
    if len(triple) != 3 or len(set(triple)) != 3:
        raise ValueError(f"need three distinct parties, got {triple}")
    return triple


def triangle_sides(g: GWState, triple, q: float, exploratory: bool = False) -> tuple[float, float, float]:
    """``T_q(j | rest of triple)`` for each party of ``triple``, in order."""
    triple = _triple(triple)
    explore = q_is_exploratory(q, exploratory)
    return tuple(_tsallis(g, triple, [j], q, explore) for j in triple)


def check_epi_triple(g: GWState, triple, q: float, exploratory: bool = False,
                     tol: float = CLOSED_FORM_TOL) -> InequalityReport:
    """Focus party ``triple[0]`` against the other two."""
    triple = _triple(triple)
    explore = q_is_exploratory(q, exploratory)
    a, b, c = (_tsallis(g, triple, [j], q, explore) for j in triple)
    return InequalityReport("epi_triple", a, b + c, tol, q=q, focus=str(triple[0]), exploratory=explore)


def check_epi_triple_all(g: GWState, triple, q: float, exploratory: bool = False,
                         tol: float = CLOSED_FORM_TOL) -> list[InequalityReport]:
    """One report per choice of focus party."""
    j1, j2, j3 = _triple(triple)
    return [
        check_epi_triple(g, order, q, exploratory, tol)
        for order in ((j1, j2, j3), (j2, j1, j3), (j3, j1, j2))
    ]


def check_triangle(g: GWState, triple, q: float, exploratory: bool = False,
                   tol: float = CLOSED_FORM_TOL) -> tuple[InequalityReport, InequalityReport]:
    """``|b - c| <= a`` and ``a <= b + c`` with ``a`` the focus ``triple[0]``."""
    triple = _triple(triple)
    explore = q_is_exploratory(q, exploratory)
    a, b, c = triangle_sides(g, triple, q, exploratory)
    focus = str(triple[0])
    lower = InequalityReport("triangle_lower", abs(b - c), a, tol, q=q, focus=focus, exploratory=explore)
    upper = InequalityReport("triangle_upper", a, b + c, tol, q=q, focus=focus, exploratory=explore)
    return lower, upper


def check_epi_partition(g: GWState, partition: Partition, focus: int, q: float,
                        exploratory: bool = False, tol: float = CLOSED_FORM_TOL) -> InequalityReport:
    """Block ``partition.blocks[focus]`` against the sum over the other blocks."""
    partition.check_parties(g.n)
    if len(partition) < 2:
        raise ValueError("an entanglement polygon needs at least two blocks")
    if len(partition) == 2:
        logger.info("two-block polygon %s is a trivial equality", partition.blocks)
    explore = q_is_exploratory(q, exploratory)
    values = [_tsallis(g, partition.subset, b, q, explore) for b in partition.blocks]
    rhs = sum(v for i, v in enumerate(values) if i != focus)
    return InequalityReport(
        "epi_partition", values[focus], rhs, tol, q=q,
        focus=block_label(partition.blocks[focus]), exploratory=explore,
    )


def check_monogamy_identity(g: GWState, partition: Partition, focus: int,
                            tol: float = CLOSED_FORM_TOL) -> InequalityReport:
    """Tangle of a block against the rest equals the sum of its pairwise tangles."""
    partition.check_parties(g.n)
    own = partition.blocks[focus]
    lhs = gw_tangle(g, partition.subset, own)
    rhs = sum(
        gw_tangle(g, own + other, own)
        for i, other in enumerate(partition.blocks)
        if i != focus
    )
    return InequalityReport("monogamy", lhs, rhs, tol, focus=block_label(own), equality=True)


def hamming_weight(k: int) -> int:
    if k < 0:
        raise ValueError("Hamming weight is defined for nonnegative integers")
    return bin(k).count("1")


def dyadic_coefficients(count: int, beta: float) -> np.ndarray:
    """``(2^beta - 1)^popcount(k)`` for ranks ``k = 0 .. count-1``."""
    weights = np.array([hamming_weight(k) for k in range(count)], dtype=float)
    return (2.0**beta - 1.0) ** weights


def _power(values, beta):
    values = np.asarray(values, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(values > 0, np.abs(values) ** beta, 0.0)


def weighted_epi_bounds(values, beta: float):
    """Both sides of the weighted polygon bound for block values along the last axis.

    The largest value is the left-hand side; the rest, sorted descending,
    get coefficients by rank. Zero entries, including padding, contribute
    nothing, and ``0 ** beta`` is taken as 0 even at ``beta = 0``.
    """
    values = -np.sort(-np.asarray(values, dtype=float), axis=-1)
    powered = _power(values, beta)
    coeffs = dyadic_coefficients(values.shape[-1] - 1, beta)
    return powered[..., 0], powered[..., 1:] @ coeffs


def _check_beta(beta: float) -> None:
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1], got {beta}")


def check_weighted_epi(g: GWState, partition: Partition, q: float, beta: float,
                       exploratory: bool = False, tol: float = CLOSED_FORM_TOL,
                       lhs_block: int | None = None) -> InequalityReport:
    """Weighted polygon bound with a dyadic rank weighting.

    By default the left-hand block is the most entangled one, which is the
    order whose existence the bound asserts. ``lhs_block`` forces another
    choice (used by :func:`check_weighted_epi_all_lhs`).
    """
    _check_beta(beta)
    partition.check_parties(g.n)
    if len(partition) < 2:
        raise ValueError("weighted polygon needs at least two blocks")
    explore = q_is_exploratory(q, exploratory)
    values = [_tsallis(g, partition.subset, b, q, explore) for b in partition.blocks]
    return weighted_epi_report(partition, values, q, beta, explore, tol, lhs_block)


def weighted_epi_report(partition: Partition, values: Sequence[float], q: float, beta: float,
                        exploratory: bool = False, tol: float = CLOSED_FORM_TOL,
                        lhs_block: int | None = None) -> InequalityReport:
    """Weighted polygon report from precomputed block values (one per block, in block order)."""
    _check_beta(beta)
    # descending value, ties by smallest party index
    order = sorted(range(len(values)), key=lambda i: (-values[i], partition.blocks[i][0]))
    if lhs_block is not None:
        order.remove(lhs_block)
        order.insert(0, lhs_block)
    head, rest = order[0], order[1:]
    coeffs = dyadic_coefficients(len(rest), beta)
    terms = tuple(
        WeightedTerm(partition.blocks[i], k, hamming_weight(k), float(coeffs[k]),
                     float(coeffs[k] * _power(values[i], beta)))
        for k, i in enumerate(rest)
    )
    lhs = float(_power(values[head], beta))
    rhs = float(sum(t.value for t in terms))
    return InequalityReport(
        "weighted_epi", lhs, rhs, tol, q=q, beta=beta,
        focus=block_label(partition.blocks[head]), exploratory=exploratory, terms=terms,
    )


def check_weighted_epi_all_lhs(g: GWState, partition: Partition, q: float, beta: float,
                               exploratory: bool = False,
                               tol: float = CLOSED_FORM_TOL) -> list[InequalityReport]:
    """Every block in turn on the left-hand side; the rest keep the descending rank order."""
    return [
        check_weighted_epi(g, partition, q, beta, exploratory, tol, lhs_block=i)
        for i in range(len(partition))
    ]


def dyadic_power_bound(x: float, beta: float, tol: float = 1e-12) -> InequalityReport:
    """``(1 + x)^beta <= 1 + (2^beta - 1) x^beta`` for x in (0, 1]."""
    _check_beta(beta)
    if not 0.0 < x <= 1.0:
        raise ValueError(f"x must lie in (0, 1], got {x}")
    lhs = (1.0 + x) ** beta
    rhs = 1.0 + (2.0**beta - 1.0) * x**beta
    return InequalityReport("dyadic_power", lhs, rhs, tol, beta=beta, focus=f"x={x!r}")


def check_bipartite_sum(g: GWState, a_blocks: Sequence[Iterable[int]], b_blocks: Sequence[Iterable[int]],
                        q: float, exploratory: bool = False,
                        tol: float = CLOSED_FORM_TOL) -> InequalityReport:
    """Entanglement between two groups of blocks against the sum over block pairs.

    Parties outside both groups are traced out.
    """
    a_blocks = [tuple(sorted(int(x) for x in b)) for b in a_blocks]
    b_blocks = [tuple(sorted(int(x) for x in b)) for b in b_blocks]
    flat = [x for b in a_blocks + b_blocks for x in b]
    if not a_blocks or not b_blocks or any(len(b) == 0 for b in a_blocks + b_blocks):
        raise ValueError("both sides need at least one nonempty block")
    if len(flat) != len(set(flat)):
        raise ValueError("blocks overlap")
    if max(flat) >= g.n or min(flat) < 0:
        raise ValueError(f"blocks use parties outside 0..{g.n - 1}")
    explore = q_is_exploratory(q, exploratory)
    side_a = tuple(x for b in a_blocks for x in b)
    lhs = _tsallis(g, flat, side_a, q, explore)
    rhs = sum(_tsallis(g, ai + bj, ai, q, explore) for ai in a_blocks for bj in b_blocks)
    focus = "|".join(",".join(block_label(b) for b in side) for side in (a_blocks, b_blocks))
    return InequalityReport("bipartite_sum", lhs, rhs, tol, q=q, focus=focus, exploratory=explore)


__all__ = [
    "CLOSED_FORM_TOL",
    "InequalityReport",
    "ORACLE_TOL",
    "Partition",
    "REPORT_HEADER",
    "WeightedTerm",
    "check_bipartite_sum",
    "check_epi_partition",
    "check_epi_triple",
    "check_epi_triple_all",
    "check_monogamy_identity",
    "check_triangle",
    "check_weighted_epi",
    "check_weighted_epi_all_lhs",
    "dyadic_coefficients",
    "f_q",
    "hamming_weight",
    "dyadic_power_bound",
    "triangle_sides",
    "weighted_epi_bounds",
    "weighted_epi_report",
]
