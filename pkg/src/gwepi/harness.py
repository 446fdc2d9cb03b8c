"""Random GW ensembles, parameter sweeps, oracle certification and CSV output."""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from gwepi import inequalities as ineq
from gwepi.measures import Bipartition, MeasureSpec, f_q, gw_tangle, gw_tsallis, polygon_q_grid
from gwepi.roof import RoofOptions, roof_extremize_many
from gwepi.states import GWState, build_gw_state, reduced_density

logger = logging.getLogger(__name__)

CSV_HEADER = ("check", "n", "d", "sample", "q", "beta", "focus", "lhs", "rhs", "gap", "satisfied", "exploratory")
CHECKS = ("epi_triple", "triangle", "epi_partition", "weighted_epi", "monogamy", "bipartite_sum")
DEFAULT_BETA_GRID = tuple(round(0.1 * k, 10) for k in range(11))
ORACLE_Q_GRID = (0.8, 2.0, 3.5)
MAX_PARTITION_SET = 10


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    n_range: tuple[int, int] = (3, 6)
    d_range: tuple[int, int] = (2, 4)
    samples: int = 10
    q_grid: tuple[float, ...] = tuple(float(q) for q in polygon_q_grid(25))
    beta_grid: tuple[float, ...] = DEFAULT_BETA_GRID
    seed: int = 0
    tol: float = ineq.CLOSED_FORM_TOL
    oracle_tol: float = ineq.ORACLE_TOL
    assistance_tol: float = 1e-2
    checks: tuple[str, ...] = CHECKS
    out: str | None = None
    exploratory: bool = False
    max_blocks: int = 5
    restarts: int = 200
    iters: int = 500

    def __post_init__(self):
        if self.samples < 1:
            raise ConfigError(f"samples must be >= 1, got {self.samples}")
        if not self.q_grid or not self.beta_grid:
            raise ConfigError("q_grid and beta_grid must be nonempty")
        if any(q <= 0 for q in self.q_grid):
            raise ConfigError("q grid values must be positive")
        if any(not 0.0 <= b <= 1.0 for b in self.beta_grid):
            raise ConfigError("beta grid values must lie in [0, 1]")
        for lo, hi in (self.n_range, self.d_range):
            if lo > hi or lo < 2:
                raise ConfigError(f"bad range {lo}..{hi}")
        unknown = set(self.checks) - set(CHECKS)
        if unknown:
            raise ConfigError(f"unknown check(s): {', '.join(sorted(unknown))}")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")


# -- config files ---------------------------------------------------------

def _parse_range(text: str) -> tuple[int, int]:
    text = text.strip()
    for sep in ("..", "-", ":"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            return int(lo), int(hi)
    return int(text), int(text)


def parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.replace(",", " ").split())


def _parse_bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


_PARSERS = {
    "n_range": _parse_range,
    "d_range": _parse_range,
    "samples": int,
    "q_grid": parse_floats,
    "beta_grid": parse_floats,
    "seed": int,
    "tol": float,
    "oracle_tol": float,
    "assistance_tol": float,
    "checks": lambda s: tuple(x for x in s.replace(",", " ").split()),
    "out": str.strip,
    "exploratory": _parse_bool,
    "max_blocks": int,
    "restarts": int,
    "iters": int,
}


def parse_config(text: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _PARSERS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from None
    return values


def load_config(path=None, **overrides) -> SweepConfig:
    values = parse_config(Path(path).read_text()) if path else {}
    values.update({k: v for k, v in overrides.items() if v is not None})
    return SweepConfig(**values)


# -- sampling -------------------------------------------------------------

def random_gw(n: int, d: int, seed: int) -> GWState:
    """Independent standard complex Gaussian coefficients, normalized."""
    if n < 2 or d < 2:
        raise ValueError(f"need n >= 2 and d >= 2, got n={n}, d={d}")
    rng = np.random.default_rng([int(seed), n, d])
    coeffs = rng.standard_normal((n, d - 1)) + 1j * rng.standard_normal((n, d - 1))
    coeffs /= math.sqrt(float(np.sum(np.abs(coeffs) ** 2)))
    return GWState(n, d, coeffs)


def sample_states(cfg: SweepConfig) -> list[tuple[int, GWState]]:
    out = []
    for sample in range(cfg.samples):
        rng = np.random.default_rng([cfg.seed, sample])
        n = int(rng.integers(cfg.n_range[0], cfg.n_range[1] + 1))
        d = int(rng.integers(cfg.d_range[0], cfg.d_range[1] + 1))
        out.append((sample, random_gw(n, d, int(rng.integers(2**62)))))
    return out


def enumerate_partitions(subset: Iterable[int], max_blocks: int | None = None) -> list[ineq.Partition]:
    """All set partitions of ``subset`` with at most ``max_blocks`` blocks.

    Ordered lexicographically by restricted growth string.
    """
    items = sorted(set(int(x) for x in subset))
    if len(items) > MAX_PARTITION_SET:
        raise ValueError(f"refusing to enumerate partitions of {len(items)} > {MAX_PARTITION_SET} elements")
    if not items:
        return []
    limit = len(items) if max_blocks is None else max_blocks
    out = []

    def grow(code: list[int], top: int):
        if len(code) == len(items):
            blocks = [[] for _ in range(top + 1)]
            for item, b in zip(items, code):
                blocks[b].append(item)
            out.append(ineq.Partition(blocks, items))
            return
        for b in range(min(top + 2, limit)):
            grow(code + [b], max(top, b))

    grow([0], 0)
    return out


# -- sweeps ---------------------------------------------------------------

def _orders(triple):
    j1, j2, j3 = triple
    return ((j1, j2, j3), (j2, j1, j3), (j3, j1, j2))


def bipartite_split(n: int):
    """Two singleton blocks per side on parties 0..3; the rest is traced out. None if n < 4."""
    if n < 4:
        return None
    return [(0,), (1,)], [(2,), (3,)]


def state_reports(g: GWState, cfg: SweepConfig, check: str) -> Iterator[ineq.InequalityReport]:
    """Reports of one check on one state, in a fixed order."""
    parties = range(g.n)
    explore = cfg.exploratory
    if check == "epi_triple":
        for triple in combinations(parties, 3):
            for order in _orders(triple):
                for q in cfg.q_grid:
                    yield ineq.check_epi_triple(g, order, q, explore, cfg.tol)
    elif check == "triangle":
        for triple in combinations(parties, 3):
            for order in _orders(triple):
                for q in cfg.q_grid:
                    yield from ineq.check_triangle(g, order, q, explore, cfg.tol)
    elif check == "epi_partition":
        for part in enumerate_partitions(parties, cfg.max_blocks):
            if len(part) < 3:
                continue
            for focus in range(len(part)):
                for q in cfg.q_grid:
                    yield ineq.check_epi_partition(g, part, focus, q, explore, cfg.tol)
    elif check == "weighted_epi":
        for part in enumerate_partitions(parties, cfg.max_blocks):
            if len(part) < 2:
                continue
            for q in cfg.q_grid:
                flag = ineq.q_is_exploratory(q, explore)
                values = [gw_tsallis(g, part.subset, b, q, exploratory=flag) for b in part.blocks]
                for beta in cfg.beta_grid:
                    yield ineq.weighted_epi_report(part, values, q, beta, flag, cfg.tol)
    elif check == "monogamy":
        for part in enumerate_partitions(parties, cfg.max_blocks):
            if len(part) < 2:
                continue
            for focus in range(len(part)):
                yield ineq.check_monogamy_identity(g, part, focus, cfg.tol)
    elif check == "bipartite_sum":
        split = bipartite_split(g.n)
        if split is None:
            return
        a_blocks, b_blocks = split
        for q in cfg.q_grid:
            yield ineq.check_bipartite_sum(g, a_blocks, b_blocks, q, explore, cfg.tol)
    else:
        raise ConfigError(f"unknown check {check!r}")


def _stirling2(n: int, k: int) -> int:
    return sum((-1) ** j * math.comb(k, j) * (k - j) ** n for j in range(k + 1)) // math.factorial(k)


def predicted_rows(cfg: SweepConfig, n: int, check: str) -> int:
    """Row count of ``check`` on an n-party state, from closed-form combinatorics."""
    nq, nb = len(cfg.q_grid), len(cfg.beta_grid)
    blocks = range(1, min(n, cfg.max_blocks) + 1)
    if check == "epi_triple":
        return 3 * math.comb(n, 3) * nq
    if check == "triangle":
        return 6 * math.comb(n, 3) * nq
    if check == "epi_partition":
        return sum(k * _stirling2(n, k) for k in blocks if k >= 3) * nq
    if check == "weighted_epi":
        return sum(_stirling2(n, k) for k in blocks if k >= 2) * nq * nb
    if check == "monogamy":
        return sum(k * _stirling2(n, k) for k in blocks if k >= 2)
    if check == "bipartite_sum":
        return nq if n >= 4 else 0
    raise ConfigError(f"unknown check {check!r}")


@dataclass
class CheckSummary:
    rows: int = 0
    violations: int = 0
    exploratory_violations: int = 0
    min_gap: float = math.inf
    exploratory_min_gap: float = math.inf

    def add(self, report: ineq.InequalityReport) -> None:
        self.rows += 1
        if not report.satisfied:
            if report.exploratory:
                self.exploratory_violations += 1
            else:
                self.violations += 1
        gap = -abs(report.gap) if report.equality else report.gap
        if report.exploratory:
            self.exploratory_min_gap = min(self.exploratory_min_gap, gap)
        else:
            self.min_gap = min(self.min_gap, gap)


@dataclass
class SweepSummary:
    checks: dict[str, CheckSummary] = field(default_factory=dict)

    @property
    def rows(self) -> int:
        return sum(c.rows for c in self.checks.values())

    @property
    def violations(self) -> int:
        return sum(c.violations for c in self.checks.values())

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def format(self) -> str:
        lines = [f"{'check':<16}{'rows':>10}{'violations':>12}{'min gap':>16}"]
        for name, c in self.checks.items():
            gap = "n/a" if c.min_gap == math.inf else f"{c.min_gap:.3e}"
            extra = ""
            if c.exploratory_min_gap < math.inf:
                extra = f"  exploratory: {c.exploratory_violations} below tol, min gap {c.exploratory_min_gap:.3e}"
            lines.append(f"{name:<16}{c.rows:>10}{c.violations:>12}{gap:>16}{extra}")
        lines.append(f"total rows {self.rows}, violations {self.violations}")
        return "\n".join(lines)


def sweep_rows(cfg: SweepConfig, states=None):
    """Yield ``(csv fields, report)`` for every sample, check and grid point in order."""
    states = sample_states(cfg) if states is None else states
    for sample, g in states:
        for check in cfg.checks:
            for report in state_reports(g, cfg, check):
                f = report.csv_fields()
                yield (f[0], str(g.n), str(g.d), str(sample)) + f[1:], report


def run_sweep(cfg: SweepConfig, states=None, stream=None) -> SweepSummary:
    """Write the sweep CSV to ``cfg.out`` (or ``stream``) and return the summary."""
    summary = SweepSummary({c: CheckSummary() for c in cfg.checks})
    if stream is None and cfg.out is None:
        stream = io.StringIO()
    handle = None
    if stream is None:
        try:
            handle = open(cfg.out, "w", newline="")
        except OSError as exc:
            raise ConfigError(f"cannot write {cfg.out}: {exc}") from None
        stream = handle
    try:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for fields, report in sweep_rows(cfg, states):
            writer.writerow(fields)
            summary.checks[report.check if report.check in summary.checks else _parent(report.check)].add(report)
    finally:
        if handle is not None:
            handle.close()
    return summary


def _parent(check: str) -> str:
    return "triangle" if check.startswith("triangle") else check


# -- oracle certification -------------------------------------------------

CERT_HEADER = ("sample", "n", "d", "subset", "block", "measure", "q", "closed_form",
               "oracle_min", "oracle_max", "min_excess", "passed")


@dataclass(frozen=True)
class CertificationRow:
    sample: int
    n: int
    d: int
    subset: tuple[int, ...]
    block: tuple[int, ...]
    measure: str
    q: float | None
    closed_form: float
    oracle_min: float
    oracle_max: float | None
    passed: bool

    @property
    def min_excess(self) -> float:
        return self.oracle_min - self.closed_form

    def csv_fields(self):
        return (
            str(self.sample), str(self.n), str(self.d),
            ineq.block_label(self.subset), ineq.block_label(self.block), self.measure,
            _num(self.q), _num(self.closed_form), _num(self.oracle_min),
            _num(self.oracle_max), _num(self.min_excess),
            str(int(self.passed)),
        )


def _num(x) -> str:
    return "" if x is None else repr(float(x))


@dataclass
class CertificationReport:
    rows: list[CertificationRow]

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.rows)

    def write_csv(self, path_or_stream) -> None:
        if hasattr(path_or_stream, "write"):
            self._write(path_or_stream)
        else:
            with open(path_or_stream, "w", newline="") as fh:
                self._write(fh)

    def _write(self, fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CERT_HEADER)
        for row in self.rows:
            writer.writerow(row.csv_fields())

    def format(self) -> str:
        lines = []
        for measure in sorted({(r.measure, r.q or 0.0) for r in self.rows}):
            sel = [r for r in self.rows if (r.measure, r.q or 0.0) == measure]
            worst = max(abs(r.min_excess) for r in sel)
            label = measure[0] if measure[0] == "concurrence" else f"tsallis q={measure[1]:g}"
            failed = sum(not r.passed for r in sel)
            lines.append(f"{label:<20} blocks {len(sel):>5}  failed {failed:>4}  max |oracle-closed| {worst:.2e}")
        lines.append("PASS" if self.ok else "FAIL")
        return "\n".join(lines)


def certification_blocks(n: int, sizes=(2, 3)):
    """``(subset, block)`` pairs: single- and two-party blocks of every 2- and 3-party subset.

    A block equal to its subset has no complement and is skipped.
    """
    for size in sizes:
        for subset in combinations(range(n), size):
            for bsize in (1, 2):
                for block in combinations(subset, bsize):
                    if len(block) < len(subset):
                        yield subset, block


def run_oracle_certification(cfg: SweepConfig, states=None, measures=None) -> CertificationReport:
    """Compare closed-form GW values with convex-roof bounds.

    ``measures`` lists ``("concurrence", None)`` and/or ``("tsallis", q)``;
    by default concurrence plus Tsallis at each q of ``cfg.q_grid``.
    A concurrence block passes when ``0 <= min - closed <= oracle_tol``
    (down to -1e-9 rounding), ``max >= closed - oracle_tol`` and
    ``|max - min| <= assistance_tol``. Tsallis blocks check the minimum only.
    """
    states = sample_states(cfg) if states is None else states
    if measures is None:
        measures = [("concurrence", None)] + [("tsallis", float(q)) for q in cfg.q_grid]
    opts = RoofOptions(restarts=cfg.restarts, iters=cfg.iters, seed=cfg.seed)

    entries = []
    problems = []
    cut_index: dict[tuple, int] = {}
    for sample, g in states:
        psi = build_gw_state(g)
        rhos = {}
        for subset, block in certification_blocks(g.n):
            if subset not in rhos:
                rhos[subset] = reduced_density(psi, subset)
            local = [subset.index(p) for p in block]
            cut = Bipartition.split(range(len(subset)), local)
            key = (sample, subset, min(cut.left, cut.right, key=sorted))
            if key not in cut_index:
                cut_index[key] = len(problems)
                problems.append((rhos[subset], cut))
            entries.append((sample, g, subset, block, cut_index[key]))

    logger.info("certifying %d blocks over %d distinct cuts", len(entries), len(problems))
    rows = []
    for name, q in measures:
        spec = MeasureSpec(name, q if q is not None else 2.0, exploratory=cfg.exploratory)
        lows = roof_extremize_many(problems, spec, "min", opts)
        highs = roof_extremize_many(problems, spec, "max", opts) if name == "concurrence" else None
        for sample, g, subset, block, idx in entries:
            tangle = gw_tangle(g, subset, block)
            closed = math.sqrt(tangle) if name == "concurrence" else f_q(tangle, q)
            low = lows[idx].value
            excess = low - closed
            passed = -1e-9 <= excess <= cfg.oracle_tol
            high = None
            if highs is not None:
                high = highs[idx].value
                passed = passed and high >= closed - cfg.oracle_tol and abs(high - low) <= cfg.assistance_tol
            rows.append(CertificationRow(sample, g.n, g.d, subset, block, name, q, closed, low, high, passed))
    return CertificationReport(rows)


# -- report output ------------------------------------------------------

def write_reports(reports, path_or_stream) -> None:
    def _write(fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ineq.REPORT_HEADER)
        for r in reports:
            writer.writerow(r.csv_fields())

    if hasattr(path_or_stream, "write"):
        _write(path_or_stream)
    else:
        with open(path_or_stream, "w", newline="") as fh:
            _write(fh)


TRIANGLE_HEADER = ("sample", "q", "j1", "j2", "j3", "side_23", "side_13", "side_12")


def triangle_side_rows(g: GWState, q_grid, sample: int = 0, exploratory: bool = False):
    """Side lengths of the triangle picture: segment i-j carries ``T_q(k | i j)``."""
    for triple in combinations(range(g.n), 3):
        for q in q_grid:
            a, b, c = ineq.triangle_sides(g, triple, q, exploratory)
            yield (str(sample), _num(q)) + tuple(str(j) for j in triple) + (_num(a), _num(b), _num(c))


__all__ = [
    "CHECKS",
    "CSV_HEADER",
    "CertificationReport",
    "ConfigError",
    "SweepConfig",
    "enumerate_partitions",
    "load_config",
    "parse_config",
    "predicted_rows",
    "random_gw",
    "run_oracle_certification",
    "run_sweep",
    "sample_states",
    "state_reports",
]
