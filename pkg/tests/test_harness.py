import csv
import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gwepi.harness import (
    CHECKS,
    CSV_HEADER,
    ConfigError,
    SweepConfig,
    certification_blocks,
    enumerate_partitions,
    load_config,
    parse_config,
    predicted_rows,
    random_gw,
    run_oracle_certification,
    run_sweep,
    sample_states,
)
from gwepi.states import GWState, lambda_weights

BELL = [1, 1, 2, 5, 15, 52, 203, 877]


def test_random_gw_deterministic():
    a, b = random_gw(4, 3, 17), random_gw(4, 3, 17)
    np.testing.assert_array_equal(a.coeffs, b.coeffs)
    assert not np.array_equal(a.coeffs, random_gw(4, 3, 18).coeffs)
    assert np.sum(np.abs(a.coeffs) ** 2) == pytest.approx(1, abs=1e-12)
    assert lambda_weights(a).sum() == pytest.approx(1, abs=1e-12)
    with pytest.raises(ValueError):
        random_gw(1, 3, 0)
    with pytest.raises(ValueError):
        random_gw(3, 1, 0)


@pytest.mark.parametrize("size", range(1, 8))
def test_partition_counts_are_bell_numbers(size):
    assert len(enumerate_partitions(range(size))) == BELL[size]


def test_partition_order_and_bounds():
    parts = enumerate_partitions([4, 7, 9])
    assert [p.blocks for p in parts] == [
        ((4, 7, 9),),
        ((4, 7), (9,)),
        ((4, 9), (7,)),
        ((4,), (7, 9)),
        ((4,), (7,), (9,)),
    ]
    assert all(len(p) <= 2 for p in enumerate_partitions(range(5), 2))
    assert len(enumerate_partitions(range(5), 2)) == 1 + 15
    assert enumerate_partitions([]) == []
    with pytest.raises(ValueError):
        enumerate_partitions(range(11))


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 7), st.integers(1, 7))
def test_partitions_distinct_and_valid(size, max_blocks):
    parts = enumerate_partitions(range(size), max_blocks)
    assert len({p.blocks for p in parts}) == len(parts)
    for p in parts:
        assert p.subset == tuple(range(size)) and len(p) <= max_blocks


def test_config_parsing(tmp_path):
    text = """
    # a small sweep
    n_range = 3..4
    d_range = 2-3
    samples = 7
    q_grid = 0.7, 1.0, 2.0
    beta_grid = 0 0.5 1
    checks = epi_triple, triangle
    exploratory = yes
    """
    values = parse_config(text)
    assert values["n_range"] == (3, 4) and values["d_range"] == (2, 3)
    assert values["q_grid"] == (0.7, 1.0, 2.0)
    assert values["checks"] == ("epi_triple", "triangle")
    path = tmp_path / "cfg.txt"
    path.write_text(text)
    cfg = load_config(path, samples=2, seed=None)
    assert cfg.samples == 2 and cfg.seed == 0 and cfg.exploratory


@pytest.mark.parametrize(
    "text",
    ["samples = 0", "nonsense = 1", "samples", "q_grid = a, b", "checks = epi_triple, bogus",
     "q_grid = -1", "beta_grid = 1.5", "n_range = 5..3", "exploratory = maybe"],
)
def test_config_errors(text):
    with pytest.raises(ConfigError):
        load_config(None, **parse_config(text))


def test_sweep_row_count_example():
    cfg = SweepConfig(n_range=(3, 4), d_range=(2, 3), samples=10, q_grid=(2.0,), checks=("epi_triple",))
    buf = io.StringIO()
    summary = run_sweep(cfg, stream=buf)
    rows = list(csv.reader(io.StringIO(buf.getvalue())))
    assert tuple(rows[0]) == CSV_HEADER
    ns = [g.n for _, g in sample_states(cfg)]
    assert len(rows) - 1 == sum(3 * {3: 1, 4: 4}[n] for n in ns)
    assert summary.ok and summary.violations == 0
    assert all(r[10] == "1" for r in rows[1:])


def test_predicted_rows_match():
    cfg = SweepConfig(n_range=(3, 6), d_range=(2, 3), samples=4, q_grid=(0.8, 3.1), beta_grid=(0.0, 0.5, 1.0))
    buf = io.StringIO()
    summary = run_sweep(cfg, stream=buf)
    states = sample_states(cfg)
    for check in CHECKS:
        expected = sum(predicted_rows(cfg, g.n, check) for _, g in states)
        assert summary.checks[check].rows == expected, check
    assert summary.rows == buf.getvalue().count("\n") - 1
    assert summary.ok


def test_sweep_deterministic(tmp_path):
    cfg = SweepConfig(samples=2, seed=5, q_grid=(0.9, 3.3), out=str(tmp_path / "a.csv"))
    run_sweep(cfg)
    first = (tmp_path / "a.csv").read_bytes()
    run_sweep(cfg)
    assert (tmp_path / "a.csv").read_bytes() == first


def test_sweep_unwritable():
    with pytest.raises(ConfigError):
        run_sweep(SweepConfig(samples=1, out="/nonexistent/dir/x.csv"))


def test_exploratory_rows_never_fail():
    cfg = SweepConfig(samples=3, q_grid=(2.5,), checks=("epi_triple", "triangle"), exploratory=True)
    summary = run_sweep(cfg)
    assert summary.ok
    buf = io.StringIO()
    run_sweep(cfg, stream=buf)
    assert all(line.endswith(",1") for line in buf.getvalue().splitlines()[1:])
    from gwepi.measures import RangeError

    with pytest.raises(RangeError):
        run_sweep(SweepConfig(samples=1, q_grid=(2.5,), checks=("epi_triple",)))


def test_violation_sets_summary_flag():
    # a tolerance of -1 demands a gap of at least 1, which no row has
    cfg = SweepConfig(samples=1, q_grid=(2.0,), checks=("epi_triple",), tol=-1.0)
    assert not run_sweep(cfg).ok


def test_certification_blocks():
    blocks = list(certification_blocks(3))
    # 3 pairs with 2 single blocks, one triple with 3 singles and 3 pairs
    assert len(blocks) == 3 * 2 + 3 + 3


def test_certification_w3_pairs():
    states = [(0, GWState.uniform(3))]
    cfg = SweepConfig(samples=1, restarts=6)
    rep = run_oracle_certification(cfg, states=states, measures=[("concurrence", None), ("tsallis", 2.0)])
    assert rep.ok
    pair_rows = [r for r in rep.rows if len(r.subset) == 2 and r.measure == "concurrence"]
    assert all(r.closed_form == pytest.approx(2 / 3, abs=1e-15) for r in pair_rows)
    full = [r for r in rep.rows if len(r.subset) == 3 and r.measure == "concurrence" and len(r.block) == 1]
    # the whole state is pure, so the roof is exact
    assert all(abs(r.min_excess) < 1e-12 for r in full)
    buf = io.StringIO()
    rep.write_csv(buf)
    assert buf.getvalue().count("\n") == len(rep.rows) + 1
    assert "PASS" in rep.format()


def test_certification_qutrit_tsallis():
    g = random_gw(4, 3, 8)
    cfg = SweepConfig(samples=1, restarts=8)
    rep = run_oracle_certification(cfg, states=[(0, g)], measures=[("tsallis", 2.0)])
    assert rep.ok
    assert max(abs(r.min_excess) for r in rep.rows) < 5e-3
