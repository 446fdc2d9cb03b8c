"""Random sweeps, including the unproven window q in (2, 3)."""

import io

import numpy as np

from gwepi import batch
from gwepi.harness import SweepConfig, predicted_rows, run_sweep, sample_states
from gwepi.measures import polygon_q_grid

cfg = SweepConfig(n_range=(3, 5), d_range=(2, 4), samples=5, seed=1, q_grid=(0.8, 2.0, 3.5),
                  beta_grid=(0.0, 0.5, 1.0))
buf = io.StringIO()
summary = run_sweep(cfg, stream=buf)
print(summary.format())
print("predicted rows:", sum(predicted_rows(cfg, g.n, c) for _, g in sample_states(cfg) for c in cfg.checks))
print(buf.getvalue().splitlines()[1])

# array form of the triple check over many states
states = sample_states(SweepConfig(n_range=(3, 6), d_range=(2, 4), samples=300, seed=2))
lams = [g.weights for _, g in states]
grid = polygon_q_grid()
worst = min(batch.epi_triple_gaps(lam, grid).min() for lam in lams)
print(f"300 states x 25 q: smallest triple gap {worst:.3e}")

# between q=2 and q=3 nothing is proven; the exploratory flag records rows without judging them
inner = np.linspace(2.05, 2.95, 10)
worst = min(batch.epi_triple_gaps(lam, inner).min() for lam in lams)
print(f"q in (2, 3): smallest triple gap {worst:.3e}")
summary = run_sweep(SweepConfig(samples=3, q_grid=tuple(inner), checks=("epi_triple",), exploratory=True))
print(summary.format())
