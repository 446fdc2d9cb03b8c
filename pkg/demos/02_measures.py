"""Concurrence, Tsallis-q entropy and the tangle-to-Tsallis map f_q."""

import numpy as np

from gwepi import Bipartition, GWState, build_gw_state, concurrence_pure, f_q, gw_tangle, gw_tsallis
from gwepi import tsallis_entanglement_pure
from gwepi.measures import Q_HIGH, Q_LOW

w3 = build_gw_state(GWState.uniform(3))
cut = Bipartition([0], [1, 2])
c = concurrence_pure(w3, cut)
print(f"C(W3, 0|12) = {c:.7f}   (sqrt(8)/3 = {np.sqrt(8) / 3:.7f})")
print(f"T_2(W3, 0|12) = {tsallis_entanglement_pure(w3, cut, 2):.6f}   f_2(C^2) = {f_q(c * c, 2):.6f}")

# f_q for a few q; f_2 and f_3 are linear, f_4 is a quadratic
x = np.linspace(0, 1, 6)
for q in (Q_LOW, 1.0, 2.0, 3.0, 4.0, Q_HIGH):
    print(f"q={q:.4f}  f_q(x) =", np.round(f_q(x, q), 5))

# for GW reductions the entanglement of a block is a function of party weights only
g = GWState.from_weights([0.4, 0.3, 0.2, 0.1])
for subset, block in [((0, 1, 2, 3), (0,)), ((0, 1, 2), (0,)), ((0, 1, 2, 3), (0, 1))]:
    t = gw_tangle(g, subset, block)
    print(f"S={subset} P={block}: tangle {t:.4f}  T_2 {gw_tsallis(g, subset, block, 2):.4f}"
          f"  T_0.8 {gw_tsallis(g, subset, block, 0.8):.4f}")
