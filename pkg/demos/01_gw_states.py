"""Building GW states and looking at their reductions."""

import numpy as np

from gwepi import GWState, build_gw_state, eigenvalues, lambda_weights, reduced_density
from gwepi.harness import random_gw

np.set_printoptions(precision=4, suppress=True)

# the three-qubit W state: one excitation shared equally
w3 = GWState.uniform(3)
psi = build_gw_state(w3)
print("W3 amplitudes:", psi.amplitudes)

# a single party sees weight 1/3 in |1> and 2/3 in |0>
print("rho_0 =\n", reduced_density(psi, [0]).entries.real)

# qudits: each party may be excited to any level 1..d-1
g = random_gw(4, 3, seed=1)
print("coefficients (party x level):\n", g.coeffs)
lam = lambda_weights(g)
print("party weights:", lam, "sum", lam.sum())

# every single-party reduction has spectrum {1 - L_i, L_i}
s = build_gw_state(g)
for i in range(g.n):
    w = eigenvalues(reduced_density(s, [i]))
    print(f"party {i}: spectrum {w[:2]}  vs  1-L = {1 - lam[i]:.4f}, L = {lam[i]:.4f}")

# larger reductions stay rank two as well
rho = reduced_density(s, [0, 1, 3])
print("rank of a 3-party reduction:", int(np.sum(eigenvalues(rho) > 1e-12)), "of", rho.dim)
