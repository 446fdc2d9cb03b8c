"""Polygon inequalities on a few hand-picked states."""

from gwepi import GWState, Partition, check_bipartite_sum, check_epi_partition, check_epi_triple
from gwepi import check_triangle, check_weighted_epi
from gwepi.inequalities import triangle_sides

g = GWState.from_weights([0.7, 0.2, 0.1])
print("triangle sides at q=2:", triangle_sides(g, (0, 1, 2), 2.0))
for r in (check_epi_triple(g, (0, 1, 2), 2.0), *check_triangle(g, (0, 1, 2), 2.0)):
    print(f"{r.check:<15} {r.lhs:.4f} <= {r.rhs:.4f}  gap {r.gap:.4f}")

# block version on five parties
w5 = GWState.uniform(5)
part = Partition([[0], [1], [2, 3]])
r = check_epi_partition(w5, part, 2, 2.0)
print(f"blocks {part.blocks}, focus (2, 3): {r.lhs:.2f} <= {r.rhs:.2f}")

# weighted version: the largest block on the left, the rest weighted by rank popcount
w4 = GWState.uniform(4)
r = check_weighted_epi(w4, Partition([[0], [1], [2], [3]]), 2.0, 0.5)
print(f"weighted, beta=0.5: {r.lhs:.6f} <= {r.rhs:.6f}")
for t in r.terms:
    print(f"   block {t.block} rank {t.rank} popcount {t.weight} coefficient {t.coefficient:.6f} term {t.value:.6f}")

# two groups of blocks; q=2 and q=3 are tight because f_2 and f_3 are linear
for q in (2.0, 3.0, 4.0):
    r = check_bipartite_sum(w5, [[0], [1]], [[2], [3]], q)
    print(f"bipartite sum q={q}: {r.lhs:.6f} <= {r.rhs:.6f}  gap {r.gap:.2e}")
