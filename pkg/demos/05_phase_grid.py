"""A small phase-transition grid: success rate vs measurement count and rank.

The full-size figures use n1 = n2 = 30, n3 = 5 with m up to n1*n2*n3 and
take hours; this desk-scale grid shows the same transition in about a
minute.  Each cell reruns the full generate/measure/solve pipeline on its
own random substream, so the grid is reproducible cell by cell.
"""

import tubal as tb
from tubal.io import write_grid_csv

n, n3 = 12, 3
ranks = [1, 2, 3]
values = [tb.dof(n, n, n3, 2) // 2, tb.dof(n, n, n3, 2),
          tb.gaussian_bound(n, n, n3, 1), tb.gaussian_bound(n, n, n3, 3)]
print(f"grid at {n}x{n}x{n3}, m in {values}, r in {ranks}")

grid = tb.phase_grid("gaussian", (n, n, n3), values=values, ranks=ranks,
                     trials=3, base_seed=0)

print("m\\r  " + "  ".join(f"r={r}" for r in ranks))
for v in values:
    rates = [c.success_rate for c in grid.cells if c.m_or_p == v]
    print(f"{v:4d}  " + "  ".join(f"{rate:.2f}" for rate in rates))

write_grid_csv("phase_grid_demo.csv", grid)
print("wrote phase_grid_demo.csv")
