"""
Square patches with three slopes: the dynamic program and the determinant agree.
"""

import time

from pseudobound import bipermutation_of_patch, count_reroutings
from pseudobound.lgv import format_lgv_table, lgv_count, lgv_matrix, lgv_table
from pseudobound.oracle import gen_grid3

print(lgv_matrix(2).tolist())   # the 3 x 3 path-count matrix
print(lgv_count(2))             # its determinant: 20

for side in range(1, 5):
    t0 = time.perf_counter()
    dp = count_reroutings(bipermutation_of_patch(gen_grid3(side)))
    t_dp = time.perf_counter() - t0
    t0 = time.perf_counter()
    det = lgv_count(side)
    t_det = time.perf_counter() - t0
    print(f"side {side}: dp {dp} ({t_dp:.3f}s)  det {det} ({t_det:.4f}s)")

# the determinant scales far beyond what the dynamic program can reach
print(format_lgv_table(lgv_table([10, 20, 50])))
