"""
Optimal ring angles, level by level
===================================

Minimizes the energy per site on manifold M1, seeding each level with the
previous optimum, and prints the approximation ratio alongside
(2p+1)/(2p+2).
"""

import math
import time

from qaoa_maxcut import OptimizerConfig, optimize

P_MAX = 8
warm = None
t0 = time.perf_counter()
print(" p        r   (2p+1)/(2p+2)   free angles / pi")
for p in range(1, P_MAX + 1):
    res = optimize(p, "m1", OptimizerConfig(starts=32), seed=0, warm_start=warm)
    warm = res.best.free
    angles = " ".join(f"{x / math.pi:.4f}" for x in res.best.free)
    print(f"{p:2d}  {res.best_r:.6f}   {(2 * p + 1) / (2 * p + 2):.6f}      {angles}")
    print(f"    distinct optima found: {len(res.optima)}")
print(f"total {time.perf_counter() - t0:.1f}s")
