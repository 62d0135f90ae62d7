"""
Level-1 QAOA on arbitrary graphs
================================

At one level each edge only sees its local neighbourhood: the two degrees and
the number of triangles through it. Grouping edges by that triple gives the
expected cut in closed form.
"""

import math

import numpy as np

from qaoa_maxcut import AngleSchedule, Convention, classify_edges, graph_expectation_p1, simulate_expectation
from qaoa_maxcut.graph import Graph, erdos_renyi_graph
from qaoa_maxcut.p1 import regular_triangle_free_optimum

g = erdos_renyi_graph(9, 0.45, seed=3)
print(f"{g.n_vertices} vertices, {g.n_edges} edges")
for env, count in classify_edges(g).items():
    print(f"  class (d={env.d}, e={env.e}, f={env.f}) x{count}")

gamma, beta = 0.4, 0.3
closed = graph_expectation_p1(g, gamma, beta)
brute = simulate_expectation(g, AngleSchedule((gamma,), (beta,), Convention.MAXCUT))
print(f"closed form {closed:.12f}   state vector {brute:.12f}")

# triangle-free 3-regular graph: K_{3,3}
k33 = Graph.from_edges([(i, j) for i in range(3) for j in range(3, 6)])
opt = regular_triangle_free_optimum(2)
print(f"K33 best ratio {opt.ratio:.6f} at gamma={opt.gamma_star:.4f}, beta={opt.beta_star:.4f}")

gammas = np.linspace(0, math.pi / 2, 181)
betas = np.linspace(0, math.pi / 4, 91)
G, B = np.meshgrid(gammas, betas, indexing="ij")
grid = graph_expectation_p1(k33, G, B) / k33.n_edges
i, j = np.unravel_index(grid.argmax(), grid.shape)
print(f"coarse grid maximum {grid[i, j]:.6f} at ({gammas[i]:.4f}, {betas[j]:.4f})")
