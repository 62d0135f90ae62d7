"""Closed-form level-1 QAOA expectation for MaxCut on arbitrary graphs.

For an edge with local class (d, e, f) the cut probability after one level is

    1/2 + 1/4 sin(4b) sin(g) (cos^d g + cos^e g)
        - 1/4 sin^2(2b) cos^(d+e-2f) g (1 - cos^f 2g)

with 0**0 taken as 1. The whole-graph value sums this over edge classes
weighted by multiplicity. Angles follow the MAXCUT convention
(``U_C = exp(-i g sum (1 - ZZ)/2)``, ``U_B = exp(-i b sum X)``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import EdgeLocalEnv, Graph, classify_edges, edge_local_env

__all__ = [
    "P1EdgeExpectation",
    "RegularOptimum",
    "edge_expectation_p1",
    "edge_expectation_record",
    "graph_expectation_p1",
    "graph_expectation_p1_by_edge",
    "regular_triangle_free_optimum",
    "regular_ratio",
]


@dataclass(frozen=True)
class P1EdgeExpectation:
    value: float
    env: EdgeLocalEnv
    gamma: float
    beta: float


@dataclass(frozen=True)
class RegularOptimum:
    d: int
    ratio: float
    gamma_star: float
    beta_star: float


def edge_expectation_p1(env: EdgeLocalEnv, gamma, beta):
    """Cut probability of one edge after a single QAOA level.

    ``gamma`` and ``beta`` may be numpy arrays; they broadcast.
    """
    d, e, f = env
    cg = np.cos(gamma)
    # integer powers keep cos**0 == 1 even where cos(gamma) == 0
    drive = 0.25 * np.sin(4 * beta) * np.sin(gamma) * (cg**d + cg**e)
    if f:
        tri = 0.25 * np.sin(2 * beta) ** 2 * cg ** (d + e - 2 * f) * (1 - np.cos(2 * gamma) ** f)
    else:
        tri = 0.0
    out = 0.5 + drive - tri
    return float(out) if np.ndim(out) == 0 else out


def edge_expectation_record(env: EdgeLocalEnv, gamma: float, beta: float) -> P1EdgeExpectation:
    return P1EdgeExpectation(edge_expectation_p1(env, gamma, beta), env, gamma, beta)


def graph_expectation_p1(g: Graph, gamma, beta):
    """Expected cut size after one level, aggregated over edge classes."""
    total = 0.0
    for env, count in classify_edges(g).items():
        total = total + count * edge_expectation_p1(env, gamma, beta)
    return float(total) if np.ndim(total) == 0 else total


def graph_expectation_p1_by_edge(g: Graph, gamma: float, beta: float) -> float:
    """Same value as :func:`graph_expectation_p1`, summed edge by edge."""
    return float(sum(edge_expectation_p1(edge_local_env(g, e), gamma, beta) for e in g.edges))


def regular_ratio(d: int) -> float:
    """Optimal level-1 ratio F*/|E| on a triangle-free (d+1)-regular graph."""
    if d == 0:
        return 1.0
    return 0.5 * (1 + (d + 1) ** -0.5 * (d / (d + 1)) ** (d / 2))


def regular_triangle_free_optimum(d: int) -> RegularOptimum:
    if d < 0:
        raise ValueError("d must be non-negative")
    gamma = math.pi / 2 if d == 0 else math.atan(1 / math.sqrt(d))
    return RegularOptimum(d, regular_ratio(d), gamma, math.pi / 8)
