"""Brute-force state-vector QAOA for arbitrary graphs.

Amplitudes are little-endian: qubit ``j`` is bit ``j`` of the basis index.
The cost layer is a diagonal phase; the mixer is ``exp(-i beta X)`` on every
qubit. This module is the reference every closed form is checked against.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import QAOAError, QubitCapError, ScheduleError
from .graph import Graph
from .schedule import AngleSchedule, Convention

__all__ = [
    "DEFAULT_QUBIT_CAP",
    "HARD_QUBIT_CAP",
    "PRNG_NAME",
    "qubit_cap",
    "cost_diagonal",
    "initial_state",
    "apply_layer",
    "layer_states",
    "final_state",
    "simulate_expectation",
    "edge_expectations",
    "sample_bitstrings",
    "maxcut_bruteforce",
]

DEFAULT_QUBIT_CAP = 22
HARD_QUBIT_CAP = 26
BRUTEFORCE_CAP = 24
PRNG_NAME = "numpy.random.PCG64"


def qubit_cap(override: int | None = None) -> int:
    """Active qubit cap: explicit override, else ``QAOA_QUBIT_CAP``, else 22."""
    if override is None:
        env = os.environ.get("QAOA_QUBIT_CAP")
        override = int(env) if env else DEFAULT_QUBIT_CAP
    if override > HARD_QUBIT_CAP:
        raise QubitCapError(f"qubit cap {override} exceeds the hard limit {HARD_QUBIT_CAP}")
    return override


def _check_size(g: Graph, cap: int | None):
    limit = qubit_cap(cap)
    if g.n_vertices > limit:
        raise QubitCapError(f"{g.n_vertices} qubits exceeds the cap of {limit}")


def cut_values(g: Graph) -> np.ndarray:
    """Cut size of every basis state, as int32."""
    idx = np.arange(1 << g.n_vertices, dtype=np.int64)
    cut = np.zeros(idx.size, dtype=np.int32)
    for u, v in g.edges:
        cut += ((idx >> u) ^ (idx >> v)) & 1
    return cut


def cost_diagonal(g: Graph, convention: Convention) -> np.ndarray:
    """Diagonal of H_C in the computational basis."""
    cut = cut_values(g).astype(float)
    if Convention(convention) is Convention.MAXCUT:
        return cut
    # sum of Z_u Z_v = (#uncut) - (#cut)
    return g.n_edges - 2.0 * cut


def initial_state(n: int) -> np.ndarray:
    return np.full(1 << n, 2.0 ** (-n / 2), dtype=complex)


def _mix(state: np.ndarray, n: int, beta: float) -> np.ndarray:
    c, s = np.cos(beta), -1j * np.sin(beta)
    for j in range(n):
        view = state.reshape(1 << (n - j - 1), 2, 1 << j)
        a0 = view[:, 0, :].copy()
        a1 = view[:, 1, :]
        view[:, 0, :] = c * a0 + s * a1
        view[:, 1, :] = c * a1 + s * a0
    return state


def apply_layer(state: np.ndarray, diag: np.ndarray, gamma: float, beta: float) -> np.ndarray:
    """One level ``U_B(beta) U_C(gamma)``; returns a new array."""
    n = int(np.log2(state.size))
    out = state * np.exp(-1j * gamma * diag)
    return _mix(out, n, beta)


def layer_states(g: Graph, sched: AngleSchedule, max_qubits: int | None = None):
    """Yield the state after each level, starting with the initial state."""
    _check_size(g, max_qubits)
    if len(sched.gammas) != len(sched.betas):
        raise ScheduleError("gamma/beta length mismatch")
    diag = cost_diagonal(g, sched.convention)
    state = initial_state(g.n_vertices)
    yield state
    for gamma, beta in zip(sched.gammas, sched.betas):
        state = apply_layer(state, diag, gamma, beta)
        yield state


def final_state(g: Graph, sched: AngleSchedule, max_qubits: int | None = None) -> np.ndarray:
    state = None
    for state in layer_states(g, sched, max_qubits):
        pass
    return state


def simulate_expectation(g: Graph, sched: AngleSchedule, max_qubits: int | None = None) -> float:
    """<psi|H_C|psi> under the schedule's convention."""
    psi = final_state(g, sched, max_qubits)
    probs = psi.real**2 + psi.imag**2
    return float(probs @ cost_diagonal(g, sched.convention))


def edge_expectations(g: Graph, sched: AngleSchedule, max_qubits: int | None = None) -> np.ndarray:
    """Per-edge expectation in ``g.edges`` order.

    MAXCUT gives <(1 - Z_u Z_v)/2>, RING gives <Z_u Z_v>.
    """
    psi = final_state(g, sched, max_qubits)
    probs = psi.real**2 + psi.imag**2
    idx = np.arange(probs.size, dtype=np.int64)
    out = np.empty(g.n_edges)
    for i, (u, v) in enumerate(g.edges):
        cut_prob = probs[(((idx >> u) ^ (idx >> v)) & 1).astype(bool)].sum()
        out[i] = cut_prob if sched.convention is Convention.MAXCUT else 1.0 - 2.0 * cut_prob
    return out


def _bitstring(index: int, n: int) -> str:
    # vertex j is character j
    return "".join("1" if (index >> j) & 1 else "0" for j in range(n))


def sample_bitstrings(
    g: Graph, sched: AngleSchedule, count: int, seed: int, max_qubits: int | None = None
) -> list[tuple[str, int]]:
    """Draw ``count`` measurement outcomes by inverse CDF.

    Bitstrings list vertex 0 first. Each outcome is paired with its cut
    value. The generator is ``numpy.random.default_rng(seed)``.
    """
    if count < 1:
        raise QAOAError("count must be at least 1")
    psi = final_state(g, sched, max_qubits)
    cdf = np.cumsum(psi.real**2 + psi.imag**2)
    rng = np.random.default_rng(seed)
    draws = rng.random(count) * cdf[-1]
    picks = np.minimum(np.searchsorted(cdf, draws, side="right"), cdf.size - 1)
    cuts = cut_values(g)
    n = g.n_vertices
    return [(_bitstring(int(i), n), int(cuts[i])) for i in picks]


def maxcut_bruteforce(g: Graph) -> tuple[int, str]:
    """Exhaustive maximum cut; ties go to the smallest basis index."""
    if g.n_vertices > BRUTEFORCE_CAP:
        raise QubitCapError(f"{g.n_vertices} vertices exceeds the brute-force cap of {BRUTEFORCE_CAP}")
    cuts = cut_values(g)
    best = int(np.argmax(cuts))
    return int(cuts[best]), _bitstring(best, g.n_vertices)
