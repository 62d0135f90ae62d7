"""Level-p QAOA on the even ring as an ensemble of independent pseudospins.

In the RING convention (``H_C = sum Z_j Z_{j+1}``, minimized) the n-qubit
evolution of an even ring splits into n/2 two-level systems labelled by
``theta_k = (2k+1) pi / n``. Each sees

    U_B(beta)  = exp(-2i beta  Z)
    U_C(gamma) = exp(-2i gamma k.sigma),   k = (sin theta, 0, cos theta)

starting from |0>, and contributes ``F_k = tr[k.sigma U Z U^dag]`` to the
energy. Products of these rotations are accumulated in closed form as unit
quaternions ``(w, x, y, z) <-> w I - i (x X + y Y + z Z)``, so evaluating a
schedule costs O(p n) real operations. All evaluators broadcast over leading
batch axes of the angle arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import RingSizeError
from .schedule import AngleSchedule, Convention

__all__ = [
    "PseudospinEnsemble",
    "RingMetrics",
    "FourierSpectrum",
    "pseudospin_ensemble",
    "pseudospin_unitary",
    "pseudospin_expectation",
    "pseudospin_values",
    "ring_energy",
    "ring_energy_per_site",
    "ring_expectation",
    "ring_metrics",
    "fourier_spectrum",
    "ring_p2_closed_form",
    "ring_p2_manifold_form",
    "convention_map",
    "tilde_value",
    "approximation_ratio",
    "schedule_from_tilde",
    "default_probe_size",
]


@dataclass(frozen=True)
class PseudospinEnsemble:
    n: int
    thetas: np.ndarray


@dataclass(frozen=True)
class RingMetrics:
    n: int
    F: float
    F_per_site: float
    r: float


@dataclass(frozen=True)
class FourierSpectrum:
    """Even-harmonic coefficients ``d_{2s}`` of the k-summable part of F_k.

    ``residual`` is the largest misfit between the reconstruction and the
    symmetrized values ``(F(theta) + F(pi - theta)) / 2`` on the probe
    ensemble. Odd harmonics cancel in the ensemble sum and are not fitted.
    """

    p: int
    coefficients: np.ndarray
    n_probe: int
    residual: float

    @property
    def d0(self) -> float:
        return float(self.coefficients[0])

    def energy(self, n: int) -> float:
        """Ring energy for any even ``n >= 2p + 2``."""
        return n / 2 * self.d0

    def evaluate(self, theta) -> np.ndarray:
        s = np.arange(self.coefficients.size)
        return np.cos(2 * np.multiply.outer(np.asarray(theta, dtype=float), s)) @ self.coefficients


def _check_ring_size(n: int):
    if n % 2:
        raise RingSizeError(f"ring size must be even, got {n}")
    if n < 4:
        raise RingSizeError(f"ring size must be at least 4, got {n}")


def pseudospin_ensemble(n: int) -> PseudospinEnsemble:
    _check_ring_size(n)
    return PseudospinEnsemble(n, (2 * np.arange(n // 2) + 1) * math.pi / n)


def _quaternions(gammas, betas, thetas):
    """Accumulate U = U_B(b_p) U_C(g_p) ... U_B(b_1) U_C(g_1) per pseudospin.

    ``gammas``/``betas`` have shape (..., p); ``thetas`` has shape (K,).
    Returns four arrays of shape (..., K).
    """
    gammas = np.asarray(gammas, dtype=float)
    betas = np.asarray(betas, dtype=float)
    thetas = np.asarray(thetas, dtype=float)
    kx, kz = np.sin(thetas), np.cos(thetas)
    shape = np.broadcast_shapes(gammas.shape[:-1], betas.shape[:-1]) + thetas.shape
    w = np.ones(shape)
    x = np.zeros(shape)
    y = np.zeros(shape)
    z = np.zeros(shape)
    for level in range(gammas.shape[-1]):
        g = gammas[..., level, None]
        cg, sg = np.cos(2 * g), np.sin(2 * g)
        ax, az = sg * kx, sg * kz
        w, x, y, z = (
            cg * w - ax * x - az * z,
            cg * x + ax * w - az * y,
            cg * y + az * x - ax * z,
            cg * z + az * w + ax * y,
        )
        b = betas[..., level, None]
        cb, sb = np.cos(2 * b), np.sin(2 * b)
        w, x, y, z = cb * w - sb * z, cb * x - sb * y, cb * y + sb * x, cb * z + sb * w
    return w, x, y, z


def pseudospin_values(gammas, betas, thetas) -> np.ndarray:
    """F_k for every theta, broadcast over batch axes of the angles."""
    thetas = np.asarray(thetas, dtype=float)
    w, x, y, z = _quaternions(gammas, betas, thetas)
    # k . (U Z U^dag rotated Bloch vector), times the trace factor 2
    return 2 * (np.sin(thetas) * 2 * (x * z + w * y) + np.cos(thetas) * (1 - 2 * (x * x + y * y)))


def pseudospin_unitary(theta: float, sched: AngleSchedule) -> np.ndarray:
    """The accumulated 2x2 unitary of one pseudospin."""
    sched.require(Convention.RING)
    w, x, y, z = (float(c[0]) for c in _quaternions(sched.gammas, sched.betas, [theta]))
    return np.array([[w - 1j * z, -1j * x - y], [-1j * x + y, w + 1j * z]])


def pseudospin_expectation(theta: float, sched: AngleSchedule) -> float:
    sched.require(Convention.RING)
    return float(pseudospin_values(sched.gammas, sched.betas, [theta])[0])


def ring_energy(gammas, betas, n: int):
    """Ring energy F, vectorized over leading axes of the angle arrays."""
    _check_ring_size(n)
    values = pseudospin_values(gammas, betas, pseudospin_ensemble(n).thetas)
    return values.sum(axis=-1)


def ring_energy_per_site(gammas, betas, n: int):
    return ring_energy(gammas, betas, n) / n


def approximation_ratio(F_per_site: float) -> float:
    return 0.5 * (1 - F_per_site)


def ring_metrics(n: int, F: float) -> RingMetrics:
    return RingMetrics(n, F, F / n, approximation_ratio(F / n))


def ring_expectation(n: int, sched: AngleSchedule) -> RingMetrics:
    sched.require(Convention.RING)
    F = float(ring_energy(np.array(sched.gammas), np.array(sched.betas), n))
    return ring_metrics(n, F)


def default_probe_size(p: int) -> int:
    return max(4 * p + 4, 32)


def fourier_spectrum(sched: AngleSchedule, n_probe: int | None = None) -> FourierSpectrum:
    """Fit the cosine series ``F_k = sum_s d_{2s} cos(2 s theta_k)``.

    The fit uses every even harmonic the probe ensemble can resolve
    (``s < n_probe / 4``). ``d0`` is exact whenever ``n_probe >= 2p + 2``;
    the higher coefficients are alias-free only once ``n_probe > 4p``.
    """
    sched.require(Convention.RING)
    p = sched.p
    if n_probe is None:
        n_probe = default_probe_size(p)
    if n_probe % 2:
        raise RingSizeError(f"probe size must be even, got {n_probe}")
    if n_probe < max(2 * p + 2, 4):
        raise RingSizeError(f"probe size {n_probe} cannot resolve level {p}; need at least {max(2 * p + 2, 4)}")
    thetas = pseudospin_ensemble(n_probe).thetas
    values = pseudospin_values(np.array(sched.gammas), np.array(sched.betas), thetas)
    even_part = 0.5 * (values + values[::-1])
    n_coef = (n_probe + 3) // 4
    basis = np.cos(2 * np.multiply.outer(thetas, np.arange(n_coef)))
    coef, *_ = np.linalg.lstsq(basis, even_part, rcond=None)
    residual = float(np.max(np.abs(basis @ coef - even_part)))
    return FourierSpectrum(p, coef, n_probe, residual)


def ring_p2_closed_form(g1, b1, g2, b2):
    """Energy per site at level 2 as an explicit cosine polynomial."""
    c = np.cos
    G1, B1, G2, B2 = 4 * np.asarray(g1), 4 * np.asarray(b1), 4 * np.asarray(g2), 4 * np.asarray(b2)
    terms = (
        -7 * c(B1 + B2 + G1 + G2)
        - 6 * c(B1 + B2 + G1)
        + 3 * c(B1 + B2 - G1 + G2)
        + 4 * c(B1 + B2 + G2)
        + 3 * c(B1 - B2 + G1 + G2)
        - 6 * c(B1 - B2 + G1)
        - 3 * c(B1 - B2 - G1 + G2)
        + 4 * c(B1 + G1 + G2)
        - 4 * c(B1 + G1)
        - 4 * c(B1 + G2)
        - 3 * c(-B1 + B2 + G1 + G2)
        + 6 * c(-B1 + B2 + G1)
        + 3 * c(-B1 + B2 - G1 + G2)
        + 7 * c(-B1 - B2 + G1 + G2)
        + 6 * c(-B1 - B2 + G1)
        - 3 * c(-B1 - B2 - G1 + G2)
        - 4 * c(-B1 - B2 + G2)
        - 4 * c(-B1 + G1 + G2)
        + 4 * c(-B1 + G1)
        + 4 * c(-B1 + G2)
        - 6 * c(B2 + G1 + G2)
        - 6 * c(B2 - G1 + G2)
        - 4 * c(B2 + G2)
        + 6 * c(-B2 + G1 + G2)
        + 6 * c(-B2 - G1 + G2)
        + 4 * c(-B2 + G2)
    )
    out = terms / 64
    return float(out) if np.ndim(out) == 0 else out


def ring_p2_manifold_form(g1, b1):
    """Level-2 energy per site restricted to gamma_2 = -beta_1, beta_2 = -gamma_1."""
    c = np.cos
    g, b = np.asarray(g1), np.asarray(b1)
    terms = (
        -2 * c(8 * b)
        + 3 * c(8 * b + 8 * g)
        - 12 * c(4 * b + 8 * g)
        - 8 * c(4 * b + 4 * g)
        + 12 * c(4 * b - 8 * g)
        + 8 * c(4 * b - 4 * g)
        + 7 * c(8 * b - 8 * g)
        - 8 * c(8 * b - 4 * g)
        + 6 * c(8 * g)
        + 8 * c(4 * g)
        - 14
    )
    out = terms / 64
    return float(out) if np.ndim(out) == 0 else out


def convention_map(tilde_gamma: float, tilde_beta: float) -> tuple[float, float]:
    """MAXCUT-form angles to RING-form angles."""
    return -tilde_gamma / 2, tilde_beta


def tilde_value(F: float, n: int) -> float:
    """MAXCUT-form expected cut from the RING-form energy."""
    return (n - F) / 2


def schedule_from_tilde(tilde: AngleSchedule) -> AngleSchedule:
    tilde.require(Convention.MAXCUT)
    pairs = [convention_map(g, b) for g, b in zip(tilde.gammas, tilde.betas)]
    return AngleSchedule(tuple(g for g, _ in pairs), tuple(b for _, b in pairs), Convention.RING)
