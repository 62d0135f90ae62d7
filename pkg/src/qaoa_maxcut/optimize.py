"""Angle search for the ring of disagrees.

The ring energy is pi/2-periodic in every angle and invariant under a
four-element group of schedule maps (reverse-and-negate-swap, reverse-swap,
global negation). The fixed set of the first map, ``gamma_i + beta_{p+1-i} = 0``
(manifold M1), carries every minimum found so far; M2 (``gamma_i =
beta_{p+1-i}``) carries the maxima. Both are parametrized by the interleaved
prefix ``(gamma_1, beta_1, gamma_2, beta_2, ...)`` of length p.

Descent is multi-start and vectorized across starts: central-difference
gradients, a BFGS (or plain steepest-descent) direction and Armijo
backtracking with a rounding-level slack on the decrease test.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .errors import ManifoldError, QAOAError
from .ring import approximation_ratio, ring_energy_per_site
from .schedule import AngleSchedule, Convention

__all__ = [
    "HALF_PI",
    "ManifoldKind",
    "ManifoldSpec",
    "OptimizerConfig",
    "Optimum",
    "OptimizationResult",
    "LandscapeGrid",
    "wrap_angles",
    "expand_manifold",
    "extract_free",
    "on_manifold",
    "manifold_objective",
    "finite_diff_gradient",
    "normal_derivative_check",
    "symmetry_images",
    "canonicalize",
    "equivalent",
    "optimize",
    "landscape_scan",
    "grid_local_minima",
    "descend",
]

HALF_PI = math.pi / 2


class ManifoldKind(str, enum.Enum):
    FULL = "full"
    M1 = "m1"
    M2 = "m2"


@dataclass(frozen=True)
class ManifoldSpec:
    kind: ManifoldKind
    p: int

    def __post_init__(self):
        object.__setattr__(self, "kind", ManifoldKind(self.kind))
        if self.p < 0:
            raise ManifoldError("level must be non-negative")

    @property
    def n_free(self) -> int:
        return 2 * self.p if self.kind is ManifoldKind.FULL else self.p


def wrap_angles(x, snap: float = 1e-12):
    """Reduce into [0, pi/2); values within ``snap`` of pi/2 become 0."""
    r = np.mod(np.asarray(x, dtype=float), HALF_PI)
    r = np.where(r >= HALF_PI - snap, 0.0, r)
    return r + 0.0


def _free_slots(p: int):
    """(kind, index) of the free angles in the interleaved prefix, 0-based."""
    slots = [("g", i // 2) if i % 2 == 0 else ("b", i // 2) for i in range(2 * p)]
    return slots[:p]


def _expand_arrays(free: np.ndarray, spec: ManifoldSpec):
    """Unwrapped (gammas, betas) for a batch of free vectors, shape (..., p)."""
    free = np.asarray(free, dtype=float)
    p = spec.p
    if free.shape[-1] != spec.n_free:
        raise ManifoldError(f"{spec.kind.value} at level {p} takes {spec.n_free} free angles, got {free.shape[-1]}")
    if spec.kind is ManifoldKind.FULL:
        return free[..., :p], free[..., p:]
    sign = -1.0 if spec.kind is ManifoldKind.M1 else 1.0
    gammas = np.empty(free.shape[:-1] + (p,))
    betas = np.empty_like(gammas)
    for j, (kind, i) in enumerate(_free_slots(p)):
        partner = p - 1 - i
        if kind == "g":
            gammas[..., i] = free[..., j]
            betas[..., partner] = sign * free[..., j]
        else:
            betas[..., i] = free[..., j]
            gammas[..., partner] = sign * free[..., j]
    return gammas, betas


def expand_manifold(free, spec: ManifoldSpec) -> AngleSchedule:
    """Full RING schedule from free parameters.

    Free angles are kept as given; angles fixed by the manifold constraint are
    wrapped into [0, pi/2).
    """
    free = np.atleast_1d(np.asarray(free, dtype=float))
    gammas, betas = _expand_arrays(free, spec)
    if spec.kind is not ManifoldKind.FULL:
        derived_g = np.ones(spec.p, dtype=bool)
        derived_b = np.ones(spec.p, dtype=bool)
        for kind, i in _free_slots(spec.p):
            (derived_g if kind == "g" else derived_b)[i] = False
        gammas = np.where(derived_g, wrap_angles(gammas), gammas)
        betas = np.where(derived_b, wrap_angles(betas), betas)
    return AngleSchedule(tuple(gammas), tuple(betas), Convention.RING)


def extract_free(sched: AngleSchedule, spec: ManifoldSpec) -> np.ndarray:
    """Free-parameter vector of a schedule (no manifold check)."""
    if sched.p != spec.p:
        raise ManifoldError(f"schedule has level {sched.p}, manifold has level {spec.p}")
    if spec.kind is ManifoldKind.FULL:
        return sched.as_vector()
    return np.array([sched.gammas[i] if k == "g" else sched.betas[i] for k, i in _free_slots(spec.p)])


def _circular_gap(a, b):
    d = np.mod(np.asarray(a) - np.asarray(b), HALF_PI)
    return np.minimum(d, HALF_PI - d)


def on_manifold(sched: AngleSchedule, kind: ManifoldKind, tol: float = 1e-12) -> bool:
    kind = ManifoldKind(kind)
    if kind is ManifoldKind.FULL:
        return True
    g, b = np.array(sched.gammas), np.array(sched.betas)
    rel = g + b[::-1] if kind is ManifoldKind.M1 else g - b[::-1]
    return bool(np.all(_circular_gap(rel, 0.0) <= tol))


def manifold_objective(spec: ManifoldSpec, n: int | None = None) -> Callable:
    """Energy per site as a batched function of free parameters."""
    n = 2 * spec.p + 2 if n is None else n

    def objective(free):
        gammas, betas = _expand_arrays(free, spec)
        return ring_energy_per_site(gammas, betas, n)

    return objective


def finite_diff_gradient(objective: Callable, point, step: float = 1e-5, batched: bool = False) -> np.ndarray:
    """Central-difference gradient.

    With ``batched=True`` the objective must accept an (m, d) array and is
    called once for all 2d probe points.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    x = np.asarray(point, dtype=float)
    d = x.size
    offsets = np.eye(d) * step
    if batched:
        probes = np.concatenate([x + offsets, x - offsets])
        vals = np.asarray(objective(probes))
        return (vals[:d] - vals[d:]) / (2 * step)
    return np.array([(objective(x + o) - objective(x - o)) / (2 * step) for o in offsets])


def _batched_gradient(objective, xs: np.ndarray, step: float) -> np.ndarray:
    """Central differences for many points with a single objective call."""
    m, d = xs.shape
    offsets = np.eye(d) * step
    probes = np.concatenate([xs[:, None, :] + offsets, xs[:, None, :] - offsets], axis=1)
    vals = np.asarray(objective(probes.reshape(-1, d))).reshape(m, 2 * d)
    return (vals[:, :d] - vals[:, d:]) / (2 * step)


def normal_derivative_check(sched: AngleSchedule, p: int | None = None, n: int | None = None,
                            step: float = 1e-5) -> float:
    """Largest |derivative| of the energy per site across M1.

    The normal directions are ``(e_{gamma_i} + e_{beta_{p+1-i}}) / sqrt 2``.
    """
    sched.require(Convention.RING)
    p = sched.p if p is None else p
    if sched.p != p:
        raise ManifoldError(f"schedule has level {sched.p}, expected {p}")
    if not on_manifold(sched, ManifoldKind.M1):
        raise ManifoldError("point not on manifold M1")
    spec = ManifoldSpec(ManifoldKind.FULL, p)
    objective = manifold_objective(spec, n)
    x = sched.as_vector()
    normals = np.zeros((p, 2 * p))
    for i in range(p):
        normals[i, i] = normals[i, p + (p - 1 - i)] = 1 / math.sqrt(2)
    probes = np.concatenate([x + step * normals, x - step * normals])
    vals = objective(probes)
    return float(np.max(np.abs((vals[:p] - vals[p:]) / (2 * step)))) if p else 0.0


def symmetry_images(sched: AngleSchedule) -> list[AngleSchedule]:
    """The schedule and its images under the ring's symmetry group, unwrapped."""
    g, b = np.array(sched.gammas), np.array(sched.betas)
    pairs = [(g, b), (-b[::-1], -g[::-1]), (b[::-1], g[::-1]), (-g, -b)]
    return [AngleSchedule(tuple(x), tuple(y), sched.convention) for x, y in pairs]


def _lex_less(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    for x, y in zip(a, b):
        if abs(x - y) > tol:
            return x < y
    return False


def canonicalize(sched: AngleSchedule, tol: float = 1e-9) -> AngleSchedule:
    """Lexicographically smallest wrapped representative of the symmetry orbit."""
    sched.require(Convention.RING)
    best = None
    for img in symmetry_images(sched):
        v = wrap_angles(img.as_vector())
        if best is None or _lex_less(v, best, tol):
            best = v
    p = sched.p
    return AngleSchedule(tuple(best[:p]), tuple(best[p:]), Convention.RING)


def equivalent(a: AngleSchedule, b: AngleSchedule, tol: float = 1e-6) -> bool:
    """True when the canonical forms agree within ``tol`` radians (mod pi/2)."""
    if a.p != b.p:
        return False
    if a.p == 0:
        return True
    ca, cb = canonicalize(a).as_vector(), canonicalize(b).as_vector()
    return bool(np.max(_circular_gap(ca, cb)) < tol)


@dataclass
class OptimizerConfig:
    starts: int = 32
    method: str = "bfgs"
    armijo_c: float = 1e-4
    shrink: float = 0.5
    fd_step: float = 1e-5
    grad_tol: float = 1e-8
    max_iter: int = 10_000
    dedup_tol: float = 1e-6
    n: int | None = None
    sense: str = "min"

    def __post_init__(self):
        if self.method not in ("bfgs", "gd"):
            raise QAOAError(f"unknown descent method {self.method!r}")
        if self.sense not in ("min", "max"):
            raise QAOAError(f"sense must be 'min' or 'max', got {self.sense!r}")
        if self.starts < 1:
            raise QAOAError("need at least one start")


@dataclass
class Optimum:
    schedule: AngleSchedule
    free: np.ndarray
    F_per_site: float
    grad_norm: float

    def to_dict(self) -> dict:
        return {
            "F_per_site": self.F_per_site,
            "r": approximation_ratio(self.F_per_site),
            "grad_norm": self.grad_norm,
            "free": [float(x) for x in self.free],
            "free_over_pi": [float(x / math.pi) for x in self.free],
            "schedule": self.schedule.to_dict(),
        }


@dataclass
class OptimizationResult:
    spec: ManifoldSpec
    n: int
    best_F_per_site: float
    best_r: float
    optima: list[Optimum]
    starts: int
    converged: int
    seed: int
    tolerances: dict = field(default_factory=dict)
    final_values: np.ndarray | None = None

    @property
    def best(self) -> Optimum | None:
        return self.optima[0] if self.optima else None

    def to_dict(self) -> dict:
        return {
            "manifold": self.spec.kind.value,
            "p": self.spec.p,
            "n": self.n,
            "best_F_per_site": self.best_F_per_site,
            "best_r": self.best_r,
            "starts": self.starts,
            "converged": self.converged,
            "seed": self.seed,
            "tolerances": dict(self.tolerances),
            "optima": [o.to_dict() for o in self.optima],
        }


def descend(objective: Callable, x0: np.ndarray, cfg: OptimizerConfig):
    """Minimize a batched objective from every row of ``x0`` at once.

    Returns ``(x, f, grad_norm, iterations)`` per start.
    """
    x = np.array(x0, dtype=float)
    m, d = x.shape
    f = np.asarray(objective(x), dtype=float)
    if d == 0:
        return x, f, np.zeros(m), np.zeros(m, dtype=int)
    g = _batched_gradient(objective, x, cfg.fd_step)
    gnorm = np.linalg.norm(g, axis=1)
    H = np.broadcast_to(np.eye(d), (m, d, d)).copy()
    step0 = np.ones(m)
    iters = np.zeros(m, dtype=int)
    active = gnorm >= cfg.grad_tol
    for _ in range(cfg.max_iter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        gi = g[idx]
        if cfg.method == "bfgs":
            direction = -np.einsum("kij,kj->ki", H[idx], gi)
            slope = np.einsum("ki,ki->k", gi, direction)
            bad = slope >= 0
            if bad.any():
                H[idx[bad]] = np.eye(d)
                direction[bad] = -gi[bad]
                slope[bad] = -np.einsum("ki,ki->k", gi[bad], gi[bad])
            t = np.ones(idx.size)
        else:
            direction = -gi
            slope = -np.einsum("ki,ki->k", gi, gi)
            t = np.minimum(step0[idx] * 2, 1e3)
        accepted = np.zeros(idx.size, dtype=bool)
        f_new = f[idx].copy()
        for _ in range(60):
            todo = np.flatnonzero(~accepted)
            if todo.size == 0:
                break
            trial = x[idx[todo]] + t[todo, None] * direction[todo]
            ft = np.asarray(objective(trial))
            f0 = f[idx[todo]]
            # a few ulps of slack: near a minimum the decrease drops below rounding
            slack = 8 * np.finfo(float).eps * np.maximum(1.0, np.abs(f0))
            ok = ft <= f0 + cfg.armijo_c * t[todo] * slope[todo] + slack
            ok &= t[todo] * np.linalg.norm(direction[todo], axis=1) > 1e-15
            accepted[todo[ok]] = True
            f_new[todo[ok]] = ft[ok]
            t[todo[~ok]] *= cfg.shrink
        # starts whose line search failed cannot make further progress
        active[idx[~accepted]] = False
        ok_idx = idx[accepted]
        if ok_idx.size == 0:
            continue
        s = t[accepted, None] * direction[accepted]
        x[ok_idx] += s
        f[ok_idx] = f_new[accepted]
        g_old = g[ok_idx]
        g[ok_idx] = _batched_gradient(objective, x[ok_idx], cfg.fd_step)
        gnorm[ok_idx] = np.linalg.norm(g[ok_idx], axis=1)
        step0[ok_idx] = t[accepted]
        iters[ok_idx] += 1
        if cfg.method == "bfgs":
            y = g[ok_idx] - g_old
            sy = np.einsum("ki,ki->k", s, y)
            upd = sy > 1e-14
            if upd.any():
                k = ok_idx[upd]
                rho = 1.0 / sy[upd]
                I = np.eye(d)
                V = I - rho[:, None, None] * np.einsum("ki,kj->kij", s[upd], y[upd])
                H[k] = V @ H[k] @ V.transpose(0, 2, 1) + rho[:, None, None] * np.einsum(
                    "ki,kj->kij", s[upd], s[upd]
                )
        active[ok_idx] = gnorm[ok_idx] >= cfg.grad_tol
    return x, f, gnorm, iters


def optimize(p: int, spec: ManifoldSpec | ManifoldKind | str = ManifoldKind.M1,
             cfg: OptimizerConfig | None = None, seed: int = 0, warm_start=None) -> OptimizationResult:
    """Multi-start search for optimal ring angles at level ``p``.

    The objective is the energy per site at ``n = 2p + 2`` unless
    ``cfg.n`` says otherwise. ``warm_start`` is a free-parameter vector from a
    lower level; it is zero-padded and used as the first start.
    """
    if p < 1:
        raise QAOAError("level must be at least 1")
    if not isinstance(spec, ManifoldSpec):
        spec = ManifoldSpec(ManifoldKind(spec), p)
    if spec.p != p:
        raise ManifoldError(f"manifold level {spec.p} does not match p={p}")
    cfg = cfg or OptimizerConfig()
    n = cfg.n if cfg.n is not None else 2 * p + 2
    sign = 1.0 if cfg.sense == "min" else -1.0
    base = manifold_objective(spec, n)

    def objective(free):
        return sign * base(free)

    d = spec.n_free
    x0 = np.stack([np.random.default_rng([seed, i]).uniform(0, HALF_PI, d) for i in range(cfg.starts)])
    if warm_start is not None:
        ws = _pad_warm_start(np.asarray(warm_start, dtype=float), spec)
        x0[0] = ws
    x, f, gnorm, _ = descend(objective, x0, cfg)

    optima: list[Optimum] = []
    for k in np.argsort(f, kind="stable"):
        if gnorm[k] >= cfg.grad_tol:
            continue
        sched = canonicalize(expand_manifold(x[k], spec))
        free = extract_free(sched, spec)
        value = float(base(free))
        grad = float(np.linalg.norm(finite_diff_gradient(objective, free, cfg.fd_step, batched=True)))
        if grad >= cfg.grad_tol:
            continue
        if any(
            np.max(_circular_gap(sched.as_vector(), o.schedule.as_vector())) < cfg.dedup_tol for o in optima
        ):
            continue
        optima.append(Optimum(sched, free, value, grad))
    optima.sort(key=lambda o: sign * o.F_per_site)
    values = sign * f
    best = optima[0].F_per_site if optima else float(values[np.argmin(f)])
    return OptimizationResult(
        spec=spec,
        n=n,
        best_F_per_site=best,
        best_r=approximation_ratio(best),
        optima=optima,
        starts=cfg.starts,
        converged=int(np.sum(gnorm < cfg.grad_tol)),
        seed=seed,
        tolerances={k: v for k, v in asdict(cfg).items() if k not in ("starts", "n", "method", "sense")},
        final_values=values,
    )


def _pad_warm_start(free: np.ndarray, spec: ManifoldSpec) -> np.ndarray:
    d = spec.n_free
    if spec.kind is ManifoldKind.FULL:
        q = free.size // 2
        gam, bet = free[:q], free[q:]
        out = np.zeros(d)
        out[: min(q, spec.p)] = gam[: spec.p]
        out[spec.p : spec.p + min(q, spec.p)] = bet[: spec.p]
        return out
    out = np.zeros(d)
    out[: min(free.size, d)] = free[:d]
    return out


@dataclass
class LandscapeGrid:
    manifold: ManifoldSpec
    axes: list[np.ndarray]
    values: np.ndarray
    n: int

    def points(self) -> np.ndarray:
        """All grid points in row-major order, shape (cells, dims)."""
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)


def landscape_scan(spec: ManifoldSpec, resolution: int, n: int | None = None,
                   chunk: int = 1 << 16) -> LandscapeGrid:
    """Energy per site on a uniform grid over [0, pi/2) per free parameter."""
    dims = spec.n_free
    if dims > 3:
        raise QAOAError(f"refusing a {dims}-dimensional scan; at most 3 free parameters")
    if dims == 0:
        raise QAOAError("nothing to scan at level 0")
    if resolution < 8:
        raise QAOAError("resolution must be at least 8")
    n = 2 * spec.p + 2 if n is None else n
    axis = np.arange(resolution) * (HALF_PI / resolution)
    grid = LandscapeGrid(spec, [axis.copy() for _ in range(dims)], np.empty((resolution,) * dims), n)
    pts = grid.points()
    objective = manifold_objective(spec, n)
    flat = np.empty(len(pts))
    for start in range(0, len(pts), chunk):
        flat[start : start + chunk] = objective(pts[start : start + chunk])
    grid.values = flat.reshape((resolution,) * dims)
    return grid


def grid_local_minima(values: np.ndarray) -> list[tuple[int, ...]]:
    """Cells strictly below all neighbours, with periodic wrap-around."""
    mask = np.ones(values.shape, dtype=bool)
    for offset in itertools.product((-1, 0, 1), repeat=values.ndim):
        if any(offset):
            mask &= values < np.roll(values, offset, axis=tuple(range(values.ndim)))
    return [tuple(int(i) for i in idx) for idx in np.argwhere(mask)]
