"""Angle schedules shared by the simulator, the ring evaluator and the optimizer."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConventionError, ScheduleError

__all__ = ["Convention", "AngleSchedule", "parse_angle", "parse_angle_list", "format_angle"]


class Convention(str, enum.Enum):
    """Which cost Hamiltonian the angles drive.

    MAXCUT: H_C = sum over edges of (1 - Z_u Z_v)/2, to be maximized.
    RING:   H_C = sum over edges of Z_u Z_v, to be minimized.
    """

    MAXCUT = "maxcut"
    RING = "ring"


@dataclass(frozen=True)
class AngleSchedule:
    gammas: tuple[float, ...]
    betas: tuple[float, ...]
    convention: Convention = Convention.RING

    def __post_init__(self):
        gammas = tuple(float(x) for x in np.atleast_1d(np.asarray(self.gammas, dtype=float)))
        betas = tuple(float(x) for x in np.atleast_1d(np.asarray(self.betas, dtype=float)))
        if len(gammas) != len(betas):
            raise ScheduleError(f"{len(gammas)} gammas but {len(betas)} betas")
        if not all(math.isfinite(x) for x in gammas + betas):
            raise ScheduleError("angles must be finite")
        object.__setattr__(self, "gammas", gammas)
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "convention", Convention(self.convention))

    @property
    def p(self) -> int:
        return len(self.gammas)

    @classmethod
    def from_interleaved(cls, angles, convention=Convention.RING) -> "AngleSchedule":
        """Build from ``(gamma_1, beta_1, gamma_2, beta_2, ...)``."""
        angles = [float(a) for a in angles]
        if len(angles) % 2:
            raise ScheduleError("interleaved angle list needs an even length")
        return cls(tuple(angles[0::2]), tuple(angles[1::2]), convention)

    def interleaved(self) -> tuple[float, ...]:
        return tuple(a for pair in zip(self.gammas, self.betas) for a in pair)

    def as_vector(self) -> np.ndarray:
        """``(gamma_1..gamma_p, beta_1..beta_p)`` as one array."""
        return np.array(self.gammas + self.betas)

    def require(self, convention: Convention) -> "AngleSchedule":
        if self.convention is not Convention(convention):
            raise ConventionError(
                f"schedule uses the {self.convention.value} convention, expected {Convention(convention).value}"
            )
        return self

    def to_dict(self) -> dict:
        return {
            "convention": self.convention.value,
            "gammas": list(self.gammas),
            "betas": list(self.betas),
        }


def parse_angle(text: str) -> float:
    """Parse ``0.375pi``, ``pi/8``, ``-pi`` or plain radians."""
    s = text.strip().lower().replace("π", "pi")
    if "pi" not in s:
        return float(s)
    head, _, tail = s.partition("pi")
    head = head.rstrip("*").strip()
    if head in ("", "+"):
        coef = 1.0
    elif head == "-":
        coef = -1.0
    else:
        coef = float(head)
    tail = tail.strip()
    if tail:
        if not tail.startswith("/"):
            raise ValueError(f"cannot parse angle {text!r}")
        coef /= float(tail[1:])
    return coef * math.pi


def parse_angle_list(text: str) -> list[float]:
    return [parse_angle(tok) for tok in text.split(",") if tok.strip()]


def format_angle(x: float, digits: int = 4) -> str:
    return f"{x / math.pi:.{digits}f}pi"
