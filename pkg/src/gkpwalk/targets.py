"""Approximate GKP target states and the two-mode grid-state product."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IncompatibleWidthError, InvalidParameterError, ZeroNormError
from .phase_space import (
    SYMMETRIC_SIGMA2,
    CoherentSuperposition,
    axis_point,
    check_axis,
    displace,
    norm,
    overlap_matrix,
    rotate,
)

# Envelope weight at the truncation edge stays below this.
TAIL_TOL = 1e-12


def _check_logical(logical) -> str:
    aliases = {"0": "zero", "1": "one", 0: "zero", 1: "one", "zero": "zero", "one": "one"}
    try:
        return aliases[logical]
    except (KeyError, TypeError):
        raise InvalidParameterError(f"logical must be zero|one, got {logical!r}") from None


def auto_r_max(kappa: float, w: float, tail: float = TAIL_TOL) -> int:
    """Smallest ``r_max >= 1`` with ``exp(-kappa^2 (2 r_max w)^2 / 2) < tail``."""
    reach = math.sqrt(-2.0 * math.log(tail)) / kappa
    return max(1, math.floor(reach / (2.0 * w)) + 1)


@dataclass(frozen=True)
class GkpTargetSpec:
    logical: str
    w: float
    kappa: float
    sigma2: float = SYMMETRIC_SIGMA2
    r_max: int | None = None
    axis: str = "position"

    def __post_init__(self) -> None:
        object.__setattr__(self, "logical", _check_logical(self.logical))
        for name in ("w", "kappa", "sigma2"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise InvalidParameterError(f"{name} must be positive, got {value!r}")
        check_axis(self.axis)
        if self.r_max is None:
            object.__setattr__(self, "r_max", auto_r_max(self.kappa, self.w))
        elif isinstance(self.r_max, bool) or int(self.r_max) != self.r_max or self.r_max < 1:
            raise InvalidParameterError(f"r_max must be an integer >= 1, got {self.r_max!r}")

    def tooth_indices(self) -> np.ndarray:
        if self.logical == "zero":
            return np.arange(-self.r_max, self.r_max + 1)
        return np.arange(-self.r_max - 1, self.r_max + 1)

    def tooth_positions(self) -> np.ndarray:
        """Tooth offsets along the axis, as odd or even multiples of ``w``."""
        r = self.tooth_indices()
        multiple = 2 * r if self.logical == "zero" else 1 + 2 * r
        return multiple * self.w


def approx_gkp(spec: GkpTargetSpec) -> CoherentSuperposition:
    """Normalized Gaussian-envelope comb, normalization from the exact Gram matrix."""
    positions = spec.tooth_positions()
    weights = np.exp(-0.5 * spec.kappa**2 * positions**2)
    if spec.axis == "position":
        centers = np.column_stack([positions, np.zeros_like(positions)])
    else:
        centers = np.column_stack([np.zeros_like(positions), positions])
    comb = CoherentSuperposition(spec.sigma2, weights, centers)
    n = norm(comb)
    if not n > 0 or not math.isfinite(n):
        raise ZeroNormError("GKP comb has vanishing norm")
    return comb.scaled(1.0 / n)


def rotated_target(spec: GkpTargetSpec) -> CoherentSuperposition:
    """Quarter-turn rotation of the position-axis comb."""
    base = GkpTargetSpec(spec.logical, spec.w, spec.kappa, spec.sigma2, spec.r_max, "position")
    return rotate(approx_gkp(base), 0.5 * math.pi)


def logical_one_from_zero(state: CoherentSuperposition, w: float, axis: str = "position") -> CoherentSuperposition:
    return displace(state, axis_point(axis, w))


def ideal_comb_descriptor(logical, w: float, r_max: int) -> list[float]:
    """Tooth positions of the ideal comb, for annotation only."""
    if isinstance(r_max, bool) or int(r_max) != r_max or r_max < 1:
        raise InvalidParameterError(f"r_max must be an integer >= 1, got {r_max!r}")
    logical = _check_logical(logical)
    if logical == "zero":
        return [2 * r * w for r in range(-r_max, r_max + 1)]
    return [(1 + 2 * r) * w for r in range(-r_max - 1, r_max + 1)]


class TwoModeSuperposition:
    """Superposition of products of displaced vacua on two modes of equal width."""

    __slots__ = ("sigma2", "amplitudes", "centers1", "centers2")

    def __init__(self, sigma2: float, amplitudes, centers1, centers2):
        self.sigma2 = float(sigma2)
        self.amplitudes = np.asarray(amplitudes, dtype=complex).reshape(-1)
        self.centers1 = np.asarray(centers1, dtype=float).reshape(-1, 2)
        self.centers2 = np.asarray(centers2, dtype=float).reshape(-1, 2)
        if not (len(self.amplitudes) == len(self.centers1) == len(self.centers2)):
            raise InvalidParameterError("two-mode term arrays have different lengths")

    def __len__(self) -> int:
        return self.amplitudes.shape[0]


def product_state(a: CoherentSuperposition, b: CoherentSuperposition) -> TwoModeSuperposition:
    if a.sigma2 != b.sigma2:
        raise IncompatibleWidthError(f"sigma2 mismatch: {a.sigma2} vs {b.sigma2}")
    amps = np.outer(a.amplitudes, b.amplitudes).reshape(-1)
    c1 = np.repeat(a.centers, len(b), axis=0)
    c2 = np.tile(b.centers, (len(a), 1))
    return TwoModeSuperposition(a.sigma2, amps, c1, c2)


def two_mode_inner_product(a: TwoModeSuperposition, b: TwoModeSuperposition) -> complex:
    if a.sigma2 != b.sigma2:
        raise IncompatibleWidthError(f"sigma2 mismatch: {a.sigma2} vs {b.sigma2}")
    gram = overlap_matrix(a.centers1, b.centers1, a.sigma2) * overlap_matrix(a.centers2, b.centers2, a.sigma2)
    return complex(np.conj(a.amplitudes) @ gram @ b.amplitudes)


def grid_state_2d(spec1: GkpTargetSpec, spec2: GkpTargetSpec) -> TwoModeSuperposition:
    """Product of two single-mode combs on a rectangular lattice."""
    if spec1.sigma2 != spec2.sigma2:
        raise IncompatibleWidthError(f"sigma2 mismatch: {spec1.sigma2} vs {spec2.sigma2}")
    return product_state(approx_gkp(spec1), approx_gkp(spec2))
