"""Exact algebra of finite superpositions of equal-width displaced vacua.

A state is stored as ``sum_i c_i D(x_i, p_i)|vac>`` with the Weyl displacement
``D(x, p) = exp(-i x p_hat + i p x_hat)`` and hbar = 1.  The phase of every
term lives in its amplitude; a center never carries an implicit phase.  Under
this convention

    D(a) D(b) = exp(i (a_p b_x - a_x b_p) / 2) D(a + b)

and the position wavefunction of ``D(x0, p0)|vac>`` is

    exp(-i x0 p0 / 2) exp(i p0 y) psi_sigma(y - x0),
    psi_sigma(u) = (2 pi sigma2)^(-1/4) exp(-u^2 / (4 sigma2)).

The Gaussian element ``|r, s>`` written with a bare ``exp(i s y)`` factor is
therefore ``exp(i r s / 2) D(r, s)|vac>``; see :func:`labelled_gaussian`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from .errors import (
    AsymmetricVacuumError,
    IncompatibleWidthError,
    InvalidParameterError,
    ZeroNormError,
)

Axis = Literal["position", "momentum"]
AXES: tuple[str, ...] = ("position", "momentum")

SYMMETRIC_SIGMA2 = 0.5
MERGE_TOL = 1e-9
PRUNE_REL = 1e-15
NORMALIZE_TOL = 1e-300


@dataclass(frozen=True)
class PhasePoint:
    x: float
    p: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.p)):
            raise InvalidParameterError(f"phase point must be finite, got ({self.x}, {self.p})")

    def __add__(self, other: PhasePoint) -> PhasePoint:
        return PhasePoint(self.x + other.x, self.p + other.p)

    def __neg__(self) -> PhasePoint:
        return PhasePoint(-self.x, -self.p)


@dataclass(frozen=True)
class GaussianTerm:
    """``amplitude * D(center)|vac>``."""

    amplitude: complex
    center: PhasePoint


def check_axis(axis: str) -> str:
    if axis not in AXES:
        raise InvalidParameterError(f"axis must be one of {AXES}, got {axis!r}")
    return axis


def axis_point(axis: str, distance: float) -> PhasePoint:
    """Phase-space vector of length ``distance`` along ``axis``."""
    check_axis(axis)
    return PhasePoint(distance, 0.0) if axis == "position" else PhasePoint(0.0, distance)


def _check_sigma2(sigma2: float) -> float:
    sigma2 = float(sigma2)
    if not math.isfinite(sigma2) or sigma2 <= 0:
        raise InvalidParameterError(f"sigma2 must be positive and finite, got {sigma2}")
    return sigma2


class CoherentSuperposition:
    """Immutable finite superposition of displaced vacua sharing one width.

    ``amplitudes`` is a complex array of shape ``(K,)`` and ``centers`` a real
    array of shape ``(K, 2)`` holding ``(x, p)`` per term.  An empty term list
    is the zero vector.
    """

    __slots__ = ("sigma2", "amplitudes", "centers")

    def __init__(self, sigma2: float, amplitudes: Iterable[complex] = (), centers=None):
        sigma2 = _check_sigma2(sigma2)
        amps = np.array(amplitudes, dtype=complex).reshape(-1)
        if centers is None:
            ctrs = np.zeros((0, 2))
        else:
            ctrs = np.array(centers, dtype=float).reshape(-1, 2)
        if ctrs.shape[0] != amps.shape[0]:
            raise InvalidParameterError(
                f"{amps.shape[0]} amplitudes but {ctrs.shape[0]} centers"
            )
        if not (np.all(np.isfinite(amps)) and np.all(np.isfinite(ctrs))):
            raise InvalidParameterError("amplitudes and centers must be finite")
        amps.flags.writeable = False
        ctrs.flags.writeable = False
        object.__setattr__(self, "sigma2", sigma2)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "centers", ctrs)

    def __setattr__(self, name, value):
        raise AttributeError("CoherentSuperposition is immutable")

    @classmethod
    def from_terms(cls, sigma2: float, terms: Iterable[GaussianTerm]) -> CoherentSuperposition:
        terms = list(terms)
        return cls(
            sigma2,
            [t.amplitude for t in terms],
            [(t.center.x, t.center.p) for t in terms],
        )

    @property
    def terms(self) -> list[GaussianTerm]:
        return [
            GaussianTerm(complex(c), PhasePoint(float(x), float(p)))
            for c, (x, p) in zip(self.amplitudes, self.centers)
        ]

    def __len__(self) -> int:
        return self.amplitudes.shape[0]

    def scaled(self, factor: complex) -> CoherentSuperposition:
        return CoherentSuperposition(self.sigma2, self.amplitudes * factor, self.centers)

    def __repr__(self) -> str:
        return f"CoherentSuperposition(sigma2={self.sigma2}, n_terms={len(self)})"


def make_vacuum(sigma2: float = SYMMETRIC_SIGMA2) -> CoherentSuperposition:
    return CoherentSuperposition(sigma2, [1.0 + 0.0j], [(0.0, 0.0)])


def displaced_vacuum(x: float, p: float, sigma2: float = SYMMETRIC_SIGMA2,
                     amplitude: complex = 1.0) -> CoherentSuperposition:
    """``amplitude * D(x, p)|vac>`` as a one-term state."""
    PhasePoint(x, p)
    return CoherentSuperposition(sigma2, [amplitude], [(x, p)])


def labelled_gaussian(r: float, s: float, sigma2: float = SYMMETRIC_SIGMA2,
                      coefficient: complex = 1.0) -> CoherentSuperposition:
    """The element ``|r, s>`` whose wavefunction is ``psi_sigma(y - r) e^{i s y}``.

    It differs from ``D(r, s)|vac>`` by the constant phase ``e^{i r s / 2}``.
    """
    return displaced_vacuum(r, s, sigma2, coefficient * cmath.exp(0.5j * r * s))


def _require_same_width(a: CoherentSuperposition, b: CoherentSuperposition) -> None:
    if a.sigma2 != b.sigma2:
        raise IncompatibleWidthError(f"sigma2 mismatch: {a.sigma2} vs {b.sigma2}")


def superpose(parts: Sequence[tuple[complex, CoherentSuperposition]]) -> CoherentSuperposition:
    """Linear combination ``sum_k coeff_k * state_k`` (concatenated, not normalized)."""
    if not parts:
        raise InvalidParameterError("superpose needs at least one part")
    sigma2 = parts[0][1].sigma2
    for _, state in parts[1:]:
        if state.sigma2 != sigma2:
            raise IncompatibleWidthError(f"sigma2 mismatch: {sigma2} vs {state.sigma2}")
    amps = np.concatenate([state.amplitudes * coeff for coeff, state in parts])
    centers = np.concatenate([state.centers for _, state in parts])
    return CoherentSuperposition(sigma2, amps, centers)


def displace(state: CoherentSuperposition, delta: PhasePoint) -> CoherentSuperposition:
    """Apply ``D(delta)``; each term picks up ``exp(i (dp x - dx p) / 2)``."""
    dx, dp = float(delta.x), float(delta.p)
    if dx == 0.0 and dp == 0.0:
        return state
    x, p = state.centers[:, 0], state.centers[:, 1]
    phase = np.exp(0.5j * (dp * x - dx * p))
    amps = state.amplitudes * phase
    centers = np.column_stack([x + dx, p + dp])
    return CoherentSuperposition(state.sigma2, amps, centers)


def _quarter_turn_trig(theta: float) -> tuple[float, float]:
    quarters = theta / (0.5 * math.pi)
    k = round(quarters)
    if abs(quarters - k) < 1e-12:
        return ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))[k % 4]
    return math.cos(theta), math.sin(theta)


def rotate(state: CoherentSuperposition, theta: float) -> CoherentSuperposition:
    """Apply ``exp(-i theta (x^2 + p^2) / 2)``.

    Centers rotate as ``alpha -> e^{-i theta} alpha`` and every term gains the
    vacuum phase ``e^{-i theta / 2}``.  Only defined for ``sigma2 == 1/2``,
    where the vacuum is the oscillator ground state.
    """
    if state.sigma2 != SYMMETRIC_SIGMA2:
        raise AsymmetricVacuumError(
            f"rotation requires sigma2 = 1/2, got {state.sigma2}"
        )
    c, s = _quarter_turn_trig(theta)
    x, p = state.centers[:, 0], state.centers[:, 1]
    centers = np.column_stack([x * c + p * s, -x * s + p * c])
    amps = state.amplitudes * cmath.exp(-0.5j * theta)
    return CoherentSuperposition(state.sigma2, amps, centers)


def overlap_matrix(centers_a: np.ndarray, centers_b: np.ndarray, sigma2: float) -> np.ndarray:
    """``<D(a_i) vac | D(b_j) vac>`` for all pairs of centers."""
    ax, ap = centers_a[:, 0][:, None], centers_a[:, 1][:, None]
    bx, bp = centers_b[:, 0][None, :], centers_b[:, 1][None, :]
    dx = bx - ax
    dp = bp - ap
    modulus = np.exp(-dx * dx / (8.0 * sigma2) - 0.5 * sigma2 * dp * dp)
    return modulus * np.exp(0.5j * (ax * bp - ap * bx))


def inner_product(a: CoherentSuperposition, b: CoherentSuperposition) -> complex:
    """``<a|b>``, antilinear in ``a``."""
    _require_same_width(a, b)
    if len(a) == 0 or len(b) == 0:
        return 0j
    gram = overlap_matrix(a.centers, b.centers, a.sigma2)
    return complex(np.conj(a.amplitudes) @ gram @ b.amplitudes)


def norm_squared(state: CoherentSuperposition) -> float:
    return max(inner_product(state, state).real, 0.0)


def norm(state: CoherentSuperposition) -> float:
    return math.sqrt(norm_squared(state))


def normalize(state: CoherentSuperposition, tol: float = NORMALIZE_TOL) -> CoherentSuperposition:
    n = norm(state)
    if not n > tol:
        raise ZeroNormError("cannot normalize a (near-)zero state")
    return state.scaled(1.0 / n)


def merge_terms(state: CoherentSuperposition, center_tol: float = MERGE_TOL,
                prune_rel: float = PRUNE_REL) -> CoherentSuperposition:
    """Sum terms whose centers agree within ``center_tol`` (Euclidean).

    The first center seen in a group is kept.  Amplitudes that cancel exactly
    are dropped; amplitudes below ``prune_rel`` times the largest are dropped
    only when that changes the norm by less than 1e-12 relative.
    """
    if center_tol < 0:
        raise InvalidParameterError("center_tol must be non-negative")
    if len(state) == 0:
        return state
    rep_centers: list[tuple[float, float]] = []
    rep_amps: list[complex] = []
    cells: dict[tuple[int, int], list[int]] = {}
    tol2 = center_tol * center_tol
    for amp, (x, p) in zip(state.amplitudes.tolist(), state.centers.tolist()):
        if center_tol > 0:
            cx, cp = math.floor(x / center_tol), math.floor(p / center_tol)
            found = -1
            for i in (cx - 1, cx, cx + 1):
                for j in (cp - 1, cp, cp + 1):
                    for k in cells.get((i, j), ()):
                        rx, rp = rep_centers[k]
                        if (rx - x) ** 2 + (rp - p) ** 2 <= tol2:
                            found = k
                            break
                    if found >= 0:
                        break
                if found >= 0:
                    break
            key = (cx, cp)
        else:
            key = (x, p)
            hits = cells.get(key)
            found = hits[0] if hits else -1
        if found >= 0:
            rep_amps[found] += amp
        else:
            cells.setdefault(key, []).append(len(rep_centers))
            rep_centers.append((x, p))
            rep_amps.append(amp)

    amps = np.array(rep_amps, dtype=complex)
    centers = np.array(rep_centers, dtype=float).reshape(-1, 2)
    keep = amps != 0
    amps, centers = amps[keep], centers[keep]
    merged = CoherentSuperposition(state.sigma2, amps, centers)
    if len(merged) == 0 or prune_rel <= 0:
        return merged

    mags = np.abs(amps)
    small = mags < prune_rel * mags.max()
    if not small.any():
        return merged
    pruned = CoherentSuperposition(state.sigma2, amps[~small], centers[~small])
    before = norm(merged)
    after = norm(pruned)
    if before > 0 and abs(after - before) / before < 1e-12:
        return pruned
    return merged


def wavefunction_at(state: CoherentSuperposition, coord, quadrature: str = "position"):
    """Position or momentum wavefunction evaluated at ``coord`` (scalar or array).

    The momentum wavefunction uses ``phi(k) = (2 pi)^(-1/2) int psi(y) e^{-i k y} dy``.
    """
    check_axis(quadrature)
    y = np.asarray(coord, dtype=float)
    scalar = y.ndim == 0
    y = np.atleast_1d(y)
    sigma2 = state.sigma2
    x0 = state.centers[:, 0][None, :]
    p0 = state.centers[:, 1][None, :]
    yy = y.reshape(-1)[:, None]
    if quadrature == "position":
        pref = (2.0 * math.pi * sigma2) ** -0.25
        phase = np.exp(1j * (p0 * yy - 0.5 * x0 * p0))
        env = np.exp(-((yy - x0) ** 2) / (4.0 * sigma2))
    else:
        pref = math.sqrt(2.0 * sigma2) * (2.0 * math.pi * sigma2) ** -0.25
        phase = np.exp(1j * (0.5 * x0 * p0 - yy * x0))
        env = np.exp(-sigma2 * (yy - p0) ** 2)
    values = pref * (phase * env) @ state.amplitudes
    values = values.reshape(y.shape)
    return complex(values[0]) if scalar else values
