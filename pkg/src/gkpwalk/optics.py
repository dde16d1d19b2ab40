"""Element-level model of the Sagnac walking module and the Fourier lens.

Conventions (all elements ideal and lossless):

* ``R-`` maps ``|H> -> |->`` and ``|V> -> |+>``; ``R+`` maps ``|H> -> |+>`` and
  ``|V> -> |->``.
* The slant mirror kicks the clockwise (|H>) path by ``D(0, +w)`` and the
  anticlockwise (|V>) path by ``D(0, -w)``.
* PBS1 sends the incoming |H> amplitude back into the loop tagged |V> and the
  incoming |V> amplitude to the detector tagged |H>.  This is the port
  assignment under which the loop keeps the symmetric combination
  ``(|w> + |-w>)/2`` and the detector sees ``(|w> - |-w>)/2``.
* The switchable mirror M1 is a routing flag: it reflects for steps
  ``1..2N-1`` and is transparent at step ``2N``.
* The lens is the exact quarter-turn Fourier map; ``forward`` is ``R^dagger``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidParameterError, ZeroNormError
from .phase_space import (
    CoherentSuperposition,
    PhasePoint,
    displace,
    merge_terms,
    norm_squared,
    rotate,
    superpose,
)
from .walk import INV_SQRT2, HybridState, _check_w

S = INV_SQRT2 + 0j

# (new_h, new_v) = M @ (h, v)
R_MINUS = ((S, S), (-S, S))
R_PLUS = ((S, S), (S, -S))
R_MINUS_INV = ((S, -S), (S, S))
R_PLUS_INV = R_PLUS


class ElementKind(str, Enum):
    PBS = "pbs"
    POL_ROTATOR_MINUS = "pol_rotator_minus"
    POL_ROTATOR_PLUS = "pol_rotator_plus"
    SLANT_MIRROR = "slant_mirror"
    SWITCHABLE_MIRROR = "switchable_mirror"
    FOURIER_LENS = "fourier_lens"


@dataclass(frozen=True)
class OpticalElement:
    kind: ElementKind
    label: str = ""
    w: float | None = None
    mode: str | None = None
    direction: str | None = None

    def __post_init__(self) -> None:
        if self.kind is ElementKind.SLANT_MIRROR:
            _check_w(self.w)
        if self.kind is ElementKind.SWITCHABLE_MIRROR and self.mode not in ("reflect", "transmit"):
            raise InvalidParameterError(f"switchable mirror mode must be reflect|transmit, got {self.mode!r}")
        if self.kind is ElementKind.FOURIER_LENS and self.direction not in ("forward", "inverse"):
            raise InvalidParameterError(f"lens direction must be forward|inverse, got {self.direction!r}")


def _combine(parts, sigma2):
    parts = [(c, s) for c, s in parts if c != 0 and len(s)]
    if not parts:
        return CoherentSuperposition(sigma2)
    if len(parts) == 1:
        c, s = parts[0]
        return superpose([(c, s)])
    return merge_terms(superpose(parts))


def apply_coin_matrix(state: HybridState, matrix) -> HybridState:
    (a, b), (c, d) = matrix
    h, v = state.branch_h, state.branch_v
    return HybridState(_combine([(a, h), (b, v)], state.sigma2),
                       _combine([(c, h), (d, v)], state.sigma2))


def apply_pol_rotator(state: HybridState, which: str) -> HybridState:
    """Polarization rotator ``R-`` (``which='minus'``) or ``R+`` (``which='plus'``)."""
    if which == "minus":
        return apply_coin_matrix(state, R_MINUS)
    if which == "plus":
        return apply_coin_matrix(state, R_PLUS)
    raise InvalidParameterError(f"rotator must be 'minus' or 'plus', got {which!r}")


def invert_pol_rotator(state: HybridState, which: str) -> HybridState:
    if which == "minus":
        return apply_coin_matrix(state, R_MINUS_INV)
    if which == "plus":
        return apply_coin_matrix(state, R_PLUS_INV)
    raise InvalidParameterError(f"rotator must be 'minus' or 'plus', got {which!r}")


def apply_slant_kick(state: HybridState, w: float) -> HybridState:
    _check_w(w)
    return HybridState(displace(state.branch_h, PhasePoint(0.0, w)),
                       displace(state.branch_v, PhasePoint(0.0, -w)))


def apply_pbs_postselect(state: HybridState) -> tuple[HybridState, HybridState]:
    """Split at PBS1 into ``(detector_port, kept_port)``."""
    empty = CoherentSuperposition(state.sigma2)
    detector = HybridState(state.branch_v, empty)
    kept = HybridState(empty, state.branch_h)
    return detector, kept


@dataclass(frozen=True)
class ProtocolStep:
    step: int
    mirror: str
    input: HybridState
    after_R_minus: HybridState
    after_kick: HybridState
    discarded_port: HybridState
    after_R_plus: HybridState
    detector_port: HybridState
    kept_port: HybridState


@dataclass(frozen=True)
class ProtocolTrace:
    N: int
    w: float
    input: CoherentSuperposition
    steps: list[ProtocolStep]
    final_output: HybridState

    @property
    def final_walker(self) -> CoherentSuperposition:
        return self.final_output.branch_v

    @property
    def success_probability(self) -> float:
        return norm_squared(self.final_walker) / norm_squared(self.input)


def run_sagnac_protocol(N: int, w: float, input: CoherentSuperposition) -> ProtocolTrace:
    """Send ``input (x) |V>`` around the loop ``2N`` times."""
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise InvalidParameterError(f"N must be an integer >= 1, got {N}")
    _check_w(w)
    if norm_squared(input) == 0:
        raise ZeroNormError("protocol input is the zero vector")
    empty = CoherentSuperposition(input.sigma2)
    state = HybridState(empty, input)
    steps = []
    total = 2 * N
    for k in range(1, total + 1):
        after_minus = apply_pol_rotator(state, "minus")
        after_kick = apply_slant_kick(after_minus, w)
        after_plus = apply_pol_rotator(after_kick, "plus")
        detector, kept = apply_pbs_postselect(after_plus)
        mirror = "transmit" if k == total else "reflect"
        steps.append(ProtocolStep(k, mirror, state, after_minus, after_kick,
                                  HybridState(empty, empty), after_plus, detector, kept))
        if norm_squared(kept.branch_v) == 0:
            raise ZeroNormError(f"loop state vanished at step {k}")
        state = kept
    return ProtocolTrace(int(N), float(w), input, steps, state)


def apply_fourier_lens(state: CoherentSuperposition, direction: str = "forward") -> CoherentSuperposition:
    """Ideal lens: ``forward`` applies ``R^dagger_{pi/2}``, ``inverse`` applies ``R_{pi/2}``."""
    if direction == "forward":
        return rotate(state, -0.5 * math.pi)
    if direction == "inverse":
        return rotate(state, 0.5 * math.pi)
    raise InvalidParameterError(f"lens direction must be forward|inverse, got {direction!r}")
