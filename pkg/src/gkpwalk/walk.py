"""Coin-controlled walk with interlaced coin post-selection.

One step applies ``D(+w) (x) |H><H| + D(-w) (x) |V><V|`` along the chosen axis,
then projects the coin onto the post-selection state and re-prepares it for
the next step.  With the default |+> coins the walker evolves under
``[(D(w) + D(-w)) / 2]^(2N)``, whose closed form is a binomial comb on the
``2w`` lattice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidCoinError, InvalidParameterError, ZeroNormError
from .phase_space import (
    CoherentSuperposition,
    axis_point,
    check_axis,
    displace,
    make_vacuum,
    merge_terms,
    norm_squared,
    superpose,
)

INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class CoinState:
    h: complex
    v: complex

    def norm_squared(self) -> float:
        return abs(self.h) ** 2 + abs(self.v) ** 2

    def orthogonal(self) -> CoinState:
        return CoinState(-self.v.conjugate(), self.h.conjugate())


COIN_H = CoinState(1.0 + 0j, 0j)
COIN_V = CoinState(0j, 1.0 + 0j)
COIN_PLUS = CoinState(INV_SQRT2 + 0j, INV_SQRT2 + 0j)
COIN_MINUS = CoinState(INV_SQRT2 + 0j, -INV_SQRT2 + 0j)


def _check_coin(coin: CoinState) -> None:
    if abs(coin.norm_squared() - 1.0) > 1e-12:
        raise InvalidCoinError(f"coin state must be normalized, |h|^2+|v|^2 = {coin.norm_squared()}")


@dataclass(frozen=True)
class HybridState:
    """Walker (x) coin, stored as the walker component on each coin basis label."""

    branch_h: CoherentSuperposition
    branch_v: CoherentSuperposition

    def __post_init__(self) -> None:
        if self.branch_h.sigma2 != self.branch_v.sigma2:
            raise InvalidParameterError("hybrid branches must share sigma2")

    @property
    def sigma2(self) -> float:
        return self.branch_h.sigma2

    @classmethod
    def product(cls, walker: CoherentSuperposition, coin: CoinState) -> HybridState:
        return cls(walker.scaled(coin.h) if coin.h != 0 else _empty(walker.sigma2),
                   walker.scaled(coin.v) if coin.v != 0 else _empty(walker.sigma2))

    def norm_squared(self) -> float:
        return norm_squared(self.branch_h) + norm_squared(self.branch_v)


def _empty(sigma2: float) -> CoherentSuperposition:
    return CoherentSuperposition(sigma2)


def _check_w(w: float) -> float:
    w = float(w)
    if not math.isfinite(w) or w <= 0:
        raise InvalidParameterError(f"w must be positive, got {w}")
    return w


def walk_step(state: HybridState, w: float, axis: str) -> HybridState:
    """Kick the |H> branch by +w and the |V> branch by -w along ``axis``."""
    _check_w(w)
    kick = axis_point(axis, w)
    return HybridState(displace(state.branch_h, kick), displace(state.branch_v, -kick))


def project_coin(state: HybridState, bra: CoinState) -> CoherentSuperposition:
    """Unnormalized walker ``(<bra| (x) 1) state``, with coincident terms merged."""
    walker = superpose([(bra.h.conjugate(), state.branch_h), (bra.v.conjugate(), state.branch_v)])
    return merge_terms(walker)


def coin_project(state: HybridState, bra: CoinState) -> tuple[CoherentSuperposition, float]:
    """Project the coin onto ``bra``; returns the walker and the success probability."""
    _check_coin(bra)
    walker = project_coin(state, bra)
    total = state.norm_squared()
    prob = norm_squared(walker) / total if total > 0 else 0.0
    return walker, prob


@dataclass(frozen=True)
class WalkConfig:
    half_steps: int
    w: float
    axis: str = "position"
    input: CoherentSuperposition = field(default_factory=make_vacuum)
    coin_in: CoinState = COIN_PLUS
    coin_postselect: CoinState = COIN_PLUS

    def __post_init__(self) -> None:
        if isinstance(self.half_steps, bool) or int(self.half_steps) != self.half_steps or self.half_steps < 1:
            raise InvalidParameterError(f"half_steps must be an integer >= 1, got {self.half_steps}")
        _check_w(self.w)
        check_axis(self.axis)
        _check_coin(self.coin_in)
        _check_coin(self.coin_postselect)


@dataclass(frozen=True)
class StepTrace:
    step: int
    kept: CoherentSuperposition
    rejected: CoherentSuperposition
    pre_norm2: float
    kept_norm2: float
    rejected_norm2: float

    @property
    def success_prob(self) -> float:
        return self.kept_norm2 / self.pre_norm2 if self.pre_norm2 > 0 else 0.0


@dataclass(frozen=True)
class WalkResult:
    kept: CoherentSuperposition
    step_traces: list[StepTrace]
    success_probability: float
    config: WalkConfig


def run_walk(config: WalkConfig) -> WalkResult:
    """Run ``2N`` walk steps, post-selecting the coin after each one."""
    input_norm2 = norm_squared(config.input)
    if input_norm2 == 0:
        raise ZeroNormError("walk input is the zero vector")
    reject = config.coin_postselect.orthogonal()
    hybrid = HybridState.product(config.input, config.coin_in)
    traces = []
    kept = config.input
    for step in range(1, 2 * config.half_steps + 1):
        pre = hybrid.norm_squared()
        moved = walk_step(hybrid, config.w, config.axis)
        kept = project_coin(moved, config.coin_postselect)
        rejected = project_coin(moved, reject)
        kept_n2 = norm_squared(kept)
        traces.append(StepTrace(step, kept, rejected, pre, kept_n2, norm_squared(rejected)))
        if kept_n2 == 0:
            raise ZeroNormError(f"post-selection annihilated the walker at step {step}")
        hybrid = HybridState.product(kept, config.coin_postselect)
    return WalkResult(kept, traces, norm_squared(kept) / input_norm2, config)


def log_binomial_weights(N: int) -> np.ndarray:
    """``log(C(2N, N - r) / 2^(2N))`` for ``r = -N..N``.

    Built from cumulative sums of ``log1p`` of the neighbour ratios
    ``C(2N, N-r-1) / C(2N, N-r) = (N - r) / (N + r + 1)`` outward from the
    central coefficient, whose log is ``sum_k log1p(-1/(2k))``.  Every summand
    is small, so no large log-gamma values cancel.
    """
    if N < 1:
        raise InvalidParameterError(f"N must be >= 1, got {N}")
    k = np.arange(1, N + 1)
    log_central = math.fsum(np.log1p(-0.5 / k))
    j = np.arange(N)
    steps = np.log1p(-(2 * j + 1) / (N + j + 1))
    right = log_central + np.cumsum(steps)
    return np.concatenate([right[::-1], [log_central], right])


def binomial_weights(N: int) -> np.ndarray:
    """``C(2N, N - r) / 2^(2N)`` for ``r = -N..N``; symmetric by construction."""
    return np.exp(log_binomial_weights(N))


def lattice_comb(weights, lattice_index, spacing: float, axis: str,
                 input: CoherentSuperposition) -> CoherentSuperposition:
    """``sum_r weight_r D(index_r * spacing along axis) input``."""
    parts = [(wt, displace(input, axis_point(axis, int(r) * spacing)))
             for wt, r in zip(weights, lattice_index)]
    return superpose(parts)


def binomial_state_direct(N: int, w: float, axis: str = "position",
                          input: CoherentSuperposition | None = None) -> CoherentSuperposition:
    """Closed-form post-selected walk output, unnormalized."""
    _check_w(w)
    check_axis(axis)
    if input is None:
        input = make_vacuum()
    return lattice_comb(binomial_weights(N), range(-N, N + 1), 2.0 * w, axis, input)


def gaussian_envelope_state(N: int, w: float, axis: str = "position",
                            input: CoherentSuperposition | None = None) -> CoherentSuperposition:
    """Large-N approximation ``(pi N)^(-1/2) sum_r e^{-r^2/N} D(2rw) input``, unnormalized."""
    if N < 1:
        raise InvalidParameterError(f"N must be >= 1, got {N}")
    _check_w(w)
    check_axis(axis)
    if input is None:
        input = make_vacuum()
    r = np.arange(-N, N + 1)
    weights = np.exp(-(r * r) / N) / math.sqrt(math.pi * N)
    return lattice_comb(weights, r, 2.0 * w, axis, input)
