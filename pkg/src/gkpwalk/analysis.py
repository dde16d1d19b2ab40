"""Observables and diagnostics on coherent superpositions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientDataError, InvalidParameterError, ZeroNormError
from .optics import apply_fourier_lens, run_sagnac_protocol
from .phase_space import (
    SYMMETRIC_SIGMA2,
    CoherentSuperposition,
    PhasePoint,
    axis_point,
    check_axis,
    displace,
    inner_product,
    make_vacuum,
    merge_terms,
    norm_squared,
    rotate,
    wavefunction_at,
)
from .walk import WalkConfig, binomial_state_direct, run_walk

WIGNER_IMAG_TOL = 1e-10
EQUIVALENCE_TOL = 1e-12
_PAIR_CHUNK = 4096


def fidelity(a: CoherentSuperposition, b: CoherentSuperposition) -> float:
    """``|<a|b>|^2 / (<a|a><b|b>)``, clipped to [0, 1] against round-off."""
    overlap = inner_product(a, b)
    na, nb = norm_squared(a), norm_squared(b)
    if na == 0 or nb == 0:
        raise ZeroNormError("fidelity of a zero state is undefined")
    f = abs(overlap) ** 2 / (na * nb)
    return min(max(f, 0.0), 1.0)


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    num_x: int
    p_min: float
    p_max: float
    num_p: int

    def __post_init__(self) -> None:
        for lo, hi, n, name in ((self.x_min, self.x_max, self.num_x, "x"),
                                (self.p_min, self.p_max, self.num_p, "p")):
            if not (math.isfinite(lo) and math.isfinite(hi) and hi > lo):
                raise InvalidParameterError(f"degenerate {name} range [{lo}, {hi}]")
            if int(n) != n or n < 2:
                raise InvalidParameterError(f"{name} grid needs at least 2 points, got {n}")

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.num_x)

    @property
    def ps(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.num_p)

    @property
    def cell_area(self) -> float:
        return (self.x_max - self.x_min) / (self.num_x - 1) * (self.p_max - self.p_min) / (self.num_p - 1)


def default_grid(state: CoherentSuperposition, points: int = 512) -> GridSpec:
    """Square grid reaching 6 vacuum widths past the outermost center."""
    reach = float(np.abs(state.centers).max()) if len(state) else 0.0
    width = max(math.sqrt(state.sigma2), 0.5 / math.sqrt(state.sigma2))
    half = reach + 6.0 * width
    return GridSpec(-half, half, points, -half, half, points)


@dataclass(frozen=True)
class WignerGrid:
    grid: GridSpec
    values: np.ndarray  # shape (num_x, num_p)
    imag_residue: float

    def integral(self) -> float:
        return float(self.values.sum() * self.grid.cell_area)


def wigner_values(state: CoherentSuperposition, xs, ps) -> tuple[np.ndarray, float]:
    """Wigner function on the outer grid ``xs x ps`` and the discarded imaginary residue.

    Convention ``W(x, p) = (1/pi) int conj(psi(x+y)) psi(x-y) e^{2ipy} dy``.  For two
    terms with centers ``(a_i, b_i)`` and ``(a_j, b_j)`` the cross kernel is

        (1/pi) e^{i(a_i b_i - a_j b_j)/2} e^{-i (b_i - b_j) x} e^{-(x - mean_a)^2 / (2 sigma2)}
               e^{-2 sigma2 (p - mean_b)^2} e^{i (p - mean_b)(a_i - a_j)}

    which separates into an x factor and a p factor per pair.
    """
    xs = np.asarray(xs, dtype=float).reshape(-1)
    ps = np.asarray(ps, dtype=float).reshape(-1)
    out = np.zeros((xs.size, ps.size), dtype=complex)
    k = len(state)
    if k == 0:
        return out.real, 0.0
    s2 = state.sigma2
    c = state.amplitudes
    a = state.centers[:, 0]
    b = state.centers[:, 1]
    ii, jj = np.meshgrid(np.arange(k), np.arange(k), indexing="ij")
    ii, jj = ii.reshape(-1), jj.reshape(-1)
    for start in range(0, ii.size, _PAIR_CHUNK):
        i = ii[start:start + _PAIR_CHUNK]
        j = jj[start:start + _PAIR_CHUNK]
        mean_a = 0.5 * (a[i] + a[j])
        mean_b = 0.5 * (b[i] + b[j])
        diff_a = a[i] - a[j]
        diff_b = b[i] - b[j]
        coeff = np.conj(c[i]) * c[j] * np.exp(0.5j * (a[i] * b[i] - a[j] * b[j])) / math.pi
        fx = np.exp(-1j * xs[:, None] * diff_b[None, :] - (xs[:, None] - mean_a[None, :]) ** 2 / (2 * s2))
        dp = ps[:, None] - mean_b[None, :]
        gp = np.exp(-2 * s2 * dp**2 + 1j * dp * diff_a[None, :])
        out += (fx * coeff[None, :]) @ gp.T
    return out.real, float(np.abs(out.imag).max())


def wigner_grid(state: CoherentSuperposition, grid: GridSpec | None = None) -> WignerGrid:
    grid = grid or default_grid(state)
    values, residue = wigner_values(state, grid.xs, grid.ps)
    # Absolute for normalized states; grows with the peak of an unnormalized one.
    scale = max(1.0, math.pi * float(np.abs(values).max()))
    if residue > WIGNER_IMAG_TOL * scale:
        raise ArithmeticError(f"Wigner pair sum left an imaginary residue of {residue:.3e}")
    return WignerGrid(grid, values, residue)


@dataclass(frozen=True)
class DensityCurve:
    quadrature: str
    coords: np.ndarray
    density: np.ndarray

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.coords.tolist(), self.density.tolist()))


def quadrature_density(state: CoherentSuperposition, quadrature: str, samples) -> DensityCurve:
    check_axis(quadrature)
    coords = np.asarray(samples, dtype=float).reshape(-1)
    psi = wavefunction_at(state, coords, quadrature)
    return DensityCurve(quadrature, coords, np.abs(psi) ** 2)


@dataclass(frozen=True)
class EnvelopeFit:
    kappa_hat: float
    residual: float
    n_points: int
    offset: float = 0.0


def fit_envelope(state: CoherentSuperposition, w: float, axis: str = "position",
                 rel_cut: float = 1e-10) -> EnvelopeFit:
    """Least-squares fit of ``log|a_r| = c - kappa^2 u_r^2 / 2`` over comb teeth.

    ``u_r`` is each tooth's coordinate along ``axis``; teeth must sit on a common
    ``2w`` lattice.  Teeth below ``rel_cut`` times the largest amplitude are ignored.
    """
    check_axis(axis)
    if not w > 0:
        raise InvalidParameterError(f"w must be positive, got {w}")
    merged = merge_terms(state)
    if len(merged) == 0:
        raise InsufficientDataError("empty state has no envelope")
    mags = np.abs(merged.amplitudes)
    keep = mags > rel_cut * mags.max()
    along = merged.centers[keep, 0 if axis == "position" else 1]
    mags = mags[keep]
    if along.size < 3:
        raise InsufficientDataError(f"need at least 3 teeth, got {along.size}")
    steps = (along - along[0]) / (2.0 * w)
    if np.max(np.abs(steps - np.round(steps))) > 1e-6:
        raise InvalidParameterError("term centers are not on a 2w lattice along the axis")
    design = np.column_stack([np.ones_like(along), -0.5 * along**2])
    target = np.log(mags)
    coef, *_ = np.linalg.lstsq(design, target, rcond=None)
    offset, kappa2 = coef
    if not kappa2 > 0:
        raise InsufficientDataError("amplitudes do not decay away from the origin")
    resid = target - design @ coef
    return EnvelopeFit(math.sqrt(kappa2), float(np.sqrt(np.mean(resid**2))), int(along.size), float(offset))


def stabilizer_expectation(state: CoherentSuperposition, spacing: PhasePoint) -> complex:
    """``<state| D(spacing) |state>``."""
    return inner_product(state, displace(state, spacing))


@dataclass
class EquivalenceReport:
    N: int
    w: float
    fidelities: dict[str, float] = field(default_factory=dict)
    tol: float = EQUIVALENCE_TOL

    @property
    def passed(self) -> bool:
        return all(f >= 1.0 - self.tol for f in self.fidelities.values())

    def to_dict(self) -> dict:
        return {"N": self.N, "w": self.w, "tol": self.tol,
                "fidelities": dict(self.fidelities), "passed": self.passed}


def equivalence_report(N: int, w: float, sigma2: float = SYMMETRIC_SIGMA2) -> EquivalenceReport:
    """Cross-check the position walk, the momentum walk and the quarter-turn linking them."""
    vac = make_vacuum(sigma2)
    quarter = 0.5 * math.pi
    pos = run_walk(WalkConfig(N, w, "position", vac)).kept
    mom = run_walk(WalkConfig(N, w, "momentum", vac)).kept
    report = EquivalenceReport(int(N), float(w))
    report.fidelities["rotated_position_vs_momentum"] = fidelity(rotate(pos, quarter), mom)
    report.fidelities["lens_momentum_vs_position"] = fidelity(apply_fourier_lens(mom, "forward"), pos)
    conj_kick = rotate(displace(rotate(pos, -quarter), axis_point("position", w)), quarter)
    report.fidelities["kick_conjugation"] = fidelity(conj_kick, displace(pos, axis_point("momentum", -w)))
    optical = run_sagnac_protocol(N, w, apply_fourier_lens(vac, "inverse")).final_walker
    report.fidelities["lens_conjugated_optical_walk"] = fidelity(
        apply_fourier_lens(optical, "forward"), binomial_state_direct(N, w, "position", vac))
    return report
