from __future__ import annotations

import math

import numpy as np
import pytest

from gkpwalk.analysis import fidelity
from gkpwalk.errors import IncompatibleWidthError, InvalidParameterError
from gkpwalk.phase_space import inner_product, make_vacuum, norm, rotate
from gkpwalk.targets import (
    TAIL_TOL,
    GkpTargetSpec,
    approx_gkp,
    auto_r_max,
    grid_state_2d,
    ideal_comb_descriptor,
    logical_one_from_zero,
    product_state,
    rotated_target,
    two_mode_inner_product,
)
from gkpwalk.walk import binomial_state_direct


def test_logical_zero_comb_layout():
    spec = GkpTargetSpec("zero", w=1.0, kappa=0.3, r_max=4)
    s = approx_gkp(spec)
    np.testing.assert_array_equal(s.centers[:, 0], 2.0 * np.arange(-4, 5))
    np.testing.assert_array_equal(s.centers[:, 1], 0.0)
    assert norm(s) == pytest.approx(1.0, abs=1e-14)
    # envelope weights exp(-kappa^2 x^2 / 2), up to the overall normalization
    ratio = s.amplitudes.real / s.amplitudes.real[4]
    np.testing.assert_allclose(ratio, np.exp(-0.5 * 0.09 * s.centers[:, 0] ** 2), rtol=1e-14)


def test_logical_one_sits_on_odd_multiples():
    spec = GkpTargetSpec(1, w=0.8, kappa=0.2, r_max=3)
    s = approx_gkp(spec)
    np.testing.assert_allclose(s.centers[:, 0], 0.8 * (1 + 2 * np.arange(-4, 4)))
    assert np.allclose(s.amplitudes, s.amplitudes[::-1])
    assert norm(s) == pytest.approx(1.0, abs=1e-14)


def test_logicals_nearly_orthogonal_for_wide_spacing():
    zero = approx_gkp(GkpTargetSpec("zero", 10.0, 0.02))
    one = approx_gkp(GkpTargetSpec("one", 10.0, 0.02))
    assert abs(inner_product(zero, one)) < 1e-8


def test_auto_r_max_reaches_tail():
    kappa, w = 0.1, 0.5
    r = auto_r_max(kappa, w)
    assert math.exp(-0.5 * (kappa * 2 * r * w) ** 2) < TAIL_TOL
    assert math.exp(-0.5 * (kappa * 2 * (r - 1) * w) ** 2) >= TAIL_TOL
    assert GkpTargetSpec("zero", w, kappa).r_max == r


@pytest.mark.parametrize("kwargs", [
    dict(logical="two", w=1.0, kappa=0.1),
    dict(logical="zero", w=-1.0, kappa=0.1),
    dict(logical="zero", w=1.0, kappa=0.0),
    dict(logical="zero", w=1.0, kappa=0.1, r_max=0),
    dict(logical="zero", w=1.0, kappa=0.1, axis="diagonal"),
])
def test_spec_validation(kwargs):
    with pytest.raises(InvalidParameterError):
        GkpTargetSpec(**kwargs)


def test_rotated_target_is_momentum_comb():
    spec = GkpTargetSpec("zero", 1.2, 0.25, r_max=5)
    rot = rotated_target(spec)
    mom = approx_gkp(GkpTargetSpec("zero", 1.2, 0.25, r_max=5, axis="momentum"))
    assert fidelity(rot, mom) == pytest.approx(1.0, abs=1e-13)
    assert fidelity(rotate(approx_gkp(spec), math.pi / 2), mom) == pytest.approx(1.0, abs=1e-13)


def test_logical_one_from_zero_shift():
    zero = approx_gkp(GkpTargetSpec("zero", 2.0, 0.1, r_max=6))
    shifted = logical_one_from_zero(zero, 2.0)
    np.testing.assert_allclose(shifted.centers[:, 0], zero.centers[:, 0] + 2.0)
    assert norm(shifted) == pytest.approx(1.0, abs=1e-14)


def test_ideal_comb_descriptor():
    assert ideal_comb_descriptor("zero", 1.0, 2) == [-4.0, -2.0, 0.0, 2.0, 4.0]
    assert ideal_comb_descriptor("one", 1.0, 1) == [-3.0, -1.0, 1.0, 3.0]
    with pytest.raises(InvalidParameterError):
        ideal_comb_descriptor("zero", 1.0, 0)


def test_walk_output_approaches_matched_target():
    w = 3.0
    fids = []
    for N in (5, 10, 25):
        kappa = (2 * N * w * w) ** -0.5
        target = approx_gkp(GkpTargetSpec("zero", w, kappa, r_max=N))
        fids.append(fidelity(binomial_state_direct(N, w), target))
    assert fids[0] < fids[1] < fids[2]
    assert fids[-1] > 0.9999


def test_two_mode_product_factorizes():
    a = approx_gkp(GkpTargetSpec("zero", 1.0, 0.3, r_max=3))
    b = approx_gkp(GkpTargetSpec("one", 1.0, 0.3, r_max=3))
    ab = product_state(a, b)
    assert len(ab) == len(a) * len(b)
    assert two_mode_inner_product(ab, ab) == pytest.approx(1.0, abs=1e-13)
    ba = product_state(b, a)
    assert two_mode_inner_product(ab, ba) == pytest.approx(inner_product(a, b) * inner_product(b, a), abs=1e-14)


def test_grid_state_2d_normalized_and_width_checked():
    grid = grid_state_2d(GkpTargetSpec("zero", 1.0, 0.3, r_max=3),
                         GkpTargetSpec("zero", 1.0, 0.3, r_max=3, axis="momentum"))
    assert two_mode_inner_product(grid, grid) == pytest.approx(1.0, abs=1e-13)
    with pytest.raises(IncompatibleWidthError):
        product_state(make_vacuum(0.5), make_vacuum(1.0))
