from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import comb

from conftest import states
from gkpwalk.analysis import fidelity
from gkpwalk.errors import InvalidCoinError, InvalidParameterError, ZeroNormError
from gkpwalk.phase_space import (
    CoherentSuperposition,
    PhasePoint,
    displaced_vacuum,
    inner_product,
    make_vacuum,
    norm_squared,
)
from gkpwalk.walk import (
    COIN_H,
    COIN_MINUS,
    COIN_PLUS,
    COIN_V,
    CoinState,
    HybridState,
    WalkConfig,
    binomial_state_direct,
    binomial_weights,
    coin_project,
    gaussian_envelope_state,
    log_binomial_weights,
    project_coin,
    run_walk,
    walk_step,
)

# Frozen from the quadrature oracle.
N1_W10_NORM2 = 0.375
PROJECTED_CAT_W2_NORM2 = 0.5091578194443671


def test_coin_orthogonal():
    assert COIN_PLUS.orthogonal() == CoinState(-COIN_PLUS.v, COIN_PLUS.h)
    c = CoinState(0.6 + 0.0j, 0.8j)
    o = c.orthogonal()
    assert abs(c.h.conjugate() * o.h + c.v.conjugate() * o.v) < 1e-15


def test_walk_step_kicks_each_branch():
    w = 1.5
    hybrid = HybridState.product(make_vacuum(), COIN_PLUS)
    moved = walk_step(hybrid, w, "position")
    assert moved.branch_h.terms[0].center == PhasePoint(w, 0)
    assert moved.branch_v.terms[0].center == PhasePoint(-w, 0)
    moved = walk_step(hybrid, w, "momentum")
    assert moved.branch_h.terms[0].center == PhasePoint(0, w)
    assert moved.branch_v.terms[0].center == PhasePoint(0, -w)


@pytest.mark.parametrize("w", [0.0, -1.0, float("nan")])
def test_walk_step_rejects_bad_w(w):
    with pytest.raises(InvalidParameterError):
        walk_step(HybridState.product(make_vacuum(), COIN_H), w, "position")


def test_walk_step_rejects_bad_axis():
    with pytest.raises(InvalidParameterError):
        walk_step(HybridState.product(make_vacuum(), COIN_H), 1.0, "diagonal")


def test_coin_projection_of_cat():
    moved = walk_step(HybridState.product(make_vacuum(), COIN_PLUS), 2.0, "position")
    walker, prob = coin_project(moved, COIN_PLUS)
    assert len(walker) == 2
    assert norm_squared(walker) == pytest.approx(PROJECTED_CAT_W2_NORM2, abs=1e-14)
    assert prob == pytest.approx(PROJECTED_CAT_W2_NORM2, abs=1e-14)


def test_coin_projection_basis_and_errors():
    vac = make_vacuum()
    walker, prob = coin_project(HybridState.product(vac, COIN_H), COIN_H)
    assert prob == pytest.approx(1.0)
    walker, prob = coin_project(HybridState.product(vac, COIN_H), COIN_V)
    assert prob == 0.0 and norm_squared(walker) == 0.0
    with pytest.raises(InvalidCoinError):
        coin_project(HybridState.product(vac, COIN_H), CoinState(1.0, 1.0))


@given(states(sigma2=0.5), st.floats(0.1, 3))
def test_projection_splits_norm(s, w):
    moved = walk_step(HybridState.product(s, COIN_PLUS), w, "position")
    total = norm_squared(project_coin(moved, COIN_PLUS)) + norm_squared(project_coin(moved, COIN_MINUS))
    assert total == pytest.approx(moved.norm_squared(), rel=1e-12, abs=1e-14)


def test_one_step_from_vacuum_is_cat():
    w = 1.3
    result = run_walk(WalkConfig(1, w))
    assert len(result.step_traces) == 2
    s = 1 / math.sqrt(2)
    cat = CoherentSuperposition(0.5, [s, s], [(w, 0), (-w, 0)])
    first = result.step_traces[0].kept
    assert fidelity(first, cat) == pytest.approx(1.0, abs=1e-15)


def test_two_steps_give_binomial_weights():
    w = 10.0
    result = run_walk(WalkConfig(1, w))
    kept = result.kept
    np.testing.assert_allclose(kept.centers[:, 1], 0.0)
    by_x = dict(zip(kept.centers[:, 0].tolist(), kept.amplitudes.tolist()))
    assert by_x[2 * w] == pytest.approx(0.25)
    assert by_x[0.0] == pytest.approx(0.5)
    assert by_x[-2 * w] == pytest.approx(0.25)
    assert norm_squared(binomial_state_direct(1, w)) == pytest.approx(N1_W10_NORM2, abs=1e-15)
    assert result.success_probability == pytest.approx(N1_W10_NORM2, abs=1e-15)


def test_walk_trace_records_conservation():
    result = run_walk(WalkConfig(3, 0.7))
    probs = []
    for t in result.step_traces:
        assert t.kept_norm2 + t.rejected_norm2 == pytest.approx(t.pre_norm2, rel=1e-12)
        probs.append(t.success_prob)
    assert result.success_probability == pytest.approx(np.prod(probs), rel=1e-12)


@pytest.mark.parametrize("axis", ["position", "momentum"])
@pytest.mark.parametrize("N", [1, 2, 5])
def test_walk_matches_closed_form(N, axis):
    kept = run_walk(WalkConfig(N, 0.8, axis)).kept
    direct = binomial_state_direct(N, 0.8, axis)
    assert fidelity(kept, direct) >= 1 - 1e-12
    assert inner_product(kept, direct) == pytest.approx(norm_squared(direct), rel=1e-12)


def test_walk_on_displaced_input():
    start = displaced_vacuum(0.3, -0.4)
    kept = run_walk(WalkConfig(2, 1.1, "position", start)).kept
    assert fidelity(kept, binomial_state_direct(2, 1.1, "position", start)) >= 1 - 1e-12


def test_walk_config_validation():
    with pytest.raises(InvalidParameterError):
        WalkConfig(0, 1.0)
    with pytest.raises(InvalidParameterError):
        WalkConfig(1.5, 1.0)
    with pytest.raises(InvalidParameterError):
        WalkConfig(1, 1.0, "sideways")
    with pytest.raises(InvalidCoinError):
        WalkConfig(1, 1.0, coin_postselect=CoinState(1.0, 1.0))
    with pytest.raises(ZeroNormError):
        run_walk(WalkConfig(1, 1.0, input=CoherentSuperposition(0.5)))


def test_minus_postselection_survives():
    result = run_walk(WalkConfig(1, 1.0, coin_postselect=COIN_MINUS))
    assert result.success_probability > 0


@pytest.mark.parametrize("N", [1, 2, 7, 30])
def test_binomial_weights_match_exact_integers(N):
    exact = np.array([comb(2 * N, N - r, exact=True) for r in range(-N, N + 1)], dtype=float) / 4.0**N
    np.testing.assert_allclose(binomial_weights(N), exact, rtol=1e-13)


@pytest.mark.parametrize("N", [1, 10, 500, 2000])
def test_binomial_weights_sum_and_symmetry(N):
    wts = binomial_weights(N)
    assert math.fsum(wts) == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_array_equal(wts, wts[::-1])
    assert np.all(np.isfinite(log_binomial_weights(N)))


def test_binomial_weights_reject_bad_n():
    with pytest.raises(InvalidParameterError):
        binomial_weights(0)


def test_gaussian_envelope_state_weights():
    N, w = 8, 0.9
    s = gaussian_envelope_state(N, w)
    r = np.arange(-N, N + 1)
    np.testing.assert_allclose(s.centers[:, 0], 2 * r * w)
    np.testing.assert_allclose(s.amplitudes.real, np.exp(-r * r / N) / math.sqrt(math.pi * N), rtol=1e-14)
