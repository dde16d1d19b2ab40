"""Brute-force reference computations used as ground truth by the tests.

Nothing here imports the package's algebra: states are read only through
their raw ``sigma2``, ``amplitudes`` and ``centers`` arrays.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import simpson


def vacuum_wf(y, sigma2):
    return (2 * math.pi * sigma2) ** -0.25 * np.exp(-np.asarray(y) ** 2 / (4 * sigma2))


def fft_displace(y, psi, x, p):
    """Apply exp(-i x p_hat + i p x_hat) to samples ``psi`` on the uniform grid ``y``.

    Uses the symmetric split e^{A/2} e^{B} e^{A/2}, which is exact here because
    [A, B] is a c-number; the translation e^{-i x p_hat} is done spectrally.
    """
    dy = y[1] - y[0]
    k = 2 * math.pi * np.fft.fftfreq(y.size, d=dy)
    half = np.exp(0.5j * p * y)
    out = half * psi
    out = np.fft.ifft(np.fft.fft(out) * np.exp(-1j * x * k))
    return half * out


def term_wf(y, sigma2, x, p):
    """Closed-form position wavefunction of D(x, p)|vac>, from BCH on the definition."""
    y = np.asarray(y, dtype=float)
    return np.exp(-0.5j * x * p) * np.exp(1j * p * y) * vacuum_wf(y - x, sigma2)


def state_wf(state, y):
    y = np.asarray(y, dtype=float)
    out = np.zeros(y.shape, dtype=complex)
    for c, (x, p) in zip(state.amplitudes, state.centers):
        out = out + c * term_wf(y, state.sigma2, x, p)
    return out


def simpson_converged(f, lo, hi, n0=2**14, tol=1e-10, max_doublings=6):
    """Composite Simpson on [lo, hi], doubling the point count until stable."""
    n = n0
    y = np.linspace(lo, hi, n + 1)
    prev = simpson(f(y), x=y)
    for _ in range(max_doublings):
        n *= 2
        y = np.linspace(lo, hi, n + 1)
        cur = simpson(f(y), x=y)
        if abs(cur - prev) < tol:
            return cur
        prev = cur
    raise RuntimeError("Simpson oracle did not converge")


def _extent(*states):
    sigma = math.sqrt(states[0].sigma2)
    reach = max((np.abs(s.centers[:, 0]).max() if len(s) else 0.0) for s in states)
    return reach + 12 * sigma


def inner_product(a, b):
    L = _extent(a, b)
    return simpson_converged(lambda y: np.conj(state_wf(a, y)) * state_wf(b, y), -L, L)


def norm_squared(state):
    return inner_product(state, state).real


def wigner(state, x, p):
    """(1/pi) int conj(psi(x+y)) psi(x-y) e^{2ipy} dy."""
    L = _extent(state) + abs(x)

    def integrand(y):
        return np.conj(state_wf(state, x + y)) * state_wf(state, x - y) * np.exp(2j * p * y)

    return simpson_converged(integrand, -L, L) / math.pi


def hermite_functions(nmax, y):
    """Normalized oscillator eigenfunctions phi_0..phi_nmax (sigma2 = 1/2 units)."""
    y = np.asarray(y, dtype=float)
    out = np.zeros((nmax + 1, y.size))
    out[0] = math.pi ** -0.25 * np.exp(-y * y / 2)
    if nmax >= 1:
        out[1] = math.sqrt(2.0) * y * out[0]
    for n in range(1, nmax):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * y * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def hermite_rotate(psi, y, theta, nmax=120):
    """Apply exp(-i theta (x^2 + p^2) / 2) by projecting onto a truncated Hermite basis."""
    basis = hermite_functions(nmax, y)
    dy = y[1] - y[0]
    coeffs = basis @ psi * dy
    phases = np.exp(-1j * theta * (np.arange(nmax + 1) + 0.5))
    return (coeffs * phases) @ basis, coeffs
