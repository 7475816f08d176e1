"""Singular boundary integrals of the rotating-patch functional.

The nonlinear functional whose zeros are rotating patches is

    G(omega, phi)(w) = Im{ (omega*phi(w) - S(phi)(w)) * conj(w) * conj(phi'(w)) }

with S(phi) the power-law layer potential of the boundary.  All integrals
here are evaluated by product quadrature: the kernel is split as
|phi(w)-phi(tau)|^(-a) = |w-tau|^(-a) * H(w,tau)^(-a) with H smooth and
bounded below, the smooth part is expanded in a discrete Fourier series in
tau, and each mode is contracted against the exact circle moments of
|w-tau|^(-a).  The singular factor is therefore integrated exactly; the only
error is truncation of the smooth expansion.

The critical case a = 1 uses the subtracted numerator tau*phi'(tau) -
w*phi'(w), which vanishes on the diagonal, together with exact subtracted
moments, so no divergent constant ever appears.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import (FourierBoundary, UnitGrid, default_grid, eval_deriv,
                       eval_deriv_at, eval_map, eval_map_at)
from .specfun import conv_constant, gamma_fn, pochhammer_ratio

_H_FLOOR = 1e-8


class SelfIntersectionError(RuntimeError):
    """Boundary chord ratio collapsed; the curve is close to self-contact."""


def _moment_prefactor(alpha: float) -> float:
    """gamma(1-a) / gamma^2(1-a/2), the common scale of the circle moments."""
    return gamma_fn(1.0 - alpha) / gamma_fn(1.0 - alpha / 2.0) ** 2


def _poch_ratio_ladder(alpha: float, p_max: int) -> np.ndarray:
    """(a/2)_p / (1-a/2)_p for p = 0..p_max, by cumulative products."""
    out = np.empty(p_max + 1)
    out[0] = 1.0
    a, b = alpha / 2.0, 1.0 - alpha / 2.0
    acc = 1.0
    for p in range(1, p_max + 1):
        acc *= (a + p - 1.0) / (b + p - 1.0)
        out[p] = acc
    return out


def singular_moment_I(alpha: float, n: int) -> float:
    """Scalar factor of the n-th power moment of |w-tau|^(-a) on the circle.

    The full contour mean of tau^n / |tau-w|^a equals this factor times
    w^(n+1).
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("moments need alpha in (0, 1)")
    if n < 0:
        raise ValueError("moment order must be >= 0")
    return _moment_prefactor(alpha) * pochhammer_ratio(alpha / 2.0, 1.0 - alpha / 2.0, n + 1)


def singular_moment_J(alpha: float, n: int) -> float:
    """Factor of the chord-difference moment; the full integral is factor * w^(n+2)."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("moments need alpha in (0, 1)")
    if n < 0:
        raise ValueError("moment order must be >= 0")
    pref = (1.0 + alpha / 2.0) * _moment_prefactor(alpha) / (2.0 - alpha)
    return pref * (1.0 - pochhammer_ratio(2.0 + alpha / 2.0, 2.0 - alpha / 2.0, n))


def singular_moment_Z(alpha: float, n: int) -> float:
    """Factor of the conjugate-difference moment; the full integral is factor * conj(w)^n.

    The rising-factorial ratio with the negative base reduces to minus the
    ratio shifted by one, which is what gets evaluated here.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("moments need alpha in (0, 1)")
    if n < 0:
        raise ValueError("moment order must be >= 0")
    if n == 0:
        return 0.0
    # (a/2)_n / (-a/2)_n = -(1+a/2)_{n-1} / (1-a/2)_{n-1} for n >= 1
    ratio = -pochhammer_ratio(1.0 + alpha / 2.0, 1.0 - alpha / 2.0, n - 1)
    return -0.5 * _moment_prefactor(alpha) * (1.0 - ratio)


@dataclass(frozen=True)
class MomentTable:
    """Exact circle moments I/J/Z up to a fixed order, for one alpha."""

    alpha: float
    I: np.ndarray
    J: np.ndarray
    Z: np.ndarray
    max_n: int

    @classmethod
    def build(cls, alpha: float, max_n: int) -> "MomentTable":
        ratios = _poch_ratio_ladder(alpha, max_n + 1)
        r = _moment_prefactor(alpha)
        i_vals = r * ratios[1:max_n + 2]
        pref_j = (1.0 + alpha / 2.0) * r / (2.0 - alpha)
        j_vals = np.empty(max_n + 1)
        z_vals = np.empty(max_n + 1)
        acc_j = 1.0
        acc_z = 1.0
        for n in range(max_n + 1):
            j_vals[n] = pref_j * (1.0 - acc_j)
            z_vals[n] = 0.0 if n == 0 else -0.5 * r * (1.0 + acc_z)
            acc_j *= (2.0 + alpha / 2.0 + n) / (2.0 - alpha / 2.0 + n)
            if n >= 1:
                acc_z *= (1.0 + alpha / 2.0 + n - 1.0) / (1.0 - alpha / 2.0 + n - 1.0)
        return cls(alpha=alpha, I=i_vals, J=j_vals, Z=z_vals, max_n=max_n)


def sqg_moment_1(n: int) -> float:
    """Subtracted first moment of the critical kernel: -(2/pi) sum_{k<n} 1/(2k+1)."""
    if n < 1:
        raise ValueError("needs n >= 1")
    return -(2.0 / math.pi) * sum(1.0 / (2 * k + 1) for k in range(n))


def sqg_moment_2(n: int) -> float:
    """Squared-chord moment of the critical kernel: (2/pi) sum_{k=1..n} 1/(2k+1)."""
    if n < 1:
        raise ValueError("needs n >= 1")
    return (2.0 / math.pi) * sum(1.0 / (2 * k + 1) for k in range(1, n + 1))


# ---------------------------------------------------------------------------
# product-quadrature machinery


def _chord_ratio(phi: np.ndarray, w: np.ndarray, dphi: np.ndarray) -> np.ndarray:
    """H[i, j] = |phi(w_i)-phi(w_j)| / |w_i-w_j| with the diagonal limit |phi'|."""
    num = np.abs(phi[:, None] - phi[None, :])
    den = np.abs(w[:, None] - w[None, :])
    np.fill_diagonal(num, np.abs(dphi))
    np.fill_diagonal(den, 1.0)
    h = num / den
    if h.min() < _H_FLOOR:
        raise SelfIntersectionError(f"chord ratio fell to {h.min():.3e}")
    return h


def _fourier_rows(values: np.ndarray, grid: UnitGrid) -> tuple[np.ndarray, np.ndarray]:
    """Per-row Fourier coefficients in tau, shift-corrected; returns (freqs, coeffs)."""
    m = grid.size
    c = np.fft.fft(values, axis=-1) / m
    k = np.fft.fftfreq(m, d=1.0 / m)
    return k, c * np.exp(-1j * k * grid.shift)[None, :]


def _contract_power_moments(k: np.ndarray, coeffs: np.ndarray,
                            theta: np.ndarray, alpha: float) -> np.ndarray:
    """sum_k c[i,k] * w_i^(k+1) * mu_k with mu the exact |w-tau|^(-a) moments."""
    p = np.abs(k + 1.0).astype(int)
    mu = _moment_prefactor(alpha) * _poch_ratio_ladder(alpha, int(p.max()))[p]
    phase = np.exp(1j * np.outer(theta, k + 1.0))
    return np.einsum("ik,ik,k->i", coeffs, phase, mu)


def s_phi(bnd: FourierBoundary, alpha: float, grid: UnitGrid | None = None) -> np.ndarray:
    """Layer potential S(phi)(w_j) = C_a * mean of phi'(tau) / |phi(w)-phi(tau)|^a.

    Product quadrature: smooth factor phi'(tau) H^(-a) expanded per target,
    contracted against exact moments.  For the identity map this returns
    theta_alpha * w exactly (to rounding).
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("s_phi needs alpha in (0, 1); the critical case has its own form")
    grid = default_grid(bnd.order + 1) if grid is None else grid
    w = grid.nodes
    phi = eval_map(bnd, grid)
    dphi = eval_deriv(bnd, grid)
    h = _chord_ratio(phi, w, dphi)
    smooth = dphi[None, :] * h ** (-alpha)
    k, coeffs = _fourier_rows(smooth, grid)
    vals = _contract_power_moments(k, coeffs, grid.angles, alpha)
    return conv_constant(alpha) * vals


def s_phi_trapezoid(bnd: FourierBoundary, alpha: float, targets: np.ndarray,
                    n_sources: int = 8192) -> np.ndarray:
    """Reference evaluation of S(phi) at arbitrary unit-circle targets.

    Midpoint-offset trapezoid with the constant mode of the singular weight
    subtracted and restored through its exact integral, so only the smooth
    remainder is sampled.  Deliberately independent of the spectral path.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("s_phi_trapezoid needs alpha in (0, 1)")
    targets = np.asarray(targets, dtype=complex)
    src = UnitGrid.half_offset(n_sources)
    tau = src.nodes
    phi_s = eval_map(bnd, src)
    dphi_s = eval_deriv(bnd, src)
    phi_t = eval_map_at(bnd, targets)
    dphi_t = eval_deriv_at(bnd, targets)
    theta_t = np.angle(targets)
    out = np.empty(len(targets), dtype=complex)
    r = _moment_prefactor(alpha)
    h_step = 2.0 * np.pi / n_sources
    for i, (wt, pt, dpt, th) in enumerate(zip(targets, phi_t, dphi_t, theta_t)):
        chord = np.abs(pt - phi_s) / np.abs(wt - tau)
        if chord.min() < _H_FLOOR:
            raise SelfIntersectionError(f"chord ratio fell to {chord.min():.3e}")
        g = dphi_s * tau * chord ** (-alpha)
        g0 = dpt * wt * np.abs(dpt) ** (-alpha)
        kern = np.abs(2.0 * np.sin((src.angles - th) / 2.0)) ** (-alpha)
        if not np.all(np.isfinite(kern)):
            raise ValueError("target coincides with a source node; use targets "
                             "off the half-offset source grid")
        out[i] = (h_step / (2.0 * np.pi)) * np.sum((g - g0) * kern) + g0 * r
    return conv_constant(alpha) * out


@dataclass(frozen=True)
class ResidualField:
    """Pointwise residual of the patch functional plus its sine expansion."""

    grid: UnitGrid
    values: np.ndarray       # real samples at the grid nodes
    sine_coeffs: np.ndarray  # g_n of i*sum g_n (w^n - conj(w)^n), n = 1..len
    cosine_residue: float    # largest even-mode leak, ~0 for admissible data

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.sine_coeffs)))

    def sine_coeff(self, n: int) -> float:
        if not 1 <= n <= len(self.sine_coeffs):
            raise IndexError(f"sine mode {n} outside stored range")
        return float(self.sine_coeffs[n - 1])


def _field_from_values(values: np.ndarray, grid: UnitGrid) -> ResidualField:
    vals = np.ascontiguousarray(values.real if np.iscomplexobj(values) else values)
    return ResidualField(grid=grid, values=vals,
                         sine_coeffs=grid.sine_coeffs(vals),
                         cosine_residue=grid.cosine_residue(vals))


def functional_G(omega: float, bnd: FourierBoundary, alpha: float,
                 grid: UnitGrid | None = None) -> ResidualField:
    """Residual of the rotating-patch equation at angular velocity omega.

    Identically zero (to rounding) for the disc at any omega; a converged
    m-fold solution drives every sine coefficient below the solver tolerance.
    """
    grid = default_grid(bnd.order + 1) if grid is None else grid
    w = grid.nodes
    phi = eval_map(bnd, grid)
    dphi = eval_deriv(bnd, grid)
    s_vals = s_phi(bnd, alpha, grid)
    vals = np.imag((omega * phi - s_vals) * np.conj(w) * np.conj(dphi))
    return _field_from_values(vals, grid)


def functional_G_sqg(omega: float, bnd: FourierBoundary,
                     grid: UnitGrid | None = None) -> ResidualField:
    """Critical-case residual with the tangentially subtracted kernel.

    The integrand's numerator tau*phi'(tau) - w*phi'(w) vanishes on the
    diagonal, so the smooth expansion has zero mean against the divergent
    constant mode and the subtracted odd-harmonic moments apply directly.
    """
    grid = default_grid(bnd.order + 1) if grid is None else grid
    w = grid.nodes
    phi = eval_map(bnd, grid)
    dphi = eval_deriv(bnd, grid)
    h = _chord_ratio(phi, w, dphi)
    p = w * dphi
    numer = (p[None, :] - p[:, None]) / h
    k, coeffs = _fourier_rows(numer, grid)
    sig = _odd_harmonic_ladder(grid.size // 2 + 1)[np.abs(k).astype(int)]
    phase = np.exp(1j * np.outer(grid.angles, k))
    t_vals = -(2.0 / math.pi) * np.einsum("ik,ik,k->i", coeffs, phase, sig)
    vals = np.imag((omega * phi - t_vals) * np.conj(w) * np.conj(dphi))
    return _field_from_values(vals, grid)


def _odd_harmonic_ladder(p_max: int) -> np.ndarray:
    """sigma_p = sum_{k=0}^{p-1} 1/(2k+1) for p = 0..p_max-1."""
    sig = np.zeros(p_max)
    acc = 0.0
    for p_val in range(1, p_max):
        acc += 1.0 / (2 * (p_val - 1) + 1)
        sig[p_val] = acc
    return sig


def ellipse_fourth_coefficient(omega: float, q: float, alpha: float,
                               grid: UnitGrid | None = None) -> float:
    """Fourth sine coefficient of the residual at the ellipse with ratio q.

    Nonzero for every omega when alpha != 1, which is exactly why ellipses
    never rotate rigidly under this flow; the omega dependence lives only in
    mode 2, so the value is omega-independent.
    """
    if not 0.0 < q < 1.0:
        raise ValueError("ellipse ratio q must lie in (0, 1)")
    bnd = FourierBoundary.ellipse(q)
    grid = UnitGrid(256) if grid is None else grid
    return functional_G(omega, bnd, alpha, grid).sine_coeff(4)


def ellipse_moment_ratio(alpha: float) -> float:
    """Closed-form a2/a0 moment ratio (2+a)(4+a) / ((4-a)(6-a))."""
    return (2.0 + alpha) * (4.0 + alpha) / ((4.0 - alpha) * (6.0 - alpha))
