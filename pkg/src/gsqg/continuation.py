"""Newton solver and amplitude continuation for m-fold patch branches.

Near the bifurcation value the branch is a graph over the leading
coefficient, so the amplitude s = a_{m-1} is pinned and the unknowns are
the angular velocity together with the higher rungs a_{2m-1}, ..., a_{Km-1}.
The equations are the sine coefficients of the residual at the symmetric
modes m, 2m, ..., Km, giving a square system.  The translation coefficient
b_0 stays at zero throughout: the rotation center is the center of mass.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .geometry import (FourierBoundary, MFoldBoundary, UnitGrid, default_grid,
                       dilate, embed_mfold)
from .kernels import (ResidualField, SelfIntersectionError, functional_G,
                      functional_G_sqg)
from .specfun import omega_dispersion


class NonConvergenceError(RuntimeError):
    """Newton iteration failed to reach the residual tolerance."""


class FoldError(RuntimeError):
    """Reduced Jacobian became singular; likely a fold in the branch."""


@dataclass(frozen=True)
class VStateSolution:
    """One converged rotating patch on an m-fold branch."""

    alpha: float
    m: int
    s: float
    omega: float
    boundary: MFoldBoundary
    residual_norm: float
    grid_size: int

    @property
    def full_boundary(self) -> FourierBoundary:
        return embed_mfold(self.boundary)

    def coefficients(self) -> np.ndarray:
        return self.boundary.reduced.copy()


@dataclass
class BranchTable:
    """Solutions along one branch, ordered by increasing amplitude."""

    alpha: float
    m: int
    solutions: list[VStateSolution] = field(default_factory=list)
    failure: str | None = None

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([sol.s for sol in self.solutions])

    @property
    def omegas(self) -> np.ndarray:
        return np.array([sol.omega for sol in self.solutions])

    def extrapolate_omega(self) -> float:
        """Angular velocity at zero amplitude from the two smallest steps.

        The branch is even in s, so fitting omega = omega0 + c s^2 through
        the first two points leaves an O(s^4) defect.
        """
        if len(self.solutions) < 2:
            raise ValueError("need at least two branch points to extrapolate")
        s1, s2 = self.amplitudes[:2]
        o1, o2 = self.omegas[:2]
        return float((s2 ** 2 * o1 - s1 ** 2 * o2) / (s2 ** 2 - s1 ** 2))


def _mfold_residual(omega: float, reduced: np.ndarray, alpha: float, m: int,
                    grid: UnitGrid) -> ResidualField:
    bnd = embed_mfold(MFoldBoundary(m=m, reduced=reduced))
    if alpha == 1.0:
        return functional_G_sqg(omega, bnd, grid)
    return functional_G(omega, bnd, alpha, grid)


def _equations(omega: float, reduced: np.ndarray, alpha: float, m: int,
               grid: UnitGrid, k_modes: int) -> np.ndarray:
    fld = _mfold_residual(omega, reduced, alpha, m, grid)
    rows = m * np.arange(1, k_modes + 1) - 1   # sine modes m, 2m, ..., Km
    return fld.sine_coeffs[rows]


def solve_vstate(alpha: float, m: int, s: float,
                 initial_guess: tuple[float, np.ndarray] | None = None,
                 tol: float = 1e-11, max_iter: int = 30, k_modes: int = 16,
                 grid: UnitGrid | None = None,
                 _jac_seed: list | None = None) -> VStateSolution:
    """Newton-solve the m-fold branch point at pinned amplitude s.

    initial_guess is (omega, higher_coeffs) with k_modes - 1 higher rungs;
    by default the disc data (dispersion omega, zero rungs), which is inside
    the Newton basin for small s.  Raises NonConvergenceError, FoldError, or
    a self-intersection error from the kernel layer.
    """
    if m < 2:
        raise ValueError("m-fold branches need m >= 2")
    if alpha == 1.0:
        warnings.warn("critical-case branch solving is experimental: no "
                      "bifurcation theorem backs it", RuntimeWarning, stacklevel=2)
    omega0 = omega_dispersion(alpha, m)
    grid = default_grid(k_modes * m) if grid is None else grid
    if s == 0.0:
        bnd = MFoldBoundary(m=m, reduced=np.zeros(k_modes))
        return VStateSolution(alpha=alpha, m=m, s=0.0, omega=omega0,
                              boundary=bnd, residual_norm=0.0,
                              grid_size=grid.size)
    if initial_guess is None:
        x = np.zeros(k_modes)
        x[0] = omega0
    else:
        om_g, rungs = initial_guess
        x = np.concatenate([[om_g], np.asarray(rungs, dtype=float)])
        if len(x) != k_modes:
            raise ValueError("initial guess size does not match k_modes")

    def reduced_of(x_vec: np.ndarray) -> np.ndarray:
        return np.concatenate([[s], x_vec[1:]])

    def res_of(x_vec: np.ndarray) -> np.ndarray:
        return _equations(x_vec[0], reduced_of(x_vec), alpha, m, grid, k_modes)

    sol_x, norm = _chord_newton(x, res_of, tol, max_iter, s, jac_seed=_jac_seed)
    bnd = MFoldBoundary(m=m, reduced=reduced_of(sol_x))
    return VStateSolution(alpha=alpha, m=m, s=s, omega=float(sol_x[0]), boundary=bnd,
                          residual_norm=norm, grid_size=grid.size)


def _fd_jacobian(x: np.ndarray, res_of) -> np.ndarray:
    n = len(x)
    jac = np.empty((n, n))
    for j in range(n):
        step = 1e-6 * max(1.0, abs(x[j]))
        xp = x.copy(); xp[j] += step
        xm = x.copy(); xm[j] -= step
        jac[:, j] = (res_of(xp) - res_of(xm)) / (2.0 * step)
    return jac


def _chord_newton(x: np.ndarray, res_of, tol: float, max_iter: int, s: float,
                  jac_seed: list | None = None) -> tuple[np.ndarray, float]:
    """Damped Newton with Jacobian reuse.

    The reduced Jacobian varies slowly along the branch, so it is rebuilt
    only when the chord iteration stalls; jac_seed is a one-element holder
    that lets continue_branch carry the factorization across steps.
    """
    res = res_of(x)
    res_norm = float(np.max(np.abs(res)))
    jac = jac_seed[0] if (jac_seed and jac_seed[0] is not None) else None
    rebuilt = jac is None
    for _ in range(max_iter):
        if res_norm < tol:
            break
        if jac is None:
            jac = _fd_jacobian(x, res_of)
            rebuilt = True
        try:
            delta = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError as exc:
            raise FoldError(f"singular reduced Jacobian at s={s}") from exc
        lam = 1.0
        accepted = False
        for _ in range(6):
            x_new = x + lam * delta
            res_new = res_of(x_new)
            norm_new = float(np.max(np.abs(res_new)))
            if norm_new < res_norm or norm_new < tol:
                accepted = True
                break
            lam *= 0.5
        if not accepted:
            if not rebuilt:
                jac = None      # stale chord Jacobian; rebuild and retry
                continue
            raise NonConvergenceError(f"damping stalled at s={s}, residual {res_norm:.3e}")
        # slow linear contraction also signals a stale Jacobian
        if not rebuilt and norm_new > 0.3 * res_norm:
            jac = None
        x, res, res_norm = x_new, res_new, norm_new
    if res_norm >= tol:
        raise NonConvergenceError(f"no convergence at s={s}: residual {res_norm:.3e} "
                                  f"after {max_iter} iterations")
    if jac_seed is not None:
        jac_seed[0] = jac
    return x, res_norm


def continue_branch(alpha: float, m: int, s_max: float, ds: float,
                    tol: float = 1e-11, k_modes: int = 16,
                    grid: UnitGrid | None = None) -> BranchTable:
    """March the branch in amplitude steps, seeding each solve with the last.

    Stops cleanly at the first failed step and records why; everything
    already converged stays in the table.
    """
    if ds <= 0.0 or s_max < ds:
        raise ValueError("need 0 < ds <= s_max")
    table = BranchTable(alpha=alpha, m=m)
    guess = None
    jac_seed: list = [None]
    s = ds
    while s <= s_max * (1.0 + 1e-12):
        try:
            sol = solve_vstate(alpha, m, s, initial_guess=guess, tol=tol,
                               k_modes=k_modes, grid=grid, _jac_seed=jac_seed)
        except (NonConvergenceError, FoldError, SelfIntersectionError) as exc:
            table.failure = f"s={s:.6g}: {type(exc).__name__}: {exc}"
            break
        table.solutions.append(sol)
        guess = (sol.omega, sol.boundary.reduced[1:])
        s += ds
    return table


def residual_on_grid(sol: VStateSolution, grid: UnitGrid) -> float:
    """Sup norm of the functional's sine coefficients on an arbitrary grid."""
    bnd = sol.full_boundary
    if sol.alpha == 1.0:
        fld = functional_G_sqg(sol.omega, bnd, grid)
    else:
        fld = functional_G(sol.omega, bnd, sol.alpha, grid)
    return fld.sup_norm


def verify_dilation_law(sol: VStateSolution, lam: float,
                        omega_exponent: float | None = None) -> float:
    """Residual norm of the lam-dilated patch spun at omega * lam^(-alpha).

    Must stay within a small factor (the residual itself rescales by
    lam^(2-alpha)) of the original solve tolerance.  Passing
    omega_exponent=1.0 deliberately applies the wrong rescaling omega/lam
    and serves as the negative control.
    """
    if lam <= 0.0:
        raise ValueError("dilation factor must be positive")
    expo = sol.alpha if omega_exponent is None else omega_exponent
    scaled, _ = dilate(sol.full_boundary, lam, sol.alpha)
    omega_scaled = sol.omega * lam ** (-expo)
    grid = UnitGrid(sol.grid_size)
    fld = functional_G(omega_scaled, scaled, sol.alpha, grid)
    return fld.sup_norm
