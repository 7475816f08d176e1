"""Closed-form constants and the dispersion relation of the rotating-patch problem.

Everything here is scalar arithmetic: the gamma function, Pochhammer symbols,
digamma values at half-integers, the kernel normalization constant, and the
angular velocities ``omega_m`` at which nontrivial m-fold patch branches
bifurcate from the disc, together with their large-m asymptotics.

All functions are pure and safe for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

EULER_GAMMA = 0.5772156649015328606

# Lanczos coefficients, g = 7, 9 terms.  Uniform relative accuracy is a few
# ulp for real arguments away from the poles, comfortably below 1e-13.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


class GammaPoleError(ValueError):
    """Gamma evaluated at a nonpositive integer."""


def gamma_fn(x: float) -> float:
    """Gamma function for real x, continued to negative non-integers.

    Lanczos approximation for x >= 0.5, reflection formula below.  Raises
    GammaPoleError at the poles 0, -1, -2, ...
    """
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        raise GammaPoleError(f"gamma pole at x={x}")
    if x < 0.5:
        # reflection: gamma(x) gamma(1-x) = pi / sin(pi x)
        return math.pi / (math.sin(math.pi * x) * gamma_fn(1.0 - x))
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc


def pochhammer(x: float, n: int) -> float:
    """Rising factorial (x)_n = x (x+1) ... (x+n-1), with (x)_0 = 1."""
    if n < 0:
        raise ValueError("pochhammer needs n >= 0")
    out = 1.0
    for k in range(n):
        out *= x + k
    return out


def pochhammer_ratio(a: float, b: float, n: int) -> float:
    """Product of (a+k)/(b+k) for k = 0..n-1, i.e. (a)_n / (b)_n.

    Evaluated factor by factor so it stays finite for n in the thousands,
    where the individual rising factorials would overflow.
    """
    if n < 0:
        raise ValueError("pochhammer_ratio needs n >= 0")
    if n == 0:
        return 1.0
    k = np.arange(n, dtype=float)
    return float(np.prod((a + k) / (b + k)))


def conv_constant(alpha: float) -> float:
    """Normalization constant of the fractional-inverse-Laplacian kernel.

    Equals gamma(alpha/2) / (2^(1-alpha) gamma(1 - alpha/2)); diverges like
    2/alpha as alpha -> 0 and equals 1 at alpha = 1.
    """
    if alpha <= 0.0:
        raise ValueError("conv_constant needs alpha > 0")
    return gamma_fn(alpha / 2.0) / (2.0 ** (1.0 - alpha) * gamma_fn(1.0 - alpha / 2.0))


def theta_alpha(alpha: float) -> float:
    """Supremum of the dispersion set: all omega_m lie below this value.

    2^alpha gamma(1+alpha/2) gamma(1-alpha) / ((2-alpha) gamma^3(1-alpha/2)),
    defined for alpha in (0, 1); tends to 1/2 as alpha -> 0.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("theta_alpha needs alpha in (0, 1)")
    num = 2.0 ** alpha * gamma_fn(1.0 + alpha / 2.0) * gamma_fn(1.0 - alpha)
    den = (2.0 - alpha) * gamma_fn(1.0 - alpha / 2.0) ** 3
    return num / den


def harmonic_odd(m: int) -> float:
    """Sum of 1/(2k+1) for k = 1..m-1 (empty for m = 1)."""
    if m < 1:
        raise ValueError("harmonic_odd needs m >= 1")
    if m == 1:
        return 0.0
    k = np.arange(1, m, dtype=float)
    return float(np.sum(1.0 / (2.0 * k + 1.0)))


def omega_sqg(m: int) -> float:
    """Critical-case (alpha = 1) angular velocity: (2/pi) sum_{k=1}^{m-1} 1/(2k+1)."""
    return (2.0 / math.pi) * harmonic_odd(m)


def omega_dispersion(alpha: float, m: int, form: str = "pochhammer") -> float:
    """Angular velocity omega_m at which the m-fold branch leaves the disc.

    For alpha in (0, 1) two algebraically equivalent evaluations are exposed:

    * ``form="pochhammer"`` (default): theta_alpha * (1 - ratio of rising
      factorials), numerically stable for any m.
    * ``form="gamma"``: the direct gamma-function expression; overflows for
      m beyond ~170 and is kept as an independent cross-check.

    The endpoints use their own closed forms: (m-1)/(2m) at alpha = 0 and
    the odd harmonic sum at alpha = 1.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("omega_dispersion needs alpha in [0, 1]")
    if m < 2:
        raise ValueError("omega_dispersion needs mode m >= 2")
    if alpha == 0.0:
        return (m - 1.0) / (2.0 * m)
    if alpha == 1.0:
        return omega_sqg(m)
    if form == "gamma":
        pref = gamma_fn(1.0 - alpha) / (2.0 ** (1.0 - alpha) * gamma_fn(1.0 - alpha / 2.0) ** 2)
        head = gamma_fn(1.0 + alpha / 2.0) / gamma_fn(2.0 - alpha / 2.0)
        tail = gamma_fn(m + alpha / 2.0) / gamma_fn(m + 1.0 - alpha / 2.0)
        return pref * (head - tail)
    if form != "pochhammer":
        raise ValueError(f"unknown form {form!r}")
    ratio = pochhammer_ratio(1.0 + alpha / 2.0, 2.0 - alpha / 2.0, m - 1)
    return theta_alpha(alpha) * (1.0 - ratio)


@lru_cache(maxsize=None)
def zeta_odd(s: int) -> float:
    """Riemann zeta at an odd integer s >= 3.

    Direct summation of the first 2000 terms plus the Euler-Maclaurin tail;
    the neglected remainder is below 1e-20 for every s used here.
    """
    if s < 3 or s % 2 == 0:
        raise ValueError("zeta_odd expects odd s >= 3")
    n_cut = 2000
    n = np.arange(1, n_cut + 1, dtype=float)
    head = float(np.sum(n ** (-float(s))))
    tail = n_cut ** (1.0 - s) / (s - 1.0) - 0.5 * n_cut ** (-float(s)) \
        + s * n_cut ** (-s - 1.0) / 12.0
    return head + tail


def zeta_tail_constant(alpha: float) -> float:
    """Odd-zeta power series entering the large-mode asymptotics.

    c(alpha) = 2 sum_{j>=1} zeta(2j+1) (alpha/2)^(2j+1) / (2j+1), truncated
    once the next term drops below 1e-15; vanishes like alpha^3 zeta(3)/12.
    Satisfies the exact identity
    (1 - alpha/2) exp(alpha*euler_gamma + c) = gamma(2-alpha/2)/gamma(1+alpha/2),
    which pins the constant and is what the tests check.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("zeta_tail_constant needs alpha in [0, 1]")
    total = 0.0
    j = 1
    while True:
        p = 2 * j + 1
        term = 2.0 * zeta_odd(p) * (alpha / 2.0) ** p / p
        total += term
        if term < 1e-15 or j > 60:
            break
        j += 1
    return total


def omega_asymptotic(alpha: float, n: int) -> float:
    """Large-mode approximation of omega_n for alpha in (0, 1).

    theta - (1 - alpha/2) theta exp(alpha*euler_gamma + zeta tail) / n^(1-alpha);
    the defect against omega_dispersion decays at least like n^(alpha-2).
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("omega_asymptotic needs alpha in (0, 1)")
    if n < 2:
        raise ValueError("omega_asymptotic needs n >= 2")
    th = theta_alpha(alpha)
    amp = (1.0 - alpha / 2.0) * th * math.exp(alpha * EULER_GAMMA + zeta_tail_constant(alpha))
    return th - amp / n ** (1.0 - alpha)


def digamma_half_integer(n: int) -> float:
    """digamma(n + 1/2) as the exact finite sum -gamma - 2 ln 2 + 2 sum 1/(2k+1)."""
    if n < 0:
        raise ValueError("digamma_half_integer needs n >= 0")
    acc = 0.0
    for k in range(n):
        acc += 1.0 / (2 * k + 1)
    return -EULER_GAMMA - 2.0 * math.log(2.0) + 2.0 * acc


@dataclass(frozen=True)
class DispersionTable:
    """Mode-indexed angular velocities omega_m for one fixed alpha."""

    alpha: float
    values: dict[int, float] = field(default_factory=dict)

    @classmethod
    def build(cls, alpha: float, m_max: int) -> "DispersionTable":
        """Tabulate omega_m for m = 2..m_max with one cumulative product pass."""
        if m_max < 2:
            raise ValueError("m_max must be >= 2")
        vals: dict[int, float] = {}
        if alpha == 0.0:
            for m in range(2, m_max + 1):
                vals[m] = (m - 1.0) / (2.0 * m)
        elif alpha == 1.0:
            acc = 0.0
            for m in range(2, m_max + 1):
                acc += 1.0 / (2.0 * (m - 1) + 1.0)
                vals[m] = (2.0 / math.pi) * acc
        else:
            th = theta_alpha(alpha)
            ratio = 1.0
            for m in range(2, m_max + 1):
                k = m - 2
                ratio *= (1.0 + alpha / 2.0 + k) / (2.0 - alpha / 2.0 + k)
                vals[m] = th * (1.0 - ratio)
        return cls(alpha=alpha, values=vals)

    def check_invariants(self) -> None:
        """Positivity, strict monotonicity, and the theta upper bound."""
        ms = sorted(self.values)
        prev = None
        sup = theta_alpha(self.alpha) if 0.0 < self.alpha < 1.0 else None
        for m in ms:
            v = self.values[m]
            if 0.0 < self.alpha < 1.0:
                if v <= 0.0:
                    raise AssertionError(f"omega_{m} = {v} not positive")
                if sup is not None and v >= sup:
                    raise AssertionError(f"omega_{m} = {v} not below theta = {sup}")
            if prev is not None and v <= prev:
                raise AssertionError(f"omega values not increasing at m = {m}")
            prev = v


@dataclass(frozen=True)
class AsymptoticParams:
    """Constants of the large-mode expansion at one alpha."""

    alpha: float
    theta_alpha: float
    c_alpha: float
    euler_gamma: float = EULER_GAMMA

    @classmethod
    def for_alpha(cls, alpha: float) -> "AsymptoticParams":
        return cls(alpha=alpha, theta_alpha=theta_alpha(alpha),
                   c_alpha=zeta_tail_constant(alpha))
