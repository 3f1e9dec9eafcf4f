"""Coherent, squeezed and position/momentum eigenstate approximants.

Units: hbar = m = omega = 1. Squeeze parameters are real. Every state is built
by at least two independent routes so the routes can check each other.
"""
from __future__ import annotations

import cmath
import math

import mpmath
import numpy as np
from scipy.special import gammaln

from .fock_core import (
    TruncationError,
    apply_nilpotent_exp,
    build_annihilation,
    build_creation,
    check_levels,
    edge_mass,
    ladder_power_exp,
    matrix_exponential,
    normalize,
    vacuum,
)

MAX_SQUEEZE = 5.0
DEFAULT_TAIL_TOL = 1e-9


def _check_r(r: float) -> float:
    r = float(r)
    if not math.isfinite(r) or abs(r) > MAX_SQUEEZE:
        raise ValueError(f"squeeze parameter must be finite with |r| <= {MAX_SQUEEZE}, got {r}")
    return r


def _check_alpha(alpha) -> complex:
    alpha = complex(alpha)
    if not cmath.isfinite(alpha):
        raise ValueError("amplitude must be finite")
    return alpha


def _guard_tail(v: np.ndarray, tail_tol: float, what: str) -> np.ndarray:
    mass = edge_mass(v)
    if mass > tail_tol:
        raise TruncationError(
            f"{what}: {mass:.3e} of the norm sits at the edge of {v.shape[0]} levels "
            f"(limit {tail_tol:g}); increase n_levels"
        )
    return v


def mu_nu(r: float) -> tuple[float, float]:
    """``(cosh r, sinh r)``."""
    r = _check_r(r)
    return math.cosh(r), math.sinh(r)


def coherent_amplitudes(alpha, n_levels: int) -> np.ndarray:
    """Raw truncated amplitudes ``exp(-|alpha|^2/2) alpha^n / sqrt(n!)``, no guard."""
    alpha = _check_alpha(alpha)
    n_levels = check_levels(n_levels)
    out = np.zeros(n_levels, dtype=complex)
    if alpha == 0:
        out[0] = 1.0
        return out
    n = np.arange(n_levels)
    logmag = -abs(alpha) ** 2 / 2 + n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1.0)
    out[:] = np.exp(logmag) * np.exp(1j * n * cmath.phase(alpha))
    return out


def coherent_tail_bound(alpha, n_levels: int) -> float:
    """Magnitude of the last retained amplitude, ``|<N-1|alpha>|``."""
    alpha = _check_alpha(alpha)
    if alpha == 0:
        return 0.0
    n = n_levels - 1
    return math.exp(-abs(alpha) ** 2 / 2 + n * math.log(abs(alpha)) - 0.5 * math.lgamma(n + 1))


def coherent_state(alpha, n_levels: int) -> np.ndarray:
    """Truncated coherent state (series amplitudes, not renormalized).

    Raises TruncationError unless the last amplitude is below 1e-12.
    """
    if coherent_tail_bound(alpha, n_levels) >= 1e-12:
        raise TruncationError(f"coherent state alpha={complex(alpha)} does not fit {n_levels} levels")
    return coherent_amplitudes(alpha, n_levels)


def displacement_operator(alpha, n_levels: int, form: str = "exponential") -> np.ndarray:
    """``D(alpha)`` as one exponential or in antinormal order.

    antinormal: ``exp(|alpha|^2/2) exp(-alpha* a) exp(alpha a_dag)``.
    """
    alpha = _check_alpha(alpha)
    if coherent_tail_bound(alpha, n_levels) >= 1e-12:
        raise TruncationError(f"displacement alpha={alpha} does not fit {n_levels} levels")
    if form == "exponential":
        a = build_annihilation(n_levels)
        return matrix_exponential(alpha * a.conj().T - alpha.conjugate() * a)
    if form == "antinormal":
        lower = ladder_power_exp(-alpha.conjugate(), 1, n_levels, raising=False)
        upper = ladder_power_exp(alpha, 1, n_levels, raising=True)
        return math.exp(abs(alpha) ** 2 / 2) * (lower @ upper)
    raise ValueError(f"unknown displacement form {form!r}")


def _squeeze_generator(r: float, n_levels: int) -> np.ndarray:
    a = build_annihilation(n_levels)
    return (a @ a - a.conj().T @ a.conj().T) * (r / 2)


def squeeze_operator(r: float, n_levels: int, form: str = "exponential") -> np.ndarray:
    """``S(r) = exp[(a^2 - a_dag^2) r / 2]``.

    factored: ``mu^-1/2 exp(-nu/(2mu) a_dag^2) mu^-n exp(nu/(2mu) a^2)``. Each
    factor is exact on the truncated space; the product is the leading block
    of the untruncated operator up to cancellation roundoff in deep rows.
    """
    r = _check_r(r)
    check_levels(n_levels)
    if form == "exponential":
        return matrix_exponential(_squeeze_generator(r, n_levels))
    if form == "factored":
        mu, nu = mu_nu(r)
        t = nu / mu
        left = ladder_power_exp(-t / 2, 2, n_levels, raising=True)
        middle = mu ** (-np.arange(n_levels) - 0.5)
        right = ladder_power_exp(t / 2, 2, n_levels, raising=False)
        return (left * middle) @ right
    raise ValueError(f"unknown squeeze form {form!r}")


def apply_squeeze(r: float, v: np.ndarray) -> np.ndarray:
    """``S(r) v`` through the factored form, one factor at a time."""
    r = _check_r(r)
    mu, nu = mu_nu(r)
    t = nu / mu
    n_levels = v.shape[0]
    a = build_annihilation(n_levels)
    w = apply_nilpotent_exp((t / 2) * (a @ a), v)
    w = w * mu ** (-np.arange(n_levels) - 0.5)
    ad = a.conj().T
    return apply_nilpotent_exp((-t / 2) * (ad @ ad), w)


def squeezed_vacuum(r: float, n_levels: int, tail_tol: float = DEFAULT_TAIL_TOL) -> np.ndarray:
    """``S(r)|0>`` from its closed-form even-level amplitudes."""
    r = _check_r(r)
    mu, nu = mu_nu(r)
    v = ladder_power_exp(-nu / (2 * mu), 2, n_levels)[:, 0] / math.sqrt(mu)
    return _guard_tail(v, tail_tol, f"squeezed vacuum r={r}")


def yuen_state(alpha, r: float, n_levels: int, tail_tol: float = DEFAULT_TAIL_TOL) -> np.ndarray:
    """``S(r) D(alpha)|0>``: displace, then squeeze."""
    v = apply_squeeze(r, coherent_state(alpha, n_levels))
    return _guard_tail(v, tail_tol, f"Yuen state alpha={complex(alpha)} r={r}")


def caves_amplitude(alpha, r: float) -> complex:
    """Displacement ``mu alpha - nu alpha*`` giving the same state in Caves order."""
    alpha = _check_alpha(alpha)
    mu, nu = mu_nu(r)
    return mu * alpha - nu * alpha.conjugate()


def caves_state(alpha_prime, r: float, n_levels: int, tail_tol: float = DEFAULT_TAIL_TOL) -> np.ndarray:
    """``D(alpha') S(r)|0>``: squeeze, then displace. Built from two matrix exponentials."""
    alpha_prime = _check_alpha(alpha_prime)
    r = _check_r(r)
    a = build_annihilation(n_levels)
    squeezed = matrix_exponential(_squeeze_generator(r, n_levels)) @ vacuum(n_levels)
    disp = matrix_exponential(alpha_prime * a.conj().T - alpha_prime.conjugate() * a)
    v = disp @ squeezed
    return _guard_tail(v, tail_tol, f"Caves state alpha'={alpha_prime} r={r}")


def caves_closed_form_state(x: float, r: float, n_levels: int,
                            tail_tol: float = DEFAULT_TAIL_TOL) -> np.ndarray:
    """Caves state with displacement ``x/sqrt(2)`` as a single operator on the vacuum::

        mu^-1/2 exp[-(x^2/4)(1 + nu/mu)] exp[-(nu/2mu) a_dag^2 + (x/sqrt2)(1 + nu/mu) a_dag] |0>
    """
    x = float(x)
    mu, nu = mu_nu(r)
    t = nu / mu
    ad = build_creation(n_levels)
    gen = -(t / 2) * (ad @ ad) + (x / math.sqrt(2)) * (1 + t) * ad
    v = apply_nilpotent_exp(gen, vacuum(n_levels))
    v *= math.exp(-(x**2 / 4) * (1 + t)) / math.sqrt(mu)
    return _guard_tail(v, tail_tol, f"Caves closed form x={x} r={r}")


def yuen_limit_state(r: float, n_levels: int, tail_tol: float = DEFAULT_TAIL_TOL) -> np.ndarray:
    """Normalized ``exp(-(nu/2mu) a_dag^2)|0>``; carries no position label."""
    mu, nu = mu_nu(r)
    ad = build_creation(n_levels)
    v = apply_nilpotent_exp(-(nu / (2 * mu)) * (ad @ ad), vacuum(n_levels))
    return normalize(_guard_tail(v, tail_tol, f"Yuen limit state r={r}"))


def hermite_functions(x: float, n_levels: int) -> np.ndarray:
    """Oscillator eigenfunctions ``psi_0(x)..psi_{N-1}(x)`` by the normalized recursion.

    ``psi_n = x sqrt(2/n) psi_{n-1} - sqrt((n-1)/n) psi_{n-2}``; no factorials,
    so no overflow at large n.
    """
    n_levels = check_levels(n_levels)
    x = float(x)
    psi = np.empty(n_levels)
    psi[0] = math.pi ** -0.25 * math.exp(-x * x / 2)
    psi[1] = math.sqrt(2) * x * psi[0]
    for n in range(2, n_levels):
        psi[n] = x * math.sqrt(2 / n) * psi[n - 1] - math.sqrt((n - 1) / n) * psi[n - 2]
    return psi


def _position_from_coherent(x: float, n_levels: int, dps: int = 50) -> np.ndarray:
    # exp(-a_dag^2/2) on a coherent vector alternates in sign; the cancellation
    # costs ~8 digits by n ~ 60 at |x| = 2, so sum in extended precision
    with mpmath.workdps(dps):
        beta = mpmath.sqrt(2) * mpmath.mpf(x)
        coh = [mpmath.exp(-beta**2 / 2) * beta**k / mpmath.sqrt(mpmath.factorial(k))
               for k in range(n_levels)]
        pref = mpmath.pi ** mpmath.mpf(-0.25) * mpmath.exp(mpmath.mpf(x) ** 2 / 2)
        out = np.empty(n_levels, dtype=complex)
        for n in range(n_levels):
            acc = mpmath.mpf(0)
            for j in range(n // 2 + 1):
                k = n - 2 * j
                acc += ((-0.5) ** j / mpmath.factorial(j)
                        * mpmath.sqrt(mpmath.factorial(n) / mpmath.factorial(k)) * coh[k])
            out[n] = float(pref * acc)
    return out


def position_eigenstate(x: float, n_levels: int, form: str = "hermite") -> np.ndarray:
    """Unnormalized position eigenstate approximant; amplitude n is ``psi_n(x)``.

    forms
        hermite   -- recursion for psi_n(x)
        operator  -- ``pi^-1/4 e^{-x^2/2} exp(-a_dag^2/2 + sqrt2 x a_dag)|0>``, one expm
        coherent  -- ``pi^-1/4 e^{x^2/2} exp(-a_dag^2/2)|sqrt2 x>``
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("position must be finite")
    n_levels = check_levels(n_levels)
    if form == "hermite":
        return hermite_functions(x, n_levels).astype(complex)
    ad = build_creation(n_levels)
    if form == "operator":
        gen = -0.5 * (ad @ ad) + math.sqrt(2) * x * ad
        return math.pi ** -0.25 * math.exp(-x * x / 2) * matrix_exponential(gen)[:, 0]
    if form == "coherent":
        coherent_state(math.sqrt(2) * x, n_levels)  # truncation guard only
        return _position_from_coherent(x, n_levels)
    raise ValueError(f"unknown position form {form!r}")


def momentum_eigenstate(p: float, n_levels: int, form: str = "hermite") -> np.ndarray:
    """Unnormalized momentum eigenstate approximant for ``p = (a - a_dag)/(i sqrt2)``.

    The quarter-period rotation ``exp(i pi n / 2)`` maps position onto momentum,
    so amplitude n is ``i^n psi_n(p)``; equivalently
    ``pi^-1/4 e^{-p^2/2} exp(+a_dag^2/2 + i sqrt2 p a_dag)|0>``.
    """
    p = float(p)
    n_levels = check_levels(n_levels)
    if form == "hermite":
        phases = np.array([1, 1j, -1, -1j])[np.arange(n_levels) % 4]
        return phases * hermite_functions(p, n_levels)
    if form == "operator":
        ad = build_creation(n_levels)
        gen = 0.5 * (ad @ ad) + 1j * math.sqrt(2) * p * ad
        return math.pi ** -0.25 * math.exp(-p * p / 2) * apply_nilpotent_exp(gen, vacuum(n_levels))
    raise ValueError(f"unknown momentum form {form!r}")
