"""Extreme-squeezing limit studies, weak eigenvalue residuals, localization kernels."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .fock_core import (
    TruncationError,
    build_momentum,
    build_position,
    edge_mass,
    expectation,
    fidelity,
    inner_product,
    norm,
    normalize,
)
from .states import (
    caves_state,
    coherent_state,
    hermite_functions,
    momentum_eigenstate,
    position_eigenstate,
    yuen_limit_state,
    yuen_state,
)

# limit studies only need fidelities to a few digits; see LimitStudyRow.edge_mass
STUDY_TAIL_TOL = 1e-4


@dataclass(frozen=True)
class LimitStudyRow:
    r: float
    center_x: float
    fidelity_to_target: float
    norm_check: float
    edge_mass: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ResidualRow:
    x: float
    probe_beta: complex
    weak_residual: float
    boundary_term: float


def _center(v: np.ndarray) -> float:
    return expectation(build_position(v.shape[0]), normalize(v)).real


def _study(builder, target, x, r_list, n_levels, tail_tol):
    rows = []
    for r in r_list:
        try:
            v = builder(x / math.sqrt(2), r, n_levels, tail_tol=tail_tol)
        except TruncationError as exc:
            raise TruncationError(f"r={r}: {exc}") from exc
        rows.append(LimitStudyRow(
            r=float(r),
            center_x=_center(v),
            fidelity_to_target=fidelity(target(r), v),
            norm_check=norm(v),
            edge_mass=edge_mass(v),
        ))
    return rows


def yuen_limit_study(x: float, r_list, n_levels: int, tail_tol: float = STUDY_TAIL_TOL) -> list[LimitStudyRow]:
    """Yuen states ``S(r)|x/sqrt2>`` against the x-free limit vector at the same r.

    The center follows ``e^{-r} x``; the fidelity to the limit vector is
    ``exp(-x^2/2)`` at every r because S(r) is unitary.
    """
    return _study(yuen_state, lambda r: yuen_limit_state(r, n_levels, tail_tol=tail_tol),
                  x, r_list, n_levels, tail_tol)


def caves_limit_study(x: float, r_list, n_levels: int, tail_tol: float = STUDY_TAIL_TOL) -> list[LimitStudyRow]:
    """Caves states ``D(x/sqrt2) S(r)|0>`` against the normalized truncated ``|x>``."""
    target = normalize(position_eigenstate(x, n_levels))
    return _study(caves_state, lambda r: target, x, r_list, n_levels, tail_tol)


def yuen_pairwise_fidelity(x1: float, x2: float, r_list, n_levels: int,
                           tail_tol: float = STUDY_TAIL_TOL) -> list[float]:
    """Fidelity between Yuen states labelled x1 and x2, one value per r."""
    out = []
    for r in r_list:
        u = yuen_state(x1 / math.sqrt(2), r, n_levels, tail_tol=tail_tol)
        v = yuen_state(x2 / math.sqrt(2), r, n_levels, tail_tol=tail_tol)
        out.append(fidelity(u, v))
    return out


def strictly_increasing(values) -> bool:
    return all(b > a for a, b in zip(values, values[1:]))


def weak_residual(x: float, beta, n_levels: int) -> float:
    """``|<beta| (x_op - x) |x>_N|``."""
    v = position_eigenstate(x, n_levels)
    w = build_position(n_levels) @ v - x * v
    return abs(inner_product(coherent_state(beta, n_levels), w))


def boundary_term(x: float, beta, n_levels: int) -> float:
    """Closed form of the weak residual.

    The recursion closes exactly except at the top level, where
    ``(x_op - x)|x>_N = -sqrt(N/2) psi_N(x) |N-1>``.
    """
    psi_N = hermite_functions(x, n_levels + 1)[n_levels]
    beta = complex(beta)
    n = n_levels - 1
    bra = 0.0 if beta == 0 else math.exp(-abs(beta) ** 2 / 2 + n * math.log(abs(beta)) - 0.5 * math.lgamma(n + 1))
    return math.sqrt(n_levels / 2) * abs(psi_N) * bra


def weak_eigenvalue_check(x: float, beta_list, n_levels: int) -> list[ResidualRow]:
    return [ResidualRow(float(x), complex(b), weak_residual(x, b, n_levels), boundary_term(x, b, n_levels))
            for b in beta_list]


def strong_residual(x: float, n_levels: int) -> float:
    """``||(x_op - x)|x>_N|| / |||x>_N||``; O(1) by construction, reported only."""
    v = position_eigenstate(x, n_levels)
    return norm(build_position(n_levels) @ v - x * v) / norm(v)


def weak_momentum_residual(p: float, beta, n_levels: int) -> float:
    """``|<beta| (p_op - p) |p>_N|``."""
    v = momentum_eigenstate(p, n_levels)
    w = build_momentum(n_levels) @ v - p * v
    return abs(inner_product(coherent_state(beta, n_levels), w))


def localization_profile(x: float, x_prime_grid, n_levels: int) -> list[tuple[float, float]]:
    """Kernel ``sum_n psi_n(x') psi_n(x)`` over the grid."""
    ref = hermite_functions(x, n_levels)
    return [(float(xp), float(hermite_functions(xp, n_levels) @ ref)) for xp in x_prime_grid]
