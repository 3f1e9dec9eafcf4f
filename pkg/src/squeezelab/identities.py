"""Numerical certificates for the ladder-operator identities.

Each check builds the "direct" side from matrix exponentials of truncated
generators and compares it with the closed-form side on the leading
``interior`` x ``interior`` block, where the truncation edge cannot reach.
Relative deviation is taken against the largest entry of the direct side.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .fock_core import (
    TruncationError,
    block_deviation,
    build_annihilation,
    build_number,
    build_quadrature_X,
    check_levels,
    commutator,
    ladder_power_exp,
    matrix_exponential,
)
from .states import mu_nu, squeeze_operator

DEFAULT_THRESHOLD = 1e-8
# exp(r * n) on the diagonal must stay representable with room to spare
MAX_DIAGONAL_EXPONENT = 600.0


@dataclass(frozen=True)
class VerificationReport:
    identity_name: str
    n_levels: int
    interior: int
    param: float
    abs_dev: float
    rel_dev: float
    threshold: float
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)


def _report(name, n_levels, interior, param, direct, other, threshold) -> VerificationReport:
    abs_dev, rel_dev = block_deviation(direct, other, interior)
    return VerificationReport(name, n_levels, interior, float(param), abs_dev, rel_dev,
                              float(threshold), bool(rel_dev <= threshold))


def _worst(name, reports, threshold) -> VerificationReport:
    w = max(reports, key=lambda rep: rep.rel_dev)
    return VerificationReport(name, w.n_levels, w.interior, w.param, w.abs_dev, w.rel_dev,
                              float(threshold), bool(w.rel_dev <= threshold))


def default_interior(n_levels: int, buffer: int | None = None) -> int:
    """Leading block kept after dropping ``buffer`` edge levels (default N // 4)."""
    n_levels = check_levels(n_levels)
    buffer = max(1, n_levels // 4) if buffer is None else buffer
    return n_levels - buffer


def squeeze_interior(r: float, n_levels: int) -> int:
    """Largest block a truncated ``S(r)`` keeps clear of the edge.

    ``S(r)`` stretches number-state support by about ``e^{2|r|}``; the block
    plus that stretch and its tail must fit, so ``N e^{-2|r|} / 4``.
    """
    n_levels = check_levels(n_levels)
    m = int(n_levels * math.exp(-2 * abs(r)) / 4)
    if m < 2:
        raise TruncationError(f"{n_levels} levels leave no trustworthy block at r={r}")
    return min(m, default_interior(n_levels))


def _resolve_interior(interior, n_levels, fallback):
    if interior is None:
        return fallback
    if not 1 <= interior <= n_levels:
        raise ValueError(f"interior {interior} outside 1..{n_levels}")
    return int(interior)


def verify_bogoliubov(r: float, n_levels: int, interior: int | None = None,
                      threshold: float = DEFAULT_THRESHOLD) -> VerificationReport:
    """``S^dag a S = mu a - nu a_dag`` and ``S^dag X S = e^{-r} X`` (worst of the two)."""
    if abs(r) > 1.5:
        raise TruncationError(f"|r|={abs(r)} beyond the supported 1.5")
    interior = _resolve_interior(interior, n_levels, None) or squeeze_interior(r, n_levels)
    mu, nu = mu_nu(r)
    a = build_annihilation(n_levels)
    X = build_quadrature_X(n_levels)
    S = squeeze_operator(r, n_levels)
    Sd = S.conj().T
    reps = [
        _report("bogoliubov_a", n_levels, interior, r, Sd @ a @ S, mu * a - nu * a.conj().T, threshold),
        _report("bogoliubov_X", n_levels, interior, r, Sd @ X @ S, math.exp(-r) * X, threshold),
    ]
    return _worst("bogoliubov", reps, threshold)


def verify_squeeze_factorization(r: float, n_levels: int, interior: int | None = None,
                                 threshold: float = DEFAULT_THRESHOLD) -> VerificationReport:
    """Single exponential versus the normal-ordered product form of ``S(r)``."""
    interior = _resolve_interior(interior, n_levels, None) or squeeze_interior(r, n_levels)
    return _report("squeeze_factorization", n_levels, interior, r,
                   squeeze_operator(r, n_levels, "exponential"),
                   squeeze_operator(r, n_levels, "factored"), threshold)


def verify_shift_identity(gamma: float, degree: int, n_levels: int, interior: int | None = None,
                          threshold: float = DEFAULT_THRESHOLD) -> VerificationReport:
    """``e^{-g a} (a_dag)^k e^{g a} = (a_dag - g)^k`` for k = 1..degree, worst case."""
    if not 1 <= degree <= 6:
        raise ValueError("degree must be in 1..6")
    interior = _resolve_interior(interior, n_levels, default_interior(n_levels))
    a = build_annihilation(n_levels)
    ad = a.conj().T
    left = matrix_exponential(-gamma * a)
    right = matrix_exponential(gamma * a)
    shifted = ad - gamma * np.eye(n_levels)
    reps = []
    mono, ref = np.eye(n_levels, dtype=complex), np.eye(n_levels, dtype=complex)
    for k in range(1, degree + 1):
        mono, ref = mono @ ad, ref @ shifted
        reps.append(_report(f"shift_k{k}", n_levels, interior, gamma, left @ mono @ right, ref, threshold))
    return _worst("shift", reps, threshold)


def verify_similarity_scaling(f: float, n_levels: int, interior: int | None = None,
                              threshold: float = DEFAULT_THRESHOLD) -> VerificationReport:
    """``e^{f n} a^2 e^{-f n} = e^{-2f} a^2``."""
    if abs(f) > 1:
        raise ValueError("|f| must be <= 1")
    interior = _resolve_interior(interior, n_levels, default_interior(n_levels))
    a2 = np.linalg.matrix_power(build_annihilation(n_levels), 2)
    n = build_number(n_levels)
    direct = matrix_exponential(f * n) @ a2 @ matrix_exponential(-f * n)
    return _report("similarity_scaling", n_levels, interior, f, direct, math.exp(-2 * f) * a2, threshold)


def _diagonal_guard(r, n_levels):
    if abs(r) * (n_levels - 1) > MAX_DIAGONAL_EXPONENT:
        raise TruncationError(f"exp(r n) overflows at r={r}, n_levels={n_levels}")


def _number_then_square(f: float, g: float, n_levels: int) -> np.ndarray:
    """``exp(f n) exp(g a^2)`` without any matrix exponential."""
    return np.exp(f * np.arange(n_levels))[:, None] * ladder_power_exp(g, 2, n_levels, raising=False)


def verify_disentangle(r: float, n_levels: int, interior: int | None = None,
                       threshold: float = DEFAULT_THRESHOLD) -> VerificationReport:
    """``exp(-(r/2) a^2 + r n) = exp(r n) exp((1 - e^{2r})/4 a^2)``."""
    if abs(r) > 0.75:
        raise ValueError("|r| must be <= 0.75")
    _diagonal_guard(r, n_levels)
    interior = _resolve_interior(interior, n_levels, n_levels // 2)
    a2 = np.linalg.matrix_power(build_annihilation(n_levels), 2)
    direct = matrix_exponential(-(r / 2) * a2 + r * build_number(n_levels))
    factored = _number_then_square(r, (1 - math.exp(2 * r)) / 4, n_levels)
    return _report("disentangle", n_levels, interior, r, direct, factored, threshold)


@dataclass(frozen=True)
class VariantAdjudication:
    param: float
    as_printed: VerificationReport
    substituted: VerificationReport

    @property
    def winner(self) -> str:
        """``as_printed``, ``substituted``, ``both`` or ``neither``."""
        a, b = self.as_printed.passed, self.substituted.passed
        return {(True, True): "both", (True, False): "as_printed",
                (False, True): "substituted", (False, False): "neither"}[(a, b)]

    def to_dict(self) -> dict:
        return {"param": self.param, "winner": self.winner,
                "as_printed": self.as_printed.to_dict(), "substituted": self.substituted.to_dict()}


def verify_main_text_variant(r: float, n_levels: int, interior: int | None = None,
                             threshold: float = DEFAULT_THRESHOLD) -> VariantAdjudication:
    """Which ordering of ``exp((r/2) a^2 - r n)`` holds.

    as_printed:  ``exp(-r n) exp((1 - e^{2r})/4 a^2)``
    substituted: ``exp(-r n) exp((1 - e^{-2r})/4 a^2)`` (r -> -r in the disentangled form)
    """
    if abs(r) > 0.75:
        raise ValueError("|r| must be <= 0.75")
    _diagonal_guard(r, n_levels)
    interior = _resolve_interior(interior, n_levels, n_levels // 2)
    a2 = np.linalg.matrix_power(build_annihilation(n_levels), 2)
    direct = matrix_exponential((r / 2) * a2 - r * build_number(n_levels))
    printed = _number_then_square(-r, (1 - math.exp(2 * r)) / 4, n_levels)
    subst = _number_then_square(-r, (1 - math.exp(-2 * r)) / 4, n_levels)
    return VariantAdjudication(
        float(r),
        _report("main_text_as_printed", n_levels, interior, r, direct, printed, threshold),
        _report("main_text_substituted", n_levels, interior, r, direct, subst, threshold),
    )


def verify_square_number_commutator(n_levels: int, interior: int | None = None,
                                    threshold: float = 1e-12) -> VerificationReport:
    """``[a^2, n] = 2 a^2``."""
    interior = _resolve_interior(interior, n_levels, default_interior(n_levels))
    a2 = np.linalg.matrix_power(build_annihilation(n_levels), 2)
    return _report("square_number_commutator", n_levels, interior, 0.0,
                   commutator(a2, build_number(n_levels)), 2 * a2, threshold)


def integrate_disentangle_ode(r_max: float, step: float = 1e-3) -> tuple[float, float]:
    """RK4 for ``f' = 1, g' = -e^{2f}/2`` with ``f(0) = g(0) = 0``, out to ``r_max``.

    The step is shrunk so an integer number of steps lands on ``r_max``.
    """
    if not 0 < step <= 1e-2:
        raise ValueError("step must be in (0, 1e-2]")
    if abs(r_max) > 2:
        raise ValueError("|r_max| must be <= 2")
    n_steps = math.ceil(abs(r_max) / step)
    if n_steps == 0:
        return 0.0, 0.0
    h = r_max / n_steps

    def rhs(f):
        return 1.0, -0.5 * math.exp(2 * f)

    f = g = 0.0
    for _ in range(n_steps):
        k1 = rhs(f)
        k2 = rhs(f + h / 2 * k1[0])
        k3 = rhs(f + h / 2 * k2[0])
        k4 = rhs(f + h * k3[0])
        f += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        g += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
    return f, g


def ode_step_halving_ratio(r_max: float = 1.0, step: float = 1e-2) -> float:
    """Error ratio at ``step`` vs ``step/2`` for g; ~16 for a fourth-order scheme."""
    exact = (1 - math.exp(2 * r_max)) / 4
    e1 = abs(integrate_disentangle_ode(r_max, step)[1] - exact)
    e2 = abs(integrate_disentangle_ode(r_max, step / 2)[1] - exact)
    return e1 / e2
