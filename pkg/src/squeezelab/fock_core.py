"""Dense linear algebra on a truncated Fock space.

States are 1-D complex arrays over |0>..|N-1>, operators are N x N complex
arrays. The truncation is a hard cutoff: ``a_dag |N-1> = 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.special import gammaln

# double precision unit roundoff; no exponential can promise better
UNIT_ROUNDOFF = 2.0 ** -53


class TruncationError(ValueError):
    """The truncated basis is too small for the requested state or identity."""


class ExpmError(ArithmeticError):
    """Matrix exponential failed to meet its error bound."""


@dataclass(frozen=True)
class Tolerances:
    expm_tol: float = 1e-13
    compare_tol: float = 1e-8
    interior_buffer: int | None = None  # None -> n_levels // 4

    def __post_init__(self):
        if not (self.expm_tol > 0 and self.compare_tol > 0):
            raise ValueError("tolerances must be strictly positive")
        if self.interior_buffer is not None and self.interior_buffer <= 0:
            raise ValueError("interior_buffer must be strictly positive")

    def buffer_for(self, n_levels: int) -> int:
        check_levels(n_levels)
        buf = self.interior_buffer if self.interior_buffer is not None else max(1, n_levels // 4)
        if not buf < n_levels / 2:
            raise ValueError(f"interior_buffer={buf} must be < n_levels/2 = {n_levels / 2}")
        return buf

    def interior_for(self, n_levels: int) -> int:
        return n_levels - self.buffer_for(n_levels)


DEFAULT_TOLERANCES = Tolerances()


def check_levels(n_levels) -> int:
    if isinstance(n_levels, bool) or int(n_levels) != n_levels or n_levels < 2:
        raise ValueError(f"n_levels must be an integer >= 2, got {n_levels!r}")
    return int(n_levels)


def basis_state(n: int, n_levels: int) -> np.ndarray:
    check_levels(n_levels)
    if not 0 <= n < n_levels:
        raise ValueError(f"level {n} outside basis of size {n_levels}")
    v = np.zeros(n_levels, dtype=complex)
    v[n] = 1.0
    return v


def vacuum(n_levels: int) -> np.ndarray:
    return basis_state(0, n_levels)


def build_annihilation(n_levels: int) -> np.ndarray:
    """``a|n> = sqrt(n)|n-1>``; superdiagonal sqrt(1..N-1)."""
    n_levels = check_levels(n_levels)
    return np.diag(np.sqrt(np.arange(1, n_levels, dtype=float)), 1).astype(complex)


def build_creation(n_levels: int) -> np.ndarray:
    return build_annihilation(n_levels).conj().T


def build_number(n_levels: int) -> np.ndarray:
    n_levels = check_levels(n_levels)
    return np.diag(np.arange(n_levels, dtype=float)).astype(complex)


def build_quadrature_X(n_levels: int) -> np.ndarray:
    a = build_annihilation(n_levels)
    return (a + a.conj().T) / 2


def build_quadrature_Y(n_levels: int) -> np.ndarray:
    a = build_annihilation(n_levels)
    return (a - a.conj().T) / 2j


def build_position(n_levels: int) -> np.ndarray:
    """Dimensionless position ``(a + a_dag)/sqrt(2)`` (hbar = m = omega = 1)."""
    return math.sqrt(2) * build_quadrature_X(n_levels)


def build_momentum(n_levels: int) -> np.ndarray:
    return math.sqrt(2) * build_quadrature_Y(n_levels)


def ladder_power_exp(c: complex, power: int, n_levels: int, raising: bool = True) -> np.ndarray:
    """Exact truncated matrix of ``exp(c * a_dag**power)`` (or ``exp(c * a**power)``).

    The generator is strictly triangular, so the series terminates and the
    truncated matrix equals the leading block of the untruncated one. Entries
    are evaluated in log space::

        <k + p j| exp(c a_dag^p) |k> = c^j / j! * sqrt((k + p j)! / k!)
    """
    n_levels = check_levels(n_levels)
    if power < 1:
        raise ValueError("power must be >= 1")
    out = np.eye(n_levels, dtype=complex)
    if c == 0:
        return out
    log_abs_c = math.log(abs(c))
    phase = c / abs(c)
    k = np.arange(n_levels)
    lgk = gammaln(k + 1.0)
    for j in range(1, (n_levels - 1) // power + 1):
        rows = k[: n_levels - power * j] + power * j
        cols = k[: n_levels - power * j]
        logmag = j * log_abs_c - gammaln(j + 1.0) + 0.5 * (lgk[rows] - lgk[cols])
        out[rows, cols] = phase**j * np.exp(logmag)
    return out if raising else out.T.copy()


def matrix_exponential(op: np.ndarray, tol: Tolerances | float = DEFAULT_TOLERANCES) -> np.ndarray:
    """Backward-stable exponential (Pade scaling and squaring).

    Raises ExpmError if the requested bound is below double precision or the
    result is not finite.
    """
    expm_tol = tol.expm_tol if isinstance(tol, Tolerances) else float(tol)
    op = np.asarray(op)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValueError("operator must be square")
    if not np.all(np.isfinite(op)):
        raise ValueError("operator has non-finite entries")
    if expm_tol < UNIT_ROUNDOFF:
        raise ExpmError(f"expm_tol={expm_tol:g} is below unit roundoff")
    if not op.any():
        return np.eye(op.shape[0], dtype=complex)
    result = scipy.linalg.expm(op.astype(complex))
    if not np.all(np.isfinite(result)):
        raise ExpmError("matrix exponential overflowed")
    return result


def apply_nilpotent_exp(gen: np.ndarray, v: np.ndarray) -> np.ndarray:
    """``exp(gen) @ v`` for strictly triangular ``gen`` by the terminating series."""
    gen = np.asarray(gen)
    if np.any(np.triu(gen)) and np.any(np.tril(gen)):
        raise ValueError("generator must be strictly triangular")
    out = np.array(v, dtype=complex)
    term = out.copy()
    for k in range(1, gen.shape[0] + 1):
        term = gen @ term / k
        if not term.any():
            break
        out += term
    return out


def _check_pair(u, v):
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")


def inner_product(u: np.ndarray, v: np.ndarray) -> complex:
    """``<u|v>``, conjugate-linear in ``u``."""
    u, v = np.asarray(u), np.asarray(v)
    _check_pair(u, v)
    return complex(np.vdot(u, v))


def norm(v: np.ndarray) -> float:
    return float(np.linalg.norm(v))


def normalize(v: np.ndarray) -> np.ndarray:
    nv = norm(v)
    if nv == 0 or not math.isfinite(nv):
        raise ValueError("cannot normalize a zero or non-finite vector")
    return np.asarray(v, dtype=complex) / nv


def is_normalized(v: np.ndarray, tol: float = 1e-12) -> bool:
    return abs(norm(v) - 1.0) <= tol


def fidelity(u: np.ndarray, v: np.ndarray) -> float:
    """``|<u|v>|^2 / (<u|u><v|v>)``, clipped into [0, 1]."""
    nu, nv = norm(u), norm(v)
    if nu == 0 or nv == 0:
        raise ValueError("fidelity undefined for zero vectors")
    f = abs(inner_product(u, v)) ** 2 / (nu * nv) ** 2
    return float(min(max(f, 0.0), 1.0))


def apply(op: np.ndarray, v: np.ndarray) -> np.ndarray:
    op, v = np.asarray(op), np.asarray(v)
    if op.shape != (v.shape[0], v.shape[0]):
        raise ValueError(f"operator {op.shape} cannot act on vector of length {v.shape[0]}")
    return op @ v


def expectation(op: np.ndarray, v: np.ndarray) -> complex:
    return inner_product(v, apply(op, v))


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B - B @ A


def edge_mass(v: np.ndarray, width: int | None = None) -> float:
    """Fraction of ``|v|^2`` in the top ``width`` levels (default max(4, N // 32)).

    Proxy for the population lost past the cutoff.
    """
    v = np.asarray(v)
    n = v.shape[0]
    width = max(4, n // 32) if width is None else width
    total = float(np.vdot(v, v).real)
    if total == 0:
        return 0.0
    return float(np.vdot(v[n - width:], v[n - width:]).real) / total


def block_deviation(direct: np.ndarray, other: np.ndarray, interior: int) -> tuple[float, float]:
    """(max abs, max abs / max |direct|) over the leading ``interior`` block."""
    if not 1 <= interior <= direct.shape[0]:
        raise ValueError(f"interior block {interior} outside 1..{direct.shape[0]}")
    d = direct[:interior, :interior]
    abs_dev = float(np.max(np.abs(d - other[:interior, :interior])))
    scale = float(np.max(np.abs(d)))
    rel_dev = abs_dev / scale if scale > 0 else abs_dev
    return abs_dev, rel_dev
