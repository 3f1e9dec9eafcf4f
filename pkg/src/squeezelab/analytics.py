"""Closed-form moments, overlaps and Husimi Q values, with numeric counterparts."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .fock_core import (
    build_quadrature_X,
    build_quadrature_Y,
    expectation,
    inner_product,
    norm,
)
from .states import coherent_state, position_eigenstate, yuen_state

PI_QUARTER = math.pi ** -0.25
Q_MAX = math.pi ** -1.5


@dataclass(frozen=True)
class QuadratureMoments:
    """Means and variances of X = (a + a_dag)/2 and Y = (a - a_dag)/2i."""

    mean_x: float
    mean_y: float
    var_x: float
    var_y: float

    def __post_init__(self):
        if self.var_x < -1e-12 or self.var_y < -1e-12:
            raise ValueError("negative quadrature variance")
        if self.var_x * self.var_y < 1 / 16 - 1e-9:
            raise ValueError(f"uncertainty product {self.var_x * self.var_y} below 1/16")

    @property
    def delta_x(self) -> float:
        return math.sqrt(max(self.var_x, 0.0))

    @property
    def delta_y(self) -> float:
        return math.sqrt(max(self.var_y, 0.0))


def moments_numeric(v: np.ndarray, norm_tol: float = 1e-8) -> QuadratureMoments:
    if abs(norm(v) - 1) > norm_tol:
        raise ValueError(f"state must be normalized (norm {norm(v)!r})")
    n = v.shape[0]
    X, Y = build_quadrature_X(n), build_quadrature_Y(n)
    mx = expectation(X, v).real
    my = expectation(Y, v).real
    return QuadratureMoments(
        mean_x=mx,
        mean_y=my,
        var_x=expectation(X @ X, v).real - mx**2,
        var_y=expectation(Y @ Y, v).real - my**2,
    )


def closed_form_moments(alpha, r: float) -> QuadratureMoments:
    """Moments of ``S(r)|alpha>``: X shrinks by e^-r, Y grows by e^r."""
    alpha = complex(alpha)
    return QuadratureMoments(
        mean_x=math.exp(-r) * alpha.real,
        mean_y=math.exp(r) * alpha.imag,
        var_x=math.exp(-2 * r) / 4,
        var_y=math.exp(2 * r) / 4,
    )


def overlap_coherent_position(beta, x: float) -> complex:
    """``<beta|x>`` against the unnormalized position eigenstate."""
    bc = complex(beta).conjugate()
    return PI_QUARTER * cmath.exp(-x * x / 2 - bc * bc / 2 - abs(bc) ** 2 / 2 + math.sqrt(2) * bc * x)


def overlap_coherent_position_numeric(beta, x: float, n_levels: int = 128) -> complex:
    return inner_product(coherent_state(beta, n_levels), position_eigenstate(x, n_levels))


def squeezed_overlap_coefficients(alpha, r: float, mode: str = "corrected") -> tuple[complex, complex, complex]:
    """``(c2, c1, c0)`` with ``<alpha; r|x> = exp(c2 x^2 + c1 x + c0)``.

    printed mode carries the x^2 coefficient ``(2 - e^{2r} - 2e^{-2r})/2`` and the
    constant ``-r/2``. corrected mode follows from ``<x|S(r)|alpha> =
    e^{r/2} psi_alpha(e^r x)``; its coefficients are what
    :func:`fit_squeezed_overlap` recovers from the truncated inner product.
    """
    ac = complex(alpha).conjugate()
    base = -ac * ac / 2 - abs(ac) ** 2 / 2 - math.log(math.pi) / 4
    if mode == "printed":
        return ((2 - math.exp(2 * r) - 2 * math.exp(-2 * r)) / 2,
                math.sqrt(2) * ac * math.exp(-r),
                base - r / 2)
    if mode == "corrected":
        return (-math.exp(2 * r) / 2,
                math.sqrt(2) * ac * math.exp(r),
                base + r / 2)
    raise ValueError(f"unknown mode {mode!r}")


def overlap_squeezed_position(alpha, r: float, x: float, mode: str = "corrected") -> complex:
    """``<alpha; r|x>`` for the Yuen state ``S(r)|alpha>``."""
    c2, c1, c0 = squeezed_overlap_coefficients(alpha, r, mode)
    return cmath.exp(c2 * x * x + c1 * x + c0)


def overlap_squeezed_position_numeric(alpha, r: float, x: float, n_levels: int = 256) -> complex:
    return inner_product(yuen_state(alpha, r, n_levels), position_eigenstate(x, n_levels))


def fit_squeezed_overlap(alpha, r: float, xs, n_levels: int = 256) -> tuple[complex, complex, complex]:
    """Least-squares quadratic fit of ``log <alpha; r|x>`` over ``xs`` from the truncated oracle."""
    xs = np.asarray(sorted(xs), dtype=float)
    vals = np.array([overlap_squeezed_position_numeric(alpha, r, x, n_levels) for x in xs])
    logs = np.log(np.abs(vals)) + 1j * np.unwrap(np.angle(vals))
    re = np.polyfit(xs, logs.real, 2)
    im = np.polyfit(xs, logs.imag, 2)
    c2, c1, c0 = (complex(a, b) for a, b in zip(re, im))
    return c2, c1, c0


def squeezed_overlap_table(alphas, rs, xs, n_levels: int = 256) -> list[dict]:
    """Printed-mode and corrected-mode values against the truncated inner product."""
    rows = []
    for alpha in alphas:
        for r in rs:
            for x in xs:
                oracle = overlap_squeezed_position_numeric(alpha, r, x, n_levels)
                printed = overlap_squeezed_position(alpha, r, x, "printed")
                corrected = overlap_squeezed_position(alpha, r, x, "corrected")
                rows.append({
                    "alpha": float(complex(alpha).real), "r": float(r), "x": float(x),
                    "oracle": oracle.real, "printed": printed.real, "corrected": corrected.real,
                    "printed_dev": abs(printed - oracle), "corrected_dev": abs(corrected - oracle),
                })
    return rows


def husimi_q(beta, x: float) -> float:
    """``exp[-x^2 - |beta|^2 - Re(beta*^2) + 2 sqrt2 Re(beta) x] / pi^{3/2}``."""
    beta = complex(beta)
    expo = -x * x - abs(beta) ** 2 - (beta.conjugate() ** 2).real + 2 * math.sqrt(2) * beta.real * x
    return Q_MAX * math.exp(expo)


def husimi_q_from_overlap(beta, x: float) -> float:
    """``|<beta|x>|^2 / pi``."""
    return abs(overlap_coherent_position(beta, x)) ** 2 / math.pi


@dataclass(frozen=True)
class QGrid:
    """Q sampled on a rectangle.

    ``values[i, j]`` is Q at ``beta = re_values[j] + 1j * im_values[i]``: rows
    run over Im beta, columns over Re beta.
    """

    x_param: float
    re_values: np.ndarray
    im_values: np.ndarray
    values: np.ndarray

    @property
    def argmax(self) -> tuple[float, float, float]:
        """(Re beta, Im beta, Q) of the largest sample; first hit in row-major order."""
        i, j = np.unravel_index(int(np.argmax(self.values)), self.values.shape)
        return float(self.re_values[j]), float(self.im_values[i]), float(self.values[i, j])

    @property
    def re_step(self) -> float:
        return float(self.re_values[1] - self.re_values[0])


def husimi_grid(x: float, re_range, im_range, n_re: int, n_im: int) -> QGrid:
    if n_re < 2 or n_im < 2:
        raise ValueError("grid needs at least two samples per axis")
    (re_lo, re_hi), (im_lo, im_hi) = re_range, im_range
    if not (re_hi > re_lo and im_hi > im_lo):
        raise ValueError("degenerate grid range")
    re = np.linspace(re_lo, re_hi, n_re)
    im = np.linspace(im_lo, im_hi, n_im)
    # |beta|^2 + Re(beta*^2) = 2 Re(beta)^2, so every row is the same profile;
    # building it once keeps the columns exactly constant along Im beta
    row = Q_MAX * np.exp(-x * x - 2 * re**2 + 2 * math.sqrt(2) * re * x)
    return QGrid(float(x), re, im, np.tile(row, (n_im, 1)))


def refine_maximum(grid: QGrid) -> tuple[float, float]:
    """Continuous maximum of Q near the grid argmax: (Re beta, Q).

    Bounded scalar search along Re beta over the two cells around the sampled
    maximum, at the sampled Im beta.
    """
    re_b, im_b, _ = grid.argmax
    step = grid.re_step
    res = minimize_scalar(
        lambda t: -husimi_q(complex(t, im_b), grid.x_param),
        bounds=(re_b - step, re_b + step),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return float(res.x), float(-res.fun)
