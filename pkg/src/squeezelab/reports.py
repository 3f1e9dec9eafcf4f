"""Run configurations, suite drivers and deterministic CSV/JSON writers."""
from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import analytics, experiments, identities
from .fock_core import (
    Tolerances,
    block_deviation,
    build_annihilation,
    build_creation,
    check_levels,
    commutator,
)
from .states import DEFAULT_TAIL_TOL

DISENTANGLE_GRID = (-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75)
IDENTITY_GRID = (-1.0, -0.5, 0.0, 0.5, 1.0)
OVERLAP_ALPHAS = (0.0, 0.5, 1.0)
OVERLAP_RS = (0.0, 0.25, 0.5)
OVERLAP_XS = (-1.0, 0.0, 1.0)
LIMIT_RS = (0.5, 1.0, 1.5, 2.0)
RESIDUAL_BETAS = (0.0, 0.5, 1 + 0.5j)


@dataclass(frozen=True)
class RunConfig:
    n_levels: int = 256
    interior_buffer: int | None = None
    tolerances: Tolerances = field(default_factory=Tolerances)
    output_dir: Path = Path(".")

    def __post_init__(self):
        check_levels(self.n_levels)
        tol = self.tolerances
        if self.interior_buffer is not None and tol.interior_buffer != self.interior_buffer:
            tol = replace(tol, interior_buffer=self.interior_buffer)
            object.__setattr__(self, "tolerances", tol)
        tol.buffer_for(self.n_levels)  # validates buffer < N/2

    @property
    def buffer(self) -> int:
        return self.tolerances.buffer_for(self.n_levels)

    def echo(self) -> dict:
        return {
            "n_levels": self.n_levels,
            "interior_buffer": self.buffer,
            "expm_tol": self.tolerances.expm_tol,
            "compare_tol": self.tolerances.compare_tol,
        }


def load_config(path=None, **overrides) -> RunConfig:
    """JSON config file merged with overrides; non-None overrides win."""
    data = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        unknown = set(data) - {"n_levels", "interior_buffer", "expm_tol", "compare_tol", "output_dir"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
    data.update({k: v for k, v in overrides.items() if v is not None})
    tol = Tolerances(
        expm_tol=float(data.get("expm_tol", Tolerances.expm_tol)),
        compare_tol=float(data.get("compare_tol", Tolerances.compare_tol)),
        interior_buffer=data.get("interior_buffer"),
    )
    return RunConfig(
        n_levels=data.get("n_levels", RunConfig.n_levels),
        interior_buffer=data.get("interior_buffer"),
        tolerances=tol,
        output_dir=Path(data.get("output_dir", ".")),
    )


def fmt(value: float) -> str:
    return format(float(value), ".17g")


def write_csv(path: Path, header, rows) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return path


def _plain(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"{type(obj).__name__} is not JSON serializable")


def write_json(path: Path, payload) -> Path:
    # serialize first so a failure never leaves a truncated file behind
    text = json.dumps(payload, indent=2, allow_nan=False, default=_plain) + "\n"
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def _ensure_dir(path: Path) -> Path:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    if not os.access(path, os.W_OK):
        raise PermissionError(f"output directory {path} is not writable")
    return path


def _edge_commutator_checks(n_levels: int, buffer: int) -> list[dict]:
    a, ad = build_annihilation(n_levels), build_creation(n_levels)
    comm = commutator(a, ad)
    interior = n_levels - buffer
    abs_dev, _ = block_deviation(comm, np.eye(n_levels), interior)
    corner = comm[-1, -1]
    return [
        {"name": "ladder_commutator_interior", "value": abs_dev, "limit": 1e-12, "passed": abs_dev <= 1e-12},
        {"name": "ladder_commutator_corner", "value": corner.real, "limit": -(n_levels - 1),
         "passed": abs(corner + (n_levels - 1)) <= 1e-12 * n_levels},
    ]


def run_verify(config: RunConfig) -> dict:
    """Identity suite over the default parameter grids; returns the report bundle."""
    thr = config.tolerances.compare_tol
    n = config.n_levels
    small = min(32, n)
    mid = min(64, n)
    reports = []
    for r in IDENTITY_GRID:
        interior = min(identities.squeeze_interior(r, n), n - config.buffer)
        reports.append(identities.verify_bogoliubov(r, n, interior, thr))
        reports.append(identities.verify_squeeze_factorization(r, n, interior, thr))
    for g in IDENTITY_GRID:
        reports.append(identities.verify_shift_identity(g, 6, mid, threshold=thr))
    for f in IDENTITY_GRID:
        reports.append(identities.verify_similarity_scaling(f, mid, threshold=thr))
    for r in DISENTANGLE_GRID:
        reports.append(identities.verify_disentangle(r, small, threshold=thr))
    reports.append(identities.verify_square_number_commutator(mid))

    variants = [identities.verify_main_text_variant(r, small, threshold=thr) for r in DISENTANGLE_GRID]
    winners = {v.winner for v in variants if v.param != 0}

    _, g = identities.integrate_disentangle_ode(1.0, 1e-3)
    g_dev = abs(g - (1 - math.exp(2.0)) / 4)
    ratio = identities.ode_step_halving_ratio(1.0, 1e-2)

    residuals = experiments.weak_eigenvalue_check(1.0, RESIDUAL_BETAS, min(128, n))
    worst_residual = max(row.weak_residual for row in residuals)
    yuen = experiments.yuen_limit_study(1.0, LIMIT_RS, n)
    caves = experiments.caves_limit_study(1.0, LIMIT_RS, n)
    # constancy is a property of the untruncated family; skip rows touching the edge
    yuen_f = [row.fidelity_to_target for row in yuen if row.edge_mass <= DEFAULT_TAIL_TOL]
    yuen_spread = max(yuen_f) - min(yuen_f)

    table = analytics.squeezed_overlap_table(OVERLAP_ALPHAS, OVERLAP_RS, OVERLAP_XS, n)
    printed_r0 = max(row["printed_dev"] for row in table if row["r"] == 0)
    corrected = max(row["corrected_dev"] for row in table)

    checks = _edge_commutator_checks(n, config.buffer) + [
        {"name": "main_text_variant_consistent", "value": sorted(winners), "limit": "one winner",
         "passed": len(winners) == 1 and winners != {"neither"}},
        {"name": "ode_g_at_1", "value": g_dev, "limit": 1e-6, "passed": g_dev <= 1e-6},
        {"name": "ode_step_halving_ratio", "value": ratio, "limit": [12.0, 20.0], "passed": 12.0 <= ratio <= 20.0},
        {"name": "squeezed_overlap_printed_mode_r0", "value": printed_r0, "limit": 1e-10, "passed": printed_r0 <= 1e-10},
        {"name": "squeezed_overlap_corrected", "value": corrected, "limit": 1e-8, "passed": corrected <= 1e-8},
        {"name": "weak_position_residual", "value": worst_residual, "limit": 1e-12,
         "passed": worst_residual <= 1e-12},
        {"name": "caves_fidelity_increasing", "value": [row.fidelity_to_target for row in caves],
         "limit": "strictly increasing", "passed": experiments.strictly_increasing([row.fidelity_to_target for row in caves])},
        {"name": "yuen_fidelity_constant", "value": yuen_spread, "limit": 1e-6, "passed": yuen_spread <= 1e-6},
    ]
    failures = [rep.identity_name + f"(param={rep.param:g})" for rep in reports if not rep.passed]
    failures += [c["name"] for c in checks if not c["passed"]]
    return {
        "config": config.echo(),
        "reports": [rep.to_dict() for rep in reports],
        "main_text_variant": [v.to_dict() for v in variants],
        "checks": checks,
        "limit_studies": {"x": 1.0, "yuen": [row.to_dict() for row in yuen],
                          "caves": [row.to_dict() for row in caves]},
        "residuals": [{"x": row.x, "beta_re": row.probe_beta.real, "beta_im": row.probe_beta.imag,
                       "weak_residual": row.weak_residual, "boundary_term": row.boundary_term}
                      for row in residuals],
        "squeezed_overlap": {
            "coefficients_alpha0.5_r0.5": _coefficient_summary(0.5, 0.5, n),
            "rows": table,
        },
        "passed": not failures,
        "failures": failures,
    }


def _coefficient_summary(alpha: float, r: float, n_levels: int) -> dict:
    """Real parts of (x^2, x, 1) coefficients: both closed forms and the oracle fit."""
    fitted = analytics.fit_squeezed_overlap(alpha, r, np.linspace(-1.5, 1.5, 7), n_levels)
    out = {"fitted": [c.real for c in fitted]}
    for mode in ("printed", "corrected"):
        out[mode] = [complex(c).real for c in analytics.squeezed_overlap_coefficients(alpha, r, mode)]
    return out


def write_verify(config: RunConfig, bundle: dict) -> list[Path]:
    out = _ensure_dir(config.output_dir)
    rows = bundle["squeezed_overlap"]["rows"]
    keys = ["alpha", "r", "x", "oracle", "printed", "corrected", "printed_dev", "corrected_dev"]
    return [
        write_json(out / "verify.json", bundle),
        write_csv(out / "squeezed_overlap.csv", keys, ([row[k] for k in keys] for row in rows)),
    ]


def husimi_summary(grid: analytics.QGrid) -> dict:
    re_b, im_b, q = grid.argmax
    ref_re, ref_q = analytics.refine_maximum(grid)
    return {
        "x": grid.x_param,
        "re_range": [float(grid.re_values[0]), float(grid.re_values[-1])],
        "im_range": [float(grid.im_values[0]), float(grid.im_values[-1])],
        "n_re": int(grid.re_values.size),
        "n_im": int(grid.im_values.size),
        "grid_argmax": {"re_beta": re_b, "im_beta": im_b, "q": q},
        "refined_max": {"re_beta": ref_re, "q": ref_q},
    }


def _tag(x: float) -> str:
    return format(float(x), "g").replace("-", "m").replace(".", "p")


def run_husimi(config: RunConfig, x, re_min, re_max, im_min, im_max, n_re, n_im,
               figure: bool = True) -> list[Path]:
    grid = analytics.husimi_grid(x, (re_min, re_max), (im_min, im_max), n_re, n_im)
    out = _ensure_dir(config.output_dir)
    stem = out / f"husimi_x{_tag(x)}"
    rows = ((float(grid.re_values[j]), float(grid.im_values[i]), float(grid.values[i, j]))
            for i in range(grid.im_values.size) for j in range(grid.re_values.size))
    paths = [write_csv(stem.with_suffix(".csv"), ["re_beta", "im_beta", "q"], rows),
             write_json(stem.with_suffix(".json"), husimi_summary(grid))]
    if figure:
        from .plotting import plot_husimi

        paths.append(plot_husimi(grid, stem.with_suffix(".png")))
    return paths


def run_limits(config: RunConfig, x: float, r_list, figure: bool = True) -> list[Path]:
    n = config.n_levels
    yuen = experiments.yuen_limit_study(x, r_list, n)
    caves = experiments.caves_limit_study(x, r_list, n)
    out = _ensure_dir(config.output_dir)
    header = ["r", "center_x", "fidelity", "norm"]

    def rows(study):
        return ([row.r, row.center_x, row.fidelity_to_target, row.norm_check] for row in study)

    paths = [write_csv(out / "yuen.csv", header, rows(yuen)),
             write_csv(out / "caves.csv", header, rows(caves))]
    if figure:
        from .plotting import plot_limits

        paths.append(plot_limits(x, yuen, caves, out / "limits.png"))
    return paths


STATE_KINDS = ("coherent", "yuen", "caves", "position", "momentum")


def build_state(kind: str, n_levels: int, alpha=0.0, r=0.0, x=0.0, p=0.0):
    from . import states

    if kind == "coherent":
        return states.coherent_state(alpha, n_levels), {"alpha_re": complex(alpha).real, "alpha_im": complex(alpha).imag}
    if kind == "yuen":
        return states.yuen_state(alpha, r, n_levels), {"alpha_re": complex(alpha).real, "alpha_im": complex(alpha).imag, "r": r}
    if kind == "caves":
        return states.caves_state(alpha, r, n_levels), {"alpha_re": complex(alpha).real, "alpha_im": complex(alpha).imag, "r": r}
    if kind == "position":
        return states.position_eigenstate(x, n_levels), {"x": x}
    if kind == "momentum":
        return states.momentum_eigenstate(p, n_levels), {"p": p}
    raise ValueError(f"unknown state kind {kind!r}; expected one of {STATE_KINDS}")


def state_payload(kind: str, n_levels: int, **params) -> dict:
    v, echo = build_state(kind, n_levels, **params)
    return {
        "kind": kind,
        "params": {k: float(val) for k, val in echo.items()},
        "n_levels": n_levels,
        "amps_re": [float(a) for a in v.real],
        "amps_im": [float(a) for a in v.imag],
    }


def run_state(config: RunConfig, kind: str, **params) -> list[Path]:
    payload = state_payload(kind, config.n_levels, **params)
    out = _ensure_dir(config.output_dir)
    return [write_json(out / f"state_{kind}.json", payload)]
