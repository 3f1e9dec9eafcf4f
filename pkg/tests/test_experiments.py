import math

import pytest

from squeezelab.experiments import (
    boundary_term,
    caves_limit_study,
    localization_profile,
    strictly_increasing,
    strong_residual,
    weak_eigenvalue_check,
    weak_momentum_residual,
    weak_residual,
    yuen_limit_study,
    yuen_pairwise_fidelity,
)
from squeezelab.fock_core import TruncationError


def test_strictly_increasing():
    assert strictly_increasing([1, 2, 3])
    assert not strictly_increasing([1, 1, 2])


def test_yuen_study_center_and_fidelity():
    rows = yuen_limit_study(1.0, [0.5, 1.0], 128)
    for row in rows:
        assert row.center_x == pytest.approx(math.exp(-row.r), abs=1e-10)
        assert row.fidelity_to_target == pytest.approx(math.exp(-0.5), abs=1e-10)
        assert row.norm_check == pytest.approx(1.0, abs=1e-10)


def test_caves_study_zero_position_centered():
    rows = caves_limit_study(0.0, [0.5, 1.0], 128)
    assert all(abs(row.center_x) < 1e-12 for row in rows)


def test_caves_fidelity_rises():
    rows = caves_limit_study(1.0, [0.5, 1.0, 1.5], 128)
    assert strictly_increasing([row.fidelity_to_target for row in rows])


def test_study_guard_names_r():
    with pytest.raises(TruncationError, match="r=3"):
        yuen_limit_study(1.0, [0.5, 3.0], 64)


def test_pairwise_fidelity_constant():
    vals = yuen_pairwise_fidelity(0.0, 2.0, [0.0, 0.5, 1.0], 128)
    for v in vals:
        assert v == pytest.approx(math.exp(-2.0), abs=1e-10)


@pytest.mark.parametrize("x", [0.0, 1.5, -2.0])
def test_weak_residual_bounded_by_boundary_term(x):
    for beta in (0.0, 1.0, -2.0):
        res = weak_residual(x, beta, 128)
        assert res <= boundary_term(x, beta, 128) + 1e-14
        assert res <= 1e-12


def test_boundary_term_shrinks_with_n():
    assert boundary_term(1.0, 2.0, 64) < 1e-12
    assert boundary_term(1.0, 2.0, 32) > boundary_term(1.0, 2.0, 64)


def test_weak_check_rows():
    rows = weak_eigenvalue_check(1.0, [0.0, 1j], 64)
    assert [row.probe_beta for row in rows] == [0, 1j]


def test_strong_residual_is_order_one():
    assert strong_residual(1.0, 128) > 0.1


def test_weak_momentum_residual():
    assert weak_momentum_residual(0.7, 1 - 1j, 128) < 1e-12


def test_localization_peaks_at_x():
    prof = localization_profile(1.0, [-1.0, 0.0, 1.0, 2.0], 128)
    peak = max(prof, key=lambda t: t[1])
    assert peak[0] == 1.0
