import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from squeezelab.fock_core import TruncationError
from squeezelab.identities import (
    default_interior,
    integrate_disentangle_ode,
    ode_step_halving_ratio,
    squeeze_interior,
    verify_bogoliubov,
    verify_disentangle,
    verify_main_text_variant,
    verify_shift_identity,
    verify_similarity_scaling,
    verify_square_number_commutator,
    verify_squeeze_factorization,
)


def test_interior_rules():
    assert default_interior(64) == 48
    assert squeeze_interior(0.0, 256) == 64
    assert squeeze_interior(1.0, 256) == 8
    with pytest.raises(TruncationError):
        squeeze_interior(1.5, 16)


@pytest.mark.parametrize("r", [-1.0, -0.5, 0.0, 0.5, 1.0])
def test_bogoliubov(r):
    rep = verify_bogoliubov(r, 128)
    assert rep.passed, rep


def test_bogoliubov_fails_on_full_block():
    # the cutoff reflection is real: the full block must not pass
    rep = verify_bogoliubov(0.5, 64, interior=64)
    assert not rep.passed


def test_bogoliubov_rejects_large_r():
    with pytest.raises(TruncationError):
        verify_bogoliubov(2.0, 128)


@pytest.mark.parametrize("r", [-1.0, 0.5])
def test_squeeze_factorization(r):
    assert verify_squeeze_factorization(r, 128).passed


@pytest.mark.parametrize("gamma", [-1.0, 0.5, 1.0])
def test_shift_identity(gamma):
    rep = verify_shift_identity(gamma, 6, 64)
    assert rep.passed and rep.interior == 48


def test_shift_degree_bounds():
    with pytest.raises(ValueError):
        verify_shift_identity(0.5, 7, 32)


@pytest.mark.parametrize("f", [-1.0, 0.25, 1.0])
def test_similarity_scaling(f):
    assert verify_similarity_scaling(f, 64).passed


@pytest.mark.parametrize("r", [-0.75, -0.25, 0.5, 0.75])
def test_disentangle(r):
    rep = verify_disentangle(r, 32)
    assert rep.passed and rep.interior == 16


def test_disentangle_threshold_forced_failure():
    assert not verify_disentangle(0.5, 32, threshold=1e-20).passed


def test_main_text_variant_winner():
    assert verify_main_text_variant(0.0, 32).winner == "both"
    winners = {verify_main_text_variant(r, 32).winner for r in (-0.75, -0.25, 0.25, 0.75)}
    assert winners == {"substituted"}


def test_square_number_commutator():
    assert verify_square_number_commutator(64).passed


def test_ode_matches_closed_form():
    f, g = integrate_disentangle_ode(1.0, 1e-3)
    assert f == pytest.approx(1.0, abs=1e-12)
    assert g == pytest.approx((1 - math.e**2) / 4, abs=1e-6)


def test_ode_fourth_order():
    assert 14.0 < ode_step_halving_ratio(1.0, 1e-2) < 18.0


def test_ode_step_bounds():
    with pytest.raises(ValueError):
        integrate_disentangle_ode(1.0, 0.1)


@settings(max_examples=20, deadline=None)
@given(st.floats(-2, 2))
def test_ode_tracks_closed_form_everywhere(r):
    _, g = integrate_disentangle_ode(r, 1e-2)
    assert g == pytest.approx((1 - math.exp(2 * r)) / 4, abs=1e-7)


@settings(max_examples=15, deadline=None)
@given(st.floats(-0.75, 0.75))
def test_disentangle_property(r):
    assert verify_disentangle(r, 24).passed
