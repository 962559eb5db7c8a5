"""Phonon dispersion, Bogoliubov weights, thermal occupation."""
import math

import numpy as np
import pytest

from rotocool import (
    DomainError,
    PhononMode,
    SystemParams,
    derive_constants,
    dispersion,
    dk_domega,
    inverse_dispersion,
    occupation_at_temperature,
    thermal_occupation,
    w_cross,
    w_factor,
    w_prec,
)

SQRT2 = math.sqrt(2.0)


# -------------------------------------------------------------- dispersion

def test_dispersion_values():
    assert dispersion(0.0) == 0.0
    assert dispersion(1.0) == pytest.approx(math.sqrt(1.5), rel=1e-14)


def test_dispersion_literal_form():
    for k in (0.3, 1.0, 4.7, 80.0):
        assert dispersion(k) / k == pytest.approx(math.sqrt(1.0 + k * k / 2.0),
                                                  rel=1e-14)


def test_dispersion_particle_asymptote():
    k = 100.0
    assert dispersion(k) / (k * k / SQRT2) == pytest.approx(1.0, rel=1e-2)


def test_dispersion_strictly_monotone():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        k1, k2 = np.sort(rng.uniform(0.0, 100.0, size=2))
        if k1 == k2:
            continue
        assert dispersion(k1) < dispersion(k2)


def test_dispersion_rejects_negative():
    with pytest.raises(DomainError):
        dispersion(-0.1)


# ------------------------------------------------------ inverse dispersion

def test_inverse_dispersion_values():
    assert inverse_dispersion(0.0) == 0.0
    # omega = 1: k = sqrt(sqrt(3) - 1), evaluated by hand
    assert inverse_dispersion(1.0) == pytest.approx(
        math.sqrt(math.sqrt(3.0) - 1.0), rel=1e-14)
    assert inverse_dispersion(dispersion(2.5)) == pytest.approx(2.5, rel=1e-13)


def test_inverse_round_trip_both_directions():
    for w in np.geomspace(1e-6, 1e4, 60):
        assert dispersion(inverse_dispersion(w)) == pytest.approx(w, rel=1e-12)
    for k in np.geomspace(1e-6, 1e2, 60):
        assert inverse_dispersion(dispersion(k)) == pytest.approx(k, rel=1e-12)


# ----------------------------------------------------------------- dk/domega

def test_dk_domega_sound_limit():
    assert dk_domega(0.0) == 1.0
    assert dk_domega(1e-12) == pytest.approx(1.0, rel=1e-10)


def test_dk_domega_at_unit_momentum():
    # domega/dk = (1+k^2)/sqrt(1+k^2/2) = 2/sqrt(1.5) at k=1
    w = dispersion(1.0)
    assert dk_domega(w) == pytest.approx(math.sqrt(1.5) / 2.0, rel=1e-13)


def test_dk_domega_reciprocal_of_slope():
    for k in (0.05, 0.7, 1.0, 3.3, 20.0):
        slope = (1.0 + k * k) / math.sqrt(1.0 + k * k / 2.0)
        assert dk_domega(dispersion(k)) == pytest.approx(1.0 / slope, rel=1e-10)
        assert dk_domega(dispersion(k)) > 0.0


def test_dk_domega_finite_difference():
    w, h = 3.0, 1e-6
    fd = (inverse_dispersion(w + h) - inverse_dispersion(w - h)) / (2.0 * h)
    assert dk_domega(w) == pytest.approx(fd, rel=1e-8)


def test_dk_domega_rejects_negative():
    with pytest.raises(DomainError):
        dk_domega(-1.0)


# -------------------------------------------------------- Bogoliubov weights

def test_w_factor_values():
    assert w_factor(math.sqrt(2.0)) == pytest.approx(0.5 ** 0.25, rel=1e-13)
    # W^2 = eps_k / omega_k with eps_k = k^2/(2 m_B)
    k = 1.0
    eps = k * k / (2.0 * (1.0 / SQRT2))
    assert w_factor(k) ** 2 == pytest.approx(eps / dispersion(k), rel=1e-12)


def test_w_factor_rejects_zero():
    with pytest.raises(DomainError):
        w_factor(0.0)


def test_w_cross_floor_and_limit():
    # x + 1/x >= 2 with equality as W -> 1
    for k in (0.01, 0.5, 1.0, 10.0):
        for kp in (0.02, 1.0, 40.0):
            assert w_cross(k, kp) >= 2.0 - 1e-12
    assert w_cross(500.0, 500.0) == pytest.approx(2.0, abs=1e-4)
    assert w_prec(500.0, 500.0) == pytest.approx(0.0, abs=1e-4)


def test_w_cross_w_prec_closed_form():
    def w(k):
        return math.sqrt(k / (SQRT2 * math.sqrt(1.0 + k * k / 2.0)))

    ww = w(1.0) * w(2.0)
    assert w_cross(1.0, 2.0) == pytest.approx(ww + 1.0 / ww, rel=1e-13)
    assert w_prec(1.0, 2.0) == pytest.approx(ww - 1.0 / ww, rel=1e-13)


def test_w_pair_rejects_zero_momentum():
    with pytest.raises(DomainError):
        w_cross(0.0, 1.0)
    with pytest.raises(DomainError):
        w_prec(1.0, 0.0)


# --------------------------------------------------------- thermal occupation

def test_occupation_values():
    assert occupation_at_temperature(1.0, 0.0) == 0.0
    t = 2.7
    assert occupation_at_temperature(t * math.log(2.0), t) == pytest.approx(1.0, rel=1e-12)
    assert occupation_at_temperature(5.0, 1.0) == pytest.approx(
        1.0 / (math.e ** 5 - 1.0), rel=1e-12)
    assert occupation_at_temperature(5.0, 1.0) == pytest.approx(6.7837e-3, rel=1e-4)


def test_occupation_overflow_guard():
    assert occupation_at_temperature(800.0, 1.0) == 0.0


def test_thermal_occupation_uses_params_temperature():
    p = SystemParams(r0_over_xi=0.1, mI_over_mB=2.0, T_over_Tc=0.2, n0_xi3=100.0)
    t = derive_constants(p).temperature
    assert thermal_occupation(3.0, p) == pytest.approx(
        occupation_at_temperature(3.0, t), rel=1e-14)
    p0 = SystemParams(r0_over_xi=0.1, mI_over_mB=2.0, T_over_Tc=0.0, n0_xi3=100.0)
    assert thermal_occupation(3.0, p0) == 0.0


def test_thermal_occupation_rejects_nonpositive_energy():
    p = SystemParams(r0_over_xi=0.1, mI_over_mB=2.0, T_over_Tc=0.2, n0_xi3=100.0)
    with pytest.raises(DomainError):
        thermal_occupation(0.0, p)


# ---------------------------------------------------------------- PhononMode

def test_phonon_mode_consistency():
    m = PhononMode.from_momentum(1.3)
    assert m.omega == pytest.approx(dispersion(1.3), rel=1e-14)
    m2 = PhononMode.from_energy(m.omega)
    assert m2.k == pytest.approx(1.3, rel=1e-12)
    with pytest.raises(DomainError):
        PhononMode(k=1.0, omega=2.0)
