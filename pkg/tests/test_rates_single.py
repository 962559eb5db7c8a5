"""Single-phonon transition rates."""
import math

import numpy as np
import pytest

from rotocool import (
    DegenerateTransition,
    RotorSpectrum,
    SystemParams,
    channel_rate_matrix,
    derive_constants,
    effective_gamma,
    effective_gamma_from_coupling,
    rate_1ph_m_resolved,
    rate_1ph_small_molecule,
    rate_1ph_total,
    thermal_occupation,
    transition_energy,
)
from rotocool.special_fn import cg000_sq

MACRO = SystemParams(r0_over_xi=10.0, mI_over_mB=2.0, T_over_Tc=0.0, n0_xi3=100.0)
MICRO = SystemParams(r0_over_xi=0.1, mI_over_mB=2.0, T_over_Tc=0.0, n0_xi3=100.0)
WARM = SystemParams(r0_over_xi=0.1, mI_over_mB=2.0, T_over_Tc=0.2, n0_xi3=100.0)


# ------------------------------------------------------------ rotor spectrum

def test_rotor_spectrum_levels():
    s = RotorSpectrum.from_params(MICRO, 6)
    assert s.energy(0) == 0.0
    b = derive_constants(MICRO).B_rot
    for j in range(1, 7):
        assert s.energy(j) == pytest.approx(j * (j + 1) * b, rel=1e-14)
        assert s.energy(j) > s.energy(j - 1)
    assert s.gap(4, 2) == pytest.approx(abs(s.energy(4) - s.energy(2)), rel=1e-14)
    assert transition_energy(4, 2, MICRO) == pytest.approx(14.0 * b, rel=1e-14)


# ----------------------------------------------------------- effective gamma

def test_effective_gamma_odd_lambda_is_zero():
    assert effective_gamma(1, 2, 0, MICRO) == 0.0
    assert effective_gamma(3, 4, 2, WARM) == 0.0


def test_effective_gamma_degenerate_transition():
    with pytest.raises(DegenerateTransition):
        effective_gamma(2, 3, 3, MICRO)


def test_effective_gamma_dual_forms_agree():
    # the closed-form rate and the density-of-states times coupling-squared
    # route are algebraically identical; both are implemented and compared
    cases = [(2, 2, 0, MICRO), (2, 2, 0, MACRO), (4, 6, 2, MICRO),
             (2, 1, 3, WARM), (0, 4, 4 + 2, MACRO), (6, 8, 2, WARM)]
    for lam, j, jp, p in cases:
        a = effective_gamma(lam, j, jp, p)
        b = effective_gamma_from_coupling(lam, j, jp, p)
        assert a == pytest.approx(b, rel=1e-12), (lam, j, jp)
        assert a >= 0.0


def test_effective_gamma_symmetric_in_direction():
    # depends on |E| only, so j <-> j' leaves it unchanged
    a = effective_gamma(2, 4, 2, WARM)
    b = effective_gamma(2, 2, 4, WARM)
    assert a == pytest.approx(b, rel=1e-14)


# ------------------------------------------------------------ m-resolved rate

def test_m_resolved_upward_at_zero_temperature():
    sp, th = rate_1ph_m_resolved(0, 0, 2, 0, MICRO)
    assert sp == 0.0 and th == 0.0


def test_m_resolved_mu_out_of_range():
    # |m - m'| beyond every lambda in the window kills all terms
    sp, th = rate_1ph_m_resolved(2, 2, 2, -2, WARM)
    assert sp == 0.0 and th == 0.0


def test_m_resolved_single_term_window():
    # 2 -> 0 admits only lambda = 2; a brute-force sweep to lambda = 50
    # must give the same number
    sp, _ = rate_1ph_m_resolved(2, 0, 0, 0, MICRO)
    acc = 0.0
    from rotocool import g_coefficient
    for lam in range(51):
        g = g_coefficient(2, 0, 0, 0, lam, 0)
        if g != 0.0:
            acc += effective_gamma(lam, 2, 0, MICRO) * g * g
    assert sp == pytest.approx(acc, rel=1e-12)


def test_m_sum_consistency_with_total():
    # sum over final m' of the m-resolved rate is independent of m and
    # equals the j-resolved total
    for (j, jp) in [(2, 0), (3, 1), (4, 2), (6, 4), (5, 1), (6, 0)]:
        tot = rate_1ph_total(j, jp, WARM)
        for m in range(-j, j + 1):
            acc_sp = acc_th = 0.0
            for mp in range(-jp, jp + 1):
                sp, th = rate_1ph_m_resolved(j, m, jp, mp, WARM)
                acc_sp += sp
                acc_th += th
            assert acc_sp == pytest.approx(tot.sp, rel=1e-10), (j, jp, m)
            assert acc_th == pytest.approx(tot.th, rel=1e-10), (j, jp, m)


# ----------------------------------------------------------------- total rate

def test_total_rate_parity_selection():
    assert rate_1ph_total(3, 2, WARM).sp == 0.0
    assert rate_1ph_total(3, 2, WARM).th == 0.0
    assert rate_1ph_total(4, 1, WARM) == (0.0, 0.0)


def test_total_rate_degenerate():
    with pytest.raises(DegenerateTransition):
        rate_1ph_total(3, 3, WARM)


def test_total_rate_lambda_window_is_exact():
    # even-lambda window [|j-j'|, j+j'] against a sweep four times wider
    for (j, jp) in [(2, 0), (5, 3), (6, 2), (8, 4)]:
        want_sp = rate_1ph_total(j, jp, WARM).sp
        acc = 0.0
        for lam in range(0, 4 * (j + jp) + 1):
            c2 = cg000_sq(j, jp, lam)
            if c2 == 0.0:
                continue
            acc += effective_gamma(lam, j, jp, WARM) * c2
        acc *= (2 * jp + 1)
        assert want_sp == pytest.approx(acc, rel=1e-12)


def test_total_rate_micro_regime_reaches_ground_states():
    # all even-parity downward transitions are open for a small molecule
    for j in range(1, 9):
        for jp in range(j):
            if (j + jp) % 2:
                continue
            assert rate_1ph_total(j, jp, MICRO).sp > 0.0, (j, jp)


def test_detailed_balance_m_resolved():
    # up/(down_sp + down_th) = nbar/(nbar+1) = exp(-E/T), state by state
    t = derive_constants(WARM).temperature
    for (j, m, jp, mp) in [(2, 0, 0, 0), (4, 1, 2, 1), (3, -2, 1, 0),
                           (6, 3, 4, -1)]:
        dn_sp, dn_th = rate_1ph_m_resolved(j, m, jp, mp, WARM)
        up_sp, up_th = rate_1ph_m_resolved(jp, mp, j, m, WARM)
        assert up_sp == 0.0
        e = transition_energy(j, jp, WARM)
        assert up_th / (dn_sp + dn_th) == pytest.approx(
            math.exp(-e / t), rel=1e-10), (j, m, jp, mp)


def test_detailed_balance_j_resolved_carries_degeneracy():
    # the m-summed rates satisfy balance with the (2j+1)/(2j'+1) state count
    t = derive_constants(WARM).temperature
    for (j, jp) in [(2, 0), (4, 2), (5, 3), (8, 6)]:
        dn = rate_1ph_total(j, jp, WARM)
        up = rate_1ph_total(jp, j, WARM)
        e = transition_energy(j, jp, WARM)
        deg = (2.0 * j + 1.0) / (2.0 * jp + 1.0)
        assert up.th / (dn.sp + dn.th) == pytest.approx(
            deg * math.exp(-e / t), rel=1e-10)


def test_thermal_rate_is_occupation_times_structure():
    e = transition_energy(4, 2, WARM)
    tot = rate_1ph_total(4, 2, WARM)
    assert tot.th == pytest.approx(tot.sp * thermal_occupation(e, WARM), rel=1e-12)


# ---------------------------------------------------------- small molecules

def test_small_molecule_closed_form_odd_lambda():
    p = SystemParams(r0_over_xi=1e-3, mI_over_mB=2.0, T_over_Tc=0.0, n0_xi3=100.0)
    assert rate_1ph_small_molecule(3, 4, 2, p) == 0.0


def test_small_molecule_matches_general_rate():
    # spot checks at r0 = 1e-3; the full sweep runs in the acceptance suite
    p = SystemParams(r0_over_xi=1e-3, mI_over_mB=2.0, T_over_Tc=0.0, n0_xi3=100.0)
    for (lam, j, jp) in [(2, 2, 0), (2, 4, 2), (4, 4, 0), (6, 8, 2)]:
        approx = rate_1ph_small_molecule(lam, j, jp, p)
        exact = effective_gamma(lam, j, jp, p)
        assert approx == pytest.approx(exact, rel=1e-2), (lam, j, jp)


def test_small_molecule_rate_over_B_scales_with_r0():
    # gamma/B has an explicit linear r0 dependence in the closed form
    kw = dict(mI_over_mB=2.0, T_over_Tc=0.0, n0_xi3=100.0)
    p1 = SystemParams(r0_over_xi=2e-3, **kw)
    p2 = SystemParams(r0_over_xi=1e-3, **kw)
    r1 = rate_1ph_small_molecule(2, 2, 0, p1) / derive_constants(p1).B_rot
    r2 = rate_1ph_small_molecule(2, 2, 0, p2) / derive_constants(p2).B_rot
    assert r1 == pytest.approx(2.0 * r2, rel=1e-12)


# -------------------------------------------------------- channel rate matrix

def test_channel_matrix_invariants():
    m = channel_rate_matrix(WARM, 6, "1ph-sp")
    g = m.gamma
    assert g.shape == (7, 7)
    assert (g >= 0.0).all()
    assert np.diagonal(g).max() == 0.0
    for j in range(7):
        for jp in range(7):
            if (j + jp) % 2 == 1:
                assert g[j, jp] == 0.0


def test_channel_matrix_spontaneous_is_lower_triangular():
    m = channel_rate_matrix(MICRO, 6, "1ph-sp")
    assert np.triu(m.gamma, 1).max() == 0.0


def test_channel_matrix_unicode_aliases():
    a = channel_rate_matrix(WARM, 4, "1ph-T")
    assert a.channel == "1ph-T"
    assert a.total_out().shape == (5,)


def test_channel_matrix_deterministic():
    a = channel_rate_matrix(WARM, 6, "1ph-sp").gamma
    b = channel_rate_matrix(WARM, 6, "1ph-sp").gamma
    assert (a == b).all()


def test_channel_matrix_threads_match_serial():
    a = channel_rate_matrix(WARM, 8, "1ph-T", threads=4).gamma
    b = channel_rate_matrix(WARM, 8, "1ph-T", threads=1).gamma
    assert (a == b).all()


def test_macro_regime_strong_suppression():
    # below the critical angular momentum the spontaneous rate drops by
    # orders of magnitude; the strict threshold is asserted in the
    # acceptance suite
    tot = {j: sum(rate_1ph_total(j, jp, MACRO).sp for jp in range(j % 2, j, 2))
           for j in (20, 54)}
    assert tot[20] < 1e-2 * tot[54]
