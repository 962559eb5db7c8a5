"""Two-phonon transition rates: scattering and pair channels.

The scattering channel exchanges one phonon for another; the pair
channel creates or absorbs two phonons at once.  Both reduce to a
one-dimensional integral over the energy-splitting variable eta after
the angular sums are folded into a bilinear form.
"""
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from ._kernels import cross_integrand, prec_integrand
from .condensate import (dk_domega, inverse_dispersion,
                         occupation_at_temperature, w_cross, w_prec)
from .errors import DegenerateTransition, DomainError, QuadratureFailure
from .params import SystemParams, derive_constants
from .special_fn import cg000_sq, spherical_bessel
from .rates_single import transition_energy

# Extra orders beyond r0*k_max; j_lam(x) is negligible for lam >~ x.
_LAM_PAD = 12


@dataclass(frozen=True)
class EtaQuadrature:
    """Tolerances and cutoff policy for the eta integrals.

    eta_max = None selects the automatic cutoff: the smallest eta whose
    thermal occupation drops below abs_tol, capped at 50 T/|E| + 10.
    """

    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    eta_max: float | None = None

    def cutoff(self, energy: float, temperature: float) -> float:
        if self.eta_max is not None:
            return self.eta_max
        if temperature <= 0.0:
            return 0.0
        tail = temperature * math.log1p(1.0 / self.abs_tol) / energy
        return min(tail, 50.0 * temperature / energy + 10.0)


_DEFAULT_QUAD = EtaQuadrature()


def coupling_u2(lam: int, lamp: int, k: float, kp: float,
                p: SystemParams, kind: str) -> float:
    """Two-phonon coupling (2 g_IB/pi) k k' j_lam j_lam' W; 0 for odd sums."""
    if (lam + lamp) % 2 == 1:
        return 0.0
    if kind == "cross":
        w = w_cross(k, kp)
    elif kind == "pair":
        w = w_prec(k, kp)
    else:
        raise DomainError("kind must be 'cross' or 'pair'")
    d = derive_constants(p)
    return (2.0 * d.g_IB / math.pi) * k * kp * w \
        * spherical_bessel(lam, p.r0_over_xi * k) \
        * spherical_bessel(lamp, p.r0_over_xi * kp)


def _gap_or_raise(p, j, jp):
    e = transition_energy(j, jp, p)
    if e == 0.0:
        raise DegenerateTransition("zero energy gap for %d -> %d" % (j, jp))
    return e


def kernel_cross(lam: int, lamp: int, j: int, jp: int, eta: float,
                 p: SystemParams) -> float:
    """Scattering kernel gamma^x_{lam lam'}(eta) before occupations.

    Direct form with prefactor g_IB^2 |E|^3/(2 pi^3); the absorbed
    phonon carries energy eta|E|, the emitted one (1+eta)|E|.
    """
    if eta <= 0.0:
        raise DomainError("eta must be positive")
    e = _gap_or_raise(p, j, jp)
    if (lam + lamp) % 2 == 1:
        return 0.0
    d = derive_constants(p)
    w1 = eta * e
    w2 = (1.0 + eta) * e
    k1 = inverse_dispersion(w1)
    k2 = inverse_dispersion(w2)
    f1 = eta * k1 / math.sqrt(1.0 + 2.0 * w1 * w1)
    f2 = (1.0 + eta) * k2 / math.sqrt(1.0 + 2.0 * w2 * w2)
    wx = w_cross(k1, k2)
    b1 = spherical_bessel(lam, p.r0_over_xi * k1)
    b2 = spherical_bessel(lamp, p.r0_over_xi * k2)
    return d.g_IB ** 2 * e ** 3 / (2.0 * math.pi ** 3) \
        * f1 * f2 * wx * wx * (b1 * b2) ** 2


def kernel_cross_from_coupling(lam: int, lamp: int, j: int, jp: int,
                               eta: float, p: SystemParams) -> float:
    """Same kernel via (|E|/8 pi) (dk/dw)(dk/dw') [U^x]^2; cross-check form."""
    e = _gap_or_raise(p, j, jp)
    w1 = eta * e
    w2 = (1.0 + eta) * e
    u = coupling_u2(lam, lamp, inverse_dispersion(w1), inverse_dispersion(w2),
                    p, "cross")
    return (e / (8.0 * math.pi)) * dk_domega(w1) * dk_domega(w2) * u * u


def kernel_prec(lam: int, lamp: int, j: int, jp: int, eta: float,
                p: SystemParams) -> float:
    """Pair kernel gamma^pair_{lam lam'}(eta) before occupations.

    Direct form with prefactor g_IB^2 |E|^3/(4 pi^3); the two phonons
    share the gap as eta|E| and (1-eta)|E|.
    """
    if not 0.0 < eta < 1.0:
        raise DomainError("eta must lie in (0, 1)")
    e = _gap_or_raise(p, j, jp)
    if (lam + lamp) % 2 == 1:
        return 0.0
    d = derive_constants(p)
    w1 = eta * e
    w2 = (1.0 - eta) * e
    k1 = inverse_dispersion(w1)
    k2 = inverse_dispersion(w2)
    f1 = eta * k1 / math.sqrt(1.0 + 2.0 * w1 * w1)
    f2 = (1.0 - eta) * k2 / math.sqrt(1.0 + 2.0 * w2 * w2)
    wp = w_prec(k1, k2)
    b1 = spherical_bessel(lam, p.r0_over_xi * k1)
    b2 = spherical_bessel(lamp, p.r0_over_xi * k2)
    return d.g_IB ** 2 * e ** 3 / (4.0 * math.pi ** 3) \
        * f1 * f2 * wp * wp * (b1 * b2) ** 2


def kernel_prec_from_coupling(lam: int, lamp: int, j: int, jp: int,
                              eta: float, p: SystemParams) -> float:
    """Pair kernel via (|E|/16 pi) (dk/dw)(dk/dw') [U^pair]^2.

    The extra factor 1/2 relative to the scattering form is the
    symmetry factor of the identical phonon pair.
    """
    e = _gap_or_raise(p, j, jp)
    w1 = eta * e
    w2 = (1.0 - eta) * e
    u = coupling_u2(lam, lamp, inverse_dispersion(w1), inverse_dispersion(w2),
                    p, "pair")
    return (e / (16.0 * math.pi)) * dk_domega(w1) * dk_domega(w2) * u * u


@lru_cache(maxsize=None)
def angular_weight_matrix(j: int, jp: int, lam_max: int) -> np.ndarray:
    """Angular weights A[lam, lam'] folding the L sum of the rate formula.

    A = (2lam+1)(2lam'+1) sum_{L even} (C^{L0}_{lam'0,lam0})^2
        (C^{L0}_{j0,j'0})^2 / (2L+1), restricted by both triangles.
    """
    cg_j = {}
    for L in range(abs(j - jp), j + jp + 1, 2):
        v = cg000_sq(j, jp, L)
        if v:
            cg_j[L] = v
    a = np.zeros((lam_max + 1, lam_max + 1))
    for lam in range(lam_max + 1):
        for lamp in range(lam, lam_max + 1):
            if (lam + lamp) % 2 == 1:
                continue
            s = 0.0
            for L, cj in cg_j.items():
                if L < abs(lam - lamp) or L > lam + lamp:
                    continue
                s += cg000_sq(lamp, lam, L) * cj / (2 * L + 1)
            if s == 0.0:
                continue
            v = (2 * lam + 1) * (2 * lamp + 1) * s
            a[lam, lamp] = v
            a[lamp, lam] = v
    a.setflags(write=False)
    return a


def _lam_cutoff(r0: float, k_max: float, j: int, jp: int) -> int:
    return max(int(math.ceil(r0 * k_max)) + _LAM_PAD, j + jp)


def _integrate(f, lo, hi, q: EtaQuadrature):
    out = quad(f, lo, hi, epsabs=0.0, epsrel=q.rel_tol, limit=400,
               full_output=1)
    val, abserr = out[0], out[1]
    if len(out) > 3 and abserr > max(q.abs_tol, 10.0 * q.rel_tol * abs(val)):
        raise QuadratureFailure(str(out[3]))
    return val


@lru_cache(maxsize=None)
def rate_2ph_cross(j: int, jp: int, p: SystemParams,
                   q: EtaQuadrature | None = None) -> float:
    """Total scattering-channel rate j -> j'; exactly 0 at T = 0.

    Absorbs a thermal phonon at eta|E| and emits one at (1+eta)|E| for
    downward transitions; the occupations swap for upward ones.
    """
    if j == jp:
        raise DegenerateTransition("j -> j requires a zero-energy transfer")
    if (j + jp) % 2 == 1:
        return 0.0
    q = q or _DEFAULT_QUAD
    d = derive_constants(p)
    t = d.temperature
    if t <= 0.0:
        # complementary step factors leave no T=0 contribution
        return 0.0
    e = transition_energy(j, jp, p)
    eta_max = q.cutoff(e, t)
    if eta_max <= 0.0:
        return 0.0
    lam_max = _lam_cutoff(p.r0_over_xi, inverse_dispersion((1.0 + eta_max) * e),
                          j, jp)
    a = angular_weight_matrix(j, jp, lam_max)
    up = 1.0 if jp > j else 0.0
    down = 1.0 if j > jp else 0.0
    pref = d.g_IB ** 2 * e ** 3 / (2.0 * math.pi ** 3)

    def f(eta):
        return cross_integrand(eta, e, t, p.r0_over_xi, up, down, a)

    return (2 * jp + 1) * pref * _integrate(f, 0.0, eta_max, q)


@lru_cache(maxsize=None)
def rate_2ph_prec(j: int, jp: int, p: SystemParams,
                  q: EtaQuadrature | None = None) -> float:
    """Total pair-channel rate j -> j'.

    Nonzero at T = 0 only for downward transitions (spontaneous pair
    emission); thermally activated otherwise.
    """
    if j == jp:
        raise DegenerateTransition("j -> j requires a zero-energy transfer")
    if (j + jp) % 2 == 1:
        return 0.0
    q = q or _DEFAULT_QUAD
    d = derive_constants(p)
    t = d.temperature
    down = j > jp
    if not down and t <= 0.0:
        return 0.0
    e = transition_energy(j, jp, p)
    lam_max = _lam_cutoff(p.r0_over_xi, inverse_dispersion(e), j, jp)
    a = angular_weight_matrix(j, jp, lam_max)
    th = 1.0 if down else 0.0
    pref = d.g_IB ** 2 * e ** 3 / (4.0 * math.pi ** 3)

    def f(eta):
        return prec_integrand(eta, e, t, p.r0_over_xi, th, a)

    # open panels: machine-epsilon offsets dodge the endpoint occupations
    eps = 1e-12
    return (2 * jp + 1) * pref * _integrate(f, eps, 1.0 - eps, q)


def thermal_2ph_ratio(p: SystemParams, rel_tol: float = 1e-10) -> float:
    """Thermal scattering-to-spontaneous rate ratio in the point limit.

    (sqrt(2)/(4 pi^2 n0xi3)) int dkappa k(kappa) nbar(kappa); the
    level indices drop out.  Approaches (T/T_c)^(3/2) as n0xi3 grows.
    """
    t = derive_constants(p).temperature
    if t <= 0.0:
        return 0.0

    def f(kappa):
        return inverse_dispersion(kappa) * occupation_at_temperature(kappa, t)

    hi = 50.0 * t + 10.0
    val = quad(f, 0.0, hi, epsabs=0.0, epsrel=rel_tol, limit=400)[0]
    return math.sqrt(2.0) / (4.0 * math.pi ** 2) / p.n0_xi3 * val
