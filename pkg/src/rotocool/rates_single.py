"""Single-phonon transition rates between rotor levels.

Rates carry units of c/xi.  The effective rate per angular-momentum
transfer lam exists in two algebraically equivalent forms (direct, and
density-of-states times coupling squared); both are implemented and
kept in agreement by the test suite.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .condensate import (dk_domega, inverse_dispersion, thermal_occupation,
                         w_factor)
from .errors import DegenerateTransition, DomainError
from .params import SystemParams, derive_constants
from .special_fn import cg000_sq, g_coefficient, spherical_bessel

# Channel tags used across rate matrices, kinetics and the CLI.
CHANNEL_1PH_SP = "1ph-sp"
CHANNEL_1PH_T = "1ph-T"
CHANNEL_2PH_CROSS = "2ph-x"
CHANNEL_2PH_PAIR = "2ph-pair"
CHANNELS = (CHANNEL_1PH_SP, CHANNEL_1PH_T, CHANNEL_2PH_CROSS, CHANNEL_2PH_PAIR)


class RatePair(NamedTuple):
    sp: float
    th: float


@dataclass(frozen=True)
class RotorSpectrum:
    """Rigid-rotor level energies E_j = j(j+1) B_rot for j = 0..jmax."""

    jmax: int
    energies: tuple

    @classmethod
    def from_params(cls, p: SystemParams, jmax: int) -> "RotorSpectrum":
        if jmax < 0:
            raise DomainError("jmax must be nonnegative")
        b = derive_constants(p).B_rot
        return cls(jmax=jmax,
                   energies=tuple(j * (j + 1) * b for j in range(jmax + 1)))

    def energy(self, j: int) -> float:
        return self.energies[j]

    def gap(self, j: int, jp: int) -> float:
        """Signed transition energy E_j - E_j'."""
        return self.energies[j] - self.energies[jp]


def level_spacing(j: int, jp: int) -> int:
    """|j(j+1) - j'(j'+1)|; the gap in units of B_rot."""
    return abs(j * (j + 1) - jp * (jp + 1))


def transition_energy(j: int, jp: int, p: SystemParams) -> float:
    """Absolute energy |E_j - E_j'| released or absorbed."""
    return level_spacing(j, jp) * derive_constants(p).B_rot


def coupling_u(lam: int, k: float, p: SystemParams) -> float:
    """Single-phonon coupling U_lam(k) = g_IB sqrt(8 n0/pi) k W_k j_lam(r0 k)."""
    if k <= 0.0:
        raise DomainError("momentum must be positive")
    d = derive_constants(p)
    amp = d.g_IB * math.sqrt(8.0 * p.n0_xi3 / math.pi)
    return amp * k * w_factor(k) * spherical_bessel(lam, p.r0_over_xi * k)


@lru_cache(maxsize=None)
def effective_gamma(lam: int, j: int, jp: int, p: SystemParams) -> float:
    """Effective rate gamma_lam for the j -> j' gap; 0 for odd lam.

    Direct form (sqrt(2)/pi) (gIB/g)^2/n0xi3 k^3/(1+k^2) j_lam(r0 k)^2
    with k at the transition energy; 1 + k^2 = sqrt(1 + 2 E^2) on shell.
    """
    if lam < 0:
        raise DomainError("lam must be nonnegative")
    e = transition_energy(j, jp, p)
    if e == 0.0:
        raise DegenerateTransition("zero energy gap for %d -> %d" % (j, jp))
    if lam % 2 == 1:
        return 0.0
    k = inverse_dispersion(e)
    jl = spherical_bessel(lam, p.r0_over_xi * k)
    return (math.sqrt(2.0) / math.pi) * (p.gIB_over_g ** 2 / p.n0_xi3) \
        * k ** 3 / (1.0 + k * k) * jl * jl


def effective_gamma_from_coupling(lam: int, j: int, jp: int,
                                  p: SystemParams) -> float:
    """Same rate via (1/2) (dk/domega) U_lam(k)^2; the cross-check form."""
    e = transition_energy(j, jp, p)
    if e == 0.0:
        raise DegenerateTransition("zero energy gap for %d -> %d" % (j, jp))
    if lam % 2 == 1:
        return 0.0
    k = inverse_dispersion(e)
    u = coupling_u(lam, k, p)
    return 0.5 * dk_domega(e) * u * u


def _lam_window(j: int, jp: int):
    # CG triangle limits the transfer; parity keeps it even
    lo = abs(j - jp)
    if lo % 2 == 1:
        lo += 1
    return range(lo, j + jp + 1, 2)


def rate_1ph_m_resolved(j: int, m: int, jp: int, mp: int,
                        p: SystemParams) -> RatePair:
    """Spontaneous and thermal rates for j,m -> j',m'.

    The transferred projection mu = m - m' is fixed by selection rules.
    """
    if abs(m) > j or abs(mp) > jp:
        raise DomainError("|m| must not exceed j")
    if (j + jp) % 2 == 1 or j == jp:
        return RatePair(0.0, 0.0)
    mu = m - mp
    total = 0.0
    for lam in _lam_window(j, jp):
        if lam < abs(mu):
            continue
        g = g_coefficient(j, m, jp, mp, lam, mu)
        if g == 0.0:
            continue
        total += effective_gamma(lam, j, jp, p) * g * g
    if total == 0.0:
        return RatePair(0.0, 0.0)
    sp = total if j > jp else 0.0
    th = total * thermal_occupation(transition_energy(j, jp, p), p)
    return RatePair(sp, th)


@lru_cache(maxsize=None)
def rate_1ph_total(j: int, jp: int, p: SystemParams) -> RatePair:
    """m-summed rates (2j'+1) sum_lam gamma_lam (C^{lam 0}_{j0,j'0})^2.

    Spontaneous part only for downward transitions; the thermal part is
    proportional to the phonon occupation at the gap energy.
    """
    if j == jp:
        raise DegenerateTransition("j -> j requires a zero-energy phonon")
    if (j + jp) % 2 == 1:
        return RatePair(0.0, 0.0)
    total = 0.0
    for lam in _lam_window(j, jp):
        total += effective_gamma(lam, j, jp, p) * cg000_sq(j, jp, lam)
    total *= (2 * jp + 1)
    if total == 0.0:
        return RatePair(0.0, 0.0)
    sp = total if j > jp else 0.0
    th = total * thermal_occupation(transition_energy(j, jp, p), p)
    return RatePair(sp, th)


def rate_1ph_small_molecule(lam: int, j: int, jp: int,
                            p: SystemParams) -> float:
    """Closed-form effective rate in the point-molecule limit r0 << xi.

    gamma_lam = (1/(pi r0)) (gIB/g)^2/n0xi3 sqrt(Delta mB/mI)
                * j_lam(sqrt(Delta mB/(2 mI)))^2 for even lam, else 0.
    """
    if lam % 2 == 1:
        return 0.0
    delta = level_spacing(j, jp)
    if delta == 0:
        raise DegenerateTransition("zero energy gap for %d -> %d" % (j, jp))
    ratio = delta / p.mI_over_mB
    jl = spherical_bessel(lam, math.sqrt(0.5 * ratio))
    return (1.0 / (math.pi * p.r0_over_xi)) \
        * (p.gIB_over_g ** 2 / p.n0_xi3) * math.sqrt(ratio) * jl * jl


@dataclass(frozen=True)
class ChannelRateMatrix:
    """Dense matrix of rates Gamma_{j -> j'} for one channel.

    gamma[j, jp] is the rate from j to jp; diagonal is 0 and odd
    parity blocks vanish identically.
    """

    jmax: int
    gamma: np.ndarray
    channel: str

    def __post_init__(self):
        g = self.gamma
        if g.shape != (self.jmax + 1, self.jmax + 1):
            raise DomainError("matrix shape does not match jmax")
        if np.any(g < 0.0):
            raise DomainError("negative rate entry")
        if np.any(np.diagonal(g) != 0.0):
            raise DomainError("nonzero diagonal entry")
        g.setflags(write=False)

    def total_out(self) -> np.ndarray:
        """Total decay-plus-excitation rate out of each level."""
        return self.gamma.sum(axis=1)


def _pair_rate(p, j, jp, channel, quadrature):
    if channel == CHANNEL_1PH_SP:
        return rate_1ph_total(j, jp, p).sp
    if channel == CHANNEL_1PH_T:
        return rate_1ph_total(j, jp, p).th
    # two-phonon channels live in rates_two; late import avoids a cycle
    from . import rates_two
    if channel == CHANNEL_2PH_CROSS:
        return rates_two.rate_2ph_cross(j, jp, p, quadrature)
    if channel == CHANNEL_2PH_PAIR:
        return rates_two.rate_2ph_prec(j, jp, p, quadrature)
    raise DomainError("unknown channel %r" % channel)


def channel_rate_matrix(p: SystemParams, jmax: int, channel: str,
                        quadrature=None, threads: int = 1) -> ChannelRateMatrix:
    """Assemble Gamma_{j -> j'} for all ordered pairs up to jmax."""
    if channel not in CHANNELS:
        raise DomainError("unknown channel %r" % channel)
    pairs = [(j, jp) for j in range(jmax + 1) for jp in range(jmax + 1)
             if j != jp and (j + jp) % 2 == 0]
    gamma = np.zeros((jmax + 1, jmax + 1))

    def fill(pair):
        j, jp = pair
        gamma[j, jp] = _pair_rate(p, j, jp, channel, quadrature)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill, pairs))
    else:
        for pair in pairs:
            fill(pair)
    return ChannelRateMatrix(jmax=jmax, gamma=gamma, channel=channel)
