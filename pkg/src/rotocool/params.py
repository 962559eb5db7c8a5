"""System parameters and derived constants in condensate units.

All quantities are expressed in units where the speed of sound c, the
healing length xi and hbar equal one, and k_B = 1 so temperatures are
energies.  In these units the boson mass is m_B = 1/sqrt(2).
"""
import math
import warnings
from dataclasses import dataclass

from .errors import InvalidParams

# Riemann zeta(3/2), fixed to double precision.
ZETA_3_2 = 2.612375348685488


@dataclass(frozen=True)
class SystemParams:
    """Dimensionless inputs describing impurity and condensate.

    Parameters
    ----------
    r0_over_xi : float
        Half distance between the two impurity atoms, in healing lengths.
    mI_over_mB : float
        Mass of one impurity atom over the boson mass.
    T_over_Tc : float
        Condensate temperature over the critical temperature.
    n0_xi3 : float
        Condensate density times xi cubed.
    gIB_over_g : float
        Impurity-boson over boson-boson coupling strength.
    """

    r0_over_xi: float
    mI_over_mB: float
    T_over_Tc: float
    n0_xi3: float
    gIB_over_g: float = 1.0

    def __post_init__(self):
        for name in ("r0_over_xi", "mI_over_mB", "T_over_Tc", "n0_xi3",
                     "gIB_over_g"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParams("%s must be finite" % name)
        if self.r0_over_xi <= 0.0:
            raise InvalidParams("r0_over_xi must be positive")
        if self.mI_over_mB <= 0.0:
            raise InvalidParams("mI_over_mB must be positive")
        if self.T_over_Tc < 0.0:
            raise InvalidParams("T_over_Tc must be nonnegative")
        if self.n0_xi3 <= 0.0:
            raise InvalidParams("n0_xi3 must be positive")
        if self.gIB_over_g <= 0.0:
            raise InvalidParams("gIB_over_g must be positive")
        if self.n0_xi3 < 1.0:
            # weak-interaction expansion marginal below one particle per xi^3
            warnings.warn("n0_xi3 < 1: outside the dilute Bogoliubov regime",
                          stacklevel=2)


@dataclass(frozen=True)
class DerivedConstants:
    """Constants derived from :class:`SystemParams`, in code units."""

    c: float
    xi: float
    m_B: float
    m_I: float
    B_rot: float
    T_c: float
    temperature: float
    g: float
    g_IB: float
    zeta_3_2: float


def derive_constants(p: SystemParams) -> DerivedConstants:
    """Map dimensionless inputs onto the constants used by the rate formulas.

    Returns
    -------
    DerivedConstants
        With m_B = 1/sqrt(2), B_rot = 1/(4 m_I r0^2),
        T_c = 2 pi n0^(2/3) / (m_B zeta(3/2)^(2/3)) and
        g = 1/(2 m_B n0) = 1/(sqrt(2) n0).
    """
    if not isinstance(p, SystemParams):
        raise InvalidParams("expected SystemParams")
    m_b = 1.0 / math.sqrt(2.0)
    m_i = p.mI_over_mB * m_b
    b_rot = 1.0 / (4.0 * m_i * p.r0_over_xi ** 2)
    t_c = 2.0 * math.pi * p.n0_xi3 ** (2.0 / 3.0) / (m_b * ZETA_3_2 ** (2.0 / 3.0))
    g = 1.0 / (2.0 * m_b * p.n0_xi3)
    return DerivedConstants(
        c=1.0,
        xi=1.0,
        m_B=m_b,
        m_I=m_i,
        B_rot=b_rot,
        T_c=t_c,
        temperature=p.T_over_Tc * t_c,
        g=g,
        g_IB=p.gIB_over_g * g,
        zeta_3_2=ZETA_3_2,
    )


def _angular_root(rhs: float) -> float:
    """Positive real solution x of x(x+1) = rhs, clipped at zero."""
    if rhs <= 0.0:
        return 0.0
    return 0.5 * (math.sqrt(1.0 + 4.0 * rhs) - 1.0)


def thermal_angular_momentum(p: SystemParams) -> float:
    """Characteristic angular momentum j_T with j_T(j_T+1) B_rot = T.

    Returns the positive real root; 0 when T = 0.
    """
    d = derive_constants(p)
    return _angular_root(d.temperature / d.B_rot)


def critical_j(p: SystemParams) -> tuple[float, float]:
    """Critical angular momenta (j_c, j_c1) as real numbers.

    j_c solves j(j+1) = 2 (m_I/m_B)^2 (r0/xi)^2 and marks the onset of
    phonon emission; j_c1 solves j(j+1) = 2 (r0/xi)^2 ((m_I/m_B)^2 - 1)
    and bounds the lowest reachable level, 0 when m_I <= m_B.
    Callers floor these where integer levels are needed.
    """
    r2 = p.r0_over_xi ** 2
    mu2 = p.mI_over_mB ** 2
    j_c = _angular_root(2.0 * mu2 * r2)
    j_c1 = _angular_root(2.0 * r2 * (mu2 - 1.0))
    return j_c, j_c1
