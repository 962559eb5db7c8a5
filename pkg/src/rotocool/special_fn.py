"""Special functions on integer quantum numbers.

Spherical Bessel functions, Clebsch-Gordan coefficients in the
Condon-Shortley convention, and the angular coupling coefficients G
built from them.  Everything here is pure and memoized.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from ._kernels import bessel_j_vec
from .errors import DomainError

# Largest quantum number served by exact big-integer arithmetic; the
# log-gamma path takes over above (alternating sum, reduced accuracy).
_EXACT_J_LIMIT = 60


def _series_jl(lam, x):
    # ascending series; no cancellation for x <= 1.5
    x2 = -0.5 * x * x
    term = 1.0
    total = 1.0
    s = 0
    while True:
        s += 1
        term *= x2 / (s * (2 * lam + 2 * s + 1))
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
    if lam == 0:
        return total
    # x^lam / (2lam+1)!! through logs, underflow to 0
    ln_df = (math.lgamma(2 * lam + 2) - lam * math.log(2.0)
             - math.lgamma(lam + 1))
    ln_lead = lam * math.log(x) - ln_df
    if ln_lead < -745.0:
        return 0.0
    return math.exp(ln_lead) * total


def spherical_bessel(lam: int, x: float) -> float:
    """Spherical Bessel function j_lam(x).

    Parameters
    ----------
    lam : int
        Order, >= 0.
    x : float
        Argument, >= 0.

    Returns
    -------
    float
        j_lam(x); exactly 1 for (0, 0) and 0 for (lam>0, 0).
    """
    if lam < 0:
        raise DomainError("order must be nonnegative")
    if x < 0.0:
        raise DomainError("argument must be nonnegative")
    if x == 0.0:
        return 1.0 if lam == 0 else 0.0
    if x <= 1.5:
        return _series_jl(lam, x)
    if lam == 0:
        return math.sin(x) / x
    if lam == 1:
        return math.sin(x) / (x * x) - math.cos(x) / x
    if lam == 2:
        return ((3.0 / (x * x) - 1.0) * math.sin(x) / x
                - 3.0 * math.cos(x) / (x * x))
    return float(bessel_j_vec(lam, x)[lam])


def _triangle_ok(a, b, c):
    return abs(a - b) <= c <= a + b


@lru_cache(maxsize=None)
def _threej000(a: int, b: int, c: int) -> float:
    """Wigner 3j symbol (a b c; 0 0 0); single-term closed form."""
    J = a + b + c
    if J % 2 == 1 or not _triangle_ok(a, b, c):
        return 0.0
    s = J // 2
    ln_delta = (math.lgamma(a + b - c + 1) + math.lgamma(a - b + c + 1)
                + math.lgamma(-a + b + c + 1) - math.lgamma(J + 2))
    ln_s = (math.lgamma(s + 1) - math.lgamma(s - a + 1)
            - math.lgamma(s - b + 1) - math.lgamma(s - c + 1))
    v = math.exp(0.5 * ln_delta + ln_s)
    return v if s % 2 == 0 else -v


@lru_cache(maxsize=None)
def cg000_sq(j1: int, j2: int, J: int) -> float:
    """Squared Clebsch-Gordan coefficient (C^{J0}_{j1 0, j2 0})^2."""
    t = _threej000(j1, j2, J)
    return (2 * J + 1) * t * t


def _cg_exact(j1, m1, j2, m2, J, M):
    """Racah sum in exact rational arithmetic; float only at the end."""
    f = math.factorial
    pref = Fraction(
        f(j1 + j2 - J) * f(j1 - j2 + J) * f(-j1 + j2 + J) * (2 * J + 1),
        f(j1 + j2 + J + 1),
    )
    pref *= Fraction(
        f(J + M) * f(J - M) * f(j1 + m1) * f(j1 - m1) * f(j2 + m2) * f(j2 - m2)
    )
    t_lo = max(0, j2 - J - m1, j1 + m2 - J)
    t_hi = min(j1 + j2 - J, j1 - m1, j2 + m2)
    ssum = Fraction(0)
    for t in range(t_lo, t_hi + 1):
        den = (f(t) * f(j1 + j2 - J - t) * f(j1 - m1 - t) * f(j2 + m2 - t)
               * f(J - j2 + m1 + t) * f(J - j1 - m2 + t))
        term = Fraction(1, den)
        ssum += -term if t % 2 else term
    if ssum == 0:
        return 0.0
    # |C| = exp(ln|ssum| + ln(pref)/2); big-int logs keep this in range
    sign = 1.0 if ssum > 0 else -1.0
    ln_abs = (math.log(abs(ssum.numerator)) - math.log(ssum.denominator)
              + 0.5 * (math.log(pref.numerator) - math.log(pref.denominator)))
    return sign * math.exp(ln_abs)


def _cg_lgamma(j1, m1, j2, m2, J, M):
    lg = math.lgamma
    ln_pref = 0.5 * (
        lg(j1 + j2 - J + 1) + lg(j1 - j2 + J + 1) + lg(-j1 + j2 + J + 1)
        - lg(j1 + j2 + J + 2) + math.log(2 * J + 1)
        + lg(J + M + 1) + lg(J - M + 1) + lg(j1 + m1 + 1) + lg(j1 - m1 + 1)
        + lg(j2 + m2 + 1) + lg(j2 - m2 + 1)
    )
    t_lo = max(0, j2 - J - m1, j1 + m2 - J)
    t_hi = min(j1 + j2 - J, j1 - m1, j2 + m2)
    total = 0.0
    for t in range(t_lo, t_hi + 1):
        ln_den = (lg(t + 1) + lg(j1 + j2 - J - t + 1) + lg(j1 - m1 - t + 1)
                  + lg(j2 + m2 - t + 1) + lg(J - j2 + m1 + t + 1)
                  + lg(J - j1 - m2 + t + 1))
        term = math.exp(ln_pref - ln_den)
        total += -term if t % 2 else term
    return total


@lru_cache(maxsize=None)
def clebsch_gordan(j1: int, m1: int, j2: int, m2: int, J: int, M: int) -> float:
    """Clebsch-Gordan coefficient <j1 m1, j2 m2 | J M>.

    Condon-Shortley phase convention; integer angular momenta only.
    Exactly 0 when M != m1 + m2 or the triangle rule fails.
    """
    for j, m in ((j1, m1), (j2, m2), (J, M)):
        if j < 0:
            raise DomainError("angular momenta must be nonnegative")
        if abs(m) > j:
            return 0.0
    if M != m1 + m2 or not _triangle_ok(j1, j2, J):
        return 0.0
    if max(j1, j2, J) <= _EXACT_J_LIMIT:
        return _cg_exact(j1, m1, j2, m2, J, M)
    return _cg_lgamma(j1, m1, j2, m2, J, M)


def g_coefficient(j: int, m: int, jp: int, mp: int, lam: int, mu: int) -> float:
    """Angular matrix element G for the j,m -> j',m' transition.

    G = sqrt((2j'+1)(2lam+1)/(2j+1)) C^{jm}_{j'm',lam mu} C^{j0}_{j'0,lam 0};
    vanishes whenever j + j' + lam is odd.
    """
    c_m = clebsch_gordan(jp, mp, lam, mu, j, m)
    if c_m == 0.0:
        return 0.0
    c_0 = clebsch_gordan(jp, 0, lam, 0, j, 0)
    if c_0 == 0.0:
        return 0.0
    return math.sqrt((2 * jp + 1) * (2 * lam + 1) / (2 * j + 1)) * c_m * c_0


@dataclass
class CGTable:
    """Memo table for Clebsch-Gordan values keyed by 6-tuples.

    Mutable while populating; freeze() before sharing across threads.
    Lookups after the freeze fall through to the pure function without
    touching the cache.
    """

    cache: dict = field(default_factory=dict)
    frozen: bool = False

    def populate_m0(self, jmax: int, lam_max: int) -> None:
        if self.frozen:
            raise RuntimeError("table is frozen")
        for j1 in range(jmax + 1):
            for j2 in range(jmax + 1):
                for J in range(abs(j1 - j2), min(j1 + j2, lam_max) + 1):
                    key = (j1, 0, j2, 0, J, 0)
                    self.cache[key] = clebsch_gordan(*key)

    def freeze(self) -> None:
        self.frozen = True

    def get(self, j1, m1, j2, m2, J, M) -> float:
        key = (j1, m1, j2, m2, J, M)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        value = clebsch_gordan(*key)
        if not self.frozen:
            self.cache[key] = value
        return value
