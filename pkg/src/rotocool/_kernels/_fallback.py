"""Pure-numpy kernels: spherical Bessel vectors and rate integrands.

Same algorithms as the compiled core; kept in lockstep so either backend
can serve every call site.
"""
import math

import numpy as np

BACKEND_NAME = "fallback"

# Rescale bound keeps squares inside double range during recurrence.
_BIG = 1e140
_BIG_INV = 1e-140


def _bessel_tiny(lmax, x):
    """Leading-order j_lam(x) = x^lam/(2lam+1)!! for x below 1e-6.

    Multiplicative recurrence only: the compiled twin performs the same
    float operations in the same order, so results match bitwise.
    """
    out = np.zeros(lmax + 1)
    out[0] = 1.0 - x * x / 6.0
    t = 1.0
    for lam in range(1, lmax + 1):
        t *= x / (2.0 * lam + 1.0)
        out[lam] = t
    return out


def bessel_j_vec(lmax, x):
    """Spherical Bessel functions j_0(x)..j_lmax(x).

    Downward recurrence from above the turning point, normalized with
    the sum rule sum_lam (2lam+1) j_lam^2 = 1.

    Parameters
    ----------
    lmax : int
        Highest order, >= 0.
    x : float
        Argument, >= 0.

    Returns
    -------
    numpy.ndarray
        Values j_0..j_lmax; entries below double range are 0.
    """
    if lmax < 0:
        raise ValueError("lmax must be nonnegative")
    if x < 0.0:
        raise ValueError("x must be nonnegative")
    out = np.zeros(lmax + 1)
    if x == 0.0:
        out[0] = 1.0
        return out
    if x < 1e-6:
        return _bessel_tiny(lmax, x)
    top = max(lmax, int(math.ceil(x)))
    nstart = top + 40 + int(2.0 * math.sqrt(top))
    fp = 0.0
    fc = 1e-30
    acc = 0.0
    inv_x = 1.0 / x
    for nu in range(nstart, -1, -1):
        if nu <= lmax:
            out[nu] = fc
        acc += (2 * nu + 1) * fc * fc
        fm = (2 * nu + 1) * inv_x * fc - fp
        fp = fc
        fc = fm
        if abs(fc) > _BIG:
            fc *= _BIG_INV
            fp *= _BIG_INV
            acc *= _BIG_INV * _BIG_INV
            out[nu:] *= _BIG_INV
    # seed at nstart is above the last zero of j, so the sign is fixed
    scale = 1.0 / math.sqrt(acc)
    out *= scale
    return out


def _bilinear(b1, b2, a):
    # sequential accumulation in the compiled core's exact order; a BLAS
    # dot would drift by ulps and break cross-backend reproducibility
    rows = a.tolist()
    v1 = b1.tolist()
    v2 = b2.tolist()
    total = 0.0
    for x1, row in zip(v1, rows):
        if x1 == 0.0:
            continue
        acc = 0.0
        for aij, x2 in zip(row, v2):
            acc += aij * x2
        total += x1 * acc
    return total


def _occupation(omega, temperature):
    if temperature <= 0.0 or omega <= 0.0:
        return 0.0
    x = omega / temperature
    if x > 700.0:
        return 0.0
    return 1.0 / math.expm1(x)


def _inverse_dispersion(omega):
    s = math.sqrt(1.0 + 2.0 * omega * omega)
    return omega * math.sqrt(2.0 / (s + 1.0))


def _w_factor(k):
    # sqrt(sqrt(.)) rather than **0.25: rounds exactly like the core
    return math.sqrt(math.sqrt(k * k / (2.0 + k * k)))


def cross_integrand(eta, E, T, r0, up, down, A):
    """Scattering-channel integrand at scaled phonon energy eta > 0.

    E is the absolute transition energy, up/down the step factors for
    the two directions (floats 0 or 1), A the angular weight matrix.
    The constant prefactor and the final-state degeneracy are applied
    by the caller.
    """
    lmax = A.shape[0] - 1
    w1 = eta * E
    w2 = (1.0 + eta) * E
    k1 = _inverse_dispersion(w1)
    k2 = _inverse_dispersion(w2)
    f1 = eta * k1 / math.sqrt(1.0 + 2.0 * w1 * w1)
    f2 = (1.0 + eta) * k2 / math.sqrt(1.0 + 2.0 * w2 * w2)
    ww = _w_factor(k1) * _w_factor(k2)
    wx = ww + 1.0 / ww
    occ = (_occupation(w1, T) + up) * (_occupation(w2, T) + down)
    if occ == 0.0:
        return 0.0
    b1 = bessel_j_vec(lmax, r0 * k1) ** 2
    b2 = bessel_j_vec(lmax, r0 * k2) ** 2
    return f1 * f2 * wx * wx * occ * _bilinear(b1, b2, A)


def prec_integrand(eta, E, T, r0, th, A):
    """Pair-channel integrand at energy fraction eta in (0, 1).

    th is the step factor Theta(j - j'); both emitted phonons carry it.
    """
    lmax = A.shape[0] - 1
    w1 = eta * E
    w2 = (1.0 - eta) * E
    k1 = _inverse_dispersion(w1)
    k2 = _inverse_dispersion(w2)
    f1 = eta * k1 / math.sqrt(1.0 + 2.0 * w1 * w1)
    f2 = (1.0 - eta) * k2 / math.sqrt(1.0 + 2.0 * w2 * w2)
    ww = _w_factor(k1) * _w_factor(k2)
    wp = ww - 1.0 / ww
    occ = (_occupation(w1, T) + th) * (_occupation(w2, T) + th)
    if occ == 0.0:
        return 0.0
    b1 = bessel_j_vec(lmax, r0 * k1) ** 2
    b2 = bessel_j_vec(lmax, r0 * k2) ** 2
    return f1 * f2 * wp * wp * occ * _bilinear(b1, b2, A)
