"""
This file contains the complex-argument special functions used by the closed
forms of the scattering problem: log-Gamma, Gamma, reciprocal Gamma, digamma,
trigamma and the Gauss hypergeometric function 2F1.

Gamma uses the Lanczos approximation with g=7 and nine coefficients, which
keeps about 15 significant digits on the whole right half plane; the
reflection formula covers Re z < 1/2. Ratios of Gamma functions are always
formed as exp of lngamma differences so that large imaginary parts do not
overflow intermediate values.
"""

import cmath
import math
import sys

from termcolor import cprint

from ptscatter.config import DEFAULTS
from ptscatter.errors import (
    GammaPoleError,
    HypergeometricConvergenceError,
    HypergeometricParameterError,
)

SETTINGS = DEFAULTS["complexfn"]

LANCZOS_G = 7
LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
LOG_PI = math.log(math.pi)
EULER_GAMMA = 0.57721566490153286

# B_2k / 2k, k = 1..7
DIGAMMA_ASYMPTOTIC = (1.0 / 12, -1.0 / 120, 1.0 / 252, -1.0 / 240, 1.0 / 132, -691.0 / 32760, 1.0 / 12)
# B_2k, k = 1..7
TRIGAMMA_ASYMPTOTIC = (1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6)

# |z| from which the asymptotic series of digamma/trigamma are used directly
ASYMPTOTIC_RADIUS = 10.0

# |Im w| above which sin(pi w) is handled through its dominant exponential
EXPONENTIAL_IMAG = 20.0


def is_nonpositive_integer(z, tol=None):
    """
    True when z lies on a pole of the Gamma function, i.e. z in {0, -1, -2, ...}.
    """
    z = complex(z)
    tol = SETTINGS["pole_tolerance"] if tol is None else tol
    if z.real > 0.5 or abs(z.imag) > tol:
        return False
    nearest = round(z.real)
    return abs(z.real - nearest) <= tol * max(1.0, abs(nearest))


def _reduce(z):
    m = round(z.real)
    return m, z - m


def _log_sin_pi(z):
    # log sin(pi z) with the integer part of Re z removed first; lngamma folds the branch
    m, w = _reduce(z)
    if w.imag > EXPONENTIAL_IMAG:
        # sin(pi w) = (i/2) e^{-i pi w} (1 - e^{2 i pi w})
        value = -1j * math.pi * w + cmath.log(0.5j) - cmath.exp(2j * math.pi * w)
    elif w.imag < -EXPONENTIAL_IMAG:
        value = 1j * math.pi * w + cmath.log(-0.5j) - cmath.exp(-2j * math.pi * w)
    else:
        value = cmath.log(cmath.sin(math.pi * w))
    if m % 2:
        value += 1j * math.pi
    return value


def _unit_exponential(w):
    # e^{2 i pi w} for Im w > 0, e^{-2 i pi w} otherwise: modulus below 1
    sign = 1.0 if w.imag > 0 else -1.0
    return sign, cmath.exp(sign * 2j * math.pi * w)


def _cot_pi(z):
    _, w = _reduce(z)
    if abs(w.imag) <= EXPONENTIAL_IMAG:
        return cmath.cos(math.pi * w) / cmath.sin(math.pi * w)
    sign, q = _unit_exponential(w)
    return -sign * 1j * (1.0 + q) / (1.0 - q)


def _pi2_csc2_pi(z):
    # pi^2 / sin^2(pi z)
    _, w = _reduce(z)
    if abs(w.imag) <= EXPONENTIAL_IMAG:
        s = cmath.sin(math.pi * w)
        return math.pi**2 / (s * s)
    _, q = _unit_exponential(w)
    return -4.0 * math.pi**2 * q / ((1.0 - q) * (1.0 - q))


def _lanczos_log(z):
    z -= 1.0
    x = LANCZOS_COEFFS[0]
    for i in range(1, len(LANCZOS_COEFFS)):
        x += LANCZOS_COEFFS[i] / (z + i)
    t = z + LANCZOS_G + 0.5
    return HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def lngamma(z):
    """
    Principal branch of log Gamma(z): the imaginary part is folded into [-pi, pi].
    Args:
        z: Complex argument, not a non-positive integer.
    Returns:
        Complex value with exp(lngamma(z)) = Gamma(z).
    """
    z = complex(z)
    if is_nonpositive_integer(z):
        raise GammaPoleError(z)

    if z.real < 0.5:
        value = LOG_PI - _log_sin_pi(z) - lngamma(1.0 - z)
    else:
        value = _lanczos_log(z)

    return complex(value.real, math.remainder(value.imag, 2.0 * math.pi))


def gamma(z):
    return cmath.exp(lngamma(z))


def rgamma(z):
    """
    Reciprocal Gamma function 1/Gamma(z); entire, exactly zero at the poles of Gamma.
    """
    if is_nonpositive_integer(z):
        return 0j
    return cmath.exp(-lngamma(z))


def gamma_ratio(numerators, denominators):
    """
    Evaluate prod Gamma(numerators) / prod Gamma(denominators) through lngamma differences.
    Args:
        numerators: Iterable of Gamma arguments in the numerator.
        denominators: Iterable of Gamma arguments in the denominator.
    Returns:
        The complex ratio; 0 when a denominator argument sits on a pole.
    """
    numerators = [complex(a) for a in numerators]
    denominators = [complex(b) for b in denominators]

    numerator_poles = [a for a in numerators if is_nonpositive_integer(a)]
    denominator_poles = [b for b in denominators if is_nonpositive_integer(b)]
    if numerator_poles:
        if denominator_poles:
            raise GammaPoleError(
                numerator_poles[0],
                f"Indeterminate Gamma ratio: numerator pole at {numerator_poles[0]} "
                f"against denominator pole at {denominator_poles[0]}",
            )
        raise GammaPoleError(numerator_poles[0])
    if denominator_poles:
        return 0j

    log_value = sum(lngamma(a) for a in numerators) - sum(lngamma(b) for b in denominators)
    return cmath.exp(log_value)


def digamma(z):
    """
    Digamma function psi(z) = d lnGamma / dz.

    Reflection for Re z < 0, downward recurrence from |z| >= 10, then the
    asymptotic series up to z^-14.
    """
    z = complex(z)
    if is_nonpositive_integer(z):
        raise GammaPoleError(z)

    if z.real < 0.0:
        # psi(1 - z) - psi(z) = pi cot(pi z)
        return digamma(1.0 - z) - math.pi * _cot_pi(z)

    shift = 0j
    while abs(z) < ASYMPTOTIC_RADIUS:
        shift -= 1.0 / z
        z += 1.0

    inv2 = 1.0 / (z * z)
    series = 0j
    for coeff in reversed(DIGAMMA_ASYMPTOTIC):
        series = coeff + inv2 * series
    return shift + cmath.log(z) - 0.5 / z - inv2 * series


def trigamma(z):
    """
    Trigamma function psi'(z), same scheme as digamma.
    """
    z = complex(z)
    if is_nonpositive_integer(z):
        raise GammaPoleError(z)

    if z.real < 0.0:
        # psi'(1 - z) + psi'(z) = pi^2 / sin^2(pi z)
        return _pi2_csc2_pi(z) - trigamma(1.0 - z)

    shift = 0j
    while abs(z) < ASYMPTOTIC_RADIUS:
        shift += 1.0 / (z * z)
        z += 1.0

    inv = 1.0 / z
    inv2 = inv * inv
    series = 0j
    for coeff in reversed(TRIGAMMA_ASYMPTOTIC):
        series = coeff + inv2 * series
    return shift + inv + 0.5 * inv2 + inv * inv2 * series


def _terminating_order(a, b):
    orders = [-round(p.real) for p in (a, b) if is_nonpositive_integer(p)]
    return min(orders) if orders else None


def _polynomial(a, b, c, z, order):
    term = 1 + 0j
    total = 1 + 0j
    for n in range(order):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
    return total


def _gauss_series(a, b, c, z):
    tol = SETTINGS["series_tolerance"]
    term = 1 + 0j
    total = 1 + 0j
    small = 0
    for n in range(SETTINGS["max_terms"]):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        if abs(term) <= tol * abs(total):
            small += 1
            if small == 2:
                return total
        else:
            small = 0
    raise HypergeometricConvergenceError(
        f"2F1({a}, {b}; {c}; {z}) series did not converge in {SETTINGS['max_terms']} terms"
    )


def _log_limit(a, b, m, zc):
    """
    2F1(a, b; a+b+m; z) for integer m >= 0 as a series in 1-z with the logarithmic term.
    """
    tol = SETTINGS["series_tolerance"]
    c = a + b + m

    total = 0j
    if m > 0:
        head = 0j
        term = 1 + 0j
        for n in range(m):
            head += term
            if n < m - 1:
                term *= (a + n) * (b + n) / ((n + 1) * (1 - m + n)) * zc
        total += gamma_ratio([m, c], [a + m, b + m]) * head

    log_zc = cmath.log(zc)
    psi_n1 = -EULER_GAMMA
    psi_nm1 = -EULER_GAMMA + sum(1.0 / j for j in range(1, m + 1))
    psi_a = digamma(a + m)
    psi_b = digamma(b + m)
    term = 1.0 / math.factorial(m)
    tail = 0j
    small = 0
    for n in range(SETTINGS["max_terms"]):
        contribution = term * (log_zc - psi_n1 - psi_nm1 + psi_a + psi_b)
        tail += contribution
        if abs(contribution) <= tol * abs(tail):
            small += 1
            if small == 2:
                break
        else:
            small = 0
        term *= (a + m + n) * (b + m + n) / ((n + 1) * (n + m + 1)) * zc
        psi_n1 += 1.0 / (n + 1)
        psi_nm1 += 1.0 / (n + m + 1)
        psi_a += 1.0 / (a + m + n)
        psi_b += 1.0 / (b + m + n)
    else:
        raise HypergeometricConvergenceError(
            f"2F1 logarithmic limit series did not converge for a={a}, b={b}, m={m}"
        )

    return total - (-zc) ** m * gamma_ratio([c], [a, b]) * tail


def _complement_transform(a, b, c, z, zc):
    s = c - a - b
    m = round(s.real)
    if abs(s - m) < SETTINGS["degeneracy_window"]:
        if s != m:
            cprint(f"2F1: c-a-b={s} within the degeneracy window, using the limit form at m={m}", "red", file=sys.stderr)
        if m < 0:
            # Euler: F(a,b;c;z) = (1-z)^(c-a-b) F(c-a, c-b; c; z)
            return cmath.exp(s * cmath.log(zc)) * _log_limit(c - a, c - b, -m, zc)
        return _log_limit(a, b, m, zc)

    first = gamma_ratio([c, s], [c - a, c - b])
    second = gamma_ratio([c, -s], [a, b])
    value = 0j
    if first != 0:
        value += first * _gauss_series(a, b, 1.0 - s, zc)
    if second != 0:
        value += second * cmath.exp(s * cmath.log(zc)) * _gauss_series(c - a, c - b, 1.0 + s, zc)
    return value


def hyp2f1(a, b, c, z, z_complement=None):
    """
    Gauss hypergeometric function 2F1(a, b; c; z).

    Terminating series are summed directly for any z. Otherwise the Gauss
    series is used for |z| <= 1/2 and the z -> 1-z transformation closer to 1,
    switching to the logarithmic limit form when c-a-b is an integer.
    Args:
        a, b, c: Complex parameters; c must not be a non-positive integer.
        z: Complex argument with |z| < 1.
        z_complement: Optional 1-z computed by the caller at full relative precision.
    Returns:
        Complex value of 2F1.
    """
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    zc = 1.0 - z if z_complement is None else complex(z_complement)

    order = _terminating_order(a, b)
    if is_nonpositive_integer(c) and (order is None or order > -round(c.real)):
        raise HypergeometricParameterError(f"2F1 parameter c={c} is a non-positive integer")
    if order is not None:
        return _polynomial(a, b, c, z, order)

    if z == 0:
        return 1 + 0j
    if abs(z) >= 1.0:
        raise HypergeometricParameterError(f"2F1 argument |z|={abs(z)} outside the unit disc")

    if abs(z) <= 0.5 or abs(zc) >= abs(z):
        return _gauss_series(a, b, c, z)
    return _complement_transform(a, b, c, z, zc)
