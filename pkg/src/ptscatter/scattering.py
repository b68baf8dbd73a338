"""
This file contains the exact scattering solution of the hyperbolic Poschl-Teller
potential V(x) = -lambda(lambda-1)/cosh^2(x) with alpha = 1 and hbar^2/2m = 1.

The main functionalities include:
1. PotentialSpec: the parameter lambda and its regime (well, low or high barrier).
2. The hypergeometric general and outgoing wavefunctions.
3. The transfer matrix T(k), the S matrix and the amplitudes r, t.
4. Reflection and transmission coefficients, with their closed forms.

A problem with a general alpha maps onto this one through x -> alpha x and
k -> k / alpha (see rescale).
"""

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import expit

from ptscatter.complexfn import gamma_ratio, hyp2f1, is_nonpositive_integer
from ptscatter.config import DEFAULTS
from ptscatter.errors import AtPoleError, GammaPoleError, RegimeError, TransferPoleError

SETTINGS = DEFAULTS["scattering"]

# Tolerance on lambda when matching a regime boundary or an integer value
PARAMETER_TOLERANCE = 1e-12

REGIME_RANGES = (
    "lambda must be real and > 1 (well), real with 1/2 <= lambda < 1 (low barrier), "
    "1/2 + i*ell with ell > 0 (high barrier), or exactly 1 (free)"
)


class Regime(Enum):
    WELL = "Well"
    LOW_BARRIER = "LowBarrier"
    HIGH_BARRIER = "HighBarrier"
    FREE = "Free"


def _infer_regime(lam):
    if abs(lam.imag) <= PARAMETER_TOLERANCE:
        value = lam.real
        if value > 1.0 + PARAMETER_TOLERANCE:
            return Regime.WELL
        if abs(value - 1.0) <= PARAMETER_TOLERANCE:
            return Regime.FREE
        if 0.5 <= value < 1.0:
            return Regime.LOW_BARRIER
    elif abs(lam.real - 0.5) <= PARAMETER_TOLERANCE and lam.imag > 0:
        return Regime.HIGH_BARRIER
    raise RegimeError(f"Invalid lambda={lam}: {REGIME_RANGES}")


@dataclass(frozen=True)
class PotentialSpec:
    """
    Parameter lambda of the potential together with its regime.
    Build it with PotentialSpec.from_lambda, PotentialSpec.parse or PotentialSpec.high_barrier.
    """

    lam: complex
    regime: Regime

    def __post_init__(self):
        object.__setattr__(self, "lam", complex(self.lam))
        if _infer_regime(self.lam) is not self.regime:
            raise RegimeError(f"lambda={self.lam} is not in the {self.regime.value} regime: {REGIME_RANGES}")

    @classmethod
    def from_lambda(cls, value):
        lam = complex(value)
        return cls(lam, _infer_regime(lam))

    @classmethod
    def high_barrier(cls, ell):
        if ell <= 0:
            raise RegimeError(f"ell must be positive for the high barrier, got {ell}")
        return cls.from_lambda(complex(0.5, ell))

    @classmethod
    def parse(cls, text):
        """
        Parse '3.5', '0.75' or '0.5+2i' (a trailing 'j' is accepted too).
        """
        cleaned = str(text).strip().replace(" ", "").replace("i", "j")
        try:
            value = complex(cleaned)
        except ValueError:
            raise RegimeError(f"Cannot parse lambda from '{text}': {REGIME_RANGES}") from None
        return cls.from_lambda(value)

    @property
    def ell(self):
        if self.regime is not Regime.HIGH_BARRIER:
            raise RegimeError(f"ell is only defined for the high barrier, lambda={self.lam}")
        return self.lam.imag

    @property
    def coupling(self):
        # lambda(lambda-1), real in every regime
        return self.lam * (self.lam - 1.0)

    @property
    def is_integer(self):
        value = self.lam
        return abs(value.imag) <= PARAMETER_TOLERANCE and abs(value.real - round(value.real)) <= PARAMETER_TOLERANCE

    @property
    def is_half_odd(self):
        twice = 2.0 * self.lam
        return (
            abs(twice.imag) <= PARAMETER_TOLERANCE
            and abs(twice.real - round(twice.real)) <= PARAMETER_TOLERANCE
            and round(twice.real) % 2 == 1
        )

    def seed_exponent(self, series):
        if series == 1:
            return self.lam
        if series == 2:
            return 1.0 - self.lam
        raise ValueError(f"series must be 1 or 2, got {series}")

    def kappa(self, series, n):
        """
        kappa = i k_series(n): lambda + n for series 1, n - lambda + 1 for series 2.
        """
        if n < 0:
            raise ValueError(f"n must be non-negative, got {n}")
        return self.seed_exponent(series) + n

    def pole_momentum(self, series, n):
        # k = -i kappa, formed componentwise so coinciding poles compare equal
        kappa = self.kappa(series, n)
        return complex(kappa.imag, -kappa.real)

    def energy(self, series, n):
        k = self.pole_momentum(series, n)
        return k * k

    @property
    def bound_state_count(self):
        if self.regime is not Regime.WELL:
            return 0
        return max(0, math.ceil(self.lam.real - 1.0 - PARAMETER_TOLERANCE))

    @property
    def ground_energy(self):
        if self.bound_state_count == 0:
            raise RegimeError(f"lambda={self.lam} supports no bound state")
        return self.energy(2, 0)

    def describe(self):
        if self.regime is Regime.HIGH_BARRIER:
            return f"{self.regime.value} (lambda=1/2+{self.ell:g}i)"
        return f"{self.regime.value} (lambda={self.lam.real:g})"


def rescale(x, k, alpha):
    """
    Map position and momentum of a potential with width parameter alpha onto alpha = 1.
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    return alpha * x, k / alpha


def _sech2(x):
    e = np.exp(-2.0 * np.abs(x))
    return 4.0 * e / (1.0 + e) ** 2


def _log_cosh(x):
    ax = abs(x)
    return ax + math.log1p(math.exp(-2.0 * ax)) - math.log(2.0)


def potential_value(spec, x):
    """
    V(x) = -lambda(lambda-1)/cosh^2(x); x may be a scalar or a numpy array.
    """
    values = -spec.coupling * _sech2(np.asarray(x, dtype=float))
    if np.ndim(values) == 0:
        return complex(values)
    return values.astype(complex)


def general_wavefunction(spec, k, A, B, x):
    """
    General solution A u_A(x) + B u_B(x) at energy k^2.

    u_A = e^{ikx} 2F1(lambda, 1-lambda; 1+ik; z) and
    u_B = 2^{ik} cosh(x)^{ik} 2F1(lambda-ik, 1-lambda-ik; 1-ik; z) with z = (1+tanh x)/2,
    so that u_A -> e^{ikx} and u_B -> e^{-ikx} as x -> -infinity.
    Args:
        spec: PotentialSpec.
        k: Complex momentum.
        A, B: Complex amplitudes of the left plane waves.
        x: Real position.
    Returns:
        Complex value of the wavefunction.
    """
    k, A, B, x = complex(k), complex(A), complex(B), float(x)
    ik = 1j * k
    lam = spec.lam

    # z and 1-z computed separately so that 1-z keeps its relative precision for x >> 1
    z = float(expit(2.0 * x))
    zc = float(expit(-2.0 * x))

    value = 0j
    if A != 0:
        value += A * cmath.exp(ik * x) * hyp2f1(lam, 1.0 - lam, 1.0 + ik, z, zc)
    if B != 0:
        prefactor = cmath.exp(ik * (math.log(2.0) + _log_cosh(x)))
        value += B * prefactor * hyp2f1(lam - ik, 1.0 - lam - ik, 1.0 - ik, z, zc)
    return value


def outgoing_wavefunction(spec, k, x):
    """
    Purely outgoing solution (A = 0, B = 1), defined up to a constant factor.
    At a zero of T22 it is an eigenfunction of H with eigenvalue k^2.
    """
    return general_wavefunction(spec, k, 0.0, 1.0, x)


@dataclass(frozen=True)
class TransferMatrix:
    t11: complex
    t12: complex
    t21: complex
    t22: complex

    @property
    def det(self):
        return self.t11 * self.t22 - self.t12 * self.t21

    @property
    def scale(self):
        return max(abs(self.t11), abs(self.t12), abs(self.t21), abs(self.t22))

    def as_array(self):
        return np.array([[self.t11, self.t12], [self.t21, self.t22]], dtype=complex)

    def apply(self, A, B):
        """
        Right-hand amplitudes (A', B') of the plane waves for left amplitudes (A, B).
        """
        return self.t11 * A + self.t12 * B, self.t21 * A + self.t22 * B


@dataclass(frozen=True)
class ScatterMatrix:
    s11: complex
    s12: complex
    s21: complex
    s22: complex

    def as_array(self):
        return np.array([[self.s11, self.s12], [self.s21, self.s22]], dtype=complex)

    def unitarity_defect(self):
        S = self.as_array()
        return float(np.max(np.abs(S @ S.conj().T - np.eye(2))))


def _transfer_entries(lam, ik):
    return {
        "t11": ([ik + 1.0, ik], [ik + 1.0 - lam, ik + lam]),
        "t12": ([1.0 - ik, ik], [1.0 - lam, lam]),
        "t21": ([ik + 1.0, -ik], [lam, 1.0 - lam]),
        "t22": ([1.0 - ik, -ik], [lam - ik, 1.0 - lam - ik]),
    }


def transfer_matrix(spec, k):
    """
    Transfer matrix T(k) relating the plane-wave amplitudes at x -> -infinity and x -> +infinity.
    Each entry is a ratio of four Gamma functions, evaluated through lngamma differences.
    """
    ik = 1j * complex(k)
    values = {}
    for name, (numerators, denominators) in _transfer_entries(spec.lam, ik).items():
        try:
            values[name] = gamma_ratio(numerators, denominators)
        except GammaPoleError as error:
            raise TransferPoleError(name, k) from error
    return TransferMatrix(**values)


def _checked_transfer_matrix(spec, k):
    T = transfer_matrix(spec, k)
    if abs(T.t22) < SETTINGS["at_pole_threshold"] * T.scale:
        raise AtPoleError(k, T.t22)
    return T


def s_matrix(spec, k):
    T = _checked_transfer_matrix(spec, k)
    return ScatterMatrix(
        s11=-T.t21 / T.t22,
        s12=1.0 / T.t22,
        s21=(T.t11 * T.t22 - T.t21 * T.t12) / T.t22,
        s22=T.t12 / T.t22,
    )


def amplitudes(spec, k):
    """
    Reflection and transmission amplitudes r = -T21/T22 and t = 1/T22.
    """
    T = _checked_transfer_matrix(spec, k)
    return -T.t21 / T.t22, 1.0 / T.t22


def asymptotic_amplitudes(spec, k, A, B):
    return transfer_matrix(spec, k).apply(complex(A), complex(B))


def _check_real_momentum(k):
    if isinstance(k, complex):
        if k.imag != 0:
            raise ValueError(f"Coefficients need a real momentum, got k={k}")
        k = k.real
    k = float(k)
    if k == 0.0:
        raise ValueError("k=0 is excluded: Gamma(0) pole in the amplitudes")
    return k


def coefficients(spec, k):
    """
    Reflection and transmission coefficients R = |r|^2 and T = |t|^2 from the Gamma ratios.
    Args:
        spec: PotentialSpec.
        k: Real, nonzero momentum.
    Returns:
        (R, T)
    """
    k = _check_real_momentum(k)
    r, t = amplitudes(spec, k)
    return abs(r) ** 2, abs(t) ** 2


def closed_form_coefficients(spec, k):
    """
    (R, T) from the trigonometric closed forms: sin^2(pi lambda) for real lambda,
    cosh^2(pi ell) for the high barrier.
    """
    k = abs(_check_real_momentum(k))
    # 1/sinh^2(pi k), finite for every k where sinh^2 itself overflows
    csch2 = (2.0 * math.exp(-math.pi * k) / -math.expm1(-2.0 * math.pi * k)) ** 2
    if spec.regime is Regime.HIGH_BARRIER:
        ratio = math.cosh(math.pi * spec.ell) ** 2 * csch2
    else:
        ratio = math.sin(math.pi * spec.lam.real) ** 2 * csch2
    return ratio / (1.0 + ratio), 1.0 / (1.0 + ratio)


def inverse_transmission(spec, k):
    """
    1/t(k) = Gamma(1-ik)Gamma(-ik) / (Gamma(lambda-ik)Gamma(1-lambda-ik)); its zeros are the poles of S.
    """
    ik = 1j * complex(k)
    try:
        return gamma_ratio([1.0 - ik, -ik], [spec.lam - ik, 1.0 - spec.lam - ik])
    except GammaPoleError as error:
        raise TransferPoleError("t22", k) from error


def transmission_modulus(spec, k):
    """
    |t(k)| for complex k; infinite at poles of S, zero where S vanishes.

    Where Gamma poles meet in numerator and denominator the limit is taken:
    every argument moves as -ik, and |Gamma(-m + d)| ~ 1/(m! |d|).
    """
    ik = 1j * complex(k)
    numerators = [spec.lam - ik, 1.0 - spec.lam - ik]
    denominators = [1.0 - ik, -ik]
    numerator_poles = [round(-a.real) for a in numerators if is_nonpositive_integer(a)]
    denominator_poles = [round(-b.real) for b in denominators if is_nonpositive_integer(b)]
    if len(numerator_poles) > len(denominator_poles):
        return math.inf
    if len(numerator_poles) < len(denominator_poles):
        return 0.0

    residues = math.prod(math.factorial(m) for m in denominator_poles) / math.prod(
        math.factorial(m) for m in numerator_poles
    )
    regular = gamma_ratio(
        [a for a in numerators if not is_nonpositive_integer(a)],
        [b for b in denominators if not is_nonpositive_integer(b)],
    )
    return residues * abs(regular)
