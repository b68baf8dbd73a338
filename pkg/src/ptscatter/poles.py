"""
This file contains the pole structure of the S matrix: analytic enumeration of
the two pole series, classification in the complex k plane, resonance
energies and widths, and an independent Newton refinement of each pole.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

from ptscatter.complexfn import digamma, rgamma, trigamma
from ptscatter.config import DEFAULTS
from ptscatter.errors import (
    ClassificationError,
    GammaPoleError,
    PoleRefinementError,
    RegimeError,
    SeedDivergenceError,
    TransferPoleError,
)
from ptscatter.scattering import Regime, inverse_transmission

SETTINGS = DEFAULTS["poles"]


class PoleKind(Enum):
    BOUND = "Bound"
    ANTIBOUND = "Antibound"
    RESONANCE_DECAYING = "ResonanceDecaying"
    RESONANCE_GROWING = "ResonanceGrowing"
    NULL_AT_ORIGIN = "NullAtOrigin"
    ZERO_OF_S = "ZeroOfS"


@dataclass(frozen=True)
class PoleRecord:
    """
    One entry of a pole series: k = k_series(n) and its energy k^2.
    duplicate_of names the (series, n) record describing the same physical pole, if any.
    """

    series: int
    n: int
    k: complex
    kind: PoleKind
    duplicate_of: Optional[Tuple[int, int]] = None
    energy: complex = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "energy", self.k * self.k)


def classify(k):
    """
    Classify a pole location: imaginary axis gives Bound/Antibound, the lower
    half plane gives decaying (Re k > 0) or growing (Re k < 0) Gamow states.
    """
    k = complex(k)
    tol = SETTINGS["axis_tolerance"]
    if abs(k.real) <= tol and abs(k.imag) <= tol:
        raise ClassificationError(f"Ambiguous classification at k={k}: both components below {tol}")

    scale = max(1.0, abs(k))
    if abs(k.real) <= tol * scale:
        return PoleKind.BOUND if k.imag > 0 else PoleKind.ANTIBOUND
    if k.imag < -tol * scale:
        return PoleKind.RESONANCE_DECAYING if k.real > 0 else PoleKind.RESONANCE_GROWING
    raise ClassificationError(
        f"k={k} is not an admissible S-matrix pole: off the imaginary axis in the closed upper half plane"
    )


def _integer_poles(spec, n_max):
    # Reflectionless case: bound poles, the null point k=0 and zeros of S; nothing else
    lam = round(spec.lam.real)
    records = []
    for n in range(n_max + 1):
        if n <= lam - 2:
            kind = PoleKind.BOUND
        elif n == lam - 1:
            kind = PoleKind.NULL_AT_ORIGIN
        elif n <= 2 * lam - 2:
            kind = PoleKind.ZERO_OF_S
        else:
            break
        records.append(PoleRecord(2, n, spec.pole_momentum(2, n), kind))
    return records


def enumerate_poles(spec, n_max):
    """
    List k_1(n) and k_2(n) for 0 <= n <= n_max, ordered by n with series 1 first.
    Args:
        spec: PotentialSpec.
        n_max: Highest order to include.
    Returns:
        records: List of PoleRecord.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be non-negative, got {n_max}")
    if spec.regime is Regime.FREE:
        return []
    if spec.is_integer:
        return _integer_poles(spec, n_max)

    shift = round(2.0 * spec.lam.real - 1.0) if spec.is_half_odd else None
    records = []
    for n in range(n_max + 1):
        for series in (1, 2):
            k = spec.pole_momentum(series, n)
            duplicate_of = (2, n + shift) if series == 1 and shift is not None else None
            records.append(PoleRecord(series, n, k, classify(k), duplicate_of))
    return records


def unique_poles(records):
    return [record for record in records if record.duplicate_of is None]


def resonance_parameters(ell, n):
    """
    Resonance energy and width of the n-th pole pair of the high barrier:
    E_R = ell^2 - gamma^2 and Gamma = 4 ell gamma with gamma = n + 1/2.
    """
    if ell <= 0:
        raise ValueError(f"ell must be positive, got {ell}")
    gamma_n = n + 0.5
    return ell**2 - gamma_n**2, 4.0 * ell * gamma_n


def pole_energy_decomposition(k):
    """
    Split k^2 = E_R - i Gamma/2 into (E_R, Gamma).
    """
    energy = complex(k) ** 2
    return energy.real, -2.0 * energy.imag


def _pole_factor(spec, k):
    # 1/(Gamma(lambda-ik) Gamma(1-lambda-ik)): the entire part of 1/t, zero exactly at the poles of S
    ik = 1j * k
    return rgamma(spec.lam - ik) * rgamma(1.0 - spec.lam - ik)


def _log_derivative(spec, k):
    # g'/g for g = _pole_factor
    ik = 1j * k
    return 1j * (digamma(spec.lam - ik) + digamma(1.0 - spec.lam - ik))


def _log_derivative_slope(spec, k):
    ik = 1j * k
    return trigamma(spec.lam - ik) + trigamma(1.0 - spec.lam - ik)


def _multiplicity(spec, k, log_derivative):
    # Near a zero of order m, -L^2/L' -> m; only simple and double zeros occur here
    estimate = -(log_derivative**2) / _log_derivative_slope(spec, k)
    return 2 if abs(estimate - 2.0) < 0.5 else 1


def _residual(spec, k):
    try:
        return abs(inverse_transmission(spec, k))
    except TransferPoleError:
        return math.inf


def refine_pole(spec, k0, max_iterations=None):
    """
    Newton refinement of a zero of 1/t(k) starting from k0.

    1/t = Gamma(1-ik)Gamma(-ik) g(k) with g = 1/(Gamma(lambda-ik)Gamma(1-lambda-ik)).
    The poles of S are the zeros of g, so the iteration runs on g, which has no
    poles of its own: g'/g = i[psi(lambda-ik) + psi(1-lambda-ik)]. The step is
    weighted by the estimated multiplicity and damped to SETTINGS["max_step"];
    convergence is still judged on |1/t|.
    Args:
        spec: PotentialSpec (not an integer lambda below the real axis, where S has zeros).
        k0: Complex seed near a pole.
        max_iterations: Optional override of the iteration cap.
    Returns:
        k: Refined complex pole position.
    """
    k0 = complex(k0)
    if spec.is_integer and k0.imag < 0.5:
        raise RegimeError(f"Integer lambda={spec.lam.real:g} has zeros, not poles, near k={k0}")

    max_iterations = SETTINGS["max_iterations"] if max_iterations is None else max_iterations
    k = k0
    for iteration in range(max_iterations):
        if _pole_factor(spec, k) == 0:
            return k
        try:
            log_derivative = _log_derivative(spec, k)
            step = -_multiplicity(spec, k, log_derivative) / log_derivative
        except GammaPoleError as error:
            raise PoleRefinementError(f"Newton iterate hit a singularity at k={k}") from error

        if abs(step) > SETTINGS["max_step"]:
            step *= SETTINGS["max_step"] / abs(step)
        k += step

        if abs(k - k0) > SETTINGS["max_seed_distance"]:
            raise SeedDivergenceError(f"Newton iteration left the seed {k0}: k={k} after {iteration + 1} steps")
        if abs(step) <= SETTINGS["step_tolerance"] * max(1.0, abs(k)):
            return k

    residual = _residual(spec, k)
    if residual < SETTINGS["residual_tolerance"]:
        return k
    raise PoleRefinementError(
        f"Newton refinement from k0={k0} did not converge in {max_iterations} iterations (|1/t|={residual:.3e})"
    )
