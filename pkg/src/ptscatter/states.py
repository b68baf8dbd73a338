"""
This file contains the exact wavefunction family f(x) = P(sinh x) (cosh x)^mu
and the operators acting on it.

Every bound, antibound and Gamow state of the potential is of this form. The
ladder operators B+ = cosh x d/dx + kappa(n-1) sinh x and
B- = -cosh x d/dx + kappa(n) sinh x, the derivative and the Hamiltonian all map
the family onto itself through the rule

    cosh x d/dx [P(s) (cosh x)^mu] = [P'(s)(1+s^2) + mu s P(s)] (cosh x)^mu,   s = sinh x

so everything here is polynomial arithmetic on the coefficients of P.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as poly

from ptscatter.config import DEFAULTS
from ptscatter.errors import (
    DegenerateRaiseError,
    ExponentMismatchError,
    FormOverflowError,
    IntegrabilityError,
)
from ptscatter.numerics import Grid, quadrature_l2

SETTINGS = DEFAULTS["states"]

# 1 + s^2
ONE_PLUS_S2 = np.array([1.0, 0.0, 1.0], dtype=complex)
# |x| beyond which |sinh x| > 1
SINH_UNIT_X = math.asinh(1.0)


def log_cosh(x):
    """
    ln cosh x without overflow for large |x|; scalar or numpy array.
    """
    x = np.asarray(x, dtype=float)
    return np.logaddexp(x, -x) - math.log(2.0)


def _log_abs_sinh(x):
    # |x| > 0 only
    x = np.abs(x)
    return x + np.log(-np.expm1(-2.0 * x)) - math.log(2.0)


def scaled_polyval(coeffs, x):
    """
    P(sinh x) split as (q, L) with P(sinh x) = q exp(L), L = 0 for |sinh x| <= 1.
    For |sinh x| > 1 the polynomial is summed in 1/sinh x, so q stays of order
    the leading coefficient at any x.
    Args:
        coeffs: Coefficients of P in increasing degree.
        x: Scalar or numpy array of positions.
    Returns:
        (q, L): complex and real numpy arrays shaped like x.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    degree = len(coeffs) - 1
    x = np.asarray(x, dtype=float)
    flat = np.atleast_1d(x)
    q = np.empty(flat.shape, dtype=complex)
    log_scale = np.zeros(flat.shape)

    large = np.abs(flat) > SINH_UNIT_X
    q[~large] = poly.polyval(np.sinh(flat[~large]), coeffs)
    if np.any(large):
        log_s = _log_abs_sinh(flat[large])
        sign = np.sign(flat[large])
        q[large] = sign**degree * poly.polyval(sign * np.exp(-log_s), coeffs[::-1])
        log_scale[large] = degree * log_s
    return q.reshape(x.shape), log_scale.reshape(x.shape)


@dataclass(frozen=True)
class SinhCoshForm:
    """
    f(x) = P(sinh x) (cosh x)^mu with P given by its coefficients in increasing degree.
    Trailing zero coefficients are stripped on construction; the zero form keeps a single 0.
    """

    coeffs: tuple
    mu: complex

    def __post_init__(self):
        values = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        values = poly.polytrim(values, 0) if values.size else np.zeros(1, dtype=complex)
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in values))
        object.__setattr__(self, "mu", complex(self.mu))

    @property
    def poly(self):
        return np.array(self.coeffs, dtype=complex)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    @property
    def parity(self):
        """
        +1 for even P, -1 for odd P, 0 for mixed parity (or the zero form).
        """
        values = np.abs(self.poly)
        cutoff = SETTINGS["trim_tolerance"] * values.max()
        even = np.any(values[0::2] > cutoff)
        odd = np.any(values[1::2] > cutoff)
        if even and not odd:
            return 1
        if odd and not even:
            return -1
        return 0

    @property
    def tail_exponent(self):
        # |f(x)| ~ exp(tail_exponent |x|) for |x| -> infinity
        return self.degree + self.mu.real

    @property
    def is_square_integrable(self):
        return not self.is_zero and self.tail_exponent < 0

    def monic(self):
        if self.is_zero:
            return self
        return self.scaled(1.0 / self.coeffs[-1])

    def scaled(self, factor):
        return SinhCoshForm(self.poly * complex(factor), self.mu)

    def aligned(self, m):
        """
        Same function written with exponent mu - 2m: P is multiplied by (1+s^2)^m.
        """
        if m < 0:
            raise ValueError(f"Alignment order must be non-negative, got {m}")
        return SinhCoshForm(poly.polymul(self.poly, poly.polypow(ONE_PLUS_S2, m)), self.mu - 2 * m)

    def __mul__(self, factor):
        return self.scaled(factor)

    __rmul__ = __mul__

    def __add__(self, other):
        a, b = align_pair(self, other)
        return SinhCoshForm(poly.polyadd(a.poly, b.poly), a.mu)

    def __sub__(self, other):
        a, b = align_pair(self, other)
        return SinhCoshForm(poly.polysub(a.poly, b.poly), a.mu)

    def __neg__(self):
        return self.scaled(-1.0)

    def to_json(self):
        return {
            "mu": [self.mu.real, self.mu.imag],
            "coeffs": [[c.real, c.imag] for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data):
        mu = complex(*data["mu"])
        return cls(tuple(complex(re, im) for re, im in data["coeffs"]), mu)


@dataclass(frozen=True)
class LadderSpec:
    """
    Ladder operators of index n in one series: B-_n lowers phi_n to phi_{n-1},
    B+_n raises phi_{n-1} to phi_n. kappa = i k_series(n).
    """

    series: int
    n: int
    kappa: complex = field(compare=False)

    @classmethod
    def for_index(cls, spec, series, n):
        return cls(series, n, spec.kappa(series, n))

    @property
    def seed_exponent(self):
        return self.kappa - self.n


def align_pair(f, g):
    """
    Rewrite f and g with a common exponent (the lower one); the exponents must differ by an even integer.
    """
    difference = f.mu - g.mu
    m = round(difference.real / 2.0)
    if abs(difference - 2 * m) > SETTINGS["trim_tolerance"] * max(1.0, abs(f.mu)):
        raise ExponentMismatchError(f"Exponents {f.mu} and {g.mu} do not differ by an even integer")
    if m >= 0:
        return f.aligned(m), SinhCoshForm(g.coeffs, f.mu - 2 * m)
    return SinhCoshForm(f.coeffs, g.mu + 2 * m), g.aligned(-m)


def _trimmed_sum(terms):
    """
    Sum coefficient arrays and zero every coefficient that is rounding noise
    relative to the magnitude of the terms it was formed from.
    """
    length = max(len(t) for t in terms)
    stacked = np.zeros((len(terms), length), dtype=complex)
    for i, t in enumerate(terms):
        stacked[i, : len(t)] = t
    total = stacked.sum(axis=0)
    scale = np.abs(stacked).sum(axis=0)
    total[np.abs(total) <= SETTINGS["trim_tolerance"] * scale] = 0
    return total


def _cosh_derivative_terms(coeffs, mu):
    # Unsummed pieces of P'(s)(1+s^2) + mu s P(s)
    derivative = poly.polyder(coeffs) if len(coeffs) > 1 else np.zeros(1, dtype=complex)
    return [derivative, poly.polymulx(poly.polymulx(derivative)), mu * poly.polymulx(coeffs)]


def seed(spec, series):
    """
    Lowest state of a series: P = 1 and mu = lambda (series 1) or 1 - lambda (series 2).
    """
    return SinhCoshForm((1.0,), spec.seed_exponent(series))


def apply_ladder(form, op, direction):
    """
    Apply B+_n (direction "raise") or B-_n (direction "lower") to a form.
    Args:
        form: SinhCoshForm with the seed exponent of op.series.
        op: LadderSpec giving the index n and kappa(n).
        direction: "raise" or "lower".
    Returns:
        SinhCoshForm with the same exponent.
    """
    if abs(form.mu - op.seed_exponent) > SETTINGS["trim_tolerance"] * max(1.0, abs(form.mu)):
        raise ExponentMismatchError(
            f"Form exponent {form.mu} does not match the series {op.series} seed exponent {op.seed_exponent}"
        )
    if form.is_zero:
        return form

    coeffs = form.poly
    shifted = poly.polymulx(coeffs)
    terms = _cosh_derivative_terms(coeffs, form.mu)
    if direction == "raise":
        leading = 2 * (op.n - 1) + 2 * form.mu
        if form.degree == op.n - 1 and abs(leading) <= SETTINGS["trim_tolerance"]:
            raise DegenerateRaiseError(
                f"B+_{op.n} of series {op.series} annihilates the leading term (mu={form.mu}): degenerate lambda"
            )
        terms.append((op.kappa - 1.0) * shifted)
    elif direction == "lower":
        terms = [-t for t in terms]
        terms.append(op.kappa * shifted)
    else:
        raise ValueError(f"direction must be 'raise' or 'lower', got '{direction}'")

    return SinhCoshForm(_trimmed_sum(terms), form.mu)


@lru_cache(maxsize=256)
def state(spec, series, n):
    """
    n-th state of a series: B+_n ... B+_1 applied to the seed, made monic after every raise.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if n == 0:
        return seed(spec, series)
    previous = state(spec, series, n - 1)
    return apply_ladder(previous, LadderSpec.for_index(spec, series, n), "raise").monic()


def evaluate(form, x):
    """
    P(sinh x) exp(mu ln cosh x) for scalar or array x.
    """
    x_values = np.asarray(x, dtype=float)
    q, log_scale = scaled_polyval(form.poly, x_values)
    with np.errstate(over="ignore", invalid="ignore"):
        values = q * np.exp(log_scale + form.mu * log_cosh(x_values))
    if not np.all(np.isfinite(values)):
        reach = float(np.max(np.abs(x_values)))
        raise FormOverflowError(
            f"Evaluating a degree {form.degree} form with mu={form.mu} at |x|={reach:g} exceeds the floating range"
        )
    if np.ndim(values) == 0:
        return complex(values)
    return values


def derivative(form):
    """
    d/dx [P (cosh x)^mu] = [P'(1+s^2) + mu s P] (cosh x)^(mu-1).
    """
    return SinhCoshForm(_trimmed_sum(_cosh_derivative_terms(form.poly, form.mu)), form.mu - 1.0)


def apply_hamiltonian(form, spec):
    """
    H f = -f'' - lambda(lambda-1) sech^2(x) f, returned at exponent mu - 2.
    """
    first = derivative(form)
    terms = [-t for t in _cosh_derivative_terms(first.poly, first.mu)]
    terms.append(-spec.coupling * form.poly)
    return SinhCoshForm(_trimmed_sum(terms), form.mu - 2.0)


def deviation(f, g):
    """
    Relative coefficient deviation max|f - g| / max(|f|, |g|) after exponent alignment.
    """
    a, b = align_pair(f, g)
    length = max(a.degree, b.degree) + 1
    pa = np.pad(a.poly, (0, length - a.degree - 1))
    pb = np.pad(b.poly, (0, length - b.degree - 1))
    scale = max(np.abs(pa).max(), np.abs(pb).max())
    if scale == 0:
        return 0.0
    return float(np.abs(pa - pb).max() / scale)


def proportionality(f, g):
    """
    Least-squares factor c with f ~ c g and the relative deviation of f from c g.
    Returns:
        (c, deviation)
    """
    a, b = align_pair(f, g)
    length = max(a.degree, b.degree) + 1
    pa = np.pad(a.poly, (0, length - a.degree - 1))
    pb = np.pad(b.poly, (0, length - b.degree - 1))
    if a.is_zero:
        return 0j, 0.0
    if b.is_zero:
        return 0j, math.inf
    factor = complex(np.vdot(pb, pa) / np.vdot(pb, pb))
    return factor, float(np.abs(pa - factor * pb).max() / np.abs(pa).max())


def equivalent(f, g, tol=None):
    tol = SETTINGS["equivalence_tolerance"] if tol is None else tol
    return proportionality(f, g)[1] <= tol


def diagonal_action(spec, series, n):
    # B0 phi_n = -kappa(n) phi_n
    return -spec.kappa(series, n)


def ladder_roundtrip_constant(spec, series, n):
    """
    B-_n B+_n phi_{n-1} = (lambda(lambda-1) - kappa(n) kappa(n-1)) phi_{n-1}.
    """
    if n < 1:
        raise ValueError(f"The round trip needs n >= 1, got {n}")
    return spec.coupling - spec.kappa(series, n) * spec.kappa(series, n - 1)


@dataclass
class Su11Report:
    series: int
    n_max: int
    tolerance: float
    # identity name -> list of (n, deviation)
    deviations: dict = field(default_factory=dict)

    def record(self, name, n, value):
        self.deviations.setdefault(name, []).append((n, value))

    @property
    def max_deviation(self):
        values = [value for rows in self.deviations.values() for _, value in rows]
        return max(values) if values else 0.0

    @property
    def failures(self):
        return [
            (name, n, value)
            for name, rows in self.deviations.items()
            for n, value in rows
            if not value <= self.tolerance
        ]

    @property
    def passed(self):
        return not self.failures


def check_su11(spec, series, n_max, tol=None):
    """
    Verify the su(1,1) commutators on the states of one series, with graded
    composition (each operator takes the index of the state it acts on):
        [B0, B+] phi_{n-1} = -B+ phi_{n-1}
        [B0, B-] phi_n = +B- phi_n
        (1/2)[B-, B+] phi_{n-1} = B0 phi_{n-1}
    Returns:
        Su11Report with the relative deviation of every identity for 1 <= n <= n_max.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be at least 1, got {n_max}")
    report = Su11Report(series, n_max, SETTINGS["equivalence_tolerance"] if tol is None else tol)

    for n in range(1, n_max + 1):
        lower_state = state(spec, series, n - 1)
        upper_state = state(spec, series, n)
        op = LadderSpec.for_index(spec, series, n)
        b0_lower = diagonal_action(spec, series, n - 1)
        b0_upper = diagonal_action(spec, series, n)

        raised = apply_ladder(lower_state, op, "raise")
        commutator = raised.scaled(b0_upper) - apply_ladder(lower_state.scaled(b0_lower), op, "raise")
        report.record("[B0,B+]", n, deviation(commutator, -raised))

        lowered = apply_ladder(upper_state, op, "lower")
        commutator = lowered.scaled(b0_lower) - apply_ladder(upper_state.scaled(b0_upper), op, "lower")
        report.record("[B0,B-]", n, deviation(commutator, lowered))

        forward = apply_ladder(raised, op, "lower")
        if n > 1:
            previous_op = LadderSpec.for_index(spec, series, n - 1)
            backward = apply_ladder(apply_ladder(lower_state, previous_op, "lower"), previous_op, "raise")
            forward = forward - backward
        report.record("[B-,B+]", n, deviation(forward.scaled(0.5), lower_state.scaled(b0_lower)))

    return report


def evaluate_normalized(form, x, half_width=None):
    """
    Evaluate a square-integrable form scaled to unit L2 norm on [-half_width, half_width].
    """
    if not form.is_square_integrable:
        raise IntegrabilityError(
            f"Form of degree {form.degree} with mu={form.mu} is not square integrable (tail exponent {form.tail_exponent:g})"
        )
    half_width = SETTINGS["normalization_window"] if half_width is None else half_width
    grid = Grid.symmetric(half_width, DEFAULTS["numerics"]["quadrature_step"])
    norm = math.sqrt(quadrature_l2(lambda t: evaluate(form, t), grid, vectorized=True))
    return evaluate(form, x) / norm
