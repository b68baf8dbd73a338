"""
Tests of the potential regimes, the transfer and S matrices and the scattering coefficients.
"""

import cmath
import math

import numpy as np
import pytest

from ptscatter.errors import AtPoleError, RegimeError
from ptscatter.numerics import Grid, fd_hamiltonian_residual, numerov_integrate
from ptscatter.scattering import (
    PotentialSpec,
    Regime,
    amplitudes,
    asymptotic_amplitudes,
    closed_form_coefficients,
    coefficients,
    general_wavefunction,
    inverse_transmission,
    potential_value,
    rescale,
    s_matrix,
    transfer_matrix,
    transmission_modulus,
)

SAMPLED_LAMBDAS = [3.5, 2.25, 0.75, 0.5 + 2j]


@pytest.mark.parametrize(
    "text, regime",
    [("3.5", Regime.WELL), ("0.75", Regime.LOW_BARRIER), ("0.5", Regime.LOW_BARRIER), ("1", Regime.FREE), ("0.5+2i", Regime.HIGH_BARRIER), ("0.5+2j", Regime.HIGH_BARRIER)],
)
def test_parse_regimes(text, regime):
    assert PotentialSpec.parse(text).regime is regime


@pytest.mark.parametrize("text", ["0.3", "-2", "2+1i", "0.6+2i", "abc", "0.5-2i"])
def test_parse_rejects_invalid_lambda(text):
    with pytest.raises(RegimeError):
        PotentialSpec.parse(text)


def test_high_barrier_constructor():
    spec = PotentialSpec.high_barrier(2.0)
    assert spec.lam == 0.5 + 2j
    assert spec.ell == 2.0
    with pytest.raises(RegimeError):
        PotentialSpec.high_barrier(0)


def test_regime_must_match_lambda():
    with pytest.raises(RegimeError):
        PotentialSpec(3.5, Regime.LOW_BARRIER)


def test_ell_only_for_high_barrier():
    with pytest.raises(RegimeError):
        PotentialSpec.from_lambda(3.5).ell


def test_parameter_classification():
    assert PotentialSpec.from_lambda(3).is_integer
    assert PotentialSpec.from_lambda(3.5).is_half_odd
    assert PotentialSpec.from_lambda(0.5).is_half_odd
    assert not PotentialSpec.from_lambda(2.25).is_half_odd
    assert not PotentialSpec.from_lambda(0.5 + 2j).is_half_odd


@pytest.mark.parametrize("lam, count", [(3.5, 3), (3, 2), (2.25, 2), (1.5, 1), (0.75, 0), (0.5 + 2j, 0)])
def test_bound_state_count(lam, count):
    assert PotentialSpec.from_lambda(lam).bound_state_count == count


def test_ground_energy():
    assert PotentialSpec.from_lambda(3.5).ground_energy == pytest.approx(-6.25)
    assert PotentialSpec.from_lambda(2.5).ground_energy == pytest.approx(-2.25)
    with pytest.raises(RegimeError):
        PotentialSpec.from_lambda(0.75).ground_energy


def test_potential_value():
    assert potential_value(PotentialSpec.from_lambda(3.5), 0.0) == pytest.approx(-8.75)
    assert potential_value(PotentialSpec.from_lambda(0.5 + 3j), 0.0) == pytest.approx(9.25)
    values = potential_value(PotentialSpec.from_lambda(3.5), np.array([-50.0, 0.0, 1.0]))
    assert values[0] == pytest.approx(0.0, abs=1e-40)
    assert values[2] == pytest.approx(-8.75 / math.cosh(1.0) ** 2, rel=1e-14)


def test_rescale():
    assert rescale(2.0, 3.0, 0.5) == (1.0, 6.0)
    with pytest.raises(ValueError):
        rescale(1.0, 1.0, 0.0)


@pytest.mark.parametrize("lam", SAMPLED_LAMBDAS)
def test_s_matrix_unitarity(lam):
    spec = PotentialSpec.from_lambda(lam)
    rng = np.random.default_rng(7)
    for k in rng.uniform(0.05, 10.0, 100):
        assert s_matrix(spec, k).unitarity_defect() <= 1e-10


@pytest.mark.parametrize("lam", [3.5, 2.25, 0.75])
def test_transfer_determinant(lam):
    spec = PotentialSpec.from_lambda(lam)
    rng = np.random.default_rng(7)
    for k in rng.uniform(0.05, 10.0, 100):
        assert abs(transfer_matrix(spec, k).det - 1.0) <= 1e-10


def test_transfer_determinant_high_barrier():
    # Below k ~ 1, |T22|^2 ~ cosh^2(pi ell) / sinh^2(pi k) and det T loses digits to cancellation
    spec = PotentialSpec.from_lambda(0.5 + 2j)
    rng = np.random.default_rng(7)
    for k in rng.uniform(1.0, 10.0, 100):
        assert abs(transfer_matrix(spec, k).det - 1.0) <= 1e-10
    for k in rng.uniform(0.05, 1.0, 50):
        assert abs(transfer_matrix(spec, k).det - 1.0) <= 1e-7


@pytest.mark.parametrize("lam", SAMPLED_LAMBDAS)
def test_transfer_determinant_complex_momentum(lam):
    spec = PotentialSpec.from_lambda(lam)
    rng = np.random.default_rng(11)
    for k in rng.uniform(1.0, 4.0, 25) + 1j * rng.uniform(-0.4, 0.4, 25):
        assert abs(transfer_matrix(spec, k).det - 1.0) <= 1e-10


@pytest.mark.parametrize("lam", [0.75, 0.5 + 2j, 3.5, 2.25])
def test_coefficients_match_closed_forms(lam):
    spec = PotentialSpec.from_lambda(lam)
    for k in np.linspace(0.05, 8.0, 200):
        R, T = coefficients(spec, k)
        R_closed, T_closed = closed_form_coefficients(spec, k)
        assert R == pytest.approx(R_closed, abs=1e-10)
        assert T == pytest.approx(T_closed, abs=1e-10)
        assert abs(R + T - 1.0) <= 1e-12


@pytest.mark.parametrize("lam", SAMPLED_LAMBDAS)
@pytest.mark.parametrize("k", [240.0, 300.0, 400.0])
def test_coefficients_at_large_momentum(lam, k):
    spec = PotentialSpec.from_lambda(lam)
    R, T = coefficients(spec, k)
    assert R == pytest.approx(0.0, abs=1e-12)
    assert T == pytest.approx(1.0, abs=1e-12)
    assert closed_form_coefficients(spec, k) == pytest.approx((R, T), abs=1e-12)
    assert s_matrix(spec, k).unitarity_defect() <= 1e-10
    assert abs(transfer_matrix(spec, k).det - 1.0) <= 1e-10


def test_reflectionless_integer_lambda():
    spec = PotentialSpec.from_lambda(3)
    for k in np.linspace(0.05, 6.0, 60):
        R, T = coefficients(spec, k)
        assert T == pytest.approx(1.0, abs=1e-12)
        assert R == pytest.approx(0.0, abs=1e-12)


def test_free_regime_has_identity_transfer_matrix():
    T = transfer_matrix(PotentialSpec.from_lambda(1), 1.7)
    np.testing.assert_allclose(T.as_array(), np.eye(2), atol=1e-14)


def test_s_matrix_entries():
    spec = PotentialSpec.from_lambda(0.75)
    r, t = amplitudes(spec, 1.5)
    S = s_matrix(spec, 1.5)
    assert S.s11 == r
    assert S.s12 == t
    assert abs(r) ** 2 + abs(t) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_at_pole_error():
    spec = PotentialSpec.from_lambda(3.5)
    with pytest.raises(AtPoleError):
        s_matrix(spec, 2.5j)
    with pytest.raises(AtPoleError):
        amplitudes(spec, 0.5j)


@pytest.mark.parametrize("k", [0, 0.0, 1 + 1j])
def test_coefficients_need_real_nonzero_k(k):
    with pytest.raises(ValueError):
        coefficients(PotentialSpec.from_lambda(3.5), k)


def test_inverse_transmission_zero_at_pole():
    spec = PotentialSpec.from_lambda(3.5)
    assert inverse_transmission(spec, -0.5j) == 0
    assert inverse_transmission(spec, 1.5j) == 0
    assert abs(inverse_transmission(spec, 1.0)) > 0


def test_transmission_modulus_integer_lambda():
    spec = PotentialSpec.from_lambda(3)
    assert transmission_modulus(spec, 1j) == math.inf
    assert transmission_modulus(spec, 2j) == math.inf
    assert transmission_modulus(spec, -1j) == 0.0
    assert transmission_modulus(spec, -2j) == 0.0
    assert transmission_modulus(spec, -3j) == pytest.approx(0.1, rel=1e-12)
    assert transmission_modulus(spec, 0) == pytest.approx(1.0, rel=1e-12)
    assert transmission_modulus(spec, 1.3) == pytest.approx(1.0, rel=1e-12)


def test_transmission_modulus_regular_point():
    spec = PotentialSpec.from_lambda(0.75)
    _, t = amplitudes(spec, 0.8 - 0.3j)
    assert transmission_modulus(spec, 0.8 - 0.3j) == pytest.approx(abs(t), rel=1e-12)


@pytest.mark.parametrize("lam, k", [(3.5, 1.3), (0.75, 0.9), (0.5 + 2j, 2.2)])
def test_wavefunction_asymptotics(lam, k):
    spec = PotentialSpec.from_lambda(lam)
    A, B = 0.7 - 0.2j, -0.4 + 1.1j
    x = 12.0

    left = general_wavefunction(spec, k, A, B, -x)
    expected_left = A * cmath.exp(-1j * k * x) + B * cmath.exp(1j * k * x)
    assert abs(left - expected_left) <= 1e-6 * abs(expected_left)

    A_right, B_right = asymptotic_amplitudes(spec, k, A, B)
    right = general_wavefunction(spec, k, A, B, x)
    expected_right = A_right * cmath.exp(1j * k * x) + B_right * cmath.exp(-1j * k * x)
    assert abs(right - expected_right) <= 1e-6 * abs(expected_right)


@pytest.mark.parametrize("lam", [3.5, 0.75, 0.5 + 2j])
def test_wavefunction_matches_numerov(lam):
    spec = PotentialSpec.from_lambda(lam)
    k, A, B = 1.3, 0.7 - 0.2j, -0.4 + 1.1j
    grid = Grid.symmetric(12.0, 1e-3)
    nodes = grid.nodes
    boundary = tuple(general_wavefunction(spec, k, A, B, x) for x in nodes[:2])
    psi = numerov_integrate(lambda x: potential_value(spec, x), k * k, grid, boundary, vectorized=True)

    sampled = range(0, grid.size, 500)
    closed = np.array([general_wavefunction(spec, k, A, B, nodes[i]) for i in sampled])
    scale = np.max(np.abs(closed))
    assert np.max(np.abs(psi[list(sampled)] - closed)) <= 1e-8 * scale

    A_right, B_right = asymptotic_amplitudes(spec, k, A, B)
    x = nodes[-1]
    plane_waves = A_right * cmath.exp(1j * k * x) + B_right * cmath.exp(-1j * k * x)
    assert abs(psi[-1] - plane_waves) <= 1e-6 * scale


@pytest.mark.parametrize("lam", [2.25, 0.75, 0.5 + 2j])
def test_wavefunction_solves_schrodinger_equation(lam):
    spec = PotentialSpec.from_lambda(lam)
    k = 2.0
    residual = fd_hamiltonian_residual(
        lambda x: potential_value(spec, x),
        lambda x: general_wavefunction(spec, k, 1.0, 0.3 - 0.5j, x),
        k * k,
        Grid.symmetric(4.0, 1e-3),
    )
    assert residual <= 1e-5
