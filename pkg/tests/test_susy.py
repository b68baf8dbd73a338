"""
Tests of the SUSY partner construction with a real antibound and a complex Gamow factorization state.
"""

import json

import numpy as np
import pytest

from ptscatter.errors import IntegrabilityError, NodeError
from ptscatter.numerics import Grid, fd_hamiltonian_residual, quadrature_l2
from ptscatter.scattering import PotentialSpec
from ptscatter.states import SinhCoshForm, derivative, evaluate, seed, state
from ptscatter.susy import (
    PartnerModel,
    evaluate_model,
    export_json,
    factorization_residual,
    intertwine_state,
    partner_ground_state,
    partner_potential,
    superpotential,
)

WELL = PotentialSpec.from_lambda(2.5)
BARRIER = PotentialSpec.from_lambda(0.5 + 3j)


def antibound_model():
    return PartnerModel.from_state(WELL, 2, 6)


def gamow_model():
    return PartnerModel.from_state(BARRIER, 1, 2)


def closed_form_model():
    # (1 + 7 sinh^2 x)(cosh x)^(5/2): the antibound state scaled to 1 at the origin
    return PartnerModel(SinhCoshForm((1.0, 0.0, 7.0), 2.5), -20.25, WELL)


def antibound_partner(x):
    c2 = np.cosh(2 * x)
    return -21 * (-161 + 55 * c2 + 120 / np.cosh(x) ** 2) / (2 * (5 - 7 * c2) ** 2)


def gamow_partner(x):
    c2 = np.cosh(2 * x)
    numerator = 15 * ((-95 + 236j) + (124 - 448j) * c2) - 15 * (37 - 148j) * np.cosh(4 * x)
    return numerator / (8 * np.cosh(x) ** 2 * ((1 + 6j) - (3 + 6j) * c2) ** 2)


def test_factorization_energies():
    assert antibound_model().epsilon == pytest.approx(-20.25)
    assert gamow_model().epsilon == pytest.approx((3 - 2.5j) ** 2)
    assert gamow_model().epsilon == pytest.approx(2.75 - 15j)
    assert antibound_model().base_lambda == 2.5


def test_epsilon_below_ground_energy():
    assert antibound_model().epsilon.real < WELL.ground_energy.real


@pytest.mark.parametrize("spec, series", [(WELL, 2), (PotentialSpec.from_lambda(0.5 + 2j), 1), (PotentialSpec.from_lambda(0.75), 1)])
def test_seed_model(spec, series):
    form = seed(spec, series)
    model = PartnerModel(form, spec.energy(series, 0), spec)
    x = np.linspace(-3.0, 3.0, 61)
    np.testing.assert_allclose(superpotential(model, x), form.mu * np.tanh(x), rtol=1e-13, atol=1e-15)
    assert np.max(factorization_residual(model, x)) <= 1e-12
    assert np.max(np.abs(intertwine_state(model, form, x))) <= 1e-12


def test_superpotential_of_even_state_vanishes_at_origin():
    assert superpotential(closed_form_model(), 0.0) == 0
    assert superpotential(antibound_model(), 0.0) == pytest.approx(0.0, abs=1e-14)


def test_superpotential_matches_finite_difference():
    model = gamow_model()
    x, h = 1.0, 1e-5
    form = model.factor_state
    numeric = (evaluate(form, x + h) - evaluate(form, x - h)) / (2 * h) / evaluate(form, x)
    assert abs(superpotential(model, x) - numeric) <= 1e-6


@pytest.mark.parametrize("model_factory", [antibound_model, gamow_model])
def test_factorization_residual(model_factory):
    x = np.linspace(-3.0, 3.0, 121)
    assert np.max(factorization_residual(model_factory(), x)) <= 1e-9


def test_factorization_residual_scalar():
    value = factorization_residual(antibound_model(), 0.4)
    assert isinstance(value, float)
    assert value <= 1e-9


def test_antibound_partner_potential_closed_form():
    x = np.linspace(-3.0, 3.0, 100)
    np.testing.assert_allclose(partner_potential(antibound_model(), x), antibound_partner(x), rtol=1e-9, atol=1e-9)
    assert partner_potential(antibound_model(), 0.0) == pytest.approx(-36.75, abs=1e-9)


def test_partner_potential_does_not_depend_on_normalization():
    x = np.linspace(-2.0, 2.0, 21)
    np.testing.assert_allclose(
        partner_potential(closed_form_model(), x), partner_potential(antibound_model(), x), rtol=1e-11, atol=1e-11
    )


def test_gamow_partner_potential_closed_form():
    x = np.linspace(-3.0, 3.0, 25)
    np.testing.assert_allclose(partner_potential(gamow_model(), x), gamow_partner(x), rtol=1e-9, atol=1e-9)
    assert partner_potential(gamow_model(), 0.0) == pytest.approx(-3.75 - 30j, abs=1e-9)


@pytest.mark.parametrize("model_factory", [antibound_model, gamow_model])
def test_partner_potential_is_flat_at_infinity(model_factory):
    model = model_factory()
    for x in (-15.0, 15.0):
        assert abs(partner_potential(model, x)) <= 1e-6


@pytest.mark.parametrize("model_factory", [antibound_model, gamow_model])
def test_partner_data_far_from_origin(model_factory):
    # P(sinh x) itself is beyond the floating range here
    model = model_factory()
    x = np.array([-300.0, -120.0, 120.0, 300.0])
    partner = partner_potential(model, x)
    assert np.all(np.isfinite(partner))
    assert np.max(np.abs(partner)) <= 1e-6
    form = model.factor_state
    assert superpotential(model, 120.0) == pytest.approx(form.degree + form.mu, rel=1e-9)
    assert superpotential(model, -120.0) == pytest.approx(-(form.degree + form.mu), rel=1e-9)
    ground = partner_ground_state(model, x)
    assert np.all(np.isfinite(ground))
    assert np.max(np.abs(ground)) <= 1e-100
    assert factorization_residual(model, 120.0) <= 1e-8


def test_partner_ground_state_values():
    assert partner_ground_state(closed_form_model(), 0.0) == pytest.approx(1.0)
    assert partner_ground_state(antibound_model(), 0.0) == pytest.approx(7.0, rel=1e-11)


@pytest.mark.parametrize("model_factory", [antibound_model, gamow_model])
def test_partner_ground_state_is_eigenfunction(model_factory):
    model = model_factory()
    residual = fd_hamiltonian_residual(
        lambda x: partner_potential(model, x),
        lambda x: partner_ground_state(model, x),
        model.epsilon,
        Grid.symmetric(3.0, 1e-3),
        vectorized=True,
    )
    assert residual <= 1e-5


@pytest.mark.parametrize("model_factory", [closed_form_model, gamow_model])
def test_partner_ground_state_norm_converges(model_factory):
    model = model_factory()
    inner = quadrature_l2(lambda x: partner_ground_state(model, x), Grid.symmetric(20.0, 1e-3), vectorized=True)
    outer = quadrature_l2(lambda x: partner_ground_state(model, x), Grid.symmetric(25.0, 1e-3), vectorized=True)
    assert abs(outer - inner) <= 1e-8 * max(1.0, inner)


def test_factor_state_is_nodeless_on_dense_grid():
    x = np.linspace(-10.0, 10.0, 4001)
    for model in (antibound_model(), gamow_model()):
        values = np.abs(evaluate(model.factor_state, x))
        assert np.min(values) > 0.05


@pytest.mark.parametrize("n", [0, 1])
def test_intertwined_bound_states(n):
    model = antibound_model()
    bound = state(WELL, 2, n)
    residual = fd_hamiltonian_residual(
        lambda x: partner_potential(model, x),
        lambda x: intertwine_state(model, bound, x),
        WELL.energy(2, n),
        Grid.symmetric(3.0, 5e-5),
        vectorized=True,
    )
    assert residual <= 1e-5


def test_intertwine_uses_exact_derivative():
    model = antibound_model()
    bound = state(WELL, 2, 1)
    x = 0.3
    expected = -evaluate(derivative(bound), x) + superpotential(model, x) * evaluate(bound, x)
    assert intertwine_state(model, bound, x) == pytest.approx(expected, rel=1e-14)


def test_state_with_node_is_rejected():
    with pytest.raises(NodeError) as error:
        PartnerModel.from_state(WELL, 2, 3)
    assert error.value.x == pytest.approx(0.0, abs=1e-8)


def test_node_is_detected_during_evaluation():
    model = PartnerModel(state(WELL, 2, 3), WELL.energy(2, 3), WELL)
    with pytest.raises(NodeError):
        partner_potential(model, 0.0)
    with pytest.raises(NodeError):
        partner_ground_state(model, np.array([-0.5, 0.0, 0.5]))


def test_normalizable_state_is_rejected():
    with pytest.raises(IntegrabilityError):
        PartnerModel.from_state(WELL, 2, 0)


def test_evaluate_model_and_export():
    model = gamow_model()
    grid = Grid.from_count(-2.0, 2.0, 40)
    data = evaluate_model(model, grid)
    assert set(data) == {"x", "V_re", "V_im", "V0_re", "V0_im", "psi_re", "psi_im", "psi_abs"}
    assert data["V0_re"][20] == pytest.approx(-BARRIER.coupling.real, abs=1e-12)
    assert data["V0_im"][20] == 0
    assert data["V_re"][20] == pytest.approx(-3.75, abs=1e-9)
    assert data["V_im"][20] == pytest.approx(-30.0, abs=1e-9)
    np.testing.assert_allclose(data["psi_abs"], np.hypot(data["psi_re"], data["psi_im"]), rtol=1e-14)

    exported = json.loads(json.dumps(export_json(model, grid)))
    assert exported["epsilon"] == pytest.approx([2.75, -15.0])
    assert exported["base_lambda"] == [0.5, 3.0]
    assert SinhCoshForm.from_json(exported["factor_state"]) == model.factor_state
    assert len(exported["V_re"]) == grid.size
