"""
This file contains the factorization (SUSY) construction of partner potentials.

A nodeless eigenfunction psi of H with eigenvalue epsilon, whose inverse is
square integrable, gives the superpotential W = psi'/psi and the factorization
H = A+ A- + epsilon with A-/+ = -/+ d/dx + W. The partner Hamiltonian
A- A+ + epsilon has the potential W^2 - W' + epsilon and one extra eigenstate
1/psi with energy epsilon. psi may be an antibound or a Gamow state, in which
case epsilon and the partner potential are complex.
"""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as poly

from ptscatter.config import DEFAULTS
from ptscatter.errors import IntegrabilityError, NodeError
from ptscatter.scattering import potential_value
from ptscatter.states import SinhCoshForm, derivative, evaluate, log_cosh, scaled_polyval, state

SETTINGS = DEFAULTS["susy"]


@dataclass(frozen=True)
class PartnerModel:
    """
    Factorization data: the factor state, its energy epsilon and the base potential.
    Use PartnerModel.from_state to build a validated model from a ladder state.
    """

    factor_state: SinhCoshForm
    epsilon: complex
    spec: object

    def __post_init__(self):
        object.__setattr__(self, "epsilon", complex(self.epsilon))

    @property
    def base_lambda(self):
        return self.spec.lam

    @classmethod
    def from_state(cls, spec, series, n):
        model = cls(state(spec, series, n), spec.energy(series, n), spec)
        model.validate()
        return model

    def validate(self):
        """
        Raise NodeError if P(sinh x) has a real zero and IntegrabilityError if 1/psi is not square integrable.
        """
        form = self.factor_state
        if form.is_zero:
            raise NodeError(0.0, "The zero form cannot factorize the Hamiltonian")
        if form.degree > 0:
            tolerance = SETTINGS["real_root_tolerance"]
            for root in poly.polyroots(form.poly):
                if abs(root.imag) <= tolerance * max(1.0, abs(root)):
                    raise NodeError(float(np.arcsinh(root.real)))
        if not form.tail_exponent > 0:
            raise IntegrabilityError(
                f"1/psi is not square integrable: psi ~ exp({form.tail_exponent:g}|x|) at infinity"
            )


def _node_checked(model, x):
    """
    P(sinh x) as scaled_polyval's (q, L), raising NodeError where P vanishes against its term magnitudes.
    """
    x = np.asarray(x, dtype=float)
    coeffs = model.factor_state.poly
    p, log_scale = scaled_polyval(coeffs, x)
    # same scale L: sum |a_j| |s|^j has the degree of P
    magnitude, _ = scaled_polyval(np.abs(coeffs), np.abs(x))
    nodes = np.abs(p) <= SETTINGS["node_tolerance"] * np.abs(magnitude)
    if np.any(nodes):
        raise NodeError(float(np.atleast_1d(x)[np.argmax(np.atleast_1d(nodes))]))
    return p, log_scale


def _squeeze(values):
    return complex(values) if np.ndim(values) == 0 else values


def _log_derivatives(model, x):
    # W = psi'/psi and psi''/psi, both as P-ratios: psi' = Q c^(mu-1), psi'' = R c^(mu-2)
    p, log_p = _node_checked(model, x)
    first = derivative(model.factor_state)
    second = derivative(first)
    q, log_q = scaled_polyval(first.poly, x)
    r, log_r = scaled_polyval(second.poly, x)
    log_c = log_cosh(x)
    w = q / p * np.exp(log_q - log_p - log_c)
    curvature = r / p * np.exp(log_r - log_p - 2.0 * log_c)
    return w, curvature


def superpotential(model, x):
    """
    W(x) = psi'(x)/psi(x) from the exact derivative of the factor state.
    """
    return _squeeze(_log_derivatives(model, x)[0])


def base_potential(model, x):
    return potential_value(model.spec, x)


def factorization_residual(model, x):
    """
    |W^2 + W' + epsilon - V|, using W^2 + W' = psi''/psi.
    """
    _, curvature = _log_derivatives(model, x)
    residual = np.abs(curvature + model.epsilon - base_potential(model, x))
    return float(residual) if np.ndim(residual) == 0 else residual


def partner_potential(model, x):
    """
    Partner potential W^2 - W' + epsilon = 2 W^2 - psi''/psi + epsilon.
    """
    w, curvature = _log_derivatives(model, x)
    return _squeeze(2.0 * w * w - curvature + model.epsilon)


def partner_ground_state(model, x):
    """
    1/psi(x), the extra eigenstate of the partner Hamiltonian with energy epsilon.
    """
    p, log_p = _node_checked(model, x)
    return _squeeze(np.exp(-model.factor_state.mu * log_cosh(x) - log_p) / p)


def intertwine_state(model, bound, x):
    """
    (A- bound)(x) = -bound'(x) + W(x) bound(x): a partner eigenfunction with the energy of bound.
    """
    w = superpotential(model, x)
    return _squeeze(-evaluate(derivative(bound), x) + w * evaluate(bound, x))


def evaluate_model(model, grid):
    """
    Sample the partner potential and the partner ground state on a grid.
    Returns:
        dict of numpy arrays: x, V_re, V_im, V0_re, V0_im, psi_re, psi_im, psi_abs.
        V0 is the base potential.
    """
    x = grid.nodes
    partner = partner_potential(model, x)
    base = base_potential(model, x)
    ground = partner_ground_state(model, x)
    return {
        "x": x,
        "V_re": partner.real,
        "V_im": partner.imag,
        "V0_re": base.real,
        "V0_im": base.imag,
        "psi_re": ground.real,
        "psi_im": ground.imag,
        "psi_abs": np.abs(ground),
    }


def export_json(model, grid):
    """
    JSON-ready dictionary of a model and its sampled partner data.
    """
    data = {key: values.tolist() for key, values in evaluate_model(model, grid).items()}
    data["epsilon"] = [model.epsilon.real, model.epsilon.imag]
    data["base_lambda"] = [model.base_lambda.real, model.base_lambda.imag]
    data["factor_state"] = model.factor_state.to_json()
    return data
