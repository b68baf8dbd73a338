"""
This file contains the numerical checks that are independent of the closed
forms: a uniform grid, the finite-difference Hamiltonian residual, Numerov
integration with a shooting criterion, and Simpson quadrature of |psi|^2.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from ptscatter.config import DEFAULTS
from ptscatter.errors import GridError, NumerovStepError

SETTINGS = DEFAULTS["numerics"]


@dataclass(frozen=True)
class Grid:
    """
    Uniform grid x_min, x_min + step, ..., x_max.
    """

    x_min: float
    x_max: float
    step: float

    def __post_init__(self):
        if not self.step > 0:
            raise GridError(f"Grid step must be positive, got {self.step}")
        if not self.x_max > self.x_min:
            raise GridError(f"Grid needs x_max > x_min, got [{self.x_min}, {self.x_max}]")
        span = self.x_max - self.x_min
        count = round(span / self.step)
        if abs(count * self.step - span) > 1e-9 * span:
            raise GridError(f"Step {self.step} does not divide [{self.x_min}, {self.x_max}] uniformly")
        if count + 1 < SETTINGS["min_nodes"]:
            raise GridError(f"Grid has {count + 1} nodes, at least {SETTINGS['min_nodes']} are needed")

    @classmethod
    def symmetric(cls, half_width, step):
        return cls(-half_width, half_width, step)

    @classmethod
    def from_count(cls, x_min, x_max, steps):
        """
        Grid with `steps` intervals between x_min and x_max.
        """
        if steps < 1:
            raise GridError(f"Number of steps must be positive, got {steps}")
        return cls(x_min, x_max, (x_max - x_min) / steps)

    @classmethod
    def residual_default(cls):
        return cls.symmetric(SETTINGS["residual_half_width"], SETTINGS["residual_step"])

    @classmethod
    def quadrature_default(cls):
        return cls.symmetric(SETTINGS["quadrature_half_width"], SETTINGS["quadrature_step"])

    @property
    def size(self):
        return round((self.x_max - self.x_min) / self.step) + 1

    @property
    def nodes(self):
        return self.x_min + self.step * np.arange(self.size)

    @property
    def extended_nodes(self):
        # One extra node beyond each end, for central differences at the boundary nodes
        return self.x_min + self.step * np.arange(-1, self.size + 1)


def sample(function, nodes, vectorized=False):
    """
    Evaluate a function on the nodes: node by node, or in one call when it accepts arrays.
    """
    if vectorized:
        return np.broadcast_to(np.asarray(function(nodes), dtype=complex), nodes.shape).copy()
    return np.array([function(x) for x in nodes], dtype=complex)


def fd_hamiltonian_residual(potential, psi, energy, grid, vectorized=False):
    """
    Relative residual of -psi'' + V psi = E psi with the central second difference.
    Args:
        potential: Function x -> V(x).
        psi: Function x -> psi(x), evaluable one step beyond the grid ends.
        energy: Complex eigenvalue.
        grid: Grid.
        vectorized: Both functions accept numpy arrays.
    Returns:
        max_x |-D2 psi + V psi - E psi| / max(max_x |E psi|, floor)
    """
    energy = complex(energy)
    values = sample(psi, grid.extended_nodes, vectorized)
    center = values[1:-1]
    second = (values[2:] - 2.0 * center + values[:-2]) / grid.step**2
    residual = -second + sample(potential, grid.nodes, vectorized) * center - energy * center
    reference = max(float(np.max(np.abs(energy * center))), SETTINGS["residual_floor"])
    return float(np.max(np.abs(residual))) / reference


def numerov_integrate(potential, energy, grid, boundary, vectorized=False):
    """
    Integrate psi'' = -(E - V) psi from the left end with the Numerov scheme.
    Args:
        potential: Function x -> V(x).
        energy: Energy E.
        grid: Grid.
        boundary: (psi(x_min), psi(x_min + step)).
        vectorized: The potential accepts numpy arrays.
    Returns:
        Complex numpy array of psi on grid.nodes.
    """
    h2 = grid.step**2
    q = complex(energy) - sample(potential, grid.nodes, vectorized)
    worst = h2 * float(np.max(np.abs(q)))
    if worst >= SETTINGS["numerov_bound"]:
        raise NumerovStepError(
            f"Step {grid.step} too coarse for Numerov: step^2 max|E-V| = {worst:.3g} >= {SETTINGS['numerov_bound']}"
        )

    f = 1.0 + h2 * q / 12.0
    y = np.zeros(grid.size, dtype=complex)
    y[0], y[1] = boundary
    for i in range(1, grid.size - 1):
        y[i + 1] = ((12.0 - 10.0 * f[i]) * y[i] - f[i - 1] * y[i - 1]) / f[i + 1]
    return y


def shooting_tail_ratio(potential, energy, grid, boundary, vectorized=False):
    """
    |psi(x_max)| / max|psi|: small at an eigenvalue, 1 when the solution blows up.
    """
    y = np.abs(numerov_integrate(potential, energy, grid, boundary, vectorized))
    return float(y[-1] / y.max())


def quadrature_l2(psi, grid, vectorized=False):
    """
    Composite Simpson integral of |psi|^2 over the grid.
    """
    density = np.abs(sample(psi, grid.nodes, vectorized)) ** 2
    return float(simpson(density, x=grid.nodes))
