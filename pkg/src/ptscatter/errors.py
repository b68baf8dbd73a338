"""
This file contains the exceptions raised by the package.

DomainError covers invalid inputs and mathematical singularities (Gamma poles,
poles of S, nodes of a factorization state). ConvergenceError covers iterative
procedures that did not reach their tolerance. The CLI maps them to exit codes.
"""


class PoschlTellerError(Exception):
    pass


class DomainError(PoschlTellerError, ValueError):
    pass


class ConvergenceError(PoschlTellerError, ArithmeticError):
    pass


class RegimeError(DomainError):
    pass


class GammaPoleError(DomainError):
    def __init__(self, z, message=None):
        self.z = z
        super().__init__(message or f"Gamma function pole at z={z}")


class HypergeometricParameterError(DomainError):
    pass


class TransferPoleError(DomainError):
    def __init__(self, entry, k, message=None):
        self.entry = entry
        self.k = k
        super().__init__(message or f"Transfer matrix entry {entry} is singular at k={k}")


class AtPoleError(DomainError):
    def __init__(self, k, t22):
        self.k = k
        self.t22 = t22
        super().__init__(f"k={k} is a pole of the S matrix (|T22|={abs(t22):.3e})")


class ExponentMismatchError(DomainError):
    pass


class DegenerateRaiseError(DomainError):
    pass


class FormOverflowError(DomainError):
    pass


class ClassificationError(DomainError):
    pass


class NodeError(DomainError):
    def __init__(self, x, message=None):
        self.x = x
        super().__init__(message or f"Factorization state has a node at x={x:.12g}")


class IntegrabilityError(DomainError):
    pass


class GridError(DomainError):
    pass


class NumerovStepError(DomainError):
    pass


class HypergeometricConvergenceError(ConvergenceError):
    pass


class PoleRefinementError(ConvergenceError):
    pass


class SeedDivergenceError(ConvergenceError):
    pass
