"""Exception hierarchy for the qdilog package.

Every error raised intentionally by this package derives from QdilogError,
so callers can distinguish "the input is outside what this code supports"
from genuine bugs.
"""

from __future__ import annotations


class QdilogError(Exception):
    """Base class for all package-specific errors."""


class ParameterDomainError(QdilogError):
    """A parameter is outside its mathematical domain (e.g. b with Re b <= 0)."""


class UnsupportedParameterError(QdilogError):
    """The parameter is mathematically fine but this implementation declines it.

    Example: a modulus on the unit circle (|q| = 1 with b real) is valid for
    the function itself but breaks the infinite-product route.
    """


class StripDomainError(QdilogError):
    """An argument handed to a strip-only routine lies outside the strip."""


class PoleProximityError(QdilogError):
    """Evaluation was requested too close to a pole of the function.

    Carries the offending point, the nearest lattice point, and their distance
    so callers can report or re-plan.
    """

    def __init__(self, z: complex, lattice_point: complex, distance: float):
        self.z = z
        self.lattice_point = lattice_point
        self.distance = distance
        super().__init__(
            f"evaluation point {z} is within {distance:.3e} of the pole at "
            f"{lattice_point}"
        )


class DegenerateParameterError(QdilogError):
    """A resonance or degeneracy makes the requested quantity ill-defined.

    Raised for q^(2k) = 1 resonances in pole/zero limit products and for
    integrand pole ladders that cannot be classified as moving up or down.
    """


class ContourUnsupportedError(QdilogError):
    """No admissible contour exists for the requested integral.

    Pinched pole sequences, non-decaying tails, and indentation radii that
    cannot clear a wrong-side pole all land here.
    """


class ConvergenceError(QdilogError):
    """The quadrature failed to reach the requested tolerance.

    The best value obtained and the achieved error estimate are attached so
    a caller may still decide to use the result.
    """

    def __init__(self, value, achieved_error: float, target: float, message: str = ""):
        self.value = value
        self.achieved_error = achieved_error
        self.target = target
        text = message or (
            f"quadrature reached error {achieved_error:.3e} "
            f"(target {target:.3e})"
        )
        super().__init__(text)
