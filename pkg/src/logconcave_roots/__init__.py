"""Random log-concave polynomials: exact samplers, a multiprecision root
solver, closed-form limit laws and root statistics."""

from .errors import ConvergenceError, DomainError
from .rootsolver import LogCoeffPoly, RootSet, SolverConfig, companion_oracle, find_roots
from .sampler import ConvexSample, ModelCoeffs, make_coeffs, make_rng, sample_convex
from .stats import EmpiricalRootMeasure
from .theory import RadialLaw

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "ConvexSample",
    "DomainError",
    "EmpiricalRootMeasure",
    "LogCoeffPoly",
    "ModelCoeffs",
    "RadialLaw",
    "RootSet",
    "SolverConfig",
    "companion_oracle",
    "find_roots",
    "make_coeffs",
    "make_rng",
    "sample_convex",
]
