"""Numerical verification and sharpness adjudication for Bohr-Rogosinski
inequalities of operator-valued analytic functions on the unit disk."""
from .errors import BohrkitError
from .functionals import Estimate, FunctionalKind, GPoly, envelope_bound, functional_value, parse_kind
from .matcore import ComplexMatrix, spectral_norm
from .multidim import CircularDomain, compose_linear, homothety_verify
from .radii import RadiusSpec, solve_radius
from .series import OperatorSeries, blaschke_series, schur_samples
from .sharpness import adjudicate_radius, extremal_margin, violation_witness

__version__ = "0.1.0"
__all__ = ["BohrkitError", "CircularDomain", "ComplexMatrix", "Estimate", "FunctionalKind", "GPoly",
           "OperatorSeries", "RadiusSpec", "adjudicate_radius", "blaschke_series", "compose_linear",
           "envelope_bound", "extremal_margin", "functional_value", "homothety_verify", "parse_kind",
           "schur_samples", "solve_radius", "spectral_norm", "violation_witness"]
