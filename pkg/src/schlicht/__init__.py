"""Numerical toolkit for univalent-function classes on the unit disk.

Truncated-series arithmetic, the two coefficient-multiplier integral
operators with dual (multiplier / quadrature) backends, grid certification
of the starlike / convex / close-to-convex / quasi-convex / strongly
starlike / strongly convex classes and their operator-lifted variants, and
a deterministic generate-check-refine harness for the inclusion laws
relating them.
"""

from ._kernels import COMPILED_AVAILABLE, backend_name
from .classify import (ClassSpec, DEFAULT_GRID, DiskGrid, Verdict, certify,
                       certify_lifted_pair, class_from_spec, hypothesis_margin)
from .errors import (ConfigError, GenerationExhausted, InvalidParameter,
                     MissingCompanion, NearZeroConstantTerm, OutsideDisk,
                     QuadratureFailure, SchlichtError)
from .functions import (AnalyticFunction, EvalTriple, function_from_spec,
                        generate_perturbed, half_plane, identity, koebe,
                        z_times_derivative)
from .harness import (CATALOG, ExperimentConfig, THEOREM_IDS,
                      generate_members, run_catalog, run_theorem)
from .operators import (OperatorSpec, apply_multiplier, apply_quadrature,
                        apply_to_function, bernardi, check_identity, jks,
                        operator_from_spec)
from .series import (CoefficientSeries, TailBound, cauchy_product, evaluate,
                     reciprocal, z_derivative)

__version__ = "0.1.0"

__all__ = [
    "AnalyticFunction", "CATALOG", "COMPILED_AVAILABLE", "ClassSpec",
    "CoefficientSeries", "ConfigError", "DEFAULT_GRID", "DiskGrid",
    "EvalTriple", "ExperimentConfig", "GenerationExhausted",
    "InvalidParameter", "MissingCompanion", "NearZeroConstantTerm",
    "OperatorSpec", "OutsideDisk", "QuadratureFailure", "SchlichtError",
    "THEOREM_IDS", "TailBound", "Verdict", "apply_multiplier",
    "apply_quadrature", "apply_to_function", "backend_name", "bernardi",
    "cauchy_product", "certify", "certify_lifted_pair", "check_identity",
    "class_from_spec", "evaluate", "function_from_spec", "generate_members",
    "generate_perturbed", "half_plane", "hypothesis_margin", "identity",
    "jks", "koebe", "operator_from_spec", "reciprocal", "run_catalog",
    "run_theorem", "z_derivative", "z_times_derivative",
]
