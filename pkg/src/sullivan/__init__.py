"""
Exact rational computations with Sullivan models: free graded algebras,
CDGAs and their morphisms, derivation complexes, relative Sullivan
extensions and twists over spheres, and the evaluation subgroup G
together with the relaxed subgroups gcal, tcal and scal.

Everything works over Q with ``fractions.Fraction``; no floating point.
"""

from .errors import ContractViolation, InternalInconsistency, SullivanError, ValidationError
from .linalg import Matrix, Subspace, kernel_basis, rank, rref
from .algebra import FreeCGA, Generator, Polynomial, graded_basis, hilbert_series
from .cdga import CDGA, Morphism, cohomology, identity, is_minimal, make_cdga, make_morphism, tensor
from .derivations import (DerComplex, Derivation, delta, der_homology, evaluation_subgroup,
                          gottlieb_group, parse_symbols, symbol_str)
from .fibrations import (KSExtension, SphereTwist, build_trivial_fibration, is_rationally_trivial,
                         is_tncz, make_ks, rho, verify_diagram)
from .lifting import build_symbolic, membership, solve_lift_degreewise
from .reports import ClassifyOptions, MapModel, classify, report_json
from .dsl import load, parse, print_document

__version__ = "0.1.0"
