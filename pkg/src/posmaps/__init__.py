"""Positive unital maps on finite-dimensional *-algebras: peripheral spectra, eigenvector
structure, and the positivity hierarchy."""
from .config import DEFAULT_TOLERANCES, ToleranceSet
from .matalg import (AlgElement, BlockAlgebra, State, adjoint, hermitian_spectrum, jordan_product,
                     multiply, structure_flags)
from .supermap import (SuperMap, ampliate, apply, choi_matrix, compose, from_basis_images, map_flags,
                       power)
from .spectral import (SpectralData, eigendecompose, group_closure, is_ergodic,
                       peripheral_point_spectrum, peripheral_structure_tests)
from .classify import (Case, Classification, NotAnEigenvector, PatternViolation, ZeroVector,
                       classify_eigenvector, verify_classification)
from .checks import (CheckReport, cp_test, k_positivity_test, positivity_sample_test, random_psd,
                     schwarz_violation_search)
from .papermaps import (BuiltSystem, example1, example1_continuous, example2, flip_map, mat2_lift,
                        semigroup_law_check)

__version__ = "0.1.0"
