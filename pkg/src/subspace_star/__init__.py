"""Systems of subspaces on a star graph: G-construction, relations, classification."""

from .classification import (ClassificationReport, IndexPartition, RawAngles, classify,
                             normalize, paper_example, partition, representative,
                             verify_representative)
from .errors import (BlockStructureError, CriterionError, HypothesisNotCertified,
                     NotPositiveError, ParameterError, SymmetryError, ValidationError)
from .g_construction import (BlockOperator, block_condition_angle, block_condition_commute,
                             block_condition_orthogonal, construct, equivalent_inputs,
                             gram_roundtrip)
from .irreducibility import (commutant_dim, family_irreducible_Q, loop_family_irreducible,
                             path_operator, system_irreducible, wild_embed)
from .numerics import Tolerance, kernel_basis, projector_onto_columns, psd_check
from .star_b import (ProjectorFamily, StarParams, assemble, constrained_min,
                     kernel_dim_formula, kernel_vector, nonneg_criterion)
from .subspace_system import (GeneralizedDimension, GramOperator, SubspaceSystem, check_angle,
                              check_commute, check_orthogonal, generalized_dimension, gram,
                              verify_relations)

__version__ = "0.1.0"
