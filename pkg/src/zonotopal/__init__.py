"""Exact computation of external zonotopal spaces and their certificates.

Given a rational column configuration and a natural-number assignment on its
flats, the package enumerates the selected basis family, builds the explicit
polynomial space with homogeneous, inhomogeneous and Lagrange bases, computes
the vertex set of the associated hyperplane arrangement and its least space,
and certifies coherence and duality, all in exact rational arithmetic.
"""

from .arrangement import Vertex, arrangement_vertices, vertex_of, vertex_set
from .errors import (
    AssignmentError,
    GenerationExhaustedError,
    InputError,
    InternalConsistencyError,
    NoSolutionError,
    UnderdeterminedError,
    ValidationError,
    ZonotopalError,
)
from .groundset import (
    Configuration,
    GroundElement,
    build_configuration,
    generate_offsets,
    generate_y,
    required_y_size,
    verify_general_position,
    verify_generic_offsets,
)
from .lagrange import (
    LagrangeDatum,
    build_lagrange,
    evaluation_matrix,
    lagrange_family,
    survivor_bases,
    verify_lagrange,
)
from .leastmap import (
    CoherenceReport,
    IdealGenerators,
    annihilation_check,
    coherence_check,
    d_space,
    duality_gram,
    ideal_generators,
    kernel_dimension,
    least_space,
)
from .linalg import rank, rref, solve, vector
from .matroid import (
    Assignment,
    ExternalFamily,
    SplitNode,
    bases,
    closure,
    count_external_bases,
    external_bases,
    flats,
    greedy_set,
    independent_sets,
    split_tree,
    validate_assignment,
    verify_split_tree,
    y_prefix_length,
)
from .polynomials import (
    Poly,
    affine_form,
    apply_diff,
    format_poly,
    linear_form,
    monomials_upto,
    pairing,
    product,
)
from .pspaces import (
    PolySpace,
    PSpaceChecker,
    central_basis,
    central_hilbert,
    external_dim_check,
    hilbert_by_formula,
    homogeneous_basis,
    inhomogeneous_basis,
    membership,
    p_space,
    pk_generators,
    space_from_spanning,
)

__version__ = "0.1.0"
