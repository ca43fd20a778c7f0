"""Splittings of generalized Baumslag-Solitar groups and related 2-orbifold
bookkeeping: translation lengths, collapse lattices, and trees of cylinders."""

__version__ = "0.1.0"

from .errors import (
    ConeOrderTooSmall,
    CornerOrderTooSmall,
    Disconnected,
    DocumentSyntaxError,
    EmptyMixedWord,
    IdentityViolation,
    InvalidCircle,
    InvalidOrbifold,
    InvalidPath,
    MissingFlag,
    NotHyperbolic,
    SemanticError,
    SplittingsError,
    UnclassedEnd,
    ZeroLabel,
)
from .gbs import (
    Cross,
    Edge,
    GroupWord,
    LabeledGraph,
    Pow,
    axis_gap,
    ball_displacement_oracle,
    britton_reduce,
    bs,
    classify_elementary,
    concat,
    divisibility_criterion,
    graph,
    inverse,
    irreducibility_witness,
    is_elliptic,
    is_reduced,
    jsj_report,
    make_word,
    modular_homomorphism,
    power,
    reduce,
    sample_words,
    translation_length,
    validate_graph,
    validate_word,
)
from .orbifold import (
    BoundaryCircle,
    Orbifold2,
    boundary_components,
    enumerate_orbifolds,
    euler_characteristic,
    feature_count,
    has_finite_mcg,
    is_hyperbolic,
    is_small,
    validate,
)
from .report import Report, Verdict, rational_str
from .tree_arithmetic import (
    CollapseTree,
    MasterSplitting,
    collapse,
    elliptic_in_lcm,
    gcd,
    lcm,
    length_in_collapse,
    master,
    prime_factors,
    refines,
    squarefree_witnesses,
    verify_modularity,
)
from .cylinders import (
    CylinderAtlas,
    LocalClass,
    QuotientGraph,
    SkeletonEdge,
    SkeletonGraph,
    SkeletonVertex,
    collapse_non_A,
    cylinder_orbits,
    tree_of_cylinders_quotient,
    validate_atlas,
)
from .cli_io import Document, export_dot, parse, serialize
