"""tdlclab: a desk-scale laboratory for groups acting on tree boundaries.

Everything runs at finite truncation depth with exact arithmetic, explicit
search bounds and replayable certificates.  See README.md for a tour.
"""
from __future__ import annotations

__version__ = "0.1.0"

from .boolalg import (
    CylinderClopen,
    DepthPartition,
    TreeShape,
    format_clopen,
    parse_clopen,
    regular,
    rooted,
)
from .boundary import (
    contraction_certificate,
    goodshrink_construct,
    half_tree_fixator,
    nub_window,
    rist_generators,
    tits_core_generators,
)
from .certificates import canonical_json, certificate, replay_matches, spec_hash
from .dynamics import (
    ActionContext,
    TwoCopyContext,
    check_minimal,
    free_semigroup_certificate,
    invariant_measure_search,
    minorising_degree,
    minorising_set,
    orbit_join,
    pair_compression,
    rotation_context,
    skewering_context,
    skewering_search,
    translation_rotation_context,
    two_copy_product_context,
)
from .errors import (
    ClosureCapExceeded,
    DecompositionNotFound,
    DisjointnessFailure,
    NotSkewering,
    NotTransitive,
    NotTransitiveAtRadius,
    PrecisionError,
    PrecisionExhausted,
    SearchExhausted,
    SpecFileError,
)
from .localstruct import (
    LocalClass,
    class_join,
    class_meet,
    class_perp,
    commensurated_check,
    decomposition_factors,
    fixed_point_scan,
    half_tree_stabiliser_context,
    local_class,
    perp,
    top_class,
    zero_class,
)
from .permgrp import (
    FiniteGroup,
    Perm,
    alternating_group,
    composition_factors,
    cyclic_group,
    dihedral_group,
    direct_product,
    melnikov_subgroup,
    parse_perm,
    pi_core,
    pi_residual,
    prosoluble_core,
    prosoluble_residual,
    quaternion_group,
    symmetric_group,
    wielandt_check,
    wreath_c2_tower,
)
from .tree import (
    BallIsometry,
    IsometrySpec,
    Portrait,
    SpecWord,
    cayley_abels_dot,
    colour_word_isometry,
    congruence_kernel,
    hyperbolic_isometry,
    level_group,
    level_order,
    local_prime_content,
    schreier_dot,
    sphere_orbit_classes,
)

__all__ = [
    # tree shapes and the clopen algebra
    "CylinderClopen",
    "DepthPartition",
    "TreeShape",
    "regular",
    "rooted",
    "format_clopen",
    "parse_clopen",
    # finite permutation groups
    "Perm",
    "FiniteGroup",
    "parse_perm",
    "cyclic_group",
    "symmetric_group",
    "alternating_group",
    "dihedral_group",
    "quaternion_group",
    "direct_product",
    "wreath_c2_tower",
    "pi_core",
    "pi_residual",
    "prosoluble_core",
    "prosoluble_residual",
    "melnikov_subgroup",
    "composition_factors",
    "wielandt_check",
    # tree isometries and level truncations
    "Portrait",
    "BallIsometry",
    "IsometrySpec",
    "SpecWord",
    "hyperbolic_isometry",
    "colour_word_isometry",
    "level_group",
    "level_order",
    "congruence_kernel",
    "local_prime_content",
    "sphere_orbit_classes",
    "schreier_dot",
    "cayley_abels_dot",
    # boundary half-trees and contraction
    "rist_generators",
    "half_tree_fixator",
    "contraction_certificate",
    "goodshrink_construct",
    "nub_window",
    "tits_core_generators",
    # boundary dynamics
    "ActionContext",
    "TwoCopyContext",
    "translation_rotation_context",
    "rotation_context",
    "skewering_context",
    "two_copy_product_context",
    "check_minimal",
    "skewering_search",
    "minorising_set",
    "minorising_degree",
    "pair_compression",
    "free_semigroup_certificate",
    "orbit_join",
    "invariant_measure_search",
    # local decomposition lattice
    "LocalClass",
    "local_class",
    "zero_class",
    "top_class",
    "class_meet",
    "class_join",
    "class_perp",
    "perp",
    "decomposition_factors",
    "fixed_point_scan",
    "commensurated_check",
    "half_tree_stabiliser_context",
    # certificates
    "certificate",
    "canonical_json",
    "spec_hash",
    "replay_matches",
    # errors
    "PrecisionError",
    "PrecisionExhausted",
    "ClosureCapExceeded",
    "NotTransitive",
    "NotTransitiveAtRadius",
    "DecompositionNotFound",
    "NotSkewering",
    "DisjointnessFailure",
    "SearchExhausted",
    "SpecFileError",
    "__version__",
]
