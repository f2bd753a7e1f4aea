"""Computations in free nilpotent pro-l groups via truncated Magnus
expansions, with the group-cohomology obstruction layer on top: boundary maps
delta_n, Massey products with explicit defining systems, and the resulting
restrictions on sections of the fundamental exact sequence of the
thrice-punctured line."""

from .actions import (
    CharacterAction,
    MonodromyAction,
    enumerate_monodromy_cocycles,
    monodromy_from_conjugation,
)
from .coeff import ModulusContext, Residue, binomial, integer_binomial, invert
from .cohomology import (
    CentralExtension,
    Cochain,
    GModule,
    TwistedCocycle,
    coboundary,
    cup,
    delta_n,
    enumerate_twisted_cocycles,
    extension_two_cocycle,
    has_lift,
    is_coboundary,
    is_cocycle,
    lie_quotient_module,
)
from .errors import *  # noqa: F401,F403
from .groups import Character, FiniteGroup
from .magnus import (
    FreeWord,
    LieBasis,
    TruncatedSeries,
    from_hall_coordinates,
    group_commutator,
    hall_basis,
    hall_coordinates,
    invert_group,
    lie_decompose,
    magnus_coefficient,
    magnus_embed,
    multiply,
    power,
    substitute,
    witt_number,
)
from .massey import (
    DefiningSystem,
    canonical_system,
    massey_value,
    mu_pushforward,
    system_index_pairs,
    validate,
    vanishes,
)
from .obstruction import (
    AbelianizedClassPair,
    CorollaryTarget,
    IotaTangentialPoint,
    MultExpr,
    RationalPoint,
    TangentialPoint,
    concretize,
    f_ab_coefficients,
    kappa_ab,
    section_obstructions,
    single_two_indices,
    vanishing_corollary_targets,
)
from .unipotent import UnipotentMatrix, act, build_A, in_U_i0j0, phi_J

__version__ = "0.1.0"
