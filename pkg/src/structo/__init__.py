"""structo: finite equivalence relations, structurability, and the
universal constructions tying structures to class-bijective maps."""

from .errors import InputError, ContractViolation
from .eqrel import (
    FinER, PointMap, HomClass, classify_hom, enumerate_homs, disjoint_sum,
    cross_product, fiber_product, independent, independent_join,
    quotient_by_subrelation, er_isomorphism, point_names,
)
from .structures import (
    Language, FinStructure, StructuredER, pushforward, pullback,
    classwise_pullback, isomorphic, isomorphisms, aut_group,
    stabilizer_orbits, wdp_check, wdp_upto, age,
)
from .logic import (
    Theory, parse, print_formula, eval_formula, holds_classwise, models,
    first_model, satisfiable, structure_search, structurable, implies_star_n,
)
from .scott import CodedER, ScottTheory, code_er, scott_theory, structures_to_cb, cb_to_structure
from .constructions import (
    LtimesResult, ltimes, ltimes_universal_map, tensor, pairing,
    tensor_vs_cross, Cocycle, skew_product, cocycle_from_enumeration,
    verify_identities,
)
from .factorize import factor_ci, factor_smooth, factor_cs_smooth
from .fiber import (
    FiberSpace, FiberMap, tautological, hom_to_fiber_map, pullback_fiber,
    cocycle_of, fiberspace_of, fiber_factorize, fiber_ltimes,
)
from .theoryalg import (
    Interpretation, interp_apply, alpha_reduct, compose_interp,
    theory_tensor, theory_oplus, theory_cross, morleyize, coequalizer,
)
from .lattice import (
    FinPoset, FinLattice, check_projection, induced_preorder, retract_iso,
    prime_filters, priestley, check_equation, catalog_poset,
)
from .combinat import (
    SetFamily, Graphing, intersecting_check, family_reduce, finite_core,
    wdp_formulas, bipartite_graphing, k_subdivide, cycles_divisible,
)
