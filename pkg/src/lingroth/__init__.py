"""Finite bipresheaves of rings and modules, the linear Grothendieck
construction Gr(R), and the module equivalence, checked exhaustively."""

from ._report import (
    DEFAULT_BUDGET,
    AxiomError,
    BudgetExceeded,
    LingrothError,
    MalformedError,
    ValidationReport,
    Violation,
)
from .fincat import FinCategory, arrow_category, make_category, terminal_category, validate_category
from .algebra import FinAbGroup, FinCommRing, GroupHom, RingHom, cyclic_group, modular_ring, product_ring, trivial_ring
from .functors import AbValuedFunctor, ModuleStructure, RingValuedFunctor, validate_functor, validate_module_structure
from .bipresheaf import (
    AbBipresheaf,
    BipresheafMorphism,
    ModuleBipresheaf,
    RingBipresheaf,
    validate_bipresheaf,
    validate_bipresheaf_morphism,
)
from .grothendieck import (
    GrCategory,
    GrMorphism,
    check_sum_id,
    check_well_definedness,
    enumerate_pure_morphisms,
    gr_compose,
    gr_identity,
)
from .equivalence import GrAbBipresheaf, StructureFailureReport, phi, psi, roundtrip_check, validate_gr_bipresheaf
from .audit import Universe, find_nonabelian_witness, replay_finding
from .specfile import SpecDocument, SpecErrors, parse_spec, serialize

__version__ = "0.1.0"
