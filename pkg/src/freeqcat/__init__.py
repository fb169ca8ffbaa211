"""Finite categories enriched in free quantaloids.

A category enriched in the free quantaloid on a finite category ``B`` is the
same thing as a faithful functor into ``B``.  This package enumerates
presheaves, decides totality and topologicity, and builds MacNeille
completions of such functors.
"""

from .base import FinCategory, Morphism, opposite_category, terminal_category, validate_category
from .harness import GenConfig, conformance, gen_fin_category, gen_qcategory
from .limits import (
    ColimitWitness,
    is_cototal,
    is_total,
    left_adjoint,
    preserves_colimits,
    preserves_limits,
    right_adjoint,
    singular,
    weighted_colimit,
    weighted_limit,
)
from .macneille import (
    completion_properties,
    fix_category,
    is_codense,
    is_cut,
    is_cut_cocontinuous,
    is_dense,
    macneille,
    sharp,
)
from .presheaves import (
    Copresheaf,
    Presheaf,
    copresheaf_category,
    enumerate_copresheaves,
    enumerate_presheaves,
    mu,
    presheaf_category,
)
from .qcategory import (
    QCategory,
    QFunctor,
    QObject,
    from_presentation,
    opposite_qcategory,
    to_presentation,
    validate_qcategory,
)
from .quantaloid import QHom, left_residual, q_compose, q_join, q_meet, right_residual
from .reports import CapExceededError, Decision, ValidationReport
from .topological import (
    LiftingProblem,
    final_lifting,
    generated_sieve,
    initial_lifting,
    is_topological,
    isbell_down,
    isbell_up,
    lifting_by_duality,
    main_theorem_check,
)

__all__ = [
    "CapExceededError",
    "ColimitWitness",
    "Copresheaf",
    "Decision",
    "FinCategory",
    "GenConfig",
    "LiftingProblem",
    "Morphism",
    "Presheaf",
    "QCategory",
    "QFunctor",
    "QHom",
    "QObject",
    "ValidationReport",
    "completion_properties",
    "conformance",
    "copresheaf_category",
    "enumerate_copresheaves",
    "enumerate_presheaves",
    "final_lifting",
    "fix_category",
    "from_presentation",
    "gen_fin_category",
    "gen_qcategory",
    "generated_sieve",
    "initial_lifting",
    "is_codense",
    "is_cototal",
    "is_cut",
    "is_cut_cocontinuous",
    "is_dense",
    "is_topological",
    "is_total",
    "isbell_down",
    "isbell_up",
    "left_adjoint",
    "left_residual",
    "lifting_by_duality",
    "macneille",
    "main_theorem_check",
    "mu",
    "opposite_category",
    "opposite_qcategory",
    "preserves_colimits",
    "preserves_limits",
    "presheaf_category",
    "q_compose",
    "q_join",
    "q_meet",
    "right_adjoint",
    "right_residual",
    "sharp",
    "singular",
    "terminal_category",
    "to_presentation",
    "validate_category",
    "validate_qcategory",
    "weighted_colimit",
    "weighted_limit",
]
