"""Exact Grothendieck-ring classes for compactified moduli of abelian covers
of marked genus-zero curves, computed two independent ways and compared."""

from .calculator import Calculator, VerificationReport, build_report, get_calculator
from .groups import (
    ClassInvolution,
    ConjugacyTable,
    FiniteGroup,
    build_group,
    class_involution,
    class_order,
    conjugacy_classes,
)
from .hurwitz import braid_generator, braid_orbits, enumerate_hurwitz, nielsen_count
from .motives import EPoly, MotivePoly, class_m0n, to_hodge_euler, to_poincare
from .smodules import (
    Atom,
    Generator,
    SModClass,
    Slot,
    compose,
    day_convolve,
    forget_class,
    shift_root,
    sm_quotient,
    unit_i1,
    unit_i2,
)
from .trees import (
    GerbyTree,
    NTree,
    Tree,
    automorphism_count,
    enumerate_stable_trees,
    export_dot,
    gerby_markings,
    is_admissible,
    stratum_class,
)

__version__ = "0.1.0"
