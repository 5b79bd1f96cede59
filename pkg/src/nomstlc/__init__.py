"""A nominal simply-typed lambda calculus with holes.

Atoms come in a capturable sort (DOWN) and a bindable sort (UP); unknowns
carry moderations ``X[b:=s]`` that record substitutions for DOWN atoms
until the unknown is instantiated.
"""
from .atoms import (
    EMPTY,
    IDENTITY,
    Atom,
    AtomSet,
    CofiniteDown,
    Finite,
    Permutation,
    Sort,
    atomset,
    compose,
    fresh_up,
    fresh_ups,
    invert,
    swap,
)
from .concrete import ParseError, SortError, load_source, parse_context, parse_l1, parse_l2, parse_source, parse_term, parse_type
from .reduction import BudgetExceeded, ReductionTrace, beta_eq, beta_step, is_normal, normalize, reduce_to_normal
from .subst import perm_subst, subst_l1, subst_l2, subst_one
from .syntax import (
    App,
    Arrow,
    AtomTerm,
    Base,
    Const,
    InvalidPermutation,
    Lam,
    Signature,
    Unk,
    alpha_eq,
    arrow,
    canonical,
    free_atoms,
    free_unknowns,
    perm_act,
    show,
    size,
)
from .typecheck import Context, TypingError, UntypedModerationDomain, check, diagnose, infer

__version__ = "0.1.0"
