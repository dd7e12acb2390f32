"""Composition synthesis by type inhabitation in combinatory logic with
intersection types and subtyping.

A repository of typed combinators is a generalized logic program; asking for
an inhabitant of a goal type evaluates it.  The engine answers with a tree
grammar describing every solution, which the analysis layer can test for
emptiness, finiteness, and uniqueness, or enumerate.
"""
from importlib import resources

from .types import (
    Arrow,
    Const,
    Ctor,
    Inter,
    OMEGA,
    OmegaType,
    Path,
    Type,
    UNIT,
    Var,
    arrow,
    canonicalize,
    intersect,
    organize,
    path_length,
    path_split,
    paths_at_least,
    render_organized,
    tuple_type,
    uc,
    uc_normalize,
)
from .subtyping import Taxonomy, atom_leq, equiv, is_subtype
from .repository import (
    Binding,
    Repository,
    RepositoryError,
    Substitution,
    SubstitutionSpaceExceeded,
    apply_substitution,
    atoms_of,
    instantiate,
    level0_images,
    make_repository,
)
from .syntax import ParseError, parse_repository, parse_type, render_repository, render_type
from .inhabitation import (
    DerivationCertificate,
    Goal,
    InhabitationError,
    NonterminalBudgetExceeded,
    Production,
    SearchConfig,
    SearchTimeout,
    TreeGrammar,
    certificate_for,
    expand_goal,
    inhabit,
    validate,
)
from .solutions import (
    Term,
    count_up_to,
    enumerate_terms,
    is_empty,
    is_finite,
    is_unique,
    render_term,
    typecheck_term,
)
from .gui import (
    AinRef,
    GuiRepository,
    GuiRepositoryError,
    GuifDef,
    GuifLeaf,
    InteractionNet,
    ResolvedNet,
    Transition,
    assemble,
    parse_gui_repository,
    queries_for,
    resolved_nets,
    synthesize_gui,
    translate,
)
from .dot import emit_dot

__version__ = "0.1.0"


def data_path(name: str):
    """Path to a bundled example file (tracking.clr, windowing.clr, meal.gar, ...)."""
    return resources.files(__name__) / "data" / name
