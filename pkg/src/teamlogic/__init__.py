"""Team semantics for propositional and modal dependence logics.

Formulas are immutable trees in negation normal form; teams are sets of
assignments or sets of worlds. The package decides model checking,
satisfiability and validity exactly, translates dependence atoms away
via team-level disjunction, and carries a small DQBF toolbox whose
instances correspond to validity of propositional team formulas.
"""

from .errors import GuardLimitError, ParseError
from .formula import (
    And,
    Atom,
    Box,
    Dep,
    Diamond,
    Formula,
    Fragment,
    IDis,
    MDep,
    NegAtom,
    Not,
    Or,
    PropSymbol,
    classify,
    dual,
    fragment_within,
    is_pure_ml,
    nb_subf,
    render,
    size,
    symbols,
    to_nnf,
    walk,
)
from .parser import parse_modal, parse_prop
from .prop_team import (
    Assignment,
    PropTeam,
    max_team,
    pd_sat,
    pd_valid,
    pd_valid_bruteforce,
    pl_pointwise,
    pt_eval,
    team_from_dict,
    team_to_dict,
)
from .kripke import (
    KripkeStructure,
    bisimilar,
    disjoint_union,
    kripke_from_dict,
    kripke_to_dict,
    ml_point_eval,
    mt_eval,
    team_bisimilar,
)
from .translate import (
    Invalid,
    SelectionFunction,
    Valid,
    count_idis,
    eliminate_idis,
    emdl_to_mliv,
    emdl_valid,
    ml_valid,
    ml_valid_small_models,
    mliv_valid,
    pad_formula,
)
from .dqbf import (
    DqbfInstance,
    QbfInstance,
    SkolemWitness,
    dqbf_eval,
    dqbf_to_qbf,
    is_simple_constraint,
    parse_dqbf,
    parse_qbf,
    qbf_eval,
    qbf_to_dqbf,
    reduce_to_pd,
    render_dqbf,
    render_qbf,
    replay_witness,
)

__version__ = "0.1.0"

__all__ = [
    "And",
    "Assignment",
    "Atom",
    "Box",
    "Dep",
    "Diamond",
    "DqbfInstance",
    "Formula",
    "Fragment",
    "GuardLimitError",
    "IDis",
    "Invalid",
    "KripkeStructure",
    "MDep",
    "NegAtom",
    "Not",
    "Or",
    "ParseError",
    "PropSymbol",
    "PropTeam",
    "QbfInstance",
    "SelectionFunction",
    "SkolemWitness",
    "Valid",
    "bisimilar",
    "classify",
    "disjoint_union",
    "dqbf_eval",
    "dqbf_to_qbf",
    "dual",
    "count_idis",
    "eliminate_idis",
    "emdl_to_mliv",
    "emdl_valid",
    "fragment_within",
    "is_pure_ml",
    "is_simple_constraint",
    "kripke_from_dict",
    "kripke_to_dict",
    "max_team",
    "ml_point_eval",
    "ml_valid",
    "ml_valid_small_models",
    "mliv_valid",
    "mt_eval",
    "nb_subf",
    "pad_formula",
    "parse_dqbf",
    "parse_modal",
    "parse_prop",
    "parse_qbf",
    "pd_sat",
    "pd_valid",
    "pd_valid_bruteforce",
    "pl_pointwise",
    "pt_eval",
    "qbf_eval",
    "qbf_to_dqbf",
    "reduce_to_pd",
    "render",
    "render_dqbf",
    "render_qbf",
    "replay_witness",
    "size",
    "symbols",
    "team_bisimilar",
    "team_from_dict",
    "team_to_dict",
    "to_nnf",
    "walk",
]
