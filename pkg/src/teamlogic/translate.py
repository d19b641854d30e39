"""Validity procedures and the elimination of modal dependence atoms.

The pipeline runs in three stages. A modal dependence atom unfolds into
a split over the argument value profiles, each branch pinning the target
constant with a team-level disjunction; that lands in modal logic
extended with team-level disjunction only. Team-level disjunctions then
distribute to the top: picking one side per occurrence leaves a plain
modal formula, the formula is equivalent to the team-level disjunction
of all such selections, and validity transfers to single selections
because countermodels of all selections combine into one disjoint-union
countermodel. Plain modal validity at the bottom is a tableau check on
the pointwise negation, and a refuting tableau branch is folded into a
filtrated countermodel of bounded size.

Every Invalid verdict returned here has been replayed through the team
semantics before being handed out; a verdict that fails its replay is a
bug and raises RuntimeError instead of surfacing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import GuardLimitError
from .formula import (
    And,
    Atom,
    Box,
    Dep,
    Diamond,
    Formula,
    IDis,
    MDep,
    NegAtom,
    Or,
    dual,
    is_pure_ml,
    nb_subf,
    render,
    symbols as formula_symbols,
    walk,
)
from .kripke import KripkeStructure, disjoint_union, ml_point_eval, mt_eval

DEFAULT_MAX_DEP_ARITY = 10
DEFAULT_MAX_SELECTIONS = 1 << 20
_MAX_IDIS_OCCURRENCES = 20


@dataclass(frozen=True)
class SelectionFunction:
    """One side choice per team-level disjunction occurrence.

    Occurrences are numbered by preorder position in the formula the
    selection was made for; "L" keeps the left side.
    """

    choices: tuple[str, ...]

    def __post_init__(self):
        if any(c not in ("L", "R") for c in self.choices):
            raise ValueError("choices must be 'L' or 'R'")

    def __len__(self) -> int:
        return len(self.choices)

    @property
    def bitstring(self) -> str:
        return "".join("0" if c == "L" else "1" for c in self.choices)


@dataclass(frozen=True)
class Valid:
    """A validity verdict; `witness` is the selection that proved it."""

    witness: SelectionFunction | None = None
    checked: int = 1

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Invalid:
    """A refuted formula with a replayed countermodel team."""

    model: KripkeStructure
    team: frozenset[str] = field(default_factory=frozenset)
    checked: int = 1

    def __bool__(self) -> bool:
        return False


def count_idis(f: Formula) -> int:
    return sum(1 for n in walk(f) if isinstance(n, IDis))


def _select(f: Formula, choices: tuple[str, ...], counter: list[int]) -> Formula:
    if isinstance(f, IDis):
        i = counter[0]
        counter[0] += 1
        # Both sides are walked so occurrences inside the dropped side
        # keep consuming their preorder positions.
        left = _select(f.left, choices, counter)
        right = _select(f.right, choices, counter)
        return left if choices[i] == "L" else right
    if isinstance(f, And):
        return And(_select(f.left, choices, counter), _select(f.right, choices, counter))
    if isinstance(f, Or):
        return Or(_select(f.left, choices, counter), _select(f.right, choices, counter))
    if isinstance(f, Diamond):
        return Diamond(_select(f.child, choices, counter))
    if isinstance(f, Box):
        return Box(_select(f.child, choices, counter))
    if isinstance(f, (Atom, NegAtom)):
        return f
    raise ValueError(
        f"cannot eliminate team-level disjunction under {type(f).__name__}"
    )


def eliminate_idis(f: Formula):
    """Yield (selection, plain formula) pairs, all-left selection first.

    The formula is equivalent to the team-level disjunction of every
    yielded formula. Selections are produced lazily in lexicographic
    order with "L" before "R".
    """
    m = count_idis(f)
    for raw in itertools.product("LR", repeat=m):
        sel = SelectionFunction(raw)
        yield sel, _select(f, raw, [0])


def pad_formula(g: Formula, n: int, p) -> Formula:
    """Conjoin `n` tautologies over `p` in front of `g`.

    Useful for growing a formula's size without changing its meaning.
    """
    sym = p if not isinstance(p, str) else Atom(p).sym
    taut = Or(Atom(sym), NegAtom(sym))
    if n <= 0:
        return g
    acc: Formula = taut
    for _ in range(n - 1):
        acc = And(acc, taut)
    return And(acc, g)


def emdl_to_mliv(f: Formula, *, max_dep_arity: int | None = DEFAULT_MAX_DEP_ARITY) -> Formula:
    """Unfold modal dependence atoms into splits over value profiles.

    dep(a1, .., an; b) becomes the splitting disjunction over all 2^n
    sign patterns of the arguments, each disjunct asserting the pattern
    pointwise and forcing b constant via a team-level disjunction of b
    and its pointwise negation. The result is modal logic with
    team-level disjunction and no dependence atoms, and it is
    team-equivalent to the input.
    """
    if isinstance(f, (Atom, NegAtom)):
        return f
    if isinstance(f, And):
        return And(
            emdl_to_mliv(f.left, max_dep_arity=max_dep_arity),
            emdl_to_mliv(f.right, max_dep_arity=max_dep_arity),
        )
    if isinstance(f, Or):
        return Or(
            emdl_to_mliv(f.left, max_dep_arity=max_dep_arity),
            emdl_to_mliv(f.right, max_dep_arity=max_dep_arity),
        )
    if isinstance(f, Diamond):
        return Diamond(emdl_to_mliv(f.child, max_dep_arity=max_dep_arity))
    if isinstance(f, Box):
        return Box(emdl_to_mliv(f.child, max_dep_arity=max_dep_arity))
    if isinstance(f, MDep):
        n = len(f.args)
        if max_dep_arity is not None and n > max_dep_arity:
            raise GuardLimitError(
                f"dependence atom of arity {n} exceeds the guard of "
                f"{max_dep_arity}; its unfolding has 2^{n} disjuncts"
            )
        constant_target = IDis(f.target, dual(f.target))
        disjuncts = []
        for pattern in itertools.product((True, False), repeat=n):
            conj: Formula | None = None
            for arg, positive in zip(f.args, pattern):
                lit = arg if positive else dual(arg)
                conj = lit if conj is None else And(conj, lit)
            branch = constant_target if conj is None else And(conj, constant_target)
            disjuncts.append(branch)
        out = disjuncts[0]
        for d in disjuncts[1:]:
            out = Or(out, d)
        return out
    if isinstance(f, Dep):
        raise ValueError(
            "propositional dependence atoms do not apply to worlds; "
            "use a modal dependence atom"
        )
    raise ValueError(f"not a modal dependence formula: {type(f).__name__}")


class _TableauNode:
    """A world of the model a successful tableau branch describes."""

    __slots__ = ("literals", "children")

    def __init__(self, literals: frozenset, children: tuple):
        self.literals = literals
        self.children = children


def _tableau(fs: frozenset, memo: dict) -> _TableauNode | None:
    """Satisfiability of a set of plain modal formulas, as a model or None.

    Conjunctions expand, disjunctions branch left first, and a fully
    expanded set spawns one child per diamond, carrying every boxed
    formula along. Memoizing on the formula set makes repeated subgoals
    free and shares submodels, so the result is a DAG.
    """
    if fs in memo:
        return memo[fs]
    pick = None
    for g in sorted((x for x in fs if isinstance(x, (And, Or))), key=render):
        pick = g
        break
    if isinstance(pick, And):
        result = _tableau(fs - {pick} | {pick.left, pick.right}, memo)
    elif isinstance(pick, Or):
        result = _tableau(fs - {pick} | {pick.left}, memo)
        if result is None:
            result = _tableau(fs - {pick} | {pick.right}, memo)
    else:
        positive = {x.sym for x in fs if isinstance(x, Atom)}
        negative = {x.sym for x in fs if isinstance(x, NegAtom)}
        if positive & negative:
            result = None
        else:
            boxed = [x.child for x in fs if isinstance(x, Box)]
            children = []
            result_literals = frozenset(
                {(s, True) for s in positive} | {(s, False) for s in negative}
            )
            result = _TableauNode(result_literals, ())
            for g in sorted((x.child for x in fs if isinstance(x, Diamond)), key=render):
                child = _tableau(frozenset([g, *boxed]), memo)
                if child is None:
                    result = None
                    break
                children.append(child)
            if result is not None:
                result.children = tuple(children)
    memo[fs] = result
    return result


def _model_from_tableau(root: _TableauNode, syms) -> tuple[KripkeStructure, str]:
    order: list[_TableauNode] = []
    index: dict[int, int] = {}
    queue = [root]
    while queue:
        node = queue.pop(0)
        if id(node) in index:
            continue
        index[id(node)] = len(order)
        order.append(node)
        queue.extend(node.children)
    worlds = [f"t{i}" for i in range(len(order))]
    edges = []
    for i, node in enumerate(order):
        for child in node.children:
            edges.append((worlds[i], worlds[index[id(child)]]))
    valuation = {
        sym: frozenset(
            worlds[i] for i, node in enumerate(order) if (sym, True) in node.literals
        )
        for sym in syms
    }
    return KripkeStructure(worlds, edges, valuation), worlds[0]


def _filtrate(m: KripkeStructure, root: str, sig: list[Formula]) -> tuple[KripkeStructure, str]:
    """Quotient a model by agreement on the formulas in `sig`.

    Literal and modal subformulas determine all Boolean combinations
    pointwise, so agreement on them is agreement on every subformula,
    and the quotient keeps their truth values. Classes are numbered by
    first appearance in world order, the root's class first.
    """
    world_order = [root] + [w for w in m.worlds if w != root]
    profiles: dict[str, tuple] = {
        w: tuple(ml_point_eval(m, w, s) for s in sig) for w in world_order
    }
    class_of: dict[str, int] = {}
    first_seen: dict[tuple, int] = {}
    for w in world_order:
        p = profiles[w]
        if p not in first_seen:
            first_seen[p] = len(first_seen)
        class_of[w] = first_seen[p]
    names = [f"w{i}" for i in range(len(first_seen))]
    edges = {
        (names[class_of[u]], names[class_of[v]]) for u, v in m.edges
    }
    valuation = {}
    for sym in m.valuation:
        # Every symbol occurs in some literal, so its atom is in sig.
        pos = sig.index(Atom(sym))
        valuation[sym] = frozenset(
            names[c] for p, c in first_seen.items() if p[pos]
        )
    return KripkeStructure(names, edges, valuation), names[class_of[root]]


def ml_valid(f: Formula) -> Valid | Invalid:
    """Validity of a plain modal formula.

    Searches a tableau for the pointwise negation; a closed tableau
    means valid, and an open branch is folded into a countermodel whose
    size is at most two to the number of literal and modal subformulas.
    The countermodel is replayed before being returned.
    """
    if not is_pure_ml(f):
        raise ValueError("ml_valid handles plain modal formulas only")
    negated = dual(f)
    tree = _tableau(frozenset([negated]), {})
    if tree is None:
        return Valid(witness=None, checked=1)
    syms = formula_symbols(f)
    raw_model, raw_root = _model_from_tableau(tree, syms)
    sig = sorted(nb_subf(negated), key=render)
    model, root = _filtrate(raw_model, raw_root, sig)
    if ml_point_eval(model, root, f):
        raise RuntimeError("countermodel failed replay; this is a bug")
    return Invalid(model=model, team=frozenset([root]), checked=1)


def mliv_valid(
    f: Formula, *, max_selections: int | None = DEFAULT_MAX_SELECTIONS
) -> Valid | Invalid:
    """Validity for modal logic with team-level disjunction.

    The formula is valid exactly when one of its selections is valid as
    a plain modal formula. Selections are tried in order and the first
    valid one is returned as witness. When all fail, their countermodels
    are merged by disjoint union: the combined team refutes every
    selection at once, hence the formula. The merged countermodel is
    replayed through the team semantics before being returned.
    """
    m = count_idis(f)
    if m > _MAX_IDIS_OCCURRENCES or (
        max_selections is not None and (1 << m) > max_selections
    ):
        raise GuardLimitError(
            f"{m} team-level disjunctions give 2^{m} selections, over the "
            f"configured limit"
        )
    allowed = (Atom, NegAtom, And, Or, IDis, Diamond, Box)
    for node in walk(f):
        if not isinstance(node, allowed):
            raise ValueError(
                f"mliv_valid handles modal formulas with team-level "
                f"disjunction only, not {type(node).__name__}"
            )
    seen: set[Formula] = set()
    refuted: list[tuple[KripkeStructure, str]] = []
    for sel, candidate in eliminate_idis(f):
        if candidate in seen:
            continue
        seen.add(candidate)
        verdict = ml_valid(candidate)
        if verdict:
            return Valid(witness=sel, checked=len(seen))
        refuted.append((verdict.model, next(iter(verdict.team))))
    model, points = refuted[0][0], [refuted[0][1]]
    for other_model, other_root in refuted[1:]:
        model = disjoint_union(model, other_model)
        points = [f"L:{p}" for p in points] + [f"R:{other_root}"]
    team = frozenset(points)
    # The formula holds on a team exactly when some selection does, and
    # each selection is flat, so this replay stays linear per selection
    # where evaluating the disjunctions directly would enumerate splits.
    replayed: set[Formula] = set()
    for _, candidate in eliminate_idis(f):
        if candidate in replayed:
            continue
        replayed.add(candidate)
        if mt_eval(model, team, candidate, max_choices=None, max_split_rows=None):
            raise RuntimeError("countermodel failed replay; this is a bug")
    return Invalid(model=model, team=team, checked=len(seen))


def emdl_valid(
    f: Formula,
    *,
    max_dep_arity: int | None = DEFAULT_MAX_DEP_ARITY,
    max_selections: int | None = DEFAULT_MAX_SELECTIONS,
) -> Valid | Invalid:
    """Validity for modal logic with dependence atoms.

    Dependence atoms are unfolded, the unfolding is decided selection by
    selection, and an Invalid verdict is replayed against the original
    formula on the merged countermodel before being returned.
    """
    for node in walk(f):
        if isinstance(node, IDis):
            raise ValueError(
                "team-level disjunction is not part of the dependence fragment"
            )
        if isinstance(node, Dep):
            raise ValueError(
                "propositional dependence atoms do not apply to worlds; "
                "use a modal dependence atom"
            )
    translated = emdl_to_mliv(f, max_dep_arity=max_dep_arity)
    verdict = mliv_valid(translated, max_selections=max_selections)
    if verdict:
        return verdict
    if mt_eval(verdict.model, verdict.team, f, max_choices=None, max_split_rows=None):
        raise RuntimeError("countermodel failed replay; this is a bug")
    return verdict


def ml_valid_small_models(
    f: Formula, max_worlds: int = 3, *, allow_large: bool = False
) -> bool:
    """Validity of a plain modal formula over all models up to a size.

    Exhausts every structure with at most `max_worlds` worlds over the
    formula's own symbols, vectorizing over all relations at once. This
    is a reference check, complete only for formulas whose countermodels
    fit the bound; the guard refuses more than 4 worlds or 2 symbols
    unless `allow_large` is set.
    """
    if not is_pure_ml(f):
        raise ValueError("ml_valid_small_models handles plain modal formulas only")
    syms = sorted(formula_symbols(f))
    if (max_worlds > 4 or len(syms) > 2) and not allow_large:
        raise GuardLimitError(
            f"{max_worlds} worlds over {len(syms)} symbols is over the small-model "
            f"guard; pass allow_large=True to run it anyway"
        )
    for n_worlds in range(1, max_worlds + 1):
        full = (1 << n_worlds) - 1
        relations = np.arange(1 << (n_worlds * n_worlds), dtype=np.int64)
        succ = [
            ((relations >> (w * n_worlds)) & full).astype(np.int64)
            for w in range(n_worlds)
        ]

        def truth(g: Formula, atom_mask: dict):
            if isinstance(g, Atom):
                return atom_mask[g.sym]
            if isinstance(g, NegAtom):
                return ~atom_mask[g.sym] & full
            if isinstance(g, And):
                return truth(g.left, atom_mask) & truth(g.right, atom_mask)
            if isinstance(g, Or):
                return truth(g.left, atom_mask) | truth(g.right, atom_mask)
            if isinstance(g, Diamond):
                child = truth(g.child, atom_mask)
                out = np.zeros_like(relations)
                for w in range(n_worlds):
                    out |= ((succ[w] & child) != 0).astype(np.int64) << w
                return out
            if isinstance(g, Box):
                child = truth(g.child, atom_mask)
                out = np.zeros_like(relations)
                for w in range(n_worlds):
                    out |= ((succ[w] & ~child & full) == 0).astype(np.int64) << w
                return out
            raise ValueError(f"not a plain modal formula: {type(g).__name__}")

        for bits in itertools.product(range(1 << n_worlds), repeat=len(syms)):
            atom_mask = dict(zip(syms, bits))
            if not np.all(truth(f, atom_mask) == full):
                return False
    return True
