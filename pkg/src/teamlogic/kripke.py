"""Kripke structures and modal team semantics.

A modal team is a set of worlds of one structure. The diamond clause
asks for a successor team: a set T2 with T2 inside the image of T and
every member of T seeing into T2. Because all formulas handled here are
downward closed, it is enough to range over successor-choice images,
picking one successor per member; the box clause uses the full image.
Modal dependence atoms are evaluated pointwise on their components,
which are plain modal formulas and therefore flat.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping

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
    PropSymbol,
    symbols as formula_symbols,
    walk,
)

DEFAULT_MAX_CHOICES = 1 << 20
DEFAULT_MAX_SPLIT_ROWS = 24


def _as_symbol(s) -> PropSymbol:
    return s if isinstance(s, PropSymbol) else PropSymbol(s)


class KripkeStructure:
    """Worlds, an accessibility relation, and a valuation.

    Worlds are strings; the valuation maps each symbol to the set of
    worlds where it holds. Symbols absent from the valuation are treated
    as undeclared, not as false: evaluating a formula that mentions one
    is an error, so a structure is always explicit about its vocabulary.
    """

    __slots__ = ("worlds", "edges", "valuation", "_succ")

    def __init__(
        self,
        worlds: Iterable[str],
        edges: Iterable[tuple[str, str]],
        valuation: Mapping,
    ):
        worlds = tuple(worlds)
        if not worlds:
            raise ValueError("a structure needs at least one world")
        if len(set(worlds)) != len(worlds):
            raise ValueError("worlds must be unique")
        if any(not isinstance(w, str) for w in worlds):
            raise ValueError("worlds must be strings")
        wset = set(worlds)
        edges = frozenset((u, v) for u, v in edges)
        for u, v in edges:
            if u not in wset or v not in wset:
                raise ValueError(f"edge ({u}, {v}) leaves the world set")
        val = {}
        for sym, holds in valuation.items():
            sym = _as_symbol(sym)
            holds = frozenset(holds)
            if not holds <= wset:
                bad = sorted(holds - wset)
                raise ValueError(f"valuation of {sym} names unknown worlds: {bad}")
            val[sym] = holds
        self.worlds = worlds
        self.edges = edges
        self.valuation = val
        succ: dict[str, list[str]] = {w: [] for w in worlds}
        for u, v in sorted(edges):
            succ[u].append(v)
        self._succ = {w: tuple(vs) for w, vs in succ.items()}

    def successors(self, w: str) -> tuple[str, ...]:
        return self._succ[w]

    def image(self, team: Iterable[str]) -> frozenset[str]:
        return frozenset(v for w in team for v in self._succ[w])

    def is_successor_team(self, team: Iterable[str], team2: Iterable[str]) -> bool:
        team, team2 = frozenset(team), frozenset(team2)
        if not team2 <= self.image(team):
            return False
        return all(any(v in team2 for v in self._succ[w]) for w in team)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, KripkeStructure)
            and self.worlds == other.worlds
            and self.edges == other.edges
            and self.valuation == other.valuation
        )

    def __repr__(self) -> str:
        return (
            f"KripkeStructure(worlds={len(self.worlds)}, edges={len(self.edges)}, "
            f"symbols={sorted(s.name for s in self.valuation)})"
        )


def kripke_from_dict(data: dict) -> tuple[KripkeStructure, frozenset[str]]:
    """Read the JSON object form and return the structure with its team.

    Expected keys: "worlds", "edges", "valuation", and optionally "team".
    A missing team means the team of all worlds.
    """
    if not isinstance(data, dict):
        raise ValueError("structure must be a JSON object")
    for key in ("worlds", "edges", "valuation"):
        if key not in data:
            raise ValueError(f"structure object needs a '{key}' key")
    edges = []
    for e in data["edges"]:
        e = tuple(e)
        if len(e) != 2:
            raise ValueError(f"edge {list(e)} must have exactly two endpoints")
        edges.append(e)
    m = KripkeStructure(data["worlds"], edges, data["valuation"])
    if "team" in data:
        team = list(data["team"])
        if len(set(team)) != len(team):
            raise ValueError("team has duplicate worlds")
        bad = sorted(set(team) - set(m.worlds))
        if bad:
            raise ValueError(f"team names unknown worlds: {bad}")
        return m, frozenset(team)
    return m, frozenset(m.worlds)


def kripke_to_dict(m: KripkeStructure, team: Iterable[str] | None = None) -> dict:
    data = {
        "worlds": list(m.worlds),
        "edges": sorted([list(e) for e in m.edges]),
        "valuation": {
            s.name: sorted(m.valuation[s]) for s in sorted(m.valuation)
        },
    }
    if team is not None:
        data["team"] = sorted(team)
    return data


def ml_point_eval(m: KripkeStructure, w: str, f: Formula) -> bool:
    """Classical single-world modal truth; plain modal formulas only."""
    if w not in m._succ:
        raise ValueError(f"unknown world: {w}")
    return _ml_eval(m, w, f)


def _ml_eval(m: KripkeStructure, w: str, f: Formula) -> bool:
    if isinstance(f, Atom):
        if f.sym not in m.valuation:
            raise ValueError(f"symbol {f.sym} is missing from the valuation")
        return w in m.valuation[f.sym]
    if isinstance(f, NegAtom):
        if f.sym not in m.valuation:
            raise ValueError(f"symbol {f.sym} is missing from the valuation")
        return w not in m.valuation[f.sym]
    if isinstance(f, And):
        return _ml_eval(m, w, f.left) and _ml_eval(m, w, f.right)
    if isinstance(f, Or):
        return _ml_eval(m, w, f.left) or _ml_eval(m, w, f.right)
    if isinstance(f, Diamond):
        return any(_ml_eval(m, v, f.child) for v in m._succ[w])
    if isinstance(f, Box):
        return all(_ml_eval(m, v, f.child) for v in m._succ[w])
    raise ValueError(f"not a plain modal formula: {type(f).__name__}")


_MT_NODES = (Atom, NegAtom, And, Or, IDis, Diamond, Box, MDep)


def _check_modal_team(f: Formula) -> None:
    for node in walk(f):
        if not isinstance(node, _MT_NODES):
            if isinstance(node, Dep):
                raise ValueError(
                    "propositional dependence atoms do not apply to worlds; "
                    "use a modal dependence atom"
                )
            raise ValueError(
                f"not a modal team formula: contains {type(node).__name__}"
            )


class _ModalTeamEvaluator:
    """Modal team evaluation over one structure, teams as world bitmasks."""

    def __init__(self, m: KripkeStructure, root: Formula, max_choices: int | None, max_split_rows: int | None):
        self.m = m
        self.max_choices = max_choices
        self.max_split_rows = max_split_rows
        self.order = m.worlds
        self.widx = {w: i for i, w in enumerate(self.order)}
        self.full = (1 << len(self.order)) - 1
        self.succ_mask = {}
        for w in self.order:
            sm = 0
            for v in m.successors(w):
                sm |= 1 << self.widx[v]
            self.succ_mask[w] = sm
        self.flat_mask: dict[Formula, int] = {}
        self.dep_groups: dict[Formula, list[tuple[int, int]]] = {}
        self.or_chain: dict[Formula, tuple[int, tuple[Formula, ...]]] = {}
        self.memo: dict = {}
        self.memo_rest: dict = {}
        self._prepare(root)

    def _point_mask(self, f: Formula) -> int:
        """Worlds satisfying a plain modal formula, by classical truth."""
        if isinstance(f, Atom):
            sym_worlds = self.m.valuation.get(f.sym)
            if sym_worlds is None:
                raise ValueError(f"symbol {f.sym} is missing from the valuation")
            m = 0
            for w in sym_worlds:
                m |= 1 << self.widx[w]
            return m
        if isinstance(f, NegAtom):
            return ~self._point_mask(Atom(f.sym)) & self.full
        if isinstance(f, And):
            return self._point_mask(f.left) & self._point_mask(f.right)
        if isinstance(f, Or):
            return self._point_mask(f.left) | self._point_mask(f.right)
        if isinstance(f, Diamond):
            child = self._point_mask(f.child)
            m = 0
            for w in self.order:
                if self.succ_mask[w] & child:
                    m |= 1 << self.widx[w]
            return m
        if isinstance(f, Box):
            child = self._point_mask(f.child)
            m = 0
            for w in self.order:
                if self.succ_mask[w] & ~child == 0:
                    m |= 1 << self.widx[w]
            return m
        raise ValueError(f"not a plain modal formula: {type(f).__name__}")

    def _prepare(self, f: Formula) -> int | None:
        """Return the satisfying-world mask when `f` is flat (plain modal)."""
        if f in self.flat_mask:
            return self.flat_mask[f]
        if f in self.dep_groups or f in self.or_chain:
            return None
        if isinstance(f, (Atom, NegAtom)):
            m = self._point_mask(f)
        elif isinstance(f, (And, Or)):
            ml = self._prepare(f.left)
            mr = self._prepare(f.right)
            if ml is None or mr is None:
                if isinstance(f, Or):
                    self._prepare_or(f)
                return None
            m = (ml & mr) if isinstance(f, And) else (ml | mr)
        elif isinstance(f, (Diamond, Box)):
            mc = self._prepare(f.child)
            if mc is None:
                return None
            m = self._point_mask(f)
        elif isinstance(f, IDis):
            self._prepare(f.left)
            self._prepare(f.right)
            return None
        elif isinstance(f, MDep):
            self._prepare_mdep(f)
            return None
        else:
            raise ValueError(f"not a modal team formula: {type(f).__name__}")
        self.flat_mask[f] = m
        return m

    def _prepare_mdep(self, f: MDep) -> None:
        comp_masks = [self._point_mask(a) for a in f.args]
        target_mask = self._point_mask(f.target)
        groups: dict[tuple[int, ...], list[int]] = {}
        for i, w in enumerate(self.order):
            profile = tuple((cm >> i) & 1 for cm in comp_masks)
            groups.setdefault(profile, []).append(i)
        pairs = []
        for members in groups.values():
            zeros = ones = 0
            for i in members:
                if target_mask >> i & 1:
                    ones |= 1 << i
                else:
                    zeros |= 1 << i
            if zeros and ones:
                pairs.append((zeros, ones))
        self.dep_groups[f] = pairs

    def _prepare_or(self, f: Or) -> None:
        disjuncts: list[Formula] = []
        stack = [f.right, f.left]
        while stack:
            d = stack.pop()
            if isinstance(d, Or):
                stack.append(d.right)
                stack.append(d.left)
            else:
                disjuncts.append(d)
        flat_union = 0
        nonflat = []
        for d in disjuncts:
            m = self._prepare(d)
            if m is None:
                nonflat.append(d)
            else:
                flat_union |= m
        self.or_chain[f] = (flat_union, tuple(nonflat))

    def eval(self, f: Formula, mask: int) -> bool:
        m = self.flat_mask.get(f)
        if m is not None:
            return mask & ~m == 0
        key = (f, mask)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if isinstance(f, MDep):
            result = True
            for zeros, ones in self.dep_groups[f]:
                if mask & zeros and mask & ones:
                    result = False
                    break
        elif isinstance(f, And):
            result = self.eval(f.left, mask) and self.eval(f.right, mask)
        elif isinstance(f, IDis):
            result = self.eval(f.left, mask) or self.eval(f.right, mask)
        elif isinstance(f, Or):
            flat_union, nonflat = self.or_chain[f]
            rest = mask & ~flat_union
            if not nonflat:
                result = rest == 0
            elif len(nonflat) == 1:
                result = self.eval(nonflat[0], rest)
            else:
                if (
                    self.max_split_rows is not None
                    and rest.bit_count() > self.max_split_rows
                ):
                    raise GuardLimitError(
                        f"team of {rest.bit_count()} worlds exceeds the split "
                        f"guard of {self.max_split_rows}; raise max_split_rows "
                        f"to override"
                    )
                result = self._or_rest(f, nonflat, 0, rest)
        elif isinstance(f, Diamond):
            result = self._eval_diamond(f, mask)
        elif isinstance(f, Box):
            image = 0
            for i in _bits(mask):
                image |= self.succ_mask[self.order[i]]
            result = self.eval(f.child, image)
        else:
            raise ValueError(f"not a modal team formula: {type(f).__name__}")
        self.memo[key] = result
        return result

    def _or_rest(self, node: Or, nonflat: tuple[Formula, ...], i: int, mask: int) -> bool:
        if i == len(nonflat) - 1:
            return self.eval(nonflat[i], mask)
        key = (node, i, mask)
        hit = self.memo_rest.get(key)
        if hit is not None:
            return hit
        result = False
        sub = mask
        while True:
            if self.eval(nonflat[i], sub) and self._or_rest(node, nonflat, i + 1, mask & ~sub):
                result = True
                break
            if sub == 0:
                break
            sub = (sub - 1) & mask
        self.memo_rest[key] = result
        return result

    def _eval_diamond(self, f: Diamond, mask: int) -> bool:
        """Search successor teams as images of successor-choice functions.

        Downward closure makes choice images a complete witness set: any
        successor team can be thinned to one successor per member.
        """
        members = list(_bits(mask))
        if not members:
            return True
        succ_lists = []
        count = 1
        for i in members:
            succs = self.m.successors(self.order[i])
            if not succs:
                return False
            succ_lists.append(succs)
            count *= len(succs)
        if self.max_choices is not None and count > self.max_choices:
            raise GuardLimitError(
                f"{count} successor choices exceed the guard of "
                f"{self.max_choices}; raise max_choices to override"
            )
        seen = set()
        for pick in itertools.product(*succ_lists):
            child_mask = 0
            for v in pick:
                child_mask |= 1 << self.widx[v]
            if child_mask in seen:
                continue
            seen.add(child_mask)
            if self.eval(f.child, child_mask):
                return True
        return False


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mt_eval(
    m: KripkeStructure,
    team: Iterable[str],
    f: Formula,
    *,
    max_choices: int | None = DEFAULT_MAX_CHOICES,
    max_split_rows: int | None = DEFAULT_MAX_SPLIT_ROWS,
) -> bool:
    """Exact modal team-semantics truth of `f` on `team` in `m`.

    The valuation must cover every symbol of the formula. Guards bound
    the two enumerations: successor choices per diamond and team splits
    per disjunction; either raises GuardLimitError rather than start an
    oversized search.
    """
    _check_modal_team(f)
    team = frozenset(team)
    bad = sorted(team - set(m.worlds))
    if bad:
        raise ValueError(f"team names unknown worlds: {bad}")
    missing = formula_symbols(f) - set(m.valuation)
    if missing:
        names = ", ".join(sorted(s.name for s in missing))
        raise ValueError(f"symbols missing from the valuation: {names}")
    ev = _ModalTeamEvaluator(m, f, max_choices, max_split_rows)
    mask = 0
    for w in team:
        mask |= 1 << ev.widx[w]
    return ev.eval(f, mask)


def disjoint_union(a: KripkeStructure, b: KripkeStructure) -> KripkeStructure:
    """Tagged disjoint union; left worlds get "L:" and right get "R:".

    The vocabulary is the union of both valuations, with a symbol absent
    on one side holding at none of that side's worlds.
    """
    worlds = tuple(f"L:{w}" for w in a.worlds) + tuple(f"R:{w}" for w in b.worlds)
    edges = [(f"L:{u}", f"L:{v}") for u, v in a.edges]
    edges += [(f"R:{u}", f"R:{v}") for u, v in b.edges]
    val = {}
    for sym in set(a.valuation) | set(b.valuation):
        holds = {f"L:{w}" for w in a.valuation.get(sym, ())}
        holds |= {f"R:{w}" for w in b.valuation.get(sym, ())}
        val[sym] = frozenset(holds)
    return KripkeStructure(worlds, edges, val)


def _refine_partition(m1: KripkeStructure, m2: KripkeStructure) -> dict[tuple[int, str], int]:
    """Coarsest bisimulation partition over the two structures together.

    Worlds are keyed (side, name). The vocabulary is the union of both
    valuations; a missing symbol counts as false on that side, so the
    comparison never errors on mismatched declarations.
    """
    sides = ((0, m1), (1, m2))
    vocab = sorted(set(m1.valuation) | set(m2.valuation))
    block: dict[tuple[int, str], int] = {}
    signature: dict[tuple, int] = {}
    for side, m in sides:
        for w in m.worlds:
            sig = tuple(w in m.valuation.get(sym, ()) for sym in vocab)
            if sig not in signature:
                signature[sig] = len(signature)
            block[(side, w)] = signature[sig]
    while True:
        signature = {}
        new_block = {}
        for side, m in sides:
            for w in m.worlds:
                succ_blocks = frozenset(block[(side, v)] for v in m.successors(w))
                sig = (block[(side, w)], succ_blocks)
                if sig not in signature:
                    signature[sig] = len(signature)
                new_block[(side, w)] = signature[sig]
        if new_block == block:
            return block
        block = new_block


def bisimilar(m1: KripkeStructure, w1: str, m2: KripkeStructure, w2: str) -> bool:
    """World bisimilarity across two structures."""
    if w1 not in m1._succ:
        raise ValueError(f"unknown world: {w1}")
    if w2 not in m2._succ:
        raise ValueError(f"unknown world: {w2}")
    block = _refine_partition(m1, m2)
    return block[(0, w1)] == block[(1, w2)]


def team_bisimilar(
    m1: KripkeStructure, team1: Iterable[str], m2: KripkeStructure, team2: Iterable[str]
) -> bool:
    """Team bisimilarity: matching partners in both directions."""
    team1, team2 = frozenset(team1), frozenset(team2)
    bad = sorted(team1 - set(m1.worlds)) + sorted(team2 - set(m2.worlds))
    if bad:
        raise ValueError(f"team names unknown worlds: {bad}")
    block = _refine_partition(m1, m2)
    left = {block[(0, w)] for w in team1}
    right = {block[(1, w)] for w in team2}
    return left == right
