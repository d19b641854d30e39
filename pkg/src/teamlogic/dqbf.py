"""Dependency-quantified and quantified Boolean formulas.

A DQBF instance quantifies every variable: universals first, then
existentials, where each existential comes with the set of universals it
may depend on. Truth means a family of Skolem tables exists, one per
existential over exactly its dependency set, making the matrix true
under every universal assignment.

A QBF prefix is the special case where dependency sets grow along the
prefix; `qbf_to_dqbf` reads those sets off and `dqbf_to_qbf` rebuilds a
prefix from any instance whose dependency sets form a chain.

`reduce_to_pd` maps an instance to a propositional team formula, matrix
or dependence atoms disjoined, whose validity coincides with truth of
the instance.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable

from .errors import GuardLimitError, ParseError
from .formula import (
    And,
    Atom,
    Dep,
    Formula,
    NegAtom,
    Or,
    PropSymbol,
    render,
    symbols as formula_symbols,
    to_nnf,
    walk,
)
from .parser import parse_prop
from .prop_team import pl_pointwise

DEFAULT_MAX_TABLE_BITS = 24
DEFAULT_MAX_QBF_VARS = 24


def _as_symbol(s) -> PropSymbol:
    return s if isinstance(s, PropSymbol) else PropSymbol(s)


def _check_matrix(matrix: Formula, declared: set[PropSymbol]) -> Formula:
    matrix = to_nnf(matrix)
    for node in walk(matrix):
        if not isinstance(node, (Atom, NegAtom, And, Or)):
            raise ValueError(
                f"matrix must be a plain propositional formula, not contain "
                f"{type(node).__name__}"
            )
    free = formula_symbols(matrix) - declared
    if free:
        names = ", ".join(sorted(s.name for s in free))
        raise ValueError(f"matrix uses unquantified variables: {names}")
    return matrix


class QbfInstance:
    """A fully quantified Boolean formula with a linear prefix."""

    __slots__ = ("prefix", "matrix")

    def __init__(self, prefix: Iterable[tuple[str, object]], matrix: Formula):
        prefix = tuple((q, _as_symbol(v)) for q, v in prefix)
        for q, _ in prefix:
            if q not in ("A", "E"):
                raise ValueError(f"quantifier must be 'A' or 'E', not {q!r}")
        names = [v for _, v in prefix]
        if len(set(names)) != len(names):
            raise ValueError("prefix quantifies a variable twice")
        self.prefix = prefix
        self.matrix = _check_matrix(matrix, set(names))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QbfInstance)
            and self.prefix == other.prefix
            and self.matrix == other.matrix
        )

    def __repr__(self) -> str:
        head = " ".join(f"{q} {v.name}" for q, v in self.prefix)
        return f"QbfInstance({head} . {render(self.matrix)})"


class DqbfInstance:
    """A dependency-quantified Boolean formula.

    `existentials` is a sequence of (variable, dependency set) pairs;
    each dependency set is stored as a tuple in the order the universals
    were declared, whatever order it was given in.
    """

    __slots__ = ("universals", "existentials", "matrix")

    def __init__(
        self,
        universals: Iterable,
        existentials: Iterable[tuple[object, Iterable]],
        matrix: Formula,
    ):
        universals = tuple(_as_symbol(u) for u in universals)
        if len(set(universals)) != len(universals):
            raise ValueError("universal variables must be unique")
        upos = {u: i for i, u in enumerate(universals)}
        pairs = []
        for name, deps in existentials:
            name = _as_symbol(name)
            deps = [_as_symbol(d) for d in deps]
            if len(set(deps)) != len(deps):
                raise ValueError(f"dependency set of {name} repeats a variable")
            for d in deps:
                if d not in upos:
                    raise ValueError(
                        f"dependency set of {name} names {d}, which is not universal"
                    )
            pairs.append((name, tuple(sorted(deps, key=upos.__getitem__))))
        enames = [n for n, _ in pairs]
        if len(set(enames)) != len(enames):
            raise ValueError("existential variables must be unique")
        clash = set(enames) & set(universals)
        if clash:
            raise ValueError(f"quantified twice: {sorted(s.name for s in clash)}")
        self.universals = universals
        self.existentials = tuple(pairs)
        self.matrix = _check_matrix(matrix, set(universals) | set(enames))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DqbfInstance)
            and self.universals == other.universals
            and self.existentials == other.existentials
            and self.matrix == other.matrix
        )

    def __repr__(self) -> str:
        es = ", ".join(
            f"{n.name}({', '.join(d.name for d in deps)})"
            for n, deps in self.existentials
        )
        us = ", ".join(u.name for u in self.universals)
        return f"DqbfInstance(forall {us}; exists {es}; {render(self.matrix)})"


@dataclass
class SkolemWitness:
    """Skolem tables certifying a true instance.

    Each table lists the existential's value for every assignment to its
    dependency set; entry index k reads the dependency values as a binary
    number, first dependency most significant.
    """

    tables: dict[PropSymbol, tuple[int, ...]]
    constraints: dict[PropSymbol, tuple[PropSymbol, ...]]

    def describe(self) -> str:
        lines = []
        for sym, table in self.tables.items():
            deps = self.constraints[sym]
            if not deps:
                lines.append(f"{sym.name} = {table[0]}")
                continue
            args = ", ".join(d.name for d in deps)
            cells = []
            for k, bit in enumerate(table):
                key = format(k, f"0{len(deps)}b")
                cells.append(f"{key}->{bit}")
            lines.append(f"{sym.name}({args}): " + " ".join(cells))
        return "\n".join(lines)


def _universal_columns(universals: tuple[PropSymbol, ...]) -> dict[PropSymbol, int]:
    """Bit column per universal over all 2^n assignments.

    Assignment index a encodes the tuple of values with the first
    universal most significant; bit a of column u is u's value there.
    """
    n = len(universals)
    total = 1 << n
    cols = {}
    for j, u in enumerate(universals):
        rep = 1 << (n - 1 - j)
        period = rep << 1
        unit = ((1 << rep) - 1) << rep
        multiplier = ((1 << total) - 1) // ((1 << period) - 1)
        cols[u] = unit * multiplier
    return cols


def _matrix_column(f: Formula, cols: dict[PropSymbol, int], full: int) -> int:
    if isinstance(f, Atom):
        return cols[f.sym]
    if isinstance(f, NegAtom):
        return ~cols[f.sym] & full
    if isinstance(f, And):
        return _matrix_column(f.left, cols, full) & _matrix_column(f.right, cols, full)
    if isinstance(f, Or):
        return _matrix_column(f.left, cols, full) | _matrix_column(f.right, cols, full)
    raise ValueError(f"not a plain propositional formula: {type(f).__name__}")


def dqbf_eval(
    inst: DqbfInstance, *, max_table_bits: int | None = DEFAULT_MAX_TABLE_BITS
) -> SkolemWitness | None:
    """Decide an instance by searching Skolem tables.

    Tables are tried in lexicographic order over their concatenated bits
    (existentials in declaration order, entries in index order), so a
    true instance always yields the same, least witness. Each candidate
    is checked against all universal assignments at once via bit-parallel
    evaluation of the matrix.
    """
    n = len(inst.universals)
    sizes = [1 << len(deps) for _, deps in inst.existentials]
    total_bits = sum(sizes)
    if max_table_bits is not None and total_bits > max_table_bits:
        raise GuardLimitError(
            f"{total_bits} Skolem table bits exceed the guard of "
            f"{max_table_bits}; raise max_table_bits to override"
        )
    full = (1 << (1 << n)) - 1
    cols = _universal_columns(inst.universals)
    upos = {u: i for i, u in enumerate(inst.universals)}
    entry_masks: list[list[int]] = []
    for _, deps in inst.existentials:
        masks = []
        for entry in range(1 << len(deps)):
            m = full
            for t, d in enumerate(deps):
                bit = entry >> (len(deps) - 1 - t) & 1
                m &= cols[d] if bit else ~cols[d] & full
            masks.append(m)
        entry_masks.append(masks)
    for bits in itertools.product((0, 1), repeat=total_bits):
        all_cols = dict(cols)
        off = 0
        for (sym, _), size, masks in zip(inst.existentials, sizes, entry_masks):
            col = 0
            for e in range(size):
                if bits[off + e]:
                    col |= masks[e]
            all_cols[sym] = col
            off += size
        if _matrix_column(inst.matrix, all_cols, full) == full:
            tables = {}
            off = 0
            for (sym, _), size in zip(inst.existentials, sizes):
                tables[sym] = tuple(bits[off : off + size])
                off += size
            return SkolemWitness(
                tables=tables,
                constraints={sym: deps for sym, deps in inst.existentials},
            )
    return None


def replay_witness(inst: DqbfInstance, witness: SkolemWitness) -> bool:
    """Check Skolem tables against every universal assignment, one by one.

    This shares nothing with the bit-parallel search; it is the slow
    reference reading of what a witness claims.
    """
    for sym, deps in inst.existentials:
        if sym not in witness.tables:
            raise ValueError(f"witness has no table for {sym}")
        if len(witness.tables[sym]) != 1 << len(deps):
            raise ValueError(f"table for {sym} has the wrong number of entries")
        if any(b not in (0, 1) for b in witness.tables[sym]):
            raise ValueError(f"table for {sym} has entries other than 0 and 1")
    for assignment in itertools.product((0, 1), repeat=len(inst.universals)):
        env = dict(zip(inst.universals, assignment))
        for sym, deps in inst.existentials:
            idx = 0
            for d in deps:
                idx = idx << 1 | env[d]
            env[sym] = witness.tables[sym][idx]
        if not pl_pointwise(env, inst.matrix):
            return False
    return True


def qbf_eval(q: QbfInstance, *, max_vars: int | None = DEFAULT_MAX_QBF_VARS) -> bool:
    """Decide a QBF by quantifier recursion over the prefix."""
    if max_vars is not None and len(q.prefix) > max_vars:
        raise GuardLimitError(
            f"prefix of {len(q.prefix)} variables exceeds the guard of {max_vars}"
        )
    env: dict[PropSymbol, int] = {}

    def rec(i: int) -> bool:
        if i == len(q.prefix):
            return pl_pointwise(env, q.matrix)
        quant, var = q.prefix[i]
        results = []
        for b in (0, 1):
            env[var] = b
            results.append(rec(i + 1))
            if quant == "E" and results[-1]:
                break
            if quant == "A" and not results[-1]:
                break
        del env[var]
        return any(results) if quant == "E" else all(results)

    return rec(0)


def qbf_to_dqbf(q: QbfInstance) -> DqbfInstance:
    """Read dependency sets off a linear prefix.

    Each existential depends on exactly the universals quantified before
    it; declaration orders are preserved.
    """
    universals = [v for quant, v in q.prefix if quant == "A"]
    existentials = []
    seen: list[PropSymbol] = []
    for quant, v in q.prefix:
        if quant == "A":
            seen.append(v)
        else:
            existentials.append((v, tuple(seen)))
    return DqbfInstance(universals, existentials, q.matrix)


def is_simple_constraint(inst: DqbfInstance) -> bool:
    """Whether the dependency sets form a chain once sorted by size.

    Chain instances are exactly the ones a linear prefix can express.
    """
    ordered = sorted(
        (set(deps) for _, deps in inst.existentials), key=len
    )
    for small, big in zip(ordered, ordered[1:]):
        if not small <= big:
            return False
    return True


def dqbf_to_qbf(inst: DqbfInstance) -> QbfInstance:
    """Rebuild a linear prefix from a chain instance.

    Existentials are placed in order of growing dependency set, each
    immediately after the universals it depends on; universals no one
    depends on close the prefix. Universal declaration order is kept
    inside each block, so a round trip through `qbf_to_dqbf` restores
    every dependency set, though not necessarily the universal order.
    """
    if not is_simple_constraint(inst):
        raise ValueError(
            "dependency sets do not form a chain; no linear prefix expresses them"
        )
    order = sorted(
        range(len(inst.existentials)),
        key=lambda i: (len(inst.existentials[i][1]), i),
    )
    prefix: list[tuple[str, PropSymbol]] = []
    placed: set[PropSymbol] = set()
    for i in order:
        sym, deps = inst.existentials[i]
        for u in deps:
            if u not in placed:
                prefix.append(("A", u))
                placed.add(u)
        prefix.append(("E", sym))
    for u in inst.universals:
        if u not in placed:
            prefix.append(("A", u))
    return QbfInstance(prefix, inst.matrix)


def reduce_to_pd(inst: DqbfInstance) -> Formula:
    """The propositional team formula whose validity is instance truth.

    The matrix is disjoined with one dependence atom per existential,
    dep(dependency set; existential). A satisfying split of the team of
    all assignments hands each existential a part that functionally
    determines it, which is a Skolem table, and conversely.
    """
    f: Formula = inst.matrix
    for sym, deps in inst.existentials:
        f = Or(f, Dep(deps, sym))
    return f


_IDENT = r"[A-Za-z][A-Za-z0-9_]*"


def _content_lines(text: str) -> list[tuple[int, str]]:
    lines = []
    for i, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        lines.append((i, stripped))
    return lines


def parse_dqbf(text: str) -> DqbfInstance:
    """Parse the three-line instance format.

    Example:
        forall a1 a2
        exists b1 {a1} b2 {a1, a2}
        matrix (a1 & b1) | (!a1 & !b1)

    Blank lines and lines starting with '#' are ignored. Every
    existential needs a braced dependency set, {} when empty.
    """
    lines = _content_lines(text)
    if len(lines) != 3:
        raise ParseError(
            f"expected exactly three content lines (forall, exists, matrix), "
            f"got {len(lines)}"
        )
    (ln1, l1), (ln2, l2), (ln3, l3) = lines
    first, _, rest1 = l1.partition(" ")
    if first != "forall":
        raise ParseError(f"line {ln1}: expected a 'forall' line")
    universals = rest1.split()
    for u in universals:
        if not re.fullmatch(_IDENT, u):
            raise ParseError(f"line {ln1}: bad variable name {u!r}")
    second, _, rest2 = l2.partition(" ")
    if second != "exists":
        raise ParseError(f"line {ln2}: expected an 'exists' line")
    existentials = []
    pos = 0
    rest2 = rest2.strip()
    while pos < len(rest2):
        m = re.match(rf"\s*({_IDENT})\s*\{{([^{{}}]*)\}}", rest2[pos:])
        if not m:
            raise ParseError(
                f"line {ln2}: expected 'name {{deps}}' at {rest2[pos:].strip()!r}"
            )
        name, inner = m.group(1), m.group(2).strip()
        deps = []
        if inner:
            for part in inner.split(","):
                part = part.strip()
                if not re.fullmatch(_IDENT, part):
                    raise ParseError(f"line {ln2}: bad variable name {part!r}")
                deps.append(part)
        existentials.append((name, deps))
        pos += m.end()
    third, _, rest3 = l3.partition(" ")
    if third != "matrix" or not rest3.strip():
        raise ParseError(f"line {ln3}: expected 'matrix <formula>'")
    matrix = parse_prop(rest3)
    try:
        return DqbfInstance(universals, existentials, matrix)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def render_dqbf(inst: DqbfInstance) -> str:
    parts = []
    for sym, deps in inst.existentials:
        parts.append(f"{sym.name} {{{', '.join(d.name for d in deps)}}}")
    return "\n".join(
        [
            ("forall " + " ".join(u.name for u in inst.universals)).rstrip(),
            ("exists " + " ".join(parts)).rstrip(),
            "matrix " + render(inst.matrix),
        ]
    )


def parse_qbf(text: str) -> QbfInstance:
    """Parse the two-line prefix format.

    Example:
        prefix A a1 E b1 A a2
        matrix (a1 & b1) | !a2
    """
    lines = _content_lines(text)
    if len(lines) != 2:
        raise ParseError(
            f"expected exactly two content lines (prefix, matrix), got {len(lines)}"
        )
    (ln1, l1), (ln2, l2) = lines
    first, _, rest1 = l1.partition(" ")
    if first != "prefix":
        raise ParseError(f"line {ln1}: expected a 'prefix' line")
    toks = rest1.split()
    if len(toks) % 2 != 0:
        raise ParseError(f"line {ln1}: prefix must alternate quantifiers and names")
    prefix = []
    for q, v in zip(toks[::2], toks[1::2]):
        if q not in ("A", "E"):
            raise ParseError(f"line {ln1}: quantifier must be A or E, not {q!r}")
        if not re.fullmatch(_IDENT, v):
            raise ParseError(f"line {ln1}: bad variable name {v!r}")
        prefix.append((q, v))
    second, _, rest2 = l2.partition(" ")
    if second != "matrix" or not rest2.strip():
        raise ParseError(f"line {ln2}: expected 'matrix <formula>'")
    matrix = parse_prop(rest2)
    try:
        return QbfInstance(prefix, matrix)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def render_qbf(q: QbfInstance) -> str:
    head = " ".join(f"{quant} {v.name}" for quant, v in q.prefix)
    return "\n".join([("prefix " + head).rstrip(), "matrix " + render(q.matrix)])
