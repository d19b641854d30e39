import pytest
from hypothesis import given, settings, strategies as st

from teamlogic import (
    And,
    Atom,
    Box,
    Dep,
    Diamond,
    IDis,
    MDep,
    NegAtom,
    Or,
    ParseError,
    PropSymbol,
    parse_modal,
    parse_prop,
    render,
)

p = PropSymbol("p")
q = PropSymbol("q")
r = PropSymbol("r")


def test_parse_prop_basics():
    assert parse_prop("p & q | r") == Or(And(Atom(p), Atom(q)), Atom(r))
    assert parse_prop("p & (q | r)") == And(Atom(p), Or(Atom(q), Atom(r)))
    assert parse_prop("!p") == NegAtom(p)
    assert parse_prop("dep(p, q; r)") == Dep((p, q), r)
    assert parse_prop("dep(; p)") == Dep((), p)


def test_parse_prop_negation_normalizes():
    assert parse_prop("!(p & q)") == Or(NegAtom(p), NegAtom(q))
    assert parse_prop("!!p") == Atom(p)


def test_parse_modal_basics():
    assert parse_modal("<> p & [] q") == And(Diamond(Atom(p)), Box(Atom(q)))
    assert parse_modal("<> (p | q)") == Diamond(Or(Atom(p), Atom(q)))
    assert parse_modal("p ior q") == IDis(Atom(p), Atom(q))
    assert parse_modal("dep(<> p; [] q)") == MDep((Diamond(Atom(p)),), Box(Atom(q)))
    # atom-only dependence parses to the modal atom in modal mode
    assert parse_modal("dep(p; q)") == MDep((Atom(p),), Atom(q))


def test_prop_mode_rejects_modal_syntax():
    with pytest.raises(ParseError):
        parse_prop("<> p")
    with pytest.raises(ParseError):
        parse_prop("p ior q")
    # prop dependence atoms take symbol lists only
    with pytest.raises(ParseError):
        parse_prop("dep(p & q; r)")


def test_parse_error_positions():
    with pytest.raises(ParseError) as info:
        parse_prop("p & ")
    assert "position" in str(info.value)
    with pytest.raises(ParseError):
        parse_prop("(p | q")
    with pytest.raises(ParseError):
        parse_prop("p q")
    with pytest.raises(ParseError):
        parse_prop("")


def test_dep_rejects_nesting_and_team_disjunction():
    with pytest.raises(ParseError):
        parse_modal("dep(dep(p; q); r)")
    with pytest.raises(ParseError):
        parse_modal("dep((p ior q); r)")
    with pytest.raises(ParseError):
        parse_modal("!dep(p; q)")


def test_keywords_are_not_symbols():
    with pytest.raises(ParseError):
        parse_prop("dep & p")
    with pytest.raises(ParseError):
        parse_prop("ior")


names = st.sampled_from(["p", "q", "r"])


@st.composite
def prop_formulas(draw, depth=0):
    if depth >= 4 or draw(st.booleans()):
        kind = draw(st.integers(0, 3))
        if kind == 0:
            return Atom(PropSymbol(draw(names)))
        if kind == 1:
            return NegAtom(PropSymbol(draw(names)))
        args = tuple(
            PropSymbol(n)
            for n in draw(st.lists(names, max_size=3, unique=True))
        )
        return Dep(args, PropSymbol(draw(names)))
    op = draw(st.sampled_from([And, Or]))
    return op(draw(prop_formulas(depth + 1)), draw(prop_formulas(depth + 1)))


@st.composite
def modal_formulas(draw, depth=0):
    if depth >= 4 or draw(st.booleans()):
        kind = draw(st.integers(0, 2))
        if kind == 0:
            return Atom(PropSymbol(draw(names)))
        if kind == 1:
            return NegAtom(PropSymbol(draw(names)))
        comps = draw(st.lists(st.sampled_from(["p", "q"]), max_size=2))
        args = tuple(Diamond(Atom(PropSymbol(n))) for n in comps)
        return MDep(args, Atom(PropSymbol(draw(names))))
    kind = draw(st.integers(0, 3))
    if kind == 0:
        return Diamond(draw(modal_formulas(depth + 1)))
    if kind == 1:
        return Box(draw(modal_formulas(depth + 1)))
    op = And if kind == 2 else draw(st.sampled_from([Or, IDis]))
    return op(draw(modal_formulas(depth + 1)), draw(modal_formulas(depth + 1)))


@given(prop_formulas())
@settings(max_examples=300, deadline=None)
def test_prop_render_parse_round_trip(f):
    assert parse_prop(render(f)) == f


@given(modal_formulas())
@settings(max_examples=300, deadline=None)
def test_modal_render_parse_round_trip(f):
    assert parse_modal(render(f)) == f
