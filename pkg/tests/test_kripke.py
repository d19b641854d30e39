import random

import pytest
from hypothesis import given, settings, strategies as st

from teamlogic import (
    Atom,
    Box,
    Dep,
    Diamond,
    GuardLimitError,
    IDis,
    KripkeStructure,
    MDep,
    NegAtom,
    Or,
    PropSymbol,
    bisimilar,
    disjoint_union,
    kripke_from_dict,
    kripke_to_dict,
    ml_point_eval,
    mt_eval,
    parse_modal,
    team_bisimilar,
)

from oracles import (
    brute_mt,
    random_emdl_formula,
    random_ml_formula,
    random_model,
    random_subteam,
)

p = PropSymbol("p")
q = PropSymbol("q")


def chain():
    return KripkeStructure(
        ["w0", "w1", "w2"],
        [("w0", "w1"), ("w1", "w2")],
        {p: {"w0", "w2"}, q: {"w1"}},
    )


def test_structure_validation():
    with pytest.raises(ValueError):
        KripkeStructure([], [], {})
    with pytest.raises(ValueError):
        KripkeStructure(["a", "a"], [], {})
    with pytest.raises(ValueError):
        KripkeStructure(["a"], [("a", "b")], {})
    with pytest.raises(ValueError):
        KripkeStructure(["a"], [], {p: {"b"}})


def test_successors_sorted():
    m = KripkeStructure(["a", "b", "c"], [("a", "c"), ("a", "b")], {})
    assert m.successors("a") == ("b", "c")
    assert m.image({"a"}) == frozenset({"b", "c"})


def test_kripke_json_round_trip():
    m = chain()
    raw = kripke_to_dict(m, team={"w0", "w1"})
    m2, team = kripke_from_dict(raw)
    assert m2 == m
    assert team == frozenset({"w0", "w1"})
    # a missing team means every world
    m3, team3 = kripke_from_dict(
        {"worlds": ["a"], "edges": [], "valuation": {"p": ["a"]}}
    )
    assert team3 == frozenset({"a"})
    with pytest.raises(ValueError):
        kripke_from_dict(
            {"worlds": ["a"], "edges": [], "valuation": {}, "team": ["z"]}
        )


def test_point_evaluation():
    m = chain()
    assert ml_point_eval(m, "w0", parse_modal("p & <> q"))
    assert ml_point_eval(m, "w0", parse_modal("[] (q & <> p)"))
    assert not ml_point_eval(m, "w2", parse_modal("<> p"))
    # dead ends satisfy every box
    assert ml_point_eval(m, "w2", parse_modal("[] (p & !p)"))
    with pytest.raises(ValueError):
        ml_point_eval(m, "w0", MDep((), Atom(p)))


def test_team_clauses_frozen_examples():
    m = chain()
    assert mt_eval(m, {"w0", "w2"}, parse_modal("p"))
    assert not mt_eval(m, {"w0", "w1"}, parse_modal("p"))
    assert mt_eval(m, {"w0", "w1"}, parse_modal("p | q"))
    assert mt_eval(m, set(), parse_modal("p & !p"))
    # the diamond needs a successor for every member
    assert mt_eval(m, {"w0", "w1"}, parse_modal("<> (p | q)"))
    assert not mt_eval(m, {"w1", "w2"}, parse_modal("<> p"))
    assert mt_eval(m, {"w0"}, parse_modal("[] q"))
    assert mt_eval(m, {"w0", "w1"}, parse_modal("p ior q") ) is False
    assert mt_eval(m, {"w0", "w2"}, parse_modal("p ior q"))


def test_modal_dependence_atom():
    m = KripkeStructure(
        ["a", "b", "c", "d"],
        [],
        {p: {"a", "b"}, q: {"a", "c"}},
    )
    assert not mt_eval(m, {"a", "b"}, parse_modal("dep(p; q)"))
    assert mt_eval(m, {"a", "c"}, parse_modal("dep(q; p)")) is False
    assert mt_eval(m, {"a", "d"}, parse_modal("dep(p; q)"))
    # with no edges the argument <> p is constant, so q must be too
    assert not mt_eval(m, {"b", "c"}, parse_modal("dep(<> p; q)"))
    m2 = KripkeStructure(
        ["a", "b", "c"],
        [("b", "a")],
        {p: {"a", "b"}, q: {"a", "c"}},
    )
    # b reaches a p-world and c reaches nothing, so the argument splits them
    assert mt_eval(m2, {"b", "c"}, parse_modal("dep(<> p; q)"))


def test_prop_dep_atom_is_rejected_on_worlds():
    m = chain()
    with pytest.raises(ValueError):
        mt_eval(m, {"w0"}, Dep((p,), q))


def test_team_must_be_subset_of_worlds():
    m = chain()
    with pytest.raises(ValueError):
        mt_eval(m, {"w9"}, parse_modal("p"))
    with pytest.raises(ValueError):
        mt_eval(m, {"w0"}, parse_modal("r"))


def test_choice_guard():
    worlds = [f"w{i}" for i in range(8)]
    edges = [(a, b) for a in worlds[:4] for b in worlds]
    m = KripkeStructure(worlds, edges, {p: set(worlds)})
    with pytest.raises(GuardLimitError):
        mt_eval(m, set(worlds[:4]), Diamond(MDep((), Atom(p))), max_choices=10)
    assert mt_eval(m, set(worlds[:4]), Diamond(MDep((), Atom(p))))


def test_split_guard_is_lazy():
    worlds = [f"w{i}" for i in range(30)]
    m = KripkeStructure(worlds, [], {p: set(worlds), q: set()})
    # a flat disjunction never reaches the splitter
    assert mt_eval(m, set(worlds), parse_modal("p | !p"))
    with pytest.raises(GuardLimitError):
        mt_eval(m, set(worlds), parse_modal("dep(; p) | dep(; q)"))


def test_disjoint_union():
    m1 = chain()
    m2 = KripkeStructure(["x"], [("x", "x")], {p: {"x"}})
    u = disjoint_union(m1, m2)
    assert set(u.worlds) == {"L:w0", "L:w1", "L:w2", "R:x"}
    assert ("R:x", "R:x") in u.edges
    assert u.valuation[q] == frozenset({"L:w1"})
    assert ml_point_eval(u, "L:w0", parse_modal("p & <> q"))


def test_bisimilar_basic():
    m1 = chain()
    u = disjoint_union(m1, m1)
    for w in m1.worlds:
        assert bisimilar(m1, w, u, f"L:{w}")
        assert bisimilar(m1, w, u, f"R:{w}")
    assert not bisimilar(m1, "w0", m1, "w1")
    # one self-loop vs a two-cycle: bisimilar despite different shape
    loop = KripkeStructure(["a"], [("a", "a")], {p: {"a"}})
    cyc = KripkeStructure(["b", "c"], [("b", "c"), ("c", "b")], {p: {"b", "c"}})
    assert bisimilar(loop, "a", cyc, "b")


def test_team_bisimilar():
    m1 = chain()
    u = disjoint_union(m1, m1)
    team = {"w0", "w2"}
    mirrored = {f"L:{w}" for w in team} | {f"R:{w}" for w in team}
    assert team_bisimilar(m1, team, u, mirrored)
    assert not team_bisimilar(m1, {"w0"}, u, {"L:w1"})
    assert team_bisimilar(m1, set(), u, set())


def test_against_brute_oracle_seeded():
    rng = random.Random(23)
    for _ in range(200):
        m = random_model(rng, rng.randint(1, 3), [p, q])
        team = random_subteam(rng, m.worlds)
        f = random_emdl_formula(rng, ["p", "q"], rng.randint(1, 6), 2)
        assert mt_eval(m, team, f, max_split_rows=None) == brute_mt(m, team, f)


def test_idis_formulas_against_oracle():
    rng = random.Random(29)
    for _ in range(120):
        m = random_model(rng, rng.randint(1, 3), [p, q])
        team = random_subteam(rng, m.worlds)
        f = IDis(
            random_ml_formula(rng, ["p", "q"], 4, 1),
            random_ml_formula(rng, ["p", "q"], 4, 1),
        )
        assert mt_eval(m, team, f) == brute_mt(m, team, f)


@st.composite
def small_models(draw):
    n = draw(st.integers(1, 3))
    worlds = [f"w{i}" for i in range(n)]
    pairs = [(a, b) for a in worlds for b in worlds]
    edges = draw(st.lists(st.sampled_from(pairs), max_size=6, unique=True))
    val_p = draw(st.lists(st.sampled_from(worlds), max_size=n, unique=True))
    val_q = draw(st.lists(st.sampled_from(worlds), max_size=n, unique=True))
    team = draw(st.lists(st.sampled_from(worlds), max_size=n, unique=True))
    m = KripkeStructure(worlds, edges, {p: set(val_p), q: set(val_q)})
    return m, frozenset(team)


@st.composite
def modal_team_formulas(draw, depth=0):
    if depth >= 3 or draw(st.booleans()):
        kind = draw(st.integers(0, 2))
        sym = PropSymbol(draw(st.sampled_from(["p", "q"])))
        if kind == 0:
            return Atom(sym)
        if kind == 1:
            return NegAtom(sym)
        return MDep((Atom(PropSymbol("p")),), Atom(sym))
    kind = draw(st.integers(0, 3))
    if kind == 0:
        return Diamond(draw(modal_team_formulas(depth + 1)))
    if kind == 1:
        return Box(draw(modal_team_formulas(depth + 1)))
    from teamlogic import And

    op = And if kind == 2 else draw(st.sampled_from([Or, IDis]))
    return op(
        draw(modal_team_formulas(depth + 1)), draw(modal_team_formulas(depth + 1))
    )


@given(small_models(), modal_team_formulas())
@settings(max_examples=150, deadline=None)
def test_modal_truth_matches_oracle(mt, f):
    m, team = mt
    assert mt_eval(m, team, f, max_split_rows=None) == brute_mt(m, team, f)


@given(small_models(), modal_team_formulas())
@settings(max_examples=100, deadline=None)
def test_modal_downward_closure(mt, f):
    m, team = mt
    if not mt_eval(m, team, f, max_split_rows=None):
        return
    ordered = sorted(team)
    for mask in range(1 << len(ordered)):
        sub = {w for i, w in enumerate(ordered) if mask >> i & 1}
        assert mt_eval(m, sub, f, max_split_rows=None)
