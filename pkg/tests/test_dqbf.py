import itertools
import random

import pytest

from teamlogic import (
    And,
    Atom,
    Dep,
    DqbfInstance,
    GuardLimitError,
    NegAtom,
    Or,
    ParseError,
    PropSymbol,
    QbfInstance,
    dqbf_eval,
    dqbf_to_qbf,
    is_simple_constraint,
    parse_dqbf,
    parse_prop,
    parse_qbf,
    pd_valid,
    qbf_eval,
    qbf_to_dqbf,
    reduce_to_pd,
    render,
    render_dqbf,
    render_qbf,
    replay_witness,
)

from oracles import nnf_pool, dedup_pool_by_table

a1, a2 = PropSymbol("a1"), PropSymbol("a2")
b1, b2 = PropSymbol("b1"), PropSymbol("b2")


def identity_instance():
    # b1 must copy a1 and may see it
    return DqbfInstance(
        [a1], [(b1, (a1,))], parse_prop("a1 & b1 | !a1 & !b1")
    )


def blind_instance():
    # same matrix, but b1 cannot see a1
    return DqbfInstance([a1], [(b1, ())], parse_prop("a1 & b1 | !a1 & !b1"))


def test_instance_validation():
    with pytest.raises(ValueError):
        DqbfInstance([a1, a1], [(b1, ())], Atom(b1))
    with pytest.raises(ValueError):
        DqbfInstance([a1], [(a1, ())], Atom(a1))
    with pytest.raises(ValueError):
        DqbfInstance([a1], [(b1, (a2,))], Atom(b1))
    # free variables in the matrix are rejected
    with pytest.raises(ValueError):
        DqbfInstance([a1], [(b1, ())], Atom(b2))
    # dependence atoms are not matrix material
    with pytest.raises(ValueError):
        DqbfInstance([a1], [(b1, ())], Dep((a1,), b1))


def test_constraints_normalized_to_declaration_order():
    inst = DqbfInstance([a1, a2], [(b1, (a2, a1))], Atom(b1))
    assert inst.existentials[0][1] == (a1, a2)


def test_eval_identity_witness():
    w = dqbf_eval(identity_instance())
    assert w is not None
    assert w.tables == {b1: (0, 1)}
    assert "b1(a1): 0->0 1->1" in w.describe()
    assert replay_witness(identity_instance(), w)


def test_eval_blind_has_no_witness():
    assert dqbf_eval(blind_instance()) is None


def test_witness_is_first_in_lexicographic_order():
    # the constant-0 table fails, then (0,1) is found
    w = dqbf_eval(identity_instance())
    assert w.tables[b1] == (0, 1)


def test_replay_witness_validates_shape():
    w = dqbf_eval(identity_instance())
    with pytest.raises(ValueError):
        replay_witness(blind_instance(), w)
    from teamlogic import SkolemWitness

    bad = SkolemWitness(tables={b1: (0,)}, constraints=w.constraints)
    with pytest.raises(ValueError):
        replay_witness(identity_instance(), bad)


def test_eval_guard():
    universals = [PropSymbol(f"u{i}") for i in range(13)]
    exist = [(b1, tuple(universals))]
    matrix = Or(Atom(b1), NegAtom(b1))
    inst = DqbfInstance(universals, exist, matrix)
    with pytest.raises(GuardLimitError):
        dqbf_eval(inst, max_table_bits=4096)


def test_reduction_frozen_examples():
    g = reduce_to_pd(identity_instance())
    assert render(g) == "a1 & b1 | !a1 & !b1 | dep(a1; b1)"
    assert pd_valid(g)
    g2 = reduce_to_pd(blind_instance())
    assert render(g2) == "a1 & b1 | !a1 & !b1 | dep(; b1)"
    assert not pd_valid(g2)


def test_text_format_round_trip():
    inst = DqbfInstance(
        [a1, a2],
        [(b1, (a1,)), (b2, (a1, a2))],
        parse_prop("a1 & b1 | b2"),
    )
    text = render_dqbf(inst)
    assert parse_dqbf(text) == inst
    lines = text.splitlines()
    assert lines[0] == "forall a1 a2"
    assert lines[1] == "exists b1 {a1} b2 {a1, a2}"
    assert lines[2].startswith("matrix ")


def test_parse_dqbf_accepts_comments_and_empty_sets():
    text = "\n".join(
        [
            "# toy instance",
            "forall a1",
            "",
            "exists b1 {}",
            "matrix b1 | !b1",
        ]
    )
    inst = parse_dqbf(text)
    assert inst.existentials == ((b1, ()),)


def test_parse_dqbf_errors():
    with pytest.raises(ParseError):
        parse_dqbf("forall a1\nmatrix a1")
    with pytest.raises(ParseError):
        parse_dqbf("forall a1\nexists b1\nmatrix b1")
    with pytest.raises(ParseError):
        parse_dqbf("forall a1\nexists b1 {a9}\nmatrix b1")


def test_qbf_text_round_trip():
    q = QbfInstance([("A", a1), ("E", b1)], parse_prop("a1 | b1"))
    text = render_qbf(q)
    assert parse_qbf(text) == q
    assert text.splitlines()[0] == "prefix A a1 E b1"


def test_qbf_eval():
    assert qbf_eval(QbfInstance([("A", a1), ("E", b1)],
                                parse_prop("a1 & b1 | !a1 & !b1")))
    assert not qbf_eval(QbfInstance([("E", b1), ("A", a1)],
                                    parse_prop("a1 & b1 | !a1 & !b1")))
    with pytest.raises(GuardLimitError):
        qbf_eval(
            QbfInstance(
                [("A", PropSymbol(f"v{i}")) for i in range(30)],
                Atom(PropSymbol("v0")),
            ),
        )


def test_qbf_to_dqbf_constraints():
    q = QbfInstance(
        [("A", a1), ("E", b1), ("A", a2), ("E", b2)], parse_prop("b1 | b2")
    )
    d = qbf_to_dqbf(q)
    assert d.universals == (a1, a2)
    assert dict(d.existentials) == {b1: (a1,), b2: (a1, a2)}
    assert is_simple_constraint(d)


def test_simple_constraint_detection():
    chain = DqbfInstance([a1, a2], [(b1, (a1,)), (b2, (a1, a2))], Atom(b1))
    assert is_simple_constraint(chain)
    fork = DqbfInstance([a1, a2], [(b1, (a1,)), (b2, (a2,))], Atom(b1))
    assert not is_simple_constraint(fork)
    assert dqbf_to_qbf(chain) is not None
    with pytest.raises(ValueError):
        dqbf_to_qbf(fork)


def test_round_trip_preserves_constraint_sets():
    q = QbfInstance(
        [("E", b1), ("A", a1), ("A", a2), ("E", b2)], parse_prop("b1 | b2 | a1")
    )
    d = qbf_to_dqbf(q)
    q2 = dqbf_to_qbf(d)
    d2 = qbf_to_dqbf(q2)
    assert d2.universals == d.universals
    assert d2.existentials == d.existentials
    assert qbf_eval(q2) == qbf_eval(q)


def test_eval_agrees_with_reduction_on_small_pool():
    pool = dedup_pool_by_table(nnf_pool([a1, b1], 5))
    for f, _, _ in pool:
        for deps in ((), (a1,)):
            inst = DqbfInstance([a1], [(b1, deps)], f)
            w = dqbf_eval(inst)
            assert (w is not None) == pd_valid(reduce_to_pd(inst))
            if w is not None:
                assert replay_witness(inst, w)


def test_skolem_search_is_exhaustive():
    # b1 with no inputs admits only two tables; both fail here
    inst = DqbfInstance(
        [a1], [(b1, ())], parse_prop("a1 & b1 | !a1 & !b1")
    )
    assert dqbf_eval(inst) is None
    # b2 sees a1, b1 does not; only b2 can carry the copy
    inst2 = DqbfInstance(
        [a1],
        [(b1, ()), (b2, (a1,))],
        parse_prop("(b1 | !b1) & (a1 & b2 | !a1 & !b2)"),
    )
    w = dqbf_eval(inst2)
    assert w is not None and w.tables[b2] == (0, 1)
