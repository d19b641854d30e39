"""
Team evaluation on Kripke structures
====================================

Worlds replace assignments, and the modalities move whole teams along
the accessibility relation. A diamond picks one successor team, a box
takes every reachable world at once.
"""

from teamlogic import (
    KripkeStructure,
    PropSymbol,
    bisimilar,
    disjoint_union,
    mt_eval,
    parse_modal,
    render,
    team_bisimilar,
)

p, q = PropSymbol("p"), PropSymbol("q")

# A three world chain: a -> b -> c, with p true at the ends.
m = KripkeStructure(
    worlds=["a", "b", "c"],
    edges=[("a", "b"), ("b", "c")],
    valuation={p: frozenset({"a", "c"}), q: frozenset({"b"})},
)

# Pointwise facts lift to singleton teams.
f = parse_modal("<> q")
print(render(f), "at {a}:", mt_eval(m, {"a"}, f))

# A modal dependence atom constrains the team, not a single world.
# Here <> p is true at b (it sees c) and false at c, so the two worlds
# disagree on the argument and the atom holds vacuously.
g = parse_modal("dep(<> p; q)")
print(render(g), "at {b, c}:", mt_eval(m, {"b", "c"}, g))

# For a failure we need two worlds that agree on the argument but
# differ on the target. Add d with an edge into c: now b and d both
# satisfy <> p, yet q holds only at b.
m2 = KripkeStructure(
    worlds=["a", "b", "c", "d"],
    edges=[("a", "b"), ("b", "c"), ("d", "c")],
    valuation={p: frozenset({"a", "c"}), q: frozenset({"b"})},
)
print(render(g), "at {b, d}:", mt_eval(m2, {"b", "d"}, g))

# Box pushes the whole team forward: [] q on {a} means q holds on the
# full successor set of a.
h = parse_modal("[] q")
print(render(h), "at {a}:", mt_eval(m, {"a"}, h))

# Disjoint union relabels with L: and R: prefixes and never adds edges
# between the halves, so truth at a team only depends on its own half.
u = disjoint_union(m, m)
print("union worlds:", sorted(u.worlds))
print(render(f), "at {L:a}:", mt_eval(u, {"L:a"}, f))

# Bisimilar worlds satisfy the same formulas. The copy of a world in
# the union is bisimilar to the original.
print("a ~ L:a:", bisimilar(m, "a", u, "L:a"))
print("team {a,b} ~ {L:a,L:b}:", team_bisimilar(m, {"a", "b"}, u, {"L:a", "L:b"}))
