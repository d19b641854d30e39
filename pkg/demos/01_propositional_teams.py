"""
Teams of propositional assignments
==================================

A team is a set of assignments evaluated as one unit. Dependence atoms
only make sense at this level: dep(p; q) asks whether q is a function
of p across the whole team, which no single assignment can express.
"""

from teamlogic import (
    PropTeam,
    parse_prop,
    pd_sat,
    pd_valid,
    pt_eval,
    render,
    team_from_dict,
)

# Build a team from plain dicts. Rows are assignments over the same
# domain; duplicates collapse because a team is a set.
team = team_from_dict(
    {
        "domain": ["p", "q"],
        "rows": [[0, 0], [0, 1], [1, 1]],
    }
)
print("team rows:", sorted(team.rows))

# q is not determined by p here: the two rows with p=0 disagree on q.
f = parse_prop("dep(p; q)")
print(render(f), "->", pt_eval(team, f))

# Drop the offending row and the dependence holds.
smaller = PropTeam(team.domain, [(0, 0), (1, 1)])
print(render(f), "on the smaller team ->", pt_eval(smaller, f))

# Disjunction splits the team. Each half must satisfy its disjunct, so
# a split can repair a failed dependence by separating the witnesses.
g = parse_prop("dep(p; q) | dep(p; q)")
print(render(g), "->", pt_eval(team, g))

# The constancy atom dep(; p) says p is constant on the team. It fails
# on any team that mixes p values, which is why it is not valid.
c = parse_prop("dep(; p)")
print(render(c), "valid:", pd_valid(c))

# Two copies joined by | are valid: any team splits into its p=0 part
# and its p=1 part, and each part is constant in p.
cc = parse_prop("dep(; p) | dep(; p)")
print(render(cc), "valid:", pd_valid(cc))

# Satisfiability is cheap in team semantics. The empty team satisfies
# everything, so the interesting question allows a witness row.
wit = pd_sat(parse_prop("p & dep(; q)"), require_nonempty=True)
print("nonempty witness:", wit.rows if wit else None)
