"""
Dependency quantified Boolean formulas
======================================

A DQBF declares, per existential variable, exactly which universals it
may observe. Truth means a family of Skolem tables respecting those
constraints. Small instances are decided by direct table search, and
every instance compiles into a propositional dependence validity
question.
"""

from teamlogic import (
    dqbf_eval,
    parse_dqbf,
    dqbf_to_qbf,
    parse_prop,
    pd_valid,
    qbf_to_dqbf,
    parse_qbf,
    reduce_to_pd,
    render,
    replay_witness,
)

# The textual format mirrors the declaration order: universals, then
# each existential with its observation set in braces.
text = """
forall a1 a2
exists b1 {a1} b2 {a1, a2}
matrix (a1 & b1 | !a1 & !b1) & (b2 | !a2)
"""
inst = parse_dqbf(text)
print("instance:", inst)

# b1 must copy a1 while seeing only a1, and b2 must cover a2 with full
# sight. Both are achievable, so a witness exists.
witness = dqbf_eval(inst)
print("witness tables:")
print(witness.describe())
print("replay ok:", replay_witness(inst, witness))

# Blind the first existential and the copy constraint dies: b1 cannot
# track a1 without seeing it.
blind = parse_dqbf(text.replace("b1 {a1}", "b1 {}"))
print("blinded:", dqbf_eval(blind))

# The reduction. Truth of the instance coincides with validity of a
# propositional dependence formula: the matrix joined by | with one
# dependence atom per observation constraint. A team splitting into
# the dep parts carves out the rows a Skolem family would handle.
reduced = reduce_to_pd(inst)
print("reduced formula:", render(reduced))
print("dqbf true:", dqbf_eval(inst) is not None, "| reduction valid:", pd_valid(reduced))

# Ordinary QBF is the chain special case: each existential sees every
# universal quantified before it.
qbf = parse_qbf("prefix A a1 E b1\nmatrix a1 & b1 | !a1 & !b1")
d = qbf_to_dqbf(qbf)
print("qbf as dqbf:", d)
print("round trip:", dqbf_to_qbf(d))
