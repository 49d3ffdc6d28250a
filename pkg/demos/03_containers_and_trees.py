"""Container signatures, their trees, and equality witness sets.

A container table declares shapes with target and source labels; its
well-indexed trees are the terms of the signature. Two trees compare
through shape identifications, except over indices where a chosen
predicate holds — there the equality collapses to a single witness,
identifying everything. A fixpoint saturation oracle recomputes the same
relation without the recursive engine, and the two must agree.
"""

from setverse import (
    EqEngine,
    FiniteContainerTable,
    LabelPred,
    NoIndex,
    SaturationOracle,
    TableFamily,
    TableShape,
    enumerate_trees,
    ext_enumerate,
    retains_check,
    verify_encode_decode,
)

table = FiniteContainerTable(
    ["nat", "flag"],
    [
        TableShape("zero", "nat", ()),
        TableShape("succ", "nat", (("prev", "nat"),)),
        TableShape("yes", "flag", ()),
        TableShape("no", "flag", ()),
    ],
)

trees = enumerate_trees(table, 3)
print(f"trees of depth <= 3: {len(trees)}")
for t in trees:
    print("  ", t)

print("\nwithout a predicate, equality is structural:")
engine = EqEngine(table, NoIndex())
zero, succ_zero = trees[0], trees[3]
refl = table.refl_path("nat")
print("  zero = zero:      ", engine.count(refl, zero, zero) > 0)
print("  zero = succ(zero):", engine.count(refl, zero, succ_zero) > 0)

print("\ncollapsing the flag label identifies yes and no:")
engine2 = EqEngine(table, LabelPred(["flag"]))
yes, no = trees[1], trees[2]
ws = engine2.witnesses(table.refl_path("flag"), yes, no)
print("  witness set:", ws.witnesses)

print("\nthe saturation oracle recomputes the same relation:")
oracle = SaturationOracle(table, LabelPred(["flag"]), trees)
print("  oracle relates yes and no:", oracle.related(table.refl_path("flag"), yes, no))
print("  full agreement:", verify_encode_decode(table, LabelPred(["flag"]), 3).passed)

print("\nextensions over a family assignment:")
fam = TableFamily.discrete({"nat": 2, "flag": 1})
for label in table.labels:
    els = ext_enumerate(table, fam, label)
    print(f"  at {label}: {len(els)} elements")

print("\nretention of truncation over the same family:")
diag = retains_check(table, fam)
print(f"  passed={diag.passed} over {diag.details['cases']} pairs")
