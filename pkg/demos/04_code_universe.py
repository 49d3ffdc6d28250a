"""The closed universe of type codes and its decidable equality.

Codes are built from named base types and the type formers; each decodes
to a canonical finite set. Equality of codes depends on the chosen
predicate: under `isprop`, any two codes decoding to propositions of the
same size are equal (propositional extensionality), while structurally
different codes with larger decodings stay distinct. Under `none`,
equality degenerates to structural tree equality. Predicates that admit
multi-element decodings break the uniqueness of equality proofs — the
designed failure the negative control exhibits.
"""

from setverse import (
    CEmpty,
    CId,
    CN,
    CPi,
    CSum,
    CUnit,
    PredicateSpec,
    UniverseSig,
    code_sexpr,
    el,
    enumerate_codes,
    eqv_total,
    is_equal,
)

sig = UniverseSig({"bool": 2, "tri": 3})
isprop = PredicateSpec.parse("isprop")
none = PredicateSpec.parse("none")

showcase = [
    CN("bool"),
    CPi(CN("bool"), (CUnit(), CUnit())),
    CSum(CUnit(), CUnit()),
    CId(CN("tri"), 1, 1),
    CId(CN("tri"), 0, 1),
    CEmpty(),
]
print("decodings:")
for c in showcase:
    print(f"  {code_sexpr(c):38} |el| = {el(sig, c).size}")

print("\npropositional extensionality at work (pred = isprop):")
pairs = [
    (CUnit(), CId(CN("tri"), 1, 1)),
    (CEmpty(), CId(CN("tri"), 0, 1)),
    (CN("bool"), CSum(CUnit(), CUnit())),
]
for c0, c1 in pairs:
    print(f"  {code_sexpr(c0)} = {code_sexpr(c1)} ?", is_equal(sig, isprop, c0, c1))

print("\nthe same pairs without the predicate (pred = none):")
for c0, c1 in pairs:
    print(f"  {code_sexpr(c0)} = {code_sexpr(c1)} ?", is_equal(sig, none, c0, c1))

print("\npath sets are at most single-valued for propositional predicates:")
for c0, c1 in [(CN("bool"), CN("bool")), (CUnit(), CId(CN("tri"), 2, 2))]:
    paths = eqv_total(sig, isprop, c0, c1)
    print(f"  |paths({code_sexpr(c0)}, {code_sexpr(c1)})| = {len(paths)}")

print("\nbut a predicate admitting two-element types breaks that:")
size2 = PredicateSpec.parse("size=2")
paths = eqv_total(sig, size2, CN("bool"), CN("bool"))
print(f"  under size=2, |paths(bool, bool)| = {len(paths)}  (both bijections collapse)")

print("\nenumerating small codes deterministically:")
for c in enumerate_codes(sig, 2, 6)[:12]:
    print("  ", code_sexpr(c))
