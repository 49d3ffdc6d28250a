"""Pushouts and joins of finite sets, and what monos preserve.

The pushout glues two sets along a span; the join glues along the full
product, which collapses everything to a point as soon as both factors
are inhabited. Pushing out along an injective leg keeps the opposite
inclusion injective and makes the square a pullback — the structural
facts the equality kernel leans on.
"""

from setverse import (
    ElemMap,
    FinSet,
    Span,
    check_join_prop,
    check_pushout_mono,
    check_pushout_mono_trunc,
    join,
    pushout,
)

# glue two two-element sets along a shared point
span = Span(
    FinSet(1),
    FinSet(2),
    FinSet(2),
    ElemMap(FinSet(1), FinSet(2), (0,)),
    ElemMap(FinSet(1), FinSet(2), (0,)),
)
po = pushout(span)
print("gluing 2 and 2 along one point gives", po.D)
print("  left inclusion: ", po.inl.targets)
print("  right inclusion:", po.inr.targets)

diag = check_pushout_mono(span)
print("mono leg consequences:", diag.details)

print("\njoin sizes (rows: |X| = 0..3, cols: |Y| = 0..3):")
for x in range(4):
    print("  ", [join(FinSet(x), FinSet(y)).size for y in range(4)])

print("\njoins of propositions stay propositions:")
for x in (0, 1):
    for y in (0, 1):
        d = check_join_prop(FinSet(x), FinSet(y))
        print(f"  |X|={x} |Y|={y}: join size {d.details['join']}, passed={d.passed}")

# preservation of levels: at the propositional level the side condition
# asks for a map B×C -> A; at the set level everything is vacuous
prop_span = Span(
    FinSet(1),
    FinSet(1),
    FinSet(1),
    ElemMap(FinSet(1), FinSet(1), (0,)),
    ElemMap(FinSet(1), FinSet(1), (0,)),
)
h = ElemMap(FinSet(1), FinSet(1), (0,))
print("\nprop-level preservation:", check_pushout_mono_trunc(prop_span, -1, h).passed)
print("set-level preservation:", check_pushout_mono_trunc(span, 0).details["note"])
