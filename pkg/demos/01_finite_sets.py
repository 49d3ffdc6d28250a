"""Tour of the ground floor: canonical finite sets, maps, and bijections.

Everything the kernel computes lives over sets {0, ..., n-1}. Paths
between sets are bijections, and the truncation level of a set is read
off its size: exactly one element means contractible (-2), at most one
means proposition (-1), and any set is a set (0).
"""

from setverse import (
    Bij,
    ElemMap,
    FinSet,
    compose_bij,
    enum_bijs,
    enum_maps,
    invert_bij,
    trunc_level,
)

bool2 = FinSet(2)
tri = FinSet(3)

print("maps from", bool2, "to", tri)
for m in enum_maps(bool2, tri):
    print("  ", m.targets)

print("\nbijections of", tri, "(all 3! of them, lexicographic):")
for p in enum_bijs(tri, tri):
    print("  ", p.fwd.targets)

swap = Bij.from_targets(bool2, bool2, (1, 0))
print("\nswap composed with itself is the identity:", compose_bij(swap, swap).is_identity())
print("inverting swap gives swap back:", invert_bij(swap) == swap)

print("\ntruncation levels by size:")
for n in range(4):
    print(f"  |A| = {n}  ->  level {trunc_level(FinSet(n)).level}")

print("\nfor propositions, the path set is a point exactly on matching sizes:")
for na in (0, 1):
    for nb in (0, 1):
        print(f"  bijections({na}, {nb}) = {len(enum_bijs(FinSet(na), FinSet(nb)))}")

# a non-trivial composite: a 2-cycle conjugated through an inclusion pattern
f = ElemMap(bool2, tri, (0, 2))
print("\nan injection 2 -> 3:", f.targets, "- composing with a 3-cycle:")
cycle = Bij.from_targets(tri, tri, (1, 2, 0))
print("  ", f.then(cycle.fwd).targets)
