"""Canonical finite sets, maps, bijections, and truncation levels.

All semantic types in the kernel are the canonical sets ``{0, ..., n-1}``;
two sets are identical exactly when their sizes agree. Paths between sets
are bijections, enumerated in a fixed lexicographic order so that every
downstream witness set and report is byte-stable across runs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import DomainMismatch, EnumerationTooLarge

#: Maps are enumerated only while |B|^|A| stays under this cap.
MAP_ENUM_CAP = 10**6
#: Bijections are enumerated only for sets of at most this size.
BIJ_SIZE_CAP = 6


@dataclass(frozen=True)
class FinSet:
    """The canonical finite set {0, ..., size-1}."""

    size: int

    def __post_init__(self):
        if not isinstance(self.size, int) or self.size < 0:
            raise ValueError(f"finite set size must be a nonnegative integer, got {self.size!r}")

    @property
    def elements(self) -> range:
        return range(self.size)

    def __repr__(self) -> str:
        return f"FinSet({self.size})"


@dataclass(frozen=True)
class ElemMap:
    """A function between canonical finite sets, given by its target list."""

    dom: FinSet
    cod: FinSet
    targets: tuple[int, ...]

    def __post_init__(self):
        if len(self.targets) != self.dom.size:
            raise ValueError(
                f"map has {len(self.targets)} targets but domain size {self.dom.size}"
            )
        for x, t in enumerate(self.targets):
            if not 0 <= t < self.cod.size:
                raise ValueError(f"target {t} of element {x} outside codomain of size {self.cod.size}")

    @classmethod
    def identity(cls, a: FinSet) -> "ElemMap":
        return cls(a, a, tuple(range(a.size)))

    def __call__(self, x: int) -> int:
        return self.targets[x]

    def then(self, other: "ElemMap") -> "ElemMap":
        """Diagrammatic composition: apply self first, then other."""
        if self.cod != other.dom:
            raise DomainMismatch(f"cannot compose map into {self.cod} with map from {other.dom}")
        return ElemMap(self.dom, other.cod, tuple(other.targets[t] for t in self.targets))

    def is_identity(self) -> bool:
        return self.dom == self.cod and all(t == x for x, t in enumerate(self.targets))


@dataclass(frozen=True)
class Bij:
    """A bijection between canonical finite sets, stored with its inverse."""

    fwd: ElemMap
    inv: ElemMap

    def __post_init__(self):
        if self.fwd.dom != self.inv.cod or self.fwd.cod != self.inv.dom:
            raise ValueError("forward and inverse maps do not share endpoints")
        for x in self.fwd.dom.elements:
            if self.inv.targets[self.fwd.targets[x]] != x:
                raise ValueError("inverse does not undo forward map")
        for y in self.fwd.cod.elements:
            if self.fwd.targets[self.inv.targets[y]] != y:
                raise ValueError("forward does not undo inverse map")

    @classmethod
    def from_targets(cls, dom: FinSet, cod: FinSet, targets: tuple[int, ...]) -> "Bij":
        fwd = ElemMap(dom, cod, targets)
        inv_targets = [0] * cod.size
        seen = [False] * cod.size
        for x, t in enumerate(targets):
            if seen[t]:
                raise ValueError(f"targets {targets} are not injective")
            seen[t] = True
            inv_targets[t] = x
        if dom.size != cod.size:
            raise ValueError(f"no bijection between sizes {dom.size} and {cod.size}")
        return cls(fwd, ElemMap(cod, dom, tuple(inv_targets)))

    @classmethod
    def identity(cls, a: FinSet) -> "Bij":
        m = ElemMap.identity(a)
        return cls(m, m)

    @property
    def dom(self) -> FinSet:
        return self.fwd.dom

    @property
    def cod(self) -> FinSet:
        return self.fwd.cod

    def __call__(self, x: int) -> int:
        return self.fwd.targets[x]

    def is_identity(self) -> bool:
        return self.fwd.is_identity()

    def __repr__(self) -> str:
        return f"Bij{self.fwd.targets}"


def compose_bij(p: Bij, q: Bij) -> Bij:
    """Diagrammatic composition of bijections: first p, then q."""
    if p.cod != q.dom:
        raise DomainMismatch(f"cannot compose bijection into {p.cod} with one from {q.dom}")
    return Bij(p.fwd.then(q.fwd), q.inv.then(p.inv))


def invert_bij(p: Bij) -> Bij:
    return Bij(p.inv, p.fwd)


def enum_maps(a: FinSet, b: FinSet, cap: int = MAP_ENUM_CAP) -> tuple[ElemMap, ...]:
    """All maps a -> b in lexicographic order of their target sequences.

    There are |b|^|a| of them; exceeding ``cap`` raises instead of
    truncating silently.
    """
    count = b.size**a.size
    if count > cap:
        raise EnumerationTooLarge(f"{b.size}^{a.size} = {count} maps exceeds cap {cap}")
    return tuple(
        ElemMap(a, b, targets) for targets in itertools.product(range(b.size), repeat=a.size)
    )


def enum_bijs(a: FinSet, b: FinSet, cap: int = BIJ_SIZE_CAP) -> tuple[Bij, ...]:
    """All bijections a ≅ b, lexicographic by target sequence; empty on size mismatch."""
    if a.size != b.size:
        return ()
    if a.size > cap:
        raise EnumerationTooLarge(f"bijection enumeration for size {a.size} exceeds cap {cap}")
    return tuple(
        Bij.from_targets(a, b, targets) for targets in itertools.permutations(range(b.size))
    )


def bijs_extending(a: FinSet, b: FinSet, forced: dict[int, int], cap: int = BIJ_SIZE_CAP) -> tuple[Bij, ...]:
    """All bijections a ≅ b agreeing with a partial assignment, lexicographic.

    Used to enumerate structure-respecting identifications without scanning
    the full symmetric group.
    """
    if a.size != b.size:
        return ()
    if a.size > cap:
        raise EnumerationTooLarge(f"bijection enumeration for size {a.size} exceeds cap {cap}")
    used = set()
    for x, y in forced.items():
        if not (0 <= x < a.size and 0 <= y < b.size):
            raise ValueError(f"forced pair ({x}, {y}) out of range")
        if y in used:
            return ()  # two sources forced onto one target
        used.add(y)
    if len(forced) != len(set(forced)):  # dict keys are unique; kept for clarity
        return ()
    free_src = [x for x in a.elements if x not in forced]
    free_tgt = [y for y in b.elements if y not in used]
    out = []
    for perm in itertools.permutations(free_tgt):
        targets = [0] * a.size
        for x, y in forced.items():
            targets[x] = y
        for x, y in zip(free_src, perm):
            targets[x] = y
        out.append(Bij.from_targets(a, b, tuple(targets)))
    return tuple(out)


@dataclass(frozen=True)
class TruncLevel:
    """A truncation level in {-2, -1, 0}: contractible, proposition, set."""

    level: int

    def __post_init__(self):
        if self.level not in (-2, -1, 0):
            raise ValueError(f"truncation level must be -2, -1 or 0, got {self.level}")


def trunc_level(a: FinSet) -> TruncLevel:
    """The least truncation level of a canonical finite set."""
    if a.size == 1:
        return TruncLevel(-2)
    if a.size == 0:
        return TruncLevel(-1)
    return TruncLevel(0)


def is_prop(a: FinSet) -> bool:
    """A set is a proposition when it has at most one element."""
    return trunc_level(a).level <= -1


def is_contr(a: FinSet) -> bool:
    """A set is contractible when it has exactly one element."""
    return trunc_level(a).level == -2
