"""Set-level pushouts and joins of finite sets, with mono and pullback diagnostics.

The pushout here is the 0-truncated one: the quotient of the disjoint union
B ⊔ C by the equivalence relation generated by ``inl(f(a)) ~ inr(g(a))``.
It agrees with the homotopy pushout exactly in the situations the kernel
uses it (one leg mono, or a propositional join factor); the consuming
checks assert those hypotheses explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionViolated
from .fincore import ElemMap, FinSet, is_prop
from .report import Diagnostic


@dataclass(frozen=True)
class Span:
    """A span B <-f- A -g-> C of finite sets."""

    A: FinSet
    B: FinSet
    C: FinSet
    f: ElemMap
    g: ElemMap

    def __post_init__(self):
        if self.f.dom != self.A or self.f.cod != self.B:
            raise ValueError(f"f must map {self.A} to {self.B}")
        if self.g.dom != self.A or self.g.cod != self.C:
            raise ValueError(f"g must map {self.A} to {self.C}")


@dataclass(frozen=True)
class PushoutResult:
    """A pushout cocone: the quotient set with its two inclusions."""

    D: FinSet
    inl: ElemMap
    inr: ElemMap


class _UnionFind:
    """Plain union-find with path compression; first-seen root wins ties arbitrarily."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[rj] = ri


def pushout(s: Span) -> PushoutResult:
    """The set-level pushout of a span.

    Classes are renumbered by first occurrence scanning all of B in order,
    then all of C, so the result is deterministic.
    """
    nb, nc = s.B.size, s.C.size
    uf = _UnionFind(nb + nc)
    for a in s.A.elements:
        uf.union(s.f(a), nb + s.g(a))
    renumber: dict[int, int] = {}
    classes = []
    for i in range(nb + nc):
        root = uf.find(i)
        if root not in renumber:
            renumber[root] = len(renumber)
        classes.append(renumber[root])
    d = FinSet(len(renumber))
    inl = ElemMap(s.B, d, tuple(classes[:nb]))
    inr = ElemMap(s.C, d, tuple(classes[nb:]))
    return PushoutResult(d, inl, inr)


def product_span(x: FinSet, y: FinSet) -> Span:
    """The span X <- X×Y -> Y of the two projections; pairs are numbered x*|Y|+y."""
    prod = FinSet(x.size * y.size)
    proj_x = ElemMap(prod, x, tuple(i // y.size for i in prod.elements))
    proj_y = ElemMap(prod, y, tuple(i % y.size for i in prod.elements))
    return Span(prod, x, y, proj_x, proj_y)


def join(x: FinSet, y: FinSet) -> FinSet:
    """The join of two sets: the pushout of X and Y under their product.

    At set level: X if Y is empty, Y if X is empty, a singleton otherwise.
    """
    return pushout(product_span(x, y)).D


def is_mono(f: ElemMap) -> bool:
    """A map of sets is mono exactly when it is injective."""
    return len(set(f.targets)) == len(f.targets)


def check_pushout_mono(s: Span) -> Diagnostic:
    """Check the two consequences of pushing out along a mono.

    With f : A -> B injective: the opposite inclusion inr : C -> D must be
    mono, and the pushout square must be a pullback, i.e. the pairs (b, c)
    with inl(b) = inr(c) are exactly the pairs (f(a), g(a)).
    """
    if not is_mono(s.f):
        raise PreconditionViolated("check_pushout_mono requires the first leg to be mono")
    po = pushout(s)
    inr_mono = is_mono(po.inr)
    meeting = {(b, c) for b in s.B.elements for c in s.C.elements if po.inl(b) == po.inr(c)}
    image = {(s.f(a), s.g(a)) for a in s.A.elements}
    pullback = meeting == image
    return Diagnostic(
        check="pushout-mono",
        passed=inr_mono and pullback,
        details={
            "span": _span_details(s),
            "pushout_size": po.D.size,
            "inr_mono": inr_mono,
            "pullback": pullback,
        },
    )


def check_join_prop(x: FinSet, y: FinSet) -> Diagnostic:
    """Check that the join of two propositions is a proposition.

    On inputs that are not both propositions the implication is vacuous;
    the diagnostic says so rather than silently passing.
    """
    j = join(x, y)
    hypothesis = is_prop(x) and is_prop(y)
    ok = is_prop(j) if hypothesis else True
    return Diagnostic(
        check="join-prop",
        passed=ok,
        vacuous=not hypothesis,
        details={"x": x.size, "y": y.size, "join": j.size},
    )


def check_pushout_mono_trunc(s: Span, n: int, h: ElemMap | None = None) -> Diagnostic:
    """Check preservation of truncation level by pushouts along a mono.

    For n = -1: if B and C are propositions and a map h : B×C -> A is
    supplied, the pushout must be a proposition. When no such map can
    exist (A empty but B×C nonempty) the hypothesis is unsatisfiable and
    the case is reported as vacuous. For n = 0 every finite set is a set,
    so the check passes vacuously by construction; it is kept so suites
    account for the statement explicitly.
    """
    if n not in (-1, 0):
        raise PreconditionViolated(f"truncation check supports n in {{-1, 0}}, got {n}")
    if not is_mono(s.f):
        raise PreconditionViolated("check_pushout_mono_trunc requires the first leg to be mono")
    if n == 0:
        return Diagnostic(
            check="pushout-mono-trunc",
            passed=True,
            vacuous=True,
            details={"n": 0, "note": "VACUOUS: every finite set is 0-truncated"},
        )
    prod_size = s.B.size * s.C.size
    if h is None:
        if s.A.size == 0 and prod_size > 0:
            return Diagnostic(
                check="pushout-mono-trunc",
                passed=True,
                vacuous=True,
                details={"n": -1, "note": "VACUOUS: no map B×C -> A exists"},
            )
        raise PreconditionViolated("n = -1 requires the side-condition map h : B×C -> A")
    if h.dom.size != prod_size or h.cod != s.A:
        raise PreconditionViolated(f"h must map B×C (size {prod_size}) to {s.A}")
    hypothesis = is_prop(s.B) and is_prop(s.C)
    po = pushout(s)
    ok = is_prop(po.D) if hypothesis else True
    return Diagnostic(
        check="pushout-mono-trunc",
        passed=ok,
        vacuous=not hypothesis,
        details={"n": -1, "span": _span_details(s), "pushout_size": po.D.size},
    )


def _span_details(s: Span) -> dict:
    return {
        "A": s.A.size,
        "B": s.B.size,
        "C": s.C.size,
        "f": list(s.f.targets),
        "g": list(s.g.targets),
    }
