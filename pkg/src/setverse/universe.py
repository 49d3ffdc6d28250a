"""A closed universe of type codes over finite sets, with decidable equality.

Codes decode to canonical finite sets through a fixed element codec, and
compare equal through witness sets computed from the type-former
signature: each former contributes shape identifications carrying exactly
the data of an equality between two constructor applications. Equality of
codes is relative to a bijection-invariant predicate choosing which
decodings are identified up to logical equivalence; the verification
suites check that this yields a partially univalent, 0-truncated universe
and that dropping the predicate degenerates equality to structural tree
equality.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .colimits import PushoutResult, Span, pushout
from .container import ContainerSig, ShapeIdent
from .errors import (
    EnumerationTooLarge,
    MalformedCode,
    PreconditionViolated,
)
from .fincore import (
    Bij,
    ElemMap,
    FinSet,
    compose_bij,
    enum_bijs,
    enum_maps,
    invert_bij,
)
from .report import VerifyReport
from .wtrees import EqEngine, WitnessSet, WTree

EL_SIZE_CAP = 10**6
CODE_ENUM_CAP = 200000

FORMER_ORDER = ("unit", "empty", "sum", "sigma", "pi", "id", "po0")


# --------------------------------------------------------------------------
# Codes
# --------------------------------------------------------------------------


class Code:
    """Base class of type codes; all constructors are frozen dataclasses."""

    __slots__ = ()


@dataclass(frozen=True)
class CN(Code):
    """Code for a named base type from the nullary table."""

    name: str


@dataclass(frozen=True)
class CUnit(Code):
    pass


@dataclass(frozen=True)
class CEmpty(Code):
    pass


@dataclass(frozen=True)
class CSum(Code):
    left: Code
    right: Code


@dataclass(frozen=True)
class CSigma(Code):
    base: Code
    fam: tuple[Code, ...]


@dataclass(frozen=True)
class CPi(Code):
    base: Code
    fam: tuple[Code, ...]


@dataclass(frozen=True)
class CId(Code):
    base: Code
    x: int
    y: int


@dataclass(frozen=True)
class CPo0(Code):
    """Code for the set-level pushout of a span of codes."""

    apex: Code
    left: Code
    right: Code
    f: ElemMap
    g: ElemMap


def node_count(c: Code) -> int:
    if isinstance(c, (CN, CUnit, CEmpty)):
        return 1
    if isinstance(c, CSum):
        return 1 + node_count(c.left) + node_count(c.right)
    if isinstance(c, (CSigma, CPi)):
        return 1 + node_count(c.base) + sum(node_count(b) for b in c.fam)
    if isinstance(c, CId):
        return 1 + node_count(c.base)
    if isinstance(c, CPo0):
        return 1 + node_count(c.apex) + node_count(c.left) + node_count(c.right)
    raise MalformedCode(f"not a code: {c!r}")


def code_sexpr(c: Code) -> str:
    """Canonical textual form of a code; parsing this form is the inverse."""
    if isinstance(c, CN):
        return f"(n {c.name})"
    if isinstance(c, CUnit):
        return "(unit)"
    if isinstance(c, CEmpty):
        return "(empty)"
    if isinstance(c, CSum):
        return f"(sum {code_sexpr(c.left)} {code_sexpr(c.right)})"
    if isinstance(c, CSigma):
        fam = " ".join(code_sexpr(b) for b in c.fam)
        return f"(sigma {code_sexpr(c.base)} ({fam}))"
    if isinstance(c, CPi):
        fam = " ".join(code_sexpr(b) for b in c.fam)
        return f"(pi {code_sexpr(c.base)} ({fam}))"
    if isinstance(c, CId):
        return f"(id {code_sexpr(c.base)} {c.x} {c.y})"
    if isinstance(c, CPo0):
        f = " ".join(str(t) for t in c.f.targets)
        g = " ".join(str(t) for t in c.g.targets)
        return (
            f"(po0 {code_sexpr(c.apex)} {code_sexpr(c.left)} {code_sexpr(c.right)} ({f}) ({g}))"
        )
    raise MalformedCode(f"not a code: {c!r}")


# --------------------------------------------------------------------------
# Predicates on decodings
# --------------------------------------------------------------------------


_PRED_KINDS = ("none", "isprop", "iscontr", "all", "size_le", "size_eq")


@dataclass(frozen=True)
class PredicateSpec:
    """A bijection-invariant decidable predicate on finite sets.

    Only this closed grammar of predicates is accepted by the universe
    operations: being a family over the universe, a predicate must respect
    paths, and these constructors depend on the cardinality alone.
    """

    kind: str
    k: int | None = None

    def __post_init__(self):
        if self.kind not in _PRED_KINDS:
            raise ValueError(f"unknown predicate kind {self.kind!r}")
        if self.kind in ("size_le", "size_eq"):
            if self.k is None or self.k < 0:
                raise ValueError(f"predicate {self.kind} needs a nonnegative bound")
        elif self.k is not None:
            raise ValueError(f"predicate {self.kind} takes no bound")

    @property
    def implies_prop(self) -> bool:
        """True when satisfying the predicate forces at most one element."""
        if self.kind in ("none", "isprop", "iscontr"):
            return True
        if self.kind in ("size_le", "size_eq"):
            return self.k <= 1
        return False

    def holds(self, i: FinSet) -> bool:
        if self.kind == "none":
            return False
        if self.kind == "isprop":
            return i.size <= 1
        if self.kind == "iscontr":
            return i.size == 1
        if self.kind == "all":
            return True
        if self.kind == "size_le":
            return i.size <= self.k
        return i.size == self.k

    def __str__(self) -> str:
        if self.kind == "size_le":
            return f"size<={self.k}"
        if self.kind == "size_eq":
            return f"size={self.k}"
        return self.kind

    @classmethod
    def parse(cls, text: str) -> "PredicateSpec":
        text = text.strip()
        if text in ("none", "isprop", "iscontr", "all"):
            return cls(text)
        for prefix, kind in (("size<=", "size_le"), ("size=", "size_eq")):
            if text.startswith(prefix):
                tail = text[len(prefix) :]
                if tail.isdigit():
                    return cls(kind, int(tail))
        raise ValueError(f"not a predicate: {text!r}")


PRED_NONE = PredicateSpec("none")
PRED_ISPROP = PredicateSpec("isprop")
PRED_ISCONTR = PredicateSpec("iscontr")
PRED_ALL = PredicateSpec("all")


# --------------------------------------------------------------------------
# Shapes of the universe signature
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class NShape:
    name: str


@dataclass(frozen=True)
class NBadShape:
    """Pathological nullary shape accepting every target path.

    Exists only to exercise failure reporting: it drops the requirement
    that an identification's target path is induced by the name equality,
    so its witness sets stop being propositions.
    """

    name: str


@dataclass(frozen=True)
class UnitShape:
    pass


@dataclass(frozen=True)
class EmptyShape:
    pass


@dataclass(frozen=True)
class SumShape:
    left: FinSet
    right: FinSet


@dataclass(frozen=True)
class SigmaShape:
    base: FinSet
    fibers: tuple[FinSet, ...]


@dataclass(frozen=True)
class PiShape:
    base: FinSet
    fibers: tuple[FinSet, ...]


@dataclass(frozen=True)
class IdShape:
    base: FinSet
    x: int
    y: int


@dataclass(frozen=True)
class Po0Shape:
    apex: FinSet
    left: FinSet
    right: FinSet
    f: ElemMap
    g: ElemMap


# --- induced target paths --------------------------------------------------


def _offsets(sizes: Sequence[int]) -> tuple[list[int], int]:
    out = []
    acc = 0
    for s in sizes:
        out.append(acc)
        acc += s
    return out, acc


def _strides(sizes: Sequence[int]) -> tuple[list[int], int]:
    out = []
    acc = 1
    for s in sizes:
        out.append(acc)
        acc *= s
    return out, acc


def _sum_path(pl: Bij, pr: Bij) -> Bij:
    l0, r0 = pl.dom.size, pr.dom.size
    l1, r1 = pl.cod.size, pr.cod.size
    targets = tuple(pl(b) for b in range(l0)) + tuple(l1 + pr(c) for c in range(r0))
    return Bij.from_targets(FinSet(l0 + r0), FinSet(l1 + r1), targets)


def _sigma_path(p_a: Bij, p_bs: Sequence[Bij], fib0, fib1) -> Bij:
    sizes0 = [f.size for f in fib0]
    sizes1 = [f.size for f in fib1]
    off0, total0 = _offsets(sizes0)
    off1, total1 = _offsets(sizes1)
    targets = [0] * total0
    for a0, n in enumerate(sizes0):
        a1 = p_a(a0)
        for b in range(n):
            targets[off0[a0] + b] = off1[a1] + p_bs[a0](b)
    return Bij.from_targets(FinSet(total0), FinSet(total1), tuple(targets))


def _pi_path(p_a: Bij, p_bs: Sequence[Bij], fib0, fib1) -> Bij:
    sizes0 = [f.size for f in fib0]
    sizes1 = [f.size for f in fib1]
    str0, total0 = _strides(sizes0)
    str1, total1 = _strides(sizes1)
    targets = []
    for e in range(total0):
        img = 0
        for a0, n in enumerate(sizes0):
            digit = (e // str0[a0]) % n
            img += p_bs[a0](digit) * str1[p_a(a0)]
        targets.append(img)
    return Bij.from_targets(FinSet(total0), FinSet(total1), tuple(targets))


def _id_path(size: int) -> Bij:
    return Bij.identity(FinSet(size))


def _po0_cocone(shape: Po0Shape) -> PushoutResult:
    return pushout(Span(shape.apex, shape.left, shape.right, shape.f, shape.g))


def _po0_path(s0: Po0Shape, s1: Po0Shape, p0: Bij, p1: Bij, p2: Bij) -> Bij:
    po0 = _po0_cocone(s0)
    po1 = _po0_cocone(s1)
    targets: list[int | None] = [None] * po0.D.size
    for b in s0.left.elements:
        targets[po0.inl(b)] = po1.inl(p1(b))
    for c in s0.right.elements:
        img = po1.inr(p2(c))
        slot = po0.inr(c)
        if targets[slot] is not None and targets[slot] != img:
            raise AssertionError("commuting triple induced an ill-defined pushout map")
        targets[slot] = img
    return Bij.from_targets(po0.D, po1.D, tuple(targets))  # type: ignore[arg-type]


# --------------------------------------------------------------------------
# The universe signature
# --------------------------------------------------------------------------


class UniverseSig(ContainerSig):
    """The type-former signature as a container over finite-set indices.

    Indices are canonical finite sets; index paths are bijections. Shapes
    carry the decoded data of one constructor application; the trees over
    this signature are exactly the type codes.
    """

    index_kind = "finset"

    def __init__(
        self,
        nullary: dict[str, int] | None = None,
        formers: Iterable[str] = FORMER_ORDER,
        *,
        nbad: bool = False,
        bij_cap: int = 6,
        el_cap: int = EL_SIZE_CAP,
    ):
        nullary = dict(nullary or {})
        for name, size in nullary.items():
            if size < 0:
                raise ValueError(f"nullary {name!r} has negative size")
        formers = tuple(formers)
        for f in formers:
            if f not in FORMER_ORDER:
                raise ValueError(f"unknown former {f!r}")
        self.nullary = {name: FinSet(size) for name, size in nullary.items()}
        self.formers = frozenset(formers)
        self.nbad = nbad
        self.bij_cap = bij_cap
        self.el_cap = el_cap
        self._tree_cache: dict[Code, WTree] = {}
        self._ident_cache: dict[tuple, tuple[ShapeIdent, ...]] = {}

    # --- container interface: indices -----------------------------------

    def index_eq(self, i0: FinSet, i1: FinSet) -> bool:
        return i0 == i1

    def idx_paths(self, i0: FinSet, i1: FinSet) -> tuple[Bij, ...]:
        return enum_bijs(i0, i1, self.bij_cap)

    def refl_path(self, i: FinSet) -> Bij:
        return Bij.identity(i)

    def compose_paths(self, p: Bij, q: Bij) -> Bij:
        return compose_bij(p, q)

    def invert_path(self, p: Bij) -> Bij:
        return invert_bij(p)

    def path_endpoints(self, p: Bij) -> tuple[FinSet, FinSet]:
        return (p.dom, p.cod)

    # --- container interface: shapes -------------------------------------

    def shape_eq(self, s0, s1) -> bool:
        return s0 == s1

    def target(self, s) -> FinSet:
        if isinstance(s, (NShape, NBadShape)):
            return self.nullary[s.name]
        if isinstance(s, UnitShape):
            return FinSet(1)
        if isinstance(s, EmptyShape):
            return FinSet(0)
        if isinstance(s, SumShape):
            return FinSet(s.left.size + s.right.size)
        if isinstance(s, SigmaShape):
            return FinSet(sum(f.size for f in s.fibers))
        if isinstance(s, PiShape):
            total = 1
            for f in s.fibers:
                total *= f.size
            return FinSet(total)
        if isinstance(s, IdShape):
            return FinSet(1 if s.x == s.y else 0)
        if isinstance(s, Po0Shape):
            return _po0_cocone(s).D
        raise MalformedCode(f"not a shape: {s!r}")

    def positions(self, s) -> tuple:
        if isinstance(s, (NShape, NBadShape, UnitShape, EmptyShape)):
            return ()
        if isinstance(s, SumShape):
            return ("left", "right")
        if isinstance(s, (SigmaShape, PiShape)):
            return ("base",) + tuple(("fiber", a) for a in range(s.base.size))
        if isinstance(s, IdShape):
            return ("base",)
        if isinstance(s, Po0Shape):
            return ("apex", "left", "right")
        raise MalformedCode(f"not a shape: {s!r}")

    def source(self, s, k: int) -> FinSet:
        if isinstance(s, SumShape):
            return (s.left, s.right)[k]
        if isinstance(s, (SigmaShape, PiShape)):
            return s.base if k == 0 else s.fibers[k - 1]
        if isinstance(s, IdShape):
            return s.base
        if isinstance(s, Po0Shape):
            return (s.apex, s.left, s.right)[k]
        raise IndexError(f"shape {s!r} has no positions")

    def shape_idents(self, s0, s1) -> tuple[ShapeIdent, ...]:
        key = (s0, s1)
        hit = self._ident_cache.get(key)
        if hit is None:
            cand = lambda k0, k1: enum_bijs(self.source(s0, k0), self.source(s1, k1), self.bij_cap)
            hit = tuple(self._gen_idents(s0, s1, cand))
            self._ident_cache[key] = hit
        return hit

    def refl_ident(self, s) -> ShapeIdent:
        n = len(self.positions(s))
        return ShapeIdent(
            target_path=Bij.identity(self.target(s)),
            pos_perm=tuple(range(n)),
            src_paths=tuple(Bij.identity(self.source(s, k)) for k in range(n)),
        )

    def idents_between(self, s0, s1, candidate_paths) -> Iterator[ShapeIdent]:
        return self._gen_idents(s0, s1, candidate_paths)

    def _gen_idents(self, s0, s1, cand) -> Iterator[ShapeIdent]:
        """Identifications between two shapes, source paths drawn from ``cand``.

        Mixed constructor cases contribute nothing. Every yielded
        identification carries the induced bijection of the decodings as
        its target path, so the requirement that the outer path equals the
        action of the former is discharged by construction.
        """
        if type(s0) is not type(s1):
            return
        if isinstance(s0, NShape):
            if s0.name == s1.name:
                yield ShapeIdent(Bij.identity(self.nullary[s0.name]), (), ())
            return
        if isinstance(s0, NBadShape):
            if s0.name == s1.name:
                for q in enum_bijs(self.nullary[s0.name], self.nullary[s1.name], self.bij_cap):
                    yield ShapeIdent(q, (), ())
            return
        if isinstance(s0, UnitShape):
            yield ShapeIdent(Bij.identity(FinSet(1)), (), ())
            return
        if isinstance(s0, EmptyShape):
            yield ShapeIdent(Bij.identity(FinSet(0)), (), ())
            return
        if isinstance(s0, SumShape):
            for pl in cand(0, 0):
                for pr in cand(1, 1):
                    yield ShapeIdent(_sum_path(pl, pr), (0, 1), (pl, pr))
            return
        if isinstance(s0, (SigmaShape, PiShape)):
            induced = _sigma_path if isinstance(s0, SigmaShape) else _pi_path
            n = s0.base.size
            for p_a in cand(0, 0):
                pools = []
                dead = False
                for a0 in range(n):
                    pool = tuple(cand(1 + a0, 1 + p_a(a0)))
                    if not pool:
                        dead = True
                        break
                    pools.append(pool)
                if dead:
                    continue
                perm = (0,) + tuple(1 + p_a(a0) for a0 in range(n))
                for combo in itertools.product(*pools):
                    path = induced(p_a, combo, s0.fibers, s1.fibers)
                    yield ShapeIdent(path, perm, (p_a,) + combo)
            return
        if isinstance(s0, IdShape):
            same0 = s0.x == s0.y
            if same0 != (s1.x == s1.y):
                # endpoint-respecting bijections cannot exist
                return
            tgt = _id_path(1 if same0 else 0)
            for p_a in cand(0, 0):
                if p_a(s0.x) == s1.x and p_a(s0.y) == s1.y:
                    yield ShapeIdent(tgt, (0,), (p_a,))
            return
        if isinstance(s0, Po0Shape):
            for p0 in cand(0, 0):
                for p1 in cand(1, 1):
                    if any(p1(s0.f(x)) != s1.f(p0(x)) for x in s0.apex.elements):
                        continue
                    for p2 in cand(2, 2):
                        if any(p2(s0.g(x)) != s1.g(p0(x)) for x in s0.apex.elements):
                            continue
                        yield ShapeIdent(_po0_path(s0, s1, p0, p1, p2), (0, 1, 2), (p0, p1, p2))
            return
        raise MalformedCode(f"not a shape: {s0!r}")

    # --- shape enumeration ------------------------------------------------

    def shapes_with_sources_in(self, indices: Sequence[FinSet], cap: int = 20000) -> tuple:
        out: list = []
        idx = tuple(indices)
        for name in self.nullary:
            out.append(NShape(name))
        if self.nbad:
            for name in self.nullary:
                out.append(NBadShape(name))
        if "unit" in self.formers:
            out.append(UnitShape())
        if "empty" in self.formers:
            out.append(EmptyShape())
        if "sum" in self.formers:
            for left, right in itertools.product(idx, repeat=2):
                out.append(SumShape(left, right))
        for former, shape_cls in (("sigma", SigmaShape), ("pi", PiShape)):
            if former in self.formers:
                for base in idx:
                    for fibers in itertools.product(idx, repeat=base.size):
                        out.append(shape_cls(base, fibers))
                        if len(out) > cap:
                            raise EnumerationTooLarge(f"shape enumeration exceeds cap {cap}")
        if "id" in self.formers:
            for base in idx:
                for x in base.elements:
                    for y in base.elements:
                        out.append(IdShape(base, x, y))
        if "po0" in self.formers:
            for apex, left, right in itertools.product(idx, repeat=3):
                for f in enum_maps(apex, left):
                    for g in enum_maps(apex, right):
                        out.append(Po0Shape(apex, left, right, f, g))
                        if len(out) > cap:
                            raise EnumerationTooLarge(f"shape enumeration exceeds cap {cap}")
        if len(out) > cap:
            raise EnumerationTooLarge(f"shape enumeration exceeds cap {cap}")
        return tuple(out)

    # --- codes -------------------------------------------------------------

    def code_tree(self, c: Code) -> WTree:
        """The well-indexed tree of a code; shapes embed the decoded data."""
        hit = self._tree_cache.get(c)
        if hit is not None:
            return hit
        tree = self._build_tree(c)
        self._tree_cache[c] = tree
        return tree

    def _require_former(self, former: str) -> None:
        if former not in self.formers:
            raise MalformedCode(f"former {former!r} is not enabled in this signature")

    def _build_tree(self, c: Code) -> WTree:
        if isinstance(c, CN):
            if c.name not in self.nullary:
                raise MalformedCode(f"unknown base type {c.name!r}")
            return WTree(NShape(c.name))
        if isinstance(c, CUnit):
            self._require_former("unit")
            return WTree(UnitShape())
        if isinstance(c, CEmpty):
            self._require_former("empty")
            return WTree(EmptyShape())
        if isinstance(c, CSum):
            self._require_former("sum")
            lt, rt = self.code_tree(c.left), self.code_tree(c.right)
            return WTree(SumShape(self.target(lt.shape), self.target(rt.shape)), (lt, rt))
        if isinstance(c, (CSigma, CPi)):
            self._require_former("sigma" if isinstance(c, CSigma) else "pi")
            base_tree = self.code_tree(c.base)
            base = self.target(base_tree.shape)
            if len(c.fam) != base.size:
                raise MalformedCode(
                    f"family has {len(c.fam)} entries but the base decodes to size {base.size}"
                )
            fam_trees = tuple(self.code_tree(b) for b in c.fam)
            fibers = tuple(self.target(t.shape) for t in fam_trees)
            cls = SigmaShape if isinstance(c, CSigma) else PiShape
            shape = cls(base, fibers)
            size = self.target(shape).size
            if size > self.el_cap:
                raise EnumerationTooLarge(f"decoding size {size} exceeds cap {self.el_cap}")
            return WTree(shape, (base_tree,) + fam_trees)
        if isinstance(c, CId):
            self._require_former("id")
            base_tree = self.code_tree(c.base)
            base = self.target(base_tree.shape)
            for v in (c.x, c.y):
                if not 0 <= v < base.size:
                    raise MalformedCode(f"element {v} outside decoding of size {base.size}")
            return WTree(IdShape(base, c.x, c.y), (base_tree,))
        if isinstance(c, CPo0):
            self._require_former("po0")
            at, lt, rt = (self.code_tree(c.apex), self.code_tree(c.left), self.code_tree(c.right))
            apex, left, right = (self.target(t.shape) for t in (at, lt, rt))
            if c.f.dom != apex or c.f.cod != left:
                raise MalformedCode(f"first leg must map {apex} to {left}")
            if c.g.dom != apex or c.g.cod != right:
                raise MalformedCode(f"second leg must map {apex} to {right}")
            return WTree(Po0Shape(apex, left, right, c.f, c.g), (at, lt, rt))
        raise MalformedCode(f"not a code: {c!r}")


def el(sig: UniverseSig, c: Code) -> FinSet:
    """The decoding of a code: a canonical finite set under the fixed codec.

    Sums place the left block first; dependent sums are numbered by
    offsets, dependent products by little-endian mixed radix; identity
    codes decode to subsingletons; pushout codes to the set-level quotient.
    """
    return sig.target(sig.code_tree(c).shape)


# --------------------------------------------------------------------------
# Equality of codes
# --------------------------------------------------------------------------


def make_engine(sig: UniverseSig, pred: PredicateSpec) -> EqEngine:
    _check_pred(pred)
    return EqEngine(sig, pred)


def _check_pred(pred) -> None:
    if not isinstance(pred, PredicateSpec):
        raise PreconditionViolated(
            "predicates must come from the closed PredicateSpec grammar "
            "(arbitrary predicates need not respect paths)"
        )


def eqv_witnesses(
    sig: UniverseSig, pred: PredicateSpec, p: Bij, c0: Code, c1: Code, engine: EqEngine | None = None
) -> WitnessSet:
    """The witness set for equality of two codes over one bijection."""
    engine = engine or make_engine(sig, pred)
    return engine.witnesses(p, sig.code_tree(c0), sig.code_tree(c1))


def eqv_total(
    sig: UniverseSig, pred: PredicateSpec, c0: Code, c1: Code, engine: EqEngine | None = None
) -> tuple[tuple[Bij, object], ...]:
    """All (bijection, witness) pairs between two codes: the path set of the universe."""
    engine = engine or make_engine(sig, pred)
    t0, t1 = sig.code_tree(c0), sig.code_tree(c1)
    out = []
    for p in enum_bijs(el(sig, c0), el(sig, c1), sig.bij_cap):
        for w in engine.witnesses(p, t0, t1).witnesses:
            out.append((p, w))
    return tuple(out)


def eqv_total_count(
    sig: UniverseSig, pred: PredicateSpec, c0: Code, c1: Code, engine: EqEngine | None = None
) -> int:
    engine = engine or make_engine(sig, pred)
    return engine.total_count(sig.code_tree(c0), sig.code_tree(c1))


def is_equal(
    sig: UniverseSig, pred: PredicateSpec, c0: Code, c1: Code, engine: EqEngine | None = None
) -> bool:
    """Whether two codes are equal: some bijection carries a witness."""
    return eqv_total_count(sig, pred, c0, c1, engine) > 0


# --------------------------------------------------------------------------
# Code enumeration
# --------------------------------------------------------------------------


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All ways to write ``total`` as an ordered sum of ``parts`` positives."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_codes(
    sig: UniverseSig, max_nodes: int, max_el_size: int, cap: int = CODE_ENUM_CAP
) -> tuple[Code, ...]:
    """All well-formed codes within the node and decoding-size budgets.

    Deterministic: ascending node count, formers in a fixed order,
    components in enumeration order. Every emitted code and all of its
    subcodes satisfy the decoding-size bound (subcodes are drawn from the
    already-filtered pool).
    """
    by_nodes: list[list[Code]] = [[] for _ in range(max_nodes + 1)]
    out: list[Code] = []

    def emit(c: Code, nodes: int) -> bool:
        if el(sig, c).size > max_el_size:
            return False
        by_nodes[nodes].append(c)
        out.append(c)
        if len(out) > cap:
            raise EnumerationTooLarge(f"code enumeration exceeds cap {cap}")
        return True

    for n in range(1, max_nodes + 1):
        if n == 1:
            for name in sig.nullary:
                emit(CN(name), 1)
            if "unit" in sig.formers:
                emit(CUnit(), 1)
            if "empty" in sig.formers:
                emit(CEmpty(), 1)
            continue
        if "sum" in sig.formers:
            for nl in range(1, n - 1):
                nr = n - 1 - nl
                for left in by_nodes[nl]:
                    for right in by_nodes[nr]:
                        emit(CSum(left, right), n)
        for former, cls in (("sigma", CSigma), ("pi", CPi)):
            if former not in sig.formers:
                continue
            for nb in range(1, n):
                rest = n - 1 - nb
                for base in by_nodes[nb]:
                    k = el(sig, base).size
                    for comp in _compositions(rest, k):
                        pools = [by_nodes[c] for c in comp]
                        for fam in itertools.product(*pools):
                            try:
                                emit(cls(base, tuple(fam)), n)
                            except EnumerationTooLarge:
                                if len(out) > cap:
                                    raise
        if "id" in sig.formers:
            for base in by_nodes[n - 1]:
                size = el(sig, base).size
                for x in range(size):
                    for y in range(size):
                        emit(CId(base, x, y), n)
        if "po0" in sig.formers:
            for na in range(1, n - 2):
                for nl in range(1, n - 1 - na):
                    nr = n - 1 - na - nl
                    if nr < 1:
                        continue
                    for apex in by_nodes[na]:
                        ea = el(sig, apex)
                        for left in by_nodes[nl]:
                            eleft = el(sig, left)
                            fs = enum_maps(ea, eleft)
                            for right in by_nodes[nr]:
                                eright = el(sig, right)
                                gs = enum_maps(ea, eright)
                                for f in fs:
                                    for g in gs:
                                        emit(CPo0(apex, left, right, f, g), n)
    return tuple(out)


# --------------------------------------------------------------------------
# Structural compatibility keys
# --------------------------------------------------------------------------


def compat_key(sig: UniverseSig, pred: PredicateSpec, t: WTree, memo: dict | None = None):
    """A key equal codes must share: a provable necessary condition for equality.

    Subtrees over predicate-satisfying decodings collapse to their size
    (any two such compare equal); elsewhere the key records the former and
    the keys of the children, with dependent families as multisets (a
    domain bijection may permute them) and pushout legs reduced to their
    conjugation-invariant preimage profile. Pairs with distinct keys have
    empty witness sets: every identification needs same-former shapes and
    positionwise related children, which forces equal keys by induction.
    The bulk scans verify pairs within one key bucket and certify the rest
    as unequal; the necessity itself is re-checked exhaustively against
    brute force at small budgets in the test suite.
    """
    if memo is None:
        memo = {}
    hit = memo.get(t)
    if hit is not None:
        return hit
    i = sig.target(t.shape)
    s = t.shape
    if pred.holds(i):
        key = ("P", i.size)
    elif isinstance(s, NShape):
        key = ("n", s.name)
    elif isinstance(s, NBadShape):
        key = ("nbad", s.name)
    elif isinstance(s, UnitShape):
        key = ("unit",)
    elif isinstance(s, EmptyShape):
        key = ("empty",)
    elif isinstance(s, SumShape):
        key = (
            "sum",
            compat_key(sig, pred, t.children[0], memo),
            compat_key(sig, pred, t.children[1], memo),
        )
    elif isinstance(s, (SigmaShape, PiShape)):
        fam = sorted((compat_key(sig, pred, c, memo) for c in t.children[1:]), key=repr)
        key = (
            "sigma" if isinstance(s, SigmaShape) else "pi",
            compat_key(sig, pred, t.children[0], memo),
            tuple(fam),
        )
    elif isinstance(s, IdShape):
        key = ("id", compat_key(sig, pred, t.children[0], memo), s.x == s.y)
    elif isinstance(s, Po0Shape):
        key = (
            "po0",
            compat_key(sig, pred, t.children[0], memo),
            compat_key(sig, pred, t.children[1], memo),
            compat_key(sig, pred, t.children[2], memo),
            _fiber_profile(s.f),
            _fiber_profile(s.g),
        )
    else:
        raise MalformedCode(f"not a shape: {s!r}")
    memo[t] = key
    return key


def _fiber_profile(f: ElemMap) -> tuple[int, ...]:
    """Sorted preimage sizes of a map; invariant under conjugation by bijections."""
    counts = [0] * f.cod.size
    for t in f.targets:
        counts[t] += 1
    return tuple(sorted(counts))


# --------------------------------------------------------------------------
# Theorem-level verification suites
# --------------------------------------------------------------------------


def _elapsed_ms(t0: float) -> int:
    return int((time.monotonic() - t0) * 1000)


def _codes_by_size(sig: UniverseSig, codes: Sequence[Code]) -> dict[int, list[Code]]:
    groups: dict[int, list[Code]] = {}
    for c in codes:
        groups.setdefault(el(sig, c).size, []).append(c)
    return groups


MAX_FAILURES_LISTED = 20


def _record_failures(report: VerifyReport, failing, expected: str) -> None:
    """Record failures with a deterministic cap; the tail is summarized."""
    extra = 0
    for inputs, got in failing:
        if len(report.failures) < MAX_FAILURES_LISTED:
            report.add_failure(inputs, expected, got)
        else:
            extra += 1
    if extra:
        report.add_failure({"note": "remaining failures elided"}, expected, f"{extra} more")


class PairScan:
    """Shared stratified scan over all ordered same-size code pairs.

    Within a size group the predicate is constant (it depends on the
    cardinality alone), so either the whole group collapses — every pair
    has exactly one witness per bijection, making the path count the
    factorial of the size — or no pair does, and the pairs are scanned
    through the witness engine, bucketed by :func:`compat_key`. Pairs in
    distinct buckets are certified unequal by the key's necessity.
    """

    def __init__(self, sig: UniverseSig, pred: PredicateSpec, max_nodes: int, max_el_size: int):
        self.sig = sig
        self.pred = pred
        self.codes = enumerate_codes(sig, max_nodes, max_el_size)
        self.groups = _codes_by_size(sig, self.codes)
        self.engine = make_engine(sig, pred)
        self.total_pairs = sum(len(g) ** 2 for g in self.groups.values())
        self._kmemo: dict = {}

    def collapse_group_sizes(self) -> dict[int, int]:
        """Size -> group cardinality, for groups where the predicate holds."""
        return {
            size: len(group)
            for size, group in self.groups.items()
            if self.pred.holds(FinSet(size))
        }

    def path_count(self, size: int) -> int:
        return len(enum_bijs(FinSet(size), FinSet(size), self.sig.bij_cap))

    def buckets(self, size: int) -> list[list[Code]]:
        """compat_key buckets of one non-collapsing size group, in code order."""
        out: dict = {}
        for c in self.groups[size]:
            key = compat_key(self.sig, self.pred, self.sig.code_tree(c), self._kmemo)
            out.setdefault(key, []).append(c)
        return list(out.values())

    def structural_pairs(self):
        """Yield (c0, c1, count_map) for the same-bucket pairs that can be equal.

        Pairs outside a bucket, and bucket pairs whose first children
        already have an empty witness map, are certified unequal: every
        identification of every former matches position 0 to position 0,
        so a witness for the pair needs one for the first children.
        """
        engine = self.engine
        sig = self.sig
        for size in sorted(self.groups):
            if self.pred.holds(FinSet(size)):
                continue
            for bucket in self.buckets(size):
                subgroups: dict = {}
                order: list = []
                for c in bucket:
                    t = sig.code_tree(c)
                    head = t.children[0] if t.children else None
                    if head not in subgroups:
                        subgroups[head] = []
                        order.append(head)
                    subgroups[head].append((c, t))
                for h0 in order:
                    for h1 in order:
                        if h0 is not None and not engine.count_map(h0, h1):
                            continue
                        for c0, t0 in subgroups[h0]:
                            for c1, t1 in subgroups[h1]:
                                yield c0, c1, engine.count_map(t0, t1, _store=False)


def verify_partial_univalence(
    sig: UniverseSig, pred: PredicateSpec, max_nodes: int = 5, max_el_size: int = 6
) -> VerifyReport:
    """Check that paths between predicate-satisfying codes biject with equivalences.

    For every ordered pair of codes whose decodings satisfy the predicate,
    the number of (bijection, witness) pairs must equal the number of
    bijections between the decodings — an exact count, not a logical
    equivalence. Pairs inside a satisfying size group all take the collapse
    branch of the engine, whose count is the bijection count by
    construction; a deterministic sample per group pair is additionally
    pushed through the engine to guard that branch.
    """
    _check_pred(pred)
    t_start = time.monotonic()
    report = VerifyReport(suite="univalence", pred=str(pred))
    scan = PairScan(sig, pred, max_nodes, max_el_size)
    failing = []
    collapse = scan.collapse_group_sizes()
    sample = 3
    for s0, n0 in sorted(collapse.items()):
        for s1, n1 in sorted(collapse.items()):
            report.cases += n0 * n1
            expected = scan.path_count(s0) if s0 == s1 else 0
            for c0 in scan.groups[s0][:sample]:
                for c1 in scan.groups[s1][:sample]:
                    got = scan.engine.total_count(sig.code_tree(c0), sig.code_tree(c1))
                    if got != expected:
                        failing.append(
                            (
                                {"c0": code_sexpr(c0), "c1": code_sexpr(c1)},
                                str(got),
                            )
                        )
    # Predicate-satisfying codes may also live in non-collapsing groups only
    # when the predicate is not size-invariant — impossible for PredicateSpec.
    _record_failures(report, failing, "path count = bijection count")
    report.elapsed_ms = _elapsed_ms(t_start)
    return report


def _truncation_scan(
    sig: UniverseSig, pred: PredicateSpec, max_nodes: int, max_el_size: int, report: VerifyReport
) -> None:
    scan = PairScan(sig, pred, max_nodes, max_el_size)
    failing = []
    for size, n in sorted(scan.collapse_group_sizes().items()):
        report.cases += n * n
        paths = scan.path_count(size)
        if paths > 1:
            group = scan.groups[size]
            for c0 in group:
                for c1 in group:
                    failing.append(
                        ({"c0": code_sexpr(c0), "c1": code_sexpr(c1)}, str(paths))
                    )
                    if len(failing) > MAX_FAILURES_LISTED:
                        break
                if len(failing) > MAX_FAILURES_LISTED:
                    break
            if len(failing) > MAX_FAILURES_LISTED:
                # remaining pairs of this and later collapsing groups all fail
                failing.append(
                    (
                        {"note": f"every pair of the {n} size-{size} codes fails"},
                        str(paths),
                    )
                )
    for c0, c1, cmap in scan.structural_pairs():
        count = sum(cmap.values())
        if count > 1:
            failing.append(({"c0": code_sexpr(c0), "c1": code_sexpr(c1)}, str(count)))
    for size in sorted(scan.groups):
        if not pred.holds(FinSet(size)):
            report.cases += len(scan.groups[size]) ** 2
    _record_failures(report, failing, "at most 1 path")


def verify_truncated(
    sig: UniverseSig, pred: PredicateSpec, max_nodes: int = 5, max_el_size: int = 6
) -> VerifyReport:
    """Check 0-truncatedness: every pair of codes has at most one path.

    Requires a predicate that implies propositionality; for predicates
    that do not, the universe genuinely fails to be 0-truncated — run the
    negative control instead.
    """
    _check_pred(pred)
    if not pred.implies_prop:
        raise PreconditionViolated(
            f"predicate {pred} does not imply propositionality; use the negative control"
        )
    t0 = time.monotonic()
    report = VerifyReport(suite="truncation", pred=str(pred))
    _truncation_scan(sig, pred, max_nodes, max_el_size, report)
    report.elapsed_ms = _elapsed_ms(t0)
    return report


def forced_truncation(
    sig: UniverseSig, pred: PredicateSpec, max_nodes: int = 5, max_el_size: int = 6
) -> VerifyReport:
    """The truncation scan with the propositionality precondition skipped.

    For predicates that identify decodings with nontrivial automorphisms
    this is expected to report failures; that expected red is the point.
    """
    _check_pred(pred)
    t0 = time.monotonic()
    report = VerifyReport(suite="truncation", pred=str(pred))
    _truncation_scan(sig, pred, max_nodes, max_el_size, report)
    report.elapsed_ms = _elapsed_ms(t0)
    return report


def negative_control(
    sig: UniverseSig, pred: PredicateSpec, max_nodes: int = 5, max_el_size: int = 6
) -> VerifyReport:
    """Find a pair of codes with at least two paths under a non-prop predicate.

    When the budget contains a predicate-satisfying decoding with a
    nontrivial automorphism, some pair must have two or more paths; if the
    budget contains none, the report notes the absence informatively.
    """
    _check_pred(pred)
    if pred.implies_prop:
        raise PreconditionViolated(
            f"predicate {pred} implies propositionality; the negative control needs a larger one"
        )
    t0 = time.monotonic()
    report = VerifyReport(suite="negative-control", pred=str(pred))
    scan = PairScan(sig, pred, max_nodes, max_el_size)
    report.cases = scan.total_pairs
    eligible = any(
        size >= 2 and n > 0 for size, n in scan.collapse_group_sizes().items()
    )
    found = None
    for size, n in sorted(scan.collapse_group_sizes().items()):
        if n > 0 and scan.path_count(size) >= 2:
            c0 = scan.groups[size][0]
            count = scan.engine.total_count(sig.code_tree(c0), sig.code_tree(c0))
            found = {"c0": code_sexpr(c0), "c1": code_sexpr(c0), "paths": count}
            break
    if found is None:
        for c0, c1, cmap in scan.structural_pairs():
            if sum(cmap.values()) >= 2:
                found = {
                    "c0": code_sexpr(c0),
                    "c1": code_sexpr(c1),
                    "paths": sum(cmap.values()),
                }
                break
    if found:
        report.witness = {"status": "found", **found}
    elif eligible:
        report.add_failure(
            {"budget": f"nodes<={max_nodes}, size<={max_el_size}"},
            "a pair with >= 2 paths",
            "none found",
        )
    else:
        report.witness = {"status": "no-witness"}
    report.elapsed_ms = _elapsed_ms(t0)
    return report
