"""Indexed-container signatures, finite tables, families, and the retention checker.

A container signature packages a type of indices with paths, a type of
shapes with a target index, positions with source indices, and for every
pair of shapes a finite list of *shape identifications*: the data of an
equality between two constructor applications, i.e. a target path, a
matching of positions, and a path between the sources of every matched
pair. Trees over a signature (see :mod:`setverse.wtrees`) compare equal
exactly through these identifications.
"""

from __future__ import annotations

import abc
import itertools
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Iterator, Sequence

from .errors import EnumerationTooLarge, IndexTypeMismatch, PreconditionViolated
from .fincore import Bij, FinSet
from .report import Diagnostic

SHAPE_ENUM_CAP = 20000
EXT_ENUM_CAP = 100000


@dataclass(frozen=True)
class ReflPath:
    """The unique reflexivity path at a discrete index."""

    index: Any

    def __repr__(self) -> str:
        return f"ReflPath({self.index!r})"


@dataclass(frozen=True)
class ShapeIdent:
    """An identification between two constructor applications.

    ``pos_perm[k]`` is the position of the second shape matched to position
    ``k`` of the first; ``src_paths[k]`` connects their source indices.
    """

    target_path: Any
    pos_perm: tuple[int, ...]
    src_paths: tuple[Any, ...]


class ContainerSig(abc.ABC):
    """Abstract signature of an indexed container with decidable structure.

    Implementations must be free of hidden mutable state: every method is
    a pure function of its arguments, so concurrent queries are safe.
    """

    #: token identifying the index type; coproducts require equal tokens
    index_kind: Any = None

    # --- indices and paths ---------------------------------------------
    @abc.abstractmethod
    def index_eq(self, i0, i1) -> bool: ...

    @abc.abstractmethod
    def idx_paths(self, i0, i1) -> tuple: ...

    @abc.abstractmethod
    def refl_path(self, i): ...

    @abc.abstractmethod
    def compose_paths(self, p, q): ...

    @abc.abstractmethod
    def invert_path(self, p): ...

    @abc.abstractmethod
    def path_endpoints(self, p) -> tuple: ...

    # --- shapes ---------------------------------------------------------
    @abc.abstractmethod
    def shape_eq(self, s0, s1) -> bool: ...

    @abc.abstractmethod
    def target(self, s): ...

    @abc.abstractmethod
    def positions(self, s) -> tuple: ...

    @abc.abstractmethod
    def source(self, s, k: int): ...

    @abc.abstractmethod
    def shape_idents(self, s0, s1) -> tuple[ShapeIdent, ...]: ...

    @abc.abstractmethod
    def refl_ident(self, s) -> ShapeIdent: ...

    # --- enumeration support ---------------------------------------------
    @abc.abstractmethod
    def shapes_with_sources_in(self, indices: Sequence, cap: int = SHAPE_ENUM_CAP) -> tuple: ...

    def idents_between(
        self, s0, s1, candidate_paths: Callable[[int, int], Iterable]
    ) -> Iterator[ShapeIdent]:
        """Identifications whose source paths are drawn from given candidates.

        The default yields every identification; signatures with large
        identification spaces override this to enumerate only candidates
        compatible with the supplied per-position path supports.
        """
        del candidate_paths
        yield from self.shape_idents(s0, s1)


@dataclass(frozen=True)
class TableShape:
    """One row of a finite container table."""

    shape_id: str
    target_label: str
    slots: tuple[tuple[str, str], ...]  # (position id, source label)


class FiniteContainerTable(ContainerSig):
    """A container over a discrete finite index: labels with reflexivity only."""

    def __init__(self, labels: Sequence[str], shapes: Sequence[TableShape]):
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise ValueError("index labels must be distinct")
        for sh in shapes:
            if sh.target_label not in labels:
                raise ValueError(f"shape {sh.shape_id} targets unknown label {sh.target_label}")
            for pos_id, src in sh.slots:
                if src not in labels:
                    raise ValueError(f"position {pos_id} of {sh.shape_id} has unknown source {src}")
        ids = [sh.shape_id for sh in shapes]
        if len(set(ids)) != len(ids):
            raise ValueError("shape ids must be distinct")
        self.labels = labels
        self.shapes = tuple(shapes)
        self.index_kind = ("labels", labels)

    def index_eq(self, i0, i1) -> bool:
        return i0 == i1

    def idx_paths(self, i0, i1) -> tuple:
        return (ReflPath(i0),) if i0 == i1 else ()

    def refl_path(self, i):
        return ReflPath(i)

    def compose_paths(self, p, q):
        if p.index != q.index:
            raise PreconditionViolated("cannot compose reflexivity paths at different labels")
        return p

    def invert_path(self, p):
        return p

    def path_endpoints(self, p) -> tuple:
        return (p.index, p.index)

    def shape_eq(self, s0, s1) -> bool:
        return s0 == s1

    def target(self, s: TableShape):
        return s.target_label

    def positions(self, s: TableShape) -> tuple:
        return tuple(pos_id for pos_id, _ in s.slots)

    def source(self, s: TableShape, k: int):
        return s.slots[k][1]

    def shape_idents(self, s0, s1) -> tuple[ShapeIdent, ...]:
        # Discrete indices: the only identification is reflexivity of a shape
        # with itself, matching each position to itself.
        if s0 != s1:
            return ()
        return (self.refl_ident(s0),)

    def refl_ident(self, s: TableShape) -> ShapeIdent:
        n = len(s.slots)
        return ShapeIdent(
            target_path=ReflPath(s.target_label),
            pos_perm=tuple(range(n)),
            src_paths=tuple(ReflPath(src) for _, src in s.slots),
        )

    def shapes_with_sources_in(self, indices: Sequence, cap: int = SHAPE_ENUM_CAP) -> tuple:
        allowed = set(indices)
        out = tuple(
            sh for sh in self.shapes if all(src in allowed for _, src in sh.slots)
        )
        if len(out) > cap:
            raise EnumerationTooLarge(f"{len(out)} shapes exceeds cap {cap}")
        return out


@dataclass(frozen=True)
class TaggedShape:
    tag: int
    inner: Any


class CoproductSig(ContainerSig):
    """Tagged disjoint union of two containers over the same index type."""

    def __init__(self, left: ContainerSig, right: ContainerSig):
        if left.index_kind != right.index_kind:
            raise IndexTypeMismatch(
                f"cannot form coproduct over index kinds {left.index_kind!r} and {right.index_kind!r}"
            )
        self.left = left
        self.right = right
        self.index_kind = left.index_kind

    def _part(self, tag: int) -> ContainerSig:
        return self.left if tag == 0 else self.right

    def index_eq(self, i0, i1) -> bool:
        return self.left.index_eq(i0, i1)

    def idx_paths(self, i0, i1) -> tuple:
        return self.left.idx_paths(i0, i1)

    def refl_path(self, i):
        return self.left.refl_path(i)

    def compose_paths(self, p, q):
        return self.left.compose_paths(p, q)

    def invert_path(self, p):
        return self.left.invert_path(p)

    def path_endpoints(self, p) -> tuple:
        return self.left.path_endpoints(p)

    def shape_eq(self, s0: TaggedShape, s1: TaggedShape) -> bool:
        return s0.tag == s1.tag and self._part(s0.tag).shape_eq(s0.inner, s1.inner)

    def target(self, s: TaggedShape):
        return self._part(s.tag).target(s.inner)

    def positions(self, s: TaggedShape) -> tuple:
        return self._part(s.tag).positions(s.inner)

    def source(self, s: TaggedShape, k: int):
        return self._part(s.tag).source(s.inner, k)

    def shape_idents(self, s0: TaggedShape, s1: TaggedShape) -> tuple[ShapeIdent, ...]:
        if s0.tag != s1.tag:
            return ()  # identifications never cross the tags
        return self._part(s0.tag).shape_idents(s0.inner, s1.inner)

    def refl_ident(self, s: TaggedShape) -> ShapeIdent:
        return self._part(s.tag).refl_ident(s.inner)

    def idents_between(self, s0, s1, candidate_paths):
        if s0.tag != s1.tag:
            return
        yield from self._part(s0.tag).idents_between(s0.inner, s1.inner, candidate_paths)

    def shapes_with_sources_in(self, indices: Sequence, cap: int = SHAPE_ENUM_CAP) -> tuple:
        out = tuple(
            itertools.chain(
                (TaggedShape(0, s) for s in self.left.shapes_with_sources_in(indices, cap)),
                (TaggedShape(1, s) for s in self.right.shapes_with_sources_in(indices, cap)),
            )
        )
        if len(out) > cap:
            raise EnumerationTooLarge(f"{len(out)} shapes exceeds cap {cap}")
        return out


def coproduct(c1: ContainerSig, c2: ContainerSig) -> CoproductSig:
    """Coproduct of two containers: shapes are tagged, identifications never mix tags."""
    return CoproductSig(c1, c2)


# --------------------------------------------------------------------------
# Families and extensions
# --------------------------------------------------------------------------


class FamilyAssignment(abc.ABC):
    """A family over the index type, with explicit equality-witness counts.

    ``eq_count(q, x0, x1)`` is the cardinality of the witness set for the
    dependent equality of two inhabitants over an index path ``q``. The
    counts are data; the retention checker needs them as input because the
    family stands in for an arbitrary (possibly higher) family.
    """

    @abc.abstractmethod
    def support(self) -> tuple: ...

    @abc.abstractmethod
    def fiber(self, i) -> FinSet: ...

    @abc.abstractmethod
    def eq_count(self, path, x0: int, x1: int) -> int: ...

    def prop_indices(self) -> frozenset:
        """Indices where the family is declared propositional (counts <= 1)."""
        return frozenset()


class TableFamily(FamilyAssignment):
    """Family over a discrete label index, with per-label count tables."""

    def __init__(
        self,
        fibers: dict[str, int],
        counts: dict[str, Sequence[Sequence[int]]],
        prop_labels: Iterable[str] = (),
    ):
        self._fibers = {lbl: FinSet(n) for lbl, n in fibers.items()}
        self._counts = {lbl: tuple(tuple(row) for row in tbl) for lbl, tbl in counts.items()}
        self._props = frozenset(prop_labels)
        for lbl, fs in self._fibers.items():
            tbl = self._counts.get(lbl)
            if tbl is None or len(tbl) != fs.size or any(len(row) != fs.size for row in tbl):
                raise PreconditionViolated(f"incomplete equality table for label {lbl!r}")
            if lbl in self._props and any(c > 1 for row in tbl for c in row):
                raise ValueError(f"label {lbl!r} declared propositional but has count > 1")

    @classmethod
    def discrete(cls, fibers: dict[str, int]) -> "TableFamily":
        """The set-like family: equality holds exactly on the diagonal."""
        counts = {
            lbl: [[1 if i == j else 0 for j in range(n)] for i in range(n)]
            for lbl, n in fibers.items()
        }
        return cls(fibers, counts, prop_labels=[lbl for lbl, n in fibers.items() if n <= 1])

    def support(self) -> tuple:
        return tuple(self._fibers)

    def fiber(self, i) -> FinSet:
        return self._fibers[i]

    def eq_count(self, path: ReflPath, x0: int, x1: int) -> int:
        try:
            return self._counts[path.index][x0][x1]
        except (KeyError, IndexError) as exc:
            raise PreconditionViolated(f"equality table missing entry for {path!r}") from exc

    def prop_indices(self) -> frozenset:
        return self._props


class FinSetFamily(FamilyAssignment):
    """Family over the finite-set index, with per-path count tables.

    ``counts`` maps (size, path targets, x0, x1) to a count; missing keys
    default to 0. The identity family (fiber X with transport by the path
    itself) is available via :meth:`identity`.
    """

    def __init__(self, fibers: dict[int, int], counts: dict[tuple, int]):
        self._fibers = {n: FinSet(m) for n, m in fibers.items()}
        self._counts = dict(counts)

    @classmethod
    def identity(cls, max_size: int) -> "FinSetFamily":
        fam = cls({n: n for n in range(max_size + 1)}, {})
        fam.eq_count = lambda path, x0, x1: 1 if path(x0) == x1 else 0  # type: ignore[method-assign]
        return fam

    @classmethod
    def constant(cls, max_size: int, fiber_size: int) -> "FinSetFamily":
        """Same fiber everywhere, trivial transport: equality is the diagonal."""
        fam = cls({n: fiber_size for n in range(max_size + 1)}, {})
        fam.eq_count = lambda path, x0, x1: 1 if x0 == x1 else 0  # type: ignore[method-assign]
        return fam

    def support(self) -> tuple:
        return tuple(FinSet(n) for n in sorted(self._fibers))

    def fiber(self, i: FinSet) -> FinSet:
        return self._fibers[i.size]

    def eq_count(self, path: Bij, x0: int, x1: int) -> int:
        return self._counts.get((path.dom.size, path.fwd.targets, x0, x1), 0)


@dataclass(frozen=True)
class ExtElement:
    """An element of a container extension: a shape plus one inhabitant per position."""

    shape: Any
    inhabitants: tuple[int, ...]


def ext_enumerate(
    sig: ContainerSig, fam: FamilyAssignment, i, cap: int = EXT_ENUM_CAP
) -> tuple[ExtElement, ...]:
    """All extension elements at index ``i``, in lexicographic order.

    The cardinality is the sum over shapes targeting ``i`` of the product
    of the fiber sizes at the position sources.
    """
    out: list[ExtElement] = []
    for shape in sig.shapes_with_sources_in(fam.support(), cap):
        if not sig.index_eq(sig.target(shape), i):
            continue
        sizes = [fam.fiber(sig.source(shape, k)).size for k in range(len(sig.positions(shape)))]
        total = 1
        for n in sizes:
            total *= n
        if len(out) + total > cap:
            raise EnumerationTooLarge(f"extension at {i!r} exceeds cap {cap}")
        for kids in itertools.product(*(range(n) for n in sizes)):
            out.append(ExtElement(shape, kids))
    return tuple(out)


def _all_ext_elements(sig: ContainerSig, fam: FamilyAssignment, cap: int) -> list[ExtElement]:
    out: list[ExtElement] = []
    for shape in sig.shapes_with_sources_in(fam.support(), cap):
        sizes = [fam.fiber(sig.source(shape, k)).size for k in range(len(sig.positions(shape)))]
        total = 1
        for n in sizes:
            total *= n
        if len(out) + total > cap:
            raise EnumerationTooLarge(f"extension enumeration exceeds cap {cap}")
        for kids in itertools.product(*(range(n) for n in sizes)):
            out.append(ExtElement(shape, kids))
    return out


def retains_check(
    sig: ContainerSig,
    fam: FamilyAssignment,
    n: int = 0,
    *,
    cap: int = EXT_ENUM_CAP,
    max_violations: int = 5,
) -> Diagnostic:
    """Check that a container retains 0-truncatedness over a given family.

    For every ordered pair of extension elements: whenever all summed
    child-pair witness counts are propositions (at most one element), the
    witness count of the pair in the total extension, summed over every
    identification, must be at most one. Pairs whose hypothesis fails are
    counted as vacuous; violating pairs are reported with their counts.
    """
    if n != 0:
        raise PreconditionViolated("retention is checked at truncation level 0 only")
    elements = _all_ext_elements(sig, fam, cap)
    cases = 0
    vacuous = 0
    violations: list[dict] = []
    ident_cache: dict[tuple, tuple[ShapeIdent, ...]] = {}
    summed_cache: dict[tuple, int] = {}

    def summed(src0, src1, x0: int, x1: int) -> int:
        key = (src0, src1, x0, x1)
        hit = summed_cache.get(key)
        if hit is None:
            hit = sum(fam.eq_count(q, x0, x1) for q in sig.idx_paths(src0, src1))
            summed_cache[key] = hit
        return hit

    for e0 in elements:
        pos0 = len(sig.positions(e0.shape))
        srcs0 = [sig.source(e0.shape, k) for k in range(pos0)]
        for e1 in elements:
            pos1 = len(sig.positions(e1.shape))
            # Hypothesis: summed-over-paths child witness counts are all <= 1.
            premise = True
            for k0 in range(pos0):
                x0 = e0.inhabitants[k0]
                for k1 in range(pos1):
                    if summed(srcs0[k0], sig.source(e1.shape, k1), x0, e1.inhabitants[k1]) > 1:
                        premise = False
                        break
                if not premise:
                    break
            if not premise:
                vacuous += 1
                continue
            cases += 1
            key = (e0.shape, e1.shape)
            idents = ident_cache.get(key)
            if idents is None:
                idents = tuple(sig.shape_idents(e0.shape, e1.shape))
                ident_cache[key] = idents
            count = 0
            for ident in idents:
                prod = 1
                for k0 in range(pos0):
                    c = fam.eq_count(
                        ident.src_paths[k0], e0.inhabitants[k0], e1.inhabitants[ident.pos_perm[k0]]
                    )
                    if c == 0:
                        prod = 0
                        break
                    prod *= c
                count += prod
            if count > 1 and len(violations) < max_violations:
                violations.append(
                    {
                        "shape0": repr(e0.shape),
                        "kids0": list(e0.inhabitants),
                        "shape1": repr(e1.shape),
                        "kids1": list(e1.inhabitants),
                        "witness_count": count,
                    }
                )
            elif count > 1:
                violations.append({"witness_count": count})
    return Diagnostic(
        check="retains-truncation",
        passed=not violations,
        vacuous=cases == 0,
        details={"cases": cases, "vacuous": vacuous, "violations": violations[:max_violations]},
    )
