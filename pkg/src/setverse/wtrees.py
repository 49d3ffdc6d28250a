"""Well-indexed trees over a container and their equality-witness sets.

The central computation: for two trees and a path between their indices,
the finite set of equality witnesses. Over indices satisfying a chosen
propositional predicate the witness set collapses to a single point; away
from the predicate it is assembled structurally, one shape identification
at a time, with child witnesses over the identification's source paths.

A second, independent route to the same relation — fixpoint saturation of
the generated congruence over an explicit tree universe — lives in
:class:`SaturationOracle`; never call the recursive engine from it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

from .container import ContainerSig, ShapeIdent
from .errors import EnumerationTooLarge, PreconditionViolated
from .report import Diagnostic

TREE_ENUM_CAP = 2000
WITNESS_CAP = 10000


class WTree:
    """A well-indexed tree: a shape and one child per position, in position order.

    Immutable by convention; the hash is precomputed so trees can key the
    engine's memo tables without rehashing whole subtrees on every lookup.
    """

    __slots__ = ("shape", "children", "_hash")

    def __init__(self, shape: Any, children: tuple["WTree", ...] = ()):
        self.shape = shape
        self.children = tuple(children)
        self._hash = hash((shape, self.children))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, WTree):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.shape == other.shape
            and self.children == other.children
        )

    def __repr__(self) -> str:
        if not self.children:
            return f"WTree({self.shape!r})"
        return f"WTree({self.shape!r}, {self.children!r})"


class PredOnIndex:
    """A decidable predicate on indices, invariant under index paths."""

    def holds(self, i) -> bool:  # pragma: no cover - interface default
        raise NotImplementedError


class NoIndex(PredOnIndex):
    """The always-false predicate."""

    def holds(self, i) -> bool:
        return False


class LabelPred(PredOnIndex):
    """True exactly on a fixed set of discrete labels."""

    def __init__(self, labels: Iterable[str]):
        self.labels = frozenset(labels)

    def holds(self, i) -> bool:
        return i in self.labels


@dataclass(frozen=True)
class Collapsed:
    """The single witness produced by the propositional collapse."""

    def __repr__(self) -> str:
        return "Collapsed()"


@dataclass(frozen=True)
class StructuralWitness:
    """A structural witness: an identification plus one child witness per position."""

    ident: ShapeIdent
    children: tuple[Any, ...]


Witness = Any  # Collapsed | StructuralWitness


@dataclass(frozen=True)
class WitnessSet:
    """An ordered, duplicate-free set of witnesses over one index path."""

    path: Any
    witnesses: tuple[Witness, ...]

    def __post_init__(self):
        if len(set(self.witnesses)) != len(self.witnesses):
            raise ValueError("witness sets may not contain duplicates")

    @property
    def card(self) -> int:
        return len(self.witnesses)

    def is_prop(self) -> bool:
        return self.card <= 1

    def nonempty(self) -> bool:
        return self.card > 0


def tree_index(sig: ContainerSig, t: WTree):
    return sig.target(t.shape)


def well_formed(sig: ContainerSig, t: WTree) -> bool:
    """True when every child's index equals its position's source, recursively."""
    if len(t.children) != len(sig.positions(t.shape)):
        return False
    for k, child in enumerate(t.children):
        if not sig.index_eq(tree_index(sig, child), sig.source(t.shape, k)):
            return False
        if not well_formed(sig, child):
            return False
    return True


def tree_depth(t: WTree) -> int:
    if not t.children:
        return 1
    return 1 + max(tree_depth(c) for c in t.children)


class EqEngine:
    """Memoized equality-witness computation for one signature and predicate.

    The memo tables behave as pure-function caches: entries are only ever
    inserted with the value any other computation would produce, so
    concurrent use is safe as long as insertion of identical values is.
    """

    def __init__(self, sig: ContainerSig, pred: PredOnIndex, witness_cap: int = WITNESS_CAP):
        self.sig = sig
        self.pred = pred
        self.witness_cap = witness_cap
        self._counts: dict[tuple, dict] = {}
        self._wits: dict[tuple, dict] = {}

    # --- counting --------------------------------------------------------

    def count_map(self, t0: WTree, t1: WTree, _store: bool = True) -> dict:
        """Map from index path to positive witness count, over all paths."""
        key = (t0, t1)
        hit = self._counts.get(key)
        if hit is not None:
            return hit
        sig = self.sig
        i0 = sig.target(t0.shape)
        i1 = sig.target(t1.shape)
        if self.pred.holds(i0):
            out = {p: 1 for p in sig.idx_paths(i0, i1)}
        else:
            out = {}
            child_fn = self._child_fn(t0, t1)
            candidates = lambda k0, k1: child_fn(k0, k1).keys()
            for ident in sig.idents_between(t0.shape, t1.shape, candidates):
                prod = 1
                for k, src_path in enumerate(ident.src_paths):
                    c = child_fn(k, ident.pos_perm[k]).get(src_path, 0)
                    if c == 0:
                        prod = 0
                        break
                    prod *= c
                if prod:
                    out[ident.target_path] = out.get(ident.target_path, 0) + prod
        if _store:
            self._counts[key] = out
        return out

    def _child_fn(self, t0: WTree, t1: WTree) -> Callable[[int, int], dict]:
        def fn(k0: int, k1: int) -> dict:
            return self.count_map(t0.children[k0], t1.children[k1])

        return fn

    def count(self, p, t0: WTree, t1: WTree) -> int:
        self._check_path(p, t0, t1)
        return self.count_map(t0, t1).get(p, 0)

    def total_count(self, t0: WTree, t1: WTree) -> int:
        """Witness count summed over every index path.

        The top-level pair is not memoized: bulk scans visit each top pair
        once, and storing them all would swamp memory; shared subtree pairs
        still hit the cache through the recursive calls.
        """
        return sum(self.count_map(t0, t1, _store=False).values())

    # --- materialized witnesses -------------------------------------------

    def witness_map(self, t0: WTree, t1: WTree) -> dict:
        key = (t0, t1)
        hit = self._wits.get(key)
        if hit is not None:
            return hit
        sig = self.sig
        i0 = sig.target(t0.shape)
        i1 = sig.target(t1.shape)
        if self.pred.holds(i0):
            out = {p: (Collapsed(),) for p in sig.idx_paths(i0, i1)}
        else:
            out = {}
            wit_fn = lambda k0, k1: self.witness_map(t0.children[k0], t1.children[k1])
            candidates = lambda k0, k1: wit_fn(k0, k1).keys()
            for ident in sig.idents_between(t0.shape, t1.shape, candidates):
                options = []
                dead = False
                for k, src_path in enumerate(ident.src_paths):
                    ws = wit_fn(k, ident.pos_perm[k]).get(src_path, ())
                    if not ws:
                        dead = True
                        break
                    options.append(ws)
                if dead:
                    continue
                bucket = out.setdefault(ident.target_path, [])
                for combo in itertools.product(*options):
                    bucket.append(StructuralWitness(ident, combo))
                    if sum(len(v) for v in out.values()) > self.witness_cap:
                        raise EnumerationTooLarge(
                            f"witness materialization exceeds cap {self.witness_cap}"
                        )
            out = {p: tuple(ws) for p, ws in out.items()}
        self._wits[key] = out
        return out

    def witnesses(self, p, t0: WTree, t1: WTree) -> WitnessSet:
        self._check_path(p, t0, t1)
        return WitnessSet(p, self.witness_map(t0, t1).get(p, ()))

    def encode_refl(self, t: WTree) -> Witness:
        """The reflexivity witness of a tree at its identity path."""
        if self.pred.holds(self.sig.target(t.shape)):
            return Collapsed()
        return StructuralWitness(
            self.sig.refl_ident(t.shape),
            tuple(self.encode_refl(c) for c in t.children),
        )

    def _check_path(self, p, t0: WTree, t1: WTree) -> None:
        src, dst = self.sig.path_endpoints(p)
        if not (
            self.sig.index_eq(src, self.sig.target(t0.shape))
            and self.sig.index_eq(dst, self.sig.target(t1.shape))
        ):
            raise PreconditionViolated(
                f"path {p!r} does not connect the indices of the two trees"
            )


def eq_witnesses(sig: ContainerSig, pred: PredOnIndex, p, t0: WTree, t1: WTree) -> WitnessSet:
    """The equality-witness set of two trees over an index path."""
    return EqEngine(sig, pred).witnesses(p, t0, t1)


def encode_refl(sig: ContainerSig, pred: PredOnIndex, t: WTree) -> Witness:
    return EqEngine(sig, pred).encode_refl(t)


# --------------------------------------------------------------------------
# Tree enumeration and the independent oracle
# --------------------------------------------------------------------------


def enumerate_trees(sig: ContainerSig, depth: int, cap: int = TREE_ENUM_CAP) -> tuple[WTree, ...]:
    """All well-formed trees of at most the given depth, deterministically ordered.

    Requires the signature to expose a finite shape table (its shapes with
    sources anywhere in the index set).
    """
    shapes = sig.shapes_with_sources_in(_all_indices(sig))
    by_index: dict[Any, list[WTree]] = {}
    all_trees: list[WTree] = []
    for _ in range(depth):
        layer: list[WTree] = []
        for shape in shapes:
            pools = []
            ok = True
            for k in range(len(sig.positions(shape))):
                pool = by_index.get(_index_key(sig.source(shape, k)), [])
                if not pool:
                    ok = False
                    break
                pools.append(pool)
            if not ok:
                continue
            for kids in itertools.product(*pools):
                t = WTree(shape, tuple(kids))
                layer.append(t)
        seen = set(all_trees)
        new = [t for t in layer if t not in seen]
        if not new:
            break
        all_trees.extend(new)
        if len(all_trees) > cap:
            raise EnumerationTooLarge(f"tree enumeration exceeds cap {cap}")
        by_index = {}
        for t in all_trees:
            by_index.setdefault(_index_key(sig.target(t.shape)), []).append(t)
    return tuple(all_trees)


def _all_indices(sig: ContainerSig):
    labels = getattr(sig, "labels", None)
    if labels is None:
        left = getattr(sig, "left", None)
        if left is not None:
            return _all_indices(left)
        raise EnumerationTooLarge("signature does not expose a finite index set")
    return labels


def _index_key(i):
    return i


class SaturationOracle:
    """Relatedness of trees by fixpoint saturation over a fixed tree universe.

    The least path-indexed relation that (a) is closed under structural
    congruence through every shape identification and (b) relates every
    pair of trees over predicate-satisfying indices along every index
    path. Computed by repeated scanning of all enumerated tree pairs —
    deliberately not by the recursive witness engine.
    """

    def __init__(self, sig: ContainerSig, pred: PredOnIndex, trees: Sequence[WTree]):
        self.sig = sig
        self.pred = pred
        self.trees = tuple(trees)
        self._facts: set[tuple] = set()
        self._saturate()

    def _saturate(self) -> None:
        sig = self.sig
        facts = self._facts
        pairs = []
        ident_cache: dict[tuple, tuple[ShapeIdent, ...]] = {}
        for t0 in self.trees:
            i0 = sig.target(t0.shape)
            for t1 in self.trees:
                i1 = sig.target(t1.shape)
                if self.pred.holds(i0):
                    for q in sig.idx_paths(i0, i1):
                        facts.add((q, t0, t1))
                key = (t0.shape, t1.shape)
                idents = ident_cache.get(key)
                if idents is None:
                    idents = tuple(sig.shape_idents(t0.shape, t1.shape))
                    ident_cache[key] = idents
                if idents:
                    pairs.append((t0, t1, idents))
        changed = True
        while changed:
            changed = False
            for t0, t1, idents in pairs:
                for ident in idents:
                    fact = (ident.target_path, t0, t1)
                    if fact in facts:
                        continue
                    if all(
                        (ident.src_paths[k], t0.children[k], t1.children[ident.pos_perm[k]])
                        in facts
                        for k in range(len(ident.src_paths))
                    ):
                        facts.add(fact)
                        changed = True

    def related(self, p, t0: WTree, t1: WTree) -> bool:
        return (p, t0, t1) in self._facts


def tree_eq_oracle(
    sig: ContainerSig,
    pred: PredOnIndex,
    depth: int,
    p,
    t0: WTree,
    t1: WTree,
    cap: int = TREE_ENUM_CAP,
) -> bool:
    """Decide relatedness of two trees by saturation over all trees within depth."""
    trees = enumerate_trees(sig, depth, cap)
    if t0 not in trees or t1 not in trees:
        raise PreconditionViolated("both trees must lie within the enumerated depth")
    return SaturationOracle(sig, pred, trees).related(p, t0, t1)


def verify_encode_decode(
    sig: ContainerSig,
    pred: PredOnIndex,
    depth: int,
    cap: int = TREE_ENUM_CAP,
) -> Diagnostic:
    """Check the witness engine against the saturation oracle on all tree pairs.

    For every pair within depth and every index path: the witness set has
    at most one element, and it is nonempty exactly when the oracle relates
    the pair. Under the always-false predicate, nonemptiness must also
    coincide with structural tree equality.
    """
    trees = enumerate_trees(sig, depth, cap)
    oracle = SaturationOracle(sig, pred, trees)
    engine = EqEngine(sig, pred)
    bare = not any(pred.holds(sig.target(t.shape)) for t in trees)
    cases = 0
    failures = []
    for t0 in trees:
        i0 = sig.target(t0.shape)
        for t1 in trees:
            i1 = sig.target(t1.shape)
            for p in sig.idx_paths(i0, i1):
                cases += 1
                ws = engine.witnesses(p, t0, t1)
                ok = ws.is_prop() and ws.nonempty() == oracle.related(p, t0, t1)
                if ok and bare:
                    ok = ws.nonempty() == (t0 == t1)
                if not ok:
                    failures.append(
                        {
                            "t0": repr(t0),
                            "t1": repr(t1),
                            "path": repr(p),
                            "witnesses": ws.card,
                            "oracle": oracle.related(p, t0, t1),
                        }
                    )
    return Diagnostic(
        check="encode-decode",
        passed=not failures,
        vacuous=cases == 0,
        details={"trees": len(trees), "cases": cases, "failures": failures[:5]},
    )
