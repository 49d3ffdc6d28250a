import itertools

import pytest

from setverse.container import FiniteContainerTable, TableShape, coproduct
from setverse.errors import EnumerationTooLarge, PreconditionViolated
from setverse.wtrees import (
    Collapsed,
    EqEngine,
    LabelPred,
    NoIndex,
    SaturationOracle,
    StructuralWitness,
    WitnessSet,
    WTree,
    encode_refl,
    enumerate_trees,
    eq_witnesses,
    tree_eq_oracle,
    verify_encode_decode,
    well_formed,
)


@pytest.fixture
def table():
    return FiniteContainerTable(
        ["i", "j"],
        [
            TableShape("leaf1", "i", ()),
            TableShape("leaf2", "i", ()),
            TableShape("leaf_j", "j", ()),
            TableShape("wrap", "i", (("p", "i"),)),
            TableShape("pair", "j", (("l", "i"), ("r", "j"))),
        ],
    )


def leaf(table, name):
    sh = next(s for s in table.shapes if s.shape_id == name)
    return WTree(sh)


def node(table, name, *children):
    sh = next(s for s in table.shapes if s.shape_id == name)
    return WTree(sh, tuple(children))


def test_well_formed(table):
    l1 = leaf(table, "leaf1")
    assert well_formed(table, l1)
    assert well_formed(table, node(table, "wrap", l1))
    # child at the wrong index
    assert not well_formed(table, node(table, "wrap", leaf(table, "leaf_j")))
    assert not well_formed(table, node(table, "wrap"))
    deep = node(table, "pair", l1, node(table, "pair", l1, leaf(table, "leaf_j")))
    assert well_formed(table, deep)


def test_eq_witnesses_collapse(table):
    pred = LabelPred(["i"])
    p = table.refl_path("i")
    ws = eq_witnesses(table, pred, p, leaf(table, "leaf1"), leaf(table, "leaf2"))
    assert ws.witnesses == (Collapsed(),)
    assert ws.card == 1


def test_eq_witnesses_reflexivity_only(table):
    pred = NoIndex()
    p = table.refl_path("i")
    l1 = leaf(table, "leaf1")
    assert eq_witnesses(table, pred, p, l1, l1).card == 1
    assert eq_witnesses(table, pred, p, l1, leaf(table, "leaf2")).card == 0


def test_eq_witnesses_cross_tag_empty(table):
    both = coproduct(table, table)
    pred = NoIndex()
    shapes = both.shapes_with_sources_in(["i", "j"])
    s_left = next(s for s in shapes if s.tag == 0 and not s.inner.slots)
    s_right = next(s for s in shapes if s.tag == 1 and s.inner == s_left.inner)
    p = both.refl_path("i")
    assert eq_witnesses(both, pred, p, WTree(s_left), WTree(s_right)).card == 0


def test_eq_witnesses_path_precondition(table):
    pred = NoIndex()
    with pytest.raises(PreconditionViolated):
        eq_witnesses(table, pred, table.refl_path("j"), leaf(table, "leaf1"), leaf(table, "leaf1"))


def test_witness_set_rejects_duplicates(table):
    with pytest.raises(ValueError):
        WitnessSet(table.refl_path("i"), (Collapsed(), Collapsed()))


def test_encode_refl_leaf(table):
    l1 = leaf(table, "leaf1")
    w = encode_refl(table, NoIndex(), l1)
    assert isinstance(w, StructuralWitness)
    assert w.children == ()
    assert w.ident == table.refl_ident(l1.shape)
    assert encode_refl(table, LabelPred(["i"]), l1) == Collapsed()


def test_encode_refl_membership(table):
    for pred in (NoIndex(), LabelPred(["i"]), LabelPred(["i", "j"])):
        engine = EqEngine(table, pred)
        for t in enumerate_trees(table, 3):
            p = table.refl_path(table.target(t.shape))
            ws = engine.witnesses(p, t, t)
            assert engine.encode_refl(t) in ws.witnesses
            assert ws.card == 1  # the reflexivity witness is the only one


def test_count_and_witness_maps_agree(table):
    for pred in (NoIndex(), LabelPred(["j"])):
        engine = EqEngine(table, pred)
        trees = enumerate_trees(table, 2)
        for t0 in trees:
            for t1 in trees:
                cmap = engine.count_map(t0, t1)
                wmap = engine.witness_map(t0, t1)
                assert set(cmap) == set(wmap)
                for p, n in cmap.items():
                    assert len(wmap[p]) == n


def test_tree_eq_oracle_examples(table):
    pred = NoIndex()
    l1 = leaf(table, "leaf1")
    p = table.refl_path("i")
    assert tree_eq_oracle(table, pred, 2, p, l1, l1)
    assert not tree_eq_oracle(table, pred, 2, p, l1, leaf(table, "leaf2"))
    # trees over a predicate-satisfying label are all related
    pred_i = LabelPred(["i"])
    assert tree_eq_oracle(table, pred_i, 2, p, l1, leaf(table, "leaf2"))


def test_tree_eq_oracle_depth_precondition(table):
    l1 = leaf(table, "leaf1")
    deep = node(table, "wrap", node(table, "wrap", l1))
    with pytest.raises(PreconditionViolated):
        tree_eq_oracle(table, NoIndex(), 2, table.refl_path("i"), deep, deep)


def test_enumerate_trees_deterministic_and_capped(table):
    a = enumerate_trees(table, 2)
    b = enumerate_trees(table, 2)
    assert a == b
    assert len(set(a)) == len(a)
    with pytest.raises(EnumerationTooLarge):
        enumerate_trees(table, 3, cap=5)


def test_equivalence_relation_properties(table):
    """Nonemptiness is reflexive at the identity path, symmetric under path
    inversion, and transitive under composition, exhaustively at depth 2."""
    for pred in (NoIndex(), LabelPred(["i"])):
        engine = EqEngine(table, pred)
        trees = enumerate_trees(table, 2)
        related = {}
        for t0, t1 in itertools.product(trees, repeat=2):
            i0, i1 = table.target(t0.shape), table.target(t1.shape)
            for p in table.idx_paths(i0, i1):
                if engine.count(p, t0, t1):
                    related[(t0, t1)] = p
        for t in trees:
            p = table.refl_path(table.target(t.shape))
            assert engine.count(p, t, t) == 1
        for (t0, t1), p in related.items():
            assert engine.count(table.invert_path(p), t1, t0) > 0
            for t2 in trees:
                q = related.get((t1, t2))
                if q is not None:
                    assert engine.count(table.compose_paths(p, q), t0, t2) > 0


def test_collapse_law(table):
    pred = LabelPred(["i", "j"])
    engine = EqEngine(table, pred)
    trees = enumerate_trees(table, 2)
    for t0, t1 in itertools.product(trees, repeat=2):
        for p in table.idx_paths(table.target(t0.shape), table.target(t1.shape)):
            assert engine.count(p, t0, t1) == 1


def test_witness_sets_are_propositions_on_tables(table):
    # table identifications are reflexivity-only: functional on target paths
    for pred in (NoIndex(), LabelPred(["i"]), LabelPred(["j"])):
        engine = EqEngine(table, pred)
        trees = enumerate_trees(table, 2)
        for t0, t1 in itertools.product(trees, repeat=2):
            for p in table.idx_paths(table.target(t0.shape), table.target(t1.shape)):
                assert engine.count(p, t0, t1) <= 1


def test_verify_encode_decode_fixed_tables(table):
    for pred in (NoIndex(), LabelPred(["i"]), LabelPred(["j"])):
        diag = verify_encode_decode(table, pred, 2)
        assert diag.passed and diag.details["cases"] > 0


def test_saturation_oracle_agrees_with_engine(table):
    trees = enumerate_trees(table, 2)
    for pred in (NoIndex(), LabelPred(["i"])):
        oracle = SaturationOracle(table, pred, trees)
        engine = EqEngine(table, pred)
        for t0, t1 in itertools.product(trees, repeat=2):
            for p in table.idx_paths(table.target(t0.shape), table.target(t1.shape)):
                assert oracle.related(p, t0, t1) == (engine.count(p, t0, t1) > 0)
