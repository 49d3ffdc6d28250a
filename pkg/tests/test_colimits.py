import pytest
from hypothesis import given, settings, strategies as st

from setverse.colimits import (
    Span,
    check_join_prop,
    check_pushout_mono,
    check_pushout_mono_trunc,
    is_mono,
    join,
    product_span,
    pushout,
)
from setverse.errors import PreconditionViolated
from setverse.fincore import ElemMap, FinSet, enum_maps, is_prop


def naive_quotient_size(span: Span) -> int:
    """Independent oracle: close the generated relation over B ⊔ C by
    repeatedly merging overlapping classes, then count the classes."""
    nb = span.B.size
    classes = [{i} for i in range(nb + span.C.size)]
    for a in span.A.elements:
        i, j = span.f(a), nb + span.g(a)
        ci = next(c for c in classes if i in c)
        cj = next(c for c in classes if j in c)
        if ci is not cj:
            classes.remove(cj)
            ci |= cj
    return len(classes)


def mk_span(a, b, c, f_targets, g_targets) -> Span:
    return Span(
        FinSet(a),
        FinSet(b),
        FinSet(c),
        ElemMap(FinSet(a), FinSet(b), tuple(f_targets)),
        ElemMap(FinSet(a), FinSet(c), tuple(g_targets)),
    )


@st.composite
def spans_strategy(draw, max_size=4):
    b = draw(st.integers(0, max_size))
    c = draw(st.integers(0, max_size))
    a = draw(st.integers(0, max_size)) if b and c else 0
    ft = tuple(draw(st.integers(0, b - 1)) for _ in range(a))
    gt = tuple(draw(st.integers(0, c - 1)) for _ in range(a))
    return mk_span(a, b, c, ft, gt)


@st.composite
def mono_spans_strategy(draw, max_size=4):
    b = draw(st.integers(0, max_size))
    a = draw(st.integers(0, b))
    c = draw(st.integers(1, max_size)) if a else draw(st.integers(0, max_size))
    ft = tuple(sorted(draw(st.permutations(range(b)))[:a]))
    gt = tuple(draw(st.integers(0, c - 1)) for _ in range(a))
    return mk_span(a, b, c, ft, gt)


spans = spans_strategy()
mono_spans = mono_spans_strategy()


def test_pushout_examples():
    assert pushout(mk_span(0, 1, 1, (), ())).D.size == 2
    assert pushout(mk_span(1, 1, 1, (0,), (0,))).D.size == 1
    derived = mk_span(1, 2, 2, (0,), (0,))
    assert naive_quotient_size(derived) == 3
    assert pushout(derived).D.size == 3


def test_pushout_deterministic_renumbering():
    # classes are numbered by first occurrence: all of B first, then C
    po = pushout(mk_span(1, 2, 2, (1,), (0,)))
    assert po.inl.targets == (0, 1)
    assert po.inr.targets == (1, 2)


@given(spans)
def test_pushout_matches_naive_closure(span):
    assert pushout(span).D.size == naive_quotient_size(span)


@given(spans)
def test_pushout_cocone_and_surjectivity(span):
    po = pushout(span)
    for a in span.A.elements:
        assert po.inl(span.f(a)) == po.inr(span.g(a))
    hit = set(po.inl.targets) | set(po.inr.targets)
    assert hit == set(po.D.elements)


@given(mono_spans)
def test_pushout_mono_size_formula(span):
    assert pushout(span).D.size == span.B.size + span.C.size - span.A.size


@settings(max_examples=25, deadline=None)
@given(spans_strategy(max_size=2), st.integers(0, 4))
def test_pushout_is_a_coequalizer(span, nz):
    """Universal property, checked exhaustively: every commuting cocone
    factors through the pushout by exactly one map."""
    po = pushout(span)
    z = FinSet(nz)
    all_w = enum_maps(po.D, z)
    for u in enum_maps(span.B, z):
        for v in enum_maps(span.C, z):
            if any(u(span.f(a)) != v(span.g(a)) for a in span.A.elements):
                continue
            mediating = [w for w in all_w if po.inl.then(w) == u and po.inr.then(w) == v]
            assert len(mediating) == 1


def test_join_examples():
    e = FinSet(4)
    assert join(FinSet(0), e).size == e.size
    assert join(FinSet(1), e).size == 1  # contractible factor collapses the join
    derived = product_span(FinSet(2), FinSet(3))
    assert naive_quotient_size(derived) == 1
    assert join(FinSet(2), FinSet(3)).size == 1


def test_join_size_rule_and_commutativity():
    for x in range(5):
        for y in range(5):
            j = join(FinSet(x), FinSet(y)).size
            if x == 0:
                assert j == y
            elif y == 0:
                assert j == x
            else:
                assert j == 1
            assert j == join(FinSet(y), FinSet(x)).size


def test_is_mono():
    assert is_mono(ElemMap.identity(FinSet(3)))
    assert not is_mono(ElemMap(FinSet(2), FinSet(1), (0, 0)))
    assert is_mono(ElemMap(FinSet(0), FinSet(3), ()))


def test_check_pushout_mono_example():
    diag = check_pushout_mono(mk_span(1, 2, 2, (0,), (0,)))
    assert diag.passed and diag.details["inr_mono"] and diag.details["pullback"]


def test_check_pushout_mono_disjoint_union():
    diag = check_pushout_mono(mk_span(0, 2, 3, (), ()))
    assert diag.passed


def test_check_pushout_mono_exhaustive_pair_check():
    # re-verify the pullback condition independently of the diagnostic
    span = mk_span(2, 3, 2, (0, 2), (1, 1))
    po = pushout(span)
    meeting = {
        (b, c)
        for b in span.B.elements
        for c in span.C.elements
        if po.inl(b) == po.inr(c)
    }
    assert meeting == {(span.f(a), span.g(a)) for a in span.A.elements}
    assert check_pushout_mono(span).passed


@given(mono_spans)
def test_check_pushout_mono_randomized(span):
    assert check_pushout_mono(span).passed


def test_check_pushout_mono_precondition():
    with pytest.raises(PreconditionViolated):
        check_pushout_mono(mk_span(2, 1, 1, (0, 0), (0, 0)))


def test_check_join_prop():
    assert check_join_prop(FinSet(0), FinSet(1)).passed
    assert check_join_prop(FinSet(1), FinSet(1)).passed
    assert check_join_prop(FinSet(0), FinSet(0)).passed
    diag = check_join_prop(FinSet(2), FinSet(1))
    assert diag.passed and diag.vacuous


def test_check_pushout_mono_trunc_prop_case():
    span = mk_span(1, 1, 1, (0,), (0,))
    h = ElemMap(FinSet(1), FinSet(1), (0,))
    diag = check_pushout_mono_trunc(span, -1, h)
    assert diag.passed and not diag.vacuous
    assert is_prop(FinSet(diag.details["pushout_size"]))


def test_check_pushout_mono_trunc_unsatisfiable_side_condition():
    diag = check_pushout_mono_trunc(mk_span(0, 1, 1, (), ()), -1)
    assert diag.passed and diag.vacuous


def test_check_pushout_mono_trunc_missing_h():
    with pytest.raises(PreconditionViolated):
        check_pushout_mono_trunc(mk_span(1, 1, 1, (0,), (0,)), -1)


def test_check_pushout_mono_trunc_set_level_is_vacuous():
    for span in (mk_span(0, 3, 2, (), ()), mk_span(2, 3, 4, (0, 1), (3, 3))):
        diag = check_pushout_mono_trunc(span, 0)
        assert diag.passed and diag.vacuous


def test_check_pushout_mono_trunc_bad_level():
    with pytest.raises(PreconditionViolated):
        check_pushout_mono_trunc(mk_span(0, 1, 1, (), ()), 1)
