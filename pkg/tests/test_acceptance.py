"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s``. The budgets and
tolerances are fixed here, not configurable: signature {bool(2), tri(3)}
with all formers, codes of at most 5 nodes decoding to size at most 6.
"""

import itertools
import json
import time

import pytest

from setverse.container import retains_check
from setverse.fincore import FinSet
from setverse.frontend import cli_main
from setverse.suites import (
    _retains_containers,
    run_appendixa,
    run_retains,
    run_structural,
    run_wtypes,
)
from setverse.universe import (
    CN,
    CPi,
    CSigma,
    CSum,
    PairScan,
    PredicateSpec,
    UniverseSig,
    code_sexpr,
    el,
    enumerate_codes,
    eqv_total_count,
    forced_truncation,
    make_engine,
    verify_partial_univalence,
    verify_truncated,
)

MAX_NODES = 5
MAX_EL_SIZE = 6


@pytest.fixture(scope="module")
def std_sig():
    return UniverseSig({"bool": 2, "tri": 3})


def report_line(criterion: str, ok: bool, detail: str) -> None:
    print(f"[acceptance] {criterion}: {'PASS' if ok else 'FAIL'} ({detail})")


def test_criterion_1_truncation(std_sig):
    """Every pair of budget codes has at most one path, for all three
    propositional predicates; target runtime < 60 s."""
    t0 = time.monotonic()
    reports = [
        verify_truncated(std_sig, PredicateSpec.parse(p), MAX_NODES, MAX_EL_SIZE)
        for p in ("isprop", "iscontr", "none")
    ]
    elapsed = time.monotonic() - t0
    ok = all(r.passed for r in reports) and elapsed < 60.0
    detail = (
        f"{sum(r.cases for r in reports)} pairs over 3 predicates, "
        f"{sum(len(r.failures) for r in reports)} failures, {elapsed:.1f}s"
    )
    report_line("criterion 1 truncation", ok, detail)
    for r in reports:
        assert r.passed, r.failures[:3]
        assert r.cases > 10**6
    assert elapsed < 60.0, f"truncation suite took {elapsed:.1f}s"


def test_criterion_2_partial_univalence(std_sig):
    """For predicate-satisfying pairs the path count equals the bijection
    count exactly."""
    report = verify_partial_univalence(
        std_sig, PredicateSpec("isprop"), MAX_NODES, MAX_EL_SIZE
    )
    ok = report.passed and report.cases > 0
    report_line("criterion 2 partial univalence", ok, f"{report.cases} prop pairs")
    assert ok, report.failures[:3]


def test_criterion_3_negative_control(std_sig):
    """A predicate admitting a two-element decoding breaks truncation: the
    base-type pair has exactly two paths and the forced scan reports it."""
    pred = PredicateSpec.parse("size=2")
    count = eqv_total_count(std_sig, pred, CN("bool"), CN("bool"))
    forced = forced_truncation(std_sig, pred, MAX_NODES, MAX_EL_SIZE)
    ok = count == 2 and len(forced.failures) >= 1
    report_line(
        "criterion 3 negative control",
        ok,
        f"pair count {count}, forced failures {len(forced.failures)}",
    )
    assert count == 2
    assert len(forced.failures) >= 1
    assert not forced.passed


def test_criterion_4_structural_degeneration(std_sig):
    """Under the empty predicate, equality of codes is structural tree
    equality along the identity bijection, on every enumerated pair."""
    report = run_structural(std_sig, MAX_NODES, MAX_EL_SIZE)
    ok = report.passed and report.cases > 10**6
    report_line("criterion 4 structural degeneration", ok, f"{report.cases} pairs")
    assert ok, report.failures[:3]


def test_criterion_5_encode_decode():
    """Witness sets match the saturation oracle and stay propositions, over
    20 random container tables with both predicate choices; < 30 s."""
    t0 = time.monotonic()
    report = run_wtypes(seed=0, tables=20, depth=2)
    elapsed = time.monotonic() - t0
    ok = report.passed and report.cases > 0 and elapsed < 30.0
    report_line(
        "criterion 5 encode-decode", ok, f"{report.cases} instances, {elapsed:.1f}s"
    )
    assert ok, report.failures[:3]


def test_criterion_6_retains(std_sig):
    """Retention of 0-truncatedness for every built-in container, the
    nullary container, the pushout container, and all pairwise coproducts,
    over at least 50 sampled families each; the pathological former must
    produce a concrete violation."""
    containers = _retains_containers(std_sig)
    names = [name for name, _ in containers]
    for former in ("unit", "empty", "sum", "sigma", "pi", "id", "po0", "nullary"):
        assert former in names
    assert sum("+" in n for n in names) == 28  # all pairwise coproducts of the 8
    report = run_retains(std_sig, seed=0, families=50)

    bad_sig = UniverseSig({"bool": 2, "tri": 3}, nbad=True)
    nbad_container = dict(_retains_containers(bad_sig))["nbad"]
    from setverse.container import FinSetFamily

    nbad_diag = retains_check(nbad_container, FinSetFamily.constant(1, 1))
    violation = nbad_diag.details["violations"][0]
    ok = report.passed and not nbad_diag.passed and violation["witness_count"] >= 2
    report_line(
        "criterion 6 retains-truncatedness",
        ok,
        f"{report.cases} pairs across {len(names)} containers, "
        f"nbad witness count {violation.get('witness_count')}",
    )
    assert report.passed, report.failures[:3]
    assert not nbad_diag.passed
    assert violation["witness_count"] == 2
    assert "shape0" in violation  # a concrete witness pair is reported


def test_criterion_7_pushout_suite():
    """500 seeded mono-legged spans: pushout-of-mono and pullback checks,
    propositional joins, truncation preservation at both levels; < 10 s."""
    t0 = time.monotonic()
    report = run_appendixa(seed=0, spans=500)
    elapsed = time.monotonic() - t0
    # the 500 set-level truncation instances are all vacuous by construction
    ok = report.passed and report.vacuous >= 500 and elapsed < 10.0
    report_line(
        "criterion 7 pushout suite",
        ok,
        f"{report.cases} checks, {report.vacuous} vacuous, {elapsed:.1f}s",
    )
    assert report.passed, report.failures[:3]
    assert report.vacuous >= 500
    assert elapsed < 10.0


def _full_relation(sig, pred):
    """All equal ordered pairs of budget codes: sparse structural pairs plus
    the collapsing size groups, where every same-size pair is equal."""
    scan = PairScan(sig, pred, MAX_NODES, MAX_EL_SIZE)
    related = {}
    for c0, c1, cmap in scan.structural_pairs():
        if cmap:
            related[(c0, c1)] = cmap
    return scan, related


def test_criterion_8_kernel_coherence(std_sig):
    """Equality is an equivalence relation and a congruence over the full
    budget, and the reflexivity encoder lands in its own witness set."""
    codes = enumerate_codes(std_sig, MAX_NODES, MAX_EL_SIZE)
    problems = []
    for predname in ("isprop", "iscontr", "none"):
        pred = PredicateSpec.parse(predname)
        scan, related = _full_relation(std_sig, pred)
        collapse = scan.collapse_group_sizes()
        # reflexivity: collapsing groups have path count >= 1 by the size
        # formula; structural codes must relate to themselves explicitly
        for size in collapse:
            assert scan.path_count(size) >= 1
        for c in codes:
            size = el(std_sig, c).size
            if not pred.holds(FinSet(size)) and (c, c) not in related:
                problems.append(("refl", predname, code_sexpr(c)))
        # symmetry and transitivity of the sparse part (collapsing groups
        # are full cliques, and sizes never mix across the two parts)
        for (c0, c1) in related:
            if (c1, c0) not in related:
                problems.append(("sym", predname, code_sexpr(c0), code_sexpr(c1)))
        by_left = {}
        for (c0, c1) in related:
            by_left.setdefault(c0, []).append(c1)
        for (c0, c1) in related:
            for c2 in by_left.get(c1, ()):
                if (c0, c2) not in related:
                    problems.append(
                        ("trans", predname, code_sexpr(c0), code_sexpr(c2))
                    )
    assert not problems, problems[:5]

    # congruence: equal components give equal composites, with families
    # transported along a witnessing bijection
    engine_cache = {}
    instances = 0
    for predname in ("isprop", "none"):
        pred = PredicateSpec.parse(predname)
        engine = engine_cache.setdefault(predname, make_engine(std_sig, pred))
        scan, related = _full_relation(std_sig, pred)
        small_related = [
            (c0, c1, cmap)
            for (c0, c1), cmap in related.items()
            if el(std_sig, c0).size <= 2
        ][:40]
        leaves = [c for c in enumerate_codes(std_sig, 1, 3)]
        fams = [tuple(f) for f in itertools.product(leaves, repeat=2)][:6]
        for c0, c1, cmap in small_related:
            k = el(std_sig, c0).size
            p = next(iter(cmap))
            for fam0 in itertools.product(leaves, repeat=k):
                fam1 = list(fam0)
                for a in range(k):
                    fam1[p(a)] = fam0[a]
                for cls in (CPi, CSigma):
                    whole0 = cls(c0, tuple(fam0))
                    whole1 = cls(c1, tuple(fam1))
                    assert engine.total_count(
                        std_sig.code_tree(whole0), std_sig.code_tree(whole1)
                    ) > 0, (predname, code_sexpr(whole0), code_sexpr(whole1))
                    instances += 1
                if instances > 400:
                    break
        # binary sums of related components
        for (l0, l1, _), (r0, r1, _) in itertools.product(small_related[:6], repeat=2):
            whole0, whole1 = CSum(l0, r0), CSum(l1, r1)
            assert engine.total_count(
                std_sig.code_tree(whole0), std_sig.code_tree(whole1)
            ) > 0
            instances += 1

    # the reflexivity encoding is a member of its own witness set
    for predname in ("isprop", "none"):
        pred = PredicateSpec.parse(predname)
        engine = engine_cache[predname]
        for c in codes:
            t = std_sig.code_tree(c)
            refl = std_sig.refl_path(el(std_sig, c))
            ws = engine.witnesses(refl, t, t)
            assert engine.encode_refl(t) in ws.witnesses, code_sexpr(c)
    report_line(
        "criterion 8 kernel coherence",
        True,
        f"{len(codes)} codes, {instances} congruence instances",
    )


def test_criterion_9_determinism(tmp_path):
    """Two runs of the full suite emit identical JSON up to elapsed_ms and
    version."""
    sig_path = tmp_path / "std.vk"
    sig_path.write_text(
        "(signature (nullary bool 2) (nullary tri 3)"
        " (formers unit empty sum sigma pi id po0))"
    )
    import contextlib
    import io

    def run():
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = cli_main(
                ["verify", str(sig_path), "--suite", "all", "--seed", "0", "--json"]
            )
        assert code == 0
        reports = json.loads(buf.getvalue())
        for r in reports:
            r["elapsed_ms"] = 0
            r["version"] = "-"
        return reports

    first = run()
    second = run()
    ok = first == second and len(first) == 6
    report_line("criterion 9 determinism", ok, f"{len(first)} suite reports")
    assert first == second
    assert [r["suite"] for r in first] == [
        "univalence",
        "truncation",
        "structural",
        "retains",
        "appendixA",
        "wtypes",
    ]
