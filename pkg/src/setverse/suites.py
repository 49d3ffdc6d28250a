"""Seeded verification suites aggregating kernel checks into reports.

Each runner returns a :class:`~setverse.report.VerifyReport`; randomized
suites are driven by an explicit seed and fixed instance counts, so any
failure is reproducible from the report alone.
"""

from __future__ import annotations

import random
import time

from .colimits import (
    Span,
    check_join_prop,
    check_pushout_mono,
    check_pushout_mono_trunc,
)
from .container import (
    ContainerSig,
    FinSetFamily,
    coproduct,
    retains_check,
)
from .errors import EnumerationTooLarge
from .fincore import ElemMap, FinSet, enum_bijs
from .report import VerifyReport
from .universe import (
    PairScan,
    PredicateSpec,
    UniverseSig,
    code_sexpr,
    forced_truncation,
    verify_partial_univalence,
    verify_truncated,
)
from .wtrees import LabelPred, NoIndex, verify_encode_decode
from .container import FiniteContainerTable, TableShape

SUITE_NAMES = ("univalence", "truncation", "structural", "retains", "appendixA", "wtypes")


def _ms(t0: float) -> int:
    return int((time.monotonic() - t0) * 1000)


# --------------------------------------------------------------------------
# Universe suites
# --------------------------------------------------------------------------


def run_univalence(sig: UniverseSig, pred: PredicateSpec, max_nodes=5, max_el_size=6, seed=0):
    report = verify_partial_univalence(sig, pred, max_nodes, max_el_size)
    report.seed = seed
    return report


def run_truncation(
    sig: UniverseSig, pred: PredicateSpec, max_nodes=5, max_el_size=6, seed=0, force=False
):
    if force:
        report = forced_truncation(sig, pred, max_nodes, max_el_size)
    else:
        report = verify_truncated(sig, pred, max_nodes, max_el_size)
    report.seed = seed
    return report


def run_structural(sig: UniverseSig, max_nodes=5, max_el_size=6, seed=0) -> VerifyReport:
    """Degeneration check: with the empty predicate, equality of codes is
    structural tree equality, and the witnessing bijection is the identity."""
    t0 = time.monotonic()
    pred = PredicateSpec("none")
    report = VerifyReport(suite="structural", pred=str(pred), seed=seed)
    scan = PairScan(sig, pred, max_nodes, max_el_size)
    report.cases = scan.total_pairs
    for c0, c1, cmap in scan.structural_pairs():
        equal = bool(cmap)
        if equal != (c0 == c1):
            report.add_failure(
                {"c0": code_sexpr(c0), "c1": code_sexpr(c1)},
                f"equality {c0 == c1}",
                str(equal),
            )
        elif equal and any(not p.is_identity() for p in cmap):
            report.add_failure(
                {"c0": code_sexpr(c0), "c1": code_sexpr(c1)},
                "witness along the identity bijection",
                repr(sorted(p.fwd.targets for p in cmap)),
            )
    report.elapsed_ms = _ms(t0)
    return report


# --------------------------------------------------------------------------
# Retention suite
# --------------------------------------------------------------------------


def _retains_containers(sig: UniverseSig) -> list[tuple[str, ContainerSig]]:
    """The single-former containers of a signature, plus pairwise coproducts."""
    singles: list[tuple[str, ContainerSig]] = []
    if sig.nullary:
        singles.append(("nullary", UniverseSig({n: f.size for n, f in sig.nullary.items()}, ())))
    for former in ("unit", "empty", "sum", "sigma", "pi", "id", "po0"):
        if former in sig.formers:
            singles.append((former, UniverseSig({}, (former,), bij_cap=sig.bij_cap)))
    out = list(singles)
    for i, (name1, c1) in enumerate(singles):
        for name2, c2 in singles[i + 1 :]:
            out.append((f"{name1}+{name2}", coproduct(c1, c2)))
    if sig.nbad:
        out.append(
            ("nbad", UniverseSig({n: f.size for n, f in sig.nullary.items()}, (), nbad=True))
        )
    return out


def _sample_family(rng: random.Random, max_size: int, max_fiber: int) -> FinSetFamily:
    """A random family over finite-set indices with per-path witness counts.

    Per inhabitant pair the counts are placed on at most one path, so the
    summed child witness sets are propositions and the retention premise
    is satisfiable rather than vacuous.
    """
    fibers = {n: rng.randint(0, max_fiber) for n in range(max_size + 1)}
    counts: dict[tuple, int] = {}
    for n, m in fibers.items():
        paths = enum_bijs(FinSet(n), FinSet(n))
        for x0 in range(m):
            for x1 in range(m):
                if rng.random() < 0.75:
                    q = rng.choice(paths)
                    counts[(n, q.fwd.targets, x0, x1)] = 1
    return FinSetFamily(fibers, counts)


def _families_for(rng: random.Random, container: ContainerSig, count: int) -> list[FinSetFamily]:
    """Sampled families sized to keep the container's extension enumerable."""
    for max_size, max_fiber in ((2, 2), (2, 1), (1, 1)):
        probe = FinSetFamily.constant(max_size, max_fiber)
        try:
            shapes = container.shapes_with_sources_in(probe.support(), cap=500)
            total = 0
            for s in shapes:
                n = 1
                for k in range(len(container.positions(s))):
                    n *= probe.fiber(container.source(s, k)).size
                total += n
            if total <= 60:
                break
        except EnumerationTooLarge:
            continue
    fams = [FinSetFamily.identity(max_size), FinSetFamily.constant(max_size, max_fiber)]
    while len(fams) < count:
        fams.append(_sample_family(rng, max_size, max_fiber))
    return fams


def run_retains(sig: UniverseSig, seed: int = 0, families: int = 50) -> VerifyReport:
    """Retention of 0-truncatedness for every built-in container, the
    nullary container, and all pairwise coproducts, over sampled families."""
    t0 = time.monotonic()
    report = VerifyReport(suite="retains", pred="-", seed=seed)
    for scan_index, (name, container) in enumerate(_retains_containers(sig)):
        rng = random.Random(f"{seed}:{scan_index}")
        for fam_index, fam in enumerate(_families_for(rng, container, families)):
            diag = retains_check(container, fam)
            report.cases += diag.details["cases"]
            report.vacuous += diag.details["vacuous"]
            if not diag.passed:
                for violation in diag.details["violations"][:3]:
                    report.add_failure(
                        {"container": name, "family": fam_index, **violation},
                        "witness count <= 1",
                        str(violation.get("witness_count")),
                    )
    report.elapsed_ms = _ms(t0)
    return report


# --------------------------------------------------------------------------
# Pushout/join suite (CLI token: appendixA)
# --------------------------------------------------------------------------


def _random_mono_span(rng: random.Random, max_size: int = 6) -> Span:
    b = rng.randint(0, max_size)
    a = rng.randint(0, b)
    c = rng.randint(1, max_size) if a > 0 else rng.randint(0, max_size)
    f_targets = tuple(sorted(rng.sample(range(b), a)))
    g_targets = tuple(rng.randrange(c) for _ in range(a))
    return Span(
        FinSet(a),
        FinSet(b),
        FinSet(c),
        ElemMap(FinSet(a), FinSet(b), f_targets),
        ElemMap(FinSet(a), FinSet(c), g_targets),
    )


def run_appendixa(seed: int = 0, spans: int = 500, max_size: int = 6) -> VerifyReport:
    """Set-level pushout checks: mono legs push out to monos and pullbacks,
    propositional joins stay propositional, and pushouts along monos
    preserve the truncation levels in range."""
    t0 = time.monotonic()
    report = VerifyReport(suite="appendixA", pred="-", seed=seed)
    rng = random.Random(seed)

    def absorb(diag, inputs):
        report.cases += 1
        if diag.vacuous:
            report.vacuous += 1
        if not diag.passed:
            report.add_failure({**inputs, **diag.details}, diag.check, "failed")

    for i in range(spans):
        span = _random_mono_span(rng, max_size)
        inputs = {"span": i}
        absorb(check_pushout_mono(span), inputs)
        absorb(check_pushout_mono_trunc(span, 0), inputs)
    for x in range(max_size + 1):
        for y in range(max_size + 1):
            absorb(check_join_prop(FinSet(x), FinSet(y)), {"x": x, "y": y})
    # all small spans of propositions, with the side-condition map supplied
    for a in (0, 1):
        for b in (0, 1):
            for c in (0, 1):
                if a > b or (a == 1 and c == 0):
                    continue  # no mono a->b or no map a->c
                f = ElemMap(FinSet(a), FinSet(b), tuple(range(a)))
                g = ElemMap(FinSet(a), FinSet(c), tuple(0 for _ in range(a)))
                span = Span(FinSet(a), FinSet(b), FinSet(c), f, g)
                prod = b * c
                if a == 0 and prod > 0:
                    h = None  # unsatisfiable side condition; reported vacuous
                else:
                    h = ElemMap(FinSet(prod), FinSet(a), tuple(0 for _ in range(prod)))
                absorb(check_pushout_mono_trunc(span, -1, h), {"a": a, "b": b, "c": c})
    report.elapsed_ms = _ms(t0)
    return report


# --------------------------------------------------------------------------
# Random container tables: encode-decode suite
# --------------------------------------------------------------------------


def _random_table(rng: random.Random) -> FiniteContainerTable:
    labels = ["a", "b", "c"][: rng.randint(1, 3)]
    shapes = []
    n_shapes = rng.randint(2, 4)
    for k in range(n_shapes):
        target = rng.choice(labels)
        n_pos = 0 if k < 2 else rng.randint(0, 2)  # keep some leaf shapes
        slots = tuple((f"p{j}", rng.choice(labels)) for j in range(n_pos))
        shapes.append(TableShape(f"s{k}", target, slots))
    return FiniteContainerTable(labels, shapes)


def run_wtypes(seed: int = 0, tables: int = 20, depth: int = 2) -> VerifyReport:
    """Witness engine vs. saturation oracle on random container tables."""
    t0 = time.monotonic()
    report = VerifyReport(suite="wtypes", pred="-", seed=seed)
    for i in range(tables):
        rng = random.Random(f"{seed}:{i}")
        table = _random_table(rng)
        preds = [("bottom", NoIndex()), ("label", LabelPred([rng.choice(table.labels)]))]
        for pred_name, pred in preds:
            diag = verify_encode_decode(table, pred, depth)
            report.cases += diag.details["cases"]
            if not diag.passed:
                for failure in diag.details["failures"][:3]:
                    report.add_failure(
                        {"table": i, "pred": pred_name, **failure},
                        "witness set matches oracle and is a proposition",
                        "mismatch",
                    )
    report.elapsed_ms = _ms(t0)
    return report


# --------------------------------------------------------------------------
# Everything
# --------------------------------------------------------------------------


def run_suite(
    name: str,
    sig: UniverseSig,
    pred: PredicateSpec,
    *,
    seed: int = 0,
    depth: int = 2,
    max_nodes: int = 5,
    max_el_size: int = 6,
    force: bool = False,
) -> list[VerifyReport]:
    if name == "all":
        return [
            run_suite(n, sig, pred, seed=seed, depth=depth, max_nodes=max_nodes,
                      max_el_size=max_el_size, force=force)[0]
            for n in SUITE_NAMES
        ]
    if name == "univalence":
        return [run_univalence(sig, pred, max_nodes, max_el_size, seed)]
    if name == "truncation":
        return [run_truncation(sig, pred, max_nodes, max_el_size, seed, force)]
    if name == "structural":
        return [run_structural(sig, max_nodes, max_el_size, seed)]
    if name == "retains":
        return [run_retains(sig, seed)]
    if name == "appendixA":
        return [run_appendixa(seed)]
    if name == "wtypes":
        return [run_wtypes(seed, depth=depth)]
    raise ValueError(f"unknown suite {name!r}")
