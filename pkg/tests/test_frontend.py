import io
import json
from contextlib import redirect_stderr, redirect_stdout

import pytest

from setverse.errors import (
    ArityMismatch,
    DuplicateName,
    ElementOutOfRange,
    ParseError,
    UnknownFormer,
)
from setverse.frontend import (
    build_signature,
    cli_main,
    format_code,
    parse_expr,
    parse_signature,
)
from setverse.universe import (
    CN,
    CPi,
    CPo0,
    CUnit,
    UniverseSig,
    el,
    enumerate_codes,
)

STD_TEXT = """
; the standard two-base signature
(signature
  (nullary bool 2)
  (nullary tri 3)
  (formers unit empty sum sigma pi id po0))
"""


@pytest.fixture(scope="module")
def sig():
    return build_signature(parse_signature(STD_TEXT))


@pytest.fixture
def sig_file(tmp_path):
    path = tmp_path / "std.vk"
    path.write_text(STD_TEXT)
    return str(path)


def run_cli(args):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = cli_main(args)
    return code, out.getvalue(), err.getvalue()


# --------------------------------------------------------------------------
# Signature parsing
# --------------------------------------------------------------------------


def test_parse_signature_basic():
    sf = parse_signature("(signature (nullary bool 2) (formers unit pi))")
    assert sf.nullary == (("bool", 2),)
    assert sf.formers == ("unit", "pi")


def test_parse_signature_empty():
    sf = parse_signature("(signature)")
    assert sf.nullary == () and sf.formers == ()


def test_parse_signature_duplicate_name():
    with pytest.raises(DuplicateName):
        parse_signature("(signature (nullary bool 2) (nullary bool 3))")


def test_parse_signature_unknown_former():
    with pytest.raises(UnknownFormer):
        parse_signature("(signature (formers glue))")


def test_parse_signature_flags():
    sf = parse_signature("(signature (nullary b 2) (flags nbad))")
    assert sf.flags == ("nbad",)
    assert build_signature(sf).nbad
    with pytest.raises(ParseError):
        parse_signature("(signature (flags shiny))")


def test_parse_signature_syntax_errors():
    with pytest.raises(ParseError):
        parse_signature("(signature (nullary bool))")
    with pytest.raises(ParseError):
        parse_signature("(signature")
    with pytest.raises(ParseError):
        parse_signature("(module)")
    err = None
    try:
        parse_signature("(signature\n  (wrong thing))")
    except ParseError as exc:
        err = exc
    assert err is not None and err.line == 2


def test_comments_and_whitespace():
    sf = parse_signature("(signature ; comment (ignored\n (nullary b 1))")
    assert sf.nullary == (("b", 1),)


# --------------------------------------------------------------------------
# Expression parsing
# --------------------------------------------------------------------------


def test_parse_expr_pi(sig):
    code = parse_expr("(pi (n bool) ((unit) (unit)))", sig)
    assert code == CPi(CN("bool"), (CUnit(), CUnit()))


def test_parse_expr_element_out_of_range(sig):
    with pytest.raises(ElementOutOfRange):
        parse_expr("(id (n bool) 0 2)", sig)


def test_parse_expr_po0(sig):
    code = parse_expr("(po0 (unit) (n bool) (n bool) (0) (0))", sig)
    assert isinstance(code, CPo0)
    assert el(sig, code).size == 3


def test_parse_expr_arity_errors(sig):
    with pytest.raises(ArityMismatch):
        parse_expr("(sum (unit))", sig)
    with pytest.raises(ArityMismatch):
        parse_expr("(sigma (n bool) ((unit)))", sig)
    with pytest.raises(ArityMismatch):
        parse_expr("(po0 (unit) (n bool) (n bool) (0 0) (0))", sig)


def test_parse_expr_unknown_name_and_former(sig):
    with pytest.raises(ParseError):
        parse_expr("(n nosuch)", sig)
    with pytest.raises(ParseError):
        parse_expr("(wedge (unit) (unit))", sig)
    small = UniverseSig({"bool": 2}, ("unit",))
    with pytest.raises(UnknownFormer):
        parse_expr("(pi (unit) ((unit)))", small)


def test_round_trip_on_enumerated_codes(sig):
    codes = enumerate_codes(sig, 4, 4)
    rendered = {}
    for c in codes:
        text = format_code(c)
        assert parse_expr(text, sig) == c
        assert text not in rendered, f"printer collision: {text}"
        rendered[text] = c


# --------------------------------------------------------------------------
# CLI
# --------------------------------------------------------------------------


def test_cli_check(sig_file):
    code, out, _ = run_cli(["check", sig_file])
    assert code == 0
    assert out.strip() == "ok: 2 nullary, 7 formers"


def test_cli_el(sig_file):
    code, out, _ = run_cli(["el", sig_file, "-e", "(sigma (n bool) ((unit) (n bool)))"])
    assert code == 0 and out.strip() == "size=3"


def test_cli_eq_unequal_exits_zero(sig_file):
    code, out, _ = run_cli(["eq", sig_file, "-e", "(unit)", "-f", "(empty)", "--pred", "isprop"])
    assert code == 0
    assert out.strip() == "unequal"


def test_cli_eq_witnesses(sig_file):
    code, out, _ = run_cli(
        ["eq", sig_file, "-e", "(n bool)", "-f", "(n bool)", "--pred", "isprop", "--witnesses"]
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "equal"
    assert lines[1].startswith("path=[0, 1]")


def test_cli_enumerate_order(sig_file):
    code, out, _ = run_cli(["enumerate", sig_file, "--max-nodes", "1"])
    assert code == 0
    assert out.splitlines() == ["(n bool)", "(n tri)", "(unit)", "(empty)"]


def test_cli_parse_error_exit_2(sig_file, tmp_path):
    bad = tmp_path / "bad.vk"
    bad.write_text("(signature (nullary bool 2) (nullary bool 3))")
    code, _, err = run_cli(["check", str(bad)])
    assert code == 2 and "declared twice" in err


def test_cli_usage_error_exit_2():
    code, _, _ = run_cli(["frobnicate"])
    assert code == 2


def test_cli_verify_truncation_non_prop_pred_exit_2(sig_file):
    code, _, err = run_cli(["verify", sig_file, "--pred", "size=2", "--suite", "truncation"])
    assert code == 2
    assert "negative control" in err


def test_cli_verify_forced_mode_exit_1(tmp_path):
    # forced truncation under a non-prop predicate must find real failures;
    # a lean signature keeps this unit test quick (the acceptance suite runs
    # the full budget)
    lean = tmp_path / "lean.vk"
    lean.write_text("(signature (nullary bool 2) (formers unit empty sum id))")
    code, out, _ = run_cli(
        ["verify", str(lean), "--pred", "size=2", "--suite", "truncation", "--force", "--json"]
    )
    assert code == 1
    (report,) = json.loads(out)
    assert report["suite"] == "truncation"
    assert len(report["failures"]) >= 1


def test_cli_verify_json_schema(sig_file):
    code, out, _ = run_cli(
        ["verify", sig_file, "--suite", "wtypes", "--seed", "3", "--json"]
    )
    assert code == 0
    (report,) = json.loads(out)
    assert set(report) == {
        "suite",
        "pred",
        "cases",
        "vacuous",
        "failures",
        "seed",
        "elapsed_ms",
        "version",
    }
    assert report["seed"] == 3
    assert report["cases"] > 0 and report["failures"] == []


def test_cli_verify_json_deterministic(sig_file):
    def normalized(args):
        code, out, _ = run_cli(args)
        assert code == 0
        reports = json.loads(out)
        for r in reports:
            r["elapsed_ms"] = 0
            r["version"] = "-"
        return reports

    args = ["verify", sig_file, "--suite", "appendixA", "--seed", "0", "--json"]
    assert normalized(args) == normalized(args)


def test_cli_verify_seed_changes_instances(sig_file):
    _, out1, _ = run_cli(["verify", sig_file, "--suite", "wtypes", "--seed", "0", "--json"])
    _, out2, _ = run_cli(["verify", sig_file, "--suite", "wtypes", "--seed", "1", "--json"])
    cases1 = json.loads(out1)[0]["cases"]
    cases2 = json.loads(out2)[0]["cases"]
    assert json.loads(out1)[0]["seed"] != json.loads(out2)[0]["seed"]
    assert cases1 > 0 and cases2 > 0
