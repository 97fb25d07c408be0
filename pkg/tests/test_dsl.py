import json

import pytest

from comodlim.coalg import trivial_coalgebra
from comodlim.dsl import runtime
from comodlim.dsl.jsonio import (
    coalgebra_from_json,
    comodule_from_json,
    diagram_from_json,
    emit_json,
    morphism_from_json,
    render_bindings,
)
from comodlim.dsl.roundtrip import check_malformed, roundtrip_ok
from comodlim.dsl.runtime import run_session, run_text
from comodlim.dsl.syntax import DuplicateName, ParseError, UnknownName, parse_session
from comodlim.errors import FatalCorrectnessError
from comodlim.selftest import corpus_files, malformed_file

HEADER = "coalgebra C = grouplike(2)\ncomodule M over C { dim 1; rho [[1],[0]] }\n"


# -- parsing -----------------------------------------------------------------------

def test_single_coalgebra():
    s = parse_session("coalgebra C = grouplike(2)")
    assert s.declared == {"C": "coalgebra"}
    assert s.directives[0].form == "grouplike" and s.directives[0].param == 2


def test_explicit_comodule_binds_and_validates():
    t = run_text(HEADER)
    assert t.exit_code == 0
    assert t.bindings["M"].dim == 1


def test_unclosed_bracket_position():
    with pytest.raises(ParseError) as err:
        parse_session(HEADER + "morphism f : M -> M = [[1,2]")
    e = err.value
    assert (e.span.line, e.span.column) == (3, 23)
    assert e.expected == frozenset({"','", "']'"})
    assert "line 3, column 23" in str(e)


def test_duplicate_name():
    with pytest.raises(DuplicateName) as err:
        parse_session("coalgebra C = trivial\ncomodule C = cofree(C, 1)")
    assert err.value.span.line == 2


def test_unknown_name():
    with pytest.raises(UnknownName) as err:
        parse_session("coalgebra C = trivial\ncomodule M = cofree(D, 1)")
    assert (err.value.span.line, err.value.span.column) == (2, 21)


def test_name_of_wrong_kind():
    with pytest.raises(ParseError):
        parse_session("coalgebra C = trivial\nlimit P = product(C)")


def test_block_field_errors():
    with pytest.raises(ParseError, match="missing field"):
        parse_session("coalgebra C = trivial\ncomodule M over C { dim 1 }")
    with pytest.raises(ParseError, match="unknown field"):
        parse_session("coalgebra C = trivial\ncomodule M over C { dim 1; rho [[1]]; tau [[1]] }")
    with pytest.raises(ParseError, match="given twice"):
        parse_session("coalgebra C = trivial\ncomodule M over C { dim 1; dim 1; rho [[1]] }")


def test_unknown_directive_lists_expected():
    with pytest.raises(ParseError) as err:
        parse_session("frobnicate X")
    assert "coalgebra" in err.value.expected


def test_comments_semicolons_and_line_breaks():
    text = """# leading comment
coalgebra C = grouplike(2); comodule A over C { dim 1; rho [[1],[0]] }  # trailing
comodule B over C {
  dim 1
  rho [[0],
       [1]]
}
"""
    t = run_text(text)
    assert t.exit_code == 0
    assert set(t.bindings) == {"C", "A", "B"}


def test_rational_literals():
    t = run_text('coalgebra C = trivial\ncomodule V over C { dim 2; rho [[1, 0], [0, 1]] }\n'
                 'morphism f : V -> V = [[1/2, "-3/4"], [0, 2]]')
    assert t.bindings["f"].mat.to_literal() == [["1/2", "-3/4"], ["0", "2"]]


def test_zero_denominator():
    with pytest.raises(ParseError, match="zero denominator"):
        parse_session("coalgebra C = trivial\ncomodule V over C { dim 1; rho [[1/0]] }")


def test_spans_nest():
    s = parse_session(HEADER)
    for d in s.directives:
        assert d.span.start < d.span.end
    assert s.directives[0].span.end <= s.directives[1].span.start


# -- evaluation ------------------------------------------------------------------

def test_empty_session():
    t = run_session(parse_session(""))
    assert t.entries == [] and t.exit_code == 0


def test_graded_lines_product_reports_comparison():
    text = HEADER + ("comodule N over C { dim 1; rho [[0],[1]] }\n"
                     "limit P = product(M, N)\n")
    t = run_text(text)
    entry = t.entries[-1]
    assert entry.ok and entry.summary["apex_dim"] == 2
    assert entry.certificate["checks"]["comparison with direct sum is an isomorphism"] is True


def test_not_coinvariant_error_carries_span_and_witness():
    text = "coalgebra D = divided_power(2)\ncomodule R = cofree(D, 1)\ncomodule S = sub(R, [[0], [1]])\n"
    t = run_text(text)
    assert t.exit_code == 1
    err = t.entries[-1].error
    assert err.startswith("line 3, column 1")
    assert "witness ['0', '1']" in err


def test_validation_errors_carry_spans():
    t = run_text("coalgebra C = grouplike(2)\ncomodule M over C { dim 1; rho [[1],[1]] }")
    assert t.exit_code == 1
    assert t.entries[-1].error.startswith("line 2")
    assert "counit" in t.entries[-1].error


def test_matrix_shape_error():
    t = run_text(HEADER + "morphism f : M -> M = [[1, 2]]")
    assert t.exit_code == 1 and "expected 1x1" in t.entries[-1].error


def test_stops_at_first_error_unless_keep_going():
    text = HEADER + "morphism bad : M -> M = [[1, 2]]\ncomodule Z = cofree(C, 1)\n"
    assert [e.ok for e in run_text(text).entries] == [True, True, False]
    t = run_text(text, keep_going=True)
    assert [e.ok for e in t.entries] == [True, True, False, True]
    assert t.exit_code == 1


def test_mediate_binds_a_morphism():
    t = run_text((corpus_dir() / "10_mediate.comod").read_text())
    assert t.exit_code == 0
    assert t.bindings["into_p"].mat.to_literal() == [["2", "0"], ["0", "3"]]


def test_verify_reruns_certificates():
    t = run_text((corpus_dir() / "04_pullback.comod").read_text())
    verify = [e for e in t.entries if e.directive == "verify"][0]
    assert verify.certificate["ok"]
    assert "maximality witnesses" in verify.certificate["checks"]


def test_certificate_failure_exit_code(monkeypatch):
    real = runtime.product

    def broken(*args, **kwargs):
        res = real(*args, **kwargs)
        res.certificate.add("forced failure", False)
        return res

    monkeypatch.setattr(runtime, "product", broken)
    t = run_text(HEADER + "limit P = product(M)")
    assert t.exit_code == 2
    assert t.entries[-1].certificate["ok"] is False


def test_fatal_exit_code(monkeypatch):
    def boom(*args, **kwargs):
        raise FatalCorrectnessError("lift leaves the top subcomodule")

    monkeypatch.setattr(runtime, "mediating_morphism", boom)
    t = run_text((corpus_dir() / "10_mediate.comod").read_text())
    assert t.exit_code == 3


def test_no_certify_skips_checks():
    t = run_text(HEADER + "limit P = product(M, M)", certify=False)
    assert t.exit_code == 0
    assert t.entries[-1].certificate["checks"] == {}


# -- JSON ------------------------------------------------------------------------

def test_trivial_coalgebra_json():
    assert json.loads(emit_json(trivial_coalgebra())) == {
        "name": "trivial", "dim": 1, "delta": [["1"]], "eps": [["1"]]}


def test_key_order_is_fixed():
    text = emit_json(trivial_coalgebra(), indent=None)
    assert text == '{"name": "trivial", "dim": 1, "delta": [["1"]], "eps": [["1"]]}'


def test_cone_json_has_trace():
    t = run_text(HEADER + "limit P = product(M, M)\nemit P")
    data = json.loads(t.entries[-1].json)
    assert data["kind"] == "limit"
    assert data["trace"] == [2, 2]
    assert data["certificate"]["ok"] is True
    assert set(data) >= {"apex", "j", "p", "legs"}


def test_json_loaders_round_trip():
    t = run_text((corpus_dir() / "09_diagram.comod").read_text())
    b = t.bindings
    coalgebras = {"D": coalgebra_from_json(json.loads(emit_json(b["D"])))}
    comods = {n: comodule_from_json(json.loads(emit_json(b[n])), coalgebras, n) for n in ("R", "S", "T")}
    assert comods["R"] == b["R"]
    f = morphism_from_json(json.loads(emit_json(b["inc"])), comods)
    assert emit_json(f) == emit_json(b["inc"])
    d = diagram_from_json(json.loads(emit_json(b["Chain"])), comods)
    assert emit_json(d) == emit_json(b["Chain"])


def test_runs_are_deterministic():
    text = (corpus_dir() / "11_random_family.comod").read_text()
    a, b = run_text(text), run_text(text)
    assert json.dumps(a.to_dict()) == json.dumps(b.to_dict())
    assert render_bindings(a.bindings) == render_bindings(b.bindings)


# -- session corpus -------------------------------------------------------------

def corpus_dir():
    return corpus_files()[0].parent


def test_corpus_size():
    assert len(corpus_files()) >= 10


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.name)
def test_corpus_file_runs_and_round_trips(path):
    text = path.read_text()
    assert run_text(text).exit_code == 0
    ok, why = roundtrip_ok(text)
    assert ok, why


def test_malformed_file():
    text = malformed_file().read_text()
    ok, why = check_malformed(text)
    assert ok, why
    with pytest.raises(ParseError) as err:
        parse_session(text)
    assert (err.value.span.line, err.value.span.column) == (5, 23)
