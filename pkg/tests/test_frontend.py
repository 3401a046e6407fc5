import json

import pytest

from vacalc.frontend import (
    ParseError,
    parse_definition,
    parse_query,
    render_definition,
    run_query,
)
from vacalc.frontend.cli import main
from vacalc.frontend.parser import parse_element, parse_vertex_expr
from vacalc.lie_conformal import (
    builtin,
    check_jacobi,
    check_skew,
    lambda_bracket,
    neveu_schwarz,
    virasoro,
)
from vacalc import vertex_calc as vx

VIRASORO_FILE = """
algebra virasoro {
  param c;
  generator L : even, weight 2;
  central C : even acts c;
  bracket [L, L] = d(L) + 2*lambda*L + (lambda^3/12)*C;
}
"""

NS_REVERSED_FILE = """
# the mixed bracket is declared in the reversed order on purpose
algebra ns2 {
  param c;
  generator L : even, weight 2;
  generator G : odd, weight 3/2;
  central C : even acts c;
  bracket [L, L] = d(L) + 2*lambda*L + (lambda^3/12)*C;
  bracket [G, L] = (1/2)*d(G) + (3/2)*lambda*G;
  bracket [G, G] = L + (lambda^2/6)*C;
}
"""


def test_parse_virasoro_file():
    alg = parse_definition(VIRASORO_FILE)
    assert alg == virasoro()
    assert check_skew(alg).passed and check_jacobi(alg).passed


def test_reversed_bracket_normalized():
    alg = parse_definition(NS_REVERSED_FILE)
    reference = neveu_schwarz()
    for key in reference.table:
        assert alg.table[key] == reference.table[key], key


def test_round_trip_builtins():
    for name in ("virasoro", "neveu_schwarz", "free_fermion", "free_boson", "current_sl2"):
        alg = builtin(name)
        assert parse_definition(render_definition(alg)) == alg


def test_duplicate_bracket_rejected():
    bad = VIRASORO_FILE.replace(
        "}", "  bracket [L, L] = lambda*L;\n}"
    )
    with pytest.raises(ParseError, match="duplicate bracket"):
        parse_definition(bad)


def test_undeclared_symbol_named_in_diagnostic():
    bad = VIRASORO_FILE.replace("2*lambda*L", "2*lambda*M")
    with pytest.raises(ParseError, match="'M'"):
        parse_definition(bad)


def test_syntax_error_reports_position():
    with pytest.raises(ParseError) as err:
        parse_definition("algebra x {\n  param ;\n}")
    assert err.value.line == 2


def test_parity_mismatch_in_rhs_rejected():
    bad = NS_REVERSED_FILE.replace(
        "bracket [G, G] = L + (lambda^2/6)*C;",
        "bracket [G, G] = G;",
    )
    with pytest.raises(ParseError, match="parity"):
        parse_definition(bad)


def test_expression_parsing(vir, fermion2):
    e = parse_element("d^2(L) - 3*L", vir)
    assert e == vir.gen("L", 2).add(vir.gen("L").scale(-3))
    v = parse_vertex_expr(":d(psi1) psi1: + 2*vac", fermion2)
    expected = vx.normal_word(fermion2, [("psi1", 1), ("psi1", 0)]).add(
        vx.vacuum(fermion2).scale(2)
    )
    assert v == expected
    # sugar :a b c: is the right-nested :a :b c::
    lhs = parse_vertex_expr(":psi1 d(psi1) psi2:", fermion2)
    rhs = parse_vertex_expr(":psi1 :d(psi1) psi2::", fermion2)
    assert lhs == rhs


def test_query_bracket_text(vir):
    out, code = run_query(parse_query(["bracket", "L", "L"]), vir)
    assert code == 0
    assert out == "d(L) + 2*lambda*L + 1/12*lambda^3*C"


def test_query_bracket_round_trips_through_parser(vir):
    out, _ = run_query(parse_query(["bracket", "L", "L"]), vir)
    from vacalc.frontend.parser import parse_conformal_expr

    assert parse_conformal_expr(out, vir) == lambda_bracket(
        vir.gen("L"), vir.gen("L"), vir
    )


def test_query_ope(vir):
    out, code = run_query(parse_query(["ope", "L", "L"]), vir)
    assert code == 0
    assert out == "L(z)L(w) ~ (c/2)/(z-w)^4 + 2*L(w)/(z-w)^2 + d(L)(w)/(z-w)"


def test_query_ope_ns_suite(ns):
    expected = {
        ("G", "G"): "G(z)G(w) ~ (c/3)/(z-w)^3 + L(w)/(z-w)",
        ("L", "G"): "L(z)G(w) ~ 3/2*G(w)/(z-w)^2 + d(G)(w)/(z-w)",
        ("G", "L"): "G(z)L(w) ~ 3/2*G(w)/(z-w)^2 + 1/2*d(G)(w)/(z-w)",
    }
    for (a, b), text in expected.items():
        out, code = run_query(parse_query(["ope", a, b]), ns)
        assert code == 0 and out == text


def test_query_modes(ns, vir):
    out, _ = run_query(parse_query(["modes", "G_{1/2}", "G_{-1/2}"]), ns)
    assert out == "L_0"
    out, _ = run_query(parse_query(["modes", "L_2", "L_{-2}"]), vir)
    assert out == "4*L_0 + 1/2*C"


def test_query_check_exit_codes(vir):
    out, code = run_query(parse_query(["check", "jacobi"]), vir)
    assert code == 0 and "ok" in out
    corrupted = parse_definition(
        VIRASORO_FILE.replace("2*lambda*L", "3*lambda*L")
    )
    out, code = run_query(parse_query(["check", "jacobi"]), corrupted)
    assert code == 1 and "FAIL" in out
    out, code = run_query(parse_query(["check", "skew"]), corrupted)
    assert code == 1 and "FAIL" in out


def test_query_weight_and_primary(fermion2):
    out, _ = run_query(parse_query(["weight", ":d(psi1) psi1:"]), fermion2)
    assert out == "2"
    out, _ = run_query(parse_query(["weight", "psi1 + :d(psi1) psi1:"]), fermion2)
    assert out == "inhomogeneous"
    out, _ = run_query(parse_query(["primary", "psi1"]), fermion2)
    assert out == "primary(1/2)"


def test_query_nproduct(fermion2):
    out, _ = run_query(parse_query(["nproduct", "psi1", "-2", "psi2"]), fermion2)
    assert out == ":d(psi1) psi2:"


def test_query_json_schema(vir):
    out, _ = run_query(parse_query(["bracket", "L", "L"]), vir, fmt="json")
    payload = json.loads(out)
    assert payload["schema_version"] == 1
    assert payload["algebra"] == "virasoro"
    degrees = [t["exponents"] for t in payload["result"]["terms"]]
    assert degrees == [[0], [1], [3]]


def test_query_latex(vir):
    out, _ = run_query(parse_query(["bracket", "L", "L"]), vir, fmt="latex")
    assert "\\lambda" in out and "\\partial" in out


def test_determinism(ns):
    runs = {
        run_query(parse_query(["bracket", "G", "L"]), neveu_schwarz())[0]
        for _ in range(3)
    }
    assert len(runs) == 1


def test_bad_queries_raise():
    with pytest.raises(ParseError):
        parse_query(["frobnicate", "x"])
    with pytest.raises(ParseError):
        parse_query(["bracket", "L"])
    with pytest.raises(ParseError):
        parse_query(["check", "nonsense"])


# -- CLI ------------------------------------------------------------------------


def test_cli_success(capsys):
    code = main(["--builtin", "virasoro", "bracket", "L", "L"])
    captured = capsys.readouterr()
    assert code == 0
    assert captured.out.strip() == "d(L) + 2*lambda*L + 1/12*lambda^3*C"
    assert captured.err == ""


def test_cli_negative_product_index(capsys):
    code = main(["--builtin", "free_fermion", "nproduct", "psi1", "-2", "psi2"])
    captured = capsys.readouterr()
    assert code == 0
    assert captured.out.strip() == ":d(psi1) psi2:"


def test_cli_algebra_file(tmp_path, capsys):
    path = tmp_path / "vir.vac"
    path.write_text(VIRASORO_FILE, encoding="utf-8")
    code = main(["--algebra", str(path), "--format", "ope", "ope", "L", "L"])
    captured = capsys.readouterr()
    assert code == 0
    assert "(c/2)/(z-w)^4" in captured.out


def test_cli_check_failure_exit_one(tmp_path, capsys):
    path = tmp_path / "bad.vac"
    path.write_text(
        VIRASORO_FILE.replace("2*lambda*L", "3*lambda*L"), encoding="utf-8"
    )
    code = main(["--algebra", str(path), "check", "skew"])
    captured = capsys.readouterr()
    assert code == 1
    assert "FAIL" in captured.out


def test_cli_usage_errors_to_stderr(capsys):
    assert main([]) == 2
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "usage" in captured.err

    assert main(["--builtin", "nope", "bracket", "L", "L"]) == 2
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "nope" in captured.err

    assert main(["--builtin", "virasoro", "bracket", "M", "L"]) == 2
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "'M'" in captured.err

    assert main(["--algebra", "/nonexistent.vac", "check", "skew"]) == 2
    captured = capsys.readouterr()
    assert captured.out == ""


def test_cli_missing_algebra(capsys):
    assert main(["bracket", "L", "L"]) == 2
    captured = capsys.readouterr()
    assert "required" in captured.err


def test_cli_borcherds_sweep(capsys):
    code = main(["--builtin", "free_fermion", "--range", "1", "check", "borcherds"])
    captured = capsys.readouterr()
    assert code == 0
    assert "ok" in captured.out
