"""Germ-document grammar: parsing, diagnostics, and rendering round-trips."""

from fractions import Fraction

import pytest

from liftfields import ParseError, parse
from liftfields.parser import parse_polynomial


def test_minimal_document():
    doc = parse(
        "germ cusp { n = 1; p = 2; target (X, Y);"
        " branch a(y) = (y^2, y^3); }"
    )
    assert doc.name == "cusp"
    assert (doc.n, doc.p) == (1, 2)
    f = doc.to_multigerm()
    assert f.num_branches == 1
    assert f.branches[0].components[0].render(("y",)) == "y^2"


def test_rational_literals_and_powers():
    g = parse_polynomial("1/2*x^3 - 2/3", ("x",))
    assert g.coeff((3,)) == Fraction(1, 2)
    assert g.coeff((0,)) == Fraction(-2, 3)


def test_comments_and_whitespace():
    doc = parse(
        "# leading comment\n"
        "germ g {  # trailing\n"
        "  n = 1; p = 1; target (X);\n"
        "  branch a(x) = (x); # another\n"
        "}\n"
    )
    assert doc.name == "g"


def test_syntax_error_has_location():
    with pytest.raises(ParseError) as err:
        parse("germ g {\n  n = ; p = 1;\n}")
    assert err.value.line == 2


def test_nonzero_constant_term_rejected():
    with pytest.raises(ParseError) as err:
        parse(
            "germ g { n = 1; p = 2; target (X, Y);"
            " branch a(x) = (x^2 + 1, x); }"
        )
    assert "constant term" in str(err.value)
    assert "'a'" in str(err.value)


def test_component_arity_enforced():
    with pytest.raises(ParseError):
        parse(
            "germ g { n = 1; p = 2; target (X, Y); branch a(x) = (x); }"
        )


def test_source_arity_enforced():
    with pytest.raises(ParseError):
        parse(
            "germ g { n = 2; p = 2; target (X, Y); branch a(x) = (x, x^2); }"
        )


def test_unknown_variable_rejected():
    with pytest.raises(ParseError):
        parse(
            "germ g { n = 1; p = 2; target (X, Y); branch a(x) = (x, z); }"
        )


def test_unfolding_block_parses():
    doc = parse(
        "germ g { n = 1; p = 2; target (Y, U);"
        " branch a(y) = (y^2, 0);"
        " unfolding at 1 { target (X, Y, U);"
        "   branch a(y, t) = (t, y^2, t*y); } }"
    )
    spec = doc.to_unfolding_spec()
    assert spec.param_target_index == 0
    assert spec.F.p == 3


def test_round_trip_all_catalog_entries(catalog_docs):
    for name, doc in catalog_docs.items():
        text = doc.render()
        again = parse(text)
        assert again.render() == text, name
        assert again.name == doc.name
        assert [b.components for b in again.branches] == [
            b.components for b in doc.branches
        ]
        assert again.options == doc.options


def test_trailing_input_rejected():
    with pytest.raises(ParseError):
        parse_polynomial("x + 1 y", ("x", "y"))
