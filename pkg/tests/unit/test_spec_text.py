"""Unit tests for the monoid description grammar."""

from fractions import Fraction

import pytest

from app.kernel import SpecError
from app.spec_text import parse_spec_text, parse_value, render_value, tokenize


class TestParseSpecText:
    """Test stanza and inline forms."""

    def test_stanza(self):
        family, params = parse_spec_text("""
            family = shifted_numerical {   # every n >= 4 plus 2
                threshold = 4,
                extras = {0, 2},
            }
        """)
        assert family == 'shifted_numerical'
        assert params == {'threshold': 4, 'extras': {0, 2}}

    def test_inline(self):
        family, params = parse_spec_text("affine rank=2 gens=[(1,0),(1,2)]")
        assert family == 'affine'
        assert params == {'rank': 2, 'gens': [(1, 0), (1, 2)]}

    def test_family_only(self):
        assert parse_spec_text("nonneg_rationals") == ('nonneg_rationals', {})

    @pytest.mark.parametrize("text", [
        "family = ladder { p = 1",
        "family = ladder p = 1",
        "ladder p 1",
        "ladder p=(1,2",
        "ladder p=1 }",
        "42 p=1",
    ])
    def test_malformed(self, text):
        """Broken descriptions raise SpecError."""
        with pytest.raises(SpecError):
            parse_spec_text(text)

    def test_comments_only(self):
        with pytest.raises(SpecError) as exc:
            parse_spec_text("# nothing here\n")
        assert exc.value.field == 'family'


class TestValues:
    """Test literal values."""

    @pytest.mark.parametrize("text,value", [
        ("3", 3),
        ("-2", -2),
        ("1/2", Fraction(1, 2)),
        ("(1,0,2)", (1, 0, 2)),
        ("[1,1]", [1, 1]),
        ("{0,3}", {0, 3}),
        ("()", ()),
    ])
    def test_parse_value(self, text, value):
        assert parse_value(text) == value

    def test_trailing_input(self):
        with pytest.raises(ValueError):
            parse_value("(1,2) 3")

    def test_render_value(self):
        assert render_value([(1, 1, 0), (1, 0, 1)]) == "[(1,1,0),(1,0,1)]"
        assert render_value(frozenset({2, 0})) == "{0,2}"
        assert render_value(Fraction(3, 4)) == "3/4"

    def test_render_unknown_type(self):
        with pytest.raises(TypeError):
            render_value("text")

    def test_tokenize(self):
        assert tokenize("p=1/2") == [('name', 'p'), ('sym', '='), ('num', '1/2')]
