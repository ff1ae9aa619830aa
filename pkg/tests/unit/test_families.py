"""Unit tests for monoid families and spec construction."""

from fractions import Fraction

import pytest

from app.families import build, monoid_from_text, poly_elements_up_to, realize, spec_for
from app.kernel import LevelCapExceeded, MonoidError, SpecError


class TestBuild:
    """Test spec parsing, validation and canonical keys."""

    def test_stanza_and_inline_forms_agree(self):
        stanza = """
        # comment
        family = affine {
            rank = 3,
            gens = [(1,1,0), (1,0,1)],
        }
        """
        inline = "affine rank=3 gens=[(1,1,0),(1,0,1)]"
        assert build(stanza).key == build(inline).key == inline

    @pytest.mark.parametrize("text,family", [
        ("submonoid_nn rank=2 gens=[(1,0)]", 'affine'),
        ("bpq p=1 q=2", 'ladder'),
    ])
    def test_aliases(self, text, family):
        """Alternative family names map to the canonical ones."""
        assert build(text).family == family

    def test_hidden_defaults_left_out_of_key(self):
        assert build("bpq p=1 q=2").key == "ladder p=1 q=2 level_cap=8"
        assert build("nonneg_rationals").key == "nonneg_rationals"

    def test_defaults_fill_missing_parameters(self):
        """Configured family defaults apply only where the text is silent."""
        defaults = {'ladder': {'level_cap': 5}}
        assert build("ladder p=1 q=1", defaults).param('level_cap') == 5
        assert build("ladder p=1 q=1 level_cap=6", defaults).param('level_cap') == 6

    def test_spec_for_matches_build(self):
        assert spec_for('shifted_numerical', threshold=4, extras={0, 2}) == build(
            "shifted_numerical threshold=4 extras={0,2}")

    @pytest.mark.parametrize("text,field", [
        ("", 'family'),
        ("nosuch rank=1", 'family'),
        ("free_commutative rank=1 colour=2", 'colour'),
        ("shifted_numerical threshold=10 extras={3,4}", 'extras'),
        ("affine rank=2 gens=[(1,0,0)]", 'gens'),
        ("affine rank=2 gens=[(0,0)]", 'gens'),
        ("ladder p=0 q=1", 'p'),
        ("ladder p=1 p=2 q=1", 'p'),
        ("free_commutative rank=(1,2)", 'rank'),
        ("affine rank=2 gens=[(1,0)] )", 'syntax'),
    ])
    def test_invalid_specs(self, text, field):
        """Malformed descriptions raise SpecError naming the offending field."""
        with pytest.raises(SpecError) as exc:
            build(text)
        assert exc.value.field == field


class TestShiftedNumerical:
    """Test {0} ∪ extras ∪ [threshold, ∞)."""

    def test_carrier(self):
        m = monoid_from_text("shifted_numerical threshold=4 extras={0,2}")
        assert [m.render(a) for a in m.enumerate(6)] == ["0", "2", "4", "5", "6"]
        assert m.min_nonzero == 2

    def test_min_nonzero_without_extras(self):
        assert monoid_from_text("shifted_numerical threshold=3").min_nonzero == 3
        assert monoid_from_text("shifted_numerical threshold=0").min_nonzero == 1

    def test_quotient_must_land_in_carrier(self, nge2):
        assert nge2.quotient(nge2.parse("3"), nge2.parse("2")) is None
        assert nge2.render(nge2.quotient(nge2.parse("5"), nge2.parse("2"))) == "3"


class TestAffine:
    """Test finitely generated submonoids of N^n."""

    def test_membership_with_representation(self):
        m = monoid_from_text("affine rank=3 gens=[(1,1,0),(1,0,1)]")
        verdict = m.membership((2, 1, 1))
        assert verdict.holds is True
        assert m.render_representation(verdict.witness[0]) == "1·(1,1,0)+1·(1,0,1)"
        assert m.membership((1, 0, 0)).holds is False

    def test_quotient_stays_in_monoid(self):
        m = monoid_from_text("affine rank=1 gens=[(2),(3)]")
        assert m.quotient(m.parse("(5)"), m.parse("(2)")) == m.parse("(3)")
        assert m.quotient(m.parse("(3)"), m.parse("(2)")) is None


class TestLadder:
    """Test the ladder family y_i = x_{i+1}^p y_{i+1}^q."""

    def test_rewrite_to_lowest_level(self, ladder12):
        """x_2 y_2^2 is y_1 when q = 2."""
        assert ladder12.parse("x_2*y_2^2") == ladder12.parse("y_1")
        assert ladder12.compose(ladder12.x(2), ladder12.y(2, 2)) == ladder12.y(1)
        assert ladder12.render(ladder12.y(1)) == "y_1"

    def test_next_y_divides(self, ladder12):
        verdict = ladder12.divides(ladder12.y(2), ladder12.y(1))
        assert verdict.holds is True
        assert ladder12.render(verdict.witness[0]) == "x_2*y_2"

    def test_x_does_not_divide_y_of_same_level(self, ladder12):
        assert ladder12.divides(ladder12.x(1), ladder12.y(1)).holds is False

    def test_level_cap(self, ladder11):
        """Rewriting past the cap raises LevelCapExceeded."""
        with pytest.raises(LevelCapExceeded):
            ladder11.normalize_to_level(ladder11.y(1).payload, 9)

    def test_index_outside_cap_rejected(self, ladder11):
        with pytest.raises(SpecError):
            ladder11.parse("x_9")

    def test_gcd_of_distinct_generators(self, ladder11):
        verdict = ladder11.gcd(ladder11.x(1), ladder11.x(2))
        assert verdict.holds is True
        assert verdict.witness[0] == ladder11.identity
        assert ladder11.rpr(ladder11.x(1), ladder11.x(2)).holds is True

    def test_y_chain(self, ladder11):
        chain = ladder11.y_chain(3)
        assert [ladder11.render(y) for y in chain] == ["y_1", "y_2", "y_3"]

    def test_normalize_to_level_keeps_element(self, ladder12):
        """y_1 written at level 2 is x_2 y_2^2."""
        rep = ladder12.normalize_to_level(ladder12.y(1).payload, 2)
        assert (rep.level, rep.xs[1], rep.e) == (2, 1, 2)
        assert ladder12.canonical(rep.level, rep.xs, rep.e) == ladder12.y(1).payload

    @pytest.mark.parametrize("p,q", [(1, 2), (2, 1), (1, 1)])
    def test_divides_matches_existential_search(self, p, q):
        """a | b exactly when a·c = b for some enumerated c."""
        m = monoid_from_text(f"ladder p={p} q={q} level_cap=3")
        elements = m.enumerate(3)
        for a in elements:
            for b in elements:
                expected = any(m.compose(a, c) == b for c in elements)
                assert (m.divides(a, b).holds is True) == expected, (m.render(a), m.render(b))


class TestPolySubring:
    """Test GF(2) + x GF(4)[x]."""

    @pytest.fixture
    def poly(self):
        return monoid_from_text("poly_subring p=2 k=2 l=1 max_degree=4")

    def test_constant_term_in_base_field(self, poly):
        assert poly.render(poly.parse("[1,1]")) == "[1,1]"
        with pytest.raises(MonoidError):
            poly.parse("[2]")

    def test_multiplication(self, poly):
        x = poly.parse("[0,1]")
        assert poly.render(poly.compose(x, x)) == "[0,0,1]"

    def test_units_and_reduced(self, poly):
        assert poly.units() == [poly.identity]
        assert poly.reduced

    def test_elements_up_to_degree(self, poly):
        """One constant, six linear and 24 quadratic polynomials."""
        elements = poly_elements_up_to(poly, 2)
        assert len(elements) == 31
        assert [poly.norm(a) for a in elements] == sorted(poly.norm(a) for a in elements)
        assert elements[0] == poly.identity

    def test_degree_bound(self, poly):
        with pytest.raises(MonoidError):
            poly.enumerate(5)

    def test_square_free_in_fx(self, poly):
        assert poly.fx_squarefree((0, 1)) is True
        assert poly.fx_squarefree((0, 0, 1)) is False

    def test_atom_formula(self, poly):
        """ax is an atom for every nonzero a, x^2 is not."""
        assert poly.atom_by_formula((0, 2)) is True
        assert poly.atom_by_formula((0, 0, 1)) is False


class TestNonnegRationals:
    """Test {x in Q≥0^n : x_i - x_j integral}."""

    def test_rank_one_arithmetic(self, rationals):
        half = rationals.parse("1/2")
        assert rationals.compose(half, half) == rationals.element(1)
        assert rationals.render(half) == "1/2"
        assert not rationals.enumerable

    def test_rank_two_integral_differences(self):
        m = realize(build("nonneg_rationals rank=2"))
        assert m.parse("(1/2,3/2)").payload == (Fraction(1, 2), Fraction(3, 2))
        with pytest.raises(MonoidError):
            m.parse("(1/2,1)")

    def test_rank_two_rpr(self):
        m = realize(build("nonneg_rationals rank=2"))
        assert m.rpr(m.element(1, 0), m.element(0, 1)).holds is True
        verdict = m.rpr(m.element(1, 1), m.element(1, 0))
        assert verdict.holds is False
        assert m.render(verdict.witness[0]) == "(1,0)"

    def test_rank_one_gcd_is_min(self, rationals):
        verdict = rationals.gcd(rationals.parse("1/3"), rationals.parse("1/2"))
        assert verdict.witness[0] == rationals.parse("1/3")


class TestFreeCommutative:
    def test_rank_zero(self):
        m = monoid_from_text("free_commutative rank=0")
        assert m.render(m.identity) == "()"
        assert [m.render(a) for a in m.enumerate(3)] == ["()"]

    def test_basis(self, free3):
        assert [free3.render(b) for b in free3.basis()] == ["(1,0,0)", "(0,1,0)", "(0,0,1)"]
