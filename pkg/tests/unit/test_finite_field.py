"""Unit tests for GF(p^k) and polynomial arithmetic."""

import pytest

from app.finite_field import GaloisField, is_prime_number
from app.kernel import SpecError


@pytest.fixture
def gf4():
    return GaloisField(2, 2)


class TestGaloisField:
    """Test field construction and arithmetic."""

    @pytest.mark.parametrize("n,expected", [(2, True), (3, True), (4, False), (1, False), (97, True)])
    def test_is_prime_number(self, n, expected):
        assert is_prime_number(n) is expected

    def test_default_modulus_is_first_irreducible(self, gf4):
        """x^2 + x + 1 is the only irreducible quadratic over GF(2)."""
        assert gf4.modulus == (1, 1, 1)
        assert GaloisField.default_modulus(3, 2) == (1, 0, 1)

    @pytest.mark.parametrize("p,k,modulus,field", [
        (4, 1, None, 'p'),
        (2, 0, None, 'k'),
        (2, 2, [1, 0, 1], 'modulus'),
        (2, 2, [1, 1], 'modulus'),
    ])
    def test_invalid_fields(self, p, k, modulus, field):
        with pytest.raises(SpecError) as exc:
            GaloisField(p, k, modulus)
        assert exc.value.field == field

    def test_generator_squared(self, gf4):
        """a^2 = a + 1 modulo x^2 + x + 1."""
        assert gf4.mul(2, 2) == 3

    def test_every_nonzero_element_invertible(self, gf4):
        for a in range(1, gf4.order):
            assert gf4.mul(a, gf4.inv(a)) == 1

    def test_inverse_of_zero(self, gf4):
        with pytest.raises(ZeroDivisionError):
            gf4.inv(0)

    def test_subfields(self, gf4):
        assert gf4.subfield(1) == frozenset({0, 1})
        assert gf4.subfield(2) == frozenset(range(4))
        with pytest.raises(SpecError):
            gf4.subfield(3)

    def test_render(self, gf4):
        assert gf4.render(3) == 'a+1'
        assert GaloisField(5, 1).render(3) == '3'


class TestPolynomials:
    """Test F[x] arithmetic."""

    def test_divmod_recombines(self, gf4):
        f, g = (1, 2, 3, 1), (2, 1)
        q, r = gf4.poly_divmod(f, g)
        assert gf4.poly_add(gf4.poly_mul(q, g), r) == f

    def test_gcd_is_monic(self, gf4):
        square = gf4.poly_mul((1, 1), (1, 1))
        assert gf4.poly_gcd(square, (2, 2)) == (1, 1)

    @pytest.mark.parametrize("f,expected", [
        ((0, 1), True),
        ((1, 0, 1), False),
        ((1, 1, 1), True),
        ((0, 0, 1), False),
    ])
    def test_squarefree(self, gf4, f, expected):
        assert gf4.poly_is_squarefree(f) is expected

    def test_irreducible_depends_on_field(self, gf4):
        """x^2 + x + 1 is irreducible over GF(2) but splits over GF(4)."""
        assert GaloisField(2, 1).poly_is_irreducible((1, 1, 1)) is True
        assert gf4.poly_is_irreducible((1, 1, 1)) is False
        assert gf4.poly_is_irreducible((3, 1)) is True
