"""Finite fields GF(p^k) and polynomial arithmetic over them.

Field elements are integers 0..p^k-1 whose base-p digits are the
coefficients (lowest first) of a polynomial in the generator ``a`` reduced
modulo the irreducible modulus. Polynomials over the field are tuples of
field elements, lowest degree first, without trailing zeros.
"""

import itertools
import logging
from functools import cached_property

from app.kernel import SpecError

logger = logging.getLogger(__name__)

Poly = tuple[int, ...]


def is_prime_number(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n ** 0.5) + 1))


def _trim(coeffs: list[int] | tuple[int, ...]) -> Poly:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _prime_divmod(num: Poly, den: Poly, p: int) -> tuple[Poly, Poly]:
    """Polynomial division over the prime field GF(p)."""
    rem = list(num)
    out = [0] * max(len(num) - len(den) + 1, 1)
    inv_lead = pow(den[-1], p - 2, p)
    for shift in range(len(num) - len(den), -1, -1):
        coef = rem[shift + len(den) - 1] * inv_lead % p
        out[shift] = coef
        for i, d in enumerate(den):
            rem[shift + i] = (rem[shift + i] - coef * d) % p
    return _trim(out), _trim(rem)


class GaloisField:
    """GF(p^k) built from an explicit monic irreducible modulus."""

    def __init__(self, p: int, k: int, modulus: tuple[int, ...] | list[int] | None = None):
        if not is_prime_number(p):
            raise SpecError('p', f"{p} is not prime")
        if k < 1:
            raise SpecError('k', 'extension degree must be at least 1')
        if modulus is None:
            modulus = (0, 1) if k == 1 else self.default_modulus(p, k)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise SpecError('modulus', f"expected a monic coefficient list of degree {k}")
        if k > 1 and not self._irreducible_over_prime_field(modulus, p):
            raise SpecError('modulus', f"{list(modulus)} is reducible over GF({p})")
        self.p = p
        self.k = k
        self.modulus = modulus
        self.order = p ** k

    @classmethod
    def default_modulus(cls, p: int, k: int) -> Poly:
        """First monic irreducible polynomial of degree k over GF(p), tails in lexicographic order."""
        for tail in itertools.product(range(p), repeat=k):
            modulus = tuple(tail) + (1,)
            if tail[0] and cls._irreducible_over_prime_field(modulus, p):
                return modulus
        raise SpecError('k', f"no irreducible polynomial of degree {k} over GF({p})")

    @staticmethod
    def _irreducible_over_prime_field(modulus: Poly, p: int) -> bool:
        degree = len(modulus) - 1
        for d in range(1, degree // 2 + 1):
            for tail in itertools.product(range(p), repeat=d):
                divisor = tuple(tail) + (1,)
                _, rem = _prime_divmod(modulus, divisor, p)
                if not rem:
                    return False
        return True

    def _digits(self, a: int) -> list[int]:
        digits = []
        for _ in range(self.k):
            digits.append(a % self.p)
            a //= self.p
        return digits

    def _from_digits(self, digits: list[int]) -> int:
        value = 0
        for d in reversed(digits):
            value = value * self.p + d
        return value

    def elements(self) -> range:
        return range(self.order)

    def add(self, a: int, b: int) -> int:
        da, db = self._digits(a), self._digits(b)
        return self._from_digits([(x + y) % self.p for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        return self._from_digits([(-x) % self.p for x in self._digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    @cached_property
    def _mul_table(self) -> list[list[int]]:
        table = [[0] * self.order for _ in range(self.order)]
        for a in range(self.order):
            for b in range(a, self.order):
                product = [0] * (2 * self.k - 1)
                for i, x in enumerate(self._digits(a)):
                    for j, y in enumerate(self._digits(b)):
                        product[i + j] = (product[i + j] + x * y) % self.p
                _, rem = _prime_divmod(_trim(product), self.modulus, self.p)
                value = self._from_digits(list(rem) + [0] * (self.k - len(rem)))
                table[a][b] = table[b][a] = value
        return table

    def mul(self, a: int, b: int) -> int:
        return self._mul_table[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError('inverse of zero')
        for b in range(1, self.order):
            if self._mul_table[a][b] == 1:
                return b
        raise ArithmeticError(f"{a} has no inverse; modulus is not irreducible")

    def power(self, a: int, n: int) -> int:
        result = 1
        for _ in range(n):
            result = self.mul(result, a)
        return result

    def subfield(self, l: int) -> frozenset[int]:
        """Elements of the unique subfield GF(p^l)."""
        if l < 1 or self.k % l:
            raise SpecError('l', f"GF({self.p}^{l}) is not a subfield of GF({self.p}^{self.k})")
        size = self.p ** l
        return frozenset(a for a in self.elements() if self.power(a, size) == a)

    def generator(self) -> int:
        """Smallest element generating the multiplicative group."""
        for g in range(2 if self.order > 2 else 1, self.order):
            seen = {1}
            x = g
            while x != 1:
                seen.add(x)
                x = self.mul(x, g)
            if len(seen) == self.order - 1:
                return g
        return 1

    # Polynomials over the field

    def poly_add(self, f: Poly, g: Poly) -> Poly:
        n = max(len(f), len(g))
        f2 = list(f) + [0] * (n - len(f))
        g2 = list(g) + [0] * (n - len(g))
        return _trim([self.add(x, y) for x, y in zip(f2, g2)])

    def poly_mul(self, f: Poly, g: Poly) -> Poly:
        if not f or not g:
            return ()
        out = [0] * (len(f) + len(g) - 1)
        for i, x in enumerate(f):
            if x == 0:
                continue
            for j, y in enumerate(g):
                out[i + j] = self.add(out[i + j], self.mul(x, y))
        return _trim(out)

    def poly_scale(self, f: Poly, c: int) -> Poly:
        return _trim([self.mul(x, c) for x in f])

    def poly_divmod(self, f: Poly, g: Poly) -> tuple[Poly, Poly]:
        if not g:
            raise ZeroDivisionError('polynomial division by zero')
        rem = list(f)
        if len(f) < len(g):
            return (), _trim(rem)
        out = [0] * (len(f) - len(g) + 1)
        inv_lead = self.inv(g[-1])
        for shift in range(len(f) - len(g), -1, -1):
            coef = self.mul(rem[shift + len(g) - 1], inv_lead)
            out[shift] = coef
            if coef:
                for i, c in enumerate(g):
                    rem[shift + i] = self.sub(rem[shift + i], self.mul(coef, c))
        return _trim(out), _trim(rem)

    def poly_derivative(self, f: Poly) -> Poly:
        out = []
        for i in range(1, len(f)):
            term = 0
            for _ in range(i % self.p):
                term = self.add(term, f[i])
            out.append(term)
        return _trim(out)

    def poly_monic(self, f: Poly) -> Poly:
        return self.poly_scale(f, self.inv(f[-1])) if f else f

    def poly_gcd(self, f: Poly, g: Poly) -> Poly:
        while g:
            _, r = self.poly_divmod(f, g)
            f, g = g, r
        return self.poly_monic(f)

    def poly_is_squarefree(self, f: Poly) -> bool:
        """Square-free in F[x]: not g^2·h with g non-constant."""
        if not f:
            raise ValueError('zero polynomial')
        if len(f) <= 1:
            return True
        derivative = self.poly_derivative(f)
        if not derivative:
            return False
        return len(self.poly_gcd(f, derivative)) == 1

    def poly_is_irreducible(self, f: Poly) -> bool:
        """Irreducibility in F[x] by trial division with monic polynomials."""
        degree = len(f) - 1
        if degree < 1:
            return False
        for d in range(1, degree // 2 + 1):
            for tail in itertools.product(self.elements(), repeat=d):
                _, rem = self.poly_divmod(f, tuple(tail) + (1,))
                if not rem:
                    return False
        return True

    def render(self, a: int) -> str:
        if self.k == 1:
            return str(a)
        terms = []
        for i, d in reversed(list(enumerate(self._digits(a)))):
            if d == 0:
                continue
            base = '1' if i == 0 else ('a' if i == 1 else f"a^{i}")
            if d == 1:
                terms.append(base)
            else:
                terms.append(f"{d}" if i == 0 else f"{d}{base}")
        return '+'.join(terms) or '0'

    def __repr__(self) -> str:
        return f"GaloisField({self.p}, {self.k}, {list(self.modulus)})"
