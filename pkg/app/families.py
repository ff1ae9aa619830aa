"""Concrete monoid families and their construction from textual descriptions."""

import logging
import math
import re
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any

from app.finite_field import GaloisField, Poly
from app.kernel import (
    Element,
    LevelCapExceeded,
    Monoid,
    MonoidError,
    Norm,
    SpecError,
    Verdict,
    box,
    vectors_up_to,
)
from app.spec_text import parse_spec_text, parse_value, render_value

logger = logging.getLogger(__name__)

FAMILY_ALIASES = {'submonoid_nn': 'affine', 'bpq': 'ladder'}


@dataclass(frozen=True)
class MonoidSpec:
    """A validated monoid description.

    ``key`` is the canonical one-line rendering; two specs describing the
    same monoid with the same parameters share it.
    """

    family: str
    params: tuple[tuple[str, Any], ...]
    key: str

    def param(self, name: str, default: Any = None) -> Any:
        for k, v in self.params:
            if k == name:
                return v
        return default

    def __str__(self) -> str:
        return self.key


# Validation


def _int_param(raw: dict[str, Any], name: str, default: int | None = None, minimum: int = 0) -> int:
    value = raw.pop(name, default)
    if value is None:
        raise SpecError(name, 'required')
    if isinstance(value, bool) or not isinstance(value, int):
        raise SpecError(name, f"expected an integer, got {render_value(value)}")
    if value < minimum:
        raise SpecError(name, f"must be at least {minimum}")
    return value


def _int_tuple(value: Any, field: str) -> tuple[int, ...]:
    if isinstance(value, int) and not isinstance(value, bool):
        return (value,)
    if not isinstance(value, (tuple, list)) or not all(isinstance(v, int) for v in value):
        raise SpecError(field, f"expected an integer vector, got {value!r}")
    return tuple(value)


def _validate_free(raw: dict[str, Any]) -> dict[str, Any]:
    return {'rank': _int_param(raw, 'rank', 1)}


def _validate_shifted(raw: dict[str, Any]) -> dict[str, Any]:
    threshold = _int_param(raw, 'threshold')
    extras_raw = raw.pop('extras', {0})
    if isinstance(extras_raw, int):
        extras_raw = {extras_raw}
    if not isinstance(extras_raw, (set, list, tuple)):
        raise SpecError('extras', 'expected a set of naturals')
    if any(not isinstance(e, int) or e < 0 for e in extras_raw):
        raise SpecError('extras', 'extras must be natural numbers')
    extras = frozenset({0} | {e for e in extras_raw if e < threshold})
    for x in extras:
        for y in extras:
            if x and y and x <= y:
                s = x + y
                if s < threshold and s not in extras:
                    raise SpecError('extras', f"{x}+{y}={s} is not in the carrier")
    return {'threshold': threshold, 'extras': extras}


def _validate_affine(raw: dict[str, Any]) -> dict[str, Any]:
    rank = _int_param(raw, 'rank', minimum=1)
    gens_raw = raw.pop('gens', None)
    if gens_raw is None:
        raise SpecError('gens', 'required')
    if isinstance(gens_raw, tuple) and all(isinstance(v, int) for v in gens_raw):
        gens_raw = [gens_raw]
    gens: list[tuple[int, ...]] = []
    for g in gens_raw:
        vector = _int_tuple(g, 'gens')
        if len(vector) != rank:
            raise SpecError('gens', f"generator {render_value(vector)} does not have rank {rank}")
        if any(v < 0 for v in vector):
            raise SpecError('gens', f"generator {render_value(vector)} has a negative coordinate")
        if not any(vector):
            raise SpecError('gens', 'zero generator')
        if vector not in gens:
            gens.append(vector)
    return {'rank': rank, 'gens': gens}


def _validate_ladder(raw: dict[str, Any]) -> dict[str, Any]:
    return {
        'p': _int_param(raw, 'p', minimum=1),
        'q': _int_param(raw, 'q', minimum=1),
        'level_cap': _int_param(raw, 'level_cap', 8, minimum=2),
        'divisor_depth': _int_param(raw, 'divisor_depth', 2),
    }


def _validate_poly(raw: dict[str, Any]) -> dict[str, Any]:
    p = _int_param(raw, 'p', minimum=2)
    k = _int_param(raw, 'k', 1, minimum=1)
    modulus = raw.pop('modulus', None)
    if modulus is not None:
        modulus = list(_int_tuple(modulus, 'modulus'))
    l = _int_param(raw, 'l', 1, minimum=1)
    max_degree = _int_param(raw, 'max_degree', 4)
    field = GaloisField(p, k, modulus)
    field.subfield(l)
    return {'p': p, 'k': k, 'modulus': list(field.modulus), 'l': l, 'max_degree': max_degree}


def _validate_rationals(raw: dict[str, Any]) -> dict[str, Any]:
    return {'rank': _int_param(raw, 'rank', 1, minimum=1)}


_VALIDATORS: dict[str, Callable[[dict[str, Any]], dict[str, Any]]] = {
    'free_commutative': _validate_free,
    'shifted_numerical': _validate_shifted,
    'affine': _validate_affine,
    'ladder': _validate_ladder,
    'poly_subring': _validate_poly,
    'nonneg_rationals': _validate_rationals,
}

_DEFAULTS_HIDDEN = {('ladder', 'divisor_depth'): 2, ('nonneg_rationals', 'rank'): 1}


def spec_for(family: str, **params: Any) -> MonoidSpec:
    """Validate a family name and parameter mapping into a MonoidSpec."""
    family = FAMILY_ALIASES.get(family, family)
    validator = _VALIDATORS.get(family)
    if validator is None:
        raise SpecError('family', f"unknown family {family!r}")
    raw = dict(params)
    checked = validator(raw)
    if raw:
        raise SpecError(sorted(raw)[0], 'unknown parameter')
    parts = [family]
    for name, value in checked.items():
        if _DEFAULTS_HIDDEN.get((family, name), object()) == value:
            continue
        parts.append(f"{name}={render_value(value)}")
    frozen = tuple((name, tuple(v) if isinstance(v, list) else v) for name, v in checked.items())
    return MonoidSpec(family, frozen, ' '.join(parts))


def build(spec_text: str, defaults: dict[str, dict[str, Any]] | None = None) -> MonoidSpec:
    """Parse and validate a monoid description (stanza or inline form).

    ``defaults`` maps a family name to parameters used when the text omits them.
    """
    family, params = parse_spec_text(spec_text)
    family = FAMILY_ALIASES.get(family, family)
    if defaults and family in defaults:
        params = {**defaults[family], **params}
    spec = spec_for(family, **params)
    logger.debug(f"Built spec {spec.key}")
    return spec


@lru_cache(maxsize=128)
def realize(spec: MonoidSpec) -> Monoid:
    """Instantiate the monoid a spec describes; instances are shared per spec."""
    factory = {
        'free_commutative': FreeCommutative,
        'shifted_numerical': ShiftedNumerical,
        'affine': AffineMonoid,
        'ladder': LadderMonoid,
        'poly_subring': PolySubring,
        'nonneg_rationals': NonnegRationals,
    }[spec.family]
    return factory(spec)


def monoid_from_text(spec_text: str) -> Monoid:
    return realize(build(spec_text))


def _parse_vector(text: str, rank: int) -> tuple[int, ...]:
    value = parse_value(text)
    vector = (value,) if isinstance(value, int) else tuple(value)
    if len(vector) != rank or not all(isinstance(v, int) for v in vector):
        raise ValueError(f"expected an integer vector of length {rank}")
    return vector


def _render_vector(v: tuple[int, ...]) -> str:
    return '(' + ','.join(str(x) for x in v) + ')'


class FamilyMonoid(Monoid):
    """Monoid built from a MonoidSpec."""

    def __init__(self, spec: MonoidSpec):
        super().__init__(spec.key)
        self.spec = spec


class FreeCommutative(FamilyMonoid):
    """N^n under addition."""

    family = 'free_commutative'

    def __init__(self, spec: MonoidSpec):
        super().__init__(spec)
        self.rank: int = spec.param('rank')

    def _identity(self):
        return (0,) * self.rank

    def _compose(self, p, q):
        return tuple(x + y for x, y in zip(p, q))

    def _quotient(self, b, a):
        diff = tuple(x - y for x, y in zip(b, a))
        return diff if all(d >= 0 for d in diff) else None

    def _norm(self, p):
        return sum(p)

    def _contains(self, p):
        return (isinstance(p, tuple) and len(p) == self.rank
                and all(isinstance(x, int) and x >= 0 for x in p))

    def _parse(self, text):
        return _parse_vector(text, self.rank)

    def _render(self, p):
        return _render_vector(p)

    def _enumerate(self, bound):
        return vectors_up_to(self.rank, bound)

    def _divisor_candidates(self, p):
        return box(p)

    def basis(self) -> list[Element]:
        return [Element(self.key, tuple(int(i == j) for j in range(self.rank)))
                for i in range(self.rank)]

    def exponent_view(self, a):
        return a.payload, lambda v: Element(self.key, tuple(v))


class ShiftedNumerical(FamilyMonoid):
    """{0} ∪ extras ∪ [threshold, ∞) under addition."""

    family = 'shifted_numerical'

    def __init__(self, spec: MonoidSpec):
        super().__init__(spec)
        self.threshold: int = spec.param('threshold')
        self.extras: frozenset[int] = spec.param('extras')

    def in_carrier(self, n: int) -> bool:
        return n == 0 or n >= self.threshold or n in self.extras

    @property
    def min_nonzero(self) -> int:
        small = [e for e in self.extras if e]
        return min(small) if small else max(self.threshold, 1)

    def _identity(self):
        return 0

    def _compose(self, p, q):
        return p + q

    def _quotient(self, b, a):
        d = b - a
        return d if d >= 0 and self.in_carrier(d) else None

    def _norm(self, p):
        return p

    def _contains(self, p):
        return isinstance(p, int) and not isinstance(p, bool) and p >= 0 and self.in_carrier(p)

    def _parse(self, text):
        return int(text)

    def _render(self, p):
        return str(p)

    def _enumerate(self, bound):
        return [n for n in range(bound + 1) if self.in_carrier(n)]

    def _divisor_candidates(self, p):
        return [n for n in range(p + 1) if self.in_carrier(n)]


class AffineMonoid(FamilyMonoid):
    """Submonoid of N^n generated by finitely many nonzero vectors."""

    family = 'affine'

    def __init__(self, spec: MonoidSpec):
        super().__init__(spec)
        self.rank: int = spec.param('rank')
        self.gens: tuple[tuple[int, ...], ...] = tuple(spec.param('gens'))
        self._representations: dict[tuple[int, ...], tuple[int, ...] | None] = {}

    def representation(self, v: tuple[int, ...]) -> tuple[int, ...] | None:
        """Generator multiplicities summing to v, first found in generator order."""
        if v in self._representations:
            return self._representations[v]
        result: tuple[int, ...] | None = None
        if not any(v):
            result = (0,) * len(self.gens)
        else:
            for i, g in enumerate(self.gens):
                rest = tuple(x - y for x, y in zip(v, g))
                if any(x < 0 for x in rest):
                    continue
                sub = self.representation(rest)
                if sub is not None:
                    result = sub[:i] + (sub[i] + 1,) + sub[i + 1:]
                    break
        self._representations[v] = result
        return result

    def membership(self, v: tuple[int, ...]) -> Verdict:
        multiplicities = self.representation(v)
        if multiplicities is None:
            return Verdict.refuted(v)
        return Verdict.proven(multiplicities)

    def render_representation(self, multiplicities: tuple[int, ...]) -> str:
        terms = [f"{k}·{_render_vector(g)}" for k, g in zip(multiplicities, self.gens) if k]
        return '+'.join(terms) or '0'

    def _identity(self):
        return (0,) * self.rank

    def _compose(self, p, q):
        return tuple(x + y for x, y in zip(p, q))

    def _quotient(self, b, a):
        diff = tuple(x - y for x, y in zip(b, a))
        if any(d < 0 for d in diff) or self.representation(diff) is None:
            return None
        return diff

    def _norm(self, p):
        return sum(p)

    def _contains(self, p):
        return (isinstance(p, tuple) and len(p) == self.rank
                and all(isinstance(x, int) and x >= 0 for x in p)
                and self.representation(p) is not None)

    def _parse(self, text):
        return _parse_vector(text, self.rank)

    def _render(self, p):
        return _render_vector(p)

    def _enumerate(self, bound):
        return [v for v in vectors_up_to(self.rank, bound) if self.representation(v) is not None]

    def _divisor_candidates(self, p):
        return [v for v in box(p) if self.representation(v) is not None]


@dataclass(frozen=True, order=True)
class LeveledVector:
    """x_1^xs[0] ... x_cap^xs[cap-1] · y_level^e, kept in canonical form."""

    level: int
    xs: tuple[int, ...]
    e: int

    def max_index(self) -> int:
        for j in range(len(self.xs), 0, -1):
            if self.xs[j - 1]:
                return j
        return 0


_LADDER_TERM = re.compile(r"^([xy])_(\d+)(?:\^(\d+))?$")


class LadderMonoid(FamilyMonoid):
    """The monoid on x_1, x_2, ..., y_1, y_2, ... with y_i = x_{i+1}^p y_{i+1}^q.

    Every element is a product of x-generators times a power of a single
    y_level; the canonical representative uses the lowest level reachable
    by undoing rewrites. Operations beyond ``level_cap`` raise
    LevelCapExceeded.
    """

    family = 'ladder'
    finite_divisors = False

    def __init__(self, spec: MonoidSpec):
        super().__init__(spec)
        self.p: int = spec.param('p')
        self.q: int = spec.param('q')
        self.level_cap: int = spec.param('level_cap')
        self.divisor_depth: int = spec.param('divisor_depth')
        weights = [0] * (self.level_cap + 2)
        weights[self.level_cap] = 1
        for level in range(self.level_cap - 1, 0, -1):
            weights[level] = self.p + self.q * weights[level + 1]
        self._weights = weights

    # Rewriting

    def canonical(self, level: int, xs: Iterable[int], e: int) -> LeveledVector:
        xs = list(xs)
        if e == 0:
            return LeveledVector(1, tuple(xs), 0)
        while level > 1 and e % self.q == 0 and xs[level - 1] >= self.p * (e // self.q):
            e //= self.q
            xs[level - 1] -= self.p * e
            level -= 1
        return LeveledVector(level, tuple(xs), e)

    def normalize_to_level(self, v: LeveledVector, level: int) -> LeveledVector:
        """Rewrite v so its y-part sits at ``level`` (same element, not canonical)."""
        if level < v.level:
            raise MonoidError(f"cannot lower level {v.level} to {level}")
        if level > self.level_cap:
            raise LevelCapExceeded(f"level {level} exceeds cap {self.level_cap}")
        xs = list(v.xs)
        e = v.e
        for current in range(v.level, level):
            xs[current] += self.p * e
            e *= self.q
        return LeveledVector(level, tuple(xs), e)

    def common_level(self, *vs: LeveledVector) -> int:
        return max(max(v.level, v.max_index()) for v in vs)

    # Payload hooks

    def _identity(self):
        return LeveledVector(1, (0,) * self.level_cap, 0)

    def _compose(self, p, q):
        level = max(p.level, q.level)
        a, b = self.normalize_to_level(p, level), self.normalize_to_level(q, level)
        return self.canonical(level, (x + y for x, y in zip(a.xs, b.xs)), a.e + b.e)

    def _quotient(self, b, a):
        level = self.common_level(a, b)
        na, nb = self.normalize_to_level(a, level), self.normalize_to_level(b, level)
        xs = [y - x for x, y in zip(na.xs, nb.xs)]
        e = nb.e - na.e
        if e < 0 or any(x < 0 for x in xs):
            return None
        return self.canonical(level, xs, e)

    def _norm(self, p):
        return sum(p.xs) + p.e * self._weights[p.level]

    def _contains(self, p):
        return (isinstance(p, LeveledVector) and len(p.xs) == self.level_cap
                and 1 <= p.level <= self.level_cap and p.e >= 0
                and all(x >= 0 for x in p.xs)
                and self.canonical(p.level, p.xs, p.e) == p)

    def _parse(self, text):
        if text in ('1', 'e', ''):
            return self._identity()
        xs = [0] * self.level_cap
        ys: dict[int, int] = {}
        for term in text.replace(' ', '').split('*'):
            match = _LADDER_TERM.match(term)
            if match is None:
                raise ValueError(f"bad term {term!r}")
            kind, index, exponent = match.group(1), int(match.group(2)), int(match.group(3) or 1)
            if not 1 <= index <= self.level_cap:
                raise ValueError(f"index {index} outside 1..{self.level_cap}")
            if kind == 'x':
                xs[index - 1] += exponent
            else:
                ys[index] = ys.get(index, 0) + exponent
        level = max(ys, default=1)
        e = 0
        for index, exponent in ys.items():
            pushed = self.normalize_to_level(LeveledVector(index, (0,) * self.level_cap, exponent), level)
            xs = [x + y for x, y in zip(xs, pushed.xs)]
            e += pushed.e
        return self.canonical(level, xs, e)

    def _render(self, p):
        terms = [f"x_{j}" if k == 1 else f"x_{j}^{k}" for j, k in enumerate(p.xs, 1) if k]
        if p.e:
            terms.append(f"y_{p.level}" if p.e == 1 else f"y_{p.level}^{p.e}")
        return '*'.join(terms) or '1'

    def _enumerate(self, bound):
        for v in vectors_up_to(self.level_cap + 1, bound):
            yield self.canonical(self.level_cap, v[:self.level_cap], v[self.level_cap])

    def _divisor_candidates(self, p):
        top = min(self.level_cap, self.common_level(p) + self.divisor_depth)
        for level in range(max(p.level, 1), top + 1):
            rep = self.normalize_to_level(p, level)
            for xs in box(rep.xs):
                for e in range(rep.e + 1):
                    yield self.canonical(level, xs, e)

    def _sort_key(self, p):
        return (self._norm(p), p.level, p.xs, p.e)

    # Family-specific structure

    def x(self, j: int, k: int = 1) -> Element:
        xs = [0] * self.level_cap
        xs[j - 1] = k
        return self.wrap(LeveledVector(1, tuple(xs), 0))

    def y(self, level: int, k: int = 1) -> Element:
        return self.wrap(self.canonical(level, (0,) * self.level_cap, k))

    def y_chain(self, length: int) -> list[Element]:
        return [self.y(level) for level in range(1, min(length, self.level_cap) + 1)]

    def gcd(self, a, b):
        """Componentwise minimum at the common level, confirmed one level up."""
        self.check(a, b)
        level = self.common_level(a.payload, b.payload)
        candidate = self._min_at(a.payload, b.payload, level)
        if level + 1 > self.level_cap:
            return Verdict.unknown(self._norm(a.payload), note='level cap reached')
        if self._min_at(a.payload, b.payload, level + 1) == candidate:
            return Verdict.proven(Element(self.key, candidate))
        return Verdict.unknown(self._norm(a.payload), note='gcd changes with level')

    def _min_at(self, a: LeveledVector, b: LeveledVector, level: int) -> LeveledVector:
        na, nb = self.normalize_to_level(a, level), self.normalize_to_level(b, level)
        return self.canonical(level, (min(x, y) for x, y in zip(na.xs, nb.xs)), min(na.e, nb.e))

    def rpr(self, a, b):
        self.check(a, b)
        level = self.common_level(a.payload, b.payload)
        candidate = self._min_at(a.payload, b.payload, level)
        if candidate != self._identity():
            return Verdict.refuted(Element(self.key, candidate))
        verdict = self.gcd(a, b)
        if verdict.holds:
            return Verdict.proven()
        return Verdict.unknown(verdict.bound, note=verdict.note)

    def exponent_view(self, a):
        v: LeveledVector = a.payload
        if (self.p, self.q) == (1, 1):
            level = self.common_level(v)
            rep = self.normalize_to_level(v, level)
            vector = rep.xs[:level] + (rep.e,)

            def rebuild(w: tuple[int, ...]) -> Element:
                xs = tuple(w[:level]) + (0,) * (self.level_cap - level)
                return Element(self.key, self.canonical(level, xs, w[level]))

            return vector, rebuild
        if v.e:
            return None
        top = v.max_index()

        def rebuild_free(w: tuple[int, ...]) -> Element:
            xs = tuple(w) + (0,) * (self.level_cap - top)
            return Element(self.key, LeveledVector(1, xs, 0))

        return v.xs[:top], rebuild_free


class PolySubring(FamilyMonoid):
    """Nonzero polynomials f over F = GF(p^k) with f(0) in the subfield L = GF(p^l).

    Multiplicative monoid of the ring L + xF[x]. The norm is the degree.
    """

    family = 'poly_subring'

    def __init__(self, spec: MonoidSpec):
        super().__init__(spec)
        self.field = GaloisField(spec.param('p'), spec.param('k'), spec.param('modulus'))
        self.base = self.field.subfield(spec.param('l'))
        self.max_bound = spec.param('max_degree')
        self.reduced = len(self.base) == 2

    def in_carrier(self, f: Poly) -> bool:
        return bool(f) and f[0] in self.base and (len(f) > 1 or f[0] != 0)

    def _identity(self):
        return (1,)

    def _compose(self, p, q):
        return self.field.poly_mul(p, q)

    def _quotient(self, b, a):
        quotient, remainder = self.field.poly_divmod(b, a)
        if remainder or not quotient or quotient[0] not in self.base:
            return None
        return quotient

    def _norm(self, p):
        return len(p) - 1

    def _contains(self, p):
        return (isinstance(p, tuple) and bool(p) and p[-1] != 0
                and all(isinstance(c, int) and 0 <= c < self.field.order for c in p)
                and self.in_carrier(p))

    def _parse(self, text):
        value = parse_value(text)
        coeffs = [value] if isinstance(value, int) else list(value)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return tuple(coeffs)

    def _render(self, p):
        return '[' + ','.join(str(c) for c in p) + ']'

    def _iter_polys(self, degree: Norm) -> Iterator[Poly]:
        order = self.field.order
        for d in range(degree + 1):
            for c0 in sorted(self.base):
                if d == 0:
                    if c0:
                        yield (c0,)
                    continue
                for middle in vectors_in_range(order, d - 1):
                    for lead in range(1, order):
                        yield (c0,) + middle + (lead,)

    def _enumerate(self, bound):
        if bound > self.max_bound:
            raise MonoidError(f"degree bound {bound} exceeds max_degree {self.max_bound}")
        return self._iter_polys(bound)

    def _divisor_candidates(self, p):
        return self._iter_polys(self._norm(p))

    def _unit_payloads(self):
        return [(c,) for c in sorted(self.base) if c]

    def _sort_key(self, p):
        return (len(p) - 1, p)

    def fx_squarefree(self, f: Poly) -> bool:
        """Square-free as an element of F[x]."""
        return self.field.poly_is_squarefree(f)

    def atom_by_formula(self, f: Poly) -> bool:
        """Atoms of L + xF[x]: ax with a in F^×, or a(1+xg) with a in L^× irreducible in F[x]."""
        if len(f) == 2 and f[0] == 0:
            return True
        if not f or f[0] == 0:
            return False
        return self.field.poly_is_irreducible(f)


def vectors_in_range(order: int, length: int) -> Iterator[tuple[int, ...]]:
    if length == 0:
        yield ()
        return
    for head in range(order):
        for tail in vectors_in_range(order, length - 1):
            yield (head,) + tail


def poly_elements_up_to(m: PolySubring, degree: Norm) -> list[Element]:
    """All elements of L + xF[x] of degree at most ``degree``."""
    return m.enumerate(degree)


class NonnegRationals(FamilyMonoid):
    """{x in Q≥0^n : x_i - x_j integral} under addition; rank 1 is Q≥0.

    Not enumerable and every positive element has infinitely many divisors,
    so predicates rely on analytic rules.
    """

    family = 'nonneg_rationals'
    enumerable = False
    finite_divisors = False

    def __init__(self, spec: MonoidSpec):
        super().__init__(spec)
        self.rank: int = spec.param('rank')

    def _identity(self):
        return (Fraction(0),) * self.rank

    def _compose(self, p, q):
        return tuple(x + y for x, y in zip(p, q))

    def _quotient(self, b, a):
        diff = tuple(x - y for x, y in zip(b, a))
        return diff if self._contains(diff) else None

    def _norm(self, p):
        return math.ceil(sum(p))

    def _contains(self, p):
        if not isinstance(p, tuple) or len(p) != self.rank:
            return False
        if not all(isinstance(x, (int, Fraction)) and x >= 0 for x in p):
            return False
        return all((x - p[0]).denominator == 1 for x in p)

    def _parse(self, text):
        value = parse_value(text)
        values = (value,) if isinstance(value, (int, Fraction)) else tuple(value)
        if len(values) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates")
        return tuple(Fraction(x) for x in values)

    def _render(self, p):
        if self.rank == 1:
            return str(p[0])
        return '(' + ','.join(str(x) for x in p) + ')'

    def element(self, *coords: int | Fraction | str) -> Element:
        return self.wrap(tuple(Fraction(c) for c in coords))

    def scaled_ones(self, t: Fraction) -> Element:
        return Element(self.key, (Fraction(t),) * self.rank)

    def integral(self, a: Element) -> bool:
        return a.payload[0].denominator == 1

    def positive(self, a: Element) -> bool:
        return all(x > 0 for x in a.payload)

    def exponent_view(self, a):
        if self.positive(a):
            return None
        return tuple(int(x) for x in a.payload), lambda v: Element(self.key, tuple(Fraction(x) for x in v))

    def divisors(self, a):
        if not any(a.payload):
            return [a]
        return super().divisors(a)

    def rpr(self, a, b):
        self.check(a, b)
        coords = a.payload + b.payload
        if all(x > 0 for x in coords):
            return Verdict.refuted(self.scaled_ones(min(coords) / 2))
        floor_min = tuple(Fraction(math.floor(min(x, y))) for x, y in zip(a.payload, b.payload))
        if any(floor_min):
            return Verdict.refuted(Element(self.key, floor_min))
        return Verdict.proven()

    def gcd(self, a, b):
        self.check(a, b)
        if self.rank == 1:
            return Verdict.proven(Element(self.key, (min(a.payload[0], b.payload[0]),)))
        return Verdict.unknown(self._norm(a.payload), note='no gcd rule for rank above 1')
