"""Square-free factorizations and extractions, their verification and uniqueness."""

import logging
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from fractions import Fraction

from app.families import LadderMonoid, NonnegRationals
from app.kernel import Element, Monoid, Norm, NotEnumerableError, Verdict
from app.predicates import (
    DEFAULT_MAX_POWER,
    Scheme,
    is_radical,
    is_squarefree,
    profile_claims,
)

logger = logging.getLogger(__name__)

DEFAULT_NODE_BUDGET = 200_000

Extractor = Callable[[Monoid, Element], Verdict | None]


@dataclass(frozen=True)
class Factorization:
    """Parts of a under a scheme; ``exponents`` gives each part's power in the recomposition."""

    scheme: Scheme
    parts: tuple[Element, ...]
    exponents: tuple[int, ...]
    power: int = 0

    @classmethod
    def build(cls, scheme: Scheme, parts: list[Element] | tuple[Element, ...], power: int = 0) -> 'Factorization':
        parts = tuple(parts)
        if scheme in (Scheme.PRODUCT, Scheme.CHAIN):
            exponents = (1,) * len(parts)
        elif scheme == Scheme.GRADED:
            exponents = tuple(range(1, len(parts) + 1))
        elif scheme == Scheme.BINARY:
            exponents = tuple(2 ** i for i in range(len(parts)))
        elif scheme == Scheme.SUPPORT:
            exponents = (1, 1)
        else:
            exponents = (2, 1)
        return cls(scheme, parts, exponents, power)

    def squarefree_parts(self) -> tuple[Element, ...]:
        if self.scheme in (Scheme.SUPPORT, Scheme.SQUARE):
            return self.parts[1:]
        return self.parts

    def render(self, m: Monoid, compressed: bool = False) -> str:
        if self.scheme == Scheme.SUPPORT:
            b, c = self.parts
            return f"b={m.render(b)} c={m.render(c)} n={self.power}"
        if self.scheme == Scheme.SQUARE:
            b, c = self.parts
            return f"b={m.render(b)} c={m.render(c)}"
        offset = 0 if self.scheme == Scheme.BINARY else 1
        terms = []
        for i, (part, e) in enumerate(zip(self.parts, self.exponents)):
            if compressed and part == m.identity:
                continue
            terms.append(f"s_{i + offset}={m.render(part)}" + (f"^{e}" if e != 1 else ''))
        return ' '.join(terms) or m.render(m.identity)


def recompose(m: Monoid, f: Factorization) -> Element:
    return m.product([m.power(part, e) for part, e in zip(f.parts, f.exponents)])


def _indicator(vector: tuple[int, ...], test: Callable[[int], bool]) -> tuple[int, ...]:
    return tuple(int(test(k)) for k in vector)


def closed_form(m: Monoid, a: Element, scheme: Scheme) -> Factorization | None:
    """Factorization read off the exponent vector, where the family offers one."""
    view = m.exponent_view(a)
    if view is None:
        return None
    k, rebuild = view
    top = max(k, default=0)
    if scheme in (Scheme.PRODUCT, Scheme.CHAIN):
        n = max(top, 1)
        parts = [rebuild(_indicator(k, lambda x, i=i: x >= n + 1 - i)) for i in range(1, n + 1)]
        return Factorization.build(scheme, parts)
    if scheme == Scheme.GRADED:
        n = max(top, 1)
        parts = [rebuild(_indicator(k, lambda x, level=level: x == level)) for level in range(1, n + 1)]
        return Factorization.build(scheme, parts)
    if scheme == Scheme.BINARY:
        digits = max(top.bit_length(), 1)
        parts = [rebuild(_indicator(k, lambda x, i=i: (x >> i) & 1 == 1)) for i in range(digits)]
        return Factorization.build(scheme, parts)
    if scheme == Scheme.SUPPORT:
        c = _indicator(k, lambda x: x > 0)
        b = tuple(x - y for x, y in zip(k, c))
        return Factorization.build(scheme, [rebuild(b), rebuild(c)], power=max(top, 1))
    b = tuple(x // 2 for x in k)
    c = tuple(x % 2 for x in k)
    return Factorization.build(scheme, [rebuild(b), rebuild(c)])


# Family extractors for elements without an exponent view

_EXTRACTORS: dict[tuple[str, Scheme], Extractor] = {}


def extractor(family: str, *schemes: Scheme):
    def decorator(fn: Extractor) -> Extractor:
        for scheme in schemes:
            _EXTRACTORS[(family, scheme)] = fn
        return fn
    return decorator


_LAYERED = (Scheme.PRODUCT, Scheme.CHAIN, Scheme.GRADED, Scheme.BINARY, Scheme.SUPPORT)


@extractor('ladder', *_LAYERED)
def _ladder_layered(m: LadderMonoid, a: Element) -> Verdict | None:
    if a.payload.e == 0:
        return None
    return Verdict.refuted(a, note='square-free elements carry no y generator')


@extractor('ladder', Scheme.SQUARE)
def _ladder_square(m: LadderMonoid, a: Element) -> Verdict | None:
    v = a.payload
    level = m.common_level(v)
    rep = m.normalize_to_level(v, level)
    if rep.e % 2:
        if m.q % 2 == 0 and level < m.level_cap:
            level += 1
            rep = m.normalize_to_level(v, level)
        elif m.q % 2:
            return Verdict.refuted(a, note='odd y exponent at every level')
        else:
            return Verdict.unknown(m.level_cap, note='level cap reached')
    b = m.canonical(level, (x // 2 for x in rep.xs), rep.e // 2)
    c = m.canonical(level, (x % 2 for x in rep.xs), 0)
    return Verdict.found(Factorization.build(Scheme.SQUARE, [Element(m.key, b), Element(m.key, c)]))


@extractor('nonneg_rationals', Scheme.SQUARE)
def _rational_square(m: NonnegRationals, a: Element) -> Verdict | None:
    low = min(a.payload)
    base = tuple(int(x - low) for x in a.payload)
    b = tuple(low / 2 + Fraction(x // 2) for x in base)
    c = tuple(Fraction(x % 2) for x in base)
    return Verdict.found(Factorization.build(Scheme.SQUARE, [Element(m.key, b), Element(m.key, c)]))


@extractor('nonneg_rationals', *_LAYERED)
def _rational_layered(m: NonnegRationals, a: Element) -> Verdict | None:
    if not m.integral(a):
        return Verdict.refuted(a, note='square-free elements are integral')
    if m.rank == 1:
        return Verdict.refuted(a, note='only 0 is square-free')
    return None


@extractor('nonneg_rationals', Scheme.PRODUCT)
def _rational_product(m: NonnegRationals, a: Element) -> Verdict | None:
    verdict = _rational_layered(m, a)
    if verdict is not None:
        return verdict
    parts = []
    for i, k in enumerate(a.payload):
        unit = tuple(Fraction(int(i == j)) for j in range(m.rank))
        parts.extend([Element(m.key, unit)] * int(k))
    return Verdict.found(Factorization.build(Scheme.PRODUCT, parts))


# Generic search


class SearchBudgetExceeded(Exception):
    pass


class FactorSearch:
    """Depth-first search over square-free divisors, largest first."""

    def __init__(self, m: Monoid, node_budget: int = DEFAULT_NODE_BUDGET,
                 max_power: int = DEFAULT_MAX_POWER):
        self.m = m
        self.node_budget = node_budget
        self.max_power = max_power
        self.nodes = 0
        self._squarefree: dict[object, list[Element]] = {}
        self._dead: set[tuple] = set()

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise SearchBudgetExceeded(f"node budget {self.node_budget} exhausted")

    def _unit(self, a: Element) -> bool:
        return self.m.is_unit(a).holds is True

    def _desc_key(self, a: Element) -> tuple:
        return (-self.m.norm(a), self.m.sort_key(a))

    def squarefree_divisors(self, a: Element) -> list[Element]:
        """Non-unit square-free divisors of a, largest norm first."""
        cached = self._squarefree.get(a.payload)
        if cached is None:
            cached = [d for d in self.m.divisors(a)
                      if not self._unit(d) and is_squarefree(self.m, d).holds]
            cached.sort(key=self._desc_key)
            self._squarefree[a.payload] = cached
        return cached

    def _divides_power(self, a: Element, c: Element, n: int) -> bool:
        return self.m.quotient(self.m.power(c, n), a) is not None

    def _rpr_all(self, s: Element, chosen: list[Element]) -> bool:
        return all(self.m.rpr(s, t).holds for t in chosen if not self._unit(t))

    def _guard(self, state: tuple, gen: Iterator[list[Element]]) -> Iterator[list[Element]]:
        if state in self._dead:
            return
        found = False
        for solution in gen:
            found = True
            yield solution
        if not found:
            self._dead.add(state)

    # Products and chains

    def _products(self, r: Element, last: tuple | None) -> Iterator[list[Element]]:
        self._tick()
        if self._unit(r):
            yield [] if r == self.m.identity else [r]
            return
        for s in self.squarefree_divisors(r):
            key = self._desc_key(s)
            if last is not None and key < last:
                continue
            rest = self.m.quotient(r, s)
            for tail in self._guard(('product', rest.payload, key), self._products(rest, key)):
                yield [s] + tail

    def _chains(self, r: Element, upper: Element | None) -> Iterator[list[Element]]:
        self._tick()
        if self._unit(r):
            yield [] if r == self.m.identity else [r]
            return
        for t in self.squarefree_divisors(r):
            if upper is not None and self.m.quotient(upper, t) is None:
                continue
            rest = self.m.quotient(r, t)
            for lower in self._guard(('chain', rest.payload, t.payload), self._chains(rest, t)):
                yield lower + [t]

    # Graded and binary layers

    def _graded(self, r: Element, k: int, chosen: list[Element]) -> Iterator[list[Element]]:
        self._tick()
        if k == 1:
            if is_squarefree(self.m, r).holds and self._rpr_all(r, chosen):
                yield [r]
            return
        for s in self.squarefree_divisors(r) + [self.m.identity]:
            rest = self.m.quotient(r, self.m.power(s, k))
            if rest is None or not self._rpr_all(s, chosen):
                continue
            for lower in self._graded(rest, k - 1, chosen + [s]):
                yield lower + [s]

    def _binary(self, r: Element, k: int) -> Iterator[list[Element]]:
        self._tick()
        if k == 0:
            if is_squarefree(self.m, r).holds:
                yield [r]
            return
        for s in self.squarefree_divisors(r) + [self.m.identity]:
            rest = self.m.quotient(r, self.m.power(s, 2 ** k))
            if rest is None:
                continue
            for lower in self._guard(('binary', rest.payload, k - 1), self._binary(rest, k - 1)):
                yield lower + [s]

    def solutions(self, a: Element, scheme: Scheme) -> Iterator[Factorization]:
        m = self.m
        norm = m.norm(a)
        if scheme == Scheme.PRODUCT:
            for parts in self._products(a, None):
                yield Factorization.build(scheme, parts or [m.identity])
        elif scheme == Scheme.CHAIN:
            for parts in self._chains(a, None):
                yield Factorization.build(scheme, parts or [m.identity])
        elif scheme == Scheme.GRADED:
            if self._unit(a):
                yield Factorization.build(scheme, [a])
                return
            for n in range(1, norm + 1):
                for top in self.squarefree_divisors(a):
                    rest = m.quotient(a, m.power(top, n))
                    if rest is None:
                        continue
                    if n == 1:
                        if rest == m.identity:
                            yield Factorization.build(scheme, [top])
                        continue
                    for lower in self._graded(rest, n - 1, [top]):
                        yield Factorization.build(scheme, lower + [top])
        elif scheme == Scheme.BINARY:
            if is_squarefree(m, a).holds:
                yield Factorization.build(scheme, [a])
            n = 1
            while 2 ** n <= max(norm, 1):
                for top in self.squarefree_divisors(a):
                    rest = m.quotient(a, m.power(top, 2 ** n))
                    if rest is None:
                        continue
                    for lower in self._binary(rest, n - 1):
                        yield Factorization.build(scheme, lower + [top])
                n += 1
        elif scheme == Scheme.SUPPORT:
            candidates = self.squarefree_divisors(a) if not self._unit(a) else [m.identity]
            for c in candidates:
                b = m.quotient(a, c)
                # a | c^norm(a) whenever c has the support of a
                for n in range(1, max(self.max_power, norm) + 1):
                    if self._divides_power(a, c, n):
                        yield Factorization.build(scheme, [b, c], power=n)
                        break
        else:
            for b in sorted(m.divisors(a), key=self._desc_key):
                c = m.quotient(a, m.compose(b, b))
                if c is not None and is_squarefree(m, c).holds:
                    yield Factorization.build(scheme, [b, c])


def factor(m: Monoid, a: Element, scheme: Scheme, bound: Norm | None = None,
           method: str = 'auto', node_budget: int = DEFAULT_NODE_BUDGET,
           max_power: int = DEFAULT_MAX_POWER) -> Verdict:
    """FoundWitness(Factorization), Refuted(a) when exhaustive, else NotFoundUpTo/UnknownUpTo.

    ``method`` is 'auto', 'closed' (exponent-vector formulas only) or
    'search' (generic depth-first search only).
    """
    m.check(a)
    scheme = Scheme(scheme)
    bound = m.norm(a) if bound is None else bound
    if method in ('auto', 'closed'):
        f = closed_form(m, a, scheme)
        if f is not None:
            return Verdict.found(f, bound=bound)
        rule = _EXTRACTORS.get((m.family, scheme))
        verdict = rule(m, a) if rule else None
        if verdict is not None:
            return verdict
        if method == 'closed':
            return Verdict.unknown(bound, note='no closed form')
    search = FactorSearch(m, node_budget, max_power)
    try:
        first = next(iter(search.solutions(a, scheme)), None)
    except NotEnumerableError as e:
        return Verdict.unknown(bound, note=str(e))
    except SearchBudgetExceeded as e:
        logger.warning(f"{scheme.value} search for {m.render(a)} in {m.key}: {e}")
        return Verdict.not_found(bound, note=str(e))
    if first is not None:
        return Verdict.found(first, bound=bound)
    if scheme == Scheme.SUPPORT:
        return Verdict.not_found(bound, note=f"no power up to {max(max_power, m.norm(a))}")
    if not m.finite_divisors:
        return Verdict.not_found(bound, note='divisor search truncated')
    return Verdict.refuted(a, bound=bound, note='exhaustive search')


def factor_scheme(m: Monoid, a: Element, scheme: Scheme, **kwargs) -> Verdict:
    scheme = Scheme(scheme)
    if scheme in (Scheme.SUPPORT, Scheme.SQUARE):
        raise ValueError(f"{scheme.value} is an extraction; use extract()")
    return factor(m, a, scheme, **kwargs)


def extract(m: Monoid, a: Element, scheme: Scheme, **kwargs) -> Verdict:
    scheme = Scheme(scheme)
    if scheme not in (Scheme.SUPPORT, Scheme.SQUARE):
        raise ValueError(f"{scheme.value} is a factorization; use factor_scheme()")
    return factor(m, a, scheme, **kwargs)


# Verification


def verify(m: Monoid, a: Element, f: Factorization) -> Verdict:
    """Proven iff recomposition and every side condition of the scheme hold."""
    m.check(a, *f.parts)
    recomposed = recompose(m, f)
    if recomposed != a:
        return Verdict.refuted(recomposed, note='recomposition differs')
    undecided = False
    for part in f.squarefree_parts():
        holds = is_squarefree(m, part).holds
        if holds is False:
            return Verdict.refuted(part, note='part is not square-free')
        undecided = undecided or holds is None
    if f.scheme == Scheme.CHAIN:
        for low, high in zip(f.parts, f.parts[1:]):
            if m.quotient(high, low) is None:
                return Verdict.refuted(low, high, note='chain divisibility fails')
    if f.scheme == Scheme.GRADED:
        parts = [p for p in f.parts if m.is_unit(p).holds is False]
        for i, s in enumerate(parts):
            for t in parts[i + 1:]:
                holds = m.rpr(s, t).holds
                if holds is False:
                    return Verdict.refuted(s, t, note='parts are not relatively prime')
                undecided = undecided or holds is None
    if f.scheme == Scheme.SUPPORT:
        _, c = f.parts
        if f.power < 1 or m.quotient(m.power(c, f.power), a) is None:
            return Verdict.refuted(c, note=f"element does not divide c^{f.power}")
    if undecided:
        return Verdict.unknown(m.norm(a), note='a side condition is undecided')
    return Verdict.proven()


# Uniqueness


def _claimed(m: Monoid, name: str) -> bool:
    facts = profile_claims(m)
    chain = {'decomposition': ('decomposition', 'gcd', 'factorial'), 'gcd': ('gcd', 'factorial')}
    return any(facts.get(k) is not None and facts[k].holds for k in chain.get(name, (name,)))


def uniqueness_hypothesis(m: Monoid, scheme: Scheme) -> str | None:
    """Name of the structural property the scheme's uniqueness needs, or None if none is needed."""
    if scheme in (Scheme.CHAIN, Scheme.SUPPORT):
        return None
    if scheme == Scheme.GRADED:
        return 'decomposition'
    if scheme in (Scheme.BINARY, Scheme.SQUARE):
        return 'gcd'
    raise ValueError(f"uniqueness is not defined for {scheme.value}")


def _normalized(m: Monoid, f: Factorization) -> tuple[Element, ...]:
    parts = list(f.parts)
    if f.scheme == Scheme.CHAIN:
        while len(parts) > 1 and m.is_unit(parts[0]).holds:
            parts.pop(0)
    elif f.scheme in (Scheme.GRADED, Scheme.BINARY):
        while len(parts) > 1 and m.is_unit(parts[-1]).holds:
            parts.pop()
    return tuple(parts)


def _same_up_to_associates(m: Monoid, x: tuple[Element, ...], y: tuple[Element, ...]) -> bool:
    return len(x) == len(y) and all(m.associates(p, q).holds for p, q in zip(x, y))


def uniqueness_check(m: Monoid, a: Element, scheme: Scheme, bound: Norm | None = None,
                     node_budget: int = DEFAULT_NODE_BUDGET, limit: int = 1000) -> Verdict:
    """Proven(f) when every factorization of a under the scheme agrees with f up to associates.

    Chain factorizations must have radical parts and support extractions a
    radical c; other schemes need the family to be a decomposition monoid
    (graded) or a GCD-monoid (binary, square).
    """
    scheme = Scheme(scheme)
    bound = m.norm(a) if bound is None else bound
    hypothesis = uniqueness_hypothesis(m, scheme)
    if hypothesis is not None and not _claimed(m, hypothesis):
        return Verdict.unknown(bound, note=f"{hypothesis} not established for {m.key}")
    search = FactorSearch(m, node_budget)
    seen: list[Factorization] = []
    try:
        for f in search.solutions(a, scheme):
            if scheme == Scheme.CHAIN and not all(is_radical(m, t, bound).holds for t in f.parts):
                continue
            if scheme == Scheme.SUPPORT and not is_radical(m, f.parts[1], bound).holds:
                continue
            seen.append(f)
            if len(seen) >= limit:
                break
    except (SearchBudgetExceeded, NotEnumerableError) as e:
        return Verdict.unknown(bound, note=str(e))
    if not seen:
        return Verdict.not_found(bound, note='no factorization to compare')
    reference = seen[0]
    for other in seen[1:]:
        if scheme == Scheme.SUPPORT:
            same = _same_up_to_associates(m, reference.parts, other.parts)
        else:
            same = _same_up_to_associates(m, _normalized(m, reference), _normalized(m, other))
        if not same:
            return Verdict.refuted(reference, other, bound=bound)
    return Verdict.proven(reference, bound=bound, note=f"{len(seen)} factorizations agree")
