"""Element predicates, element sets and analytic knowledge about families.

Every predicate returns a Verdict. Generic procedures search divisors and
bounded pools of elements; families with known structure register analytic
rules with the ``analytic`` decorator, and whole-monoid facts with
``claims``. Analytic verdicts carry their source so reports can tell them
apart from searched ones.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from app.families import LadderMonoid, NonnegRationals, PolySubring
from app.kernel import Element, Monoid, Norm, NotEnumerableError, Verdict

logger = logging.getLogger(__name__)

DEFAULT_MAX_POWER = 8

Rule = Callable[[Monoid, Element, Norm], Verdict | None]


class Scheme(str, Enum):
    """Square-free factorization and extraction patterns.

    PRODUCT   a = s_1 s_2 ... s_n
    CHAIN     a = t_1 t_2 ... t_n with t_1 | t_2 | ... | t_n
    GRADED    a = s_1 s_2^2 s_3^3 ... s_n^n
    BINARY    a = s_0 s_1^2 s_2^4 ... s_n^(2^n)
    SUPPORT   a = b c with a | c^n
    SQUARE    a = b^2 c
    """

    PRODUCT = 'product'
    CHAIN = 'chain'
    GRADED = 'graded'
    BINARY = 'binary'
    SUPPORT = 'support'
    SQUARE = 'square'


PROPERTY_NAMES = ('atomic', 'accp', 'bf', 'gcd', 'decomposition', 'atoms_are_primes', 'factorial')


_RULES: dict[tuple[str, str], list[tuple[str, Rule]]] = {}
_CLAIMS: dict[str, tuple[str, Callable[[Monoid], dict[str, Verdict]]]] = {}


def analytic(family: str, predicate: str, source: str):
    """Register an analytic rule; returning None defers to generic search."""
    def decorator(rule: Rule) -> Rule:
        _RULES.setdefault((family, predicate), []).append((source, rule))
        return rule
    return decorator


def claims(family: str, source: str):
    """Register whole-monoid facts known for a family."""
    def decorator(fn: Callable[[Monoid], dict[str, Verdict]]):
        _CLAIMS[family] = (source, fn)
        return fn
    return decorator


def _apply_rules(m: Monoid, predicate: str, a: Element, bound: Norm) -> Verdict | None:
    for source, rule in _RULES.get((m.family, predicate), []):
        verdict = rule(m, a, bound)
        if verdict is not None:
            logger.debug(f"{predicate}({m.render(a)}) in {m.key} from rule: {verdict.label()}")
            return verdict.with_source(source)
    return None


def profile_claims(m: Monoid) -> dict[str, Verdict]:
    """Analytic monoid-level facts, keyed by property or scheme name."""
    entry = _CLAIMS.get(m.family)
    if entry is None:
        return {}
    source, fn = entry
    return {k: v.with_source(source) for k, v in fn(m).items()}


def effective_bound(m: Monoid, bound: Norm) -> Norm:
    if m.max_bound is not None and bound > m.max_bound:
        logger.debug(f"Bound {bound} clamped to {m.max_bound} for {m.key}")
        return m.max_bound
    return bound


def pool(m: Monoid, bound: Norm) -> list[Element]:
    """Elements quantified over by bounded searches."""
    return m.enumerate(effective_bound(m, bound))


def _non_unit(m: Monoid, a: Element) -> bool:
    return m.is_unit(a).holds is False


# Atoms


def is_atom(m: Monoid, a: Element, bound: Norm | None = None) -> Verdict:
    """Refuted(a/d, d) for the least non-unit proper divisor d, Refuted(a) for units."""
    m.check(a)
    bound = m.norm(a) if bound is None else bound
    if not _non_unit(m, a):
        return Verdict.refuted(a, note='unit')
    verdict = _apply_rules(m, 'atom', a, bound)
    if verdict is not None:
        return verdict
    for d in m.divisors(a):
        if not _non_unit(m, d):
            continue
        c = m.quotient(a, d)
        if c is not None and _non_unit(m, c):
            return Verdict.refuted(c, d)
    if m.finite_divisors:
        return Verdict.proven()
    return Verdict.unknown(bound, note='divisor search truncated')


# Square-free elements


def is_squarefree(m: Monoid, a: Element, bound: Norm | None = None) -> Verdict:
    """Refuted(b, c) with a = b^2 c and b a non-unit."""
    m.check(a)
    bound = m.norm(a) if bound is None else bound
    verdict = _apply_rules(m, 'squarefree', a, bound)
    if verdict is not None:
        return verdict
    for b in m.divisors(a):
        if not _non_unit(m, b):
            continue
        c = m.quotient(a, m.compose(b, b))
        if c is not None:
            return Verdict.refuted(b, c)
    if m.finite_divisors:
        return Verdict.proven()
    return Verdict.unknown(bound, note='divisor search truncated')


# Primes


def is_prime(m: Monoid, a: Element, bound: Norm, candidates: list[Element] | None = None) -> Verdict:
    """Refuted(b, c) with a | bc, a ∤ b, a ∤ c; searched over elements of norm ≤ bound."""
    m.check(a)
    if not _non_unit(m, a):
        return Verdict.refuted(a, note='unit')
    verdict = _apply_rules(m, 'prime', a, bound)
    if verdict is not None:
        return verdict
    atom = is_atom(m, a, bound)
    if atom.holds is False:
        return Verdict.refuted(*atom.witness, note='not an atom')
    elements = pool(m, bound) if candidates is None else candidates
    divisible = [m.quotient(b, a) is not None for b in elements]
    for i, b in enumerate(elements):
        if divisible[i]:
            continue
        for j in range(i, len(elements)):
            if divisible[j]:
                continue
            if m.quotient(m.compose(b, elements[j]), a) is not None:
                return Verdict.refuted(b, elements[j], bound=bound)
    return Verdict.unknown(bound)


# Radical elements


def is_radical(m: Monoid, a: Element, bound: Norm, max_power: int = DEFAULT_MAX_POWER,
               candidates: list[Element] | None = None) -> Verdict:
    """Refuted(b, n) with a | b^n and a ∤ b, for n up to the larger of bound and max_power."""
    m.check(a)
    if not _non_unit(m, a):
        return Verdict.proven(note='unit')
    verdict = _apply_rules(m, 'radical', a, bound)
    if verdict is not None:
        return verdict
    squarefree = is_squarefree(m, a, bound)
    if squarefree.holds is False:
        b, c = squarefree.witness
        return Verdict.refuted(m.compose(b, c), 2, note='not square-free')
    elements = pool(m, bound) if candidates is None else candidates
    for b in elements:
        if m.quotient(b, a) is not None:
            continue
        power = b
        for n in range(2, max(max_power, bound) + 1):
            power = m.compose(power, b)
            if m.quotient(power, a) is not None:
                return Verdict.refuted(b, n, bound=bound)
    return Verdict.unknown(bound)


# Primal elements


def _splits(m: Monoid, a: Element, b: Element, c: Element) -> bool:
    for a1 in m.divisors(a):
        if m.quotient(b, a1) is None:
            continue
        a2 = m.quotient(a, a1)
        if a2 is not None and m.quotient(c, a2) is not None:
            return True
    return False


def is_primal(m: Monoid, a: Element, bound: Norm, candidates: list[Element] | None = None) -> Verdict:
    """Refuted(b, c) with a | bc but no a = a1·a2, a1 | b, a2 | c."""
    m.check(a)
    if not _non_unit(m, a):
        return Verdict.proven(note='unit')
    verdict = _apply_rules(m, 'primal', a, bound)
    if verdict is not None:
        return verdict
    elements = pool(m, bound) if candidates is None else candidates
    for i, b in enumerate(elements):
        for c in elements[i:]:
            if m.quotient(m.compose(b, c), a) is None:
                continue
            if not _splits(m, a, b, c):
                return Verdict.refuted(b, c, bound=bound)
    return Verdict.unknown(bound)


# Element sets


@dataclass
class ElementSet:
    """Members decided by a predicate within a bound; undecided ones kept apart."""

    members: list[Element]
    unknown: list[Element] = field(default_factory=list)
    bound: Norm = 0


def _collect(m: Monoid, bound: Norm, predicate: Callable[[Element], Verdict]) -> ElementSet:
    if not m.enumerable:
        raise NotEnumerableError(f"{m.key} is not enumerable")
    result = ElementSet([], [], bound)
    for a in pool(m, bound):
        holds = predicate(a).holds
        if holds:
            result.members.append(a)
        elif holds is None:
            result.unknown.append(a)
    return result


def atoms(m: Monoid, bound: Norm) -> ElementSet:
    return _collect(m, bound, lambda a: is_atom(m, a, bound))


def squarefree_set(m: Monoid, bound: Norm) -> ElementSet:
    return _collect(m, bound, lambda a: is_squarefree(m, a, bound))


def radical_set(m: Monoid, bound: Norm, max_power: int = DEFAULT_MAX_POWER) -> ElementSet:
    elements = pool(m, bound)
    return _collect(m, bound, lambda a: is_radical(m, a, bound, max_power, elements))


def primes_set(m: Monoid, bound: Norm) -> ElementSet:
    elements = pool(m, bound)
    return _collect(m, bound, lambda a: is_prime(m, a, bound, elements))


# Free commutative monoids


def _basis_index(a: Element) -> int | None:
    if sum(a.payload) == 1:
        return a.payload.index(1)
    return None


@analytic('free_commutative', 'squarefree', source='exponents at most one')
def _free_squarefree(m, a, bound):
    for i, k in enumerate(a.payload):
        if k >= 2:
            b = tuple(int(j == i) for j in range(len(a.payload)))
            c = tuple(x - 2 * y for x, y in zip(a.payload, b))
            return Verdict.refuted(Element(m.key, b), Element(m.key, c))
    return Verdict.proven()


@analytic('free_commutative', 'prime', source='free generators are prime')
def _free_prime(m, a, bound):
    return Verdict.proven() if _basis_index(a) is not None else None


@analytic('free_commutative', 'radical', source='radical equals square-free in decomposition monoids')
def _free_radical(m, a, bound):
    return Verdict.proven() if is_squarefree(m, a).holds else None


@analytic('free_commutative', 'primal', source='factorial monoids are decomposition monoids')
def _free_primal(m, a, bound):
    return Verdict.proven()


@claims('free_commutative', source='free commutative monoids are factorial')
def _free_claims(m):
    facts = {name: Verdict.proven() for name in PROPERTY_NAMES}
    facts.update({s.value: Verdict.proven() for s in Scheme})
    return facts


@claims('shifted_numerical', source='finitely generated reduced monoids are BF')
def _shifted_claims(m):
    return {'bf': Verdict.proven()}


@claims('affine', source='finitely generated reduced monoids are BF')
def _affine_claims(m):
    return {'bf': Verdict.proven()}


# Ladder monoids


@analytic('ladder', 'atom', source='ladder atoms are the x generators')
def _ladder_atom(m: LadderMonoid, a, bound):
    v = a.payload
    if v.e == 0 and sum(v.xs) == 1:
        return Verdict.proven()
    for j, k in enumerate(v.xs, 1):
        if k:
            d = m.x(j)
            return Verdict.refuted(m.quotient(a, d), d)
    if v.e >= 2:
        d = m.y(v.level)
        return Verdict.refuted(m.quotient(a, d), d)
    if v.level >= m.level_cap:
        return Verdict.unknown(m.level_cap, note='level cap reached')
    return Verdict.refuted(m.x(v.level + 1, m.p), m.y(v.level + 1, m.q))


@analytic('ladder', 'squarefree', source='ladder exponents at every level')
def _ladder_squarefree(m: LadderMonoid, a, bound):
    v = a.payload
    level = m.common_level(v)
    while True:
        rep = m.normalize_to_level(v, level)
        for j, k in enumerate(rep.xs, 1):
            if k >= 2:
                b = m.x(j)
                return Verdict.refuted(b, m.quotient(a, m.compose(b, b)))
        if rep.e >= 2:
            b = m.y(level)
            return Verdict.refuted(b, m.quotient(a, m.compose(b, b)))
        if rep.e == 0 or (rep.e == 1 and m.p == 1 and m.q == 1):
            return Verdict.proven()
        if level >= m.level_cap:
            return Verdict.unknown(m.level_cap, note='level cap reached')
        level += 1


@analytic('ladder', 'prime', source='atoms of a GCD-monoid are prime')
def _ladder_prime(m: LadderMonoid, a, bound):
    atom = _ladder_atom(m, a, bound)
    if atom.holds:
        return Verdict.proven()
    if atom.holds is False:
        return Verdict.refuted(*atom.witness, note='not an atom')
    return atom


@analytic('ladder', 'radical', source='radical equals square-free in decomposition monoids')
def _ladder_radical(m, a, bound):
    verdict = is_squarefree(m, a, bound)
    if verdict.holds is False:
        return None
    return verdict


@analytic('ladder', 'primal', source='GCD-monoids are decomposition monoids')
def _ladder_primal(m, a, bound):
    return Verdict.proven()


@claims('ladder', source='ladder monoids are non-atomic GCD-monoids')
def _ladder_claims(m: LadderMonoid):
    chain_start = m.y(1)
    facts = {
        'gcd': Verdict.proven(),
        'atomic': Verdict.refuted(chain_start, note='y_1 has no atom factorization'),
        'accp': Verdict.refuted(*m.y_chain(3), note='y_1, y_2, y_3, ... strictly descending'),
    }
    if (m.p, m.q) == (1, 1):
        facts.update({s.value: Verdict.proven() for s in Scheme})
        return facts
    for s in (Scheme.PRODUCT, Scheme.CHAIN, Scheme.GRADED, Scheme.BINARY, Scheme.SUPPORT):
        facts[s.value] = Verdict.refuted(chain_start)
    if m.q % 2 == 0:
        facts[Scheme.SQUARE.value] = Verdict.proven()
    else:
        facts[Scheme.SQUARE.value] = Verdict.refuted(chain_start)
    return facts


# Polynomial subrings L + xF[x]


@claims('poly_subring', source='degree bounds factorization lengths in L + xF[x]')
def _poly_claims(m: PolySubring):
    facts = {name: Verdict.proven() for name in ('atomic', 'accp', 'bf')}
    facts.update({s.value: Verdict.proven() for s in Scheme})
    if len(m.base) < m.field.order:
        x = Element(m.key, (0, 1))
        other = Element(m.key, (0, min(c for c in m.field.elements() if c not in m.base)))
        facts['factorial'] = Verdict.refuted(x, other, other, note='x divides a product of two non-multiples')
    return facts


# Non-negative rationals


def _ones(m: NonnegRationals, t: Fraction) -> tuple[Fraction, ...]:
    return (Fraction(t),) * m.rank


def _minus(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def _unit_vector(m: NonnegRationals, i: int, scale: int = 1) -> tuple[Fraction, ...]:
    return tuple(Fraction(scale if j == i else 0) for j in range(m.rank))


@analytic('nonneg_rationals', 'atom', source='halving in the rationals')
def _rational_atom(m: NonnegRationals, a, bound):
    if m.positive(a):
        d = _ones(m, min(a.payload) / 2)
        return Verdict.refuted(Element(m.key, _minus(a.payload, d)), Element(m.key, d))
    if sum(a.payload) == 1:
        return Verdict.proven()
    i = next(i for i, x in enumerate(a.payload) if x)
    d = _unit_vector(m, i)
    return Verdict.refuted(Element(m.key, _minus(a.payload, d)), Element(m.key, d))


@analytic('nonneg_rationals', 'squarefree', source='halving in the rationals')
def _rational_squarefree(m: NonnegRationals, a, bound):
    if m.positive(a):
        low = min(a.payload)
        b = _ones(m, low / 2)
        return Verdict.refuted(Element(m.key, b), Element(m.key, _minus(a.payload, _ones(m, low))))
    for i, x in enumerate(a.payload):
        if x >= 2:
            b = _unit_vector(m, i)
            return Verdict.refuted(Element(m.key, b), Element(m.key, _minus(a.payload, _unit_vector(m, i, 2))))
    return Verdict.proven()


@analytic('nonneg_rationals', 'prime', source='halving in the rationals')
def _rational_prime(m: NonnegRationals, a, bound):
    b = Element(m.key, _ones(m, max(a.payload) / 2))
    return Verdict.refuted(b, b)


@analytic('nonneg_rationals', 'radical', source='halving in the rationals')
def _rational_radical(m: NonnegRationals, a, bound):
    if not any(a.payload):
        return Verdict.proven()
    return Verdict.refuted(Element(m.key, _ones(m, max(a.payload) / 2)), 2)


@analytic('nonneg_rationals', 'primal', source='the rationals form a GCD-monoid')
def _rational_primal(m: NonnegRationals, a, bound):
    if m.rank == 1:
        return Verdict.proven()
    return Verdict.unknown(bound, note='no primality rule above rank 1')


@claims('nonneg_rationals', source='halving in the rationals')
def _rational_claims(m: NonnegRationals):
    half = m.scaled_ones(Fraction(1, 2))
    one = m.scaled_ones(Fraction(1))
    start = one if m.rank == 1 else half
    facts = {
        'atomic': Verdict.refuted(start, note='no atoms divide it'),
        'accp': Verdict.refuted(start, m.scaled_ones(start.payload[0] / 2), note='halving chain'),
        Scheme.SQUARE.value: Verdict.proven(),
    }
    if m.rank == 1:
        facts['gcd'] = Verdict.proven()
    for s in (Scheme.PRODUCT, Scheme.CHAIN, Scheme.GRADED, Scheme.BINARY, Scheme.SUPPORT):
        facts[s.value] = Verdict.refuted(start)
    return facts
