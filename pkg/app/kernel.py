"""Family-agnostic monoid interface and three-valued verdicts."""

import logging
from abc import ABC, abstractmethod
from collections.abc import Callable, Hashable, Iterable, Sequence
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from typing import Any

logger = logging.getLogger(__name__)

Norm = int


class MonoidError(Exception):
    """Base class for all monoid-level errors."""


class FamilyMismatchError(MonoidError):
    """Raised when elements of different monoids are combined."""


class NotEnumerableError(MonoidError):
    """Raised when an operation needs enumeration the family cannot provide."""


class LevelCapExceeded(MonoidError):
    """Raised when a ladder rewrite would pass the configured level cap."""


class ClassificationError(MonoidError):
    """Raised when a classification row contradicts the implication table."""


class SpecError(MonoidError):
    """Raised for malformed or invalid monoid descriptions."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


class VerdictKind(str, Enum):
    """Outcome of an exact decision or a bounded search."""

    PROVEN = "Proven"
    REFUTED = "Refuted"
    FOUND_WITNESS = "FoundWitness"
    NOT_FOUND_UP_TO = "NotFoundUpTo"
    UNKNOWN_UP_TO = "UnknownUpTo"


@dataclass(frozen=True)
class Verdict:
    """A bounded-search outcome.

    Refuted and FoundWitness verdicts always carry a witness. A non-empty
    ``source`` marks a verdict taken from analytic knowledge about the family
    rather than from search.
    """

    kind: VerdictKind
    witness: tuple[Any, ...] = ()
    bound: Norm = 0
    note: str = ''
    source: str = ''

    def __post_init__(self):
        if self.kind in (VerdictKind.REFUTED, VerdictKind.FOUND_WITNESS) and not self.witness:
            raise ValueError(f"{self.kind.value} verdict requires a witness")

    @classmethod
    def proven(cls, *witness: Any, bound: Norm = 0, note: str = '', source: str = '') -> 'Verdict':
        return cls(VerdictKind.PROVEN, tuple(witness), bound, note, source)

    @classmethod
    def refuted(cls, *witness: Any, bound: Norm = 0, note: str = '', source: str = '') -> 'Verdict':
        return cls(VerdictKind.REFUTED, tuple(witness), bound, note, source)

    @classmethod
    def found(cls, *witness: Any, bound: Norm = 0, note: str = '', source: str = '') -> 'Verdict':
        return cls(VerdictKind.FOUND_WITNESS, tuple(witness), bound, note, source)

    @classmethod
    def not_found(cls, bound: Norm, note: str = '') -> 'Verdict':
        return cls(VerdictKind.NOT_FOUND_UP_TO, (), bound, note)

    @classmethod
    def unknown(cls, bound: Norm, note: str = '') -> 'Verdict':
        return cls(VerdictKind.UNKNOWN_UP_TO, (), bound, note)

    @property
    def holds(self) -> bool | None:
        """True/False for decided verdicts, None for truncated ones."""
        if self.kind in (VerdictKind.PROVEN, VerdictKind.FOUND_WITNESS):
            return True
        if self.kind == VerdictKind.REFUTED:
            return False
        return None

    @property
    def decided(self) -> bool:
        return self.holds is not None

    @property
    def claimed(self) -> bool:
        return bool(self.source)

    def with_source(self, source: str) -> 'Verdict':
        return self if self.source else replace(self, source=source)

    def label(self) -> str:
        text = self.kind.value
        if self.kind in (VerdictKind.NOT_FOUND_UP_TO, VerdictKind.UNKNOWN_UP_TO):
            text = f"{text}({self.bound})"
        if self.claimed:
            text = f"{text} [claimed]"
        return text


@dataclass(frozen=True)
class Element:
    """A monoid element: the owning monoid's key plus a canonical payload."""

    family: str
    payload: Hashable


class Monoid(ABC):
    """Commutative cancellative monoid with exact integer arithmetic.

    Subclasses implement the payload-level hooks; the public methods wrap
    them in Elements and Verdicts and enforce that operands belong to the
    same monoid.
    """

    family: str = ''
    enumerable: bool = True
    finite_divisors: bool = True
    reduced: bool = True
    max_bound: Norm | None = None

    def __init__(self, key: str):
        self.key = key
        self._divisor_payloads = lru_cache(maxsize=None)(self._sorted_divisors)

    # Payload hooks

    @abstractmethod
    def _identity(self) -> Hashable:
        ...

    @abstractmethod
    def _compose(self, p: Any, q: Any) -> Hashable:
        ...

    @abstractmethod
    def _quotient(self, b: Any, a: Any) -> Hashable | None:
        """Return c with a·c = b, or None."""

    @abstractmethod
    def _norm(self, p: Any) -> Norm:
        ...

    @abstractmethod
    def _contains(self, p: Any) -> bool:
        ...

    @abstractmethod
    def _parse(self, text: str) -> Hashable:
        ...

    @abstractmethod
    def _render(self, p: Any) -> str:
        ...

    def _enumerate(self, bound: Norm) -> Iterable[Hashable]:
        raise NotEnumerableError(f"{self.key} is not enumerable")

    def _divisor_candidates(self, p: Any) -> Iterable[Hashable]:
        """Payloads that may divide p; filtered by exact division afterwards."""
        return self._enumerate(self._norm(p))

    def _unit_payloads(self) -> list[Hashable]:
        return [self._identity()]

    def _sort_key(self, p: Any) -> tuple:
        return (self._norm(p), p)

    def exponent_view(
        self, a: 'Element'
    ) -> tuple[tuple[int, ...], Callable[[tuple[int, ...]], 'Element']] | None:
        """Exponent vector of a over a free basis, with the inverse map.

        Only offered where the divisors of a form a free monoid, so that
        factorizations can be read off the exponents.
        """
        return None

    # Element construction

    def wrap(self, payload: Hashable) -> Element:
        if not self._contains(payload):
            raise MonoidError(f"{payload!r} is not an element of {self.key}")
        return Element(self.key, payload)

    def parse(self, text: str) -> Element:
        try:
            payload = self._parse(text.strip())
        except (ValueError, TypeError, IndexError) as e:
            raise SpecError('element', f"cannot parse {text!r}: {e}") from e
        return self.wrap(payload)

    def render(self, a: Element) -> str:
        self.check(a)
        return self._render(a.payload)

    def check(self, *elements: Element):
        for e in elements:
            if not isinstance(e, Element) or e.family != self.key:
                family = getattr(e, 'family', type(e).__name__)
                raise FamilyMismatchError(f"element of {family} used with {self.key}")

    @property
    def identity(self) -> Element:
        return Element(self.key, self._identity())

    def sort_key(self, a: Element) -> tuple:
        return self._sort_key(a.payload)

    def sorted(self, elements: Iterable[Element]) -> list[Element]:
        return sorted(elements, key=self.sort_key)

    # Arithmetic

    def compose(self, a: Element, b: Element) -> Element:
        self.check(a, b)
        return Element(self.key, self._compose(a.payload, b.payload))

    def product(self, elements: Sequence[Element]) -> Element:
        result = self.identity
        for e in elements:
            result = self.compose(result, e)
        return result

    def power(self, a: Element, n: int) -> Element:
        if n < 0:
            raise MonoidError(f"negative exponent {n}")
        result = self.identity
        base = a
        while n:
            if n & 1:
                result = self.compose(result, base)
            n >>= 1
            if n:
                base = self.compose(base, base)
        return result

    def norm(self, a: Element) -> Norm:
        self.check(a)
        return self._norm(a.payload)

    def quotient(self, b: Element, a: Element) -> Element | None:
        """Return the cofactor c with a·c = b, or None when a does not divide b."""
        self.check(a, b)
        c = self._quotient(b.payload, a.payload)
        return None if c is None else Element(self.key, c)

    # Divisibility

    def divides(self, a: Element, b: Element) -> Verdict:
        c = self.quotient(b, a)
        if c is None:
            return Verdict.refuted(a, b)
        return Verdict.proven(c)

    def is_unit(self, a: Element) -> Verdict:
        inverse = self.quotient(self.identity, a)
        if inverse is None:
            return Verdict.refuted(a)
        return Verdict.proven(inverse)

    def units(self) -> list[Element]:
        return [Element(self.key, u) for u in self._unit_payloads()]

    def associates(self, a: Element, b: Element) -> Verdict:
        self.check(a, b)
        for u in self.units():
            if self.compose(b, u) == a:
                return Verdict.proven(u)
        return Verdict.refuted(a, b)

    def divisors(self, a: Element) -> list[Element]:
        """All divisors of a (units and a itself included) in graded-lex order."""
        self.check(a)
        if not self.enumerable and not self.finite_divisors:
            raise NotEnumerableError(f"{self.key} has no finite divisor sets")
        return [Element(self.key, p) for p in self._divisor_payloads(a.payload)]

    def _sorted_divisors(self, payload: Hashable) -> tuple[Hashable, ...]:
        found = {p for p in self._divisor_candidates(payload) if self._quotient(payload, p) is not None}
        return tuple(sorted(found, key=self._sort_key))

    def common_divisors(self, a: Element, b: Element) -> list[Element]:
        return [d for d in self.divisors(a) if self.quotient(b, d) is not None]

    def rpr(self, a: Element, b: Element) -> Verdict:
        """Relative primality: every common divisor is a unit."""
        self.check(a, b)
        for d in self.common_divisors(a, b):
            if self.is_unit(d).holds is False:
                return Verdict.refuted(d)
        if self.finite_divisors:
            return Verdict.proven()
        return Verdict.unknown(self._norm(a.payload), note='divisor set truncated')

    def gcd(self, a: Element, b: Element) -> Verdict:
        """Proven(g) when the common divisors have a maximum under divisibility."""
        common = self.common_divisors(a, b)
        for g in sorted(common, key=lambda d: (-self.norm(d), self.sort_key(d))):
            if all(self.quotient(g, d) is not None for d in common):
                if self.finite_divisors:
                    return Verdict.proven(g)
                return Verdict.unknown(self._norm(a.payload), note=f"candidate gcd {self.render(g)}")
        maximal = [d for d in common
                   if not any(e != d and self.quotient(e, d) is not None for e in common)]
        return Verdict.refuted(*maximal[:2], note='no greatest common divisor')

    # Enumeration

    def enumerate(self, bound: Norm) -> list[Element]:
        """All elements with norm at most bound, in graded-lex order."""
        if not self.enumerable:
            raise NotEnumerableError(f"{self.key} is not enumerable")
        payloads = sorted(set(self._enumerate(bound)), key=self._sort_key)
        return [Element(self.key, p) for p in payloads]

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.key!r})"


def vectors_up_to(rank: int, bound: Norm) -> list[tuple[int, ...]]:
    """All vectors in N^rank with coordinate sum at most bound, graded-lex sorted."""
    result: list[tuple[int, ...]] = []

    def extend(prefix: tuple[int, ...], remaining: int):
        if len(prefix) == rank:
            result.append(prefix)
            return
        for k in range(remaining + 1):
            extend(prefix + (k,), remaining - k)

    extend((), bound)
    result.sort(key=lambda v: (sum(v), v))
    return result


def box(upper: Sequence[int]) -> list[tuple[int, ...]]:
    """All vectors v with 0 <= v <= upper componentwise."""
    result: list[tuple[int, ...]] = [()]
    for k in upper:
        result = [v + (i,) for v in result for i in range(k + 1)]
    return result
