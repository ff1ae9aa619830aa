"""Monoid profiles and the implication diagrams between their properties."""

import logging
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from app.factorize import DEFAULT_NODE_BUDGET, factor
from app.kernel import Element, Monoid, Norm, Verdict, VerdictKind
from app.predicates import (
    PROPERTY_NAMES,
    Scheme,
    is_atom,
    is_primal,
    is_prime,
    is_radical,
    is_squarefree,
    pool,
    profile_claims,
)

logger = logging.getLogger(__name__)

DEFAULT_PAIR_LIMIT = 60
DEFAULT_ELEMENT_LIMIT = 200

ALL_NAMES = PROPERTY_NAMES + tuple(s.value for s in Scheme)


@dataclass(frozen=True)
class Arrow:
    """premises (all together) imply conclusion."""

    premises: tuple[str, ...]
    conclusion: str

    @property
    def name(self) -> str:
        return f"{' & '.join(self.premises)} => {self.conclusion}"


def _arrows(*pairs: tuple[str | tuple[str, ...], str]) -> tuple[Arrow, ...]:
    return tuple(Arrow(p if isinstance(p, tuple) else (p,), c) for p, c in pairs)


MONOID_ARROWS = _arrows(
    ('factorial', 'bf'), ('bf', 'accp'), ('accp', 'atomic'), ('atomic', 'product'),
    ('factorial', 'gcd'), ('gcd', 'decomposition'), ('decomposition', 'atoms_are_primes'),
    (('atomic', 'atoms_are_primes'), 'factorial'),
    ('factorial', 'chain'),
    ('chain', 'graded'), ('graded', 'product'), ('chain', 'product'),
    ('binary', 'product'), ('accp', 'binary'), ('chain', 'support'), ('binary', 'square'),
    (('decomposition', 'graded'), 'chain'), (('decomposition', 'graded'), 'binary'),
    (('gcd', 'binary'), 'graded'),
)

ELEMENT_ARROWS = _arrows(
    ('prime', 'atom'), ('prime', 'radical'), ('radical', 'squarefree'), ('atom', 'squarefree'),
)


def propagate(verdicts: dict[str, Verdict], arrows: tuple[Arrow, ...] = MONOID_ARROWS) -> list[str]:
    """Close verdicts under the arrows and their contrapositives; return the violated arrows.

    Only Proven and Refuted verdicts take part. Derived entries replace
    undecided ones in place.
    """
    conflicts: list[str] = []
    changed = True
    while changed:
        changed = False
        for arrow in arrows:
            premises = [verdicts.get(p) for p in arrow.premises]
            conclusion = verdicts.get(arrow.conclusion)
            if all(v is not None and v.holds is True for v in premises):
                if conclusion is None or not conclusion.decided:
                    verdicts[arrow.conclusion] = Verdict.proven(note=f"by {arrow.name}")
                    changed = True
                elif conclusion.holds is False and arrow.name not in conflicts:
                    conflicts.append(arrow.name)
                continue
            if conclusion is None or conclusion.holds is not False:
                continue
            open_premises = [p for p, v in zip(arrow.premises, premises) if v is None or not v.decided]
            others_hold = all(v is not None and (v.holds is True or not v.decided) for v in premises)
            if len(open_premises) == 1 and others_hold:
                verdicts[open_premises[0]] = Verdict.refuted(*conclusion.witness, note=f"by {arrow.name}")
                changed = True
    for name in conflicts:
        logger.error(f"Implication violated: {name}")
    return conflicts


@dataclass
class MonoidProfile:
    """Per-property verdicts for one monoid within a norm bound."""

    key: str
    bound: Norm
    verdicts: dict[str, Verdict]
    conflicts: list[str] = field(default_factory=list)
    evaluated: int = 0

    def __getitem__(self, name: str) -> Verdict:
        return self.verdicts[name]

    @property
    def schemes(self) -> dict[Scheme, Verdict]:
        return {s: self.verdicts[s.value] for s in Scheme}

    @property
    def atomic(self) -> Verdict:
        return self.verdicts['atomic']

    @property
    def accp(self) -> Verdict:
        return self.verdicts['accp']

    @property
    def gcd(self) -> Verdict:
        return self.verdicts['gcd']

    @property
    def decomposition(self) -> Verdict:
        return self.verdicts['decomposition']

    @property
    def atoms_are_primes(self) -> Verdict:
        return self.verdicts['atoms_are_primes']

    @property
    def consistent(self) -> bool:
        return not self.conflicts


def scheme_holds_for(m: Monoid, a: Element, scheme: Scheme, bound: Norm,
                     node_budget: int = DEFAULT_NODE_BUDGET) -> Verdict:
    """FoundWitness with the factorization, or the family's analytic verdict when search is silent."""
    scheme = Scheme(scheme)
    verdict = factor(m, a, scheme, bound, node_budget=node_budget)
    claim = profile_claims(m).get(scheme.value)
    if claim is None:
        return verdict
    if verdict.holds is False and claim.holds is True:
        logger.error(f"{scheme.value} claimed for {m.key} but refuted at {m.render(a)}")
    if verdict.holds is None and claim.holds is True:
        return Verdict.proven(bound=bound, source=claim.source)
    return verdict


def _scheme_property(m: Monoid, elements: list[Element], scheme: Scheme, bound: Norm,
                     node_budget: int) -> Verdict:
    complete = True
    for a in elements:
        verdict = factor(m, a, scheme, bound, node_budget=node_budget)
        if verdict.holds is False:
            return Verdict.refuted(a, bound=bound, note=verdict.note)
        if verdict.holds is None:
            complete = False
    if complete:
        return Verdict.not_found(bound, note=f"holds for all {len(elements)} elements")
    return Verdict.unknown(bound, note='some searches were truncated')


def _atomic_property(m: Monoid, elements: list[Element], bound: Norm) -> Verdict:
    if not m.finite_divisors:
        return Verdict.unknown(bound)
    factorable: dict[object, bool] = {}

    def check(a: Element) -> bool:
        if a.payload not in factorable:
            factorable[a.payload] = (
                m.is_unit(a).holds is True
                or is_atom(m, a).holds is True
                or any(is_atom(m, d).holds and check(m.quotient(a, d))
                       for d in m.divisors(a) if d != a and m.is_unit(d).holds is False)
            )
        return factorable[a.payload]

    for a in elements:
        if not check(a):
            return Verdict.refuted(a, bound=bound)
    return Verdict.not_found(bound, note='every element factors into atoms')


def _pair_property(elements: list[Element], test: Callable[[Element, Element], Verdict],
                   bound: Norm) -> Verdict:
    complete = True
    for i, a in enumerate(elements):
        for b in elements[i:]:
            verdict = test(a, b)
            if verdict.holds is False:
                return Verdict.refuted(a, b, bound=bound)
            complete = complete and verdict.decided
    if complete:
        return Verdict.not_found(bound, note=f"checked {len(elements)} elements pairwise")
    return Verdict.unknown(bound)


def _element_property(elements: list[Element], test: Callable[[Element], Verdict],
                      bound: Norm) -> Verdict:
    complete = True
    for a in elements:
        verdict = test(a)
        if verdict.holds is False:
            return Verdict.refuted(a, *verdict.witness, bound=bound)
        complete = complete and verdict.decided
    if complete:
        return Verdict.not_found(bound, note=f"checked {len(elements)} elements")
    return Verdict.unknown(bound)


def _empirical(m: Monoid, bound: Norm, pair_limit: int, element_limit: int, node_budget: int,
               workers: int) -> tuple[dict[str, Verdict], int]:
    elements = pool(m, bound)[:element_limit]
    head = elements[:pair_limit]
    non_units = [a for a in head if m.is_unit(a).holds is False]
    atom_list = [a for a in non_units if is_atom(m, a, bound).holds]

    tasks: dict[str, Callable[[], Verdict]] = {
        'atomic': lambda: _atomic_property(m, elements, bound),
        'gcd': lambda: _pair_property(head, m.gcd, bound),
        'decomposition': lambda: _element_property(
            non_units, lambda a: is_primal(m, a, bound, head), bound),
        'atoms_are_primes': lambda: _element_property(
            atom_list, lambda a: is_prime(m, a, bound, head), bound),
    }
    for s in Scheme:
        tasks[s.value] = lambda s=s: _scheme_property(m, elements, s, bound, node_budget)

    with ThreadPoolExecutor(max_workers=max(workers, 1)) as executor:
        futures = {name: executor.submit(task) for name, task in tasks.items()}
        results = {name: future.result() for name, future in futures.items()}
    return results, len(elements)


def monoid_profile(m: Monoid, bound: Norm, pair_limit: int = DEFAULT_PAIR_LIMIT,
                   element_limit: int = DEFAULT_ELEMENT_LIMIT,
                   node_budget: int = DEFAULT_NODE_BUDGET, workers: int = 1) -> MonoidProfile:
    """Searched verdicts merged with the family's analytic claims, closed under implications.

    A claim contradicted by search is kept out and reported as a conflict.
    """
    claims = profile_claims(m)
    empirical: dict[str, Verdict] = {}
    evaluated = 0
    if m.enumerable:
        empirical, evaluated = _empirical(m, bound, pair_limit, element_limit, node_budget, workers)
    verdicts: dict[str, Verdict] = {}
    conflicts: list[str] = []
    for name in ALL_NAMES:
        searched = empirical.get(name, Verdict.unknown(bound))
        claim = claims.get(name)
        if claim is not None and searched.decided and claim.holds != searched.holds:
            message = f"{name}: claimed {claim.label()} but search gives {searched.label()}"
            logger.error(f"{m.key}: {message}")
            conflicts.append(message)
            verdicts[name] = searched
        elif searched.decided or claim is None:
            verdicts[name] = searched
        else:
            verdicts[name] = claim
    conflicts.extend(propagate(verdicts))
    logger.info(f"Profiled {m.key} at bound {bound}: {evaluated} elements, {len(conflicts)} conflicts")
    return MonoidProfile(m.key, bound, verdicts, conflicts, evaluated)


# Element-level diagram


def element_verdicts(m: Monoid, a: Element, bound: Norm,
                     candidates: list[Element] | None = None) -> dict[str, Verdict]:
    return {
        'atom': is_atom(m, a, bound),
        'prime': is_prime(m, a, bound, candidates),
        'radical': is_radical(m, a, bound, candidates=candidates),
        'squarefree': is_squarefree(m, a, bound),
    }


def element_diagram_violations(m: Monoid, elements: list[Element], bound: Norm) -> list[tuple[Element, str]]:
    """(element, arrow) pairs where decided element verdicts break an implication."""
    candidates = pool(m, bound) if m.enumerable else None
    violations = []
    for a in elements:
        if m.is_unit(a).holds:
            continue
        verdicts = element_verdicts(m, a, bound, candidates)
        for arrow in ELEMENT_ARROWS:
            premise = verdicts[arrow.premises[0]]
            conclusion = verdicts[arrow.conclusion]
            if premise.holds is True and conclusion.holds is False:
                violations.append((a, arrow.name))
    return violations


def sign(verdict: Verdict) -> str:
    """'+' decided true, '-' decided false, '+?' no counterexample in bound, '?' undecided."""
    if verdict.holds is True:
        return '+'
    if verdict.holds is False:
        return '-'
    if verdict.kind == VerdictKind.NOT_FOUND_UP_TO:
        return '+?'
    return '?'
