"""Catalog of recorded monoid facts and the checks that reproduce them."""

import logging
import os
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

import yaml

from app.factorize import factor, verify
from app.families import PolySubring, build, poly_elements_up_to, realize
from app.kernel import Element, Monoid, MonoidError, Verdict
from app.lab import count_squarefree, witness_for_count
from app.predicates import (
    atoms,
    is_atom,
    is_prime,
    is_radical,
    is_squarefree,
    radical_set,
    squarefree_set,
)
from app.profile import monoid_profile, sign
from app.submonoid import (
    SubmonoidContext,
    atoms_of_M,
    check_transfer,
    closure_checks,
    cofactor_report,
    squarefree_report,
)

logger = logging.getLogger(__name__)

DEFAULT_CATALOG = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
                               'data', 'catalog.yaml')


class CatalogError(MonoidError):
    """Raised for malformed catalog files."""


@dataclass
class CatalogOutcome:
    """Result of reproducing one catalog entry."""

    id: str
    check: str
    passed: bool
    detail: str = ''
    facts: dict[str, Any] = field(default_factory=dict)
    source: str = ''


@dataclass
class CatalogRun:
    outcomes: list[CatalogOutcome]

    @property
    def passed(self) -> bool:
        return all(o.passed for o in self.outcomes)

    @property
    def failures(self) -> list[CatalogOutcome]:
        return [o for o in self.outcomes if not o.passed]


Check = Callable[[dict[str, Any]], tuple[bool, str, dict[str, Any]]]

_CHECKS: dict[str, Check] = {}


def check(name: str):
    """Register a catalog check under ``name``."""

    def decorator(fn: Check) -> Check:
        _CHECKS[name] = fn
        return fn

    return decorator


def _monoid(entry: dict[str, Any]) -> Monoid:
    return realize(build(entry['spec']))


def _renders(m: Monoid, items) -> list[str]:
    return [m.render(e) if isinstance(e, Element) else str(e) for e in items]


def _compare(facts: dict[str, Any], expect: dict[str, Any]) -> tuple[bool, str]:
    wrong = [f"{k}: expected {v!r}, got {facts.get(k)!r}" for k, v in expect.items()
             if facts.get(k) != v]
    return not wrong, '; '.join(wrong)


def _verdict_facts(m: Monoid, verdict: Verdict) -> dict[str, Any]:
    return {
        'sign': sign(verdict),
        'witness': _renders(m, verdict.witness),
        'verdict': verdict.label(),
    }


# Submonoid checks


@check('submonoid-atoms')
def _submonoid_atoms(entry):
    ctx = SubmonoidContext.from_spec(entry['spec'], entry.get('element_bound', 8))
    found = _renders(ctx.monoid, atoms_of_M(ctx))
    return found == entry['expect'], f"atoms {found}", {'atoms': found}


@check('transfer')
def _transfer(entry):
    ctx = SubmonoidContext.from_spec(entry['spec'], entry.get('element_bound', 8))
    verdict = check_transfer(ctx, entry['property'])
    facts = _verdict_facts(ctx.ambient, verdict)
    ok, detail = _compare(facts, entry['expect'])
    return ok, detail or verdict.label(), facts


@check('suite')
def _suite(entry):
    ctx = SubmonoidContext.from_spec(entry['spec'], entry.get('element_bound', 6))
    run = cofactor_report if entry['suite'] == 'cofactor' else squarefree_report
    report = run(ctx)
    facts = {'consistent': report.consistent, 'holds': report.holds, 'refuted': report.refuted}
    ok, detail = _compare(facts, entry['expect'])
    return ok, detail or f"refuted {report.refuted}", facts


@check('closure')
def _closure(entry):
    ctx = SubmonoidContext.from_spec(entry['spec'], entry.get('element_bound', 8))
    verdict = closure_checks(ctx)[entry['closure']]
    facts = {'refuted': verdict.holds is False, **_verdict_facts(ctx.ambient, verdict)}
    ok, detail = _compare(facts, entry['expect'])
    return ok, detail or verdict.label(), facts


# Monoid and element checks


@check('profile')
def _profile(entry):
    m = _monoid(entry)
    profile = monoid_profile(m, entry.get('bound', 8))
    facts = {name: sign(v) for name, v in profile.verdicts.items()}
    ok, detail = _compare(facts, entry['expect'])
    if profile.conflicts:
        ok = False
        detail = '; '.join([detail] + profile.conflicts).strip('; ')
    return ok, detail or 'profile matches', facts


@check('scheme')
def _scheme(entry):
    m = _monoid(entry)
    a = m.parse(entry['element'])
    verdict = factor(m, a, entry['scheme'], entry.get('bound'))
    facts = {'sign': sign(verdict), 'verified': False}
    if verdict.holds:
        f = verdict.witness[0]
        facts['verified'] = verify(m, a, f).holds is True
        facts['factorization'] = f.render(m)
    ok, detail = _compare(facts, entry['expect'])
    return ok, detail or facts.get('factorization', verdict.label()), facts


@check('atoms')
def _atoms(entry):
    m = _monoid(entry)
    found = _renders(m, atoms(m, entry['bound']).members)
    return found == entry['expect'], f"atoms {found}", {'atoms': found}


@check('prime')
def _prime(entry):
    m = _monoid(entry)
    verdict = is_prime(m, m.parse(entry['element']), entry['bound'])
    facts = _verdict_facts(m, verdict)
    ok, detail = _compare(facts, entry['expect'])
    return ok, detail or verdict.label(), facts


@check('radical-gap')
def _radical_gap(entry):
    """A square-free element that is not radical, and radical elements with radical divisors."""
    m = _monoid(entry)
    bound = entry['bound']
    gap = None
    for a in squarefree_set(m, bound).members:
        verdict = is_radical(m, a, bound)
        if verdict.holds is False:
            b, n = verdict.witness
            power = m.power(b, n)
            if m.quotient(power, a) is not None and m.quotient(b, a) is None:
                gap = (a, b, n)
                break
    radicals = radical_set(m, bound).members
    bad = [d for r in radicals for d in m.divisors(r) if is_radical(m, d, bound).holds is False]
    facts = {'gap': None if gap is None else f"{m.render(gap[0])} | {m.render(gap[1])}^{gap[2]}",
             'non_radical_divisors': _renders(m, bad)}
    ok = gap is not None and not bad
    return ok, str(facts['gap']), facts


@check('radical-equals-squarefree')
def _radical_equals_squarefree(entry):
    m = _monoid(entry)
    bound = entry['bound']
    radical = _renders(m, radical_set(m, bound).members)
    squarefree = _renders(m, squarefree_set(m, bound).members)
    return radical == squarefree, f"{len(radical)} radical, {len(squarefree)} square-free", {}


# Polynomial subring checks


def _poly(entry) -> PolySubring:
    m = _monoid(entry)
    if not isinstance(m, PolySubring):
        raise CatalogError(f"{entry['id']}: expected a poly_subring spec")
    return m


@check('poly-squarefree')
def _poly_squarefree(entry):
    """Square-free in the subring iff square-free in F[x], for every element up to a degree."""
    m = _poly(entry)
    mismatches = [a for a in poly_elements_up_to(m, entry['degree'])
                  if bool(is_squarefree(m, a).holds) != m.fx_squarefree(a.payload)]
    return not mismatches, f"{len(mismatches)} mismatches", {'mismatches': _renders(m, mismatches[:5])}


@check('poly-atoms')
def _poly_atoms(entry):
    m = _poly(entry)
    mismatches = [a for a in poly_elements_up_to(m, entry['degree'])
                  if m.is_unit(a).holds is False
                  and bool(is_atom(m, a).holds) != m.atom_by_formula(a.payload)]
    return not mismatches, f"{len(mismatches)} mismatches", {'mismatches': _renders(m, mismatches[:5])}


def factorization_lengths(m: Monoid, elements: list[Element]) -> dict[Element, frozenset[int]]:
    """Lengths of all atom factorizations of each element (units have length 0)."""
    atom_list = [a for a in elements if is_atom(m, a).holds]

    @lru_cache(maxsize=None)
    def lengths(a: Element) -> frozenset[int]:
        if m.is_unit(a).holds:
            return frozenset({0})
        found: set[int] = set()
        for atom in atom_list:
            if m.norm(atom) > m.norm(a):
                break
            rest = m.quotient(a, atom)
            if rest is not None:
                found.update(n + 1 for n in lengths(rest))
        return frozenset(found)

    return {a: lengths(a) for a in elements}


@check('half-factorial')
def _half_factorial(entry):
    m = _poly(entry)
    elements = poly_elements_up_to(m, entry['degree'])
    lengths = factorization_lengths(m, elements)
    uneven = [a for a, ls in lengths.items() if len(ls) != 1]
    return not uneven, f"{len(elements)} elements, {len(uneven)} with several lengths", {
        'uneven': _renders(m, uneven[:5])}


# Counting


@check('count')
def _count(entry):
    m = _monoid(entry)
    result = count_squarefree(build(entry['spec']))
    facts: dict[str, Any] = {'count': result.count, 'members': _renders(m, result.members)}
    if 'atoms' in entry['expect']:
        bound = max((m.norm(a) for a in result.members), default=0) + 1
        facts['atoms'] = _renders(m, atoms(m, bound).members)
    ok, detail = _compare(facts, entry['expect'])
    return ok, detail or f"count {result.count}", facts


@check('count-witnesses')
def _count_witnesses(entry):
    wrong = [n for n in range(1, entry['upto'] + 1)
             if count_squarefree(witness_for_count(n)).count != n]
    return not wrong, f"wrong counts for {wrong}" if wrong else f"1..{entry['upto']} reproduce", {}


# Running


def load_catalog(path: str | None = None) -> list[dict[str, Any]]:
    path = path or DEFAULT_CATALOG
    try:
        with open(path) as f:
            data = yaml.safe_load(f) or {}
    except OSError as e:
        raise CatalogError(f"cannot read catalog {path}: {e}") from e
    entries = data.get('entries')
    if not isinstance(entries, list):
        raise CatalogError(f"{path}: 'entries' must be a list")
    for entry in entries:
        if not isinstance(entry, dict) or 'id' not in entry or entry.get('check') not in _CHECKS:
            raise CatalogError(f"{path}: invalid entry {entry!r}")
    return entries


def _run_entry(entry: dict[str, Any]) -> CatalogOutcome:
    try:
        passed, detail, facts = _CHECKS[entry['check']](entry)
    except (MonoidError, KeyError, ValueError) as e:
        passed, detail, facts = False, f"{type(e).__name__}: {e}", {}
    if not passed:
        logger.error(f"Catalog entry {entry['id']} failed: {detail}")
    return CatalogOutcome(entry['id'], entry['check'], passed, detail, facts,
                          str(entry.get('source', '')))


def run_catalog(path: str | None = None, only: list[str] | None = None,
                workers: int = 1) -> CatalogRun:
    """Reproduce every catalog entry; outcomes keep the file's order."""
    entries = load_catalog(path)
    if only:
        entries = [e for e in entries if e['id'] in only]
    with ThreadPoolExecutor(max_workers=max(workers, 1)) as executor:
        outcomes = list(executor.map(_run_entry, entries))
    logger.info(f"Catalog: {sum(o.passed for o in outcomes)}/{len(outcomes)} entries reproduced")
    return CatalogRun(outcomes)
