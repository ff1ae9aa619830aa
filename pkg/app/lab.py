"""Classification rows, square-free counting and the parameter-grid search driver."""

import logging
from collections.abc import Iterable, Iterator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from app.factorize import DEFAULT_NODE_BUDGET, uniqueness_check
from app.families import MonoidSpec, ShiftedNumerical, build, realize, spec_for
from app.kernel import (
    ClassificationError,
    Element,
    Monoid,
    MonoidError,
    Norm,
    NotEnumerableError,
    SpecError,
    Verdict,
    vectors_up_to,
)
from app.predicates import Scheme, is_squarefree, profile_claims
from app.profile import (
    DEFAULT_ELEMENT_LIMIT,
    DEFAULT_PAIR_LIMIT,
    MONOID_ARROWS,
    monoid_profile,
    sign,
)
from app.sampling import Lcg

logger = logging.getLogger(__name__)

LAYERED = (Scheme.PRODUCT, Scheme.CHAIN, Scheme.GRADED, Scheme.BINARY)


# Classification


def _levels(top: Verdict | None, bottom: Verdict | None) -> frozenset[int]:
    """Values 2 (top), 1 (bottom only), 0 (neither) compatible with the decided verdicts."""
    values = set()
    for t, b, value in ((True, True, 2), (False, True, 1), (False, False, 0)):
        if top is not None and top.decided and top.holds != t:
            continue
        if bottom is not None and bottom.decided and bottom.holds != b:
            continue
        values.add(value)
    return frozenset(values)


@dataclass
class ClassificationRow:
    """One monoid's place in the classification table."""

    key: str
    bound: Norm
    verdicts: dict[str, Verdict]
    conflicts: list[str] = field(default_factory=list)

    @property
    def accp_atm(self) -> frozenset[int]:
        return _levels(self.verdicts.get('accp'), self.verdicts.get('atomic'))

    @property
    def gcd_decomp(self) -> frozenset[int]:
        return _levels(self.verdicts.get('gcd'), self.verdicts.get('decomposition'))

    @property
    def schemes(self) -> dict[Scheme, Verdict]:
        return {s: self.verdicts[s.value] for s in Scheme if s.value in self.verdicts}

    def signs(self) -> dict[str, str]:
        return {s.value: sign(v) for s, v in self.schemes.items()}

    def signature(self) -> tuple:
        """Hashable summary used to group monoids with the same behaviour."""
        return (tuple(sorted(self.accp_atm)), tuple(sorted(self.gcd_decomp)),
                tuple(sign(self.verdicts[s.value]) for s in Scheme))


@dataclass(frozen=True)
class ClassificationLine:
    """An allowed combination of the layered schemes with its side columns.

    ``support``/``square`` are None where either value is possible.
    """

    pattern: tuple[bool, bool, bool, bool]
    accp_atm: frozenset[int]
    gcd_decomp: frozenset[int]
    support: bool | None
    square: bool | None

    def cases(self) -> int:
        """Number of admissible (ACCP/atm, GCD/decomp) pairs."""
        return sum(1 for x, y in product(self.accp_atm, self.gcd_decomp) if _starred_ok(x, y))


def _line(pattern: str, accp: str, gcd: str, support: str, square: str) -> ClassificationLine:
    def values(text: str) -> frozenset[int]:
        return frozenset(int(v) for v in text.split('/'))

    def column(text: str) -> bool | None:
        return None if text == '+/-' else text == '+'

    return ClassificationLine(tuple(c == '+' for c in pattern), values(accp), values(gcd),
                              column(support), column(square))


CLASSIFICATION_TABLE = (
    _line('++++', '2/1/0', '2/1/0', '+', '+'),
    _line('+++-', '1/0', '0', '+', '+/-'),
    _line('+-++', '2/1/0', '0', '+/-', '+'),
    _line('+-+-', '1/0', '0', '+/-', '+/-'),
    _line('+--+', '2/1/0', '1/0', '+/-', '+'),
    _line('+---', '1/0', '2/1/0', '+/-', '+/-'),
    _line('----', '0', '2/1/0', '+/-', '+/-'),
)


def _starred_ok(accp_atm: int, gcd_decomp: int) -> bool:
    """Atomic decomposition monoids are factorial, so a 1 on either side needs a 0 on the other."""
    if accp_atm == 1 and gcd_decomp != 0:
        return False
    if gcd_decomp == 1 and accp_atm != 0:
        return False
    return True


def _matches(row: ClassificationRow, line: ClassificationLine) -> bool:
    for s, expected in zip(LAYERED, line.pattern):
        holds = row.verdicts[s.value].holds
        if holds is not None and holds != expected:
            return False
    for s, expected in ((Scheme.SUPPORT, line.support), (Scheme.SQUARE, line.square)):
        holds = row.verdicts[s.value].holds
        if expected is not None and holds is not None and holds != expected:
            return False
    pairs = product(row.accp_atm & line.accp_atm, row.gcd_decomp & line.gcd_decomp)
    return any(_starred_ok(x, y) for x, y in pairs)


def table_consistency(rows: Iterable[ClassificationRow]) -> Verdict:
    """Proven when every row fits a table line; Refuted(key, reason) for the first that does not."""
    count = 0
    for row in rows:
        count += 1
        for arrow in MONOID_ARROWS:
            premises = [row.verdicts.get(p) for p in arrow.premises]
            conclusion = row.verdicts.get(arrow.conclusion)
            if (all(v is not None and v.holds is True for v in premises)
                    and conclusion is not None and conclusion.holds is False):
                return Verdict.refuted(row.key, arrow.name, note='implication violated')
        if not any(_matches(row, line) for line in CLASSIFICATION_TABLE):
            return Verdict.refuted(row.key, 'no classification line matches', note=str(row.signature()))
    return Verdict.proven(note=f"{count} rows fit the table")


def classify(spec: MonoidSpec | str, bound: Norm = 8, pair_limit: int = DEFAULT_PAIR_LIMIT,
             element_limit: int = DEFAULT_ELEMENT_LIMIT, node_budget: int = DEFAULT_NODE_BUDGET,
             workers: int = 1) -> ClassificationRow:
    """Profile a monoid and place it in the classification table.

    Raises ClassificationError when the resulting row fits no table line.
    """
    if isinstance(spec, str):
        spec = build(spec)
    m = realize(spec)
    if not m.enumerable and not profile_claims(m):
        raise NotEnumerableError(f"{m.key} is neither enumerable nor described analytically")
    profile = monoid_profile(m, bound, pair_limit, element_limit, node_budget, workers)
    row = ClassificationRow(m.key, bound, dict(profile.verdicts), list(profile.conflicts))
    verdict = table_consistency([row])
    if verdict.holds is False:
        raise ClassificationError(f"{m.key}: {verdict.witness[1]} ({verdict.note})")
    logger.info(f"Classified {m.key}: {row.signature()}")
    return row


# Counting square-free elements


@dataclass
class CountResult:
    """Square-free elements found; ``count`` is None when the set may be infinite."""

    key: str
    members: list[Element]
    exact: bool
    bound: Norm | None = None
    note: str = ''

    @property
    def count(self) -> int | None:
        return len(self.members) if self.exact else None


def squarefree_frontier(m: ShiftedNumerical) -> int:
    """Every element at or above the frontier is 2g + (an element of the carrier)."""
    return 2 * m.min_nonzero + m.threshold


def _shifted_squarefree(m: ShiftedNumerical, limit: int) -> list[int]:
    g = m.min_nonzero
    found = []
    for n in range(limit):
        if not m.in_carrier(n):
            continue
        if not any(m.in_carrier(b) and m.in_carrier(n - 2 * b) for b in range(g, n // 2 + 1)):
            found.append(n)
    return found


def count_squarefree(spec: MonoidSpec | str, bound: Norm = 16) -> CountResult:
    """Square-free elements: exact where the family allows it, within ``bound`` otherwise."""
    if isinstance(spec, str):
        spec = build(spec)
    m = realize(spec)
    if spec.family == 'shifted_numerical':
        frontier = squarefree_frontier(m)
        found = _shifted_squarefree(m, frontier)
        beyond = [n for n in _shifted_squarefree(m, frontier + 2 * m.min_nonzero) if n >= frontier]
        if beyond:
            raise MonoidError(f"{m.key}: square-free elements past the frontier {frontier}: {beyond}")
        return CountResult(m.key, [Element(m.key, n) for n in found], True,
                           note=f"all elements from {frontier} on contain a square")
    if spec.family == 'free_commutative':
        members = [Element(m.key, v) for v in vectors_up_to(m.rank, m.rank) if all(x <= 1 for x in v)]
        return CountResult(m.key, members, True, note='0/1 exponent vectors')
    if spec.family == 'nonneg_rationals':
        ones = [v for v in vectors_up_to(m.rank, m.rank)
                if all(x <= 1 for x in v) and (m.rank == 1 or not all(v))]
        if m.rank == 1:
            ones = [(0,)]
        members = [Element(m.key, tuple(Fraction(x) for x in v)) for v in ones]
        return CountResult(m.key, members, True, note='0/1 vectors with a zero coordinate')
    if not m.enumerable:
        raise NotEnumerableError(f"{m.key} is not enumerable")
    members = [a for a in m.enumerate(bound) if is_squarefree(m, a, bound).holds]
    return CountResult(m.key, members, False, bound, note='count within bound only')


def witness_for_count(n: int) -> MonoidSpec:
    """A reduced cancellative monoid with exactly n square-free elements."""
    if n < 1:
        raise SpecError('n', 'must be at least 1')
    if n == 1:
        return spec_for('free_commutative', rank=0)
    if n == 2:
        return spec_for('shifted_numerical', threshold=0)
    if n == 3:
        # No numerical monoid has exactly three.
        return spec_for('nonneg_rationals', rank=2)
    m = (n + 1) // 2
    return spec_for('shifted_numerical', threshold=n, extras={0, m})


# Sampled uniqueness checks


def uniqueness_sample(m: Monoid, scheme: Scheme, bound: Norm, count: int, seed: int,
                      node_budget: int = DEFAULT_NODE_BUDGET) -> list[tuple[Element, Verdict]]:
    """Uniqueness checks on ``count`` elements drawn reproducibly from those within ``bound``."""
    rng = Lcg(seed)
    elements = [a for a in m.enumerate(bound) if m.is_unit(a).holds is False]
    return [(a, uniqueness_check(m, a, scheme, bound, node_budget))
            for a in rng.sample(elements, count)]


# Search over parameter grids


def default_grid() -> Iterator[MonoidSpec]:
    """Small specs from every enumerable family plus the rationals."""
    yield spec_for('free_commutative', rank=1)
    yield spec_for('free_commutative', rank=2)
    for threshold in range(2, 7):
        yield spec_for('shifted_numerical', threshold=threshold)
        for extra in range(2, threshold):
            try:
                yield spec_for('shifted_numerical', threshold=threshold, extras={0, extra})
            except SpecError:
                continue
    for gens in ([(1, 1), (1, 0)], [(2, 0), (0, 1)], [(2, 0), (3, 0), (0, 1)],
                 [(1, 1), (2, 0), (0, 2)], [(1, 1, 0), (1, 0, 1)], [(1, 1, 0), (0, 0, 1)]):
        yield spec_for('affine', rank=len(gens[0]), gens=gens)
    for p, q in product((1, 2), (1, 2, 3)):
        yield spec_for('ladder', p=p, q=q, level_cap=6)
    yield spec_for('poly_subring', p=2, k=2, l=1, max_degree=3)
    yield spec_for('nonneg_rationals', rank=1)
    yield spec_for('nonneg_rationals', rank=2)


@dataclass
class SearchResult:
    """Distinct classification signatures and the evidence gathered on the way."""

    rows: list[ClassificationRow] = field(default_factory=list)
    groups: dict[tuple, list[str]] = field(default_factory=dict)
    candidates: list[str] = field(default_factory=list)
    agreements: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)


def _accp_evidence(row: ClassificationRow, result: SearchResult):
    # Open question: does ACCP force chain <=> support?
    if row.verdicts['accp'].holds is not True:
        return
    chain = row.verdicts[Scheme.CHAIN.value].holds
    support = row.verdicts[Scheme.SUPPORT.value].holds
    if chain is None or support is None:
        return
    if chain != support:
        logger.warning(f"{row.key}: ACCP with chain={chain} but support={support}")
        result.candidates.append(row.key)
    else:
        result.agreements.append(row.key)


def search(specs: Iterable[MonoidSpec] | None = None, bound: Norm = 8, sample: int | None = None,
           seed: int = 0, workers: int = 1, node_budget: int = DEFAULT_NODE_BUDGET) -> SearchResult:
    """Classify every spec of a grid and group them by signature.

    No claim is made that the groups found cover every class the table allows.
    """
    specs = list(default_grid() if specs is None else specs)
    if sample is not None:
        specs = Lcg(seed).sample(specs, sample)

    def run(spec: MonoidSpec) -> ClassificationRow | str:
        try:
            return classify(spec, bound, node_budget=node_budget)
        except ClassificationError as e:
            return str(e)
        except MonoidError as e:
            return f"{spec.key}: {e}"

    with ThreadPoolExecutor(max_workers=max(workers, 1)) as executor:
        outcomes = list(executor.map(run, specs))

    result = SearchResult()
    for outcome in outcomes:
        if isinstance(outcome, str):
            logger.error(f"Classification failed: {outcome}")
            result.failures.append(outcome)
            continue
        result.rows.append(outcome)
        result.groups.setdefault(outcome.signature(), []).append(outcome.key)
        _accp_evidence(outcome, result)
    logger.info(f"Search over {len(specs)} specs found {len(result.groups)} distinct rows")
    return result
