"""Submonoids of N^n: membership, atoms, transfer conditions and closure checks.

Every quantified statement below has the shape "if some product of
square-free elements lies in M then certain sub-products lie in M". Over
N^n the square-free elements are the 0/1 vectors, and a product determines
the square-free tuple it came from (binary digits, level sets, exact-value
indicators, support). The tuple spaces are therefore generated from the
members x of M within the product bound, and witnesses are the tuples of
the first failing x in graded-lex order.
"""

import logging
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations

from app.families import AffineMonoid, FreeCommutative, MonoidSpec, build, realize, spec_for
from app.kernel import Element, Norm, SpecError, Verdict, box, vectors_up_to
from app.predicates import is_atom

logger = logging.getLogger(__name__)

Vector = tuple[int, ...]

DEFAULT_ELEMENT_BOUND = 8
DEFAULT_PRODUCT_FACTOR = 3


class TransferProperty(str, Enum):
    """Ways square-freeness can pass from M to the ambient monoid."""

    ATOMS_SQUAREFREE = 'atoms-squarefree'
    SQUAREFREE_PRESERVED = 'squarefree-preserved'
    SQUARE_SPLIT = 'square-split'
    SQUARE_COFACTOR = 'square-cofactor'


class CofactorCondition(str, Enum):
    """Equivalent forms of "a^2 b in M implies a and ab in M"."""

    SQUARE_COFACTOR = 'square-cofactor'
    BINARY_LAYERS = 'binary-layers'
    GRADED_TAILS = 'graded-tails'
    CHAIN_MEMBERS = 'chain-members'
    SUPPORT_SPLIT = 'support-split'


class SquarefreeCondition(str, Enum):
    """Equivalent forms of "square-free elements of M stay square-free"."""

    SQUAREFREE_PRESERVED = 'squarefree-preserved'
    RPR_REFLECTED = 'rpr-reflected'
    ATOMS_RPR = 'atoms-rpr'
    FREE_ON_ATOMS = 'free-on-atoms'
    GRADED_MEMBERS = 'graded-members'
    DIGIT_LAYERS = 'digit-layers'
    BINARY_MEMBERS = 'binary-members'
    SQUARE_SPLIT = 'square-split'


# Vector helpers


def _add(u: Vector, v: Vector) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def _sub(u: Vector, v: Vector) -> Vector:
    return tuple(x - y for x, y in zip(u, v))


def _bit(v: Vector, i: int) -> Vector:
    return tuple((x >> i) & 1 for x in v)


def _shift(v: Vector, i: int) -> Vector:
    return tuple(x >> i for x in v)


def _top_bit(v: Vector) -> int:
    return max(v).bit_length() - 1


def _is_01(v: Vector) -> bool:
    return all(x <= 1 for x in v)


def _disjoint(u: Vector, v: Vector) -> bool:
    return not any(x and y for x, y in zip(u, v))


def binary_layers(v: Vector) -> list[Vector]:
    """s_0, ..., s_n with v = s_0 + 2 s_1 + ... + 2^n s_n."""
    return [_bit(v, i) for i in range(_top_bit(v) + 1)]


def level_sets(v: Vector) -> list[Vector]:
    """Divisor chain s_1 | ... | s_k of 0/1 vectors summing to v (k = max coordinate)."""
    k = max(v)
    return [tuple(int(x >= k + 1 - i) for x in v) for i in range(1, k + 1)]


def graded_parts(v: Vector) -> list[Vector]:
    """Pairwise disjoint s_1, ..., s_k with v = s_1 + 2 s_2 + ... + k s_k."""
    return [tuple(int(x == i) for x in v) for i in range(1, max(v) + 1)]


def support(v: Vector) -> Vector:
    return tuple(int(x > 0) for x in v)


@dataclass
class SubmonoidContext:
    """A finitely generated M inside H = N^n with the bounds its checks run under.

    ``element_bound`` caps the ambient elements quantified over directly;
    ``product_bound`` caps the products formed from quantified tuples.
    Both H and M are reduced, so their unit groups agree.
    """

    ambient: FreeCommutative
    monoid: AffineMonoid
    element_bound: Norm = DEFAULT_ELEMENT_BOUND
    product_bound: Norm = DEFAULT_ELEMENT_BOUND * DEFAULT_PRODUCT_FACTOR
    _members: dict[Norm, list[Vector]] = field(default_factory=dict, repr=False)

    @classmethod
    def from_spec(cls, spec: MonoidSpec | str, element_bound: Norm = DEFAULT_ELEMENT_BOUND,
                  product_bound: Norm | None = None) -> 'SubmonoidContext':
        if isinstance(spec, str):
            spec = build(spec)
        if spec.family != 'affine':
            raise SpecError('family', f"submonoid checks need an affine monoid, got {spec.family}")
        monoid = realize(spec)
        ambient = realize(spec_for('free_commutative', rank=spec.param('rank')))
        if product_bound is None:
            product_bound = element_bound * DEFAULT_PRODUCT_FACTOR
        if product_bound < element_bound:
            raise SpecError('product_bound', 'must be at least the element bound')
        return cls(ambient, monoid, element_bound, product_bound)

    @property
    def rank(self) -> int:
        return self.monoid.rank

    @property
    def key(self) -> str:
        return self.monoid.key

    def contains(self, v: Vector) -> bool:
        return self.monoid.representation(v) is not None

    def element(self, v: Vector) -> Element:
        return Element(self.ambient.key, v)

    def elements(self, vectors: Iterable[Vector]) -> tuple[Element, ...]:
        return tuple(self.element(v) for v in vectors)

    def render(self, v: Vector) -> str:
        return self.ambient.render(self.element(v))

    def members(self, bound: Norm | None = None) -> list[Vector]:
        """Nonzero members of M with norm at most bound, graded-lex sorted."""
        bound = self.product_bound if bound is None else bound
        if bound not in self._members:
            self._members[bound] = [v for v in vectors_up_to(self.rank, bound)
                                    if any(v) and self.contains(v)]
        return self._members[bound]


# Membership and atoms


def membership(ctx: SubmonoidContext, h: Element) -> Verdict:
    """Proven with generator multiplicities when h lies in M."""
    ctx.ambient.check(h)
    verdict = ctx.monoid.membership(h.payload)
    if verdict.holds:
        multiplicities = verdict.witness[0]
        return Verdict.proven(multiplicities, note=ctx.monoid.render_representation(multiplicities))
    return Verdict.refuted(h, note='not a combination of generators')


def _all_atoms(ctx: SubmonoidContext) -> list[Vector]:
    m = ctx.monoid
    found = [g for g in m.gens if is_atom(m, Element(m.key, g)).holds]
    return sorted(set(found), key=lambda v: (sum(v), v))


def atoms_of_M(ctx: SubmonoidContext) -> list[Element]:
    """Atoms of M with norm at most the element bound.

    Atoms of a finitely generated submonoid are among its generators, so
    the set is exact.
    """
    return [Element(ctx.monoid.key, v) for v in _all_atoms(ctx) if sum(v) <= ctx.element_bound]


def free_basis(ctx: SubmonoidContext) -> Verdict:
    """Proven(atoms) when M is free on pairwise coprime square-free atoms.

    Refuted(atom) for a non-square-free atom, Refuted(a, b) for two atoms
    sharing a coordinate.
    """
    atoms = _all_atoms(ctx)
    for a in atoms:
        if not _is_01(a):
            return Verdict.refuted(ctx.element(a), note='atom is not square-free in H')
    for a, b in combinations(atoms, 2):
        if not _disjoint(a, b):
            return Verdict.refuted(*ctx.elements((a, b)), note='atoms are not coprime in H')
    return Verdict.proven(*ctx.elements(atoms))


# Bounded checks over members of M


Derivation = Callable[[Vector], tuple[list[Vector], list[Vector]]]


def _scan(ctx: SubmonoidContext, derive: Derivation) -> Verdict:
    """Run a "tuple in M implies conclusions in M" check over every member of M.

    ``derive`` maps a member x to (the tuple x decomposes into, the
    conclusions that must lie in M).
    """
    for x in ctx.members():
        witness, conclusions = derive(x)
        for c in conclusions:
            if not ctx.contains(c):
                logger.debug(f"{ctx.key}: {ctx.render(x)} fails at {ctx.render(c)}")
                return Verdict.refuted(*ctx.elements(witness), bound=ctx.product_bound,
                                       note=f"{ctx.render(c)} is not in M")
    return Verdict.not_found(ctx.product_bound, note=f"checked {len(ctx.members())} members of M")


def _square_cofactor(x: Vector) -> tuple[list[Vector], list[Vector]]:
    a, b = _shift(x, 1), _bit(x, 0)
    return [a, b], [a, _add(a, b)]


def _square_split(x: Vector) -> tuple[list[Vector], list[Vector]]:
    a, b = _shift(x, 1), _bit(x, 0)
    return [a, b], [a, b]


def _binary_layers(x: Vector) -> tuple[list[Vector], list[Vector]]:
    layers = binary_layers(x)
    n = len(layers) - 1
    conclusions = [_add(layers[i], _shift(x, i + 1)) for i in range(n)]
    return layers, conclusions + [layers[n]]


def _graded_tails(x: Vector) -> tuple[list[Vector], list[Vector]]:
    parts = graded_parts(x)
    tails: list[Vector] = []
    acc = (0,) * len(x)
    for s in reversed(parts):
        acc = _add(acc, s)
        tails.append(acc)
    return parts, tails


def _chain_members(x: Vector) -> tuple[list[Vector], list[Vector]]:
    chain = level_sets(x)
    return chain, chain


def _support_split(x: Vector) -> tuple[list[Vector], list[Vector]]:
    b = support(x)
    a = _sub(x, b)
    return [a, b], [a, b]


def _graded_members(x: Vector) -> tuple[list[Vector], list[Vector]]:
    parts = graded_parts(x)
    return parts, [s for s in parts if any(s)]


def _digit_layers(x: Vector) -> tuple[list[Vector], list[Vector]]:
    layers = binary_layers(x)
    return layers, [s for s in layers if any(s)]


def _squarefree_in_M(ctx: SubmonoidContext, x: Vector) -> Vector | None:
    """None when x is square-free in M, otherwise a nonzero c in M with x - 2c in M."""
    for c in box(_shift(x, 1)):
        if any(c) and ctx.contains(c) and ctx.contains(_sub(x, _add(c, c))):
            return c
    return None


def _squarefree_preserved(ctx: SubmonoidContext) -> Verdict:
    members = ctx.members()
    for x in members:
        if _is_01(x):
            continue
        if _squarefree_in_M(ctx, x) is None:
            return Verdict.refuted(ctx.element(x), bound=ctx.product_bound,
                                   note='square-free in M but not in H')
    if free_basis(ctx).holds is False:
        logger.warning(f"{ctx.key}: no square-free violation up to {ctx.product_bound} "
                       f"but the atoms are not a coprime square-free basis")
    return Verdict.proven(bound=ctx.product_bound, note=f"checked {len(members)} members of M")


def _atoms_squarefree(ctx: SubmonoidContext) -> Verdict:
    for a in _all_atoms(ctx):
        if not _is_01(a):
            return Verdict.refuted(ctx.element(a), note='atom is not square-free in H')
    return Verdict.proven(bound=ctx.element_bound, note='all atoms of M are square-free in H')


def _common_divisor_in_M(ctx: SubmonoidContext, a: Vector, b: Vector) -> Vector | None:
    """A nonzero c in M dividing both a and b in M, or None when a rpr_M b."""
    for c in box(tuple(min(x, y) for x, y in zip(a, b))):
        if any(c) and ctx.contains(c) and ctx.contains(_sub(a, c)) and ctx.contains(_sub(b, c)):
            return c
    return None


def _rpr_reflected(ctx: SubmonoidContext) -> Verdict:
    """Atoms square-free in H, and members coprime in M stay coprime in H.

    Refuted(a, b, e_i) names a pair coprime in M that shares the
    coordinate e_i in H.
    """
    atoms = _atoms_squarefree(ctx)
    if atoms.holds is False:
        return atoms
    members = ctx.members(ctx.element_bound)
    for a, b in combinations(members, 2):
        shared = next((i for i, (x, y) in enumerate(zip(a, b)) if x and y), None)
        if shared is None or _common_divisor_in_M(ctx, a, b) is not None:
            continue
        e = tuple(int(i == shared) for i in range(ctx.rank))
        return Verdict.refuted(*ctx.elements((a, b, e)), bound=ctx.element_bound,
                               note=f"coprime in M, both divisible by {ctx.render(e)} in H")
    return Verdict.not_found(ctx.element_bound, note=f"checked {len(members)} members pairwise")


def _atoms_rpr(ctx: SubmonoidContext) -> Verdict:
    verdict = free_basis(ctx)
    if verdict.holds is False:
        return verdict
    return Verdict.proven(bound=ctx.element_bound, note='distinct atoms are coprime in H')


def _free_on_atoms(ctx: SubmonoidContext) -> Verdict:
    verdict = free_basis(ctx)
    if verdict.holds is False:
        return verdict
    atoms = [a.payload for a in verdict.witness]
    covered = [any(a[i] for a in atoms) for i in range(ctx.rank)]
    for v in vectors_up_to(ctx.rank, ctx.element_bound):
        # F(B): constant on each atom's support, zero elsewhere
        constant = all(len({x for x, y in zip(v, a) if y}) == 1 for a in atoms)
        outside = all(x == 0 for x, c in zip(v, covered) if not c)
        if ctx.contains(v) != (constant and outside):
            return Verdict.refuted(ctx.element(v), note='membership differs from the free monoid on the atoms')
    return Verdict.proven(*verdict.witness, bound=ctx.element_bound)


_COFACTOR_CHECKS: dict[CofactorCondition, Callable[[SubmonoidContext], Verdict]] = {
    CofactorCondition.SQUARE_COFACTOR: lambda ctx: _scan(ctx, _square_cofactor),
    CofactorCondition.BINARY_LAYERS: lambda ctx: _scan(ctx, _binary_layers),
    CofactorCondition.GRADED_TAILS: lambda ctx: _scan(ctx, _graded_tails),
    CofactorCondition.CHAIN_MEMBERS: lambda ctx: _scan(ctx, _chain_members),
    CofactorCondition.SUPPORT_SPLIT: lambda ctx: _scan(ctx, _support_split),
}

_SQUAREFREE_CHECKS: dict[SquarefreeCondition, Callable[[SubmonoidContext], Verdict]] = {
    SquarefreeCondition.SQUAREFREE_PRESERVED: _squarefree_preserved,
    SquarefreeCondition.RPR_REFLECTED: _rpr_reflected,
    SquarefreeCondition.ATOMS_RPR: _atoms_rpr,
    SquarefreeCondition.FREE_ON_ATOMS: _free_on_atoms,
    SquarefreeCondition.GRADED_MEMBERS: lambda ctx: _scan(ctx, _graded_members),
    SquarefreeCondition.DIGIT_LAYERS: lambda ctx: _scan(ctx, _digit_layers),
    SquarefreeCondition.BINARY_MEMBERS: lambda ctx: _scan(ctx, _digit_layers),
    SquarefreeCondition.SQUARE_SPLIT: lambda ctx: _scan(ctx, _square_split),
}

_TRANSFER_CHECKS: dict[TransferProperty, Callable[[SubmonoidContext], Verdict]] = {
    TransferProperty.ATOMS_SQUAREFREE: _atoms_squarefree,
    TransferProperty.SQUAREFREE_PRESERVED: _squarefree_preserved,
    TransferProperty.SQUARE_SPLIT: _SQUAREFREE_CHECKS[SquarefreeCondition.SQUARE_SPLIT],
    TransferProperty.SQUARE_COFACTOR: _COFACTOR_CHECKS[CofactorCondition.SQUARE_COFACTOR],
}


def check_transfer(ctx: SubmonoidContext, prop: TransferProperty | str) -> Verdict:
    prop = TransferProperty(prop)
    verdict = _TRANSFER_CHECKS[prop](ctx)
    logger.info(f"{ctx.key}: {prop.value} -> {verdict.label()}")
    return verdict


def cofactor_condition(ctx: SubmonoidContext, cond: CofactorCondition | str) -> Verdict:
    return _COFACTOR_CHECKS[CofactorCondition(cond)](ctx)


def squarefree_condition(ctx: SubmonoidContext, cond: SquarefreeCondition | str) -> Verdict:
    return _SQUAREFREE_CHECKS[SquarefreeCondition(cond)](ctx)


# Suites


@dataclass
class SuiteReport:
    """Verdicts of a family of conditions that hold all together or not at all."""

    name: str
    key: str
    verdicts: dict[str, Verdict]
    consequences: dict[str, Verdict] = field(default_factory=dict)

    @property
    def refuted(self) -> list[str]:
        return [name for name, v in self.verdicts.items() if v.holds is False]

    @property
    def consistent(self) -> bool:
        """All refuted or none refuted."""
        refuted = len(self.refuted)
        return refuted in (0, len(self.verdicts))

    @property
    def holds(self) -> bool | None:
        if not self.consistent:
            return None
        return not self.refuted


def _run_suite(ctx: SubmonoidContext, name: str,
               checks: dict, workers: int) -> SuiteReport:
    with ThreadPoolExecutor(max_workers=max(workers, 1)) as executor:
        futures = {cond.value: executor.submit(check, ctx) for cond, check in checks.items()}
        verdicts = {cond: future.result() for cond, future in futures.items()}
    report = SuiteReport(name, ctx.key, verdicts)
    if not report.consistent:
        logger.error(f"{ctx.key}: {name} conditions disagree, refuted: {', '.join(report.refuted)}")
    return report


def cofactor_report(ctx: SubmonoidContext, workers: int = 1) -> SuiteReport:
    """All five cofactor conditions; a clean square-cofactor run also forces square-free atoms."""
    report = _run_suite(ctx, 'cofactor', _COFACTOR_CHECKS, workers)
    square_cofactor = report.verdicts[CofactorCondition.SQUARE_COFACTOR.value]
    atoms = _atoms_squarefree(ctx)
    report.consequences[TransferProperty.ATOMS_SQUAREFREE.value] = atoms
    if square_cofactor.holds is not False and atoms.holds is False:
        logger.error(f"{ctx.key}: square-cofactor passes but an atom is not square-free")
        report.consequences['atoms-follow'] = Verdict.refuted(*atoms.witness)
    else:
        report.consequences['atoms-follow'] = Verdict.proven()
    return report


def squarefree_report(ctx: SubmonoidContext, workers: int = 1) -> SuiteReport:
    report = _run_suite(ctx, 'squarefree', _SQUAREFREE_CHECKS, workers)
    preserved = report.verdicts[SquarefreeCondition.SQUAREFREE_PRESERVED.value]
    atoms = _atoms_squarefree(ctx)
    report.consequences[TransferProperty.ATOMS_SQUAREFREE.value] = atoms
    if preserved.holds is not False and atoms.holds is False:
        logger.error(f"{ctx.key}: square-free elements preserved but an atom is not square-free")
        report.consequences['atoms-follow'] = Verdict.refuted(*atoms.witness)
    else:
        report.consequences['atoms-follow'] = Verdict.proven()
    return report


# Closures


def _root_closed(ctx: SubmonoidContext) -> Verdict:
    for a in vectors_up_to(ctx.rank, ctx.element_bound):
        if not any(a) or ctx.contains(a):
            continue
        for n in range(2, ctx.product_bound // sum(a) + 1):
            if ctx.contains(tuple(n * x for x in a)):
                return Verdict.refuted(ctx.element(a), n, bound=ctx.element_bound)
    return Verdict.not_found(ctx.element_bound)


def _quotient_closed(ctx: SubmonoidContext) -> Verdict:
    members = ctx.members()
    for h in vectors_up_to(ctx.rank, ctx.element_bound):
        if ctx.contains(h):
            continue
        for m2 in members:
            if sum(m2) + sum(h) > ctx.product_bound:
                break
            m1 = _add(m2, h)
            if ctx.contains(m1):
                return Verdict.refuted(*ctx.elements((h, m1, m2)), bound=ctx.product_bound,
                                       note=f"{ctx.render(h)} = {ctx.render(m1)} - {ctx.render(m2)}")
    return Verdict.not_found(ctx.product_bound)


def _divisor_closed(ctx: SubmonoidContext) -> Verdict:
    for x in ctx.members():
        for a in box(x):
            if not ctx.contains(a):
                return Verdict.refuted(*ctx.elements((a, _sub(x, a))), bound=ctx.product_bound)
    return Verdict.not_found(ctx.product_bound)


def _divisor_closed_squarefree(ctx: SubmonoidContext) -> Verdict:
    for x in ctx.members():
        for s in box(support(x)):
            if any(s) and not ctx.contains(s):
                rest = level_sets(_sub(x, s)) if any(_sub(x, s)) else []
                return Verdict.refuted(*ctx.elements([s] + rest), bound=ctx.product_bound)
    return Verdict.not_found(ctx.product_bound)


def closure_checks(ctx: SubmonoidContext) -> dict[str, Verdict]:
    """Root, quotient and divisor closedness; the two divisor forms must agree."""
    report = {
        'root_closed': _root_closed(ctx),
        'quotient_closed': _quotient_closed(ctx),
        'divisor_closed': _divisor_closed(ctx),
        'divisor_closed_squarefree': _divisor_closed_squarefree(ctx),
    }
    if report['divisor_closed'].holds != report['divisor_closed_squarefree'].holds:
        logger.error(f"{ctx.key}: the two divisor-closed forms disagree")
    return report
