"""Unit tests for submonoids of N^n."""

import pytest

from app.kernel import SpecError
from app.submonoid import (
    CofactorCondition,
    SquarefreeCondition,
    SubmonoidContext,
    TransferProperty,
    atoms_of_M,
    binary_layers,
    check_transfer,
    closure_checks,
    cofactor_condition,
    cofactor_report,
    free_basis,
    graded_parts,
    level_sets,
    membership,
    squarefree_condition,
    squarefree_report,
    support,
)


def payloads(elements):
    return [e.payload for e in elements]


@pytest.fixture
def diagonal_ctx():
    """M = <(1,1,0), (0,0,1)>, free on coprime square-free atoms."""
    return SubmonoidContext.from_spec("affine rank=3 gens=[(1,1,0),(0,0,1)]", element_bound=5)


@pytest.fixture
def doubled_ctx():
    """M = <(2,0), (0,1)>, with an atom that is a square in N^2."""
    return SubmonoidContext.from_spec("affine rank=2 gens=[(2,0),(0,1)]", element_bound=6)


class TestVectorDecompositions:
    """Test the square-free tuples a vector of N^n determines."""

    def test_binary_layers(self):
        assert binary_layers((3, 1, 2)) == [(1, 1, 0), (1, 0, 1)]

    def test_level_sets(self):
        assert level_sets((3, 1, 2)) == [(1, 0, 0), (1, 0, 1), (1, 1, 1)]

    def test_graded_parts(self):
        assert graded_parts((3, 1, 2)) == [(0, 1, 0), (0, 0, 1), (1, 0, 0)]

    def test_support(self):
        assert support((3, 0, 2)) == (1, 0, 1)


class TestContext:
    """Test context construction and membership."""

    def test_non_affine_rejected(self):
        with pytest.raises(SpecError) as exc:
            SubmonoidContext.from_spec("free_commutative rank=2")
        assert exc.value.field == 'family'

    def test_product_bound_below_element_bound(self):
        with pytest.raises(SpecError) as exc:
            SubmonoidContext.from_spec("affine rank=1 gens=[(1)]", element_bound=4, product_bound=2)
        assert exc.value.field == 'product_bound'

    def test_default_product_bound(self):
        ctx = SubmonoidContext.from_spec("affine rank=1 gens=[(2),(3)]", element_bound=4)
        assert ctx.product_bound == 12

    def test_members_sorted_graded_lex(self, ex42_ctx):
        assert ex42_ctx.members(4) == [(1, 0, 1), (1, 1, 0), (2, 0, 2), (2, 1, 1), (2, 2, 0)]

    def test_membership(self, ex42_ctx):
        verdict = membership(ex42_ctx, ex42_ctx.element((2, 1, 1)))
        assert verdict.holds is True
        assert verdict.note == "1·(1,1,0)+1·(1,0,1)"
        assert membership(ex42_ctx, ex42_ctx.element((1, 0, 0))).holds is False

    def test_atoms(self, ex42_ctx):
        assert payloads(atoms_of_M(ex42_ctx)) == [(1, 0, 1), (1, 1, 0)]

    def test_redundant_generator_is_not_an_atom(self):
        ctx = SubmonoidContext.from_spec("affine rank=1 gens=[(2),(3),(4)]")
        assert payloads(atoms_of_M(ctx)) == [(2,), (3,)]


class TestOverlappingAtoms:
    """M = <(1,1,0), (1,0,1)>: square-free atoms that share a coordinate."""

    def test_atoms_squarefree(self, ex42_ctx):
        assert check_transfer(ex42_ctx, TransferProperty.ATOMS_SQUAREFREE).holds is True

    def test_square_cofactor_witness(self, ex42_ctx):
        """(2,1,1) = 2·(1,0,0) + (0,1,1) lies in M but (1,0,0) does not."""
        verdict = check_transfer(ex42_ctx, 'square-cofactor')
        assert verdict.holds is False
        assert payloads(verdict.witness) == [(1, 0, 0), (0, 1, 1)]
        assert verdict.note == "(1,0,0) is not in M"

    def test_squarefree_not_preserved(self, ex42_ctx):
        verdict = check_transfer(ex42_ctx, TransferProperty.SQUAREFREE_PRESERVED)
        assert payloads(verdict.witness) == [(2, 1, 1)]

    def test_atoms_not_coprime(self, ex42_ctx):
        verdict = free_basis(ex42_ctx)
        assert verdict.holds is False
        assert payloads(verdict.witness) == [(1, 0, 1), (1, 1, 0)]

    @pytest.mark.parametrize("cond", list(CofactorCondition))
    def test_every_cofactor_condition_fails(self, ex42_ctx, cond):
        assert cofactor_condition(ex42_ctx, cond).holds is False

    @pytest.mark.parametrize("cond", list(SquarefreeCondition))
    def test_every_squarefree_condition_fails(self, ex42_ctx, cond):
        assert squarefree_condition(ex42_ctx, cond).holds is False

    def test_suites_consistent(self, ex42_ctx):
        cofactor = cofactor_report(ex42_ctx)
        squarefree = squarefree_report(ex42_ctx, workers=3)
        assert cofactor.consistent and cofactor.holds is False
        assert squarefree.consistent and squarefree.holds is False
        assert cofactor.consequences['atoms-follow'].holds is True

    def test_closures(self, ex42_ctx):
        """M is cut out by x_1 = x_2 + x_3: root and quotient closed, not divisor closed."""
        report = closure_checks(ex42_ctx)
        assert report['root_closed'].holds is not False
        assert report['quotient_closed'].holds is not False
        assert payloads(report['divisor_closed'].witness) == [(0, 0, 1), (1, 0, 0)]
        assert payloads(report['divisor_closed_squarefree'].witness) == [(0, 0, 1), (1, 0, 0)]


class TestCoprimeAtoms:
    """M = <(1,1,0), (0,0,1)>: every condition holds."""

    def test_free_basis(self, diagonal_ctx):
        verdict = free_basis(diagonal_ctx)
        assert payloads(verdict.witness) == [(0, 0, 1), (1, 1, 0)]

    def test_suites_hold(self, diagonal_ctx):
        assert cofactor_report(diagonal_ctx).holds is True
        assert squarefree_report(diagonal_ctx).holds is True

    def test_preserved_is_proven(self, diagonal_ctx):
        verdict = check_transfer(diagonal_ctx, TransferProperty.SQUAREFREE_PRESERVED)
        assert verdict.holds is True

    def test_free_on_atoms(self, diagonal_ctx):
        assert squarefree_condition(diagonal_ctx, SquarefreeCondition.FREE_ON_ATOMS).holds is True


class TestNonSquarefreeAtom:
    """M = <(2,0), (0,1)>."""

    def test_atom_witness(self, doubled_ctx):
        verdict = check_transfer(doubled_ctx, TransferProperty.ATOMS_SQUAREFREE)
        assert payloads(verdict.witness) == [(2, 0)]

    def test_square_cofactor(self, doubled_ctx):
        verdict = check_transfer(doubled_ctx, TransferProperty.SQUARE_COFACTOR)
        assert payloads(verdict.witness) == [(1, 0), (0, 0)]

    def test_root_closed_refuted(self, doubled_ctx):
        verdict = closure_checks(doubled_ctx)['root_closed']
        assert verdict.holds is False
        assert verdict.witness[1] == 2

    def test_whole_orthant_is_divisor_closed(self):
        ctx = SubmonoidContext.from_spec("affine rank=2 gens=[(1,0),(0,1)]", element_bound=4)
        report = closure_checks(ctx)
        assert report['divisor_closed'].holds is None
        assert report['divisor_closed_squarefree'].holds is None


class TestRprReflected:
    """M = <(1,1), (0,1)>: square-free atoms sharing the second coordinate."""

    @pytest.fixture
    def staircase_ctx(self):
        return SubmonoidContext.from_spec("affine rank=2 gens=[(1,1),(0,1)]", element_bound=4)

    def test_pair_coprime_in_M_only(self, staircase_ctx):
        """(0,1) and (1,1) have no common divisor in M but share (0,1) in H."""
        verdict = squarefree_condition(staircase_ctx, SquarefreeCondition.RPR_REFLECTED)
        assert verdict.holds is False
        assert payloads(verdict.witness) == [(0, 1), (1, 1), (0, 1)]
        assert verdict.note == "coprime in M, both divisible by (0,1) in H"

    def test_differs_from_atom_condition(self, staircase_ctx):
        rpr = squarefree_condition(staircase_ctx, SquarefreeCondition.RPR_REFLECTED)
        atoms = squarefree_condition(staircase_ctx, SquarefreeCondition.ATOMS_RPR)
        assert atoms.holds is False
        assert payloads(atoms.witness) == [(0, 1), (1, 1)]
        assert rpr.witness != atoms.witness

    def test_non_squarefree_atom_comes_first(self, doubled_ctx):
        verdict = squarefree_condition(doubled_ctx, SquarefreeCondition.RPR_REFLECTED)
        assert payloads(verdict.witness) == [(2, 0)]

    def test_no_violation_when_free(self, diagonal_ctx):
        verdict = squarefree_condition(diagonal_ctx, SquarefreeCondition.RPR_REFLECTED)
        assert verdict.holds is None
        assert not verdict.witness

    def test_squarefree_preserved_from_scan(self, staircase_ctx):
        """(1,2) is square-free in M although (0,1)^2 divides it in H."""
        verdict = check_transfer(staircase_ctx, TransferProperty.SQUAREFREE_PRESERVED)
        assert payloads(verdict.witness) == [(1, 2)]

    def test_suites(self, staircase_ctx):
        assert cofactor_report(staircase_ctx).holds is True
        squarefree = squarefree_report(staircase_ctx)
        assert squarefree.consistent and squarefree.holds is False


GRID = [
    # free on coprime square-free atoms
    "affine rank=2 gens=[(1,0),(0,1)]",
    "affine rank=2 gens=[(1,1)]",
    "affine rank=2 gens=[(1,0)]",
    "affine rank=2 gens=[(2,2),(1,1)]",
    "affine rank=3 gens=[(1,1,0),(0,0,1)]",
    "affine rank=3 gens=[(1,1,1)]",
    "affine rank=3 gens=[(1,0,0),(0,1,1)]",
    "affine rank=3 gens=[(1,0,0),(0,1,0),(0,0,1)]",
    "affine rank=3 gens=[(2,2,2),(1,1,1)]",
    # an atom that is not square-free in H
    "affine rank=2 gens=[(2,0),(0,1)]",
    "affine rank=2 gens=[(2,0),(3,0)]",
    "affine rank=2 gens=[(1,2)]",
    "affine rank=2 gens=[(2,1),(1,2)]",
    "affine rank=2 gens=[(3,3)]",
    "affine rank=2 gens=[(1,0),(0,2),(0,3)]",
    "affine rank=3 gens=[(2,1,0),(0,0,1)]",
    "affine rank=3 gens=[(1,1,2)]",
    "affine rank=3 gens=[(3,0,0),(0,2,0),(0,0,1)]",
    "affine rank=3 gens=[(1,2,3)]",
    # square-free atoms sharing a coordinate
    "affine rank=2 gens=[(1,1),(0,1)]",
    "affine rank=2 gens=[(1,1),(1,0)]",
    "affine rank=3 gens=[(1,1,0),(1,0,1)]",
    "affine rank=3 gens=[(1,1,0),(0,1,1)]",
]


@pytest.mark.slow
class TestConditionGrid:
    """Both suites agree with themselves on small submonoids of N^2 and N^3."""

    @pytest.fixture(params=GRID)
    def ctx(self, request):
        return SubmonoidContext.from_spec(request.param, element_bound=6, product_bound=18)

    def test_cofactor_suite_consistent(self, ctx):
        assert cofactor_report(ctx).consistent

    def test_squarefree_suite_consistent(self, ctx):
        report = squarefree_report(ctx)
        assert report.consistent
        assert report.holds == free_basis(ctx).holds
