"""Unit tests for classification, counting and the grid search."""

import pytest

from app.families import monoid_from_text, spec_for
from app.kernel import ClassificationError, SpecError, Verdict
from app.lab import (
    CLASSIFICATION_TABLE,
    ClassificationRow,
    _levels,
    _starred_ok,
    classify,
    count_squarefree,
    default_grid,
    search,
    squarefree_frontier,
    table_consistency,
    uniqueness_sample,
    witness_for_count,
)
from app.predicates import Scheme
from app.profile import ALL_NAMES

P, R, U = Verdict.proven(), Verdict.refuted('x'), Verdict.unknown(8)


def make_row(key='row', **verdicts):
    full = {name: U for name in ALL_NAMES}
    full.update(verdicts)
    return ClassificationRow(key, 8, full)


class TestLevels:
    """Test the three-valued table columns."""

    @pytest.mark.parametrize("top,bottom,expected", [
        (None, None, {0, 1, 2}),
        (P, P, {2}),
        (R, P, {1}),
        (U, R, {0}),
        (U, P, {1, 2}),
        (P, R, set()),
    ])
    def test_levels(self, top, bottom, expected):
        assert _levels(top, bottom) == frozenset(expected)

    @pytest.mark.parametrize("accp_atm,gcd_decomp,expected", [
        (2, 2, True),
        (1, 0, True),
        (0, 1, True),
        (1, 1, False),
        (2, 1, False),
        (1, 2, False),
    ])
    def test_atomic_decomposition_is_factorial(self, accp_atm, gcd_decomp, expected):
        assert _starred_ok(accp_atm, gcd_decomp) is expected

    def test_table_shape(self):
        assert len(CLASSIFICATION_TABLE) == 7
        assert CLASSIFICATION_TABLE[0].cases() == 6
        assert CLASSIFICATION_TABLE[-1].pattern == (False, False, False, False)


class TestTableConsistency:
    """Test rows against the implication arrows and the table lines."""

    def test_factorial_row(self):
        row = make_row(**{name: P for name in ALL_NAMES})
        assert table_consistency([row]).holds is True

    def test_undecided_row_fits(self):
        assert table_consistency([make_row()]).holds is True

    def test_arrow_violation(self):
        row = make_row(factorial=P, bf=R)
        verdict = table_consistency([row])
        assert verdict.holds is False
        assert verdict.witness == ('row', 'factorial => bf')

    def test_no_matching_line(self):
        """Chain fails while the other layered schemes hold, yet gcd holds."""
        row = make_row(product=P, chain=R, graded=P, binary=P, gcd=P)
        verdict = table_consistency([row])
        assert verdict.witness[1] == 'no classification line matches'


class TestClassify:
    """Test classification of concrete monoids."""

    def test_free_monoid(self):
        row = classify("free_commutative rank=2", bound=4)
        assert row.accp_atm == frozenset({2})
        assert row.gcd_decomp == frozenset({2})
        assert set(row.signs().values()) == {'+'}

    def test_numerical_monoid(self):
        row = classify("shifted_numerical threshold=2", bound=8)
        assert row.accp_atm == frozenset({2})
        assert row.gcd_decomp == frozenset({0})

    def test_rationals(self):
        row = classify("nonneg_rationals", bound=4)
        assert row.accp_atm == frozenset({0})
        assert row.gcd_decomp == frozenset({2})
        assert row.signs()[Scheme.PRODUCT.value] == '-'
        assert row.signs()[Scheme.SQUARE.value] == '+'

    def test_inconsistent_row_raises(self, mocker):
        mocker.patch('app.lab.table_consistency',
                     return_value=Verdict.refuted('k', 'factorial => bf', note='implication violated'))
        with pytest.raises(ClassificationError):
            classify("free_commutative rank=1", bound=2)


class TestCounting:
    """Test exact and bounded square-free counts."""

    @pytest.mark.parametrize("n", range(1, 41))
    def test_witness_has_exact_count(self, n):
        result = count_squarefree(witness_for_count(n))
        assert result.exact
        assert result.count == n

    def test_witness_specs(self):
        assert witness_for_count(1).key == "free_commutative rank=0"
        assert witness_for_count(3).family == 'nonneg_rationals'
        assert witness_for_count(4) == spec_for('shifted_numerical', threshold=4, extras={0, 2})

    def test_zero_rejected(self):
        with pytest.raises(SpecError) as exc:
            witness_for_count(0)
        assert exc.value.field == 'n'

    def test_shifted_members(self):
        result = count_squarefree("shifted_numerical threshold=4 extras={0,2}")
        assert [a.payload for a in result.members] == [0, 2, 5, 7]

    def test_frontier(self):
        m = monoid_from_text("shifted_numerical threshold=5 extras={0,3}")
        assert squarefree_frontier(m) == 11
        result = count_squarefree(m.spec)
        assert [a.payload for a in result.members] == [0, 3, 5, 7, 8]

    def test_free_monoid(self):
        assert count_squarefree("free_commutative rank=3").count == 8

    def test_bounded_count_is_not_exact(self):
        result = count_squarefree("affine rank=3 gens=[(1,1,0),(1,0,1)]", bound=4)
        assert not result.exact
        assert result.count is None
        assert [a.payload for a in result.members] == [(0, 0, 0), (1, 0, 1), (1, 1, 0), (2, 1, 1)]


class TestSearch:
    """Test the grid driver."""

    @pytest.fixture
    def specs(self):
        return [spec_for('free_commutative', rank=1), spec_for('shifted_numerical', threshold=2)]

    def test_groups_by_signature(self, specs):
        result = search(specs, bound=6)
        assert len(result.rows) == 2
        assert len(result.groups) == 2
        assert result.failures == []
        assert "free_commutative rank=1" in result.agreements

    def test_sample(self, specs):
        result = search(specs, bound=6, sample=1, seed=3)
        assert len(result.rows) == 1

    def test_default_grid_keys_distinct(self):
        keys = [spec.key for spec in default_grid()]
        assert len(keys) == len(set(keys))
        assert "nonneg_rationals" in keys


class TestUniquenessSample:
    def test_graded_unique_in_free_monoid(self, free3):
        results = uniqueness_sample(free3, Scheme.GRADED, bound=3, count=4, seed=7)
        assert len(results) == 4
        assert all(verdict.holds is True for _, verdict in results)

    def test_reproducible(self, free3):
        first = uniqueness_sample(free3, Scheme.BINARY, bound=3, count=3, seed=11)
        second = uniqueness_sample(free3, Scheme.BINARY, bound=3, count=3, seed=11)
        assert [a for a, _ in first] == [a for a, _ in second]
