"""Unit tests for monoid profiles and implication propagation."""

import pytest

from app.kernel import Verdict
from app.profile import (
    ALL_NAMES,
    MONOID_ARROWS,
    element_diagram_violations,
    monoid_profile,
    propagate,
    sign,
)


class TestPropagate:
    """Test closure of verdicts under the implication arrows."""

    def test_forward_closure(self):
        verdicts = {'factorial': Verdict.proven()}
        assert propagate(verdicts) == []
        for name in ('bf', 'accp', 'atomic', 'product', 'gcd', 'decomposition', 'chain', 'square'):
            assert verdicts[name].holds is True

    def test_contrapositive_chain(self):
        """A refuted conclusion refutes its single open premise, transitively."""
        verdicts = {
            'bf': Verdict.unknown(8),
            'accp': Verdict.unknown(8),
            'atomic': Verdict.refuted('x'),
        }
        propagate(verdicts)
        assert verdicts['accp'].holds is False
        assert verdicts['bf'].holds is False
        assert verdicts['accp'].note == 'by accp => atomic'

    def test_two_premise_contrapositive(self):
        verdicts = {
            'atomic': Verdict.proven(),
            'atoms_are_primes': Verdict.unknown(8),
            'factorial': Verdict.refuted('x'),
        }
        propagate(verdicts)
        assert verdicts['atoms_are_primes'].holds is False

    def test_missing_premise_blocks_contrapositive(self):
        verdicts = {'atomic': Verdict.refuted('x')}
        propagate(verdicts)
        assert 'accp' not in verdicts

    def test_conflict_reported(self):
        verdicts = {'factorial': Verdict.proven(), 'bf': Verdict.refuted('x')}
        conflicts = propagate(verdicts)
        assert 'factorial => bf' in conflicts
        assert verdicts['bf'].holds is False

    def test_arrow_names(self):
        names = [arrow.name for arrow in MONOID_ARROWS]
        assert 'atomic & atoms_are_primes => factorial' in names
        assert 'gcd & binary => graded' in names


class TestSign:
    @pytest.mark.parametrize("verdict,expected", [
        (Verdict.proven(), '+'),
        (Verdict.refuted('x'), '-'),
        (Verdict.found('f'), '+'),
        (Verdict.not_found(8), '+?'),
        (Verdict.unknown(8), '?'),
    ])
    def test_sign(self, verdict, expected):
        assert sign(verdict) == expected


class TestMonoidProfile:
    """Test profiles of small monoids."""

    def test_free_monoid_is_factorial(self, free3):
        profile = monoid_profile(free3, 3)
        assert profile.consistent
        assert set(profile.verdicts) >= set(ALL_NAMES)
        assert all(v.holds is True for v in profile.verdicts.values())

    def test_numerical_monoid(self, nge2):
        """Atomic by the BF claim, neither GCD nor decomposition."""
        profile = monoid_profile(nge2, 10)
        assert profile.consistent
        assert profile.atomic.holds is True
        assert profile.accp.holds is True
        assert profile.gcd.holds is False
        assert profile.decomposition.holds is False
        assert profile['factorial'].holds is False
        assert profile.evaluated == len(nge2.enumerate(10))

    def test_workers_do_not_change_result(self, nge2):
        serial = monoid_profile(nge2, 8)
        parallel = monoid_profile(nge2, 8, workers=4)
        assert {k: sign(v) for k, v in serial.verdicts.items()} == \
            {k: sign(v) for k, v in parallel.verdicts.items()}

    def test_non_enumerable_uses_claims(self, rationals):
        profile = monoid_profile(rationals, 4)
        assert profile.evaluated == 0
        assert profile.atomic.holds is False
        assert profile.consistent


class TestElementDiagram:
    def test_no_violations_in_free_monoid(self, free3):
        assert element_diagram_violations(free3, free3.enumerate(3), 3) == []

    def test_no_violations_in_numerical_monoid(self, nge2):
        assert element_diagram_violations(nge2, nge2.enumerate(8), 8) == []
