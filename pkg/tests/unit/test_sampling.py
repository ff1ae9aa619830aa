"""Unit tests for seeded sampling."""

import pytest

from app.sampling import MASK, Lcg


class TestLcg:
    """Test the generator's reproducibility."""

    @pytest.mark.parametrize("seed,first", [(0, 335903614), (1, 1817669548)])
    def test_first_output(self, seed, first):
        """The first draw is fixed by the multiplier and increment."""
        assert Lcg(seed).next_u32() == first

    def test_same_seed_same_sequence(self):
        a, b = Lcg(99), Lcg(99)
        assert [a.next_u32() for _ in range(20)] == [b.next_u32() for _ in range(20)]

    def test_seed_reduced_to_64_bits(self):
        assert Lcg(-1).state == MASK
        assert Lcg(1 << 64).state == 0

    @pytest.mark.parametrize("n", [0, -3])
    def test_below_empty_range(self, n):
        with pytest.raises(ValueError):
            Lcg(1).below(n)

    def test_below_in_range(self):
        rng = Lcg(5)
        assert all(0 <= rng.below(7) < 7 for _ in range(100))

    def test_choice(self):
        items = ['a', 'b', 'c']
        assert Lcg(3).choice(items) in items


class TestSample:
    """Test sampling without replacement."""

    def test_distinct(self):
        drawn = Lcg(11).sample(range(10), 4)
        assert len(drawn) == 4
        assert len(set(drawn)) == 4

    def test_oversized_sample_is_a_permutation(self):
        drawn = Lcg(11).sample([1, 2, 3], 10)
        assert sorted(drawn) == [1, 2, 3]

    def test_input_untouched(self):
        items = [1, 2, 3, 4]
        Lcg(2).sample(items, 2)
        assert items == [1, 2, 3, 4]
