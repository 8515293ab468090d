"""Tests for allocation-space enumeration."""

import itertools
from math import comb

import pytest

from llcalloc.allocator.space import enumerate_allocations, space_size
from llcalloc.errors import InfeasibleError


def _stars_and_bars(n_llc, n_vbs):
    """Compositions from bar positions, an independent construction."""
    result = []
    for bars in itertools.combinations(range(1, n_llc), n_vbs - 1):
        edges = (0,) + bars + (n_llc,)
        result.append(tuple(b - a for a, b in zip(edges, edges[1:])))
    return sorted(result)


class TestEnumerateAllocations:
    """Compositions of N_LLC into N_vBS positive parts."""

    def test_default_scenario(self):
        assert len(enumerate_allocations(12, 5)) == 330

    def test_eight_way_scenario(self):
        assert len(enumerate_allocations(8, 5)) == 35

    def test_forced_minimum(self):
        space = enumerate_allocations(3, 3)
        assert [a.ways for a in space.allocations] == [(1, 1, 1)]

    def test_single_vbs(self):
        space = enumerate_allocations(7, 1)
        assert [a.ways for a in space.allocations] == [(7,)]

    def test_counts_match_binomial(self):
        for n_llc in range(1, 15):
            for n_vbs in range(1, n_llc + 1):
                space = enumerate_allocations(n_llc, n_vbs)
                assert len(space) == comb(n_llc - 1, n_vbs - 1) == space_size(n_llc, n_vbs)

    def test_matches_independent_construction(self):
        for n_llc in range(1, 15):
            for n_vbs in range(1, min(n_llc, 6) + 1):
                space = enumerate_allocations(n_llc, n_vbs)
                assert [a.ways for a in space.allocations] == _stars_and_bars(n_llc, n_vbs)

    def test_matches_nested_loops(self):
        for n_llc in range(1, 9):
            for n_vbs in range(1, min(n_llc, 4) + 1):
                brute = [
                    ways for ways in itertools.product(range(1, n_llc + 1), repeat=n_vbs)
                    if sum(ways) == n_llc
                ]
                space = enumerate_allocations(n_llc, n_vbs)
                assert [a.ways for a in space.allocations] == brute

    def test_strictly_increasing_and_indexed(self):
        space = enumerate_allocations(12, 5)
        ways = [a.ways for a in space.allocations]
        assert all(a < b for a, b in zip(ways, ways[1:]))
        for position, allocation in enumerate(space.allocations):
            assert space.index(allocation) == position
            assert space[position] == allocation
        assert space.ways_table.shape == (330, 5)

    def test_every_allocation_is_full(self):
        for allocation in enumerate_allocations(8, 5).allocations:
            assert sum(allocation.ways) == 8
            assert min(allocation.ways) >= 1

    def test_infeasible(self):
        with pytest.raises(InfeasibleError):
            enumerate_allocations(4, 5)
