"""Affine cubes: vertex generation, notions, search, oracle, f_N(n, c)."""

import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridcubes.cubes import (
    AffineCube,
    CubeNotion,
    SearchBudgetExceeded,
    cube_vertices,
    extend_cube,
    f_exhaustive,
    find_cube,
    is_cube_in,
    m_value,
    m_value_oracle,
    m_value_oracle_all,
)
from gridcubes.grid import GridParams, PointSet

VI = CubeNotion.VERTEX_INJECTIVE
IND = CubeNotion.INDEPENDENT_GENERATORS
UNI = CubeNotion.UNIMODULAR


def pset(N, n, pts):
    return PointSet(GridParams(N, n), pts)


def seg_set():
    return pset(5, 1, [(0,), (1,), (2,), (3,)])


class TestCubeVertices:
    def test_unit_square(self):
        cube = AffineCube((0, 0), ((1, 0), (0, 1)))
        assert cube_vertices(cube) == [(0, 0), (0, 1), (1, 0), (1, 1)]

    def test_point_cube(self):
        assert cube_vertices(AffineCube((0,))) == [(0,)]

    def test_one_dim_generators(self):
        assert cube_vertices(AffineCube((0,), ((1,), (2,)))) == [(0,), (1,), (2,), (3,)]

    def test_collision_shrinks_set(self):
        cube = AffineCube((0,), ((1,), (1,)))
        assert len(cube_vertices(cube)) == 3  # not vertex-injective
        assert not cube.is_vertex_injective()

    def test_dimension_overflow(self):
        cube = AffineCube((0,) * 31, tuple(tuple(1 if i == j else 0 for j in range(31)) for i in range(31)))
        with pytest.raises(ValueError):
            cube_vertices(cube)


class TestValidation:
    def test_generator_length_must_match_base(self):
        with pytest.raises(ValueError):
            AffineCube((0, 0), ((1,),))

    def test_notion_parsing(self):
        assert CubeNotion.from_string("unimodular") is UNI
        assert CubeNotion.from_string("UNIMODULAR") is UNI
        assert CubeNotion.from_string("independent-generators") is IND
        with pytest.raises(ValueError):
            CubeNotion.from_string("nope")


class TestNotions:
    def test_nesting_definitions(self):
        cube = AffineCube((0,), ((1,), (2,)))
        assert cube.satisfies(VI)
        assert not cube.satisfies(IND)  # two generators in one dimension
        assert not cube.satisfies(UNI)
        unit = AffineCube((0, 0), ((1, 0), (0, 1)))
        assert unit.satisfies(UNI)
        doubled = AffineCube((0, 0), ((2, 0), (0, 2)))
        assert doubled.satisfies(IND) and not doubled.satisfies(UNI)


class TestCanonical:
    def test_flip_moves_base(self):
        cube = AffineCube((1, 0), ((-1, 0), (0, 1)))
        canon = cube.canonical()
        assert canon == AffineCube((0, 0), ((0, 1), (1, 0)))
        assert sorted(cube_vertices(cube)) == sorted(cube_vertices(canon))

    @settings(max_examples=80, deadline=None)
    @given(st.data())
    def test_idempotent_and_vertex_preserving(self, data):
        n = data.draw(st.integers(1, 3))
        m = data.draw(st.integers(0, 3))
        base = tuple(data.draw(st.integers(-3, 3)) for _ in range(n))
        gens = tuple(
            tuple(data.draw(st.integers(-2, 2)) for _ in range(n)) for _ in range(m)
        )
        cube = AffineCube(base, gens)
        canon = cube.canonical()
        assert canon.canonical() == canon
        assert sorted(cube.vertices()) == sorted(canon.vertices())

    def test_canonical_line_stable(self):
        cube = AffineCube((0, 0), ((1, 0), (0, 1)))
        assert cube.canonical_line(IND) == "independent-generators m=2 base=(0,0) gens=[0,1;1,0]"


class TestIsCubeIn:
    def test_unit_square_in_full(self):
        s = PointSet.full(GridParams(2, 2))
        cube = AffineCube((0, 0), ((1, 0), (0, 1)))
        for notion in CubeNotion:
            assert is_cube_in(s, cube, notion)

    def test_notion_gate(self):
        cube = AffineCube((0,), ((1,), (2,)))
        assert is_cube_in(seg_set(), cube, VI)
        assert not is_cube_in(seg_set(), cube, IND)

    def test_vertex_outside(self):
        s = pset(2, 2, [(0, 0), (1, 0)])
        assert not is_cube_in(s, AffineCube((0, 0), ((0, 1),)), VI)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            is_cube_in(seg_set(), AffineCube((0, 0)), VI)


class TestFindCube:
    def test_full_square(self):
        w = find_cube(PointSet.full(GridParams(2, 2)), 2, IND)
        assert w == AffineCube((0, 0), ((0, 1), (1, 0)))
        assert w.canonical() == w

    def test_single_point_has_no_segment(self):
        assert find_cube(pset(2, 2, [(1, 1)]), 1, VI) is None

    def test_segment_pair_witness(self):
        w = find_cube(seg_set(), 2, VI)
        assert w == AffineCube((0,), ((1,), (2,)))

    def test_m_zero(self):
        w = find_cube(seg_set(), 0, VI)
        assert w == AffineCube((0,))

    def test_budget_is_distinct_from_absent(self):
        s = PointSet.full(GridParams(2, 4))
        with pytest.raises(SearchBudgetExceeded):
            find_cube(s, 4, VI, budget=2)  # a 4-cube needs at least 4 checks
        with pytest.raises(SearchBudgetExceeded):
            m_value(s, VI, budget=2)
        assert find_cube(s, 4, VI) is not None  # same query, ample budget

    def test_threads_match_sequential(self):
        rng = random.Random(5)
        for _ in range(3):
            s = PointSet.from_indices(
                GridParams(3, 2), rng.sample(range(9), 6)
            )
            for notion in CubeNotion:
                seq = find_cube(s, 1, notion)
                par = find_cube(s, 1, notion, threads=3)
                assert seq == par

    def test_threads_budget_still_raises(self):
        s = PointSet.full(GridParams(2, 4))
        with pytest.raises(SearchBudgetExceeded):
            find_cube(s, 4, VI, budget=2, threads=2)


class TestMValue:
    def test_full_grids(self):
        for n in range(1, 5):
            assert m_value(PointSet.full(GridParams(2, n)), IND)[0] == n
        assert m_value(PointSet.full(GridParams(3, 2)), IND)[0] == 2

    def test_singleton(self):
        m, w = m_value(pset(3, 2, [(1, 2)]))
        assert m == 0 and w == AffineCube((1, 2))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            m_value(PointSet.empty(GridParams(2, 2)))

    def test_notion_separation_segment(self):
        assert m_value(seg_set(), VI)[0] == 2
        assert m_value(seg_set(), IND)[0] == 1
        assert m_value(seg_set(), UNI)[0] == 1

    def test_notion_separation_unimodular(self):
        s = pset(3, 2, [(0, 0), (2, 0), (0, 2), (2, 2)])
        assert m_value(s, VI)[0] == 2
        assert m_value(s, IND)[0] == 2
        assert m_value(s, UNI)[0] == 0

    def test_nesting_on_random_sets(self):
        rng = random.Random(23)
        for _ in range(40):
            N = rng.choice([2, 3, 4])
            n = rng.randint(1, 3 if N > 2 else 4)
            grid = GridParams(N, n)
            s = PointSet.from_indices(grid, rng.sample(range(grid.size), rng.randint(1, grid.size)))
            vals = [m_value(s, notion)[0] for notion in (UNI, IND, VI)]
            assert vals[0] <= vals[1] <= vals[2]
            assert vals[1] <= n

    def test_witness_is_canonical_and_contained(self):
        rng = random.Random(29)
        for _ in range(25):
            grid = GridParams(3, 2)
            s = PointSet.from_indices(grid, rng.sample(range(9), rng.randint(2, 9)))
            for notion in CubeNotion:
                m, w = m_value(s, notion)
                assert w.canonical() == w
                assert w.m == m
                assert is_cube_in(s, w, notion)

    def test_invariance_under_symmetries(self):
        rng = random.Random(31)
        for _ in range(15):
            N, n = 3, 2
            grid = GridParams(N, n)
            s = PointSet.from_indices(grid, rng.sample(range(9), rng.randint(1, 9)))
            base = {notion: m_value(s, notion)[0] for notion in CubeNotion}
            for perm in permutations(range(n)):
                mapped = PointSet(grid, [tuple(p[i] for i in perm) for p in s.points()])
                for notion in CubeNotion:
                    assert m_value(mapped, notion)[0] == base[notion]
            reflected = PointSet(grid, [tuple(N - 1 - x for x in p) for p in s.points()])
            for notion in CubeNotion:
                assert m_value(reflected, notion)[0] == base[notion]


class TestOracle:
    def test_all_subsets_of_2x2(self):
        grid = GridParams(2, 2)
        pts = list(grid.points())
        for mask in range(1, 16):
            s = PointSet(grid, [pts[i] for i in range(4) if mask >> i & 1])
            oracle = m_value_oracle_all(s)
            for notion in CubeNotion:
                assert m_value(s, notion)[0] == oracle[notion]

    def test_segment_agreement(self):
        for notion in CubeNotion:
            assert m_value_oracle(seg_set(), notion) == m_value(seg_set(), notion)[0]

    def test_random_3x3x3(self):
        rng = random.Random(37)
        for _ in range(30):
            grid = GridParams(3, 3)
            idxs = [i for i in range(27) if rng.random() < 0.5]
            if not idxs:
                continue
            s = PointSet.from_indices(grid, idxs)
            oracle = m_value_oracle_all(s)
            for notion in CubeNotion:
                assert m_value(s, notion)[0] == oracle[notion]

    def test_too_large_rejected(self):
        with pytest.raises(ValueError, match="too large"):
            m_value_oracle(PointSet.full(GridParams(2, 10)))

    def test_diverse_grids(self):
        # wider bases make non-primitive and dependent generators common
        rng = random.Random(987)
        for N, n, count in [(4, 2, 25), (5, 2, 20), (7, 1, 25), (2, 5, 15)]:
            grid = GridParams(N, n)
            for _ in range(count):
                size = rng.randint(1, min(grid.size, 20))
                s = PointSet.from_indices(grid, rng.sample(range(grid.size), size))
                oracle = m_value_oracle_all(s)
                for notion in CubeNotion:
                    assert m_value(s, notion)[0] == oracle[notion]


class TestWitnessMinimality:
    def test_first_found_is_lexicographic_minimum(self):
        # enumerate every canonical witness of the maximal dimension by a
        # separate anchored scan; the search must return the smallest
        from itertools import combinations

        from gridcubes.cubes import _leading_positive, _sub

        def all_witnesses(s, m, notion):
            pts = s.points()
            tset = s.tuple_set
            out = []
            for z in pts:
                diffs = sorted(
                    d for p in pts if p != z and _leading_positive(d := _sub(p, z))
                )
                for combo in combinations(diffs, m):
                    cube = AffineCube(z, tuple(combo))
                    verts = cube.vertices()
                    if len(set(verts)) != 2 ** m:
                        continue
                    if any(v not in tset for v in verts):
                        continue
                    if cube.satisfies(notion):
                        out.append(cube)
            return out

        rng = random.Random(31337)
        for _ in range(60):
            N = rng.choice([2, 3, 4])
            n = rng.randint(1, 3 if N < 4 else 2)
            grid = GridParams(N, n)
            size = rng.randint(2, min(grid.size, 14))
            s = PointSet.from_indices(grid, rng.sample(range(grid.size), size))
            for notion in CubeNotion:
                m, w = m_value(s, notion)
                if m == 0:
                    continue
                expected = min(all_witnesses(s, m, notion), key=lambda c: c.sort_key())
                assert w == expected
                assert find_cube(s, m, notion) == expected


class TestExtendCube:
    def test_point_to_segment(self):
        seg = extend_cube((0,), (1,), AffineCube((1,)))
        assert seg == AffineCube((0, 1), ((1, 0),))
        assert cube_vertices(seg) == [(0, 1), (1, 1)]

    def test_segment_to_square(self):
        inner = AffineCube((0,), ((1,),))
        lifted = extend_cube((0, 0), (1, 1), inner)
        assert lifted.generators == ((1, 1, 0), (0, 0, 1))
        assert lifted.base == (0, 0, 0)

    def test_vertices_are_both_fibers(self):
        rng = random.Random(41)
        for _ in range(30):
            r = rng.randint(1, 2)
            inner_dim = rng.randint(1, 2)
            a = tuple(rng.randint(0, 2) for _ in range(r))
            b = tuple(rng.randint(0, 2) for _ in range(r))
            if a == b:
                continue
            base = tuple(rng.randint(0, 2) for _ in range(inner_dim))
            gens = tuple(
                tuple(rng.randint(-1, 1) for _ in range(inner_dim)) for _ in range(rng.randint(0, 2))
            )
            inner = AffineCube(base, gens)
            if not inner.is_vertex_injective():
                continue
            lifted = extend_cube(a, b, inner)
            expected = {a + v for v in inner.vertices()} | {b + v for v in inner.vertices()}
            assert set(lifted.vertices()) == expected
            assert lifted.is_vertex_injective()

    def test_independence_preserved(self):
        inner = AffineCube((0, 0), ((1, 0), (0, 1)))
        lifted = extend_cube((2,), (0,), inner)
        assert lifted.satisfies(IND)

    def test_equal_prefixes_rejected(self):
        with pytest.raises(ValueError):
            extend_cube((0,), (0,), AffineCube((1,)))


class TestFExhaustive:
    def test_density_one_is_dimension(self):
        for n in range(1, 4):
            assert f_exhaustive(2, n, 1, IND) == n

    def test_half_density_on_a_line(self):
        assert f_exhaustive(2, 1, Fraction(1, 2), IND) == 0

    def test_monotone_in_c(self):
        values = [
            f_exhaustive(2, 3, c, IND)
            for c in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1))
        ]
        assert values == sorted(values)

    def test_exhaustive_cap(self):
        with pytest.raises(ValueError, match="samples"):
            f_exhaustive(2, 5, Fraction(1, 2))

    def test_sampled_variant_runs(self):
        v = f_exhaustive(2, 5, Fraction(1, 2), IND, samples=5, seed=3)
        assert 0 <= v <= 5

    def test_invalid_density(self):
        with pytest.raises(ValueError):
            f_exhaustive(2, 2, 0)
        with pytest.raises(ValueError):
            f_exhaustive(2, 2, Fraction(3, 2))
