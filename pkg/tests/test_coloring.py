import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from djsplit.coloring import (
    Coloring,
    brute_force_chromatic,
    chromatic_number,
    find_coloring,
    greedy_color,
    is_coloring,
    minimal_coloring,
    skeleton_proper,
)
from djsplit.complex_core import SimplicialComplex, SizeLimitError, generate_family, random_complex

from oracles import facet_injective


def lex_least(K, r):
    """First valid assignment in lexicographic order over all r^m (oracle)."""
    verts = set(K.vertices)
    for colors in itertools.product(range(1, r + 1), repeat=K.m):
        if any(colors[j - 1] != 1 for j in range(1, K.m + 1) if j not in verts):
            continue
        if facet_injective(K.facets, colors):
            return colors
    return None


class TestValidity:
    @pytest.mark.parametrize(
        "colors,expected", [((1, 2, 1, 2), True), ((1, 1, 2, 2), False)]
    )
    def test_cycle(self, cycle4, colors, expected):
        g = Coloring(colors, 2)
        assert is_coloring(cycle4, g) is expected
        assert skeleton_proper(cycle4, g) is expected

    @pytest.mark.parametrize("K", [generate_family("cycle", 5), generate_family("cross-polytope", 3),
                                   generate_family("simplex-boundary", 5), SimplicialComplex(4, [[1, 2], [4]])])
    def test_identity_is_m_coloring(self, K):
        g = Coloring(tuple(range(1, K.m + 1)), K.m)
        assert is_coloring(K, g) and skeleton_proper(K, g)

    def test_out_of_palette(self, cycle4):
        assert not is_coloring(cycle4, Coloring((1, 2, 1, 3), 2))

    def test_wrong_length(self, cycle4):
        with pytest.raises(ValueError):
            is_coloring(cycle4, Coloring((1, 2), 2))

    def test_ghosts_ignored(self):
        K = SimplicialComplex(3, [[1, 2]])
        assert is_coloring(K, Coloring((1, 2, 99), 2))

    @settings(max_examples=80, deadline=None)
    @given(st.integers(1, 8), st.integers(0, 10_000), st.data())
    def test_equivalence(self, m, seed, data):
        K = random_complex(m, seed)
        r = data.draw(st.integers(1, 4))
        colors = data.draw(st.tuples(*[st.integers(1, r)] * m))
        g = Coloring(colors, r)
        assert is_coloring(K, g) == skeleton_proper(K, g)


class TestGreedy:
    def test_cycle(self, cycle4):
        g = greedy_color(cycle4)
        assert g.r == 2 and is_coloring(cycle4, g)

    @pytest.mark.parametrize("m", [3, 4, 5, 6])
    def test_simplex_boundary(self, m):
        assert greedy_color(generate_family("simplex-boundary", m)).r == m

    def test_edgeless(self):
        assert greedy_color(generate_family("edgeless", 5)).r == 1

    @pytest.mark.parametrize("order", ["dsatur", "natural", "largest-first"])
    @pytest.mark.parametrize("seed", range(10))
    def test_always_valid(self, order, seed):
        K = random_complex(9, seed)
        g = greedy_color(K, order)
        assert is_coloring(K, g)
        assert g.r >= chromatic_number(K)

    def test_unknown_order(self, cycle4):
        with pytest.raises(ValueError):
            greedy_color(cycle4, "random")


class TestFind:
    def test_octahedron_three(self, octahedron):
        g = find_coloring(octahedron, 3)
        assert g == Coloring((1, 2, 3, 1, 2, 3), 3)
        # antipodal pairs {i, i+3} share a color
        assert all(g.colors[i] == g.colors[i + 3] for i in range(3))
        assert g.colors == lex_least(octahedron, 3)

    def test_octahedron_two(self, octahedron):
        assert find_coloring(octahedron, 2) is None
        assert lex_least(octahedron, 2) is None

    @pytest.mark.parametrize("K", [generate_family("cross-polytope", 3), generate_family("cycle", 7),
                                   generate_family("simplex-boundary", 4)])
    def test_below_dimension_bound(self, K):
        n = K.dim + 1
        assert find_coloring(K, n - 1) is None

    def test_bad_r(self, cycle4):
        with pytest.raises(ValueError):
            find_coloring(cycle4, 0)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 7), st.integers(0, 10_000), st.integers(1, 4))
    def test_canonical_is_lex_least(self, m, seed, r):
        K = random_complex(m, seed)
        g = find_coloring(K, r)
        expected = lex_least(K, r)
        assert (g.colors if g else None) == expected

    def test_deterministic(self):
        K = random_complex(10, 5)
        r = chromatic_number(K)
        assert find_coloring(K, r) == find_coloring(K, r)


class TestChromatic:
    def test_cycle(self, cycle4):
        assert chromatic_number(cycle4) == 2
        assert brute_force_chromatic(cycle4) == 2

    def test_odd_cycle(self):
        assert chromatic_number(generate_family("cycle", 7)) == 3

    def test_simplex_boundary_exceeds_dim_bound(self):
        K = generate_family("simplex-boundary", 5)
        assert K.dim + 1 == 4
        assert chromatic_number(K) == 5 == brute_force_chromatic(K)

    def test_octahedron_attains_dim_bound(self, octahedron):
        assert chromatic_number(octahedron) == 3 == octahedron.dim + 1
        assert brute_force_chromatic(octahedron) == 3

    def test_edgeless(self):
        assert brute_force_chromatic(generate_family("edgeless", 5)) == 1
        assert chromatic_number(generate_family("edgeless", 5)) == 1

    def test_brute_force_guard(self):
        with pytest.raises(SizeLimitError):
            brute_force_chromatic(generate_family("cycle", 11))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 10), st.integers(0, 10_000))
    def test_bounds_and_oracle(self, m, seed):
        K = random_complex(m, seed)
        chi = chromatic_number(K)
        assert K.dim + 1 <= chi <= m
        assert chi == brute_force_chromatic(K)
        assert find_coloring(K, chi) is not None
        if chi > 1:
            assert find_coloring(K, chi - 1) is None

    def test_minimal_coloring(self, cycle4):
        assert minimal_coloring(cycle4) == Coloring((1, 2, 1, 2), 2)

    def test_ghost_vertices_get_color_one(self):
        K = SimplicialComplex(4, [[2, 3]])
        assert minimal_coloring(K).colors == (1, 1, 2, 1)


def test_coloring_json_round_trip():
    g = Coloring((1, 2, 1, 2), 3)
    assert Coloring.from_json(g.to_json()) == g
    assert g.used_colors == 2
    assert g.color_classes() == [(1, 3), (2, 4), ()]
