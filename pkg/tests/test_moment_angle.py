import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from djsplit.coloring import Coloring, minimal_coloring
from djsplit.complex_core import SimplicialComplex, generate_family
from djsplit.moment_angle import (
    at_most_one_zero,
    contains,
    fiber_map,
    fiber_matrix,
    sample_point,
    sample_points,
    verify_equivariance,
    verify_fiberwise_mono,
    verify_lemma,
)


def random_z(rng, s):
    return rng.standard_normal(s) + 1j * rng.standard_normal(s)


class TestSampling:
    def test_empty_face_is_torus(self, cycle4):
        p = sample_point(cycle4, (), seed=1)
        assert np.allclose(np.abs(p.z), 1.0, atol=1e-12)

    def test_vertex_face(self, cycle4):
        p = sample_point(cycle4, (1,), seed=2)
        assert abs(p.z[0]) <= 1
        assert np.allclose(np.abs(p.z[1:]), 1.0, atol=1e-12)
        assert p.witness == (1,)

    def test_deterministic(self, cycle4):
        a = sample_point(cycle4, (1, 2), seed=11)
        b = sample_point(cycle4, (1, 2), seed=11)
        assert np.array_equal(a.z, b.z)

    def test_not_a_face(self, cycle4):
        with pytest.raises(ValueError):
            sample_point(cycle4, (1, 3), seed=0)

    @pytest.mark.parametrize("name,arg", [("cycle", 5), ("cross-polytope", 3), ("simplex-boundary", 4)])
    def test_samples_lie_in_Z_K(self, name, arg):
        K = generate_family(name, arg)
        Z, witnesses = sample_points(K, 2000, seed=3)
        for z, w in zip(Z, witnesses):
            assert contains(K, z, 1e-12)
            outside = [j for j in range(1, K.m + 1) if j not in w]
            assert np.allclose(np.abs(z[np.array(outside, dtype=int) - 1]), 1.0, atol=1e-12)

    def test_all_strata_hit(self, cycle4):
        _, witnesses = sample_points(cycle4, 2000, seed=0)
        assert set(witnesses) == set(cycle4.faces())


class TestContains:
    def test_non_face_zeros(self, cycle4):
        assert not contains(cycle4, np.array([0, 1, 0, 1], dtype=complex))

    def test_face_zeros(self, cycle4):
        assert contains(cycle4, np.array([0, 0, 1, 1j], dtype=complex))

    def test_too_big(self, cycle4):
        assert not contains(cycle4, np.array([2, 1, 1, 1], dtype=complex))


class TestFiberMatrix:
    def test_singleton(self):
        for z in ([0.3 + 0.1j], [0.0], [1j]):
            assert np.array_equal(fiber_matrix([1], z), np.array([[1.0]]))

    def test_two_closed_form_point(self):
        M = fiber_matrix([1, 2], [1.0, 0.0])
        assert abs(np.linalg.det(M) - (-1.0)) < 1e-15

    def test_two_closed_form(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            z = random_z(rng, 2)
            det = np.linalg.det(fiber_matrix([1, 2], z))
            assert abs(det + (abs(z[0]) ** 2 + abs(z[1]) ** 2)) < 1e-12 * max(1, np.abs(z).max() ** 2)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 8), st.integers(0, 2**32 - 1))
    def test_matrix_matches_direct_map(self, s, seed):
        rng = np.random.default_rng(seed)
        z = random_z(rng, s)
        y = complex(*rng.standard_normal(2))
        coeffs = random_z(rng, s - 1)
        # x = sum_k c_k (e_k - e_s)
        x = np.zeros(s, dtype=complex)
        x[: s - 1] = coeffs
        x[s - 1] = -coeffs.sum()
        u = fiber_map(list(range(1, s + 1)), z, y, x)
        M = fiber_matrix(list(range(1, s + 1)), z)
        assert np.allclose(M @ np.concatenate([[y], coeffs]), u, atol=1e-12)

    @pytest.mark.parametrize("s", range(2, 7))
    def test_single_zero_is_injective(self, s):
        rng = np.random.default_rng(s)
        for j in range(s):
            z = np.exp(2j * np.pi * rng.random(s))
            z[j] = 0
            sv = np.linalg.svd(fiber_matrix(list(range(1, s + 1)), z), compute_uv=False)
            assert sv[-1] > 1e-9

    @pytest.mark.parametrize("s", range(2, 7))
    def test_two_zeros_are_singular(self, s):
        z = np.ones(s, dtype=complex)
        z[:2] = 0
        sv = np.linalg.svd(fiber_matrix(list(range(1, s + 1)), z), compute_uv=False)
        assert sv[-1] < 1e-12


class TestVerify:
    def test_cycle_passes(self, cycle4):
        rep = verify_fiberwise_mono(cycle4, Coloring((1, 2, 1, 2), 2), samples=1000, seed=5)
        assert rep["pass"]
        assert all(c["adversarial_cases"] == 2 for c in rep["classes"])

    def test_singleton_classes(self):
        K = generate_family("simplex-boundary", 4)
        rep = verify_fiberwise_mono(K, minimal_coloring(K), samples=100, seed=0)
        assert rep["pass"]
        assert all(c["min_singular_value"] == 1.0 for c in rep["classes"])

    def test_planted_failure(self, cycle4):
        rep = verify_fiberwise_mono(cycle4, Coloring((1, 1, 2, 2), 2), samples=200, seed=5)
        assert not rep["pass"] and not rep["coloring_valid"]
        fail = rep["classes"][0]["failures"][0]
        assert fail["kind"] == "adversarial"
        assert fail["z"][0] == [0.0, 0.0] and fail["z"][1] == [0.0, 0.0]

    def test_equivariance_identity(self, cycle4):
        S = [1, 3]
        z = sample_point(cycle4, (1,), seed=4).z
        x = np.array([0.5 + 0.2j, -0.5 - 0.2j])
        u = fiber_map(S, z, 0.7, x)
        assert np.array_equal(fiber_map(S, np.ones(4) * z, 0.7, x), u)

    def test_equivariance_cycle(self, cycle4):
        rep = verify_equivariance(cycle4, Coloring((1, 2, 1, 2), 2), samples=1000, seed=1, tol=1e-12)
        assert rep["pass"]

    def test_equivariance_minus_one(self, cycle4):
        S = [1, 3]
        rng = np.random.default_rng(2)
        z = sample_point(cycle4, (3,), seed=rng).z
        t = np.ones(4, dtype=complex)
        t[0] = -1
        x = np.array([1 + 1j, -1 - 1j])
        base = fiber_map(S, z, 0.3j, x)
        moved = fiber_map(S, t * z, np.prod(t[[0, 2]]) * 0.3j, x)
        assert np.linalg.norm(moved - t[[0, 2]] * base) / np.linalg.norm(base) < 1e-12

    def test_equivariance_scales_with_epsilon(self):
        K = generate_family("edgeless", 8)
        for s in range(1, 9):
            g = Coloring(tuple([1] * s + [2] * (8 - s)), 2)
            rep = verify_equivariance(K, g, samples=500, seed=s, tol=1e-13)
            assert rep["pass"], (s, rep)

    def test_zero_counts(self, cycle4):
        rep = at_most_one_zero(cycle4, Coloring((1, 2, 1, 2), 2), samples=500, seed=0)
        assert rep["pass"] and rep["pairs_are_non_faces"]

    def test_zero_counts_improper(self, cycle4):
        rep = at_most_one_zero(cycle4, Coloring((1, 1, 2, 2), 2), samples=100, seed=0)
        assert not rep["pass"]
        assert rep["violations"][0]["pair"] == [1, 2]
        z = np.array([complex(a, b) for a, b in rep["violations"][0]["z"]])
        assert contains(cycle4, z)

    def test_zero_counts_edgeless(self):
        K = generate_family("edgeless", 4)
        rep = at_most_one_zero(K, Coloring((1, 1, 1, 1), 1), samples=200, seed=0)
        assert rep["pass"]

    def test_seeded_determinism(self, octahedron):
        g = minimal_coloring(octahedron)
        a = json.dumps(verify_lemma(octahedron, g, 700, 9), sort_keys=True)
        b = json.dumps(verify_lemma(octahedron, g, 700, 9), sort_keys=True)
        assert a == b

    def test_thread_count_does_not_matter(self, octahedron, monkeypatch):
        g = minimal_coloring(octahedron)
        monkeypatch.setenv("DJSPLIT_THREADS", "1")
        a = json.dumps(verify_lemma(octahedron, g, 1500, 4), sort_keys=True)
        monkeypatch.setenv("DJSPLIT_THREADS", "8")
        b = json.dumps(verify_lemma(octahedron, g, 1500, 4), sort_keys=True)
        assert a == b

    def test_ghost_vertex(self):
        K = SimplicialComplex(3, [[1, 2]])
        rep = verify_lemma(K, Coloring((1, 2, 1), 2), 200, 0)
        assert rep["pass"]
