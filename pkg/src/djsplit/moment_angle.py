"""Numerical audit of the equivariant isomorphism nu (+) C^{s-1} -> eta on Z_K.

For a color class ``S = (j_1, ..., j_s)`` and a point ``z`` of the
moment-angle complex, the fiber map is

    (y, x) -> u,   u_j = y * prod_{k in S, k != j} conj(z_k) + z_j * x_j

with ``x`` in the hyperplane ``sum_k x_k = 0``. Using the basis
``e_k - e_s`` of that hyperplane it becomes an ``s x s`` complex matrix
(:func:`fiber_matrix`). We check on sampled and adversarial points that the
matrix is injective, and that the map commutes with the torus action.

Random streams are derived from ``(seed, chunk index)`` with a fixed chunk
size, so results do not depend on how chunks are spread over threads.
"""

from __future__ import annotations

import itertools
import os
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .coloring import Coloring, is_coloring
from .complex_core import Face, SimplicialComplex, mask_of

__all__ = [
    "CHUNK",
    "MomentAnglePoint",
    "worker_count",
    "sample_point",
    "sample_points",
    "contains",
    "fiber_matrix",
    "fiber_matrices",
    "fiber_map",
    "verify_fiberwise_mono",
    "verify_equivariance",
    "at_most_one_zero",
    "verify_lemma",
]

CHUNK = 512
MEMBERSHIP_TOL = 1e-12


def worker_count() -> int:
    """Worker cap from ``DJSPLIT_THREADS`` (default 1)."""
    raw = os.environ.get("DJSPLIT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class MomentAnglePoint:
    z: np.ndarray
    witness: Face


def _rng(seed, *stream: int) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng([int(seed), *stream])


def _disk(rng: np.random.Generator, shape) -> np.ndarray:
    radius = np.sqrt(rng.random(shape))
    return radius * np.exp(2j * np.pi * rng.random(shape))


def _circle(rng: np.random.Generator, shape) -> np.ndarray:
    return np.exp(2j * np.pi * rng.random(shape))


def sample_point(K: SimplicialComplex, face: Sequence[int], seed=0) -> MomentAnglePoint:
    """Point of ``(D^2)^face x (S^1)^rest``: disk coordinates on ``face``."""
    face = tuple(sorted(face))
    if mask_of(face) not in K.face_masks:
        raise ValueError(f"{list(face)} is not a face of the complex")
    rng = _rng(seed)
    z = _circle(rng, K.m)
    if face:
        idx = np.array(face) - 1
        z[idx] = _disk(rng, len(face))
    return MomentAnglePoint(z, face)


def _face_table(K: SimplicialComplex) -> np.ndarray:
    faces = K.faces()
    table = np.zeros((len(faces), K.m), dtype=bool)
    for row, f in enumerate(faces):
        table[row, np.array(f, dtype=int) - 1] = True
    return table


def _chunk_points(table: np.ndarray, m: int, n: int, seed: int, chunk: int):
    """Points, witnesses, and auxiliary randomness for one chunk."""
    rng = _rng(seed, chunk)
    which = rng.integers(0, len(table), size=n)
    inside = table[which]
    z = np.where(inside, _disk(rng, (n, m)), _circle(rng, (n, m)))
    t = _circle(rng, (n, m))
    y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
    return z, which, t, y, x


def _chunks(total: int):
    for c, start in enumerate(range(0, total, CHUNK)):
        yield c, min(CHUNK, total - start)


def sample_points(K: SimplicialComplex, n: int, seed: int = 0) -> tuple[np.ndarray, list[Face]]:
    """``n`` points of Z_K; each picks a face uniformly, then its coordinates."""
    table = _face_table(K)
    faces = K.faces()
    zs, wit = [], []
    for c, size in _chunks(n):
        z, which, *_ = _chunk_points(table, K.m, size, seed, c)
        zs.append(z)
        wit.extend(faces[i] for i in which)
    z = np.concatenate(zs) if zs else np.zeros((0, K.m), dtype=complex)
    return z, wit


def contains(K: SimplicialComplex, z, tol: float = MEMBERSHIP_TOL) -> bool:
    z = np.asarray(z)
    if z.shape != (K.m,):
        raise ValueError(f"point must have {K.m} coordinates")
    mod = np.abs(z)
    if np.any(mod > 1 + tol):
        return False
    small = [j + 1 for j in np.flatnonzero(mod < 1 - tol)]
    return mask_of(small) in K.face_masks


# ---------------------------------------------------------------------------
# fiber maps


def fiber_matrices(S: Sequence[int], Z: np.ndarray) -> np.ndarray:
    """Batched :func:`fiber_matrix` for points ``Z`` of shape ``(n, m)``."""
    idx = np.asarray(S, dtype=int) - 1
    if idx.size == 0:
        raise ValueError("color class must be nonempty")
    zs = np.asarray(Z)[:, idx]
    n, s = zs.shape
    M = np.zeros((n, s, s), dtype=complex)
    conj = np.conj(zs)
    for j in range(s):
        others = np.delete(conj, j, axis=1)
        M[:, j, 0] = np.prod(others, axis=1)
    for k in range(s - 1):
        M[:, k, k + 1] = zs[:, k]
        M[:, s - 1, k + 1] = -zs[:, s - 1]
    return M


def fiber_matrix(S: Sequence[int], z) -> np.ndarray:
    """Matrix of ``(y, x) -> u`` for class ``S`` (1-indexed) at ``z``.

    Column 0 is the ``y`` direction; column ``k`` is the hyperplane vector
    ``e_k - e_s``.
    """
    return fiber_matrices(S, np.asarray(z, dtype=complex)[None, :])[0]


def fiber_map(S: Sequence[int], z, y, x) -> np.ndarray:
    """Evaluate ``u`` directly (no matrix); ``x`` has one entry per class vertex."""
    idx = np.asarray(S, dtype=int) - 1
    z = np.asarray(z, dtype=complex)
    zs = z[..., idx]
    x = np.asarray(x, dtype=complex)
    s = len(idx)
    u = np.empty(np.broadcast_shapes(zs.shape, x.shape), dtype=complex)
    conj = np.conj(zs)
    for j in range(s):
        u[..., j] = y * np.prod(np.delete(conj, j, axis=-1), axis=-1) + zs[..., j] * x[..., j]
    return u


def _relative_sigma_min(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    sv = np.linalg.svd(M, compute_uv=False)
    scale = np.max(np.abs(M), axis=(-2, -1))
    return sv[..., -1], scale


def _point_json(z: np.ndarray) -> list[list[float]]:
    return [[float(c.real), float(c.imag)] for c in z]


def _adversarial_points(K: SimplicialComplex, S: Sequence[int], seed: int) -> list[np.ndarray]:
    """Points with every coordinate of ``S`` inside some face set to zero.

    For a proper coloring each zero set is a single vertex of ``S``; for an
    improper one the shared facets produce several simultaneous zeros.
    """
    zero_sets = sorted(
        {tuple(j for j in facet if j in set(S)) for facet in K.facets} - {()},
        key=lambda f: (len(f), f),
    )
    rng = _rng(seed, 1 << 30)
    points = []
    for zeros in zero_sets:
        z = _circle(rng, K.m)
        z[np.array(zeros) - 1] = 0.0
        points.append(z)
    return points


def _map_chunks(fn, total: int):
    work = list(_chunks(total))
    threads = min(worker_count(), max(1, len(work)))
    if threads == 1:
        return [fn(c, size) for c, size in work]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda item: fn(*item), work))


def verify_fiberwise_mono(
    K: SimplicialComplex, g: Coloring, samples: int = 1000, seed: int = 0, tol: float = 1e-9
) -> dict:
    """Check ``sigma_min(M(z)) > tol * max|M(z)|`` per color class.

    Points are ``samples`` random points of Z_K plus the adversarial points
    of :func:`_adversarial_points`. The coloring is not required to be
    valid: an improper one is expected to fail on its adversarial points.
    """
    table = _face_table(K)
    classes = [S for S in g.color_classes() if S]

    def run(c: int, size: int):
        z, *_ = _chunk_points(table, K.m, size, seed, c)
        out = []
        for S in classes:
            smin, scale = _relative_sigma_min(fiber_matrices(S, z))
            ratio = smin / scale
            worst = int(np.argmin(ratio))
            out.append((float(smin.min()), float(ratio[worst]), z[worst]))
        return out

    per_chunk = _map_chunks(run, samples)
    report = []
    for ci, S in enumerate(classes):
        results = [chunk[ci] for chunk in per_chunk]
        min_sv = min((r[0] for r in results), default=float("inf"))
        failures = []
        for r in results:
            if not r[1] > tol:
                failures.append({"kind": "sample", "z": _point_json(r[2])})
        adv = _adversarial_points(K, S, seed)
        for z in adv:
            smin, scale = _relative_sigma_min(fiber_matrix(S, z))
            min_sv = min(min_sv, float(smin))
            if not smin > tol * scale:
                failures.append({"kind": "adversarial", "z": _point_json(z)})
        color = g.colors[S[0] - 1]
        report.append(
            {
                "color": color,
                "vertices": list(S),
                "min_singular_value": min_sv,
                "samples": samples,
                "adversarial_cases": len(adv),
                "failures": failures[:5],
                "pass": not failures,
            }
        )
    return {
        "coloring_valid": is_coloring(K, g),
        "tol": tol,
        "classes": report,
        "pass": all(r["pass"] for r in report),
    }


def verify_equivariance(
    K: SimplicialComplex, g: Coloring, samples: int = 1000, seed: int = 0, tol: float = 1e-10
) -> dict:
    """Relative residual of ``f(t.(y, x, z)) - t.f(y, x, z)`` per color class.

    The torus acts on ``y`` through ``prod_{j in S} t_j``, trivially on ``x``,
    and coordinatewise on ``z`` and ``u``.
    """
    table = _face_table(K)
    classes = [S for S in g.color_classes() if S]

    def run(c: int, size: int):
        z, _, t, y, x = _chunk_points(table, K.m, size, seed, c)
        out = []
        for S in classes:
            idx = np.asarray(S) - 1
            xs = x[:, idx]
            xs = xs - xs.mean(axis=1, keepdims=True)
            ts = t[:, idx]
            base = fiber_map(S, z, y, xs)
            moved = fiber_map(S, t * z, np.prod(ts, axis=1) * y, xs)
            residual = np.linalg.norm(moved - ts * base, axis=1) / np.linalg.norm(base, axis=1)
            out.append(float(residual.max()))
        return out

    per_chunk = _map_chunks(run, samples)
    report = []
    for ci, S in enumerate(classes):
        worst = max((chunk[ci] for chunk in per_chunk), default=0.0)
        report.append(
            {
                "color": g.colors[S[0] - 1],
                "vertices": list(S),
                "max_equivariance_residual": worst,
                "samples": samples,
                "pass": worst < tol,
            }
        )
    return {"tol": tol, "classes": report, "pass": all(r["pass"] for r in report)}


def at_most_one_zero(K: SimplicialComplex, g: Coloring, samples: int = 1000, seed: int = 0) -> dict:
    """Each point of Z_K has at most one zero coordinate per color class.

    Checked on samples, on the adversarial single-zero points, and on a
    constructed point for every 2-subset of a class that is a face (such a
    point lies in Z_K and has two zeros, so it is a violation). The
    combinatorial reason, every 2-subset of a class being a non-face, is
    reported separately.
    """
    faces = K.face_masks
    table = _face_table(K)
    classes = [S for S in g.color_classes() if S]
    bad_pairs = [
        [a, b]
        for S in classes
        for a, b in itertools.combinations(S, 2)
        if mask_of((a, b)) in faces
    ]

    def run(c: int, size: int):
        z, *_ = _chunk_points(table, K.m, size, seed, c)
        zero = z == 0
        return max(
            (int(zero[:, np.asarray(S) - 1].sum(axis=1).max()) for S in classes), default=0
        )

    worst = max(_map_chunks(run, samples), default=0)
    violations = []
    checked = samples
    for S in classes:
        for z in _adversarial_points(K, S, seed):
            checked += 1
            count = int(np.sum(z[np.asarray(S) - 1] == 0))
            worst = max(worst, count)
    for a, b in bad_pairs:
        z = sample_point(K, (a, b), _rng(seed, a, b)).z
        z[[a - 1, b - 1]] = 0.0
        checked += 1
        violations.append({"pair": [a, b], "z": _point_json(z)})
        worst = max(worst, 2)
    return {
        "pairs_are_non_faces": not bad_pairs,
        "max_zeros_per_class": worst,
        "points_checked": checked,
        "violations": violations[:5],
        "pass": worst <= 1 and not bad_pairs,
    }


def verify_lemma(
    K: SimplicialComplex,
    g: Coloring,
    samples: int = 1000,
    seed: int = 0,
    tol: float = 1e-9,
    equivariance_tol: float = 1e-10,
) -> dict:
    """Injectivity, equivariance and the zero-count check in one report."""
    mono = verify_fiberwise_mono(K, g, samples, seed, tol)
    equi = verify_equivariance(K, g, samples, seed, equivariance_tol)
    zeros = at_most_one_zero(K, g, samples, seed)
    classes = []
    for a, b in zip(mono["classes"], equi["classes"]):
        classes.append(
            {
                "color": a["color"],
                "vertices": a["vertices"],
                "min_singular_value": a["min_singular_value"],
                "max_equivariance_residual": b["max_equivariance_residual"],
                "samples": samples,
                "adversarial_cases": a["adversarial_cases"],
                "failures": a["failures"],
                "pass": a["pass"] and b["pass"],
            }
        )
    return {
        "coloring_valid": mono["coloring_valid"],
        "classes": classes,
        "at_most_one_zero": zeros,
        "pass": mono["pass"] and equi["pass"] and zeros["pass"],
    }
