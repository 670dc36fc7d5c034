"""Finite abstract simplicial complexes on the vertex set [m] = {1, ..., m}.

Faces are exposed as strictly increasing tuples of 1-indexed vertices.
Internally every face is also kept as a bitmask (bit ``j - 1`` for vertex
``j``), which is what the ring and coloring code work with.
"""

from __future__ import annotations

import itertools
import json
import random
import re
from collections.abc import Iterable, Sequence
from functools import cached_property

__all__ = [
    "FACE_CAP",
    "MAX_VERTICES",
    "ComplexError",
    "ParseError",
    "SizeLimitError",
    "SimplicialComplex",
    "Face",
    "mask_of",
    "face_of",
    "parse_facets",
    "parse_complex_json",
    "load_complex",
    "format_facets",
    "complex_to_json",
    "enumerate_faces",
    "minimal_non_faces",
    "one_skeleton",
    "dual_of_simple_polytope",
    "generate_family",
    "random_complex",
    "join",
    "FAMILIES",
]

Face = tuple[int, ...]

FACE_CAP = 1 << 24
MAX_VERTICES = 4096


class ComplexError(ValueError):
    """Invalid simplicial complex data."""


class ParseError(ComplexError):
    """Malformed facet-list or JSON document."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SizeLimitError(ComplexError):
    """A size guard was exceeded."""


def mask_of(face: Iterable[int]) -> int:
    mask = 0
    for j in face:
        mask |= 1 << (j - 1)
    return mask


def face_of(mask: int) -> Face:
    out = []
    j = 1
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return tuple(out)


def _face_key(face: Face) -> tuple[int, Face]:
    return (len(face), face)


def _submasks(mask: int) -> Iterable[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


class SimplicialComplex:
    """A finite abstract simplicial complex given by its facets.

    ``facets`` may be any family of faces; it is normalized to its
    inclusion-maximal members. Vertices of [m] that lie in no facet are
    ghost vertices: they are allowed, and reported by :attr:`ghost_vertices`.

    Instances are immutable; derived data (faces, minimal non-faces, ...)
    is computed lazily and cached.
    """

    def __init__(self, m: int, facets: Iterable[Iterable[int]]):
        if isinstance(m, bool) or not isinstance(m, int):
            raise ComplexError(f"vertex count must be an integer, got {m!r}")
        if m < 1:
            raise ComplexError(f"vertex count must be positive, got {m}")
        if m > MAX_VERTICES:
            raise SizeLimitError(f"m={m} exceeds the limit of {MAX_VERTICES} vertices")
        masks = set()
        for raw in facets:
            verts = list(raw)
            for j in verts:
                if isinstance(j, bool) or not isinstance(j, int):
                    raise ComplexError(f"vertex {j!r} is not an integer")
                if j < 1 or j > m:
                    raise ComplexError(f"vertex {j} outside [1, {m}]")
            if len(set(verts)) != len(verts):
                raise ComplexError(f"face {verts} repeats a vertex")
            masks.add(mask_of(verts))
        # keep inclusion-maximal faces only
        maximal: list[int] = []
        for mask in sorted(masks, key=lambda x: -x.bit_count()):
            if not any(mask & big == mask for big in maximal):
                maximal.append(mask)
        if not maximal:
            maximal = [0]
        facets_sorted = sorted((face_of(x) for x in maximal), key=_face_key)
        self._m = m
        self._facets = tuple(facets_sorted)
        self._facet_masks = tuple(mask_of(f) for f in self._facets)

    @property
    def m(self) -> int:
        return self._m

    @property
    def facets(self) -> tuple[Face, ...]:
        return self._facets

    @property
    def facet_masks(self) -> tuple[int, ...]:
        return self._facet_masks

    @property
    def dim(self) -> int:
        return max(len(f) for f in self._facets) - 1

    @property
    def vertex_mask(self) -> int:
        out = 0
        for f in self._facet_masks:
            out |= f
        return out

    @cached_property
    def vertices(self) -> Face:
        return face_of(self.vertex_mask)

    @cached_property
    def ghost_vertices(self) -> Face:
        return tuple(j for j in range(1, self._m + 1) if not self.vertex_mask >> (j - 1) & 1)

    @cached_property
    def face_masks(self) -> frozenset[int]:
        """All faces as bitmasks, including the empty face.

        Raises :class:`SizeLimitError` when the count would exceed ``FACE_CAP``.
        """
        out: set[int] = set()
        for mask in self._facet_masks:
            if 1 << mask.bit_count() > FACE_CAP:
                raise SizeLimitError(
                    f"facet of size {mask.bit_count()} alone has more than {FACE_CAP} faces"
                )
            for sub in _submasks(mask):
                out.add(sub)
            if len(out) > FACE_CAP:
                raise SizeLimitError(f"complex has more than {FACE_CAP} faces")
        return frozenset(out)

    def faces(self) -> list[Face]:
        """All faces in canonical order (size, then lexicographic)."""
        return sorted((face_of(x) for x in self.face_masks), key=_face_key)

    @property
    def n_faces(self) -> int:
        return len(self.face_masks)

    @cached_property
    def f_vector(self) -> tuple[int, ...]:
        """``(f_-1, f_0, ..., f_dim)``; ``f_-1 = 1`` counts the empty face."""
        counts = [0] * (self.dim + 2)
        for mask in self.face_masks:
            counts[mask.bit_count()] += 1
        return tuple(counts)

    def is_face(self, face: Iterable[int]) -> bool:
        mask = mask_of(face)
        return any(mask & f == mask for f in self._facet_masks)

    @cached_property
    def minimal_non_face_masks(self) -> frozenset[int]:
        faces = self.face_masks
        out = set()
        for face in faces:
            for j in range(self._m):
                bit = 1 << j
                if face & bit:
                    continue
                cand = face | bit
                if cand in faces or cand in out:
                    continue
                # cand is minimal iff every codimension-one subset is a face
                rest = cand
                ok = True
                while rest:
                    low = rest & -rest
                    rest ^= low
                    if cand ^ low not in faces:
                        ok = False
                        break
                if ok:
                    out.add(cand)
        return frozenset(out)

    def minimal_non_faces(self) -> list[Face]:
        return sorted((face_of(x) for x in self.minimal_non_face_masks), key=_face_key)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """2-element faces of K, sorted."""
        out = set()
        for f in self._facets:
            out.update(itertools.combinations(f, 2))
        return tuple(sorted(out))

    @property
    def is_flag_like(self) -> bool:
        """True if every minimal non-face has exactly two vertices."""
        return all(x.bit_count() == 2 for x in self.minimal_non_face_masks)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._m == other._m and self._facets == other._facets

    def __hash__(self) -> int:
        return hash((self._m, self._facets))

    def __repr__(self) -> str:
        return f"SimplicialComplex(m={self._m}, facets={list(self._facets)})"


def enumerate_faces(K: SimplicialComplex) -> list[Face]:
    return K.faces()


def minimal_non_faces(K: SimplicialComplex) -> list[Face]:
    return K.minimal_non_faces()


def one_skeleton(K: SimplicialComplex) -> tuple[tuple[int, int], ...]:
    return K.edges


# --------------------------------------------------------------------------
# Text / JSON formats

_HEADER = re.compile(r"^m\s*=\s*(\S+)$")
_TOKEN = re.compile(r"^[0-9]+$")


def _vertex_int(token: str, line: int) -> int:
    if not _TOKEN.match(token) or not token.isascii():
        raise ParseError(f"malformed vertex token {token!r}", line)
    if len(token) > 12:
        raise ParseError(f"vertex index {token} is too large", line)
    return int(token)


def parse_facets(text: str) -> SimplicialComplex:
    """Parse the facet-list format.

    ``#`` starts a comment, an optional ``m=<int>`` header fixes the vertex
    count, and every other non-blank line lists the vertices of one face.
    """
    m_decl: int | None = None
    faces: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        header = _HEADER.match(line)
        if header:
            if m_decl is not None:
                raise ParseError("duplicate m= header", lineno)
            value = header.group(1)
            if not _TOKEN.match(value) or not value.isascii():
                raise ParseError(f"malformed vertex count {value!r}", lineno)
            if len(value) > 12 or int(value) > MAX_VERTICES:
                raise ParseError(f"m={value} exceeds the limit of {MAX_VERTICES}", lineno)
            m_decl = int(value)
            if m_decl < 1:
                raise ParseError("m must be positive", lineno)
            if faces and max(max(f) for f in faces) > m_decl:
                raise ParseError(f"a face listed before the header exceeds m={m_decl}", lineno)
            continue
        verts = [_vertex_int(tok, lineno) for tok in line.split()]
        for j in verts:
            if j < 1:
                raise ParseError(f"vertex index {j} < 1", lineno)
            if m_decl is not None and j > m_decl:
                raise ParseError(f"vertex index {j} > m={m_decl}", lineno)
            if j > MAX_VERTICES:
                raise ParseError(f"vertex index {j} exceeds the limit of {MAX_VERTICES}", lineno)
        if len(set(verts)) != len(verts):
            raise ParseError(f"face {' '.join(map(str, verts))} repeats a vertex", lineno)
        faces.append(verts)
    if not faces:
        raise ParseError("document lists no faces")
    m = m_decl if m_decl is not None else max(max(f) for f in faces)
    return SimplicialComplex(m, faces)


def parse_complex_json(data: str | dict) -> SimplicialComplex:
    """Read ``{"m": int, "facets": [[int, ...], ...]}``.

    A document carrying the complex under a ``"complex"`` key (as the CLI
    emits) is accepted too.
    """
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ParseError("JSON complex must be an object")
    if "facets" not in data and isinstance(data.get("complex"), dict):
        data = data["complex"]
    facets = data.get("facets")
    if not isinstance(facets, list) or not facets:
        raise ParseError('JSON complex needs a non-empty "facets" list')
    for f in facets:
        if not isinstance(f, list) or not all(
            isinstance(j, int) and not isinstance(j, bool) for j in f
        ):
            raise ParseError(f"facet {f!r} is not a list of integers")
        if any(j < 1 for j in f):
            raise ParseError(f"facet {f!r} has a vertex index < 1")
        if any(j > MAX_VERTICES for j in f):
            raise ParseError(f"facet {f!r} has a vertex index above {MAX_VERTICES}")
    m = data.get("m")
    if m is None:
        m = max((max(f) for f in facets if f), default=1)
    elif isinstance(m, bool) or not isinstance(m, int):
        raise ParseError(f'"m" must be an integer, got {m!r}')
    try:
        return SimplicialComplex(m, facets)
    except ComplexError as exc:
        raise ParseError(str(exc)) from None


def load_complex(text: str) -> SimplicialComplex:
    """Parse either format, picking JSON when the document starts with ``{``."""
    if text.lstrip().startswith("{"):
        return parse_complex_json(text)
    return parse_facets(text)


def format_facets(K: SimplicialComplex) -> str:
    lines = [f"m={K.m}"]
    lines.extend(" ".join(map(str, f)) for f in K.facets if f)
    return "\n".join(lines) + "\n"


def complex_to_json(K: SimplicialComplex) -> dict:
    return {"m": K.m, "facets": [list(f) for f in K.facets]}


# --------------------------------------------------------------------------
# Constructions


def dual_of_simple_polytope(incidence: Sequence[Sequence[bool]]) -> SimplicialComplex:
    """Complex on the facets of a simple polytope, one simplex per polytope vertex.

    ``incidence[v][F]`` says whether polytope vertex ``v`` lies on facet ``F``.
    """
    rows = [[bool(x) for x in row] for row in incidence]
    if not rows or not rows[0]:
        raise ComplexError("empty incidence matrix")
    n_facets = len(rows[0])
    if any(len(row) != n_facets for row in rows):
        raise ComplexError("incidence matrix is not rectangular")
    degrees = {sum(row) for row in rows}
    if len(degrees) != 1:
        raise ComplexError(f"polytope is not simple: vertex degrees {sorted(degrees)}")
    if degrees == {0}:
        raise ComplexError("vertices lie on no facets")
    facets = [[k + 1 for k, on in enumerate(row) if on] for row in rows]
    return SimplicialComplex(n_facets, facets)


def join(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    """Simplicial join; vertices of L are shifted by ``K.m``."""
    facets = [f + tuple(j + K.m for j in g) for f in K.facets for g in L.facets]
    return SimplicialComplex(K.m + L.m, facets)


def random_complex(
    m: int,
    seed: int | random.Random = 0,
    n_facets: int | None = None,
    max_size: int | None = None,
) -> SimplicialComplex:
    """A random complex on [m] in which every vertex is used."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    if max_size is None:
        max_size = min(m, 4)
    if n_facets is None:
        n_facets = rng.randint(1, 2 * m)
    facets = []
    for _ in range(n_facets):
        size = rng.randint(1, max_size)
        facets.append(rng.sample(range(1, m + 1), size))
    covered = {j for f in facets for j in f}
    facets.extend([j] for j in range(1, m + 1) if j not in covered)
    return SimplicialComplex(m, facets)


def _simplex(m: int) -> SimplicialComplex:
    return SimplicialComplex(m, [range(1, m + 1)])


def _simplex_boundary(m: int) -> SimplicialComplex:
    if m < 2:
        raise ComplexError("simplex-boundary needs m >= 2")
    return SimplicialComplex(m, itertools.combinations(range(1, m + 1), m - 1))


def _cross_polytope(d: int) -> SimplicialComplex:
    # antipodal pairs are {i, i + d}
    facets = [
        [i + 1 + d * side for i, side in enumerate(sides)]
        for sides in itertools.product((0, 1), repeat=d)
    ]
    return SimplicialComplex(2 * d, facets)


def _cycle(k: int) -> SimplicialComplex:
    if k < 3:
        raise ComplexError("cycle needs k >= 3")
    return SimplicialComplex(k, [(i, i % k + 1) for i in range(1, k + 1)])


def _edgeless(m: int) -> SimplicialComplex:
    return SimplicialComplex(m, [[j] for j in range(1, m + 1)])


FAMILIES = {
    "simplex": _simplex,
    "simplex-boundary": _simplex_boundary,
    "cross-polytope": _cross_polytope,
    "cycle": _cycle,
    "edgeless": _edgeless,
    "random": random_complex,
}


def generate_family(name: str, *params: int) -> SimplicialComplex:
    """Build a named test complex, e.g. ``generate_family("cycle", 4)``."""
    try:
        build = FAMILIES[name]
    except KeyError:
        raise ComplexError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}") from None
    if not params:
        raise ComplexError(f"family {name!r} needs a size parameter")
    if any(isinstance(p, bool) or not isinstance(p, int) or p < 0 for p in params):
        raise ComplexError(f"family parameters must be non-negative integers, got {params}")
    if params[0] < 1:
        raise ComplexError(f"family size must be positive, got {params[0]}")
    if params[0] > MAX_VERTICES:
        raise SizeLimitError(f"size {params[0]} exceeds the limit of {MAX_VERTICES}")
    if name == "cross-polytope" and 2 * params[0] > MAX_VERTICES:
        raise SizeLimitError(f"cross-polytope of dimension {params[0]} is too large")
    if name == "cross-polytope" and params[0] > 20:
        raise SizeLimitError("cross-polytope dimension above 20 has too many facets")
    try:
        return build(*params)
    except TypeError:
        raise ComplexError(f"wrong number of parameters for family {name!r}") from None
