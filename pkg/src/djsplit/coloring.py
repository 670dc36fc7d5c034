"""Regular r-paint colorings of simplicial complexes.

A coloring assigns each vertex a color in [r] so that every face is mapped
injectively. Since faces are simplices, that is the same as a proper coloring
of the 1-skeleton; :func:`is_coloring` checks facets and
:func:`skeleton_proper` checks edges so the two can be compared.

Ghost vertices (no face contains them) get color 1 and are never checked.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .complex_core import SimplicialComplex, SizeLimitError

__all__ = [
    "BRUTE_FORCE_MAX_M",
    "Coloring",
    "is_coloring",
    "skeleton_proper",
    "greedy_color",
    "find_coloring",
    "chromatic_number",
    "minimal_coloring",
    "brute_force_chromatic",
]

BRUTE_FORCE_MAX_M = 10


@dataclass(frozen=True)
class Coloring:
    """Vertex ``j`` (1-indexed) gets color ``colors[j - 1]`` in ``[1, r]``."""

    colors: tuple[int, ...]
    r: int

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(self.colors))
        if isinstance(self.r, bool) or not isinstance(self.r, int) or self.r < 1:
            raise ValueError(f"palette size must be a positive integer, got {self.r!r}")
        for c in self.colors:
            if isinstance(c, bool) or not isinstance(c, int):
                raise ValueError(f"color {c!r} is not an integer")

    @property
    def m(self) -> int:
        return len(self.colors)

    @property
    def used_colors(self) -> int:
        return len(set(self.colors))

    def color_classes(self) -> list[tuple[int, ...]]:
        """``S_i`` for ``i = 1..r``; unused colors give empty classes."""
        classes: list[list[int]] = [[] for _ in range(self.r)]
        for j, c in enumerate(self.colors, start=1):
            if 1 <= c <= self.r:
                classes[c - 1].append(j)
        return [tuple(s) for s in classes]

    def to_json(self) -> dict:
        return {"r": self.r, "colors": list(self.colors)}

    @classmethod
    def from_json(cls, data: dict) -> Coloring:
        if not isinstance(data, dict) or "colors" not in data:
            raise ValueError('coloring JSON needs a "colors" list')
        colors = data["colors"]
        if not isinstance(colors, list) or not colors:
            raise ValueError('"colors" must be a non-empty list')
        if not all(isinstance(c, int) and not isinstance(c, bool) for c in colors):
            raise ValueError('"colors" must contain integers')
        r = data.get("r")
        if r is None:
            r = max(colors)
        if isinstance(r, bool) or not isinstance(r, int) or r < 1:
            raise ValueError('"r" must be a positive integer')
        bad = [c for c in colors if not 1 <= c <= r]
        if bad:
            raise ValueError(f"color {bad[0]} outside the palette 1..{r}")
        return cls(tuple(colors), r)


def _check_shape(K: SimplicialComplex, g: Coloring) -> None:
    if g.m != K.m:
        raise ValueError(f"coloring has {g.m} entries but the complex has m={K.m}")


def _in_palette(K: SimplicialComplex, g: Coloring) -> bool:
    return all(1 <= g.colors[j - 1] <= g.r for j in K.vertices)


def is_coloring(K: SimplicialComplex, g: Coloring) -> bool:
    """True iff ``g`` is injective on every facet of ``K``."""
    _check_shape(K, g)
    if not _in_palette(K, g):
        return False
    colors = g.colors
    for facet in K.facets:
        seen = {colors[j - 1] for j in facet}
        if len(seen) != len(facet):
            return False
    return True


def skeleton_proper(K: SimplicialComplex, g: Coloring) -> bool:
    """True iff adjacent vertices of the 1-skeleton get different colors."""
    _check_shape(K, g)
    if not _in_palette(K, g):
        return False
    colors = g.colors
    return all(colors[a - 1] != colors[b - 1] for a, b in K.edges)


def _adjacency(K: SimplicialComplex) -> list[set[int]]:
    adj: list[set[int]] = [set() for _ in range(K.m)]
    for a, b in K.edges:
        adj[a - 1].add(b - 1)
        adj[b - 1].add(a - 1)
    return adj


def greedy_color(K: SimplicialComplex, order: str = "dsatur") -> Coloring:
    """Greedy coloring; ``order`` is ``"dsatur"``, ``"natural"`` or ``"largest-first"``.

    DSATUR picks the vertex with the most distinct neighbor colors, then the
    highest degree, then the lowest index.
    """
    adj = _adjacency(K)
    verts = [j - 1 for j in K.vertices]
    colors = [1] * K.m
    if order == "natural":
        sequence = verts
    elif order == "largest-first":
        sequence = sorted(verts, key=lambda v: (-len(adj[v]), v))
    elif order != "dsatur":
        raise ValueError(f"unknown order policy {order!r}")
    assigned = [0] * K.m

    def smallest_free(v: int) -> int:
        taken = {assigned[u] for u in adj[v]}
        c = 1
        while c in taken:
            c += 1
        return c

    if order == "dsatur":
        seen: list[set[int]] = [set() for _ in range(K.m)]
        uncolored = set(verts)
        while uncolored:
            v = min(uncolored, key=lambda u: (-len(seen[u]), -len(adj[u]), u))
            c = smallest_free(v)
            assigned[v] = c
            uncolored.discard(v)
            for u in adj[v]:
                seen[u].add(c)
    else:
        for v in sequence:
            assigned[v] = smallest_free(v)
    for v in verts:
        colors[v] = assigned[v]
    return Coloring(tuple(colors), max(colors))


def _backtrack(
    adj: list[set[int]], verts: list[int], r: int, dynamic: bool
) -> list[int] | None:
    """Depth-first search for an r-coloring of the graph on ``verts``.

    With ``dynamic=False`` vertices are taken in the given order and colors
    in increasing order, so the first solution found is the lexicographically
    least one. With ``dynamic=True`` the next vertex is chosen DSATUR-style,
    which refutes infeasible ``r`` much faster. A color above ``max_used + 1``
    is never tried (palette symmetry), and an assignment that leaves some
    neighbor with no free color is abandoned at once.
    """
    n = len(adj)
    color = [0] * n
    # blocked[v][c] counts colored neighbors of v with color c
    blocked = [[0] * (r + 2) for _ in range(n)]
    sat = [0] * n
    uncolored = set(verts)
    pos = {v: i for i, v in enumerate(verts)}

    def choose() -> int | None:
        if not uncolored:
            return None
        if dynamic:
            return min(uncolored, key=lambda u: (-sat[u], -len(adj[u]), u))
        return min(uncolored, key=pos.__getitem__)

    def assign(v: int, c: int) -> bool:
        color[v] = c
        uncolored.discard(v)
        ok = True
        for u in adj[v]:
            row = blocked[u]
            if row[c] == 0:
                sat[u] += 1
            row[c] += 1
            if color[u] == 0 and sat[u] >= r:
                ok = False
        return ok

    def unassign(v: int) -> None:
        c = color[v]
        for u in adj[v]:
            row = blocked[u]
            row[c] -= 1
            if row[c] == 0:
                sat[u] -= 1
        color[v] = 0
        uncolored.add(v)

    def candidates(v: int, max_used: int) -> list[int]:
        row = blocked[v]
        return [c for c in range(1, min(r, max_used + 1) + 1) if row[c] == 0]

    first = choose()
    if first is None:
        return color
    # frame: [vertex, candidate colors, next index, max_used before this vertex]
    frames = [[first, candidates(first, 0), 0, 0]]
    while frames:
        frame = frames[-1]
        v, cands, i, max_used = frame
        if color[v]:
            unassign(v)
        if i == len(cands):
            frames.pop()
            continue
        frame[2] = i + 1
        c = cands[i]
        if not assign(v, c):
            continue
        new_max = max(max_used, c)
        w = choose()
        if w is None:
            return color
        frames.append([w, candidates(w, new_max), 0, new_max])
    return None


def _max_facet_size(K: SimplicialComplex) -> int:
    return max(len(f) for f in K.facets)


def find_coloring(K: SimplicialComplex, r: int) -> Coloring | None:
    """The lexicographically least r-coloring of ``K``, or ``None``."""
    if r < 1:
        raise ValueError("palette size r must be at least 1")
    if r < _max_facet_size(K):
        return None
    adj = _adjacency(K)
    verts = [j - 1 for j in K.vertices]
    if _backtrack(adj, verts, r, dynamic=True) is None:
        return None
    found = _backtrack(adj, verts, r, dynamic=False)
    assert found is not None
    return Coloring(tuple(c or 1 for c in found), r)


def chromatic_number(K: SimplicialComplex) -> int:
    """Least r admitting an r-coloring.

    Lower bound: the largest facet (a clique in the 1-skeleton). Upper bound:
    DSATUR. Each r in between is decided by DSATUR-ordered backtracking.
    """
    lower = max(1, _max_facet_size(K))
    upper = greedy_color(K).r
    if lower >= upper:
        return upper
    adj = _adjacency(K)
    verts = [j - 1 for j in K.vertices]
    for r in range(lower, upper):
        if _backtrack(adj, verts, r, dynamic=True) is not None:
            return r
    return upper


def minimal_coloring(K: SimplicialComplex) -> Coloring:
    """The canonical coloring with the least number of colors."""
    g = find_coloring(K, chromatic_number(K))
    assert g is not None
    return g


def _restricted_growth_strings(n: int):
    """All assignments of n items to blocks with first uses in increasing order."""
    if n == 0:
        yield []
        return
    a = [1] * n
    top = [1] * n  # top[i] = max(a[:i]) for i >= 1
    while True:
        yield list(a)
        i = n - 1
        while i > 0 and a[i] > top[i]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        for k in range(i + 1, n):
            a[k] = 1
            top[k] = max(top[k - 1], a[k - 1])


def brute_force_chromatic(K: SimplicialComplex) -> int:
    """Exhaustive chromatic number, independent of the search code.

    Every assignment modulo palette relabelling (restricted growth strings)
    is checked against every facet; the answer is the fewest colors used by
    a valid one.
    """
    if K.m > BRUTE_FORCE_MAX_M:
        raise SizeLimitError(
            f"brute force needs m <= {BRUTE_FORCE_MAX_M}, got m={K.m}"
        )
    verts = list(K.vertices)
    index = {j: i for i, j in enumerate(verts)}
    facets = [[index[j] for j in f] for f in K.facets if len(f) > 1]
    best = max(1, len(verts))
    for a in _restricted_growth_strings(len(verts)):
        used = max(a, default=1)
        if used >= best:
            continue
        if all(len({a[i] for i in f}) == len(f) for f in facets):
            best = used
    return best


def coloring_from_sequence(colors: Sequence[int], r: int | None = None) -> Coloring:
    colors = tuple(colors)
    return Coloring(colors, r if r is not None else max(colors))
