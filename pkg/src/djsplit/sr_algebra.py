"""Exact integer arithmetic in the Stanley-Reisner ring Z[K].

Monomials are stored packed into a single Python int: the exponent of
``v_j`` occupies bits ``[16 (j-1), 16 j)``. Multiplying two monomials is then
integer addition. Whether a packed monomial survives in Z[K] (its support is
a face) is memoised per complex.

Every :class:`SRElement` is reduced eagerly: no stored term has non-face
support and no stored coefficient is zero. Coefficients are limited to the
signed 64-bit range; leaving it raises :class:`OverflowError`.
"""

from __future__ import annotations

import weakref
from collections.abc import Iterable, Mapping
from functools import lru_cache

from .complex_core import Face, SimplicialComplex, mask_of

__all__ = [
    "AmbientMismatchError",
    "SRElement",
    "reduce",
    "multiply",
    "product",
    "one_plus",
    "variable",
    "constant",
    "total_chern",
    "total_pontrjagin",
    "elementary_symmetric_class",
    "restrict_to_face",
]

_W = 16
_FIELD = (1 << _W) - 1
_MAX_EXP = (1 << (_W - 1)) - 1
INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1


class AmbientMismatchError(ValueError):
    """Elements of the rings of two different complexes were combined."""


def _pack(exponents: Mapping[int, int]) -> int:
    key = 0
    for j, e in exponents.items():
        key |= e << (_W * (j - 1))
    return key


def _unpack(key: int) -> dict[int, int]:
    out = {}
    j = 1
    while key:
        e = key & _FIELD
        if e:
            out[j] = e
        key >>= _W
        j += 1
    return out


def _support(key: int) -> int:
    mask = 0
    bit = 1
    while key:
        if key & _FIELD:
            mask |= bit
        key >>= _W
        bit <<= 1
    return mask


def _degree(key: int) -> int:
    total = 0
    while key:
        total += key & _FIELD
        key >>= _W
    return total


class _Ring:
    """Per-complex memo of which packed monomials are nonzero in Z[K]."""

    __slots__ = ("faces", "alive", "__weakref__")

    def __init__(self, K: SimplicialComplex):
        self.faces = K.face_masks
        self.alive: dict[int, bool] = {}

    def is_alive(self, key: int) -> bool:
        hit = self.alive.get(key)
        if hit is None:
            if _max_field(key) > _MAX_EXP:
                raise OverflowError(f"exponent above {_MAX_EXP} in a product")
            hit = _support(key) in self.faces
            self.alive[key] = hit
        return hit


def _max_field(key: int) -> int:
    top = 0
    while key:
        top = max(top, key & _FIELD)
        key >>= _W
    return top


_RINGS: weakref.WeakKeyDictionary[SimplicialComplex, _Ring] = weakref.WeakKeyDictionary()


def _ring(K: SimplicialComplex) -> _Ring:
    try:
        return _RINGS[K]
    except KeyError:
        ring = _RINGS[K] = _Ring(K)
        return ring


def _check_coefs(terms: dict[int, int]) -> None:
    for c in terms.values():
        if c > INT64_MAX or c < INT64_MIN:
            raise OverflowError(f"coefficient {c} leaves the signed 64-bit range")


def _canonical_key(key: int, m: int) -> tuple:
    exps = _unpack(key)
    return (sum(exps.values()), tuple(-exps.get(j, 0) for j in range(1, m + 1)))


class SRElement:
    """An element of Z[K], kept reduced modulo the Stanley-Reisner ideal.

    Build elements with :func:`reduce`, :func:`variable` or :func:`constant`
    and combine them with ``+``, ``-``, ``*`` and ``**``.
    """

    __slots__ = ("complex", "_terms")

    def __init__(self, K: SimplicialComplex, terms: dict[int, int]):
        # ``terms`` must already be reduced; use reduce() for raw input.
        self.complex = K
        self._terms = terms

    # -- inspection ---------------------------------------------------------

    def terms(self) -> list[tuple[dict[int, int], int]]:
        """``(exponents, coefficient)`` pairs in canonical order."""
        m = self.complex.m
        keys = sorted(self._terms, key=lambda k: _canonical_key(k, m))
        return [(_unpack(k), self._terms[k]) for k in keys]

    def coefficient(self, exponents: Mapping[int, int]) -> int:
        return self._terms.get(_pack({j: e for j, e in exponents.items() if e}), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def homogeneous_part(self, degree: int) -> SRElement:
        """Part of cohomological degree ``degree`` (each ``v_j`` has degree 2)."""
        if degree % 2:
            return SRElement(self.complex, {})
        half = degree // 2
        return SRElement(
            self.complex, {k: c for k, c in self._terms.items() if _degree(k) == half}
        )

    def degrees(self) -> set[int]:
        return {2 * _degree(k) for k in self._terms}

    def is_homogeneous(self, degree: int) -> bool:
        return all(2 * _degree(k) == degree for k in self._terms)

    def linear_coefficients(self) -> dict[int, int]:
        """Coefficients ``a_j`` of a degree-2 element ``sum_j a_j v_j``."""
        out = {}
        for k, c in self._terms.items():
            exps = _unpack(k)
            if len(exps) != 1 or next(iter(exps.values())) != 1:
                raise ValueError("element is not homogeneous of degree 2")
            out[next(iter(exps))] = c
        return out

    # -- arithmetic ---------------------------------------------------------

    def _same_ring(self, other: SRElement) -> None:
        if other.complex is not self.complex and other.complex != self.complex:
            raise AmbientMismatchError("elements live in the rings of different complexes")

    def _coerce(self, other) -> SRElement | None:
        if isinstance(other, SRElement):
            self._same_ring(other)
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return constant(self.complex, other)
        return None

    def __add__(self, other) -> SRElement:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        _check_coefs(out)
        return SRElement(self.complex, out)

    __radd__ = __add__

    def __neg__(self) -> SRElement:
        out = {k: -c for k, c in self._terms.items()}
        _check_coefs(out)
        return SRElement(self.complex, out)

    def __sub__(self, other) -> SRElement:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> SRElement:
        return (-self) + other

    def __mul__(self, other) -> SRElement:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return multiply(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> SRElement:
        if n < 0:
            raise ValueError("negative powers are not defined")
        out = constant(self.complex, 1)
        for _ in range(n):
            out = multiply(out, self)
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and not isinstance(other, bool):
            other = constant(self.complex, other)
        if not isinstance(other, SRElement):
            return NotImplemented
        self._same_ring(other)
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.complex, frozenset(self._terms.items())))

    # -- output -------------------------------------------------------------

    def to_json(self) -> list[dict]:
        return [
            {"coef": c, "mono": {str(j): e for j, e in sorted(exps.items())}}
            for exps, c in self.terms()
        ]

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exps, c in self.terms():
            mono = "*".join(f"v{j}" if e == 1 else f"v{j}^{e}" for j, e in sorted(exps.items()))
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"SRElement({self})"


def _mono_items(mono) -> Iterable[tuple[int, int]]:
    if isinstance(mono, Mapping):
        return mono.items()
    return mono


def reduce(raw, K: SimplicialComplex) -> SRElement:
    """Reduce a raw integer polynomial into Z[K].

    ``raw`` is a mapping or an iterable of ``(monomial, coefficient)`` pairs;
    a monomial is a mapping ``{vertex: exponent}`` or an iterable of
    ``(vertex, exponent)`` pairs. Terms with non-face support are dropped.
    """
    items = raw.items() if isinstance(raw, Mapping) else raw
    ring = _ring(K)
    out: dict[int, int] = {}
    for mono, coef in items:
        if isinstance(coef, bool) or not isinstance(coef, int):
            raise TypeError(f"coefficient {coef!r} is not an integer")
        if coef > INT64_MAX or coef < INT64_MIN:
            raise OverflowError(f"coefficient {coef} leaves the signed 64-bit range")
        exps: dict[int, int] = {}
        for j, e in _mono_items(mono):
            if not 1 <= j <= K.m:
                raise ValueError(f"variable v{j} outside [1, {K.m}]")
            if e < 0:
                raise ValueError(f"negative exponent on v{j}")
            if e > _MAX_EXP:
                raise OverflowError(f"exponent {e} on v{j} exceeds {_MAX_EXP}")
            if e:
                exps[j] = exps.get(j, 0) + e
        key = _pack(exps)
        if not ring.is_alive(key):
            continue
        s = out.get(key, 0) + coef
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    _check_coefs(out)
    return SRElement(K, out)


def multiply(a: SRElement, b: SRElement) -> SRElement:
    a._same_ring(b)
    return SRElement(a.complex, _multiply_terms(_ring(a.complex), a._terms, b._terms))


def _multiply_terms(ring: _Ring, ta: dict[int, int], tb: dict[int, int]) -> dict[int, int]:
    alive_get = ring.alive.get
    out: dict[int, int] = {}
    out_get = out.get
    b_items = list(tb.items())
    for ka, ca in ta.items():
        for kb, cb in b_items:
            k = ka + kb
            ok = alive_get(k)
            if ok is None:
                ok = ring.is_alive(k)
            if ok:
                out[k] = out_get(k, 0) + ca * cb
    zeros = []
    for k, c in out.items():
        if not c:
            zeros.append(k)
        elif c > INT64_MAX or c < INT64_MIN:
            raise OverflowError(f"coefficient {c} leaves the signed 64-bit range")
    for k in zeros:
        del out[k]
    return out


def product(factors: Iterable[SRElement], K: SimplicialComplex) -> SRElement:
    """Product of ``factors``, reducing after every step."""
    ring = _ring(K)
    acc = {0: 1}
    for f in factors:
        if f.complex is not K and f.complex != K:
            raise AmbientMismatchError("elements live in the rings of different complexes")
        acc = _multiply_terms(ring, acc, f._terms)
    return SRElement(K, acc)


def one_plus(x: SRElement, c: int = 1) -> SRElement:
    """``1 + c*x`` without going through generic coercion."""
    terms = {k: c * v for k, v in x._terms.items()}
    s = terms.get(0, 0) + 1
    if s:
        terms[0] = s
    else:
        del terms[0]
    _check_coefs(terms)
    return SRElement(x.complex, terms)


def variable(K: SimplicialComplex, j: int) -> SRElement:
    return reduce([({j: 1}, 1)], K)


def constant(K: SimplicialComplex, c: int) -> SRElement:
    if c > INT64_MAX or c < INT64_MIN:
        raise OverflowError(f"coefficient {c} leaves the signed 64-bit range")
    return SRElement(K, {0: c} if c else {})


@lru_cache(maxsize=512)
def total_chern(K: SimplicialComplex) -> SRElement:
    """``prod_j (1 + v_j)`` in Z[K]."""
    return product((constant(K, 1) + variable(K, j) for j in range(1, K.m + 1)), K)


@lru_cache(maxsize=512)
def total_pontrjagin(K: SimplicialComplex) -> SRElement:
    """``prod_j (1 - v_j^2)`` in Z[K]."""
    return product(
        (reduce([({}, 1), ({j: 2}, -1)], K) for j in range(1, K.m + 1)), K
    )


def elementary_symmetric_class(K: SimplicialComplex, i: int) -> SRElement:
    """``sigma_i(v_1, ..., v_m)`` in Z[K], the i-th Chern class."""
    if i < 0:
        raise ValueError("i must be non-negative")
    return total_chern(K).homogeneous_part(2 * i)


@lru_cache(maxsize=1024)
def _face_simplex(m: int, face: Face) -> SimplicialComplex:
    return SimplicialComplex(m, [face])


def restrict_to_face(x: SRElement, face: Iterable[int]) -> SRElement:
    """Set ``v_j = 0`` for every ``j`` outside ``face``.

    The result lives in the polynomial ring on ``{v_j : j in face}``, modelled
    as Z[Delta(face)] on the same vertex set.
    """
    face = tuple(sorted(face))
    K = x.complex
    mask = mask_of(face)
    if mask not in K.face_masks:
        raise ValueError(f"{list(face)} is not a face of the complex")
    target = _face_simplex(K.m, face)
    terms = {k: c for k, c in x._terms.items() if _support(k) & ~mask == 0}
    return SRElement(target, terms)
