"""Splitting certificates in Z[K] and their relation to colorings.

A certificate is a list of degree-2 classes ``x_1, ..., x_r``. It certifies
the Chern splitting when ``prod (1 + x_i) = prod (1 + v_j)`` and the
Pontrjagin splitting when ``prod (1 - x_i^2) = prod (1 - v_j^2)``. Both are
exact identities in Z[K]; they are the cohomological shadow of a bundle
splitting, not a bundle isomorphism.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .coloring import Coloring, chromatic_number, find_coloring, is_coloring
from .complex_core import Face, SimplicialComplex
from .sr_algebra import (
    AmbientMismatchError,
    SRElement,
    constant,
    multiply,
    one_plus,
    product,
    reduce,
    restrict_to_face,
    total_chern,
    total_pontrjagin,
)

__all__ = [
    "MODES",
    "ExtractionError",
    "SplittingCertificate",
    "classes_from_assignment",
    "certificate_from_coloring",
    "verify_chern_splitting",
    "verify_pontrjagin_splitting",
    "extract_coloring",
    "equivalence_report",
    "certificate_from_json",
    "classes_from_json",
    "failing_faces",
]

MODES = ("chern", "pontrjagin", "both")
LABEL = "cohomological certificate"


class ExtractionError(ValueError):
    """Classes do not determine a coloring.

    ``vertex``, ``face`` and ``class_index`` name the offending object when
    there is one.
    """

    def __init__(
        self,
        message: str,
        *,
        vertex: int | None = None,
        face: Face | None = None,
        class_index: int | None = None,
    ):
        super().__init__(message)
        self.vertex = vertex
        self.face = face
        self.class_index = class_index

    def to_json(self) -> dict:
        return {
            "message": str(self),
            "vertex": self.vertex,
            "face": list(self.face) if self.face is not None else None,
            "class": self.class_index,
        }


@dataclass(frozen=True)
class SplittingCertificate:
    complex: SimplicialComplex
    classes: tuple[SRElement, ...]
    mode: str = "both"

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if len(self.classes) > self.complex.m:
            raise ValueError("a certificate has at most m classes")
        for i, x in enumerate(self.classes, start=1):
            if x.complex != self.complex:
                raise AmbientMismatchError(f"class {i} lives over a different complex")
            if not x.is_homogeneous(2):
                raise ValueError(f"class {i} is not homogeneous of degree 2")

    @property
    def r(self) -> int:
        return len(self.classes)

    @property
    def trivial_rank(self) -> int:
        return self.complex.m - self.r

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "trivial_rank": self.trivial_rank,
            "classes": [_class_to_json(x) for x in self.classes],
        }


def _class_to_json(x: SRElement) -> list[dict]:
    return [{"vertex": j, "coef": c} for j, c in sorted(x.linear_coefficients().items())]


def _linear(K: SimplicialComplex, coefs: dict[int, int]) -> SRElement:
    return reduce([({j: 1}, c) for j, c in coefs.items()], K)


def classes_from_json(K: SimplicialComplex, data) -> list[SRElement]:
    """Read classes as ``[[{"vertex": j, "coef": a}, ...], ...]``.

    Each class may also be written in the SRElement form
    ``[{"coef": a, "mono": {"j": e}}, ...]``. A certificate object with a
    ``"classes"`` key is accepted as well, also nested under ``"certificate"``
    as ``certify`` prints it.
    """
    if isinstance(data, dict) and "classes" not in data and isinstance(data.get("certificate"), dict):
        data = data["certificate"]
    if isinstance(data, dict):
        if "classes" not in data:
            raise ValueError('classes document needs a "classes" list')
        data = data["classes"]
    if not isinstance(data, list):
        raise ValueError("classes must be a list")
    out = []
    for i, entry in enumerate(data, start=1):
        if not isinstance(entry, list):
            raise ValueError(f"class {i} must be a list of terms")
        raw = []
        for term in entry:
            if not isinstance(term, dict) or "coef" not in term:
                raise ValueError(f"class {i}: malformed term {term!r}")
            coef = term["coef"]
            if isinstance(coef, bool) or not isinstance(coef, int):
                raise ValueError(f"class {i}: coefficient {coef!r} is not an integer")
            if "vertex" in term:
                j = term["vertex"]
                if isinstance(j, bool) or not isinstance(j, int):
                    raise ValueError(f"class {i}: vertex {j!r} is not an integer")
                raw.append(({j: 1}, coef))
            elif "mono" in term and isinstance(term["mono"], dict):
                mono = {}
                for key, e in term["mono"].items():
                    try:
                        mono[int(key)] = int(e)
                    except (TypeError, ValueError):
                        raise ValueError(f"class {i}: malformed monomial {term['mono']!r}") from None
                raw.append((mono, coef))
            else:
                raise ValueError(f"class {i}: term needs a vertex or a mono")
        out.append(reduce(raw, K))
    return out


def certificate_from_json(K: SimplicialComplex, data: dict) -> SplittingCertificate:
    mode = data.get("mode", "both") if isinstance(data, dict) else "both"
    return SplittingCertificate(K, tuple(classes_from_json(K, data)), mode)


def classes_from_assignment(K: SimplicialComplex, g: Coloring) -> list[SRElement]:
    """``x_i = sum of v_j over j with g(j) = i``, for any assignment ``g``."""
    if g.m != K.m:
        raise ValueError(f"coloring has {g.m} entries but the complex has m={K.m}")
    return [_linear(K, {j: 1 for j in S}) for S in g.color_classes()]


def certificate_from_coloring(
    K: SimplicialComplex, g: Coloring, mode: str = "both"
) -> SplittingCertificate:
    if not is_coloring(K, g):
        raise ValueError("not a valid coloring of the complex")
    return SplittingCertificate(K, tuple(classes_from_assignment(K, g)), mode)


def _classes_of(K: SimplicialComplex, cert) -> tuple[SRElement, ...]:
    classes = cert.classes if isinstance(cert, SplittingCertificate) else tuple(cert)
    for x in classes:
        if x.complex is not K and x.complex != K:
            raise AmbientMismatchError("class lives over a different complex")
    return classes


def _chern_product(K: SimplicialComplex, classes) -> SRElement:
    return product((one_plus(x) for x in classes), K)


def _pontrjagin_product(K: SimplicialComplex, classes) -> SRElement:
    return product((one_plus(multiply(x, x), -1) for x in classes), K)


def verify_chern_splitting(K: SimplicialComplex, cert) -> bool:
    """``prod_i (1 + x_i) == prod_j (1 + v_j)`` in Z[K]."""
    return _chern_product(K, _classes_of(K, cert)) == total_chern(K)


def verify_pontrjagin_splitting(K: SimplicialComplex, cert) -> bool:
    """``prod_i (1 - x_i^2) == prod_j (1 - v_j^2)`` in Z[K]."""
    return _pontrjagin_product(K, _classes_of(K, cert)) == total_pontrjagin(K)


def _first_failing_face(difference: SRElement) -> Face:
    exps, _ = difference.terms()[0]
    return tuple(sorted(exps))


def extract_coloring(
    K: SimplicialComplex,
    classes: Sequence[SRElement],
    mode: str = "chern",
    check_faces: bool = False,
) -> Coloring:
    """Read a coloring off the coefficient columns of degree-2 classes.

    Column ``j`` is ``(a_1j, ..., a_rj)`` where ``x_i = sum_j a_ij v_j``. In
    Chern mode each column must be a unit vector; in Pontrjagin mode its one
    nonzero entry may be -1 as well. Mode ``both`` uses the Chern pattern and
    checks both identities. Ghost vertices have zero columns and get color 1.

    With ``check_faces`` every facet is also checked on its own: the
    identity restricted to the facet must hold and the induced vertex->class
    map must be injective there.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    classes = _classes_of(K, classes)
    if not classes:
        raise ExtractionError("no classes given")
    columns: dict[int, dict[int, int]] = {j: {} for j in range(1, K.m + 1)}
    for i, x in enumerate(classes, start=1):
        if x.is_zero():
            raise ExtractionError(f"class {i} is zero", class_index=i)
        try:
            coefs = x.linear_coefficients()
        except ValueError:
            raise ExtractionError(
                f"class {i} is not homogeneous of degree 2", class_index=i
            ) from None
        for j, a in coefs.items():
            columns[j][i] = a
    allowed = {1, -1} if mode == "pontrjagin" else {1}
    colors = []
    ghosts = set(K.ghost_vertices)
    for j in range(1, K.m + 1):
        col = columns[j]
        if j in ghosts:
            colors.append(1)
            continue
        if not col:
            raise ExtractionError(f"vertex {j} appears in no class", vertex=j)
        if len(col) > 1:
            raise ExtractionError(
                f"vertex {j} appears in classes {sorted(col)}", vertex=j
            )
        (i, a), = col.items()
        if a not in allowed:
            raise ExtractionError(
                f"vertex {j} has coefficient {a} in class {i}; expected "
                + ("+1 or -1" if mode == "pontrjagin" else "+1"),
                vertex=j,
                class_index=i,
            )
        colors.append(i)
    g = Coloring(tuple(colors), len(classes))

    checks = []
    if mode in ("chern", "both"):
        checks.append((_chern_product, total_chern, "Chern"))
    if mode in ("pontrjagin", "both"):
        checks.append((_pontrjagin_product, total_pontrjagin, "Pontrjagin"))
    for prod, total, name in checks:
        diff = prod(K, classes) - total(K)
        if not diff.is_zero():
            face = _first_failing_face(diff)
            raise ExtractionError(
                f"{name} identity fails at face {list(face)}", face=face
            )
    if check_faces:
        _check_facets(K, classes, g, checks)
    if not is_coloring(K, g):
        for facet in K.facets:
            if len({g.colors[j - 1] for j in facet}) != len(facet):
                raise ExtractionError(
                    f"extracted map is not injective on face {list(facet)}", face=facet
                )
    return g


def _check_facets(K, classes, g: Coloring, checks) -> None:
    for facet in K.facets:
        for prod, total, name in checks:
            lhs = restrict_to_face(prod(K, classes), facet)
            rhs = restrict_to_face(total(K), facet)
            if lhs != rhs:
                raise ExtractionError(
                    f"{name} identity fails on face {list(facet)}", face=facet
                )
        if len({g.colors[j - 1] for j in facet}) != len(facet):
            raise ExtractionError(
                f"extracted map is not injective on face {list(facet)}", face=facet
            )


def equivalence_report(K: SimplicialComplex) -> dict:
    """Run the coloring -> certificate -> coloring loop at the chromatic number."""
    r = chromatic_number(K)
    g = find_coloring(K, r)
    assert g is not None
    cert = certificate_from_coloring(K, g, "both")
    chern_ok = verify_chern_splitting(K, cert)
    pont_ok = verify_pontrjagin_splitting(K, cert)
    try:
        back = extract_coloring(K, cert.classes, "both")
        round_trip = back == g
    except ExtractionError:
        round_trip = False
    below = find_coloring(K, r - 1) if r > 1 else None
    return {
        "label": LABEL,
        "m": K.m,
        "chromatic_number": r,
        "coloring": g.to_json(),
        "certificate": cert.to_json(),
        "chern_identity": chern_ok,
        "pontrjagin_identity": pont_ok,
        "round_trip": round_trip,
        "fewer_colors_possible": below is not None,
        "conditions": {
            "(i)": True,
            "(ii)": chern_ok,
            "(iii)": pont_ok,
            "(iv)": chern_ok,
            "(v)": pont_ok,
        },
    }


def failing_faces(K: SimplicialComplex, g: Coloring) -> list[Face]:
    """Facets on which ``g`` is not injective."""
    return [f for f in K.facets if len({g.colors[j - 1] for j in f}) != len(f)]
