from __future__ import annotations

import random

import pytest

from djsplit.complex_core import SimplicialComplex, generate_family, random_complex

ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def corpus() -> list[tuple[str, SimplicialComplex]]:
    """Acceptance corpus: simplex boundaries, cross-polytopes, cycles, random."""
    out = []
    for m in range(2, 8):
        out.append((f"simplex-boundary-{m}", generate_family("simplex-boundary", m)))
    for d in range(1, 5):
        out.append((f"cross-polytope-{d}", generate_family("cross-polytope", d)))
    for k in range(3, 13):
        out.append((f"cycle-{k}", generate_family("cycle", k)))
    rng = random.Random(20240607)
    for i in range(200):
        m = rng.randint(1, 10)
        out.append((f"random-{i}", random_complex(m, rng)))
    return out


CORPUS = corpus()


@pytest.fixture
def cycle4() -> SimplicialComplex:
    return generate_family("cycle", 4)


@pytest.fixture
def octahedron() -> SimplicialComplex:
    return generate_family("cross-polytope", 3)


@pytest.fixture
def record():
    def _record(number: int, name: str, ok: bool, detail: str = "") -> None:
        ACCEPTANCE[f"{number}"] = (ok, f"{name}{': ' + detail if detail else ''}")

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=int):
        ok, text = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {text}")
