"""Shared builders for the test suite."""

import json
import random
from fractions import Fraction
from pathlib import Path

from sullivan.apl import Cochain, elementary_cochain_to_form
from sullivan.simplicial import FiniteSimplicialSet, SimplexRef, from_facets

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load_fixture(name: str) -> FiniteSimplicialSet:
    return FiniteSimplicialSet.load(FIXTURES / f"{name}.json")


def minimal_sphere(n: int) -> FiniteSimplicialSet:
    """``S^n`` as one vertex and one nondegenerate ``n``-simplex."""
    simplices = [["*"]] + [[] for _ in range(n - 1)] + [["e"]]
    faces = {"e": [SimplexRef(tuple(range(n - 2, -1, -1)), "*") for _ in range(n + 1)]}
    return FiniteSimplicialSet(simplices, faces)


def random_complex(rng: random.Random, max_dim: int = 3, max_simplices: int = 30) -> FiniteSimplicialSet:
    """Random simplicial complex with at most ``max_simplices`` nondegenerate simplices."""
    while True:
        nverts = rng.randint(2, 6)
        facets = []
        for _ in range(rng.randint(1, 4)):
            k = rng.randint(1, min(max_dim, nverts - 1)) + 1
            facets.append(sorted(rng.sample(range(nverts), k)))
        X = from_facets(facets)
        if sum(X.f_vector) <= max_simplices:
            return X


def random_cochain(rng: random.Random, X: FiniteSimplicialSet, k: int) -> Cochain:
    n = len(X.nondegenerate(k)) if 0 <= k <= X.dim else 0
    return Cochain.from_vector(X, k, [Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(n)])


def random_form(rng: random.Random, X: FiniteSimplicialSet, k: int):
    """Compatible polynomial form: ``E(a) E(b) E(c) + E(c')`` with ``a, b`` of degree 0."""
    a, b = random_cochain(rng, X, 0), random_cochain(rng, X, 0)
    c, c2 = random_cochain(rng, X, k), random_cochain(rng, X, k)
    E = elementary_cochain_to_form
    return E(a) * E(b) * E(c) + E(c2)


def canonical(data) -> str:
    return json.dumps(data, sort_keys=False, indent=2)
