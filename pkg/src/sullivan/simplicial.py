"""Finite simplicial sets and their normalized rational cochain complexes.

A simplex is addressed by a :class:`SimplexRef`: a nondegenerate target
together with a degeneracy word in Eilenberg-Zilber normal form
``s_{j1} ... s_{jr}`` with ``j1 > ... > jr``.  Internally the word is
handled as a monotone surjection ``[n] -> [k]``, which makes composing
face and degeneracy operators a matter of composing maps of ordinals.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .qcore import QMatrix, kernel_basis, rank

__all__ = [
    "SimplexRef",
    "FiniteSimplicialSet",
    "CochainComplexQ",
    "InvalidSimplicialSet",
    "standard_simplex",
    "boundary_of_simplex",
    "from_facets",
    "wedge",
    "product",
    "validate",
    "cochain_complex",
    "betti",
    "surjection_from_degeneracies",
    "degeneracies_from_surjection",
    "compose",
    "epi_mono",
]


class InvalidSimplicialSet(ValueError):
    pass


def surjection_from_degeneracies(degeneracies: Sequence[int], k: int) -> tuple[int, ...]:
    """Monotone surjection ``[k + r] -> [k]`` of the word ``s_{j1}...s_{jr}``."""
    n = k + len(degeneracies)
    js = set(degeneracies)
    eta = [0]
    for j in range(n):
        eta.append(eta[-1] + (0 if j in js else 1))
    return tuple(eta)


def degeneracies_from_surjection(eta: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted((j for j in range(len(eta) - 1) if eta[j] == eta[j + 1]), reverse=True))


def compose(outer: Sequence[int], inner: Sequence[int]) -> tuple[int, ...]:
    """``outer o inner`` for maps given as value tuples."""
    return tuple(outer[i] for i in inner)


def epi_mono(theta: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Factor a monotone map as ``mono o epi``; returns ``(epi, mono)``."""
    mono = tuple(sorted(set(theta)))
    pos = {v: i for i, v in enumerate(mono)}
    return tuple(pos[v] for v in theta), mono


@dataclass(frozen=True, order=True)
class SimplexRef:
    """``s_{j1} ... s_{jr}(target)`` in canonical (strictly decreasing) form."""

    degeneracies: tuple[int, ...]
    target: str

    def __post_init__(self):
        d = tuple(self.degeneracies)
        object.__setattr__(self, "degeneracies", d)
        if any(a <= b for a, b in zip(d, d[1:])) or any(j < 0 for j in d):
            raise InvalidSimplicialSet(f"degeneracy word {list(d)} is not strictly decreasing")

    @property
    def is_degenerate(self) -> bool:
        return bool(self.degeneracies)

    def to_json(self) -> dict:
        return {"degeneracies": list(self.degeneracies), "target": self.target}

    @classmethod
    def from_json(cls, data) -> "SimplexRef":
        if isinstance(data, str):
            return cls((), data)
        degs = list(data.get("degeneracies", []))
        # accept any order on input; the normal form is strictly decreasing
        if len(set(degs)) != len(degs):
            raise InvalidSimplicialSet(f"repeated degeneracy index in {degs}")
        return cls(tuple(sorted(degs, reverse=True)), str(data["target"]))


@dataclass
class FiniteSimplicialSet:
    """Nondegenerate simplices per dimension plus their face references.

    ``faces[x]`` lists ``d_0 x, ..., d_n x`` for every nondegenerate
    ``n``-simplex ``x`` with ``n >= 1``.
    """

    simplices: list[list[str]]
    faces: dict[str, list[SimplexRef]] = field(default_factory=dict)

    def __post_init__(self):
        while len(self.simplices) > 1 and not self.simplices[-1]:
            self.simplices.pop()
        self._dim_of = {}
        for n, ids in enumerate(self.simplices):
            for x in ids:
                if x in self._dim_of:
                    raise InvalidSimplicialSet(f"duplicate simplex id {x!r}")
                self._dim_of[x] = n
        self._index = {x: i for ids in self.simplices for i, x in enumerate(ids)}
        self._op_cache: dict = {}

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def dim_of(self, x: str) -> int:
        return self._dim_of[x]

    def index_of(self, x: str) -> int:
        return self._index[x]

    def nondegenerate(self, n: int) -> list[str]:
        return self.simplices[n] if 0 <= n < len(self.simplices) else []

    def all_simplices(self) -> Iterable[str]:
        for ids in self.simplices:
            yield from ids

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(ids) for ids in self.simplices)

    def num_nondegenerate(self) -> int:
        return sum(self.f_vector)

    # -- simplicial operators -------------------------------------------------

    def face(self, x: str, i: int) -> SimplexRef:
        return self.faces[x][i]

    def _inject(self, x: str, iota: tuple[int, ...]) -> tuple[tuple[int, ...], str]:
        """``iota^* x`` for nondegenerate ``x``, as ``(surjection, target)``."""
        key = (x, iota)
        hit = self._op_cache.get(key)
        if hit is not None:
            return hit
        n = self._dim_of[x]
        if len(iota) == n + 1:
            res = (tuple(range(n + 1)), x)
        else:
            missing = max(set(range(n + 1)) - set(iota))
            rest = tuple(v if v < missing else v - 1 for v in iota)
            ref = self.faces[x][missing]
            eta = surjection_from_degeneracies(ref.degeneracies, self._dim_of[ref.target])
            res = self._apply_surj(eta, ref.target, rest)
        self._op_cache[key] = res
        return res

    def _apply_surj(self, eta, target, theta) -> tuple[tuple[int, ...], str]:
        epi, mono = epi_mono(compose(eta, theta))
        eta2, tgt2 = self._inject(target, mono)
        return compose(eta2, epi), tgt2

    def apply(self, ref: SimplexRef, theta: Sequence[int]) -> SimplexRef:
        """``theta^*(ref)`` for a monotone ``theta: [p] -> [n]``."""
        k = self._dim_of[ref.target]
        eta = surjection_from_degeneracies(ref.degeneracies, k)
        if theta and max(theta) >= len(eta):
            raise ValueError("operator does not fit the simplex dimension")
        eta2, tgt = self._apply_surj(eta, ref.target, tuple(theta))
        return SimplexRef(degeneracies_from_surjection(eta2), tgt)

    def pull(self, x: str, theta: Sequence[int]) -> SimplexRef:
        """``theta^*(x)`` for a nondegenerate ``x``."""
        return self.apply(SimplexRef((), x), theta)

    def face_of_ref(self, ref: SimplexRef, i: int) -> SimplexRef:
        n = self._dim_of[ref.target] + len(ref.degeneracies)
        return self.apply(ref, tuple(j for j in range(n + 1) if j != i))

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "simplices": [list(ids) for ids in self.simplices],
            "faces": {x: [r.to_json() for r in self.faces[x]] for ids in self.simplices[1:] for x in ids},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, ensure_ascii=False)

    @classmethod
    def from_json(cls, data: dict) -> "FiniteSimplicialSet":
        try:
            simplices = [[str(x) for x in ids] for ids in data["simplices"]]
            faces = {str(x): [SimplexRef.from_json(r) for r in refs] for x, refs in data.get("faces", {}).items()}
        except (KeyError, TypeError, AttributeError) as exc:
            raise InvalidSimplicialSet(f"malformed simplicial set JSON: {exc}") from exc
        X = cls(simplices, faces)
        if "dim" in data and int(data["dim"]) != X.dim:
            raise InvalidSimplicialSet(f"declared dim {data['dim']} but top nondegenerate simplices are in dim {X.dim}")
        return X

    @classmethod
    def load(cls, path) -> "FiniteSimplicialSet":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def validate(X: FiniteSimplicialSet) -> list[str]:
    """All violated invariants of ``X``; empty when ``X`` is a valid simplicial set."""
    problems = []
    if not X.simplices or not X.simplices[0]:
        problems.append("no vertices")
    for x in X.nondegenerate(0):
        if X.faces.get(x):
            problems.append(f"vertex {x}: vertices have no faces")
    for x in X.faces:
        if x not in X._dim_of:
            problems.append(f"faces given for unknown simplex {x}")
    structural_ok = True
    for n in range(1, X.dim + 1):
        for x in X.nondegenerate(n):
            refs = X.faces.get(x)
            if refs is None or len(refs) != n + 1:
                problems.append(f"simplex {x} (dim {n}): expected {n + 1} faces, got {0 if refs is None else len(refs)}")
                structural_ok = False
                continue
            for i, ref in enumerate(refs):
                if ref.target not in X._dim_of:
                    problems.append(f"simplex {x}: face {i} targets unknown simplex {ref.target}")
                    structural_ok = False
                    continue
                k = X.dim_of(ref.target)
                if k + len(ref.degeneracies) != n - 1:
                    problems.append(
                        f"simplex {x}: face {i} = {ref} has dimension {k + len(ref.degeneracies)}, expected {n - 1}"
                    )
                    structural_ok = False
                elif ref.degeneracies and ref.degeneracies[0] > n - 2:
                    problems.append(f"simplex {x}: face {i} degeneracy index out of range")
                    structural_ok = False
    if not structural_ok:
        return problems
    X._op_cache.clear()
    for n in range(2, X.dim + 1):
        for x in X.nondegenerate(n):
            for j in range(n + 1):
                dj = X.faces[x][j]
                for i in range(j):
                    lhs = X.face_of_ref(dj, i)
                    rhs = X.face_of_ref(X.faces[x][i], j - 1)
                    if lhs != rhs:
                        problems.append(
                            f"simplex {x}: identity d{i} d{j} = d{j - 1} d{i} fails ({lhs} != {rhs})"
                        )
    return problems


def _check(X: FiniteSimplicialSet) -> None:
    problems = validate(X)
    if problems:
        raise InvalidSimplicialSet("; ".join(problems[:5]))


# -- constructors ----------------------------------------------------------------


def _sid(vertices: Sequence) -> str:
    return ",".join(str(v) for v in vertices)


def from_facets(facets: Iterable[Sequence]) -> FiniteSimplicialSet:
    """Simplicial set of an ordered simplicial complex given by its facets.

    Vertex labels are sorted to orient every simplex.
    """
    faces_set = set()
    for f in facets:
        f = tuple(sorted(f, key=_vertex_key))
        for r in range(1, len(f) + 1):
            faces_set.update(itertools.combinations(f, r))
    top = max(len(s) for s in faces_set) - 1
    simplices = [sorted((s for s in faces_set if len(s) == n + 1), key=lambda s: [_vertex_key(v) for v in s])
                 for n in range(top + 1)]
    faces = {}
    for n in range(1, top + 1):
        for s in simplices[n]:
            faces[_sid(s)] = [SimplexRef((), _sid(s[:i] + s[i + 1:])) for i in range(n + 1)]
    return FiniteSimplicialSet([[_sid(s) for s in ids] for ids in simplices], faces)


def _vertex_key(v):
    return (0, v, "") if isinstance(v, int) else (1, 0, str(v))


def standard_simplex(n: int) -> FiniteSimplicialSet:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return from_facets([tuple(range(n + 1))])


def boundary_of_simplex(n: int) -> FiniteSimplicialSet:
    """The boundary of the ``n``-simplex, a triangulated ``(n-1)``-sphere."""
    if n < 1:
        raise ValueError("boundary needs n >= 1")
    return from_facets(list(itertools.combinations(range(n + 1), n)))


def wedge(X: FiniteSimplicialSet, Y: FiniteSimplicialSet, x0: str | None = None, y0: str | None = None,
          prefixes=("a", "b")) -> FiniteSimplicialSet:
    """One-point union, identifying vertex ``x0`` of X with ``y0`` of Y."""
    x0 = X.nondegenerate(0)[0] if x0 is None else x0
    y0 = Y.nondegenerate(0)[0] if y0 is None else y0
    pa, pb = prefixes

    def rename(p, base, x):
        return f"{pa}:{x0}" if (p == pa and x == x0) or (p == pb and x == y0) else f"{p}:{x}"

    top = max(X.dim, Y.dim)
    simplices: list[list[str]] = [[] for _ in range(top + 1)]
    faces = {}
    for p, Z in ((pa, X), (pb, Y)):
        for n, ids in enumerate(Z.simplices):
            for x in ids:
                new = rename(p, Z, x)
                if new not in simplices[n]:
                    simplices[n].append(new)
                if n:
                    faces[new] = [SimplexRef(r.degeneracies, rename(p, Z, r.target)) for r in Z.faces[x]]
    return FiniteSimplicialSet(simplices, faces)


def product(X: FiniteSimplicialSet, Y: FiniteSimplicialSet) -> FiniteSimplicialSet:
    """Cartesian product ``X x Y``.

    The nondegenerate ``n``-simplices are pairs ``(a^* x, b^* y)`` of
    degenerate-or-not simplices that are not jointly degenerate; they are
    enumerated from pairs of nondegenerate simplices and shuffles.
    """
    def key(rx: SimplexRef, ry: SimplexRef) -> str:
        return f"({_ref_name(rx)}|{_ref_name(ry)})"

    top = X.dim + Y.dim
    simplices: list[list[str]] = [[] for _ in range(top + 1)]
    pairs: dict[str, tuple[SimplexRef, SimplexRef]] = {}
    for p in range(X.dim + 1):
        for q in range(Y.dim + 1):
            for n in range(max(p, q), p + q + 1):
                for ex in _surjections(n, p):
                    for ey in _surjections(n, q):
                        if set(degeneracies_from_surjection(ex)) & set(degeneracies_from_surjection(ey)):
                            continue
                        for x in X.nondegenerate(p):
                            for y in Y.nondegenerate(q):
                                rx = SimplexRef(degeneracies_from_surjection(ex), x)
                                ry = SimplexRef(degeneracies_from_surjection(ey), y)
                                name = key(rx, ry)
                                pairs[name] = (rx, ry)
                                simplices[n].append(name)
    for ids in simplices:
        ids.sort()
    faces = {}
    for n in range(1, top + 1):
        for name in simplices[n]:
            rx, ry = pairs[name]
            out = []
            for i in range(n + 1):
                fx, fy = X.face_of_ref(rx, i), Y.face_of_ref(ry, i)
                common = sorted(set(fx.degeneracies) & set(fy.degeneracies), reverse=True)
                # factor out the common degeneracies: s_J (x', y')
                ex = surjection_from_degeneracies(fx.degeneracies, X.dim_of(fx.target))
                ey = surjection_from_degeneracies(fy.degeneracies, Y.dim_of(fy.target))
                sc = surjection_from_degeneracies(common, n - 1 - len(common))
                sec = _section(sc)
                rx2 = SimplexRef(degeneracies_from_surjection(compose(ex, sec)), fx.target)
                ry2 = SimplexRef(degeneracies_from_surjection(compose(ey, sec)), fy.target)
                out.append(SimplexRef(tuple(common), key(rx2, ry2)))
            faces[name] = out
    return FiniteSimplicialSet(simplices, faces)


def _ref_name(r: SimplexRef) -> str:
    return "s" + "".join(map(str, r.degeneracies)) + ":" + r.target if r.degeneracies else r.target


def _section(eta: Sequence[int]) -> tuple[int, ...]:
    """The first-index section of a monotone surjection."""
    out = []
    for i, v in enumerate(eta):
        if v == len(out):
            out.append(i)
    return tuple(out)


def _surjections(n: int, k: int):
    """All monotone surjections ``[n] -> [k]``."""
    for js in itertools.combinations(range(n), n - k):
        yield surjection_from_degeneracies(sorted(js, reverse=True), k)


# -- cochains ---------------------------------------------------------------------


@dataclass
class CochainComplexQ:
    """Normalized cochains: ``bases[k]`` are the nondegenerate k-simplices and
    ``d[k]`` is the coboundary ``C^k -> C^{k+1}`` (rows index (k+1)-simplices)."""

    bases: list[list[str]]
    d: list[QMatrix]

    def dim(self, k: int) -> int:
        return len(self.bases[k]) if 0 <= k < len(self.bases) else 0

    def coboundary(self, k: int) -> QMatrix:
        if k < 0:
            return QMatrix(self.dim(0), 0)
        if k >= len(self.d):
            return QMatrix(0, self.dim(k))
        return self.d[k]

    def apply_d(self, k: int, vec: Sequence) -> list[Fraction]:
        return self.coboundary(k) @ list(vec)

    @cached_property
    def _ranks(self) -> dict[int, int]:
        return {k: rank(m) for k, m in enumerate(self.d)}

    def betti(self, k: int) -> int:
        if k < 0:
            raise ValueError("degree must be nonnegative")
        rk = self._ranks.get(k, 0)
        rk_prev = self._ranks.get(k - 1, 0)
        return self.dim(k) - rk - rk_prev

    def cohomology_basis(self, k: int) -> list[list[Fraction]]:
        """Canonical cocycle representatives of a basis of ``H^k``."""
        from .qcore import complete_basis
        cocycles = kernel_basis(self.coboundary(k))
        prev = self.coboundary(k - 1)
        boundaries = [list(col) for col in zip(*prev.to_rows())] if prev.rows and prev.cols else []
        chosen = complete_basis(boundaries, cocycles)
        return [cocycles[i] for i in chosen]


def cochain_complex(X: FiniteSimplicialSet) -> CochainComplexQ:
    """Coboundary ``(d psi)(x) = sum_i (-1)^i psi(d_i x)``, degenerate faces dropped."""
    _check(X)
    bases = [list(ids) for ids in X.simplices]
    ds = []
    for k in range(X.dim):
        m = QMatrix(len(bases[k + 1]), len(bases[k]))
        for r, x in enumerate(bases[k + 1]):
            for i, ref in enumerate(X.faces[x]):
                if ref.is_degenerate:
                    continue
                c = X.index_of(ref.target)
                m[r, c] = m[r, c] + (-1) ** i
        ds.append(m)
    return CochainComplexQ(bases, ds)


def betti(X: FiniteSimplicialSet, k: int) -> int:
    if k < 0:
        raise ValueError("degree must be nonnegative")
    return cochain_complex(X).betti(k)
