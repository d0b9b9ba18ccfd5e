"""Inductive construction of n-minimal Sullivan models.

The algebra ``A`` is only touched through a reduction ``(f, g, h)`` onto a
finite cochain complex ``C``: every linear system is solved in ``C`` and
carried back to ``A`` with ``g`` and ``h`` using ``g f = id + h d + d h``.
For a finite simplicial set, ``A = A_PL(X)``, ``C`` its normalized
cochains, and ``(f, g, h) = (I, E, S)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .apl import AplElement, Cochain, dupont_homotopy, elementary_cochain_to_form, integrate_form
from .dga import DgaMorphism, Element, FreeDga
from .qcore import QMatrix, complete_basis, kernel_basis, rank, solve_linear
from .simplicial import CochainComplexQ, FiniteSimplicialSet, cochain_complex

__all__ = [
    "AplAlgebra",
    "DegreeCapExceeded",
    "InternalConsistencyError",
    "NotSimplyConnected",
    "EffectivePresentation",
    "ModelState",
    "AuditReport",
    "apl_presentation",
    "base_stage",
    "new_cocycle_generators",
    "kernel_killers",
    "extend_stage",
    "minimal_model",
    "audit_stage",
]

log = logging.getLogger(__name__)

DEFAULT_DEGREE_CAP = 64


class DegreeCapExceeded(RuntimeError):
    pass


class InternalConsistencyError(RuntimeError):
    pass


class NotSimplyConnected(ValueError):
    pass


class AplAlgebra:
    """Adapter exposing ``A_PL(X)`` to :class:`DgaMorphism`."""

    def __init__(self, X: FiniteSimplicialSet, degree_cap: int = DEFAULT_DEGREE_CAP):
        self.X = X
        self.degree_cap = degree_cap
        self._one = AplElement.unit(X)

    def one(self):
        return self._one

    def zero_like(self, degree=0):
        return AplElement(self.X, degree)

    def mul(self, a, b):
        out = a * b
        if out.poly_degree() > self.degree_cap:
            raise DegreeCapExceeded(
                f"polynomial degree {out.poly_degree()} exceeds the cap {self.degree_cap}")
        return out

    def add(self, a, b):
        return a + b

    def scale(self, a, c):
        return a.scale(c)

    def diff(self, a):
        return a.diff()

    def is_zero(self, a):
        return a.is_zero()


@dataclass
class EffectivePresentation:
    """A DGA with a reduction ``f: A -> C``, ``g: C -> A``, ``h: A -> A`` onto
    a finite cochain complex ``C``.

    ``f`` returns coordinate vectors in ``C``; ``g`` takes ``(degree, vector)``.
    """

    algebra: object
    effective: CochainComplexQ
    f: Callable[[object], list]
    g: Callable[[int, Sequence], object]
    h: Callable[[object], object]

    def check_simply_connected(self) -> None:
        b0, b1 = self.effective.betti(0), self.effective.betti(1)
        if b0 != 1:
            raise NotSimplyConnected(f"H^0 has dimension {b0}; the input must be connected")
        if b1 != 0:
            raise NotSimplyConnected(f"H^1 has dimension {b1}; the input is not simply connected")


def apl_presentation(X: FiniteSimplicialSet, degree_cap: int = DEFAULT_DEGREE_CAP) -> EffectivePresentation:
    """``A_PL(X)`` reduced onto ``C^*(X; Q)`` by ``(I, E, S)``."""
    C = cochain_complex(X)
    return EffectivePresentation(
        algebra=AplAlgebra(X, degree_cap),
        effective=C,
        f=lambda a: list(integrate_form(a).values),
        g=lambda k, v: elementary_cochain_to_form(Cochain.from_vector(X, k, v)),
        h=dupont_homotopy,
    )


@dataclass
class ModelState:
    """``m_k: (Lambda V^{<=k}, d) -> A`` after stage ``k``."""

    model: FreeDga
    morphism: DgaMorphism
    stage: int

    def images(self) -> list:
        return self.morphism.images

    def to_json(self) -> dict:
        data = self.model.to_json()
        data["stage"] = self.stage
        return data


def _generator_name(degree: int, index: int) -> str:
    return f"v{degree}_{index}"


def _coboundary_columns(C: CochainComplexQ, q: int) -> list[list[Fraction]]:
    """Columns of ``d^{q-1}``: images of the basis of ``C^{q-1}`` in ``C^q``."""
    if q <= 0:
        return []
    m = C.coboundary(q - 1)
    if not m.cols or not m.rows:
        return [[Fraction(0)] * C.dim(q) for _ in range(m.cols)]
    return [list(c) for c in zip(*m.to_rows())]


def _solve_columns(columns: list[list[Fraction]], rhs: Sequence, nrows: int) -> list[Fraction] | None:
    A = QMatrix.from_columns(columns, nrows) if columns else QMatrix(nrows, 0)
    return solve_linear(A, rhs)


def base_stage(P: EffectivePresentation) -> ModelState:
    """``V^2``: one closed generator per basis class of ``H^2``, mapped to ``g`` of
    the effective representative."""
    P.check_simply_connected()
    model = FreeDga([])
    state = ModelState(model, DgaMorphism(model, P.algebra, []), 1)
    ws = new_cocycle_generators(state, P)
    return extend_stage(state, ws, [])


def new_cocycle_generators(state: ModelState, P: EffectivePresentation) -> list:
    """Elements ``w_p`` of ``A^{k+1}`` completing ``Im H^{k+1}(m_k)`` to ``H^{k+1}(A)``."""
    q = state.stage + 1
    C = P.effective
    U = C.cohomology_basis(q)
    if not U:
        return []
    B = _coboundary_columns(C, q)
    gammas = []
    for g_i in state.model.cocycles(q):
        image = P.f(state.morphism(g_i))
        sol = _solve_columns(U + B, image, C.dim(q))
        if sol is None:
            raise InternalConsistencyError(f"f m(g) is not a cocycle class in degree {q}")
        gammas.append(sol[:len(U)])
    units = [[Fraction(int(i == j)) for i in range(len(U))] for j in range(len(U))]
    chosen = complete_basis(gammas, units)
    return [P.g(q, U[j]) for j in chosen]


def kernel_killers(state: ModelState, P: EffectivePresentation) -> list[tuple[Element, object]]:
    """Pairs ``(z_q, b_q)``: ``[z_q]`` a basis of ``ker H^{k+2}(m_k)`` and ``m_k(z_q) = d b_q``."""
    q = state.stage + 2
    C = P.effective
    A = state.model
    cocycles = A.cocycles(q)
    if not cocycles:
        return []
    images = [state.morphism(z) for z in cocycles]
    F = [P.f(a) for a in images]
    D = _coboundary_columns(C, q)
    cols = F + [[-x for x in col] for col in D]
    M = QMatrix.from_columns(cols, C.dim(q)) if cols else QMatrix(C.dim(q), 0)
    null = kernel_basis(M)
    nz = len(cocycles)
    exact = A.coboundary_vectors(q)
    cand, alphas = [], []
    for v in null:
        beta = v[:nz]
        z = {}
        for b, g_i in zip(beta, cocycles):
            if b:
                z = A.add(z, g_i, b)
        cand.append(A.vector(z, q))
        alphas.append(v[nz:])
    out = []
    for idx in complete_basis(exact, cand):
        z = A.from_vector(cand[idx], q)
        mz = state.morphism(z)
        b = P.algebra.add(P.g(q - 1, alphas[idx]), P.algebra.scale(P.h(mz), -1))
        if not P.algebra.is_zero(P.algebra.add(mz, P.algebra.scale(P.algebra.diff(b), -1))):
            raise InternalConsistencyError(f"m(z) != d b for a kernel class in degree {q}")
        out.append((z, b))
    return out


def extend_stage(state: ModelState, ws: list, zbs: list) -> ModelState:
    """Adjoin ``w'_p`` (``d = 0``, ``m = w_p``) and ``b'_q`` (``d = z_q``, ``m = b_q``) in degree ``k + 1``."""
    deg = state.stage + 1
    A = state.model
    start = A.ngens
    new = []
    for i, _ in enumerate(ws):
        new.append((_generator_name(deg, start + i), deg, {}))
    for i, (z, _) in enumerate(zbs):
        new.append((_generator_name(deg, start + len(ws) + i), deg, z))
    model = A.extend(new) if new else A
    images = list(state.morphism.images) + list(ws) + [b for _, b in zbs]
    morphism = DgaMorphism(model, state.morphism.target, images)
    pad = (0,) * len(new)
    morphism._cache.update({m + pad: v for m, v in state.morphism._cache.items()})
    bad = [v for v in morphism.violations() if any(v.endswith(n) for n, _, _ in new)]
    if bad:
        raise InternalConsistencyError("; ".join(bad))
    if not model.is_minimal():
        raise InternalConsistencyError("constructed differential is not decomposable")
    log.debug("stage %d: added %d closed and %d killing generators", deg, len(ws), len(zbs))
    return ModelState(model, morphism, deg)


def minimal_model(P: EffectivePresentation, n: int) -> ModelState:
    """The ``n``-minimal model: generators in degrees ``2..n``, ``H^{<=n}`` iso, ``H^{n+1}`` mono."""
    if n < 2:
        raise ValueError("n must be at least 2")
    state = base_stage(P)
    while state.stage < n:
        ws = new_cocycle_generators(state, P)
        zbs = kernel_killers(state, P)
        state = extend_stage(state, ws, zbs)
    return state


@dataclass
class AuditReport:
    stage: int
    rows: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r["ok"] for r in self.rows)

    def failures(self) -> list[str]:
        return [r["note"] for r in self.rows if not r["ok"]]

    def __str__(self) -> str:
        lines = [f"audit of stage {self.stage}: {'PASS' if self.passed else 'FAIL'}"]
        for r in self.rows:
            lines.append(
                f"  H^{r['degree']}: model {r['model_dim']}, target {r['target_dim']}, image rank {r['rank']}"
                f" -> {'ok' if r['ok'] else r['note']}")
        return "\n".join(lines)


def audit_stage(state: ModelState, P: EffectivePresentation, k: int | None = None) -> AuditReport:
    """Certify that ``H^i(m)`` is iso for ``i <= k`` and mono for ``i = k + 1``.

    Cohomology maps are read off through ``f``: since ``f`` is a
    quasi-isomorphism, ``H(m)`` and ``H(f m)`` have the same rank.
    """
    k = state.stage if k is None else k
    A, C = state.model, P.effective
    report = AuditReport(k)
    for i in range(k + 2):
        Z = A.cocycles(i)
        dim_model = len(Z) - rank(A.coboundary_vectors(i)) if A.coboundary_vectors(i) else len(Z)
        dim_target = C.betti(i)
        BC = _coboundary_columns(C, i)
        images = [P.f(state.morphism(z)) for z in Z]
        rk_b = rank(BC) if BC else 0
        rk = (rank(BC + images) if BC + images else 0) - rk_b
        injective = rk == dim_model
        surjective = rk == dim_target
        ok = injective and (surjective or i == k + 1)
        note = ""
        if not injective:
            note = f"H^{i}(m) not injective"
        elif not ok:
            note = f"H^{i}(m) not surjective"
        report.rows.append({"degree": i, "model_dim": dim_model, "target_dim": dim_target,
                            "rank": rk, "ok": ok, "note": note})
    return report
