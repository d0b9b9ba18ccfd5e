"""Polynomial forms on a finite simplicial set and the simplicial de Rham reduction.

An :class:`AplElement` stores one :class:`PolyForm` per nondegenerate
simplex; values on degenerate simplices are recovered through degeneracy
operators.  ``E``, ``I`` and ``S`` (:func:`elementary_cochain_to_form`,
:func:`integrate_form`, :func:`dupont_homotopy`) form a reduction of
``A_PL(X)`` onto the normalized cochains with ``E I - id = S d + d S``.

The second half of the module holds the finite-dimensional reduction
toolkit: matrix reductions, dualization and composition of a pair of
reductions into homotopy-equivalence data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from . import forms
from .forms import PolyForm
from .qcore import QMatrix, complete_basis, kernel_basis, solve_linear
from .simplicial import FiniteSimplicialSet, SimplexRef, surjection_from_degeneracies

__all__ = [
    "Cochain",
    "AplElement",
    "CplElement",
    "elementary_cochain_to_form",
    "integrate_form",
    "dupont_homotopy",
    "cpl_from_cochain",
    "cpl_to_cochain",
    "ReductionTriple",
    "MatrixReduction",
    "dualize_reduction",
    "compose_equivalence",
    "homology_reduction",
    "de_rham_reduction",
]


class AmbientMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Cochain:
    """A normalized rational k-cochain on ``X``, indexed like ``X.simplices[k]``."""

    X: FiniteSimplicialSet
    degree: int
    values: tuple[Fraction, ...]

    @classmethod
    def zero(cls, X, k):
        return cls(X, k, (Fraction(0),) * len(X.nondegenerate(k)))

    @classmethod
    def from_vector(cls, X, k, vec):
        vec = tuple(Fraction(v) for v in vec)
        if len(vec) != len(X.nondegenerate(k)):
            raise ValueError(f"degree-{k} cochain needs {len(X.nondegenerate(k))} values, got {len(vec)}")
        return cls(X, k, vec)

    @classmethod
    def dual(cls, X, x: str):
        k = X.dim_of(x)
        vec = [Fraction(0)] * len(X.nondegenerate(k))
        vec[X.index_of(x)] = Fraction(1)
        return cls(X, k, tuple(vec))

    def __getitem__(self, x: str) -> Fraction:
        return self.values[self.X.index_of(x)]

    def _same(self, other):
        if self.X is not other.X or self.degree != other.degree:
            raise AmbientMismatch("cochains on different sets or degrees")

    def __add__(self, other):
        self._same(other)
        return Cochain(self.X, self.degree, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other):
        self._same(other)
        return Cochain(self.X, self.degree, tuple(a - b for a, b in zip(self.values, other.values)))

    def __neg__(self):
        return Cochain(self.X, self.degree, tuple(-a for a in self.values))

    def scale(self, c):
        c = Fraction(c)
        return Cochain(self.X, self.degree, tuple(c * a for a in self.values))

    def is_zero(self) -> bool:
        return not any(self.values)

    def diff(self) -> "Cochain":
        X, k = self.X, self.degree
        out = []
        for x in X.nondegenerate(k + 1):
            s = Fraction(0)
            for i, ref in enumerate(X.faces[x]):
                if not ref.is_degenerate:
                    v = self.values[X.index_of(ref.target)]
                    s += v if i % 2 == 0 else -v
            out.append(s)
        return Cochain(X, k + 1, tuple(out))


class AplElement:
    """Homogeneous element of ``A_PL(X)`` of degree ``degree``."""

    __slots__ = ("X", "degree", "values")

    def __init__(self, X: FiniteSimplicialSet, degree: int, values: Mapping[str, PolyForm] | None = None):
        self.X = X
        self.degree = degree
        self.values: dict[str, PolyForm] = {s: v for s, v in (values or {}).items() if not v.is_zero()}

    @classmethod
    def zero(cls, X, degree: int = 0) -> "AplElement":
        return cls(X, degree)

    @classmethod
    def unit(cls, X) -> "AplElement":
        return cls(X, 0, {x: PolyForm.const(X.dim_of(x), 1) for x in X.all_simplices()})

    def value(self, x: str) -> PolyForm:
        v = self.values.get(x)
        return v if v is not None else PolyForm(self.X.dim_of(x))

    def value_at(self, ref: SimplexRef) -> PolyForm:
        """Value on a possibly degenerate simplex ``s_J(target)``."""
        base = self.value(ref.target)
        if not ref.degeneracies:
            return base
        eta = surjection_from_degeneracies(ref.degeneracies, self.X.dim_of(ref.target))
        return forms.simplicial_op(base, eta)

    def is_zero(self) -> bool:
        return not self.values

    def _same(self, other: "AplElement"):
        if self.X is not other.X:
            raise AmbientMismatch("elements live on different simplicial sets")

    def __add__(self, other: "AplElement") -> "AplElement":
        self._same(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.degree != other.degree:
            raise ValueError("cannot add elements of different degree")
        vals = dict(self.values)
        for s, v in other.values.items():
            vals[s] = vals[s] + v if s in vals else v
        return AplElement(self.X, self.degree, vals)

    def __neg__(self) -> "AplElement":
        return AplElement(self.X, self.degree, {s: -v for s, v in self.values.items()})

    def __sub__(self, other: "AplElement") -> "AplElement":
        return self + (-other)

    def scale(self, c) -> "AplElement":
        c = Fraction(c)
        if not c:
            return AplElement(self.X, self.degree)
        return AplElement(self.X, self.degree, {s: v.scale(c) for s, v in self.values.items()})

    def __mul__(self, other):
        if not isinstance(other, AplElement):
            return self.scale(other)
        self._same(other)
        deg = self.degree + other.degree
        vals = {}
        for s, v in self.values.items():
            w = other.values.get(s)
            if w is not None:
                vals[s] = v * w
        return AplElement(self.X, deg, vals)

    __rmul__ = scale

    def diff(self) -> "AplElement":
        return AplElement(self.X, self.degree + 1, {s: v.diff() for s, v in self.values.items()})

    def __eq__(self, other):
        if not isinstance(other, AplElement):
            return NotImplemented
        return self.X is other.X and (self.is_zero() and other.is_zero() or
                                      (self.degree == other.degree and self.values == other.values))

    def __hash__(self):
        return hash((id(self.X), self.degree, frozenset(self.values.items())))

    def poly_degree(self) -> int:
        return max((v.poly_degree() for v in self.values.values()), default=0)

    def compatibility_violations(self) -> list[str]:
        """Faces on which the per-simplex values disagree."""
        X = self.X
        out = []
        for n in range(1, X.dim + 1):
            for x in X.nondegenerate(n):
                v = self.value(x)
                for i, ref in enumerate(X.faces[x]):
                    if forms.face_op(v, i) != self.value_at(ref):
                        out.append(f"value on {x} restricted by d{i} differs from value on {ref}")
        return out

    def __repr__(self):
        return f"AplElement(degree={self.degree}, support={len(self.values)} simplices)"


def apl_add(a: AplElement, b: AplElement) -> AplElement:
    return a + b


def apl_mul(a: AplElement, b: AplElement) -> AplElement:
    return a * b


def apl_diff(a: AplElement) -> AplElement:
    return a.diff()


# -- E, I, S ----------------------------------------------------------------------


def elementary_cochain_to_form(psi: Cochain) -> AplElement:
    """``E(psi)_x = sum_{f in I(k, m)} omega_f psi(f^* x)`` for ``x`` in ``X_m``."""
    X, k = psi.X, psi.degree
    vals = {}
    if not any(psi.values):
        return AplElement(X, k)
    for m in range(k, X.dim + 1):
        for x in X.nondegenerate(m):
            acc = PolyForm(m)
            for f in forms.injections(k, m):
                ref = X.pull(x, f)
                if ref.is_degenerate:
                    continue
                c = psi[ref.target]
                if c:
                    acc = acc + forms.whitney(f, m).scale(c)
            if not acc.is_zero():
                vals[x] = acc
    return AplElement(X, k, vals)


def integrate_form(phi: AplElement) -> Cochain:
    """``I(phi)_x = int_{Delta^k} phi_x`` for ``x`` in ``X_k``."""
    X, k = phi.X, phi.degree
    return Cochain(X, k, tuple(forms.integrate_top(phi.value(x)) for x in X.nondegenerate(k)))


def dupont_homotopy(phi: AplElement) -> AplElement:
    """``S(phi)_x = h_{Delta[m]}(phi_x)``; of degree one lower."""
    X = phi.X
    if phi.degree == 0:
        return AplElement(X, 0)
    vals = {s: forms.dupont_h(v) for s, v in phi.values.items()}
    return AplElement(X, phi.degree - 1, vals)


E = elementary_cochain_to_form
I = integrate_form
S = dupont_homotopy


# -- C_PL and the Watkins isomorphism ------------------------------------------


@dataclass
class CplElement:
    """A family ``x -> gamma_x in C^p(Delta[dim x])`` over the nondegenerate simplices."""

    X: FiniteSimplicialSet
    degree: int
    values: dict[str, dict[tuple[int, ...], Fraction]] = field(default_factory=dict)


def cpl_from_cochain(g: Cochain) -> CplElement:
    """``gamma_x = C^p(x_*)(g)``: evaluate ``g`` on the faces of each simplex."""
    X, p = g.X, g.degree
    vals = {}
    for m in range(p, X.dim + 1):
        for x in X.nondegenerate(m):
            local = {}
            for f in forms.injections(p, m):
                ref = X.pull(x, f)
                local[f] = Fraction(0) if ref.is_degenerate else g[ref.target]
            vals[x] = local
    return CplElement(X, p, vals)


def cpl_to_cochain(gamma: CplElement) -> Cochain:
    """``g(x) = gamma_x(c_p)`` with ``c_p`` the fundamental simplex."""
    X, p = gamma.X, gamma.degree
    c = tuple(range(p + 1))
    return Cochain(X, p, tuple(gamma.values.get(x, {}).get(c, Fraction(0)) for x in X.nondegenerate(p)))


# -- reductions ---------------------------------------------------------------------


@dataclass
class ReductionTriple:
    """``(f: A -> C, g: C -> A, h: A -> A)`` with ``f g = id``, ``g f - id = d h + h d``,
    ``f h = 0``, ``h g = 0``, ``h h = 0``.

    The maps and differentials are callables on element objects that support
    ``+``, ``-`` and ``is_zero()``.
    """

    f: Callable
    g: Callable
    h: Callable
    d_source: Callable
    d_target: Callable

    def violations(self, source_samples: Iterable = (), target_samples: Iterable = ()) -> list[str]:
        out = []
        for c in target_samples:
            if not (self.f(self.g(c)) - c).is_zero():
                out.append("f g != id")
            if not self.h(self.g(c)).is_zero():
                out.append("h g != 0")
        for a in source_samples:
            lhs = self.g(self.f(a)) - a
            rhs = self.d_source(self.h(a)) + self.h(self.d_source(a))
            if not (lhs - rhs).is_zero():
                out.append("g f - id != d h + h d")
            if not self.f(self.h(a)).is_zero():
                out.append("f h != 0")
            if not self.h(self.h(a)).is_zero():
                out.append("h h != 0")
        return sorted(set(out))


def de_rham_reduction(X: FiniteSimplicialSet) -> ReductionTriple:
    """``(I, E, S)``: A_PL(X) reduced onto the normalized cochains of X."""
    return ReductionTriple(integrate_form, elementary_cochain_to_form, dupont_homotopy,
                           lambda a: a.diff(), lambda c: c.diff())


@dataclass
class MatrixReduction:
    """A reduction between finite complexes given degreewise by matrices.

    ``kind`` is ``"cochain"`` (differentials raise degree, ``h`` lowers it)
    or ``"chain"`` (the reverse).  ``d_src[n]``/``d_tgt[n]`` start in degree
    ``n``; ``f[n]``, ``g[n]``, ``h[n]`` likewise.  Missing entries are zero.
    """

    kind: str
    src_dims: list[int]
    tgt_dims: list[int]
    d_src: dict[int, QMatrix]
    d_tgt: dict[int, QMatrix]
    f: dict[int, QMatrix]
    g: dict[int, QMatrix]
    h: dict[int, QMatrix]

    @property
    def step(self) -> int:
        return 1 if self.kind == "cochain" else -1

    def _dim(self, dims, n):
        return dims[n] if 0 <= n < len(dims) else 0

    def _get(self, table, n, rows, cols) -> QMatrix:
        m = table.get(n)
        return m if m is not None else QMatrix(rows, cols)

    def d(self, which: str, n: int) -> QMatrix:
        dims = self.src_dims if which == "src" else self.tgt_dims
        table = self.d_src if which == "src" else self.d_tgt
        return self._get(table, n, self._dim(dims, n + self.step), self._dim(dims, n))

    def fmat(self, n):
        return self._get(self.f, n, self._dim(self.tgt_dims, n), self._dim(self.src_dims, n))

    def gmat(self, n):
        return self._get(self.g, n, self._dim(self.src_dims, n), self._dim(self.tgt_dims, n))

    def hmat(self, n):
        return self._get(self.h, n, self._dim(self.src_dims, n - self.step), self._dim(self.src_dims, n))

    def violations(self) -> list[str]:
        """Check all five identities degreewise on the full matrices."""
        out = []
        degrees = range(max(len(self.src_dims), len(self.tgt_dims)))
        for n in degrees:
            a, c = self._dim(self.src_dims, n), self._dim(self.tgt_dims, n)
            if self.fmat(n) @ self.gmat(n) != QMatrix.identity(c):
                out.append(f"f g != id in degree {n}")
            for which in ("src", "tgt"):
                if not (self.d(which, n + self.step) @ self.d(which, n)).is_zero():
                    out.append(f"d d != 0 on {which} in degree {n}")
            if self.fmat(n + self.step) @ self.d("src", n) != self.d("tgt", n) @ self.fmat(n):
                out.append(f"f is not a chain map in degree {n}")
            if self.gmat(n + self.step) @ self.d("tgt", n) != self.d("src", n) @ self.gmat(n):
                out.append(f"g is not a chain map in degree {n}")
            lhs = _msub(self.gmat(n) @ self.fmat(n), QMatrix.identity(a))
            rhs = _madd(self.d("src", n - self.step) @ self.hmat(n), self.hmat(n + self.step) @ self.d("src", n))
            if lhs != rhs:
                out.append(f"g f - id != d h + h d in degree {n}")
            if not (self.fmat(n - self.step) @ self.hmat(n)).is_zero():
                out.append(f"f h != 0 in degree {n}")
            if not (self.hmat(n) @ self.gmat(n)).is_zero():
                out.append(f"h g != 0 in degree {n}")
            if not (self.hmat(n - self.step) @ self.hmat(n)).is_zero():
                out.append(f"h h != 0 in degree {n}")
        return out


def _madd(a: QMatrix, b: QMatrix) -> QMatrix:
    out = QMatrix(a.rows, a.cols)
    for (i, j), v in a.items():
        out[i, j] = v
    for (i, j), v in b.items():
        out[i, j] = out[i, j] + v
    return out


def _msub(a: QMatrix, b: QMatrix) -> QMatrix:
    return _madd(a, _mneg(b))


def _mneg(a: QMatrix) -> QMatrix:
    out = QMatrix(a.rows, a.cols)
    for (i, j), v in a.items():
        out[i, j] = -v
    return out


def dualize_reduction(r: MatrixReduction) -> MatrixReduction:
    """Apply ``Hom_Q(-, Q)``: transpose every map.

    A chain reduction ``(f, g, h): C => D`` becomes the cochain reduction
    ``(g^T, f^T, h^T): Hom(C) => Hom(D)`` with the same orientation.
    """
    kind = "cochain" if r.kind == "chain" else "chain"
    s = r.step
    # d_n : C_n -> C_{n+s} transposes to a map starting in degree n + s
    d_src = {n + s: m.transpose() for n, m in r.d_src.items()}
    d_tgt = {n + s: m.transpose() for n, m in r.d_tgt.items()}
    h = {n - s: m.transpose() for n, m in r.h.items()}
    f = {n: m.transpose() for n, m in r.g.items()}
    g = {n: m.transpose() for n, m in r.f.items()}
    return MatrixReduction(kind, list(r.src_dims), list(r.tgt_dims), d_src, d_tgt, f, g, h)


@dataclass
class EquivalenceData:
    """``f: C -> D``, ``g: D -> C`` with ``g f - id = d h_C + h_C d`` and ``f g - id = d h_D + h_D d``."""

    f: Callable
    g: Callable
    h_C: Callable
    h_D: Callable


def compose_equivalence(left: ReductionTriple, right: ReductionTriple) -> EquivalenceData:
    """Combine ``E => C`` (``left``) and ``E => D`` (``right``) into ``C <-> D`` data.

    ``f = f_R g_L``, ``g = f_L g_R``, ``h_C = f_L h_R g_L``, ``h_D = f_R h_L g_R``.
    """
    fL, gL, hL = left.f, left.g, left.h
    fR, gR, hR = right.f, right.g, right.h
    return EquivalenceData(
        f=lambda c: fR(gL(c)),
        g=lambda e: fL(gR(e)),
        h_C=lambda c: fL(hR(gL(c))),
        h_D=lambda e: fR(hL(gR(e))),
    )


def homology_reduction(dims: Sequence[int], d: Mapping[int, QMatrix]) -> MatrixReduction:
    """Reduction of a finite cochain complex onto its cohomology (zero differential).

    Each degree is split as boundaries + chosen cohomology representatives
    + a complement ``L`` on which ``d`` is injective.  ``h`` sends a
    boundary ``d l`` (``l`` in ``L``) to ``-l`` and vanishes on the rest,
    which gives ``g f - id = d h + h d`` and all side conditions.
    """
    top = len(dims)

    def dmat(n):
        m = d.get(n)
        if m is not None:
            return m
        return QMatrix(dims[n + 1] if n + 1 < top else 0, dims[n] if 0 <= n < top else 0)

    def columns(m):
        return [list(c) for c in zip(*m.to_rows())] if m.rows and m.cols else []

    adapted, nb, nh = {}, {}, {}
    reps = {}
    for n in range(top):
        std = [[Fraction(int(i == j)) for i in range(dims[n])] for j in range(dims[n])]
        Z = kernel_basis(dmat(n))
        B = columns(dmat(n - 1)) if n > 0 else []
        bnds = [B[i] for i in complete_basis([], B)]
        reps[n] = [Z[i] for i in complete_basis(bnds, Z)]
        comps = [std[i] for i in complete_basis(bnds + reps[n], std)]
        adapted[n] = bnds + reps[n] + comps
        nb[n], nh[n] = len(bnds), len(reps[n])

    def coords(n, v):
        P = QMatrix.from_columns(adapted[n], dims[n])
        return solve_linear(P, v)

    f, g, h = {}, {}, {}
    for n in range(top):
        unit_coords = [coords(n, [Fraction(int(i == j)) for j in range(dims[n])]) for i in range(dims[n])]
        fm = QMatrix(nh[n], dims[n])
        for i, x in enumerate(unit_coords):
            for r in range(nh[n]):
                fm[r, i] = x[nb[n] + r]
        f[n] = fm
        g[n] = QMatrix.from_columns(reps[n], dims[n]) if reps[n] else QMatrix(dims[n], 0)
        if n == 0 or not nb[n]:
            continue
        # canonical preimage in L_{n-1} of each boundary basis vector
        low = nb[n - 1] + nh[n - 1]
        pre = []
        for b in adapted[n][:nb[n]]:
            x = coords(n - 1, solve_linear(dmat(n - 1), b))
            l = [Fraction(0)] * dims[n - 1]
            for j in range(low, len(adapted[n - 1])):
                if x[j]:
                    for r, val in enumerate(adapted[n - 1][j]):
                        l[r] += x[j] * val
            pre.append(l)
        hm = QMatrix(dims[n - 1], dims[n])
        for i, x in enumerate(unit_coords):
            for j in range(nb[n]):
                if x[j]:
                    for r, val in enumerate(pre[j]):
                        if val:
                            hm[r, i] = hm[r, i] - x[j] * val
        h[n] = hm
    d_src = {n: dmat(n) for n in range(top)}
    return MatrixReduction("cochain", list(dims), [nh[n] for n in range(top)], d_src, {}, f, g, h)
