"""Polynomial differential forms on the standard simplex.

A :class:`PolyForm` on ``Delta[n]`` is stored in canonical coordinates:
``t_0`` and ``dt_0`` are eliminated through ``t_0 = 1 - t_1 - ... - t_n``
and ``dt_0 = -(dt_1 + ... + dt_n)``.  A term is keyed by
``(exponents of t_1..t_n, increasing tuple of dt indices)``.

The module also carries the Whitney forms, integration over faces, the
de Rham / Whitney maps, and Dupont's projector ``pi`` and homotopy ``h``
with the orientation ``h d + d h = pi - id``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Mapping, Sequence

__all__ = [
    "PolyForm",
    "AmbientMismatch",
    "bary_t",
    "bary_dt",
    "injections",
    "monotone_maps",
    "simplicial_op",
    "face_op",
    "degeneracy_op",
    "whitney",
    "integrate",
    "integrate_top",
    "de_rham",
    "whitney_map",
    "dupont_projector",
    "dupont_h_vertex",
    "dupont_h_injection",
    "dupont_h",
]

Key = tuple[tuple[int, ...], tuple[int, ...]]


class AmbientMismatch(ValueError):
    pass


def _wedge_sign(a: Sequence[int], b: Sequence[int]) -> tuple[int, tuple[int, ...]] | None:
    """Sign and merged index tuple of ``dt_a ^ dt_b``; ``None`` if it vanishes."""
    if set(a) & set(b):
        return None
    inversions = sum(1 for x in a for y in b if x > y)
    return (-1 if inversions % 2 else 1), tuple(sorted(a + b))


class PolyForm:
    """Immutable polynomial form on ``Delta[n]`` with rational coefficients."""

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Key, Fraction] | None = None):
        self.n = n
        clean = {}
        if terms:
            for k, v in terms.items():
                if v:
                    clean[k] = v if isinstance(v, Fraction) else Fraction(v)
        self.terms: dict[Key, Fraction] = clean
        self._hash = None

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "PolyForm":
        return cls(n)

    @classmethod
    def const(cls, n: int, c) -> "PolyForm":
        return cls(n, {((0,) * n, ()): Fraction(c)})

    @classmethod
    def monomial(cls, n: int, exps: Sequence[int], dts: Sequence[int] = (), coeff=1) -> "PolyForm":
        """``coeff * t_1^e_1 ... t_n^e_n dt_{i_1} ^ ...`` with indices in ``1..n``."""
        if len(exps) != n:
            raise ValueError("exponent vector has wrong length")
        if any(i < 1 or i > n for i in dts):
            raise ValueError("dt index out of range; use bary_dt for dt_0")
        if len(set(dts)) != len(dts):
            return cls(n)
        order = sorted(range(len(dts)), key=lambda k: dts[k])
        inv = sum(1 for x in range(len(order)) for y in range(x + 1, len(order)) if order[x] > order[y])
        sign = -1 if inv % 2 else 1
        return cls(n, {(tuple(exps), tuple(sorted(dts))): Fraction(coeff) * sign})

    # -- basic protocol ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {len(c) for (_, c) in self.terms}

    @property
    def degree(self) -> int | None:
        """Form degree if homogeneous (0 for the zero form), else ``None``."""
        ds = self.degrees()
        if not ds:
            return 0
        return ds.pop() if len(ds) == 1 else None

    def poly_degree(self) -> int:
        return max((sum(a) for (a, _) in self.terms), default=0)

    def __eq__(self, other):
        if not isinstance(other, PolyForm):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def _same(self, other: "PolyForm"):
        if self.n != other.n:
            raise AmbientMismatch(f"forms live on Delta[{self.n}] and Delta[{other.n}]")

    def __add__(self, other: "PolyForm") -> "PolyForm":
        self._same(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return PolyForm(self.n, out)

    def __neg__(self) -> "PolyForm":
        return PolyForm(self.n, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        return self + (-other)

    def scale(self, c) -> "PolyForm":
        c = Fraction(c)
        if not c:
            return PolyForm(self.n)
        return PolyForm(self.n, {k: v * c for k, v in self.terms.items()})

    def __rmul__(self, c) -> "PolyForm":
        return self.scale(c)

    def __mul__(self, other):
        if not isinstance(other, PolyForm):
            return self.scale(other)
        self._same(other)
        out: dict[Key, Fraction] = {}
        for (a1, c1), v1 in self.terms.items():
            for (a2, c2), v2 in other.terms.items():
                ws = _wedge_sign(c1, c2)
                if ws is None:
                    continue
                sign, c = ws
                key = (tuple(x + y for x, y in zip(a1, a2)), c)
                out[key] = out.get(key, 0) + sign * v1 * v2
        return PolyForm(self.n, out)

    def diff(self) -> "PolyForm":
        """Exterior derivative, ``d t_i = dt_i``."""
        out: dict[Key, Fraction] = {}
        for (a, c), v in self.terms.items():
            for i, e in enumerate(a):
                if not e:
                    continue
                ws = _wedge_sign((i + 1,), c)
                if ws is None:
                    continue
                sign, cc = ws
                aa = a[:i] + (e - 1,) + a[i + 1:]
                key = (aa, cc)
                out[key] = out.get(key, 0) + sign * e * v
        return PolyForm(self.n, out)

    def homogeneous_part(self, k: int) -> "PolyForm":
        return PolyForm(self.n, {key: v for key, v in self.terms.items() if len(key[1]) == k})

    def sorted_terms(self) -> list[tuple[Key, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0][1]), kv[0][1], kv[0][0]))

    def __str__(self) -> str:
        """Text form used by golden tests, e.g. ``1/3*t1^2*t2 dt1^dt2``."""
        if not self.terms:
            return "0"
        parts = []
        for (a, c), v in self.sorted_terms():
            factors = [str(v)]
            factors += [f"t{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(a) if e]
            s = "*".join(factors)
            if c:
                s += " " + "^".join(f"dt{i}" for i in c)
            parts.append(s)
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"PolyForm(n={self.n}, {self})"


def add(a: PolyForm, b: PolyForm) -> PolyForm:
    return a + b


def mul(a: PolyForm, b: PolyForm) -> PolyForm:
    return a * b


def diff(a: PolyForm) -> PolyForm:
    return a.diff()


@lru_cache(maxsize=None)
def bary_t(i: int, n: int) -> PolyForm:
    """The barycentric coordinate ``t_i`` on ``Delta[n]`` in canonical form."""
    if i == 0:
        terms = {((0,) * n, ()): Fraction(1)}
        for k in range(n):
            e = [0] * n
            e[k] = 1
            terms[(tuple(e), ())] = Fraction(-1)
        return PolyForm(n, terms)
    e = [0] * n
    e[i - 1] = 1
    return PolyForm(n, {(tuple(e), ()): Fraction(1)})


@lru_cache(maxsize=None)
def bary_dt(i: int, n: int) -> PolyForm:
    return bary_t(i, n).diff()


def injections(p: int, n: int) -> list[tuple[int, ...]]:
    """Strictly increasing maps ``[p] -> [n]`` in lexicographic order."""
    if p < 0:
        return []
    return list(itertools.combinations(range(n + 1), p + 1))


def monotone_maps(p: int, n: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations_with_replacement(range(n + 1), p + 1))


# -- simplicial operators -------------------------------------------------------


def simplicial_op(eta: PolyForm, f: Sequence[int]) -> PolyForm:
    """``f^*`` for a monotone ``f: [n] -> [m]`` taking forms on Delta[m] to Delta[n].

    ``f^*(t_i) = sum_{f(j) = i} t_j``.
    """
    f = tuple(f)
    n = len(f) - 1
    if f == tuple(range(eta.n + 1)):
        return eta
    return _pullback_cached(eta, f, n)


@lru_cache(maxsize=200000)
def _pullback_cached(eta: PolyForm, f: tuple[int, ...], n: int) -> PolyForm:
    m = eta.n
    t_img = []
    dt_img = []
    for i in range(1, m + 1):
        img = PolyForm(n)
        for j, fj in enumerate(f):
            if fj == i:
                img = img + bary_t(j, n)
        t_img.append(img)
        dt_img.append(img.diff())
    return _substitute(eta, t_img, dt_img, n)


def _substitute(eta: PolyForm, t_img: list[PolyForm], dt_img: list[PolyForm], n: int) -> PolyForm:
    powers: dict[tuple[int, int], PolyForm] = {}

    def power(i, e):
        key = (i, e)
        if key not in powers:
            powers[key] = PolyForm.const(n, 1) if e == 0 else power(i, e - 1) * t_img[i]
        return powers[key]

    acc: dict[Key, Fraction] = {}
    for (a, c), v in eta.terms.items():
        term = PolyForm.const(n, v)
        for i, e in enumerate(a):
            if e:
                term = term * power(i, e)
                if term.is_zero():
                    break
        for i in c:
            if term.is_zero():
                break
            term = term * dt_img[i - 1]
        for k, w in term.terms.items():
            acc[k] = acc.get(k, 0) + w
    return PolyForm(n, acc)


def face_op(eta: PolyForm, i: int) -> PolyForm:
    """``d_i: (A_PL)_{m} -> (A_PL)_{m-1}``, pullback along the coface skipping ``i``."""
    m = eta.n
    return simplicial_op(eta, tuple(j for j in range(m + 1) if j != i))


def degeneracy_op(eta: PolyForm, j: int) -> PolyForm:
    """``s_j: (A_PL)_m -> (A_PL)_{m+1}``, pullback along the codegeneracy hitting ``j`` twice."""
    m = eta.n
    return simplicial_op(eta, tuple(range(j + 1)) + tuple(range(j, m + 1)))


# -- Whitney forms, integration, DR / WH ----------------------------------------


@lru_cache(maxsize=None)
def whitney(f: tuple[int, ...], n: int) -> PolyForm:
    """``omega_f = p! sum_i (-1)^i t_{f(i)} dt_{f(0)} ... (omit i) ... dt_{f(p)}``.

    Zero when ``f`` is monotone but not injective.
    """
    f = tuple(f)
    p = len(f) - 1
    if len(set(f)) != len(f):
        return PolyForm(n)
    out = PolyForm(n)
    for i in range(p + 1):
        term = bary_t(f[i], n)
        for k in range(p + 1):
            if k != i:
                term = term * bary_dt(f[k], n)
        out = out + (term if i % 2 == 0 else -term)
    return out.scale(factorial(p))


def integrate_top(eta: PolyForm) -> Fraction:
    """Integral over the fundamental simplex of ``Delta[k]`` (``k = eta.n``)."""
    k = eta.n
    full = tuple(range(1, k + 1))
    total = Fraction(0)
    for (a, c), v in eta.terms.items():
        if c != full:
            continue
        num = 1
        for e in a:
            num *= factorial(e)
        total += v * Fraction(num, factorial(sum(a) + k))
    return total


def integrate(eta: PolyForm, sigma: Sequence[int]) -> Fraction:
    """``int_{Delta^sigma} eta`` for a nondegenerate simplex ``sigma`` of ``Delta[n]``."""
    sigma = tuple(sigma)
    if any(a >= b for a, b in zip(sigma, sigma[1:])) or not sigma or sigma[0] < 0 or sigma[-1] > eta.n:
        raise ValueError(f"{sigma} is not a nondegenerate simplex of Delta[{eta.n}]")
    k = len(sigma) - 1
    part = eta.homogeneous_part(k)
    if part.is_zero():
        return Fraction(0)
    return integrate_top(simplicial_op(part, sigma))


def de_rham(eta: PolyForm, k: int | None = None) -> dict[tuple[int, ...], Fraction]:
    """The cochain ``sigma -> int_sigma eta`` on the k-simplices of ``Delta[n]``.

    Returned as a dict over all nondegenerate k-simplices (zero values kept).
    """
    if k is None:
        k = eta.degree if eta.degree is not None else 0
    return {s: integrate(eta, s) for s in injections(k, eta.n)}


def whitney_map(cochain: Mapping[tuple[int, ...], Fraction], n: int) -> PolyForm:
    """Linear extension of ``dual(sigma) -> omega_sigma``."""
    out = PolyForm(n)
    for s, v in sorted(cochain.items()):
        if v:
            out = out + whitney(tuple(s), n).scale(v)
    return out


def dupont_projector(eta: PolyForm) -> PolyForm:
    """``pi_m(eta) = sum_p sum_{f in I(p, m)} (int f^* eta) omega_f``."""
    m = eta.n
    out = PolyForm(m)
    for p in range(m + 1):
        part = eta.homogeneous_part(p)
        if part.is_zero():
            continue
        for f in injections(p, m):
            c = integrate_top(simplicial_op(part, f))
            if c:
                out = out + whitney(f, m).scale(c)
    return out


# -- Dupont homotopy ------------------------------------------------------------


@lru_cache(maxsize=None)
def _beta(a: int, b: int) -> Fraction:
    """``int_0^1 (1-s)^a s^b ds``."""
    return Fraction(factorial(a) * factorial(b), factorial(a + b + 1))


@lru_cache(maxsize=None)
def _vertex_coeff(l: int, others: int, ej: int) -> tuple[tuple[int, Fraction], ...]:
    """Coefficients ``(b, c)`` with ``c t_j^b`` the s-integral of
    ``(1-s)^(l-1+others) ((1-s) t_j + s)^ej``."""
    out = []
    for b in range(ej + 1):
        out.append((b, comb(ej, b) * _beta(l - 1 + others + b, ej - b)))
    return tuple(out)


def dupont_h_vertex(eta: PolyForm, j: int) -> PolyForm:
    """Dupont's ``h_j``: pull back along the dilation towards vertex ``j`` and
    integrate the ``ds`` component over ``[0, 1]``.

    The dilation acts by ``t_k -> (1-s) t_k + s delta_kj``, hence
    ``dt_k -> (1-s) dt_k + (delta_kj - t_k) ds``; ``ds`` is moved to the front.
    """
    n = eta.n
    out: dict[Key, Fraction] = {}
    for (a, c), v in eta.terms.items():
        l = len(c)
        if l == 0:
            continue
        others = sum(a) - (a[j - 1] if j >= 1 else 0)
        ej = a[j - 1] if j >= 1 else 0
        coeffs = _vertex_coeff(l, others, ej)
        for r, cr in enumerate(c):
            rest = c[:r] + c[r + 1:]
            sign = -v if r % 2 else v
            for b, w in coeffs:
                base = list(a)
                if j >= 1:
                    base[j - 1] = b
                # factor (delta_{cr j} - t_cr)
                if cr == j:
                    key = (tuple(base), rest)
                    out[key] = out.get(key, 0) + sign * w
                mod = list(base)
                mod[cr - 1] += 1
                key = (tuple(mod), rest)
                out[key] = out.get(key, 0) - sign * w
    return PolyForm(n, out)


def dupont_h_injection(eta: PolyForm, f: Sequence[int]) -> PolyForm:
    """``h_f = h_{f(p)} o ... o h_{f(0)}``."""
    for j in f:
        if eta.is_zero():
            break
        eta = dupont_h_vertex(eta, j)
    return eta


def dupont_h(eta: PolyForm) -> PolyForm:
    """``h_{Delta[m]}(eta) = sum_{p < m} sum_{f in I(p, m)} omega_f h_f(eta)``."""
    return _dupont_h_cached(eta)


@lru_cache(maxsize=100000)
def _dupont_h_cached(eta: PolyForm) -> PolyForm:
    m = eta.n
    out = PolyForm(m)
    if eta.is_zero():
        return out
    top = max(len(c) for (_, c) in eta.terms)
    # h_f lowers degree by p + 1, so only p < top contributes
    cache: dict[tuple[int, ...], PolyForm] = {(): eta}
    for p in range(min(m, top)):
        for f in injections(p, m):
            hf = dupont_h_vertex(cache[f[:-1]], f[-1]) if not cache[f[:-1]].is_zero() else PolyForm(m)
            cache[f] = hf
            if not hf.is_zero():
                out = out + whitney(f, m) * hf
    return out
