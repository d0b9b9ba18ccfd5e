"""Free graded-commutative DGAs over Q.

Elements of a :class:`FreeDga` are dicts ``monomial -> Fraction`` where a
monomial is the exponent tuple over the generators (odd exponents are 0 or
1).  A monomial is read as the ordered product of generators in generator
order, which fixes the Koszul signs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .qcore import QMatrix, complete_basis, kernel_basis

__all__ = [
    "Generator",
    "FreeDga",
    "DgaError",
    "DgaMorphism",
    "parse_element",
    "format_element",
]

Monomial = tuple[int, ...]
Element = dict[Monomial, Fraction]


class DgaError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int


class FreeDga:
    """``Lambda V`` on the given generators with differential ``d``.

    ``differential`` maps generator names to elements (dict or expression
    string).  ``d^2 = 0`` is checked on generators at construction.
    """

    def __init__(self, generators: Sequence[tuple[str, int]] | Sequence[Generator],
                 differential: Mapping[str, Mapping | str] | None = None, check: bool = True):
        gens = [g if isinstance(g, Generator) else Generator(str(g[0]), int(g[1])) for g in generators]
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise DgaError("duplicate generator names")
        for g in gens:
            if g.degree < 1:
                raise DgaError(f"generator {g.name} has degree {g.degree} < 1")
        self.generators: tuple[Generator, ...] = tuple(gens)
        self._pos = {g.name: i for i, g in enumerate(gens)}
        self.degrees = tuple(g.degree for g in gens)
        self._basis_cache: dict[int, list[Monomial]] = {}
        self._dmat_cache: dict[int, QMatrix] = {}
        diff = {}
        for name, expr in (differential or {}).items():
            if name not in self._pos:
                raise DgaError(f"differential given for unknown generator {name}")
            el = parse_element(expr, self) if isinstance(expr, str) else self.element(expr)
            if el and self.degree_of(el) != self.generators[self._pos[name]].degree + 1:
                raise DgaError(f"d({name}) has the wrong degree")
            diff[name] = el
        self.d_gen: tuple[Element, ...] = tuple(diff.get(g.name, {}) for g in gens)
        if check:
            for g in gens:
                if self.diff(self.d_gen[self._pos[g.name]]):
                    raise DgaError(f"d^2 != 0 on generator {g.name}")

    # -- elements -------------------------------------------------------------

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def gen(self, name_or_index) -> Element:
        i = self._pos[name_or_index] if isinstance(name_or_index, str) else name_or_index
        e = [0] * self.ngens
        e[i] = 1
        return {tuple(e): Fraction(1)}

    def one(self) -> Element:
        return {(0,) * self.ngens: Fraction(1)}

    def element(self, data: Mapping) -> Element:
        out = {}
        for mono, c in data.items():
            mono = tuple(mono)
            if len(mono) != self.ngens:
                raise DgaError("monomial has wrong length")
            if any(e > 1 for e, dg in zip(mono, self.degrees) if dg % 2):
                continue
            c = Fraction(c)
            if c:
                out[mono] = out.get(mono, 0) + c
        return {m: c for m, c in out.items() if c}

    def mono_degree(self, mono: Monomial) -> int:
        return sum(e * dg for e, dg in zip(mono, self.degrees))

    def degree_of(self, el: Element) -> int:
        degs = {self.mono_degree(m) for m in el}
        if len(degs) > 1:
            raise DgaError("inhomogeneous element")
        return degs.pop() if degs else 0

    def add(self, a: Element, b: Element, cb=1) -> Element:
        out = dict(a)
        for m, c in b.items():
            v = out.get(m, 0) + cb * c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return out

    def scale(self, a: Element, c) -> Element:
        c = Fraction(c)
        return {m: v * c for m, v in a.items()} if c else {}

    def mono_mul(self, a: Monomial, b: Monomial) -> tuple[int, Monomial] | None:
        """Sign and product of two monomials; ``None`` if an odd generator repeats.

        The sign counts pairs (odd ``i`` in ``a``, odd ``j`` in ``b``) with ``i > j``.
        """
        inv = 0
        odd_b_seen = 0
        for i in range(self.ngens):
            if self.degrees[i] % 2:
                if a[i] and b[i]:
                    return None
                if a[i]:
                    inv += odd_b_seen
                if b[i]:
                    odd_b_seen += 1
        return (-1 if inv % 2 else 1), tuple(x + y for x, y in zip(a, b))

    def zero_like(self, degree: int = 0) -> Element:
        return {}

    def is_zero(self, a: Element) -> bool:
        return not a

    def mul(self, a: Element, b: Element) -> Element:
        out: Element = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                r = self.mono_mul(ma, mb)
                if r is None:
                    continue
                s, m = r
                v = out.get(m, 0) + s * ca * cb
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return out

    def power(self, a: Element, k: int) -> Element:
        out = self.one()
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def _split(self, mono: Monomial, i: int) -> tuple[Monomial, Monomial]:
        pre = tuple(mono[:i]) + (0,) * (self.ngens - i)
        post = (0,) * (i + 1) + tuple(mono[i + 1:])
        return pre, post

    def diff_monomial(self, mono: Monomial) -> Element:
        """Leibniz: ``d(pre * x_i^e * post)`` summed over ``i``."""
        out: Element = {}
        for i, e in enumerate(mono):
            if not e or not self.d_gen[i]:
                continue
            pre, post = self._split(mono, i)
            xi = [0] * self.ngens
            xi[i] = e - 1
            dpart = self.mul({tuple(xi): Fraction(e)}, self.d_gen[i])
            term = self.mul(self.mul({pre: Fraction(1)}, dpart), {post: Fraction(1)})
            if self.mono_degree(pre) % 2:
                term = self.scale(term, -1)
            out = self.add(out, term)
        return out

    def diff(self, a: Element) -> Element:
        out: Element = {}
        for m, c in a.items():
            out = self.add(out, self.diff_monomial(m), c)
        return out

    # -- linear algebra per degree ----------------------------------------------

    def monomial_basis(self, m: int) -> list[Monomial]:
        """Monomials of total degree ``m``, odd generators square-free, in
        decreasing lexicographic order of exponent vectors."""
        if m < 0:
            return []
        hit = self._basis_cache.get(m)
        if hit is not None:
            return hit
        out = []

        def rec(i, left, acc):
            if i == self.ngens:
                if left == 0:
                    out.append(tuple(acc))
                return
            dg = self.degrees[i]
            top = left // dg
            if dg % 2:
                top = min(top, 1)
            for e in range(top, -1, -1):
                acc.append(e)
                rec(i + 1, left - e * dg, acc)
                acc.pop()

        rec(0, m, [])
        self._basis_cache[m] = out
        return out

    def dimension(self, m: int) -> int:
        return len(self.monomial_basis(m))

    def vector(self, el: Element, m: int) -> list[Fraction]:
        basis = self.monomial_basis(m)
        idx = {b: i for i, b in enumerate(basis)}
        v = [Fraction(0)] * len(basis)
        for mono, c in el.items():
            if mono not in idx:
                raise DgaError("element not of the requested degree")
            v[idx[mono]] = c
        return v

    def from_vector(self, vec: Sequence, m: int) -> Element:
        return {b: Fraction(c) for b, c in zip(self.monomial_basis(m), vec) if c}

    def differential_matrix(self, m: int) -> QMatrix:
        """Matrix of ``d`` from degree ``m`` to ``m + 1`` in monomial bases."""
        hit = self._dmat_cache.get(m)
        if hit is not None:
            return hit
        src, tgt = self.monomial_basis(m), self.monomial_basis(m + 1)
        idx = {b: i for i, b in enumerate(tgt)}
        mat = QMatrix(len(tgt), len(src))
        for j, mono in enumerate(src):
            for t, c in self.diff_monomial(mono).items():
                mat[idx[t], j] = c
        self._dmat_cache[m] = mat
        return mat

    def cocycles(self, m: int) -> list[Element]:
        return [self.from_vector(v, m) for v in kernel_basis(self.differential_matrix(m))]

    def coboundary_vectors(self, m: int) -> list[list[Fraction]]:
        if m <= 0:
            return []
        mat = self.differential_matrix(m - 1)
        if not mat.cols:
            return []
        return [list(c) for c in zip(*mat.to_rows())]

    def cohomology(self, m: int) -> tuple[int, list[Element]]:
        """Dimension of ``H^m`` and canonical cocycle representatives."""
        Z = kernel_basis(self.differential_matrix(m))
        chosen = complete_basis(self.coboundary_vectors(m), Z)
        reps = [self.from_vector(Z[i], m) for i in chosen]
        return len(reps), reps

    # -- structure --------------------------------------------------------------

    def is_decomposable(self, el: Element) -> bool:
        return all(sum(m) >= 2 for m in el)

    def is_minimal(self) -> bool:
        return all(g.degree >= 2 for g in self.generators) and all(self.is_decomposable(d) for d in self.d_gen)

    def generator_counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for g in self.generators:
            out[g.degree] = out.get(g.degree, 0) + 1
        return out

    def max_generator_degree(self) -> int:
        return max(self.degrees, default=0)

    def extend(self, new: Sequence[tuple[str, int, Element]]) -> "FreeDga":
        """Append generators with differentials given in the current algebra."""
        k = len(new)
        gens = list(self.generators) + [Generator(n, d) for n, d, _ in new]
        diffs = {g.name: self._pad(self.d_gen[i], k) for i, g in enumerate(self.generators)}
        for n, _, el in new:
            diffs[n] = self._pad(el, k)
        return FreeDga(gens, diffs)

    def _pad(self, el: Element, k: int) -> Element:
        return {m + (0,) * k: c for m, c in el.items()}

    def to_json(self) -> dict:
        return {
            "generators": [
                {"name": g.name, "degree": g.degree, "d": format_element(self.d_gen[i], self)}
                for i, g in enumerate(self.generators)
            ]
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "FreeDga":
        gens = [(g["name"], int(g["degree"])) for g in data["generators"]]
        shell = cls(gens, {}, check=False)
        diffs = {g["name"]: parse_element(g.get("d", "0"), shell) for g in data["generators"]}
        return cls(gens, diffs)

    def __repr__(self):
        return "FreeDga(" + ", ".join(f"{g.name}:{g.degree}" for g in self.generators) + ")"


def format_element(el: Element, A: FreeDga) -> str:
    """``coeff*name^k*...`` terms joined by `` + ``; ``0`` for zero."""
    if not el:
        return "0"
    parts = []
    for mono in sorted(el, reverse=True):
        c = el[mono]
        factors = [str(c)]
        for g, e in zip(A.generators, mono):
            if e:
                factors.append(g.name + (f"^{e}" if e > 1 else ""))
        parts.append("*".join(factors))
    return " + ".join(parts)


def parse_element(text: str, A: FreeDga) -> Element:
    """Inverse of :func:`format_element`; also accepts ``-`` separators and bare names."""
    text = text.strip()
    if text in ("", "0"):
        return {}
    # split on + or - that start a new term
    terms = re.findall(r"[+-]?[^+-]+", text.replace(" ", ""))
    out: Element = {}
    for t in terms:
        sign = 1
        if t[0] in "+-":
            sign = -1 if t[0] == "-" else 1
            t = t[1:]
        if not t:
            continue
        factors = t.split("*")
        term = A.one()
        for f in factors:
            if re.fullmatch(r"\d+(/\d+)?", f):
                term = A.scale(term, Fraction(f))
                continue
            name, _, exp = f.partition("^")
            if name not in A._pos:
                raise DgaError(f"unknown generator {name!r} in expression {text!r}")
            for _ in range(int(exp) if exp else 1):
                term = A.mul(term, A.gen(name))
        term = A.scale(term, sign)
        out = A.add(out, term)
    return out


@dataclass
class DgaMorphism:
    """Generator images of a DGA map ``source -> target``.

    ``target`` is any object providing ``one()``, ``mul``, ``add``, ``scale``
    and ``diff`` over its elements (a :class:`FreeDga` or the polynomial-form
    algebra of a simplicial set).
    """

    source: FreeDga
    target: object
    images: list = field(default_factory=list)
    _cache: dict = field(default_factory=dict, repr=False)

    def on_monomial(self, mono: Monomial):
        hit = self._cache.get(mono)
        if hit is not None:
            return hit
        T = self.target
        nz = [i for i, e in enumerate(mono) if e]
        if not nz:
            res = T.one()
        else:
            # peel off the last factor: mono = rest * x_last
            last = nz[-1]
            rest = list(mono)
            rest[last] -= 1
            res = T.mul(self.on_monomial(tuple(rest)), self.images[last])
        self._cache[mono] = res
        return res

    def __call__(self, el: Element):
        T = self.target
        out = None
        for mono, c in sorted(el.items(), reverse=True):
            term = T.scale(self.on_monomial(mono), c)
            out = term if out is None else T.add(out, term)
        return T.zero_like(self.source.degree_of(el)) if out is None else out

    def violations(self) -> list[str]:
        """Generators on which ``m d != d m``."""
        T = self.target
        out = []
        for i, g in enumerate(self.source.generators):
            lhs = self(self.source.d_gen[i]) if self.source.d_gen[i] else T.zero_like(g.degree + 1)
            rhs = T.diff(self.images[i])
            if not T.is_zero(T.add(lhs, T.scale(rhs, -1))):
                out.append(f"m d != d m on {g.name}")
        return out
