"""Exact sparse polynomials in the arrow coordinates.

A monomial is packed into one Python integer: each variable owns a
fixed-width bit field and the first variable occupies the most significant
field.  Comparing packed integers is then pure lexicographic order with the
first variable largest, which is the term order used throughout.
"""

from __future__ import annotations

import re
from functools import cached_property
from itertools import permutations
from typing import Dict, Iterable, Iterator, List, NamedTuple, Sequence

import numpy as np

from .quiver import DimensionVector, Path, Quiver

FIELD_BITS = 16
MAX_EXPONENT = (1 << (FIELD_BITS - 1)) - 1


class Variable(NamedTuple):
    """Coordinate ``x^arrow_{row,col}``: row indexes the target, col the source."""

    arrow: int
    row: int
    col: int

    def __str__(self) -> str:
        return f"x[{self.arrow},{self.row},{self.col}]"


class TermOrder:
    """Pure lex on the ring's variable order (arrow, row, col ascending, earlier is larger)."""

    name = "lex"

    @staticmethod
    def key(monomial: int) -> int:
        return monomial

    @staticmethod
    def compare(a: int, b: int) -> int:
        return (a > b) - (a < b)


class PolyRing:
    def __init__(self, variables: Sequence[Variable]):
        self.variables = tuple(variables)
        self.nvars = len(self.variables)
        self.index = {v: k for k, v in enumerate(self.variables)}
        if len(self.index) != self.nvars:
            raise ValueError("duplicate variables")
        self.order = TermOrder()
        self._mask = (1 << FIELD_BITS) - 1
        self._high = sum(1 << (FIELD_BITS - 1 + FIELD_BITS * k) for k in range(self.nvars))

    @classmethod
    def for_quiver(cls, q: Quiver, d: DimensionVector) -> "PolyRing":
        d.check(q)
        return cls(
            [
                Variable(a.id, row, col)
                for a in q.arrows
                for row in range(1, d[a.target] + 1)
                for col in range(1, d[a.source] + 1)
            ]
        )

    def shift(self, k: int) -> int:
        return FIELD_BITS * (self.nvars - 1 - k)

    def unit(self, k: int) -> int:
        return 1 << self.shift(k)

    def pack(self, exps: Sequence[int]) -> int:
        m = 0
        for e in exps:
            if not 0 <= e <= MAX_EXPONENT:
                raise OverflowError(f"exponent {e} out of range")
            m = (m << FIELD_BITS) | e
        return m

    def pack_dict(self, exps: Dict[Variable, int]) -> int:
        m = 0
        for v, e in exps.items():
            if not 0 <= e <= MAX_EXPONENT:
                raise OverflowError(f"exponent {e} out of range")
            m += e << self.shift(self.index[v])
        return m

    def unpack(self, m: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.nvars):
            out.append(m & self._mask)
            m >>= FIELD_BITS
        return tuple(reversed(out))

    def exponent_matrix(self, monomials: Iterable[int]) -> np.ndarray:
        """Exponents of many monomials at once, one row per monomial."""
        width = FIELD_BITS // 8 * self.nvars
        buf = b"".join(m.to_bytes(width, "big") for m in monomials)
        return np.frombuffer(buf, dtype=">u2").reshape(-1, self.nvars).astype(np.int64)

    def exponent(self, m: int, k: int) -> int:
        return (m >> self.shift(k)) & self._mask

    def divides(self, a: int, b: int) -> bool:
        """True when monomial ``a`` divides monomial ``b``."""
        h = self._high
        return ((b | h) - a) & h == h

    def degree(self, m: int) -> int:
        return sum(self.unpack(m))

    def monomial_dict(self, m: int) -> Dict[Variable, int]:
        return {v: e for v, e in zip(self.variables, self.unpack(m)) if e}

    def monomial_str(self, m: int) -> str:
        parts = []
        for v, e in self.monomial_dict(m).items():
            parts.append(str(v) if e == 1 else f"{v}^{e}")
        return "*".join(parts)

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return Poly(self, {0: 1})

    def const(self, c: int) -> "Poly":
        return Poly(self, {0: c} if c else {})

    def var(self, v: Variable | int) -> "Poly":
        k = v if isinstance(v, int) else self.index[v]
        return Poly(self, {self.unit(k): 1})

    def monomial(self, m: int, c: int = 1) -> "Poly":
        return Poly(self, {m: c} if c else {})

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyRing) and self.variables == other.variables

    def __hash__(self) -> int:
        return hash(self.variables)


class Poly:
    """Sparse polynomial with integer coefficients over a :class:`PolyRing`."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Dict[int, int]):
        self.ring = ring
        self.terms = terms

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __neg__(self) -> "Poly":
        return Poly(self.ring, {m: -c for m, c in self.terms.items()})

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, int):
            if other == 0:
                return Poly(self.ring, {})
            return Poly(self.ring, {m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return multiply(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def add_scaled(self, other: "Poly", c: int, shift: int = 0) -> None:
        """In place: ``self += c * m * other`` where ``shift`` is the packed monomial ``m``."""
        t = self.terms
        for m, a in other.terms.items():
            k = m + shift
            s = t.get(k, 0) + a * c
            if s:
                t[k] = s
            else:
                del t[k]

    def leading_term(self) -> tuple[int, int]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms)
        return m, self.terms[m]

    def sorted_terms(self) -> List[tuple[int, int]]:
        return sorted(self.terms.items(), reverse=True)

    def total_degrees(self) -> set[int]:
        return {self.ring.degree(m) for m in self.terms}

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"


def multiply(f: Poly, g: Poly) -> Poly:
    if len(f.terms) > len(g.terms):
        f, g = g, f
    out: Dict[int, int] = {}
    get = out.get
    gt = list(g.terms.items())
    for m1, c1 in f.terms.items():
        for m2, c2 in gt:
            k = m1 + m2
            out[k] = get(k, 0) + c1 * c2
    return Poly(f.ring, {m: c for m, c in out.items() if c})


def leading_monomial(f: Poly) -> tuple[int, int]:
    """Largest monomial of ``f`` under the ring's term order and its coefficient."""
    return f.leading_term()


def determinant(matrix: Sequence[Sequence[Poly]]) -> Poly:
    """Exact determinant by Laplace expansion along rows, memoized on column subsets."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        raise ValueError("empty matrix")
    ring = matrix[0][0].ring
    memo: Dict[int, Poly] = {}

    def minor(k: int, cols: int) -> Poly:
        # determinant of rows k.. over the column set ``cols``
        if k == n:
            return ring.one()
        if cols in memo:
            return memo[cols]
        # k is determined by the size of ``cols``, so the subset alone is the key
        acc = ring.zero()
        sign = 1
        for c in range(n):
            if cols >> c & 1:
                entry = matrix[k][c]
                if entry.terms:
                    sub = minor(k + 1, cols & ~(1 << c))
                    if sub.terms:
                        prod = entry * sub
                        acc.add_scaled(prod, sign)
                sign = -sign
        memo[cols] = acc
        return acc

    return minor(0, (1 << n) - 1)


def leibniz_determinant(matrix: Sequence[Sequence[Poly]]) -> Poly:
    """Signed permutation sum; slow reference implementation."""
    n = len(matrix)
    ring = matrix[0][0].ring
    acc = ring.zero()
    for perm in permutations(range(n)):
        term = ring.const(permutation_sign(perm))
        for r, c in enumerate(perm):
            term = term * matrix[r][c]
        acc = acc + term
    return acc


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a sequence of distinct comparable items relative to sorted order."""
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def matmul(a: Sequence[Sequence[Poly]], b: Sequence[Sequence[Poly]]) -> List[List[Poly]]:
    ring = a[0][0].ring
    inner = len(b)
    out = []
    for row in a:
        new_row = []
        for j in range(len(b[0])):
            acc = ring.zero()
            for k in range(inner):
                acc = acc + row[k] * b[k][j]
            new_row.append(acc)
        out.append(new_row)
    return out


def arrow_matrix(ring: PolyRing, q: Quiver, d: DimensionVector, a: int) -> List[List[Poly]]:
    arrow = q.arrow(a)
    return [
        [ring.var(Variable(a, row, col)) for col in range(1, d[arrow.source] + 1)]
        for row in range(1, d[arrow.target] + 1)
    ]


def path_matrix(ring: PolyRing, q: Quiver, d: DimensionVector, path: Path) -> List[List[Poly]]:
    """Matrix of the path, of shape (rank of target) x (rank of source)."""
    m = arrow_matrix(ring, q, d, path.arrows[0])
    for a in path.arrows[1:]:
        m = matmul(arrow_matrix(ring, q, d, a), m)
    return m


# text and JSON formats

_VAR_RE = re.compile(r"x\[(\d+),(\d+),(\d+)\](?:\^(\d+))?$")


def format_poly(f: Poly) -> str:
    if not f.terms:
        return "0"
    out = []
    for k, (m, c) in enumerate(f.sorted_terms()):
        body = str(abs(c))
        mono = f.ring.monomial_str(m)
        if mono:
            body += "*" + mono
        if k == 0:
            out.append(body if c > 0 else "-" + body)
        else:
            out.append((" + " if c > 0 else " - ") + body)
    return "".join(out)


def parse_poly(text: str, ring: PolyRing) -> Poly:
    text = text.strip()
    if text == "0":
        return ring.zero()
    tokens = re.split(r"\s+([+-])\s+", text)
    signs = [1] + [1 if s == "+" else -1 for s in tokens[1::2]]
    bodies = tokens[0::2]
    terms: Dict[int, int] = {}
    for sign, body in zip(signs, bodies):
        if body.startswith("-"):
            sign, body = -sign, body[1:]
        factors = body.split("*")
        try:
            c = int(factors[0])
        except ValueError as exc:
            raise ValueError(f"bad coefficient in term {body!r}") from exc
        exps: Dict[Variable, int] = {}
        for fac in factors[1:]:
            mt = _VAR_RE.match(fac)
            if not mt:
                raise ValueError(f"bad factor {fac!r}")
            v = Variable(int(mt[1]), int(mt[2]), int(mt[3]))
            if v not in ring.index:
                raise ValueError(f"unknown variable {v}")
            exps[v] = exps.get(v, 0) + int(mt[4] or 1)
        m = ring.pack_dict(exps)
        s = terms.get(m, 0) + sign * c
        if s:
            terms[m] = s
        else:
            terms.pop(m, None)
    return Poly(ring, terms)


def poly_to_json(f: Poly) -> list:
    return [
        {
            "coefficient": str(c),
            "monomial": [[v.arrow, v.row, v.col, e] for v, e in f.ring.monomial_dict(m).items()],
        }
        for m, c in f.sorted_terms()
    ]


def poly_from_json(data: Iterable[dict], ring: PolyRing) -> Poly:
    terms: Dict[int, int] = {}
    for t in data:
        exps = {Variable(a, j, k): e for a, j, k, e in t["monomial"]}
        m = ring.pack_dict(exps)
        terms[m] = terms.get(m, 0) + int(t["coefficient"])
    return Poly(ring, {m: c for m, c in terms.items() if c})


def monomial_to_json(ring: PolyRing, m: int) -> list:
    return [[v.arrow, v.row, v.col, e] for v, e in ring.monomial_dict(m).items()]


class RepSpace:
    """A quiver with a dimension vector, its paths, ring and path matrices."""

    def __init__(self, quiver: Quiver, dims: DimensionVector):
        from .quiver import enumerate_paths

        dims.check(quiver)
        self.quiver = quiver
        self.dims = dims
        self.paths = enumerate_paths(quiver)
        self.ring = PolyRing.for_quiver(quiver, dims)
        self._matrices: Dict[int, List[List[Poly]]] = {}

    @classmethod
    def kronecker(cls, k: int, r0: int, r1: int) -> "RepSpace":
        return cls(Quiver.kronecker(k), DimensionVector((r0, r1)))

    def path(self, i: int) -> Path:
        if not 1 <= i <= len(self.paths):
            raise ValueError(f"path index {i} out of range")
        return self.paths[i - 1]

    def matrix(self, i: int) -> List[List[Poly]]:
        if i not in self._matrices:
            self._matrices[i] = path_matrix(self.ring, self.quiver, self.dims, self.path(i))
        return self._matrices[i]

    def entry(self, i: int, row: int, col: int) -> Poly:
        """Entry (row, col) of the path matrix, 1-based."""
        return self.matrix(i)[row - 1][col - 1]

    def is_kronecker(self) -> bool:
        return self.quiver.num_vertices == 2 and all(
            a.source == 0 and a.target == 1 for a in self.quiver.arrows
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RepSpace)
            and self.quiver == other.quiver
            and self.dims == other.dims
        )

    def __hash__(self) -> int:
        return hash((self.quiver, self.dims))
