"""Lattice polytopes and classical periods of Laurent polynomials."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product
from typing import Dict, List, Sequence, Tuple

Vector = Tuple[int, ...]

MAX_DIM = 8


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def nullspace(rows: Sequence[Sequence[int]], n: int) -> List[Vector]:
    """Primitive integer basis of the rational nullspace of ``rows`` (length-``n`` vectors)."""
    # fraction-free reduction to reduced echelon form, rows kept primitive
    m = [list(r) for r in rows]
    pivots: List[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                a, b = pr[c], m[i][c]
                row = [a * x - b * y for x, y in zip(m[i], pr)]
                g = math.gcd(*row)
                m[i] = [x // g for x in row] if g > 1 else row
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        # v[fc] = L, v[pc] = -L * m[i][fc] / m[i][pc]
        den = math.lcm(*(m[i][pc] for i, pc in enumerate(pivots))) if pivots else 1
        v = [0] * n
        v[fc] = den
        for i, pc in enumerate(pivots):
            v[pc] = -den * m[i][fc] // m[i][pc]
        g = math.gcd(*v)
        basis.append(tuple(x // g for x in v))
    return basis


class Hull:
    """Exact description of the convex hull of finitely many integer points.

    The hull is the set of points satisfying the affine-hull equations and
    the facet inequalities ``c . x <= e``; facets are found by trying every
    set of ``dim`` points as a candidate supporting hyperplane.
    """

    def __init__(self, points: Sequence[Vector]):
        if not points:
            raise ValueError("hull of no points")
        self.points = [tuple(p) for p in points]
        self.n = len(self.points[0])
        p0 = self.points[0]
        diffs = [tuple(a - b for a, b in zip(p, p0)) for p in self.points[1:]]
        self.equations = [(c, _dot(c, p0)) for c in nullspace(diffs, self.n)] if diffs else [
            (tuple(1 if i == j else 0 for i in range(self.n)), p0[j]) for j in range(self.n)
        ]
        self.dim = self.n - len(self.equations)
        self.facets = self._facets(diffs)

    def _facets(self, diffs) -> List[Tuple[Vector, int]]:
        if self.dim == 0:
            return []
        pts = self.points
        found = set()
        for subset in combinations(range(len(pts)), self.dim):
            base = pts[subset[0]]
            rows = [tuple(a - b for a, b in zip(pts[i], base)) for i in subset[1:]]
            for c in nullspace(rows, self.n) if rows else _unit_vectors(self.n):
                if not any(_dot(c, d) for d in diffs):
                    continue  # constant on the whole hull
                vals = [_dot(c, p) for p in pts]
                e = _dot(c, base)
                if all(v <= e for v in vals):
                    found.add((c, e))
                elif all(v >= e for v in vals):
                    found.add((tuple(-x for x in c), -e))
        return sorted(found)

    def contains(self, x: Sequence[int]) -> bool:
        return all(_dot(c, x) == e for c, e in self.equations) and all(
            _dot(c, x) <= e for c, e in self.facets
        )


def _unit_vectors(n):
    return [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]


@dataclass(frozen=True)
class LatticePolytope:
    dim: int
    vertices: Tuple[Vector, ...]

    def __post_init__(self):
        verts = tuple(tuple(int(x) for x in v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if any(len(v) != self.dim for v in verts):
            raise ValueError("vertex length does not match dimension")
        if len(set(verts)) != len(verts):
            raise ValueError("vertices must be distinct")

    def check_vertices(self) -> bool:
        """Every listed point is a vertex: none lies in the hull of the others."""
        vs = list(self.vertices)
        if len(vs) == 1:
            return True
        return all(not Hull(vs[:k] + vs[k + 1:]).contains(v) for k, v in enumerate(vs))

    def hull(self) -> Hull:
        return Hull(self.vertices)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "vertices": [list(v) for v in self.vertices]}

    @classmethod
    def from_dict(cls, data: dict) -> "LatticePolytope":
        return cls(int(data["dim"]), tuple(tuple(v) for v in data["vertices"]))


def lattice_points(p: LatticePolytope) -> List[Vector]:
    """All integer points of the polytope, by a bounding-box scan with exact membership."""
    if p.dim > MAX_DIM:
        raise ValueError(f"dimension {p.dim} exceeds the supported bound {MAX_DIM}")
    hull = p.hull()
    lo = [min(v[i] for v in p.vertices) for i in range(p.dim)]
    hi = [max(v[i] for v in p.vertices) for i in range(p.dim)]
    ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
    return [x for x in product(*ranges) if hull.contains(x)]


@dataclass(frozen=True)
class LaurentPolynomial:
    terms: Tuple[Tuple[Vector, int], ...]

    def __post_init__(self):
        terms = tuple((tuple(int(x) for x in e), int(c)) for e, c in self.terms)
        object.__setattr__(self, "terms", terms)
        exps = [e for e, _ in terms]
        if len(set(exps)) != len(exps):
            raise ValueError("exponent vectors must be distinct")
        if any(c == 0 for _, c in terms):
            raise ValueError("coefficients must be nonzero")
        if len({len(e) for e in exps}) > 1:
            raise ValueError("exponent vectors must share one length")

    @property
    def nvars(self) -> int:
        return len(self.terms[0][0]) if self.terms else 0

    def to_dict(self) -> dict:
        return {"terms": [{"exponent": list(e), "coefficient": str(c)} for e, c in self.terms]}

    @classmethod
    def from_dict(cls, data: dict) -> "LaurentPolynomial":
        return cls(tuple((tuple(t["exponent"]), int(t["coefficient"])) for t in data["terms"]))

    def newton_vertices(self) -> List[Vector]:
        exps = [e for e, _ in self.terms]
        if len(exps) == 1:
            return exps
        return sorted(e for k, e in enumerate(exps) if not Hull(exps[:k] + exps[k + 1:]).contains(e))

    def power(self, k: int) -> Dict[Vector, int]:
        """Full expansion of ``f**k`` as a dictionary; slow reference implementation."""
        out: Dict[Vector, int] = {(0,) * self.nvars: 1}
        for _ in range(k):
            nxt: Dict[Vector, int] = {}
            for e1, c1 in out.items():
                for e2, c2 in self.terms:
                    e = tuple(a + b for a, b in zip(e1, e2))
                    nxt[e] = nxt.get(e, 0) + c1 * c2
            out = {e: c for e, c in nxt.items() if c}
        return out


def _packed_powers(f: LaurentPolynomial, top: int, bits: int, bias: int) -> List[Dict[int, int]]:
    """``f**j`` for ``j <= top`` with exponent vectors packed into integers.

    Field ``i`` of the key of a monomial of ``f**j`` stores ``e_i + j*bias``,
    so multiplying by a term adds a fixed integer to the key.
    """
    steps = [
        (sum((e + bias) << (bits * i) for i, e in enumerate(exps)), c) for exps, c in f.terms
    ]
    powers = [{0: 1}]
    for _ in range(top):
        prev = powers[-1]
        nxt: Dict[int, int] = {}
        get = nxt.get
        for key, c in prev.items():
            for step, c2 in steps:
                k2 = key + step
                nxt[k2] = get(k2, 0) + c * c2
        powers.append({k: c for k, c in nxt.items() if c})
    return powers


def classical_period(f: LaurentPolynomial, nmax: int, method: str = "compositions") -> List[int]:
    """Constant terms ``c_0..c_nmax`` of the powers of ``f``.

    ``compositions`` (the default) sums multinomial coefficients over
    exponent distributions with vanishing total, pruning on reachable
    partial sums. ``split`` writes ``f**k = f**a * f**(k-a)`` and pairs each
    monomial of one factor with its inverse in the other; it shares no code
    with the first route and serves as a cross-check.
    """
    if nmax < 0:
        raise ValueError("nmax must be nonnegative")
    if not f.terms:
        return [1] + [0] * nmax
    if method == "compositions":
        return [_period_by_compositions(f, k) for k in range(nmax + 1)]
    if method != "split":
        raise ValueError(f"unknown method {method!r}")
    bias = max(1, max(abs(x) for e, _ in f.terms for x in e))
    bits = (2 * nmax * bias + 1).bit_length() + 1
    top = (nmax + 1) // 2
    powers = _packed_powers(f, top, bits, bias)
    n = f.nvars
    out = []
    for k in range(nmax + 1):
        a = k // 2
        b = k - a
        # key_a(m) + key_b(-m) has every field equal to k * bias
        target = sum((k * bias) << (bits * i) for i in range(n))
        fa, fb = powers[a], powers[b]
        if len(fa) > len(fb):
            fa, fb = fb, fa
        get = fb.get
        out.append(sum(c * get(target - key, 0) for key, c in fa.items()))
    return out


def _period_by_compositions(f: LaurentPolynomial, k: int) -> int:
    # widest coordinate spread first so infeasible branches die early
    terms = sorted(f.terms, key=lambda t: -(max(t[0]) - min(t[0])))
    n = f.nvars
    m = len(terms)
    lo = [[min(x[0][i] for x in terms[t:]) for i in range(n)] for t in range(m)]
    hi = [[max(x[0][i] for x in terms[t:]) for i in range(n)] for t in range(m)]
    fact = [math.factorial(x) for x in range(k + 1)]
    total = 0

    def rec(t: int, left: int, partial: list, denom: int, coef: int) -> None:
        # denom accumulates prod(n_i!), coef accumulates prod(c_i ** n_i)
        nonlocal total
        e, c = terms[t]
        if t == m - 1:
            if all(partial[i] + left * e[i] == 0 for i in range(n)):
                total += fact[k] // (denom * fact[left]) * coef * c**left
            return
        for i in range(n):
            if partial[i] + left * lo[t][i] > 0 or partial[i] + left * hi[t][i] < 0:
                return
        for cnt in range(left + 1):
            rec(t + 1, left - cnt, [partial[i] + cnt * e[i] for i in range(n)],
                denom * fact[cnt], coef * c**cnt)

    rec(0, k, [0] * n, 1, 1)
    return total


FANO_VERTICES: Tuple[Vector, ...] = (
    (2, -1, 2, 0, -1, 0),
    (2, -1, 2, 1, -1, -1),
    (1, 0, 1, 0, -1, 0),
    (1, 0, 1, 1, -1, -1),
    (0, 0, 0, 0, 0, 1),
    (0, 0, 0, 0, 1, 0),
    (0, 0, 0, 1, 0, 0),
    (0, 0, 1, 0, 0, 0),
    (1, -1, 0, -1, 0, 0),
    (2, -1, 1, 0, 0, 0),
    (1, -1, 1, -1, -1, 0),
    (-1, 1, -1, 0, 1, 0),
    (-1, 0, -1, 0, 0, 0),
)

# the Laurent polynomial written monomial by monomial, numerator over denominator
FANO_MONOMIALS: Tuple[Tuple[str, str], ...] = (
    ("x1^2*x3^2*x4", "x2*x5*x6"),
    ("x1^2*x3^2", "x2*x5"),
    ("x1^2*x3", "x2"),
    ("x1*x3*x4", "x5*x6"),
    ("x1*x3", "x5"),
    ("x1*x3", "x2*x4*x5"),
    ("x1", "x2*x4"),
    ("x3", ""),
    ("x4", ""),
    ("x5", ""),
    ("x6", ""),
    ("x2*x5", "x1*x3"),
    ("", "x1*x3"),
)


def _monomial_exponents(num: str, den: str, n: int) -> Vector:
    e = [0] * n
    for part, sign in ((num, 1), (den, -1)):
        for fac in filter(None, part.split("*")):
            name, _, power = fac.partition("^")
            e[int(name[1:]) - 1] += sign * int(power or 1)
    return tuple(e)


def builtin_fano_example() -> Tuple[LatticePolytope, LaurentPolynomial]:
    poly = LatticePolytope(6, FANO_VERTICES)
    f = LaurentPolynomial(tuple((_monomial_exponents(a, b, 6), 1) for a, b in FANO_MONOMIALS))
    return poly, f
