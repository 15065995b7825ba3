"""Semi-standard linked pairs for Kronecker quivers, primitivity and subduction.

For the Kronecker quiver a semi-standard pair is determined by its
monomial: the count ``N[i][k][j]`` of variable ``x^i_{k,j}`` puts label
``(i, j)`` that many times in target row ``k`` and label ``(i, k)`` in
source row ``j``.  Enumeration therefore walks over count vectors in the
variable order, keeping both fillings column-strict as it goes.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations_with_replacement, permutations, product
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from .algebra import Poly, RepSpace, leading_monomial, permutation_sign
from .semiinvariants import semi_invariant
from .tableaux import Box, LinkedPair, TableauError


@dataclass(frozen=True)
class KroneckerContext:
    """Kronecker quiver with ``K`` arrows, ranks ``(r0, r1)`` and degree ``d``.

    The degree parameter is ``a = d / gcd(r0, r1)``; the target tableau is
    ``r1 x a*r0`` and the source tableau ``r0 x a*r1``.
    """

    K: int
    r0: int
    r1: int
    d: int = 1

    def __post_init__(self):
        if min(self.K, self.r0, self.r1, self.d) < 1:
            raise ValueError("K, r0, r1 and d must be positive")

    @classmethod
    def from_a(cls, K: int, r0: int, r1: int, a) -> "KroneckerContext":
        d = Fraction(a) * math.gcd(r0, r1)
        if d.denominator != 1:
            raise ValueError(f"a={a} is not a multiple of 1/gcd(r0, r1)")
        return cls(K, r0, r1, int(d))

    @property
    def g(self) -> int:
        return math.gcd(self.r0, self.r1)

    @property
    def a(self) -> Fraction:
        return Fraction(self.d, self.g)

    @property
    def plus_cols(self) -> int:
        return self.d * self.r0 // self.g

    @property
    def minus_cols(self) -> int:
        return self.d * self.r1 // self.g

    @property
    def weight(self) -> tuple[int, int]:
        return (-self.minus_cols, self.plus_cols)

    def with_degree(self, d: int) -> "KroneckerContext":
        return KroneckerContext(self.K, self.r0, self.r1, d)

    @property
    def space(self) -> RepSpace:
        return _space(self.K, self.r0, self.r1)


@lru_cache(maxsize=None)
def _space(K: int, r0: int, r1: int) -> RepSpace:
    return RepSpace.kronecker(K, r0, r1)


# enumeration


@lru_cache(maxsize=64)
def ss_exponents(ctx: KroneckerContext) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors (ring variable order) of all semi-standard pairs of the context."""
    K, r0, r1 = ctx.K, ctx.r0, ctx.r1
    cp, cm = ctx.plus_cols, ctx.minus_cols
    # CP[i][k][j]: number of labels <= (i, j) in target row k
    # CM[i][j][k]: number of labels <= (i, k) in source row j
    CP = [[[0] * (r0 + 1) for _ in range(r1 + 1)] for _ in range(K + 1)]
    CM = [[[0] * (r1 + 1) for _ in range(r0 + 1)] for _ in range(K + 1)]
    # row k of an r-row column-strict filling may not use the last r-k letters
    last_p = [K * r0 - 1 - r1 + k for k in range(r1 + 1)]
    last_m = [K * r1 - 1 - r0 + j for j in range(r0 + 1)]
    positions = [(i, k, j) for i in range(1, K + 1) for k in range(1, r1 + 1) for j in range(1, r0 + 1)]
    n = len(positions)
    vals = [0] * n
    out: List[tuple[int, ...]] = []

    def rec(t: int) -> None:
        if t == n:
            out.append(tuple(vals))
            return
        i, k, j = positions[t]
        cpi, cmi = CP[i], CM[i]
        if j == 1:
            cpi[k][0] = CP[i - 1][k][r0] if i > 1 else 0
        if k == 1:
            cmi[j][0] = CM[i - 1][j][r1] if i > 1 else 0
        base_p = cpi[k][j - 1]
        base_m = cmi[j][k - 1]
        hi = min(cp - base_p, cm - base_m)
        if k >= 2:
            hi = min(hi, cpi[k - 1][j - 1] - base_p)
        if j >= 2:
            hi = min(hi, cmi[j - 1][k - 1] - base_m)
        lo = 0
        if (i - 1) * r0 + (j - 1) >= last_p[k]:
            lo = cp - base_p
        if (i - 1) * r1 + (k - 1) >= last_m[j]:
            lo = max(lo, cm - base_m)
        for v in range(lo, hi + 1):
            vals[t] = v
            cpi[k][j] = base_p + v
            cmi[j][k] = base_m + v
            rec(t + 1)
        vals[t] = 0

    rec(0)
    return tuple(out)


def pair_from_exponents(ctx: KroneckerContext, exps: Sequence[int]) -> LinkedPair:
    """The semi-standard pair with the given monomial and its order-preserving link."""
    K, r0, r1 = ctx.K, ctx.r0, ctx.r1
    plus_fill = [0] * (r1 + 1)
    minus_fill = [0] * (r0 + 1)
    boxes = []
    t = 0
    # variable order (i, k, j) is also the label order on both sides
    for i in range(1, K + 1):
        for k in range(1, r1 + 1):
            for j in range(1, r0 + 1):
                for _ in range(exps[t]):
                    plus_fill[k] += 1
                    minus_fill[j] += 1
                    boxes.append(Box(i, (1, k, plus_fill[k]), (0, j, minus_fill[j])))
                t += 1
    # labels for a source row j are appended by increasing (i, k), as required
    return LinkedPair(ctx.space, boxes, check=False)


def enumerate_ss_pairs(ctx: KroneckerContext) -> List[LinkedPair]:
    """All semi-standard linked pairs of the context, ordered by target entries."""
    pairs = [pair_from_exponents(ctx, e) for e in ss_exponents(ctx)]
    pairs.sort(key=lambda p: p.tplus(1).entries)
    return pairs


def exponents_of_pair(pair: LinkedPair) -> tuple[int, ...]:
    ring = pair.space.ring
    exps = [0] * ring.nvars
    for b in pair.boxes:
        exps[ring.index[(b.path, b.plus[1], b.minus[1])]] += 1
    return tuple(exps)


def leading_monomial_of_pair(pair: LinkedPair) -> int:
    """Packed monomial of the target tableau; the leading monomial of ``f`` for
    semi-standard pairs."""
    if not pair.is_semistandard():
        raise TableauError("leading monomial shortcut needs a semi-standard pair")
    return pair.space.ring.pack(exponents_of_pair(pair))


# exact leading monomials without expanding f


def _minus_group(r0: int, ncols: int):
    perms = list(permutations(range(r0)))
    signs = [permutation_sign(p) for p in perms]
    idx = np.array(list(product(range(len(perms)), repeat=ncols)), dtype=np.int64).reshape(-1, ncols)
    table = np.array(perms, dtype=np.int64)[idx]  # (n_tau, ncols, r0)
    sign = np.prod(np.array(signs, dtype=np.int64)[idx], axis=1)
    return table, sign


def exact_leading_terms(pairs: Sequence[LinkedPair], chunk: int = 256) -> List[tuple[int, int]]:
    """Leading monomial and coefficient of ``f`` for Kronecker pairs of one shape.

    ``f`` is the signed sum over source-column permutations of products of
    target-column determinants.  The leading term of each product is read
    off by sorting every target column, so the largest such monomial over
    the group, with its summed coefficient, is the leading term of ``f``
    whenever that sum is nonzero.  Pairs where it cancels are expanded.
    """
    if not pairs:
        return []
    space = pairs[0].space
    ring = space.ring
    K, r0, r1 = len(space.quiver.arrows), space.dims[0], space.dims[1]
    cplus = pairs[0].plus_shape[1]
    cminus = pairs[0].minus_shape[0]
    tau, tau_sign = _minus_group(r0, cminus)
    ntau = tau.shape[0]
    nvars = ring.nvars
    results: List[tuple[int, int]] = []
    for start in range(0, len(pairs), chunk):
        batch = pairs[start:start + chunk]
        P = len(batch)
        # per box: path, target row, target col, source row, source col; grid order
        arr = np.zeros((P, r1, cplus, 3), dtype=np.int64)
        for n, pr in enumerate(batch):
            if pr.plus_shape.get(1) != cplus or pr.minus_shape.get(0) != cminus:
                raise ValueError("pairs must share one shape")
            for b in pr.boxes:
                arr[n, b.plus[1] - 1, b.plus[2] - 1] = (b.path - 1, b.minus[1] - 1, b.minus[2] - 1)
        path = arr[..., 0]
        srow = arr[..., 1]
        scol = arr[..., 2]
        # new slot of every box under every tau: (P, ntau, r1, cplus)
        slot = tau[:, scol, srow]  # (ntau, P, r1, cplus)
        slot = np.transpose(slot, (1, 0, 2, 3))
        code = path[:, None, :, :] * r0 + slot
        srt = np.sort(code, axis=2)
        dup = np.any(srt[:, :, 1:, :] == srt[:, :, :-1, :], axis=(2, 3))
        inv = np.zeros((P, ntau), dtype=np.int64)
        for x in range(r1):
            for y in range(x + 1, r1):
                inv += np.sum(code[:, :, x, :] > code[:, :, y, :], axis=2)
        coef = np.where(dup, 0, tau_sign[None, :] * (1 - 2 * (inv % 2)))
        # variable index of sorted entry at row x: (i, x, s) -> (i*r1 + x)*r0 + s
        rows = np.arange(r1)[None, None, :, None]
        var = (srt // r0 * r1 + rows) * r0 + srt % r0
        flat = (np.arange(P * ntau).reshape(P, ntau)[:, :, None, None] * nvars + var).ravel()
        E = np.bincount(flat, minlength=P * ntau * nvars).reshape(P, ntau, nvars)
        alive = coef != 0
        for v in range(nvars):
            col = np.where(alive, E[:, :, v], -1)
            alive &= col == col.max(axis=1, keepdims=True)
        for n in range(P):
            hits = np.flatnonzero(alive[n])
            total = int(coef[n, hits].sum()) if hits.size else 0
            if total:
                results.append((ring.pack(E[n, hits[0]].tolist()), total))
            else:
                results.append(leading_monomial(semi_invariant(batch[n])))
    return results


# primitivity


@dataclass(frozen=True)
class Splitting:
    left: LinkedPair
    right: LinkedPair


class PrimitivityTable:
    """Semi-standard monomials by degree and the decomposable ones among them."""

    def __init__(self, K: int, r0: int, r1: int, max_d: int):
        self.base = KroneckerContext(K, r0, r1, 1)
        self.max_d = max_d
        ring = self.base.space.ring
        self.monomials: Dict[int, List[int]] = {}
        self.witness: Dict[int, Dict[int, tuple[int, int]]] = {}
        for d in range(1, max_d + 1):
            ctx = self.base.with_degree(d)
            self.monomials[d] = [ring.pack(e) for e in ss_exponents(ctx)]
            present = set(self.monomials[d])
            found: Dict[int, tuple[int, int]] = {}
            for d1 in range(1, d // 2 + 1):
                left = self.monomials[d1]
                right = self.monomials[d - d1]
                for m1 in left:
                    for m2 in right:
                        m = m1 + m2
                        if m not in found:
                            found[m] = (m1, m2)
            missing = set(found) - present
            if missing:
                raise AssertionError("product of semi-standard monomials is not semi-standard")
            self.witness[d] = found

    def is_primitive_monomial(self, d: int, m: int) -> bool:
        return m not in self.witness[d]

    def splitting(self, d: int, m: int) -> Optional[tuple[int, int]]:
        return self.witness[d].get(m)

    def primitive_monomials(self, d: int) -> List[int]:
        w = self.witness[d]
        return [m for m in self.monomials[d] if m not in w]


def _degree_of(pair: LinkedPair) -> int:
    r0, r1 = pair.space.dims[0], pair.space.dims[1]
    return pair.plus_shape[1] * math.gcd(r0, r1) // r0


def is_primitive(pair: LinkedPair, table: PrimitivityTable | None = None) -> tuple[bool, Optional[Splitting]]:
    """Whether the leading monomial of the pair is not a product of two smaller ones."""
    space = pair.space
    K, r0, r1 = len(space.quiver.arrows), space.dims[0], space.dims[1]
    d = _degree_of(pair)
    if table is None or table.max_d < d:
        table = PrimitivityTable(K, r0, r1, d)
    m = leading_monomial_of_pair(pair)
    split = table.splitting(d, m)
    if split is None:
        return True, None
    ring = space.ring
    base = table.base
    left_d = _degree_from_monomial(ring, split[0], base)
    left = pair_from_exponents(base.with_degree(left_d), ring.unpack(split[0]))
    right = pair_from_exponents(base.with_degree(d - left_d), ring.unpack(split[1]))
    return False, Splitting(left, right)


def _degree_from_monomial(ring, m: int, base: KroneckerContext) -> int:
    total = ring.degree(m)
    # total degree equals the number of target boxes r1 * d * r0 / g
    return total * base.g // (base.r0 * base.r1)


@dataclass
class GeneratorReport:
    K: int
    r0: int
    r1: int
    max_d: int
    generators: List[LinkedPair]
    counts: Dict[tuple[int, int], int]
    totals: Dict[tuple[int, int], int]

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "r0": self.r0,
            "r1": self.r1,
            "max_degree": self.max_d,
            "max_a": str(Fraction(self.max_d, math.gcd(self.r0, self.r1))),
            "counts": [
                {"weight": list(w), "primitive": c, "semistandard": self.totals[w]}
                for w, c in self.counts.items()
            ],
            "generators": [_pair_report(p) for p in self.generators],
        }


def _pair_report(p: LinkedPair) -> dict:
    from .algebra import monomial_to_json

    return {
        "pair": p.to_dict(),
        "leading_monomial": monomial_to_json(p.space.ring, leading_monomial_of_pair(p)),
    }


def primitive_generators(K: int, r0: int, r1: int, max_d: int) -> GeneratorReport:
    """All primitive semi-standard pairs of degree at most ``max_d``."""
    table = PrimitivityTable(K, r0, r1, max_d)
    base = table.base
    ring = base.space.ring
    gens: List[LinkedPair] = []
    counts: Dict[tuple[int, int], int] = {}
    totals: Dict[tuple[int, int], int] = {}
    for d in range(1, max_d + 1):
        ctx = base.with_degree(d)
        prim = table.primitive_monomials(d)
        pairs = [pair_from_exponents(ctx, ring.unpack(m)) for m in prim]
        pairs.sort(key=lambda p: p.tplus(1).entries)
        gens.extend(pairs)
        counts[ctx.weight] = len(pairs)
        totals[ctx.weight] = len(table.monomials[d])
    return GeneratorReport(K, r0, r1, max_d, gens, counts, totals)


def max_degree_for_a(r0: int, r1: int, max_a) -> int:
    d = Fraction(max_a) * math.gcd(r0, r1)
    return math.floor(d)


# the (2,2) family


def _strict_rows_ok(rows) -> bool:
    for r in rows:
        if any(r[c] > r[c + 1] for c in range(len(r) - 1)):
            return False
    return all(x < y for x, y in zip(rows[0], rows[1]))


def kronecker22_family(K: int) -> List[LinkedPair]:
    """Semi-standard pairs of the two-row shape with one repeated corner label.

    Source rows ``[a1, b_1 2, ..., b_l 2]`` over ``[c_1 1, ..., c_l 1, d2]``
    and target rows ``[a1, c_1 2, ..., c_l 2]`` over ``[b_1 1, ..., b_l 1, d2]``
    for every choice of labels making both tableaux semi-standard.
    """
    space = _space(K, 2, 2)
    out = []
    # for l >= 1 the two rows force l + 2 distinct increasing labels
    for l in range(0, max(1, K - 1)):
        for bs in combinations_with_replacement(range(1, K + 1), l):
            for cs in combinations_with_replacement(range(1, K + 1), l):
                for a in range(1, K + 1):
                    for d in range(1, K + 1):
                        minus = [[(a, 1)] + [(b, 2) for b in bs], [(c, 1) for c in cs] + [(d, 2)]]
                        plus = [[(a, 1)] + [(c, 2) for c in cs], [(b, 1) for b in bs] + [(d, 2)]]
                        if _strict_rows_ok(minus) and _strict_rows_ok(plus):
                            out.append(LinkedPair.kronecker(space, plus, minus))
    out.sort(key=lambda p: (p.plus_shape[1], p.tplus(1).entries))
    return out


# subduction


@dataclass
class SubductionResult:
    remainder: Poly
    # (scale, quotient, generator indices): f <- scale * f - quotient * product
    trace: List[tuple[int, int, tuple[int, ...]]]


class Subductor:
    """Subduction against a fixed list of generators with known leading terms."""

    def __init__(self, gens: Sequence[LinkedPair], polys: Sequence[Poly] | None = None):
        self.gens = list(gens)
        self.polys = list(polys) if polys is not None else [semi_invariant(g) for g in self.gens]
        self.lead = [p.leading_term() for p in self.polys]
        self.ring = self.polys[0].ring if self.polys else None
        self._factor_memo: Dict[int, Optional[tuple[int, ...]]] = {}
        self._product_memo: Dict[tuple[int, ...], Poly] = {}
        self.degrees = [self.ring.degree(m) for m, _ in self.lead] if self.polys else []

    def factor(self, m: int) -> Optional[tuple[int, ...]]:
        """Generator indices (non-decreasing) whose leading monomials multiply to ``m``."""
        memo = self._factor_memo
        if m in memo:
            return memo[m]
        ring = self.ring
        res = None
        if m == 0:
            res = ()
        else:
            for g, (lm, _) in enumerate(self.lead):
                if ring.divides(lm, m):
                    rest = self.factor(m - lm)
                    if rest is not None:
                        res = tuple(sorted((g,) + rest))
                        break
        memo[m] = res
        return res

    def product(self, idx: tuple[int, ...]) -> Poly:
        if idx in self._product_memo:
            return self._product_memo[idx]
        if not idx:
            out = self.ring.one()
        elif len(idx) == 1:
            out = self.polys[idx[0]]
        else:
            out = self.product(idx[:-1]) * self.polys[idx[-1]]
        self._product_memo[idx] = out
        return out

    def subduce(self, f: Poly, max_steps: int = 10**6) -> SubductionResult:
        f = Poly(f.ring, dict(f.terms))
        trace = []
        for _ in range(max_steps):
            if not f.terms:
                return SubductionResult(f, trace)
            m, c = f.leading_term()
            idx = self.factor(m)
            if idx is None:
                return SubductionResult(f, trace)
            g = self.product(idx)
            lc = g.terms[m]
            # leading coefficients need not be units; rescale f instead of dividing
            k = math.gcd(c, lc)
            scale, q = lc // k, c // k
            if scale != 1:
                f = f * scale
            f.add_scaled(g, -q)
            trace.append((scale, q, idx))
        raise RuntimeError("subduction did not terminate within the step guard")


def subduce(f: Poly, gens: Sequence[LinkedPair]) -> SubductionResult:
    return Subductor(gens).subduce(f)
