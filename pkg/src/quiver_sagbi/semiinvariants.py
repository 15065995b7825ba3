"""Semi-invariants attached to linked pairs, their verification and straightening."""

from __future__ import annotations

import math
import sys
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence

import numpy as np

from .algebra import Poly, RepSpace, determinant, permutation_sign
from .quiver import Weight
from .tableaux import Box, Label, LinkedPair, RectTableau, is_semistandard


class BudgetExceeded(RuntimeError):
    pass


# group elements


@dataclass(frozen=True)
class GroupElement:
    """One permutation (0-based images) per column of the acted-on tuple."""

    perms: tuple[tuple[tuple[int, int], tuple[int, ...]], ...]

    @property
    def sign(self) -> int:
        s = 1
        for _, p in self.perms:
            s *= permutation_sign(p)
        return s

    def as_dict(self) -> Dict[tuple[int, int], tuple[int, ...]]:
        return dict(self.perms)


def _columns(pair: LinkedPair, side: str) -> List[tuple[int, int]]:
    shape = pair.plus_shape if side == "+" else pair.minus_shape
    return [(v, c) for v in sorted(shape) for c in range(1, shape[v] + 1)]


def group_order(pair: LinkedPair, side: str) -> int:
    shape = pair.plus_shape if side == "+" else pair.minus_shape
    return math.prod(math.factorial(pair.space.dims[v]) ** w for v, w in shape.items())


def group_elements(pair: LinkedPair, side: str) -> Iterator[GroupElement]:
    cols = _columns(pair, side)
    choices = [list(permutations(range(pair.space.dims[v]))) for v, _ in cols]
    for combo in product(*choices):
        yield GroupElement(tuple(zip(cols, combo)))


def _signed_elements(pair: LinkedPair, side: str):
    cols = _columns(pair, side)
    choices = [
        [(p, permutation_sign(p)) for p in permutations(range(pair.space.dims[v]))] for v, _ in cols
    ]
    for combo in product(*choices):
        sign = 1
        perms = {}
        for col, (p, s) in zip(cols, combo):
            sign *= s
            perms[col] = p
        yield perms, sign


# monomials of tableaux


def mon(space: RepSpace, tableaux: Mapping[int, RectTableau] | Sequence[RectTableau], side: str) -> Poly:
    """Product of path-matrix entries read off a tableau tuple.

    A target label ``ij`` in row ``l`` contributes entry ``(l, j)`` of the
    matrix of path ``i``; a source label ``il`` in row ``j`` contributes the
    same entry.
    """
    ts = tableaux.values() if isinstance(tableaux, Mapping) else tableaux
    out = space.ring.one()
    for t in ts:
        for r, row in enumerate(t.entries, start=1):
            for lab in row:
                if side == "+":
                    out = out * space.entry(lab.path, r, lab.slot)
                else:
                    out = out * space.entry(lab.path, lab.slot, r)
    return out


def pair_mon(pair: LinkedPair) -> Poly:
    out = pair.space.ring.one()
    for b in pair.boxes:
        out = out * pair.space.entry(b.path, b.plus[1], b.minus[1])
    return out


# the three formulas


def f_direct(pair: LinkedPair, budget: int = 10**6) -> Poly:
    """Signed double sum over both column groups."""
    n = group_order(pair, "+") * group_order(pair, "-")
    if n > budget:
        raise BudgetExceeded(
            f"double sum has {n} terms (budget {budget}); use f_det_rows or f_det_cols"
        )
    sp = pair.space
    acc_poly = sp.ring.zero()
    boxes = pair.boxes
    minus_elems = list(_signed_elements(pair, "-"))
    for pi, s1 in _signed_elements(pair, "+"):
        for tau, s2 in minus_elems:
            term = sp.ring.one()
            for b in boxes:
                p, l, c = b.plus
                q, j, c2 = b.minus
                term = term * sp.entry(b.path, pi[(p, c)][l - 1] + 1, tau[(q, c2)][j - 1] + 1)
                if not term.terms:
                    break
            acc_poly.add_scaled(term, s1 * s2)
    return acc_poly


def _grouped(pair: LinkedPair, side: str) -> Dict[tuple[int, int], List[Box]]:
    """Boxes of each column on one side, ordered by row."""
    cols: Dict[tuple[int, int], List[Box]] = defaultdict(list)
    for b in pair.boxes:
        pos = b.plus if side == "+" else b.minus
        cols[(pos[0], pos[2])].append(b)
    for v in cols.values():
        v.sort(key=lambda b: (b.plus if side == "+" else b.minus)[1])
    return dict(sorted(cols.items()))


def _product_sum(pair: LinkedPair, act_side: str) -> Poly:
    """Sum over the group acting on ``act_side`` of products of column determinants
    of the other side."""
    sp = pair.space
    ring = sp.ring
    det_side = "-" if act_side == "+" else "+"
    columns = list(_grouped(pair, det_side).values())
    cache: Dict[tuple, Poly] = {}

    def det_for(key: tuple) -> Poly:
        d = cache.get(key)
        if d is None:
            if det_side == "-":
                # rows R_k(M_P): entry (k, x)
                mat = [[sp.entry(i, k, x) for x in range(1, len(key) + 1)] for i, k in key]
            else:
                # columns C_k(M_P): entry (x, k), placed as column
                cols = [[sp.entry(i, x, k) for x in range(1, len(key) + 1)] for i, k in key]
                mat = [list(r) for r in zip(*cols)]
            d = determinant(mat)
            cache[key] = d
        return d

    acc = ring.zero()
    for g, sign in _signed_elements(pair, act_side):
        term = None
        for col in columns:
            if act_side == "+":
                key = tuple((b.path, g[(b.plus[0], b.plus[2])][b.plus[1] - 1] + 1) for b in col)
            else:
                key = tuple((b.path, g[(b.minus[0], b.minus[2])][b.minus[1] - 1] + 1) for b in col)
            d = det_for(key)
            if not d.terms:
                term = None
                break
            term = d if term is None else term * d
        if term is not None:
            acc.add_scaled(term, sign)
    return acc


def f_det_rows(pair: LinkedPair) -> Poly:
    """Sum over target-column permutations of products of source-column determinants."""
    return _product_sum(pair, "+")


def f_det_cols(pair: LinkedPair) -> Poly:
    """Sum over source-column permutations of products of target-column determinants."""
    return _product_sum(pair, "-")


def semi_invariant(pair: LinkedPair, budget: int | None = None) -> Poly:
    """The semi-invariant of a pair, using the cheaper determinant formula.

    ``budget`` bounds the number of group elements summed over.
    """
    plus, minus = group_order(pair, "+"), group_order(pair, "-")
    if budget is not None and min(plus, minus) > budget:
        raise BudgetExceeded(f"{min(plus, minus)} group elements exceed the budget {budget}")
    if plus <= minus:
        return f_det_rows(pair)
    return f_det_cols(pair)


# verification


def _linear_images(f: Poly, columns: np.ndarray) -> set[tuple[int, ...]]:
    if not f.terms:
        return set()
    images = f.ring.exponent_matrix(f.terms) @ columns
    return {tuple(int(x) for x in row) for row in np.unique(images, axis=0)}


def torus_weights(f: Poly, space: RepSpace) -> set[tuple[tuple[int, ...], ...]]:
    """Set of torus weights of the monomials of ``f``, one tuple per vertex (over lifts)."""
    q, d = space.quiver, space.dims
    offsets = [sum(d[v] for v in q.vertices[:p]) for p in q.vertices]
    cols = np.zeros((space.ring.nvars, sum(d[p] for p in q.vertices)), dtype=np.int64)
    for k, (a, row, col) in enumerate(space.ring.variables):
        arrow = q.arrow(a)
        cols[k, offsets[arrow.target] + row - 1] += 1
        cols[k, offsets[arrow.source] + col - 1] -= 1
    return {
        tuple(tuple(w[offsets[p]:offsets[p] + d[p]]) for p in q.vertices)
        for w in _linear_images(f, cols)
    }


def arrow_degrees(f: Poly, space: RepSpace) -> set[tuple[int, ...]]:
    cols = np.zeros((space.ring.nvars, len(space.quiver.arrows)), dtype=np.int64)
    for k, v in enumerate(space.ring.variables):
        cols[k, v.arrow - 1] = 1
    return _linear_images(f, cols)


def _derivation_moves(space: RepSpace, p: int, u: int, v: int) -> list[tuple[int, int, int]]:
    """(from-variable, to-variable, sign) for the off-diagonal generator at vertex p."""
    ring, q, d = space.ring, space.quiver, space.dims
    moves = []
    for a in q.arrows:
        if a.target == p:
            for c in range(1, d[a.source] + 1):
                moves.append((ring.index[(a.id, v, c)], ring.index[(a.id, u, c)], 1))
        if a.source == p:
            for r in range(1, d[a.target] + 1):
                moves.append((ring.index[(a.id, r, u)], ring.index[(a.id, r, v)], -1))
    return moves


def _derive(ring, mons: list, coefs: list, exps: np.ndarray, moves) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for a, b, sign in moves:
        column = exps[:, a]
        hit = np.flatnonzero(column)
        delta = ring.unit(b) - ring.unit(a)
        for i, e in zip(hit.tolist(), column[hit].tolist()):
            k = mons[i] + delta
            out[k] = out.get(k, 0) + sign * e * coefs[i]
    return {m: c for m, c in out.items() if c}


def apply_derivation(f: Poly, moves: Sequence[tuple[int, int, int]]) -> Poly:
    mons = list(f.terms)
    coefs = [f.terms[m] for m in mons]
    return Poly(f.ring, _derive(f.ring, mons, coefs, f.ring.exponent_matrix(mons), moves))


def check_semi_invariance(f: Poly, weight: Weight | Sequence[int], space: RepSpace) -> bool:
    """Exact check that ``f`` is a semi-invariant of the given weight.

    The torus must act on every monomial through the weight, and every
    off-diagonal generator of each general linear Lie algebra must kill f.
    """
    w = weight.w if isinstance(weight, Weight) else tuple(weight)
    if len(arrow_degrees(f, space)) > 1:
        raise ValueError("polynomial is not homogeneous in the arrow blocks")
    d = space.dims
    target = tuple(tuple([w[p]] * d[p]) for p in space.quiver.vertices)
    if any(tw != target for tw in torus_weights(f, space)):
        return False
    # raising and lowering operators between neighbouring indices generate
    # every off-diagonal part, and the annihilator is closed under brackets
    mons = list(f.terms)
    coefs = [f.terms[m] for m in mons]
    exps = space.ring.exponent_matrix(mons)
    for p in space.quiver.vertices:
        for u in range(1, d[p]):
            for a, b in ((u, u + 1), (u + 1, u)):
                if _derive(space.ring, mons, coefs, exps, _derivation_moves(space, p, a, b)):
                    return False
    return True


# straightening


@dataclass(frozen=True)
class PlainRelation:
    """``D(source) = sum coef * D(target)`` for a single tableau; empty terms mean zero."""

    source: RectTableau
    terms: tuple[tuple[int, RectTableau], ...]


@dataclass
class StraighteningRelation:
    source: LinkedPair
    vertex: int
    side: str
    terms: list[tuple[int, LinkedPair]]
    verified: Optional[bool] = None


def _first_unsorted_column(grid, cols, rows):
    for c in range(cols):
        col = [grid[r][c] for r in range(rows)]
        if any(col[r] >= col[r + 1] for r in range(rows - 1)):
            return c
    return None


def _straighten_step(letters: Sequence[Sequence], drop_repeats: bool):
    """One rewriting step on a grid of comparable letters.

    Returns ``None`` when the grid is standard, otherwise a list of
    ``(coef, arrangement)`` where ``arrangement[r][c]`` is the original
    ``(row, col)`` cell placed at ``(r, c)``.  With ``drop_repeats`` a column
    holding equal letters counts as zero.
    """
    rows = len(letters)
    cols = len(letters[0]) if rows else 0
    ident = [[(r, c) for c in range(cols)] for r in range(rows)]
    L = lambda cell: letters[cell[0]][cell[1]]

    def sort_column(arr, c):
        col = [arr[r][c] for r in range(rows)]
        keys = [L(x) for x in col]
        if len(set(keys)) < rows:
            if drop_repeats:
                return 0
            raise ValueError("repeated letters in a column")
        order = sorted(range(rows), key=lambda r: keys[r])
        for r, src in enumerate(order):
            arr[r][c] = col[src]
        return permutation_sign(order)

    c = _first_unsorted_column([[L(x) for x in row] for row in ident], cols, rows)
    if c is not None:
        arr = [row[:] for row in ident]
        s = sort_column(arr, c)
        return [(s, arr)] if s else []
    for c in range(cols - 1):
        for s in range(rows):
            if letters[s][c] > letters[s][c + 1]:
                return _garnir(ident, c, s, rows, sort_column)
    return None


def _garnir(ident, c, s, rows, sort_column):
    xs = [ident[r][c] for r in range(s, rows)]
    ys = [ident[r][c + 1] for r in range(0, s + 1)]
    seq = xs + ys
    k = len(xs)
    out = []
    for z in combinations(range(len(seq)), k):
        if z == tuple(range(k)):
            continue
        comp = [i for i in range(len(seq)) if i not in z]
        sign = -permutation_sign(list(z) + comp)
        arr = [row[:] for row in ident]
        for r, i in zip(range(s, rows), z):
            arr[r][c] = seq[i]
        for r, i in zip(range(0, s + 1), comp):
            arr[r][c + 1] = seq[i]
        s1 = sort_column(arr, c)
        s2 = sort_column(arr, c + 1) if s1 else 0
        if s1 and s2:
            out.append((sign * s1 * s2, arr))
    return out


def straighten_columns(t: RectTableau) -> PlainRelation | None:
    """One classical straightening step for a product of maximal minors.

    Returns ``None`` when ``t`` is already semi-standard.
    """
    if is_semistandard(t):
        return None
    res = _straighten_step(t.entries, drop_repeats=True)
    if res is None:
        # rows and columns are sorted with ties: only repeated letters remain
        return PlainRelation(t, ())
    terms = []
    for coef, arr in res:
        ent = tuple(tuple(t.entries[r][c] for r, c in row) for row in arr)
        terms.append((coef, RectTableau(t.vertex, ent)))
    return PlainRelation(t, tuple(terms))


def straighten_tableau(t: RectTableau) -> Dict[RectTableau, int]:
    """Express a product of maximal minors through semi-standard tableaux."""
    memo: Dict[RectTableau, Dict[RectTableau, int]] = {}

    def go(x: RectTableau) -> Dict[RectTableau, int]:
        if x in memo:
            return memo[x]
        rel = straighten_columns(x)
        if rel is None:
            out = {x: 1}
        else:
            out: Dict[RectTableau, int] = defaultdict(int)
            for coef, y in rel.terms:
                for z, c in go(y).items():
                    out[z] += coef * c
            out = {z: c for z, c in out.items() if c}
        memo[x] = out
        return out

    return _with_recursion(lambda: go(t))


def _with_recursion(fn):
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 100000))
    try:
        return fn()
    finally:
        sys.setrecursionlimit(old)


def _refined_grid(pair: LinkedPair, vertex: int, side: str):
    """Grid of boxes and of refined letters for one tableau of the pair.

    Equal labels are ordered by the box position on the other side, which is
    fixed while this tableau is rewritten.
    """
    shape = pair.plus_shape if side == "+" else pair.minus_shape
    rows, cols = pair.space.dims[vertex], shape[vertex]
    boxes = [[None] * cols for _ in range(rows)]
    letters = [[None] * cols for _ in range(rows)]
    for b in pair.boxes:
        pos, other = (b.plus, b.minus) if side == "+" else (b.minus, b.plus)
        if pos[0] == vertex:
            lab = (b.path, other[1])
            boxes[pos[1] - 1][pos[2] - 1] = b
            letters[pos[1] - 1][pos[2] - 1] = (lab, other)
    return boxes, letters


def straighten_pair_step(pair: LinkedPair, vertex: int, side: str) -> StraighteningRelation | None:
    """One straightening step on a single tableau of the pair, lifted to the pair."""
    boxes, letters = _refined_grid(pair, vertex, side)
    res = _straighten_step(letters, drop_repeats=False)
    if res is None:
        return None
    return lift_straightening(pair, vertex, side, res, boxes)


def lift_straightening(pair, vertex, side, arrangements, boxes=None, verify: bool = False):
    """Move boxes of one tableau according to each arrangement.

    ``arrangements`` is a list of ``(coef, arrangement)`` with
    ``arrangement[r][c]`` the 0-based cell whose box moves to ``(r, c)``.
    """
    if boxes is None:
        boxes, _ = _refined_grid(pair, vertex, side)
    terms = []
    for coef, arr in arrangements:
        moves = {}
        for r, row in enumerate(arr):
            for c, (r0, c0) in enumerate(row):
                b = boxes[r0][c0]
                pos = (vertex, r + 1, c + 1)
                moves[b] = b._replace(plus=pos) if side == "+" else b._replace(minus=pos)
        terms.append((coef, pair.replace_positions(moves)))
    rel = StraighteningRelation(pair, vertex, side, terms)
    if verify:
        rel.verified = verify_relation(rel)
        if not rel.verified:
            raise AssertionError("lifted straightening identity failed")
    return rel


def verify_relation(rel: StraighteningRelation, evaluate: Callable[[LinkedPair], Poly] = None) -> bool:
    evaluate = evaluate or semi_invariant
    lhs = evaluate(rel.source)
    rhs = rel.source.space.ring.zero()
    for coef, p in rel.terms:
        rhs.add_scaled(evaluate(p), coef)
    return lhs == rhs


def express_weakly_semistandard(pair: LinkedPair) -> list[tuple[int, LinkedPair]]:
    """Rewrite ``f_pair`` as a combination of weakly semi-standard pairs.

    Target tableaux are straightened first, vertex by vertex, then the
    source tableaux.  Moving target boxes only changes second digits of the
    source labels and vice versa, so earlier stages stay weakly semi-standard.
    """
    stages = [(p, "+") for p in sorted(pair.plus_shape)] + [(q, "-") for q in sorted(pair.minus_shape)]
    current: Dict[tuple, tuple[LinkedPair, int]] = {pair.key: (pair, 1)}
    for vertex, side in stages:
        memo: Dict[tuple, Dict[tuple, tuple[LinkedPair, int]]] = {}

        def expand(pr: LinkedPair):
            if pr.key in memo:
                return memo[pr.key]
            rel = straighten_pair_step(pr, vertex, side)
            if rel is None:
                out = {pr.key: (pr, 1)}
            else:
                out = {}
                for coef, tgt in rel.terms:
                    for k, (p2, c2) in expand(tgt).items():
                        old = out.get(k, (p2, 0))[1]
                        out[k] = (p2, old + coef * c2)
                out = {k: v for k, v in out.items() if v[1]}
            memo[pr.key] = out
            return out

        nxt: Dict[tuple, tuple[LinkedPair, int]] = {}
        for pr, c in current.values():
            for k, (p2, c2) in _with_recursion(lambda: expand(pr)).items():
                old = nxt.get(k, (p2, 0))[1]
                nxt[k] = (p2, old + c * c2)
        current = {k: v for k, v in nxt.items() if v[1]}
    return [(c, p) for k, (p, c) in sorted(current.items())]
