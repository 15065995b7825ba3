"""Shared fixtures and independent oracles for the test-suite."""

from __future__ import annotations

import math
import random
import time
from itertools import permutations

from quiver_sagbi.algebra import RepSpace
from quiver_sagbi.quiver import DimensionVector, Quiver
from quiver_sagbi.tableaux import Box, LinkedPair, RectTableau


def three_vertex_space() -> RepSpace:
    q = Quiver.from_edges(3, [(0, 1), (0, 1), (0, 2), (0, 2), (0, 2), (0, 2), (1, 2)])
    return RepSpace(q, DimensionVector((2, 2, 3)))


def three_vertex_pair(space: RepSpace | None = None) -> LinkedPair:
    space = space or three_vertex_space()
    return LinkedPair.from_tableaux(
        space,
        {2: RectTableau.from_rows(2, [[31, 52], [41, 71], [72, 62]])},
        {0: RectTableau.from_rows(0, [[31, 42], [63, 51]]), 1: RectTableau.from_rows(1, [[72], [73]])},
    )


def random_kronecker_pair(rng: random.Random, space: RepSpace, d: int) -> LinkedPair:
    """Uniformly shuffled boxes: any filling, usually not semi-standard."""
    K = len(space.quiver.arrows)
    r0, r1 = space.dims[0], space.dims[1]
    g = math.gcd(r0, r1)
    plus_cols, minus_cols = d * r0 // g, d * r1 // g
    src = [j for j in range(1, r0 + 1) for _ in range(minus_cols)]
    tgt = [l for l in range(1, r1 + 1) for _ in range(plus_cols)]
    rng.shuffle(src)
    plus_free = {l: rng.sample(range(1, plus_cols + 1), plus_cols) for l in range(1, r1 + 1)}
    minus_free = {j: rng.sample(range(1, minus_cols + 1), minus_cols) for j in range(1, r0 + 1)}
    boxes = []
    for j, l in zip(src, tgt):
        boxes.append(Box(rng.randint(1, K), (1, l, plus_free[l].pop()), (0, j, minus_free[j].pop())))
    return LinkedPair(space, boxes)


def is_ssyt(rows) -> bool:
    for r in rows:
        if any(r[c] > r[c + 1] for c in range(len(r) - 1)):
            return False
    return all(x < y for a, b in zip(rows, rows[1:]) for x, y in zip(a, b))


def brute_force_ss_exponents(K: int, r0: int, r1: int, d: int) -> set[tuple[int, ...]]:
    """Every count vector over variables ``(i, k, j)`` whose two fillings are SSYT."""
    g = math.gcd(r0, r1)
    cp, cm = d * r0 // g, d * r1 // g
    variables = [(i, k, j) for i in range(1, K + 1) for k in range(1, r1 + 1) for j in range(1, r0 + 1)]
    out = set()

    def rec(t, vals, rowp, rowm):
        if t == len(variables):
            if all(x == cp for x in rowp) and all(x == cm for x in rowm):
                tp = [[] for _ in range(r1)]
                tm = [[] for _ in range(r0)]
                for (i, k, j), v in zip(variables, vals):
                    tp[k - 1] += [(i, j)] * v
                    tm[j - 1] += [(i, k)] * v
                if is_ssyt([sorted(r) for r in tp]) and is_ssyt([sorted(r) for r in tm]):
                    out.add(tuple(vals))
            return
        i, k, j = variables[t]
        for v in range(min(cp - rowp[k - 1], cm - rowm[j - 1]) + 1):
            rowp[k - 1] += v
            rowm[j - 1] += v
            rec(t + 1, vals + [v], rowp, rowm)
            rowp[k - 1] -= v
            rowm[j - 1] -= v

    rec(0, [], [0] * r1, [0] * r0)
    return out


def brute_force_link_count(tplus: dict, tminus: dict, space: RepSpace) -> int:
    """Count bijections between all target and source boxes satisfying the link rule."""
    plus = [(p, r + 1, c + 1, lab) for p, t in tplus.items() for r, row in enumerate(t.entries) for c, lab in enumerate(row)]
    minus = [(q, r + 1, c + 1, lab) for q, t in tminus.items() for r, row in enumerate(t.entries) for c, lab in enumerate(row)]
    if len(plus) != len(minus):
        return 0
    count = 0
    for perm in permutations(minus):
        ok = True
        for (p, l, _, a), (q, j, _, b) in zip(plus, perm):
            path = space.path(a.path)
            if a.path != b.path or a.slot != j or b.slot != l or path.target != p or path.source != q:
                ok = False
                break
        count += ok
    return count


CRITERIA: dict[int, str] = {}


class criterion:
    """Context manager that records one PASS/FAIL line with its wall time."""

    def __init__(self, number: int, title: str, limit: float):
        self.number, self.title, self.limit = number, title, limit

    def __enter__(self):
        self._t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self._t0
        ok = exc_type is None and elapsed < self.limit
        line = f"criterion {self.number:2d} {'PASS' if ok else 'FAIL'} {elapsed:8.2f}s (limit {self.limit:g}s) {self.title}"
        CRITERIA[self.number] = line
        print(line)
        if exc_type is None and not ok:
            raise AssertionError(f"criterion {self.number} exceeded its time limit")
        return False
