"""Acyclic quivers, dimension vectors, paths and the abelianized quiver.

Vertices are ``0..n-1`` and every arrow points from a smaller to a larger
vertex.  Lifted objects use 1-based lift indices.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    id: int
    source: int
    target: int


@dataclass(frozen=True)
class Quiver:
    num_vertices: int
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        if self.num_vertices < 1:
            raise QuiverError("a quiver needs at least one vertex")
        for k, a in enumerate(self.arrows, start=1):
            if a.id != k:
                raise QuiverError(f"arrow ids must be 1..N in order, got {a.id} at position {k}")
            if not (0 <= a.source < a.target < self.num_vertices):
                raise QuiverError(f"arrow {a.id} must satisfy 0 <= s < t < {self.num_vertices}")

    @classmethod
    def from_edges(cls, num_vertices: int, edges: Iterable[tuple[int, int]]) -> "Quiver":
        arrows = tuple(Arrow(k, s, t) for k, (s, t) in enumerate(edges, start=1))
        return cls(num_vertices, arrows)

    @classmethod
    def kronecker(cls, k: int) -> "Quiver":
        """Two vertices joined by ``k`` parallel arrows ``0 -> 1``."""
        return cls.from_edges(2, [(0, 1)] * k)

    @property
    def vertices(self) -> range:
        return range(self.num_vertices)

    def arrow(self, a: int) -> Arrow:
        return self.arrows[a - 1]

    def to_dict(self, dims: "DimensionVector | None" = None) -> dict:
        out = {
            "vertices": self.num_vertices,
            "arrows": [{"id": a.id, "s": a.source, "t": a.target} for a in self.arrows],
        }
        if dims is not None:
            out["dims"] = list(dims.ranks)
        return out


@dataclass(frozen=True)
class DimensionVector:
    ranks: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(int(r) for r in self.ranks))
        if any(r < 1 for r in self.ranks):
            raise QuiverError("ranks must be positive")

    def __getitem__(self, p: int) -> int:
        return self.ranks[p]

    def __len__(self) -> int:
        return len(self.ranks)

    def check(self, q: Quiver) -> None:
        if len(self.ranks) != q.num_vertices:
            raise QuiverError(
                f"dimension vector has {len(self.ranks)} entries, quiver has {q.num_vertices} vertices"
            )


def quiver_from_dict(data: dict) -> tuple[Quiver, DimensionVector]:
    try:
        n = int(data["vertices"])
        arrows = sorted(data["arrows"], key=lambda a: int(a["id"]))
        q = Quiver(n, tuple(Arrow(int(a["id"]), int(a["s"]), int(a["t"])) for a in arrows))
        d = DimensionVector(tuple(data["dims"]))
    except (KeyError, TypeError) as exc:
        raise QuiverError(f"malformed quiver JSON: {exc}") from exc
    d.check(q)
    return q, d


def quiver_from_json(text: str) -> tuple[Quiver, DimensionVector]:
    return quiver_from_dict(json.loads(text))


@dataclass(frozen=True)
class Path:
    index: int
    arrows: tuple[int, ...]
    source: int
    target: int

    def __len__(self) -> int:
        return len(self.arrows)


def enumerate_paths(q: Quiver) -> list[Path]:
    """All paths of length >= 1, by length and then lexicographically on arrow ids."""
    layer = [(a.id,) for a in q.arrows]
    found: list[tuple[int, ...]] = []
    while layer:
        layer.sort()
        found.extend(layer)
        layer = [
            seq + (b.id,)
            for seq in layer
            for b in q.arrows
            if b.source == q.arrow(seq[-1]).target
        ]
    return [
        Path(k, seq, q.arrow(seq[0]).source, q.arrow(seq[-1]).target)
        for k, seq in enumerate(found, start=1)
    ]


@dataclass(frozen=True)
class LiftedArrow:
    """Arrow ``a`` from lift ``i`` of its source to lift ``j`` of its target."""

    arrow: int
    source_lift: int
    target_lift: int


@dataclass(frozen=True)
class LiftedPath:
    """A composable chain of lifted arrows."""

    steps: tuple[LiftedArrow, ...]

    def arrow_ids(self) -> tuple[int, ...]:
        return tuple(s.arrow for s in self.steps)

    @property
    def source_lift(self) -> int:
        return self.steps[0].source_lift

    @property
    def target_lift(self) -> int:
        return self.steps[-1].target_lift

    @classmethod
    def single(cls, arrow: int, source_lift: int, target_lift: int) -> "LiftedPath":
        return cls((LiftedArrow(arrow, source_lift, target_lift),))


@dataclass(frozen=True)
class AbQuiver:
    quiver: Quiver
    dims: DimensionVector
    lifted_vertices: tuple[tuple[int, int], ...]
    lifted_arrows: tuple[LiftedArrow, ...]

    def lift_map(self, la: LiftedArrow) -> Arrow:
        return self.quiver.arrow(la.arrow)


def abelianize(q: Quiver, d: DimensionVector) -> AbQuiver:
    d.check(q)
    verts = tuple((p, i) for p in q.vertices for i in range(1, d[p] + 1))
    arrows = tuple(
        LiftedArrow(a.id, i, j)
        for a in q.arrows
        for i in range(1, d[a.source] + 1)
        for j in range(1, d[a.target] + 1)
    )
    return AbQuiver(q, d, verts, arrows)


@dataclass(frozen=True)
class Weight:
    w: tuple[int, ...]

    @property
    def plus(self) -> tuple[int, ...]:
        return tuple(max(x, 0) for x in self.w)

    @property
    def minus(self) -> tuple[int, ...]:
        return tuple(max(-x, 0) for x in self.w)

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a + b for a, b in zip(self.w, other.w)))

    def pairing(self, d: DimensionVector) -> int:
        return sum(r * x for r, x in zip(d.ranks, self.w))


def _check_lifted_path(q: Quiver, d: DimensionVector, lp: LiftedPath) -> None:
    if not lp.steps:
        raise QuiverError("empty lifted path")
    prev = None
    for st in lp.steps:
        if not 1 <= st.arrow <= len(q.arrows):
            raise QuiverError(f"arrow {st.arrow} not in quiver")
        a = q.arrow(st.arrow)
        if not (1 <= st.source_lift <= d[a.source] and 1 <= st.target_lift <= d[a.target]):
            raise QuiverError(f"lift index out of range on arrow {a.id}")
        if prev is not None:
            pa = q.arrow(prev.arrow)
            if pa.target != a.source or prev.target_lift != st.source_lift:
                raise QuiverError("lifted path does not compose")
        prev = st


def net_flow(q: Quiver, d: DimensionVector, paths: Iterable[LiftedPath]) -> tuple[Counter, Counter]:
    """Incoming and outgoing path counts per lifted vertex ``(p, i)``."""
    inc: Counter = Counter()
    out: Counter = Counter()
    for lp in paths:
        _check_lifted_path(q, d, lp)
        first, last = lp.steps[0], lp.steps[-1]
        out[(q.arrow(first.arrow).source, first.source_lift)] += 1
        inc[(q.arrow(last.arrow).target, last.target_lift)] += 1
    return inc, out


def weight_of_path_set(
    q: Quiver, d: DimensionVector, paths: Sequence[LiftedPath]
) -> tuple[Weight, bool]:
    """Weight of a multiset of lifted paths and whether it is Weyl-invariant.

    The weight at ``p`` is the common net flow (in minus out) at each lift of
    ``p``; it is only returned meaningfully when the set is Weyl-invariant,
    otherwise the zero weight is returned with the flag cleared.
    """
    d.check(q)
    inc, out = net_flow(q, d, paths)
    w = []
    invariant = True
    for p in q.vertices:
        flows = {inc[(p, i)] - out[(p, i)] for i in range(1, d[p] + 1)}
        if len(flows) != 1:
            invariant = False
            break
        w.append(flows.pop())
    if not invariant:
        return Weight((0,) * q.num_vertices), False
    return Weight(tuple(w)), True


def is_bipartite(q: Quiver, d: DimensionVector, paths: Sequence[LiftedPath]) -> bool:
    inc, out = net_flow(q, d, paths)
    return all(min(inc[v], out[v]) == 0 for v in set(inc) | set(out))


def partition_into_bipartite_paths(
    q: Quiver, d: DimensionVector, arrows: Sequence[LiftedArrow]
) -> list[LiftedPath]:
    """Join lifted arrows into a bipartite Weyl-invariant multiset of paths.

    Lifted vertices are visited in increasing order; at each one the
    incoming and outgoing paths are sorted by (arrow ids, lift indices) and
    joined pairwise until one side is exhausted.
    """
    paths = [LiftedPath((a,)) for a in arrows]
    _, ok = weight_of_path_set(q, d, paths)
    if not ok:
        raise QuiverError("arrow multiset is not Weyl-invariant")

    def key(lp: LiftedPath):
        return tuple((s.arrow, s.source_lift, s.target_lift) for s in lp.steps)

    for p in q.vertices:
        for i in range(1, d[p] + 1):
            incoming = sorted(
                (lp for lp in paths if (q.arrow(lp.steps[-1].arrow).target, lp.target_lift) == (p, i)),
                key=key,
            )
            outgoing = sorted(
                (lp for lp in paths if (q.arrow(lp.steps[0].arrow).source, lp.source_lift) == (p, i)),
                key=key,
            )
            n = min(len(incoming), len(outgoing))
            if n == 0:
                continue
            used = Counter()
            for lp in incoming[:n] + outgoing[:n]:
                used[key(lp)] += 1
            rest = []
            for lp in paths:
                k = key(lp)
                if used[k]:
                    used[k] -= 1
                else:
                    rest.append(lp)
            joined = [LiftedPath(a.steps + b.steps) for a, b in zip(incoming[:n], outgoing[:n])]
            paths = rest + joined
    return sorted(paths, key=key)


def path_index(paths: Sequence[Path], arrow_ids: Sequence[int]) -> int:
    """Index of the path with the given arrow sequence."""
    seq = tuple(arrow_ids)
    for p in paths:
        if p.arrows == seq:
            return p.index
    raise QuiverError(f"no path with arrows {seq}")
