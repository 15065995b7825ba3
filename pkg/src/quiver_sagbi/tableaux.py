"""Double-labelled rectangular tableaux and linked pairs.

A linked pair is stored as a set of *boxes*.  Each box belongs to one path
``i`` and sits at a position in a target tableau (vertex ``t(P_i)``, row
``l``) and at a position in a source tableau (vertex ``s(P_i)``, row ``j``).
Its target label is ``(i, j)`` and its source label is ``(i, l)``, so the
link conditions hold by construction and the link is simply the box list.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations, product
from typing import Dict, Iterable, List, Mapping, NamedTuple, Sequence

from .algebra import RepSpace
from .quiver import LiftedPath, Weight, is_bipartite, path_index, weight_of_path_set


class TableauError(ValueError):
    pass


class Label(NamedTuple):
    path: int
    slot: int

    def __str__(self) -> str:
        return f"{self.path}{self.slot}"


def as_label(x) -> Label:
    """Accept ``Label``, ``(i, j)`` or the two-digit shorthand ``ij`` (digits 1-9)."""
    if isinstance(x, Label):
        return x
    if isinstance(x, int):
        if not 11 <= x <= 99:
            raise TableauError(f"shorthand label {x} must have two nonzero digits")
        return Label(x // 10, x % 10)
    i, j = x
    return Label(int(i), int(j))


@dataclass(frozen=True)
class RectTableau:
    vertex: int
    entries: tuple[tuple[Label, ...], ...]

    def __post_init__(self):
        ent = tuple(tuple(as_label(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", ent)
        if ent and len({len(r) for r in ent}) != 1:
            raise TableauError("tableau rows must have equal length")

    @classmethod
    def from_rows(cls, vertex: int, rows: Sequence[Sequence]) -> "RectTableau":
        return cls(vertex, tuple(tuple(r) for r in rows))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def column(self, c: int) -> tuple[Label, ...]:
        return tuple(row[c] for row in self.entries)

    def to_dict(self) -> dict:
        return {
            "vertex": self.vertex,
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[[l.path, l.slot] for l in row] for row in self.entries],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "RectTableau":
        t = cls(int(data["vertex"]), tuple(tuple(Label(*e) for e in row) for row in data["entries"]))
        if t.rows != int(data["rows"]) or (t.rows and t.cols != int(data["cols"])):
            raise TableauError("declared shape does not match entries")
        return t

    def shorthand(self) -> list[list[int]]:
        return [[10 * l.path + l.slot for l in row] for row in self.entries]

    def __str__(self) -> str:
        return "\n".join(" ".join(str(l) for l in row) for row in self.entries)


def is_semistandard(t: RectTableau) -> bool:
    """Rows weakly increase and columns strictly increase in the label order."""
    e = t.entries
    for row in e:
        if any(row[c] > row[c + 1] for c in range(len(row) - 1)):
            return False
    for r in range(len(e) - 1):
        if any(e[r][c] >= e[r + 1][c] for c in range(t.cols)):
            return False
    return True


def is_weakly_semistandard(t: RectTableau) -> bool:
    """First digits weakly increase along rows and along columns."""
    e = t.entries
    for row in e:
        if any(row[c].path > row[c + 1].path for c in range(len(row) - 1)):
            return False
    for r in range(len(e) - 1):
        if any(e[r][c].path > e[r + 1][c].path for c in range(t.cols)):
            return False
    return True


Position = tuple[int, int, int]  # (vertex, row, col), rows and cols 1-based


class Box(NamedTuple):
    path: int
    plus: Position
    minus: Position


Link = tuple[tuple[Position, Position], ...]


class LinkedPair:
    """A linked pair of tableau tuples over a representation space."""

    __slots__ = ("space", "boxes", "_plus_shape", "_minus_shape", "__dict__")

    def __init__(self, space: RepSpace, boxes: Iterable[Box], check: bool = True):
        self.space = space
        self.boxes = tuple(sorted(boxes))
        if check:
            self._validate()
        plus: Dict[int, int] = defaultdict(int)
        minus: Dict[int, int] = defaultdict(int)
        for b in self.boxes:
            plus[b.plus[0]] = max(plus[b.plus[0]], b.plus[2])
            minus[b.minus[0]] = max(minus[b.minus[0]], b.minus[2])
        self._plus_shape = dict(plus)
        self._minus_shape = dict(minus)

    def _validate(self) -> None:
        sp = self.space
        seen_plus: Dict[int, set] = defaultdict(set)
        seen_minus: Dict[int, set] = defaultdict(set)
        for b in self.boxes:
            path = sp.path(b.path)
            p, l, c = b.plus
            q, j, c2 = b.minus
            if p != path.target or q != path.source:
                raise TableauError(f"box of path {b.path} placed at wrong vertices")
            if not (1 <= l <= sp.dims[p] and 1 <= j <= sp.dims[q] and c >= 1 and c2 >= 1):
                raise TableauError("box position out of range")
            if (l, c) in seen_plus[p] or (j, c2) in seen_minus[q]:
                raise TableauError("two boxes share a position")
            seen_plus[p].add((l, c))
            seen_minus[q].add((j, c2))
        for side, seen in (("target", seen_plus), ("source", seen_minus)):
            for v, cells in seen.items():
                cols = max(c for _, c in cells)
                if len(cells) != sp.dims[v] * cols:
                    raise TableauError(f"{side} tableau at vertex {v} is not a full rectangle")

    @cached_property
    def key(self) -> tuple:
        return self.boxes

    def __eq__(self, other) -> bool:
        return isinstance(other, LinkedPair) and self.space == other.space and self.boxes == other.boxes

    def __hash__(self) -> int:
        return hash(self.boxes)

    @property
    def plus_shape(self) -> Dict[int, int]:
        """Column count of each nonempty target tableau."""
        return self._plus_shape

    @property
    def minus_shape(self) -> Dict[int, int]:
        return self._minus_shape

    @cached_property
    def weight(self) -> Weight:
        n = self.space.quiver.num_vertices
        return Weight(
            tuple(self._plus_shape.get(p, 0) - self._minus_shape.get(p, 0) for p in range(n))
        )

    def plus_label(self, b: Box) -> Label:
        return Label(b.path, b.minus[1])

    def minus_label(self, b: Box) -> Label:
        return Label(b.path, b.plus[1])

    def tplus(self, p: int) -> RectTableau:
        return self._tableau(p, True)

    def tminus(self, q: int) -> RectTableau:
        return self._tableau(q, False)

    def _tableau(self, v: int, plus: bool) -> RectTableau:
        shape = self._plus_shape if plus else self._minus_shape
        cols = shape.get(v, 0)
        rows = self.space.dims[v]
        grid: List[List] = [[None] * cols for _ in range(rows)]
        for b in self.boxes:
            pos = b.plus if plus else b.minus
            if pos[0] == v:
                grid[pos[1] - 1][pos[2] - 1] = self.plus_label(b) if plus else self.minus_label(b)
        if cols == 0:
            return RectTableau(v, tuple(() for _ in range(rows)))
        return RectTableau(v, tuple(tuple(r) for r in grid))

    def tplus_all(self) -> Dict[int, RectTableau]:
        return {p: self.tplus(p) for p in sorted(self._plus_shape)}

    def tminus_all(self) -> Dict[int, RectTableau]:
        return {q: self.tminus(q) for q in sorted(self._minus_shape)}

    def link(self) -> Link:
        return tuple(sorted((b.plus, b.minus) for b in self.boxes))

    def is_semistandard(self) -> bool:
        return all(is_semistandard(t) for t in self.tplus_all().values()) and all(
            is_semistandard(t) for t in self.tminus_all().values()
        )

    def is_weakly_semistandard(self) -> bool:
        return all(is_weakly_semistandard(t) for t in self.tplus_all().values()) and all(
            is_weakly_semistandard(t) for t in self.tminus_all().values()
        )

    def replace_positions(self, moves: Mapping[Box, Box]) -> "LinkedPair":
        return LinkedPair(self.space, (moves.get(b, b) for b in self.boxes), check=False)

    def path_summary(self) -> Counter:
        """Multiset of (path index, source lift, target lift) realised by the boxes."""
        return Counter((b.path, b.minus[1], b.plus[1]) for b in self.boxes)

    def to_dict(self) -> dict:
        return {
            "tplus": [t.to_dict() for t in self.tplus_all().values()],
            "tminus": [t.to_dict() for t in self.tminus_all().values()],
            "link": [[list(a), list(b)] for a, b in self.link()],
            "weight": list(self.weight.w),
        }

    def __repr__(self) -> str:
        plus = {p: t.shorthand() for p, t in self.tplus_all().items()}
        minus = {q: t.shorthand() for q, t in self.tminus_all().items()}
        return f"LinkedPair(plus={plus}, minus={minus})"

    # construction

    @classmethod
    def from_link(
        cls,
        space: RepSpace,
        tplus: Mapping[int, RectTableau] | Sequence[RectTableau],
        tminus: Mapping[int, RectTableau] | Sequence[RectTableau],
        link: Link,
    ) -> "LinkedPair":
        tplus = _by_vertex(tplus)
        tminus = _by_vertex(tminus)
        boxes = []
        used_minus = set()
        plus_cells = {(p, r + 1, c + 1) for p, t in tplus.items() for r in range(t.rows) for c in range(t.cols)}
        if len(link) != len(plus_cells) or {a for a, _ in link} != plus_cells:
            raise TableauError("link must cover every target box exactly once")
        for pos_plus, pos_minus in link:
            pos_plus, pos_minus = tuple(pos_plus), tuple(pos_minus)
            if pos_minus in used_minus:
                raise TableauError("link is not injective")
            used_minus.add(pos_minus)
            p, l, c = pos_plus
            q, j, c2 = pos_minus
            try:
                lab_plus = tplus[p].entries[l - 1][c - 1]
                lab_minus = tminus[q].entries[j - 1][c2 - 1]
            except (KeyError, IndexError) as exc:
                raise TableauError(f"link refers to a missing box {pos_plus} -> {pos_minus}") from exc
            if lab_plus.path != lab_minus.path or lab_plus.slot != j or lab_minus.slot != l:
                raise TableauError(f"link condition fails at {pos_plus} -> {pos_minus}")
            boxes.append(Box(lab_plus.path, pos_plus, pos_minus))
        minus_count = sum(t.rows * t.cols for t in tminus.values())
        if minus_count != len(boxes):
            raise TableauError("source and target box counts differ")
        return cls(space, boxes)

    @classmethod
    def from_tableaux(
        cls,
        space: RepSpace,
        tplus: Mapping[int, RectTableau] | Sequence[RectTableau],
        tminus: Mapping[int, RectTableau] | Sequence[RectTableau],
    ) -> "LinkedPair":
        """Build the pair with the order-preserving link."""
        return cls.from_link(space, tplus, tminus, canonical_semistandard_link(tplus, tminus))

    @classmethod
    def kronecker(cls, space: RepSpace, plus_rows, minus_rows) -> "LinkedPair":
        """Kronecker shorthand: target tableau at vertex 1, source tableau at vertex 0."""
        return cls.from_tableaux(
            space,
            {1: RectTableau.from_rows(1, plus_rows)},
            {0: RectTableau.from_rows(0, minus_rows)},
        )

    @classmethod
    def from_dict(cls, space: RepSpace, data: Mapping) -> "LinkedPair":
        tplus = [RectTableau.from_dict(t) for t in data["tplus"]]
        tminus = [RectTableau.from_dict(t) for t in data["tminus"]]
        if "link" in data and data["link"] is not None:
            link = tuple((tuple(a), tuple(b)) for a, b in data["link"])
            return cls.from_link(space, tplus, tminus, link)
        return cls.from_tableaux(space, tplus, tminus)


def _by_vertex(ts) -> Dict[int, RectTableau]:
    if isinstance(ts, Mapping):
        return {int(k): v for k, v in ts.items() if v.rows * v.cols}
    return {t.vertex: t for t in ts if t.rows * t.cols}


def _link_classes(tplus, tminus):
    """Group target and source boxes by the class (path, source row, target row)."""
    tplus = _by_vertex(tplus)
    tminus = _by_vertex(tminus)
    plus_cls: Dict[tuple, list] = defaultdict(list)
    minus_cls: Dict[tuple, list] = defaultdict(list)
    for p, t in tplus.items():
        for r, row in enumerate(t.entries, start=1):
            for c, lab in enumerate(row, start=1):
                plus_cls[(lab.path, lab.slot, r, p)].append((p, r, c))
    for q, t in tminus.items():
        for r, row in enumerate(t.entries, start=1):
            for c, lab in enumerate(row, start=1):
                minus_cls[(lab.path, r, lab.slot, q)].append((q, r, c))
    return plus_cls, minus_cls


def enumerate_links(tplus, tminus, space: RepSpace | None = None, limit: int | None = None) -> list[Link]:
    """Every bijection between boxes that satisfies the link conditions."""
    plus_cls, minus_cls = _link_classes(tplus, tminus)
    # source vertex is implied by the path; compare ignoring the vertex field
    plus_keys = Counter({k[:3]: len(v) for k, v in plus_cls.items()})
    minus_keys = Counter({k[:3]: len(v) for k, v in minus_cls.items()})
    if plus_keys != minus_keys:
        return []
    groups = []
    for k, pl in sorted(plus_cls.items()):
        mins = [m for mk, ml in minus_cls.items() if mk[:3] == k[:3] for m in ml]
        if space is not None:
            path = space.path(k[0])
            if k[3] != path.target or any(m[0] != path.source for m in mins):
                return []
        groups.append((sorted(pl), sorted(mins)))
    links = []
    for choice in product(*(permutations(m) for _, m in groups)):
        links.append(tuple(sorted(pair for (pl, _), perm in zip(groups, choice) for pair in zip(pl, perm))))
        if limit is not None and len(links) >= limit:
            break
    return sorted(set(links))


def canonical_semistandard_link(tplus, tminus) -> Link:
    """Match each class of equal boxes left-to-right on both sides."""
    plus_cls, minus_cls = _link_classes(tplus, tminus)
    mins_by_key: Dict[tuple, list] = defaultdict(list)
    for k, ml in minus_cls.items():
        mins_by_key[k[:3]].extend(ml)
    pairs = []
    total_minus = sum(len(v) for v in minus_cls.values())
    for k, pl in plus_cls.items():
        ml = sorted(mins_by_key.get(k[:3], []))
        if len(ml) != len(pl):
            raise TableauError("tableaux cannot be linked")
        pairs.extend(zip(sorted(pl), ml))
    if len(pairs) != total_minus:
        raise TableauError("tableaux cannot be linked")
    return tuple(sorted(pairs))


def linked_pair_from_path_set(space: RepSpace, paths: Sequence[LiftedPath]) -> LinkedPair:
    """Tableaux whose rows list the paths ending (resp. starting) at each lift."""
    q, d = space.quiver, space.dims
    w, inv = weight_of_path_set(q, d, paths)
    if not inv:
        raise TableauError("path set is not Weyl-invariant")
    if not is_bipartite(q, d, paths):
        raise TableauError("path set is not bipartite")
    items = []
    for order, lp in enumerate(paths):
        i = path_index(space.paths, lp.arrow_ids())
        items.append((i, lp.source_lift, lp.target_lift, order))
    plus_rows: Dict[tuple, list] = defaultdict(list)
    minus_rows: Dict[tuple, list] = defaultdict(list)
    for it in items:
        i, j, l, _ = it
        path = space.path(i)
        plus_rows[(path.target, l)].append(it)
        minus_rows[(path.source, j)].append(it)
    plus_pos = {}
    minus_pos = {}
    for (p, l), its in plus_rows.items():
        for c, it in enumerate(sorted(its, key=lambda t: (t[0], t[1], t[3])), start=1):
            plus_pos[it] = (p, l, c)
    for (v, j), its in minus_rows.items():
        for c, it in enumerate(sorted(its, key=lambda t: (t[0], t[2], t[3])), start=1):
            minus_pos[it] = (v, j, c)
    return LinkedPair(space, [Box(it[0], plus_pos[it], minus_pos[it]) for it in items])


def arrow_diagram(pair: LinkedPair, side: str = "+") -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Arrows joining, inside one tableau, the boxes linked to a column of the other.

    For ``side="+"`` each source column contributes a chain through the
    target boxes linked to its rows, top to bottom.  Positions are
    ``(row, col)`` in the chosen tableau.
    """
    if not pair.space.is_kronecker():
        raise TableauError("arrow diagrams are defined for Kronecker quivers")
    here, there = ("plus", "minus") if side == "+" else ("minus", "plus")
    chains: Dict[int, list] = defaultdict(list)
    for b in pair.boxes:
        other = getattr(b, there)
        mine = getattr(b, here)
        chains[other[2]].append((other[1], (mine[1], mine[2])))
    arrows = []
    for col in sorted(chains):
        chain = [pos for _, pos in sorted(chains[col])]
        arrows.extend(zip(chain, chain[1:]))
    return arrows


def has_backwards_arrow(arrows) -> bool:
    return any(dst[1] < src[1] for src, dst in arrows)


def has_downwards_arrow(arrows) -> bool:
    """An arrow leaving an upper row for a lower row strictly to its right."""
    return any(dst[0] > src[0] and dst[1] > src[1] for src, dst in arrows)
