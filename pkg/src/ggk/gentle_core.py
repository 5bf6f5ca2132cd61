"""Graded quivers with quadratic monomial relations.

A :class:`GentlePair` is a graded quiver together with a set of ordered arrow
pairs ``(a, b)`` meaning that the path "first ``a`` then ``b``" is zero.  The
module provides the nonzero-path basis, quadratic duality, maximal relation
paths, and the reconstruction of marked points as fans of arc-ends.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable


class StructureError(ValueError):
    """The quiver itself is malformed (unknown vertices, duplicate ids)."""


class InfiniteDimensionalError(ValueError):
    """The relations leave an infinite set of nonzero paths."""


class NotComposableError(ValueError):
    pass


DUAL_MARK = "*"


@dataclass(frozen=True)
class Arrow:
    id: str
    source: str
    target: str
    degree: int = 0


@dataclass(frozen=True, order=True)
class Path:
    """A path in the quiver; ``arrows`` is read left to right ("first, then")."""

    source: str
    target: str
    arrows: tuple[str, ...] = ()

    @classmethod
    def trivial(cls, vertex: str) -> "Path":
        return cls(vertex, vertex, ())

    def __len__(self) -> int:
        return len(self.arrows)

    def is_trivial(self) -> bool:
        return not self.arrows

    def label(self) -> str:
        return "".join(self.arrows) if self.arrows else f"e_{self.source}"


@dataclass(frozen=True)
class ArcEnd:
    """One end of the arc attached to a vertex.

    ``incoming``/``outgoing`` are the arrows (if any) whose angle sits at this
    end; an arc-end carries at most one of each.
    """

    vertex: str
    slot: int
    incoming: str | None = None
    outgoing: str | None = None

    @property
    def key(self) -> tuple[str, int]:
        return (self.vertex, self.slot)


@dataclass(frozen=True)
class Fan:
    """The arc-ends around one marked point, in order, joined by arrows.

    ``arrows[j]`` goes from ``ends[j]`` to ``ends[j + 1]``; the composite is
    a maximal nonzero path.
    """

    id: int
    ends: tuple[tuple[str, int], ...]
    arrows: tuple[str, ...]


@dataclass(frozen=True)
class GentlePair:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    relations: tuple[tuple[str, str], ...] = ()

    # ---- lookups -------------------------------------------------------
    @cached_property
    def arrow(self) -> dict[str, Arrow]:
        return {a.id: a for a in self.arrows}

    @cached_property
    def relation_set(self) -> frozenset[tuple[str, str]]:
        return frozenset(tuple(r) for r in self.relations)

    @cached_property
    def out_arrows(self) -> dict[str, list[Arrow]]:
        out: dict[str, list[Arrow]] = {v: [] for v in self.vertices}
        for a in self.arrows:
            out.setdefault(a.source, []).append(a)
        return out

    @cached_property
    def in_arrows(self) -> dict[str, list[Arrow]]:
        inc: dict[str, list[Arrow]] = {v: [] for v in self.vertices}
        for a in self.arrows:
            inc.setdefault(a.target, []).append(a)
        return inc

    def degree(self, path: Path | Iterable[str]) -> int:
        arrows = path.arrows if isinstance(path, Path) else tuple(path)
        return sum(self.arrow[a].degree for a in arrows)

    def is_relation(self, a: str, b: str) -> bool:
        return (a, b) in self.relation_set

    def path(self, arrows: Iterable[str]) -> Path:
        """Build a nonempty path from arrow ids (endpoints inferred)."""
        arrows = tuple(arrows)
        if not arrows:
            raise ValueError("use Path.trivial for empty paths")
        for a, b in zip(arrows, arrows[1:]):
            if self.arrow[a].target != self.arrow[b].source:
                raise NotComposableError(f"{a} and {b} do not compose")
        return Path(self.arrow[arrows[0]].source, self.arrow[arrows[-1]].target, arrows)

    def is_nonzero(self, path: Path) -> bool:
        return all((a, b) not in self.relation_set for a, b in zip(path.arrows, path.arrows[1:]))

    # ---- path basis ----------------------------------------------------
    @cached_property
    def _paths(self) -> tuple[Path, ...]:
        return tuple(_enumerate_nonzero(self))

    @cached_property
    def _paths_by_ends(self) -> dict[tuple[str, str], tuple[Path, ...]]:
        table: dict[tuple[str, str], list[Path]] = defaultdict(list)
        for p in self._paths:
            table[(p.source, p.target)].append(p)
        return {k: tuple(v) for k, v in table.items()}

    def paths_between(self, source: str, target: str) -> tuple[Path, ...]:
        return self._paths_by_ends.get((source, target), ())

    def paths_from(self, source: str) -> tuple[Path, ...]:
        return tuple(p for p in self._paths if p.source == source)

    def paths_to(self, target: str) -> tuple[Path, ...]:
        return tuple(p for p in self._paths if p.target == target)

    # ---- arc-ends and fans ---------------------------------------------
    @cached_property
    def arc_ends(self) -> dict[str, tuple[ArcEnd, ArcEnd]]:
        return _arc_ends(self)

    @cached_property
    def fan_list(self) -> tuple[Fan, ...]:
        return tuple(_build_fans(self))

    @cached_property
    def fan_position(self) -> dict[tuple[str, int], tuple[int, int]]:
        """Map an arc-end key to ``(fan id, position in fan)``."""
        return {end: (f.id, pos) for f in self.fan_list for pos, end in enumerate(f.ends)}

    def end_with_arrow(self, vertex: str, arrow_id: str) -> tuple[str, int]:
        for end in self.arc_ends[vertex]:
            if arrow_id in (end.incoming, end.outgoing):
                return end.key
        raise KeyError(f"arrow {arrow_id} is not incident to {vertex}")

    def other_end(self, key: tuple[str, int]) -> tuple[str, int]:
        return (key[0], 1 - key[1])


# ---- construction / serialization -------------------------------------

def make_pair(vertices, arrows, relations=()) -> GentlePair:
    """Convenience constructor: ``arrows`` as ``(id, source, target[, degree])``."""
    arrs = []
    for a in arrows:
        if isinstance(a, Arrow):
            arrs.append(a)
        else:
            arrs.append(Arrow(*a))
    pair = GentlePair(tuple(str(v) for v in vertices), tuple(arrs), tuple(tuple(r) for r in relations))
    check_structure(pair)
    return pair


def check_structure(pair: GentlePair) -> None:
    seen_v: set[str] = set()
    for v in pair.vertices:
        if v in seen_v:
            raise StructureError(f"duplicate vertex {v!r}")
        seen_v.add(v)
    seen_a: set[str] = set()
    for a in pair.arrows:
        if a.id in seen_a:
            raise StructureError(f"duplicate arrow id {a.id!r}")
        seen_a.add(a.id)
        for end in (a.source, a.target):
            if end not in seen_v:
                raise StructureError(f"arrow {a.id!r} has dangling endpoint {end!r}")
        if not isinstance(a.degree, int) or isinstance(a.degree, bool):
            raise StructureError(f"arrow {a.id!r} has non-integer degree")
    for rel in pair.relations:
        if len(rel) != 2:
            raise StructureError(f"relation {rel!r} is not quadratic")
        for a in rel:
            if a not in seen_a:
                raise StructureError(f"relation {rel!r} mentions unknown arrow {a!r}")


def pair_to_json(pair: GentlePair) -> dict:
    return {
        "vertices": list(pair.vertices),
        "arrows": [{"id": a.id, "from": a.source, "to": a.target, "degree": a.degree} for a in pair.arrows],
        "relations": [list(r) for r in pair.relations],
    }


_ALGEBRA_KEYS = {"vertices", "arrows", "relations"}
_ARROW_KEYS = {"id", "from", "to", "degree"}


def pair_from_json(data: dict) -> GentlePair:
    if not isinstance(data, dict):
        raise StructureError("algebra must be a JSON object")
    unknown = set(data) - _ALGEBRA_KEYS
    if unknown:
        raise StructureError(f"unknown algebra keys: {sorted(unknown)}")
    arrows = []
    for item in data.get("arrows", []):
        extra = set(item) - _ARROW_KEYS
        if extra:
            raise StructureError(f"unknown arrow keys: {sorted(extra)}")
        arrows.append(Arrow(str(item["id"]), str(item["from"]), str(item["to"]), item.get("degree", 0)))
    rels = [tuple(str(x) for x in r) for r in data.get("relations", [])]
    return make_pair([str(v) for v in data["vertices"]], arrows, rels)


def dumps_pair(pair: GentlePair) -> str:
    return json.dumps(pair_to_json(pair))


def loads_pair(text: str) -> GentlePair:
    return pair_from_json(json.loads(text))


# ---- gentleness ----------------------------------------------------------

@dataclass
class GentleReport:
    ok: bool
    violations: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def validate_gentle(pair: GentlePair) -> GentleReport:
    """Check the four local gentleness conditions.

    Structural problems raise :class:`StructureError` instead of appearing in
    the report.
    """
    check_structure(pair)
    bad: list[str] = []
    for a, b in pair.relations:
        if pair.arrow[a].target != pair.arrow[b].source:
            bad.append(f"composable: relation ({a},{b}) is not a path")
    for v in pair.vertices:
        if len(pair.in_arrows[v]) > 2:
            bad.append(f"valency: vertex {v} has {len(pair.in_arrows[v])} incoming arrows")
        if len(pair.out_arrows[v]) > 2:
            bad.append(f"valency: vertex {v} has {len(pair.out_arrows[v])} outgoing arrows")
    for a in pair.arrows:
        after = pair.out_arrows[a.target]
        before = pair.in_arrows[a.source]
        rel_after = [b.id for b in after if pair.is_relation(a.id, b.id)]
        rel_before = [b.id for b in before if pair.is_relation(b.id, a.id)]
        free_after = [b.id for b in after if not pair.is_relation(a.id, b.id)]
        free_before = [b.id for b in before if not pair.is_relation(b.id, a.id)]
        if len(rel_after) > 1:
            bad.append(f"relations: arrow {a.id} has several b with {a.id}b in I: {rel_after}")
        if len(rel_before) > 1:
            bad.append(f"relations: arrow {a.id} has several b' with b'{a.id} in I: {rel_before}")
        if len(free_after) > 1:
            bad.append(f"non-relations: arrow {a.id} has several b with {a.id}b not in I: {free_after}")
        if len(free_before) > 1:
            bad.append(f"non-relations: arrow {a.id} has several b' with b'{a.id} not in I: {free_before}")
    return GentleReport(not bad, bad)


# ---- paths ----------------------------------------------------------------

def _enumerate_nonzero(pair: GentlePair) -> list[Path]:
    cap = len(pair.arrows) + 1
    out = [Path.trivial(v) for v in pair.vertices]
    frontier = [pair.path([a.id]) for a in pair.arrows]
    length = 1
    while frontier:
        if length > cap:
            raise InfiniteDimensionalError(
                f"nonzero paths longer than {cap} arrows exist (e.g. {frontier[0].label()}); "
                "the algebra is infinite-dimensional"
            )
        out.extend(frontier)
        nxt = []
        for p in frontier:
            last = p.arrows[-1]
            for b in pair.out_arrows[p.target]:
                if not pair.is_relation(last, b.id):
                    nxt.append(Path(p.source, b.target, p.arrows + (b.id,)))
        frontier = nxt
        length += 1
    return out


def nonzero_paths(pair: GentlePair) -> dict[tuple[str, str, int], list[Path]]:
    """All nonzero paths grouped by ``(source, target, degree)``."""
    groups: dict[tuple[str, str, int], list[Path]] = defaultdict(list)
    for p in pair._paths:
        groups[(p.source, p.target, pair.degree(p))].append(p)
    return {k: sorted(v) for k, v in sorted(groups.items())}


def compose_paths(pair: GentlePair, p: Path | None, q: Path | None) -> Path | None:
    """The path "first ``p`` then ``q``", or ``None`` when it is zero."""
    if p is None or q is None:
        return None
    if p.target != q.source:
        raise NotComposableError(f"{p.label()} ends at {p.target}, {q.label()} starts at {q.source}")
    if p.arrows and q.arrows and pair.is_relation(p.arrows[-1], q.arrows[0]):
        return None
    if not pair.is_nonzero(p) or not pair.is_nonzero(q):
        return None
    return Path(p.source, q.target, p.arrows + q.arrows)


# ---- duality ----------------------------------------------------------------

def dual_arrow_id(arrow_id: str) -> str:
    if arrow_id.endswith(DUAL_MARK):
        return arrow_id[: -len(DUAL_MARK)]
    return arrow_id + DUAL_MARK


def quadratic_dual(pair: GentlePair) -> GentlePair:
    """Opposite quiver, degrees ``1 - d``, complementary quadratic relations."""
    arrows = tuple(Arrow(dual_arrow_id(a.id), a.target, a.source, 1 - a.degree) for a in pair.arrows)
    rels = []
    for a in pair.arrows:
        for b in pair.out_arrows[a.target]:
            if not pair.is_relation(a.id, b.id):
                rels.append((dual_arrow_id(b.id), dual_arrow_id(a.id)))
    return GentlePair(pair.vertices, arrows, tuple(sorted(rels)))


def same_pair(p: GentlePair, q: GentlePair) -> bool:
    """Equality up to the order in which relations are listed."""
    return p.vertices == q.vertices and p.arrows == q.arrows and p.relation_set == q.relation_set


# ---- maximal relation paths ------------------------------------------------------

def relation_successor(pair: GentlePair, arrow_id: str) -> str | None:
    for b in pair.out_arrows[pair.arrow[arrow_id].target]:
        if pair.is_relation(arrow_id, b.id):
            return b.id
    return None


def maximal_relation_paths(pair: GentlePair, vertex: str) -> list[Path]:
    """The relation paths from ``vertex`` that cannot be extended, one per outgoing arrow."""
    result = []
    for a in pair.out_arrows[vertex]:
        arrows = [a.id]
        seen = {a.id}
        while (b := relation_successor(pair, arrows[-1])) is not None:
            if b in seen:
                raise InfiniteDimensionalError(f"relation cycle through {b}; the quadratic dual is infinite")
            seen.add(b)
            arrows.append(b)
        result.append(pair.path(arrows))
    return sorted(result, key=lambda p: (-len(p), p.arrows))


# ---- arc-ends and fans ----------------------------------------------------------

def _arc_ends(pair: GentlePair) -> dict[str, tuple[ArcEnd, ArcEnd]]:
    ends: dict[str, tuple[ArcEnd, ArcEnd]] = {}
    for v in pair.vertices:
        ins = [a.id for a in pair.in_arrows[v]]
        outs = [a.id for a in pair.out_arrows[v]]
        groups: list[tuple[str | None, str | None]] = []
        used_out: set[str] = set()
        for b in ins:
            partner = [a for a in outs if not pair.is_relation(b, a) and a not in used_out]
            if len(partner) > 1:
                raise InfiniteDimensionalError(f"arrow {b} has several non-relation successors")
            if partner:
                used_out.add(partner[0])
                groups.append((b, partner[0]))
            else:
                groups.append((b, None))
        for a in outs:
            if a not in used_out:
                groups.append((None, a))
        if len(groups) > 2:
            raise InfiniteDimensionalError(f"vertex {v} needs {len(groups)} arc-ends; input is not gentle")
        groups.sort(key=lambda g: min(x for x in g if x is not None))
        while len(groups) < 2:
            groups.append((None, None))
        ends[v] = (ArcEnd(v, 0, *groups[0]), ArcEnd(v, 1, *groups[1]))
    return ends


def _build_fans(pair: GentlePair) -> list[Fan]:
    by_in: dict[str, tuple[str, int]] = {}
    for v, pair_ends in pair.arc_ends.items():
        for e in pair_ends:
            if e.incoming is not None:
                by_in[e.incoming] = e.key
    lookup = {e.key: e for es in pair.arc_ends.values() for e in es}
    visited: set[tuple[str, int]] = set()
    fans: list[tuple[tuple[tuple[str, int], ...], tuple[str, ...]]] = []
    starts = [e for v in pair.vertices for e in pair.arc_ends[v] if e.incoming is None]
    for start in starts:
        chain = [start.key]
        arrows: list[str] = []
        cur = start
        while cur.outgoing is not None:
            nxt = by_in[cur.outgoing]
            if nxt in chain:
                raise InfiniteDimensionalError("cyclic fan: an oriented cycle without relations")
            arrows.append(cur.outgoing)
            chain.append(nxt)
            cur = lookup[nxt]
        visited.update(chain)
        fans.append((tuple(chain), tuple(arrows)))
    if len(visited) != len(lookup):
        raise InfiniteDimensionalError("cyclic fan: an oriented cycle without relations")
    fans.sort(key=lambda f: (f[1] if f[1] else ("~",), f[0]))
    return [Fan(i, ends, arrows) for i, (ends, arrows) in enumerate(fans)]


def fans(pair: GentlePair) -> list[Fan]:
    """Partition the arc-ends into fans (one per open marked point)."""
    return list(pair.fan_list)


def fan_path(pair: GentlePair, fan: Fan, lo: int, hi: int) -> Path:
    """The subpath of a fan between positions ``lo < hi``."""
    if not 0 <= lo < hi < len(fan.ends):
        raise ValueError("fan positions out of order")
    return pair.path(fan.arrows[lo:hi])
