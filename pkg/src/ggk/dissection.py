"""Surface dissections and the gentle pairs they define.

A dissection lists polygons; each polygon is a cyclic list of sides, read
clockwise from the inside.  A side is either an arc side ``{"arc", "end"}`` or
the boundary token ``{"marked": true}`` carrying the polygon's closed marked
point.  Every pair of consecutive arc sides ``X, Y`` is an inner angle and
becomes an arrow ``X -> Y``; two consecutive angles of one polygon give a
relation.
"""
from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass

from .gentle_core import (
    Arrow,
    GentlePair,
    InfiniteDimensionalError,
    check_structure,
    quadratic_dual,
    validate_gentle,
)


class DissectionError(ValueError):
    pass


MARKED = "marked"


@dataclass(frozen=True)
class Polygon:
    sides: tuple  # each item: ("arc", arc_id, end) or (MARKED,)
    angle_degrees: tuple[int, ...]
    angle_ids: tuple[str, ...] | None = None

    def arc_run(self) -> list[tuple[str, int]]:
        """Arc sides in clockwise order, starting right after the boundary token."""
        k = next(i for i, s in enumerate(self.sides) if s[0] == MARKED)
        rotated = self.sides[k + 1:] + self.sides[:k]
        return [(s[1], s[2]) for s in rotated]


@dataclass(frozen=True)
class Dissection:
    arcs: tuple[str, ...]
    polygons: tuple[Polygon, ...]


_TOP_KEYS = {"arcs", "polygons"}
_POLY_KEYS = {"sides", "angle_degrees", "angle_ids"}


def dissection_from_json(data: dict) -> Dissection:
    """Strict parser: unknown keys anywhere are rejected."""
    if not isinstance(data, dict):
        raise DissectionError("dissection must be a JSON object")
    extra = set(data) - _TOP_KEYS
    if extra:
        raise DissectionError(f"unknown dissection keys: {sorted(extra)}")
    arcs = tuple(str(a) for a in data["arcs"])
    polys = []
    for pi, p in enumerate(data["polygons"]):
        extra = set(p) - _POLY_KEYS
        if extra:
            raise DissectionError(f"polygon {pi}: unknown keys {sorted(extra)}")
        sides = []
        for s in p["sides"]:
            if set(s) == {"marked"}:
                if s["marked"] is not True:
                    raise DissectionError(f"polygon {pi}: marked side must be true")
                sides.append((MARKED,))
            elif set(s) == {"arc", "end"}:
                sides.append(("arc", str(s["arc"]), int(s["end"])))
            else:
                raise DissectionError(f"polygon {pi}: bad side {s!r}")
        ids = p.get("angle_ids")
        polys.append(Polygon(tuple(sides), tuple(int(d) for d in p.get("angle_degrees", [])),
                             tuple(str(i) for i in ids) if ids is not None else None))
    d = Dissection(arcs, tuple(polys))
    check_dissection(d)
    return d


def dissection_to_json(d: Dissection) -> dict:
    polys = []
    for p in d.polygons:
        sides = [{"marked": True} if s[0] == MARKED else {"arc": s[1], "end": s[2]} for s in p.sides]
        item = {"sides": sides, "angle_degrees": list(p.angle_degrees)}
        if p.angle_ids is not None:
            item["angle_ids"] = list(p.angle_ids)
        polys.append(item)
    return {"arcs": list(d.arcs), "polygons": polys}


def load_dissection(path) -> Dissection:
    with open(path, encoding="utf-8") as fh:
        return dissection_from_json(json.load(fh))


def check_dissection(d: Dissection) -> None:
    if len(set(d.arcs)) != len(d.arcs):
        raise DissectionError("duplicate arc ids")
    slots = Counter()
    for pi, p in enumerate(d.polygons):
        tokens = sum(1 for s in p.sides if s[0] == MARKED)
        if tokens != 1:
            raise DissectionError(f"polygon {pi} has {tokens} closed marked points, expected exactly 1")
        run = p.arc_run()
        if not run:
            raise DissectionError(f"polygon {pi} has no arc sides")
        n_angles = len(run) - 1
        if len(p.angle_degrees) != n_angles:
            raise DissectionError(f"polygon {pi}: {len(p.angle_degrees)} angle degrees for {n_angles} angles")
        if p.angle_ids is not None and len(p.angle_ids) != n_angles:
            raise DissectionError(f"polygon {pi}: {len(p.angle_ids)} angle ids for {n_angles} angles")
        for arc, end in run:
            if arc not in d.arcs:
                raise DissectionError(f"polygon {pi} uses unknown arc {arc!r}")
            if end not in (0, 1):
                raise DissectionError(f"polygon {pi}: end slot must be 0 or 1")
            slots[(arc, end)] += 1
    for arc in d.arcs:
        for end in (0, 1):
            if slots[(arc, end)] != 1:
                raise DissectionError(f"side ({arc}, {end}) appears {slots[(arc, end)]} times, expected once")


def algebra_from_dissection(d: Dissection) -> GentlePair:
    check_dissection(d)
    arrows: list[Arrow] = []
    relations: list[tuple[str, str]] = []
    counter = 0
    for p in d.polygons:
        run = p.arc_run()
        ids = []
        for j, ((x, _), (y, _)) in enumerate(zip(run, run[1:])):
            if p.angle_ids is not None:
                aid = p.angle_ids[j]
            else:
                counter += 1
                aid = f"a{counter}"
            arrows.append(Arrow(aid, x, y, p.angle_degrees[j]))
            ids.append(aid)
        relations.extend(zip(ids, ids[1:]))
    if p_ids_given(d):
        arrows.sort(key=lambda a: _natural_key(a.id))
    order = {a.id: i for i, a in enumerate(arrows)}
    relations.sort(key=lambda r: (order[r[0]], order[r[1]]))
    pair = GentlePair(d.arcs, tuple(arrows), tuple(relations))
    try:
        check_structure(pair)
    except ValueError as exc:
        raise DissectionError(str(exc)) from exc
    report = validate_gentle(pair)
    if not report.ok:
        raise DissectionError("dissection gives a non-gentle pair: " + "; ".join(report.violations))
    try:
        pair.fan_list
        pair._paths
    except InfiniteDimensionalError as exc:
        raise DissectionError(f"dissection has an interior marked point: {exc}") from exc
    return pair


def p_ids_given(d: Dissection) -> bool:
    return any(p.angle_ids is not None for p in d.polygons)


def _natural_key(s: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", s)]


def dual_pair_of(d: Dissection) -> GentlePair:
    """The algebra of the dual closed arc system, obtained as the quadratic dual."""
    return quadratic_dual(algebra_from_dissection(d))


@dataclass(frozen=True)
class SurfaceSummary:
    arcs: int
    polygons: int
    open_marked_points: int
    boundary_components: int
    euler_characteristic: int
    genus: int
    consistent: bool
    components: int = 1


def surface_summary(d: Dissection) -> SurfaceSummary:
    """Topological bookkeeping recovered from the dissection (reported, not enforced)."""
    pair = algebra_from_dissection(d)
    fan_of = {}
    for fan in pair.fan_list:
        for end in fan.ends:
            fan_of[end] = fan.id
    # each polygon's boundary segment joins the marked points at its two token corners
    adj: dict[int, list[int]] = {f.id: [] for f in pair.fan_list}
    arrows_by_poly = _poly_arrows(pair, d)
    for p, arrows in zip(d.polygons, arrows_by_poly):
        run = p.arc_run()
        first, last = run[0][0], run[-1][0]
        if arrows:
            a_first = pair.end_with_arrow(first, arrows[0])
            a_last = pair.end_with_arrow(last, arrows[-1])
            c1 = pair.other_end(a_first)
            c2 = pair.other_end(a_last)
        else:
            c1, c2 = (first, 0), (first, 1)
        adj[fan_of[c1]].append(fan_of[c2])
        adj[fan_of[c2]].append(fan_of[c1])
    seen: set[int] = set()
    comps = 0
    for f in adj:
        if f in seen:
            continue
        comps += 1
        stack = [f]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(adj[x])
    n_marked = len(pair.fan_list)
    chi = n_marked - (len(d.arcs) + len(d.polygons)) + len(d.polygons)
    pieces = surface_components(d)
    # summed over pieces: chi = 2 * pieces - 2 * genus - boundary components
    twice_genus = 2 * pieces - chi - comps
    return SurfaceSummary(len(d.arcs), len(d.polygons), n_marked, comps, chi, twice_genus // 2,
                          twice_genus >= 0 and twice_genus % 2 == 0, pieces)


def surface_components(d: Dissection) -> int:
    """Connected components of the glued surface; polygons sharing an arc are joined."""
    parent = {a: a for a in d.arcs}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for p in d.polygons:
        run = [arc for arc, _ in p.arc_run()]
        for a, b in zip(run, run[1:]):
            parent[find(a)] = find(b)
    return len({find(a) for a in d.arcs})


def _poly_arrows(pair: GentlePair, d: Dissection) -> list[list[str]]:
    out = []
    counter = 0
    for p in d.polygons:
        n = len(p.arc_run()) - 1
        if p.angle_ids is not None:
            out.append(list(p.angle_ids))
        else:
            out.append([f"a{counter + j + 1}" for j in range(n)])
            counter += n
    return out
