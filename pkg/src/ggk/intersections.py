"""Oriented intersections between graded arcs and the morphisms they induce.

Every fan is read as the polygon around its marked point with sides
``B, e_0, ..., e_l`` in that cyclic order, where ``B`` is the boundary piece
holding the marked point.  Side numbers are ``0`` for ``B`` and ``i + 1`` for
``e_i``.  Two arcs that run through a common polygon, having entered by side
``z``, leave by sides ``x`` and ``y``; the arc whose exit comes first after
``z`` in cyclic order is the target of the oriented intersection.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .gentle_core import GentlePair, Path, fan_path
from .homalg import DgMorphism
from .string_model import (
    DgModule,
    GradedString,
    OrientedArc,
    StringError,
    build_x_module,
    oriented,
    require_valid,
    same_arc,
)

B = 0
HEAD, TAIL = "head", "tail"


class IntersectionError(ValueError):
    pass


@dataclass(frozen=True)
class IntersectionRecord:
    """An oriented intersection from ``source`` to ``target``.

    Boundary records sit at a shared marked point: ``source_end`` and
    ``target_end`` name the string ends, ``overlap`` is the number of common
    crossings and ``path`` (cases 1 and 4b) the fan path from the target's exit
    to the source's exit.  Interior records list aligned positions of the
    common run (possibly empty for a crossing inside one polygon).
    """

    source: GradedString
    target: GradedString
    index: int
    kind: str
    case: str
    source_end: str | None = None
    target_end: str | None = None
    overlap: int = 0
    path: tuple[str, ...] | None = None
    source_positions: tuple[int, ...] = ()
    target_positions: tuple[int, ...] = ()
    divergence: tuple[int, int] | None = None

    def describe(self) -> str:
        site = (f"{self.source_end}/{self.target_end} k={self.overlap} case {self.case}"
                if self.kind == "boundary" else f"run {self.source_positions}~{self.target_positions}")
        via = f" via {''.join(self.path)}" if self.path else ""
        return f"{self.kind} index {self.index}: {site}{via}"


def _side(pair: GentlePair, end: tuple[str, int]) -> int:
    return pair.fan_position[end][1] + 1


def _fan(pair: GentlePair, end: tuple[str, int]) -> int:
    return pair.fan_position[end][0]


def _sides_count(pair: GentlePair, fan_id: int) -> int:
    return len(pair.fan_list[fan_id].ends) + 1


def _first_after(z: int, x: int, y: int, n: int) -> str:
    """Which exit (``"x"`` or ``"y"``) comes first after ``z`` in cyclic order."""
    return "x" if (x - z) % n < (y - z) % n else "y"


def _path_between(pair: GentlePair, fan_id: int, lo_side: int, hi_side: int) -> Path:
    return fan_path(pair, pair.fan_list[fan_id], lo_side - 1, hi_side - 1)


def _check_pair(pair: GentlePair, s: GradedString, t: GradedString) -> None:
    require_valid(pair, s)
    require_valid(pair, t)
    if same_arc(s, t):
        raise IntersectionError("intersections of an arc with itself are not supported")


# ---- boundary intersections ------------------------------------------------------

def boundary_record(pair: GentlePair, s: GradedString, s_end: str, t: GradedString, t_end: str
                    ) -> IntersectionRecord | None:
    """The oriented intersection at the given ends, or ``None`` if they are not co-located."""
    os_, ot = oriented(pair, s, s_end), oriented(pair, t, t_end)
    if _fan(pair, os_.steps[0][0]) != _fan(pair, ot.steps[0][0]):
        return None
    k = 0
    while k < min(len(os_), len(ot)) and os_.steps[k] == ot.steps[k]:
        k += 1
    if k == len(os_) and k == len(ot):
        raise IntersectionError("the two ends run along the same arc")
    if k == 0:
        fan_id, z = _fan(pair, os_.steps[0][0]), B
    else:
        fan_id, z = _fan(pair, os_.steps[k - 1][1]), _side(pair, os_.steps[k - 1][1])
    x = _side(pair, os_.steps[k][0]) if k < len(os_) else B
    y = _side(pair, ot.steps[k][0]) if k < len(ot) else B
    n = _sides_count(pair, fan_id)
    if k == 0:
        case = "1"
    elif x == B:
        case = "2"
    elif y == B:
        case = "3"
    elif (x < z) == (y < z):
        case = "4b"
    else:
        case = "4a"
    forward = _first_after(z, x, y, n) == "y"
    src, tgt = (os_, ot) if forward else (ot, os_)
    src_exit, tgt_exit = (x, y) if forward else (y, x)
    path = None
    divergence = None
    if case in ("1", "4b"):
        p = _path_between(pair, fan_id, tgt_exit, src_exit)
        path = p.arrows
        index = pair.degree(p) + src.shift(k) - tgt.shift(k)
        divergence = (src.index[k], tgt.index[k])
    else:
        index = src.shift(k - 1) - tgt.shift(k - 1)
    return IntersectionRecord(
        source=src.string, target=tgt.string, index=index, kind="boundary", case=case,
        source_end=src.label, target_end=tgt.label, overlap=k, path=path,
        source_positions=src.index[:k], target_positions=tgt.index[:k], divergence=divergence,
    )


def boundary_intersections(pair: GentlePair, s: GradedString, t: GradedString) -> list[IntersectionRecord]:
    """One record for each pair of co-located ends, in either direction."""
    _check_pair(pair, s, t)
    out = []
    for s_end in (HEAD, TAIL):
        for t_end in (HEAD, TAIL):
            rec = boundary_record(pair, s, s_end, t, t_end)
            if rec is not None:
                out.append(rec)
    return out


# ---- interior intersections ---------------------------------------------------------

def _run_end_direction(pair, os_: OrientedArc, ot: OrientedArc, u0: int, v0: int, length: int, forward_end: bool):
    """Direction decided at one end of a common run: ``"st"``, ``"ts"`` or ``None`` if both arcs end there."""
    if forward_end:
        last_u, last_v = u0 + length - 1, v0 + length - 1
        z_end = os_.steps[last_u][1]
        x = _side(pair, os_.steps[last_u + 1][0]) if last_u + 1 < len(os_) else B
        y = _side(pair, ot.steps[last_v + 1][0]) if last_v + 1 < len(ot) else B
    else:
        z_end = os_.steps[u0][0]
        x = _side(pair, os_.steps[u0 - 1][1]) if u0 > 0 else B
        y = _side(pair, ot.steps[v0 - 1][1]) if v0 > 0 else B
    if x == B and y == B:
        return None
    z = _side(pair, z_end)
    n = _sides_count(pair, _fan(pair, z_end))
    return "st" if _first_after(z, x, y, n) == "y" else "ts"


def _common_runs(os_: OrientedArc, ot: OrientedArc):
    for u in range(len(os_)):
        for v in range(len(ot)):
            if os_.steps[u] != ot.steps[v]:
                continue
            if u > 0 and v > 0 and os_.steps[u - 1] == ot.steps[v - 1]:
                continue
            length = 0
            while u + length < len(os_) and v + length < len(ot) and os_.steps[u + length] == ot.steps[v + length]:
                length += 1
            yield u, v, length


def _segments(pair: GentlePair, arc: OrientedArc):
    """Pieces of the arc inside single polygons: ``(fan, ((side, position), (side, position)))``."""
    out = []
    first = arc.steps[0][0]
    out.append((_fan(pair, first), ((B, None), (_side(pair, first), 0))))
    for u in range(len(arc) - 1):
        a, b = arc.steps[u][1], arc.steps[u + 1][0]
        out.append((_fan(pair, a), ((_side(pair, a), u), (_side(pair, b), u + 1))))
    last = arc.steps[-1][1]
    out.append((_fan(pair, last), ((_side(pair, last), len(arc) - 1), (B, None))))
    return out


def _pair_records(s, t, st_index, site, s_pos, t_pos):
    """The two records of one transversal crossing; ``st_index`` is the index from ``s`` to ``t``."""
    return [
        IntersectionRecord(s, t, st_index, "interior", site, source_positions=s_pos, target_positions=t_pos),
        IntersectionRecord(t, s, 1 - st_index, "interior", site, source_positions=t_pos, target_positions=s_pos),
    ]


def interior_intersections(pair: GentlePair, s: GradedString, t: GradedString) -> list[IntersectionRecord]:
    """Transversal crossings away from the marked points, each as a pair of records."""
    _check_pair(pair, s, t)
    os_ = oriented(pair, s, HEAD)
    out: list[IntersectionRecord] = []
    for t_label in (HEAD, TAIL):
        ot = oriented(pair, t, t_label)
        for u, v, length in _common_runs(os_, ot):
            ends = [_run_end_direction(pair, os_, ot, u, v, length, fwd) for fwd in (True, False)]
            if None in ends or ends[0] != ends[1]:
                continue
            diff = os_.shift(u) - ot.shift(v)
            st_index = diff if ends[0] == "st" else 1 - (-diff)
            out.extend(_pair_records(s, t, st_index, "run",
                                     os_.index[u:u + length], ot.index[v:v + length]))
    # crossings inside one polygon, without a common dual arc
    ot = oriented(pair, t, HEAD)
    for fan_s, seg_s in _segments(pair, os_):
        for fan_t, seg_t in _segments(pair, ot):
            if fan_s != fan_t:
                continue
            sides = [seg_s[0][0], seg_s[1][0], seg_t[0][0], seg_t[1][0]]
            if len(set(sides)) != 4:
                continue
            (a1, pa1), (a2, pa2) = sorted(seg_s, key=lambda e: e[0])
            (b1, pb1), (b2, pb2) = sorted(seg_t, key=lambda e: e[0])
            if a1 < b1 < a2 < b2:
                p = _path_between(pair, fan_s, b1, a2)
                st_index = pair.degree(p) + os_.shift(pa2) - ot.shift(pb1)
            elif b1 < a1 < b2 < a2:
                p = _path_between(pair, fan_s, a1, b2)
                st_index = 1 - (pair.degree(p) + ot.shift(pb2) - os_.shift(pa1))
            else:
                continue
            out.extend(_pair_records(s, t, st_index, "cell", (), ()))
    return out


def all_intersections(pair: GentlePair, s: GradedString, t: GradedString) -> list[IntersectionRecord]:
    return boundary_intersections(pair, s, t) + interior_intersections(pair, s, t)


def int_table(pair: GentlePair, s: GradedString, t: GradedString) -> dict[int, int]:
    """Number of oriented intersections from ``s`` to ``t`` by index."""
    counts = Counter(r.index for r in all_intersections(pair, s, t) if r.source is s)
    return dict(sorted(counts.items()))


def int_with_dual_simple(pair: GentlePair, s: GradedString, vertex: str) -> dict[int, int]:
    """Crossings of ``s`` with the dual arc at ``vertex``, counted by shift."""
    require_valid(pair, s)
    counts = Counter(rho for v, rho in zip(s.vertices, s.shifts) if v == vertex)
    return dict(sorted(counts.items()))


# ---- morphisms -------------------------------------------------------------------------

def morphism_from_intersection(pair: GentlePair, rec: IntersectionRecord,
                               source_module: DgModule | None = None,
                               target_module: DgModule | None = None) -> DgMorphism:
    """The closed map ``X(source) -> X(target)`` of degree ``index`` attached to a boundary record."""
    if rec.kind != "boundary":
        raise IntersectionError("explicit morphisms exist only for boundary intersections")
    xs = source_module or build_x_module(pair, rec.source)
    xt = target_module or build_x_module(pair, rec.target)
    rho = rec.index
    comps: dict[tuple[int, int], dict[Path, Fraction]] = {}
    for u, (a, b) in enumerate(zip(rec.source_positions, rec.target_positions)):
        comps[(a, b)] = {Path.trivial(rec.source.vertices[a]): Fraction((-1) ** ((rho * u) % 2))}
    if rec.divergence is not None:
        a, b = rec.divergence
        comps[(a, b)] = {pair.path(rec.path): Fraction((-1) ** ((rho * rec.overlap) % 2))}
    f = DgMorphism(xs, xt, rho, comps)
    f.check_degrees()
    return f


def compose_intersections(pair: GentlePair, alpha: IntersectionRecord, beta: IntersectionRecord) -> IntersectionRecord:
    """The record ``alpha'' `` from ``alpha.source`` to ``beta.target`` formed by consecutive angles."""
    for rec in (alpha, beta):
        if rec.kind != "boundary":
            raise IntersectionError("only boundary intersections compose")
    if alpha.target != beta.source or alpha.target_end != beta.source_end:
        raise IntersectionError("the records do not meet at a common end of the middle arc")
    if same_arc(alpha.source, beta.target):
        raise IntersectionError("the composite would be an intersection of an arc with itself")
    rec = boundary_record(pair, alpha.source, alpha.source_end, beta.target, beta.target_end)
    if rec is None or rec.source != alpha.source or rec.source_end != alpha.source_end:
        raise IntersectionError("the angles do not compose at this marked point")
    if rec.index != alpha.index + beta.index:
        raise IntersectionError(f"composite index {rec.index} differs from {alpha.index} + {beta.index}")
    return rec


def composable(pair: GentlePair, alpha: IntersectionRecord, beta: IntersectionRecord) -> bool:
    try:
        compose_intersections(pair, alpha, beta)
    except (IntersectionError, StringError):
        return False
    return True
