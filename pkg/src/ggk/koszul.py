"""Smoothing, dg threads, resolutions of simples and the half rotation."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .gentle_core import GentlePair, Path, dual_arrow_id, fan_path, maximal_relation_paths, quadratic_dual
from .homalg import DgMorphism, compose, is_closed, thread_total_module
from .intersections import (
    B,
    HEAD,
    TAIL,
    IntersectionError,
    IntersectionRecord,
    _fan,
    _side,
    boundary_record,
    morphism_from_intersection,
)
from .string_model import (
    DgModule,
    GradedString,
    L,
    Letter,
    R,
    StringError,
    build_x_module,
    generator_string,
    oriented,
    require_valid,
    shift_string,
    string_ends,
)


class ThreadError(ValueError):
    pass


# ---- smoothing ----------------------------------------------------------------------------

def _oriented_string(s: GradedString, label: str) -> GradedString:
    return s if label == HEAD else s.reversed()


def _suffix(s: GradedString, k: int) -> GradedString:
    return GradedString(s.vertices[k:], s.shifts[k:], s.letters[k:], s.over)


def _join(left: GradedString, letter: Letter | None, right: GradedString) -> GradedString:
    if not left.vertices:
        return right
    if not right.vertices:
        return left
    return GradedString(left.vertices + right.vertices, left.shifts + right.shifts,
                        left.letters + (letter,) + right.letters, left.over)


def end_label(pair: GentlePair, s: GradedString, key: tuple[str, int]) -> str:
    """Which end of ``s`` sits at the arc-end ``key``; only needed for one-vertex strings."""
    ends = string_ends(pair, s)
    if len(s.vertices) == 1:
        return HEAD if ends[HEAD] == key else TAIL
    if ends[TAIL] == key:
        return TAIL
    if ends[HEAD] == key:
        return HEAD
    raise ThreadError(f"arc-end {key} is not an end of {s.describe()}")


@dataclass(frozen=True)
class Smoothing:
    """Result of a smoothing; ``far_end`` labels the end coming from the second argument's far end."""

    string: GradedString
    far_end: str
    record: IntersectionRecord
    source_first: bool


def smooth(pair: GentlePair, first: GradedString, first_end: str, second: GradedString, second_end: str) -> Smoothing:
    """Surgery at the shared marked point of the given ends; grading inherited from ``first``."""
    rec = boundary_record(pair, first, first_end, second, second_end)
    if rec is None:
        raise IntersectionError("the given ends are not at a common marked point")
    source_first = rec.source is first and rec.source_end == first_end
    src_label, tgt_label = rec.source_end, rec.target_end
    os_, ot = oriented(pair, rec.source, src_label), oriented(pair, rec.target, tgt_label)
    k = rec.overlap
    s_part = _suffix(_oriented_string(rec.source, src_label), k)
    t_part = shift_string(_suffix(_oriented_string(rec.target, tgt_label), k), rec.index - 1)
    letter = None
    if s_part.vertices and t_part.vertices:
        x, y = _side(pair, os_.steps[k][0]), _side(pair, ot.steps[k][0])
        fan = pair.fan_list[_fan(pair, os_.steps[k][0])]
        lo, hi = sorted((x, y))
        letter = Letter(L if x < y else R, fan_path(pair, fan, lo - 1, hi - 1).arrows)
    result = _join(s_part.reversed(), letter, t_part)
    if not result.vertices:
        raise IntersectionError("smoothing cancels both arcs")
    # arc-end at the far side of ``second`` within the result as built (right end)
    if source_first:
        far_key = ot.steps[-1][1] if t_part.vertices else os_.steps[k][0]
    else:
        far_key = os_.steps[-1][1] if s_part.vertices else ot.steps[k][0]
        result = shift_string(result.reversed(), 1 - rec.index)
    require_valid(pair, result)
    if len(result.vertices) == 1:
        far = end_label(pair, result, far_key)
    else:
        far = TAIL
    return Smoothing(result, far, rec, source_first)


# ---- threads -----------------------------------------------------------------------------------

@dataclass(frozen=True)
class Thread:
    """Strings joined by boundary records; ``ends[i]`` = (end of strings[i], end of strings[i+1])."""

    strings: tuple[GradedString, ...]
    ends: tuple[tuple[str, str], ...]

    def records(self, pair: GentlePair) -> list[IntersectionRecord]:
        out = []
        for i, (e1, e2) in enumerate(self.ends):
            rec = boundary_record(pair, self.strings[i], e1, self.strings[i + 1], e2)
            if rec is None:
                raise ThreadError(f"link {i}: the ends are not at a common marked point")
            out.append(rec)
        return out


def check_thread(pair: GentlePair, t: Thread, dg: bool = True) -> list[IntersectionRecord]:
    if len(t.ends) != len(t.strings) - 1:
        raise ThreadError("a thread of n arcs needs n - 1 links")
    for s in t.strings:
        require_valid(pair, s)
    recs = t.records(pair)
    for i in range(1, len(t.ends)):
        if t.ends[i - 1][1] == t.ends[i][0]:
            raise ThreadError(f"links {i - 1} and {i} use the same end of arc {i}")
    if dg:
        for i, rec in enumerate(recs):
            if rec.index != 1:
                raise ThreadError(f"link {i} has index {rec.index}, a dg thread needs 1")
        maps = thread_morphisms(pair, t, recs)
        for i in range(1, len(recs)):
            f, g = maps[i - 1], maps[i]
            if f.target is g.source:
                if not compose(g, f).is_zero():
                    raise ThreadError(f"links {i - 1} and {i} compose to a nonzero map")
            elif g.target is f.source:
                if not compose(f, g).is_zero():
                    raise ThreadError(f"links {i} and {i - 1} compose to a nonzero map")
    return recs


def thread_modules(pair: GentlePair, t: Thread) -> list[DgModule]:
    return [build_x_module(pair, s) for s in t.strings]


def thread_morphisms(pair: GentlePair, t: Thread, recs=None, modules=None) -> list[DgMorphism]:
    recs = recs or t.records(pair)
    modules = modules or thread_modules(pair, t)
    out = []
    for i, rec in enumerate(recs):
        forward = rec.source is t.strings[i]
        src, tgt = (modules[i], modules[i + 1]) if forward else (modules[i + 1], modules[i])
        out.append(morphism_from_intersection(pair, rec, src, tgt))
    return out


def thread_total(pair: GentlePair, t: Thread) -> DgModule:
    recs = check_thread(pair, t)
    modules = thread_modules(pair, t)
    total, _ = thread_total_module(modules, thread_morphisms(pair, t, recs, modules))
    return total


def smooth_thread(pair: GentlePair, t: Thread) -> GradedString:
    """Left fold of smoothings, re-deriving each link at the end left by the previous step."""
    recs = check_thread(pair, t)
    acc = t.strings[0]
    acc_end = t.ends[0][0] if t.ends else HEAD
    for i, rec in enumerate(recs):
        try:
            res = smooth(pair, acc, acc_end, t.strings[i + 1], t.ends[i][1])
        except IntersectionError as exc:
            raise ThreadError(f"link {i}: the partial smoothing degenerates ({exc})") from exc
        acc_forward = res.source_first
        orig_forward = rec.source is t.strings[i]
        if res.record.index != rec.index or acc_forward != orig_forward:
            raise ThreadError(f"link {i} changed under smoothing: {rec.describe()} became {res.record.describe()}")
        acc = res.string
        if i + 1 < len(recs):
            # the next link lives at the far end of strings[i+1], now an end of acc
            acc_end = res.far_end
    return acc


def generator_thread(pair: GentlePair, s: GradedString) -> Thread:
    """Decompose ``s`` into its generator arcs, one link per letter."""
    require_valid(pair, s)
    gens = tuple(generator_string(v, m, s.over) for v, m in zip(s.vertices, s.shifts))
    ends = []
    for i, letter in enumerate(s.letters):
        p = pair.path(letter.path)
        left_arrow, right_arrow = (p.arrows[0], p.arrows[-1]) if letter.direction == L else (p.arrows[-1], p.arrows[0])
        left_key = pair.end_with_arrow(s.vertices[i], left_arrow)
        right_key = pair.end_with_arrow(s.vertices[i + 1], right_arrow)
        ends.append((end_label(pair, gens[i], left_key), end_label(pair, gens[i + 1], right_key)))
    return Thread(gens, tuple(ends))


# ---- homotopy equivalences for a single smoothing ---------------------------------------------

def _result_position_maps(rec: IntersectionRecord, n_result: int):
    """Generator index in ``X(source ^ target)`` for each source / target generator beyond the overlap."""
    k = rec.overlap
    n_s = len(rec.source.vertices)
    n_t = len(rec.target.vertices)
    s_order = list(range(n_s)) if rec.source_end == HEAD else list(range(n_s - 1, -1, -1))
    t_order = list(range(n_t)) if rec.target_end == HEAD else list(range(n_t - 1, -1, -1))
    s_rest = s_order[k:]
    t_rest = t_order[k:]
    s_map = {orig: len(s_rest) - 1 - j for j, orig in enumerate(s_rest)}
    t_map = {orig: len(s_rest) + j for j, orig in enumerate(t_rest)}
    assert len(s_rest) + len(t_rest) == n_result
    return s_order, t_order, s_map, t_map


def homotopy_equivalence_pair(pair: GentlePair, s: GradedString, s_end: str, t: GradedString, t_end: str):
    """Closed degree-0 maps between ``Cone(f_alpha)`` and ``X(s ^ t)`` for an index-1 record.

    Returns ``(cone, smoothed, chi, psi)`` with ``chi: cone -> smoothed`` and
    ``psi: smoothed -> cone``.
    """
    rec = boundary_record(pair, s, s_end, t, t_end)
    if rec is None:
        raise IntersectionError("the given ends are not at a common marked point")
    if rec.index != 1:
        raise ThreadError(f"homotopy equivalences need index 1, got {rec.index}")
    xs, xt = build_x_module(pair, rec.source), build_x_module(pair, rec.target)
    f = morphism_from_intersection(pair, rec, xs, xt)
    cone, offsets = thread_total_module([xs, xt], [f])
    res = smooth(pair, rec.source, rec.source_end, rec.target, rec.target_end)
    xr = build_x_module(pair, res.string)
    k = rec.overlap
    s_order, t_order, s_map, t_map = _result_position_maps(rec, len(res.string.vertices))
    sign = Fraction((-1) ** (k % 2))
    chi: dict[tuple[int, int], dict[Path, Fraction]] = {}
    psi: dict[tuple[int, int], dict[Path, Fraction]] = {}
    for orig, r in s_map.items():
        e = Path.trivial(rec.source.vertices[orig])
        chi[(orig + offsets[0], r)] = {e: Fraction(1)}
        psi[(r, orig + offsets[0])] = {e: Fraction(1)}
    for orig, r in t_map.items():
        e = Path.trivial(rec.target.vertices[orig])
        chi[(orig + offsets[1], r)] = {e: sign}
        psi[(r, orig + offsets[1])] = {e: sign}
    if k > 0:
        s_k, s_next = s_order[k - 1], (s_order[k] if k < len(s_order) else None)
        t_k, t_next = t_order[k - 1], (t_order[k] if k < len(t_order) else None)
        if s_next is not None:
            comp = xs.differential.get((s_k, s_next))
            if comp:  # source letter k points out of position k
                (p, _), = comp.items()
                chi[(t_k + offsets[1], s_map[s_next])] = {p: sign}
        if t_next is not None:
            comp = xt.differential.get((t_next, t_k))
            if comp:  # target letter k points into position k
                (p, _), = comp.items()
                psi[(t_map[t_next], s_k + offsets[0])] = {p: Fraction(1)}
    chi_m = DgMorphism(cone, xr, 0, chi).clean()
    psi_m = DgMorphism(xr, cone, 0, psi).clean()
    chi_m.check_degrees()
    psi_m.check_degrees()
    return cone, xr, chi_m, psi_m


# ---- resolutions of simples and the half rotation ------------------------------------------

def simple_resolution(pair: GentlePair, vertex: str, over: str = "primal") -> GradedString:
    """The string of the projective resolution of the simple at ``vertex``."""
    branches = maximal_relation_paths(pair, vertex)
    left = branches[0].arrows if branches else ()
    right = branches[1].arrows if len(branches) > 1 else ()

    def walk(arrows):
        verts, shifts, total = [], [], 0
        for j, a in enumerate(arrows, start=1):
            total += pair.arrow[a].degree
            verts.append(pair.arrow[a].target)
            shifts.append(j - total)
        return verts, shifts

    lv, ls = walk(left)
    rv, rs = walk(right)
    vertices = lv[::-1] + [vertex] + rv
    shifts = ls[::-1] + [0] + rs
    letters = [Letter(R, (a,)) for a in reversed(left)] + [Letter(L, (a,)) for a in right]
    s = GradedString(tuple(vertices), tuple(shifts), tuple(letters), over)
    require_valid(pair, s)
    return s


def _center(pair: GentlePair, vertex: str) -> int:
    branches = maximal_relation_paths(pair, vertex)
    return len(branches[0]) if branches else 0


def _branch_node(pair: GentlePair, vertex: str, first_arrow: str, depth: int) -> int:
    """Position in ``simple_resolution(vertex)`` of the node at ``depth`` on the branch starting with ``first_arrow``."""
    branches = maximal_relation_paths(pair, vertex)
    c = _center(pair, vertex)
    for i, b in enumerate(branches):
        if b.arrows[0] == first_arrow:
            if depth > len(b):
                raise ThreadError(f"branch {b.label()} is shorter than {depth}")
            return c - depth if i == 0 else c + depth
    raise ThreadError(f"{first_arrow} does not start a maximal relation path at {vertex}")


def koszul_record(pair: GentlePair, lower: GradedString, lower_vertex: str, upper: GradedString, upper_vertex: str,
                  relation_path: Path, index: int | None = 1) -> tuple[str, str]:
    """Ends of the link ``pS_y -> pS_x`` standing for a relation path ``y -> x``.

    ``lower`` resolves the simple at ``y = relation_path.source`` and ``upper``
    the one at ``x``.  Only records of the given index qualify (any index when
    ``None``).  Returns ``(end on lower, end on upper)``.
    """
    node = _branch_node(pair, lower_vertex, relation_path.arrows[0], len(relation_path))
    center = _center(pair, upper_vertex)
    found = []
    for e1 in (HEAD, TAIL):
        for e2 in (HEAD, TAIL):
            try:
                rec = boundary_record(pair, lower, e1, upper, e2)
            except IntersectionError:  # same end of two copies of one arc
                continue
            if rec is None or (index is not None and rec.index != index) or rec.source is not lower or rec.source_end != e1:
                continue
            if (node, center) in zip(rec.source_positions, rec.target_positions):
                found.append((e1, e2))
    if len(found) != 1:
        raise ThreadError(f"expected one link for relation path {relation_path.label()}, found {len(found)}")
    return found[0]


def koszul_thread(pair: GentlePair, eta: GradedString) -> Thread:
    """Replace each vertex of a closed arc by the resolution of its simple, each letter by a link."""
    dual = quadratic_dual(pair)
    require_valid(dual, eta)
    strings = tuple(shift_string(simple_resolution(pair, v), n) for v, n in zip(eta.vertices, eta.shifts))
    ends = []
    for i, letter in enumerate(eta.letters):
        dual_path = dual.path(letter.path)
        relation = pair.path(dual_arrow_id(a) for a in reversed(dual_path.arrows))
        # dual path x -> y is the relation path y -> x; the link runs pS_y -> pS_x
        if letter.direction == L:  # dual path from position i to position i+1
            lo, hi = i + 1, i
        else:
            lo, hi = i, i + 1
        e_lo, e_hi = koszul_record(pair, strings[lo], eta.vertices[lo], strings[hi], eta.vertices[hi], relation)
        ends.append((e_lo, e_hi) if lo == i else (e_hi, e_lo))
    return Thread(strings, tuple(ends))


def half_rotate(pair: GentlePair, eta: GradedString) -> GradedString:
    """The open arc over ``pair`` obtained from a closed arc over its quadratic dual."""
    return smooth_thread(pair, koszul_thread(pair, eta))


def koszul_object(pair: GentlePair, eta: GradedString) -> DgModule:
    return build_x_module(pair, half_rotate(pair, eta))


def half_rotate_open(pair: GentlePair, sigma: GradedString) -> GradedString:
    """The closed arc over the quadratic dual obtained from an open arc over ``pair``.

    The construction is run with the roles of the two algebras exchanged; the
    final shift by ``-1`` accounts for the dual of the dual being the original
    system shifted by one.
    """
    require_valid(pair, sigma)
    dual = quadratic_dual(pair)
    closed = half_rotate(dual, GradedString(sigma.vertices, sigma.shifts, sigma.letters, "dual"))
    return shift_string(GradedString(closed.vertices, closed.shifts, closed.letters, "dual"), -1)


# ---- strong formality ----------------------------------------------------------------------

@dataclass(frozen=True)
class AngleLink:
    """The index-1 link ``pS_i -> pS_j[n]`` of a single arrow ``i -> j``."""

    arrow: str
    source: GradedString
    target: GradedString
    record: IntersectionRecord


def resolution_link(pair: GentlePair, source: GradedString, arrow_id: str) -> AngleLink:
    """Link from ``source`` (a shifted resolution of the simple at the arrow's source) along ``arrow_id``."""
    a = pair.arrow[arrow_id]
    target = simple_resolution(pair, a.target)
    path = pair.path([arrow_id])
    e1, e2 = koszul_record(pair, source, a.source, target, a.target, path, index=None)
    rec = boundary_record(pair, source, e1, target, e2)
    target = shift_string(target, rec.index - 1)
    rec = boundary_record(pair, source, e1, target, e2)
    if rec.index != 1 or rec.source is not source:
        raise ThreadError(f"link of {arrow_id} does not normalize to index 1")
    return AngleLink(arrow_id, source, target, rec)


def adjacent_angle_pairs(pair: GentlePair) -> list[tuple[str, str]]:
    """Composable arrow pairs ``(a, b)`` with ``ab`` not a relation: the consecutive dual angles."""
    return sorted((a.id, b.id) for a in pair.arrows for b in pair.out_arrows[a.target]
                  if not pair.is_relation(a.id, b.id))


def link_composite(pair: GentlePair, first_arrow: str, second_arrow: str) -> DgMorphism:
    """``f_b o f_a`` for the links of ``a`` and ``b`` starting at the resolution of ``source(a)``."""
    a = pair.arrow[first_arrow]
    if a.target != pair.arrow[second_arrow].source:
        raise ThreadError(f"arrows {first_arrow} and {second_arrow} are not composable")
    first = resolution_link(pair, simple_resolution(pair, a.source), first_arrow)
    second = resolution_link(pair, first.target, second_arrow)
    xs, mid, xt = (build_x_module(pair, s) for s in (first.source, first.target, second.target))
    f = morphism_from_intersection(pair, first.record, xs, mid)
    g = morphism_from_intersection(pair, second.record, mid, xt)
    return compose(g, f)


def strong_formality_check(pair: GentlePair, pairs: list[tuple[str, str]] | None = None) -> bool:
    """Whether every listed composite of resolution links vanishes exactly."""
    pairs = adjacent_angle_pairs(pair) if pairs is None else pairs
    return all(link_composite(pair, a, b).is_zero() for a, b in pairs)
