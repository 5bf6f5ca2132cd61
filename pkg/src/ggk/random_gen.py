"""Seeded random dissections, gentle pairs and graded strings."""
from __future__ import annotations

import random

from .dissection import MARKED, Dissection, DissectionError, Polygon, algebra_from_dissection, surface_components
from .gentle_core import GentlePair
from .string_model import GradedString, L, Letter, R


def random_dissection(rng: random.Random, max_arcs: int = 8, degree_range: int = 3, min_arcs: int = 1) -> Dissection:
    """Glue the arc sides into polygons at random, one closed marked point per polygon."""
    n_arcs = rng.randint(min_arcs, max_arcs)
    arcs = tuple(f"g{i}" for i in range(1, n_arcs + 1))
    sides = [(a, e) for a in arcs for e in (0, 1)]
    rng.shuffle(sides)
    n_polys = rng.randint(1, len(sides))
    cuts = sorted(rng.sample(range(1, len(sides)), n_polys - 1))
    chunks = [sides[i:j] for i, j in zip([0] + cuts, cuts + [len(sides)])]
    polys = []
    for chunk in chunks:
        degs = tuple(rng.randint(-degree_range, degree_range) for _ in range(len(chunk) - 1))
        polys.append(Polygon(((MARKED,),) + tuple(("arc", a, e) for a, e in chunk), degs))
    return Dissection(arcs, tuple(polys))


def random_pair(rng: random.Random, max_vertices: int = 8, degree_range: int = 3, min_vertices: int = 1,
                tries: int = 200) -> tuple[GentlePair, Dissection]:
    """A random finite-dimensional gentle pair on a connected surface, with its dissection."""
    for _ in range(tries):
        d = random_dissection(rng, max_vertices, degree_range, min_vertices)
        if surface_components(d) != 1:
            continue
        try:
            return algebra_from_dissection(d), d
        except DissectionError:
            continue
    raise RuntimeError("no finite-dimensional dissection found; raise `tries`")


def random_string(rng: random.Random, pair: GentlePair, max_len: int = 5, shift_range: int = 2,
                  over: str = "primal") -> GradedString:
    """Walk through fans: cross a vertex, then move to another end of the same fan, or stop."""
    target_len = rng.randint(1, max_len)
    start = rng.choice([(v, s) for v in pair.vertices for s in (0, 1)])
    vertices = [start[0]]
    letters: list[Letter] = []
    end = (start[0], 1 - start[1])
    while len(vertices) < target_len:
        fan_id, pos = pair.fan_position[end]
        fan = pair.fan_list[fan_id]
        choices = [j for j in range(len(fan.ends)) if j != pos]
        if not choices:
            break
        j = rng.choice(choices)
        if j > pos:
            letters.append(Letter(L, fan.arrows[pos:j]))
        else:
            letters.append(Letter(R, fan.arrows[j:pos]))
        nxt = fan.ends[j]
        vertices.append(nxt[0])
        end = (nxt[0], 1 - nxt[1])
    shifts = [rng.randint(-shift_range, shift_range)]
    for letter in letters:
        d = pair.degree(letter.path)
        # L: rho_i = rho_{i+1} + d - 1 ; R: rho_{i+1} = rho_i + d - 1
        shifts.append(shifts[-1] - d + 1 if letter.direction == L else shifts[-1] + d - 1)
    return GradedString(tuple(vertices), tuple(shifts), tuple(letters), over)


def random_distinct_strings(rng: random.Random, pair: GentlePair, max_len: int = 5, over: str = "primal",
                            tries: int = 50) -> tuple[GradedString, GradedString]:
    from .string_model import same_arc

    s = random_string(rng, pair, max_len, over=over)
    for _ in range(tries):
        t = random_string(rng, pair, max_len, over=over)
        if not same_arc(s, t):
            return s, t
    raise RuntimeError("could not draw two distinct arcs")


def random_dg_thread(rng: random.Random, pair: GentlePair, length: int, max_len: int = 4, tries: int = 200):
    """A dg thread of ``length`` arcs: each new arc is shifted so that its link has index 1."""
    from .intersections import HEAD, TAIL, IntersectionError, boundary_record
    from .koszul import Thread, ThreadError, check_thread, smooth_thread
    from .string_model import same_arc, shift_string

    for _ in range(tries):
        strings = [random_string(rng, pair, max_len)]
        ends: list[tuple[str, str]] = []
        free_end = rng.choice((HEAD, TAIL))
        for _ in range(length - 1):
            placed = False
            for _ in range(40):
                t = random_string(rng, pair, max_len)
                t_end = rng.choice((HEAD, TAIL))
                if any(same_arc(t, s) for s in strings):
                    continue
                try:
                    rec = boundary_record(pair, strings[-1], free_end, t, t_end)
                except IntersectionError:
                    continue
                if rec is None:
                    continue
                n = rec.index - 1 if rec.source is strings[-1] and rec.source_end == free_end else 1 - rec.index
                t = shift_string(t, n)
                candidate = Thread(tuple(strings) + (t,), tuple(ends) + ((free_end, t_end),))
                try:
                    check_thread(pair, candidate)
                    smooth_thread(pair, candidate)
                except (ThreadError, IntersectionError):
                    continue
                strings.append(t)
                ends.append((free_end, t_end))
                free_end = TAIL if t_end == HEAD else HEAD
                placed = True
                break
            if not placed:
                break
        if len(strings) == length:
            return Thread(tuple(strings), tuple(ends))
    raise RuntimeError(f"no dg thread of length {length} found")
