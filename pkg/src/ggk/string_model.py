"""Graded homotopy strings and their string dg modules.

A string lists the crossed vertices ``k_1..k_r`` with shifts and the letters
joining consecutive vertices.  Letter direction ``L`` means the differential
maps position ``i+1`` to position ``i`` (path from ``k_i`` to ``k_{i+1}``);
direction ``R`` means it maps ``i`` to ``i+1`` (path from ``k_{i+1}`` to
``k_i``).

Geometrically a string is an arc crossing dual arcs; between crossings it
runs through the polygon around one marked point, i.e. through one fan.  The
"passages" helpers describe an oriented arc as the sequence of fan sides it
enters and leaves, which is what intersection counting works with.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable

from .gentle_core import GentlePair, Path

L, R = "L", "R"
BOUNDARY = ("<boundary>", -1)


class StringError(ValueError):
    pass


@dataclass(frozen=True)
class Letter:
    direction: str
    path: tuple[str, ...]

    def flipped(self) -> "Letter":
        return Letter(R if self.direction == L else L, self.path)


@dataclass(frozen=True)
class GradedString:
    vertices: tuple[str, ...]
    shifts: tuple[int, ...]
    letters: tuple[Letter, ...] = ()
    over: str = "primal"

    def __len__(self) -> int:
        return len(self.vertices)

    def reversed(self) -> "GradedString":
        return GradedString(
            self.vertices[::-1],
            self.shifts[::-1],
            tuple(l.flipped() for l in reversed(self.letters)),
            self.over,
        )

    def describe(self) -> str:
        parts = [f"{self.vertices[0]}[{self.shifts[0]}]"]
        for letter, v, s in zip(self.letters, self.vertices[1:], self.shifts[1:]):
            name = "".join(letter.path)
            parts.append(f" <-{name}- {v}[{s}]" if letter.direction == L else f" -{name}-> {v}[{s}]")
        return "".join(parts)


def generator_string(vertex: str, shift: int = 0, over: str = "primal") -> GradedString:
    return GradedString((vertex,), (shift,), (), over)


def make_string(vertices, shifts, letters, over: str = "primal") -> GradedString:
    lets = tuple(l if isinstance(l, Letter) else Letter(l[0], tuple(l[1])) for l in letters)
    return GradedString(tuple(str(v) for v in vertices), tuple(int(s) for s in shifts), lets, over)


# ---- validation ----------------------------------------------------------------

@dataclass
class StringReport:
    ok: bool
    problems: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def letter_path(pair: GentlePair, s: GradedString, i: int) -> Path:
    """The path of letter ``i`` (0-based) with endpoints as stored."""
    return pair.path(s.letters[i].path)


def _letter_arrow_at(s: GradedString, i: int, side: str) -> tuple[str, str]:
    """Arrow of letter ``i`` touching its ``left``/``right`` vertex and whether it points in or out."""
    letter = s.letters[i]
    p = letter.path
    if letter.direction == L:  # path from left vertex to right vertex
        return (p[0], "out") if side == "left" else (p[-1], "in")
    return (p[-1], "in") if side == "left" else (p[0], "out")


def validate_string(pair: GentlePair, s: GradedString) -> StringReport:
    bad: list[str] = []
    r = len(s.vertices)
    if r == 0:
        return StringReport(False, ["empty string"])
    if len(s.shifts) != r:
        bad.append(f"{len(s.shifts)} shifts for {r} vertices")
    if len(s.letters) != r - 1:
        bad.append(f"{len(s.letters)} letters for {r} vertices")
    if bad:
        return StringReport(False, bad)
    for i, v in enumerate(s.vertices):
        if v not in pair.vertices:
            bad.append(f"position {i + 1}: unknown vertex {v}")
    if bad:
        return StringReport(False, bad)
    for i, letter in enumerate(s.letters):
        pos = i + 1
        if letter.direction not in (L, R):
            bad.append(f"letter {pos}: direction must be L or R")
            continue
        if not letter.path:
            bad.append(f"letter {pos}: empty path")
            continue
        if any(a not in pair.arrow for a in letter.path):
            bad.append(f"letter {pos}: unknown arrow in {letter.path}")
            continue
        try:
            p = pair.path(letter.path)
        except ValueError:
            bad.append(f"letter {pos}: arrows do not form a path")
            continue
        if not pair.is_nonzero(p):
            bad.append(f"letter {pos}: path {p.label()} is zero")
        left, right = s.vertices[i], s.vertices[i + 1]
        want = (left, right) if letter.direction == L else (right, left)
        if (p.source, p.target) != want:
            bad.append(f"letter {pos}: path {p.label()} runs {p.source}->{p.target}, expected {want[0]}->{want[1]}")
        d = pair.degree(p)
        if letter.direction == L and s.shifts[i] != s.shifts[i + 1] + d - 1:
            bad.append(f"letter {pos}: grading needs shift {s.shifts[i + 1] + d - 1} at position {pos}")
        if letter.direction == R and s.shifts[i + 1] != s.shifts[i] + d - 1:
            bad.append(f"letter {pos}: grading needs shift {s.shifts[i] + d - 1} at position {pos + 1}")
    if bad:
        return StringReport(False, bad)
    for i in range(len(s.letters) - 1):
        a1, io1 = _letter_arrow_at(s, i, "right")
        a2, io2 = _letter_arrow_at(s, i + 1, "left")
        pos = i + 2
        if s.letters[i].direction == s.letters[i + 1].direction:
            first, then = (a1, a2) if io1 == "in" else (a2, a1)
            if not pair.is_relation(first, then):
                bad.append(f"position {pos}: same-direction letters meet in {first}{then}, which is not a relation")
        elif a1 == a2:
            bad.append(f"position {pos}: opposite letters share the arrow {a1} (not reduced)")
    return StringReport(not bad, bad)


def require_valid(pair: GentlePair, s: GradedString) -> None:
    rep = validate_string(pair, s)
    if not rep.ok:
        raise StringError("; ".join(rep.problems))


# ---- simple operations --------------------------------------------------------

def shift_string(s: GradedString, n: int) -> GradedString:
    return replace(s, shifts=tuple(x + n for x in s.shifts))


def _sort_key(s: GradedString):
    return (s.vertices, s.shifts, tuple((l.direction, l.path) for l in s.letters))


def canonical_form(s: GradedString) -> GradedString:
    """Lexicographic minimum of the string and its reversal."""
    rev = s.reversed()
    return min(s, rev, key=_sort_key)


def same_arc(s: GradedString, t: GradedString) -> bool:
    """True when the two strings describe the same arc, ignoring grading."""
    return _unshifted(s) == _unshifted(t)


def _unshifted(s: GradedString):
    c1 = (s.vertices, tuple((l.direction, l.path) for l in s.letters))
    r = s.reversed()
    c2 = (r.vertices, tuple((l.direction, l.path) for l in r.letters))
    return min(c1, c2)


# ---- dg modules -------------------------------------------------------------------

Coeff = Fraction


@dataclass
class DgModule:
    """Shifted indecomposable projectives with a path-valued differential.

    ``differential[(u, v)]`` is a linear combination ``{Path: coefficient}``
    describing the component from generator ``u`` to generator ``v``; a path
    ``q`` from ``vertex(v)`` to ``vertex(u)`` acts by left multiplication.
    ``top_only`` marks the simple module: a single generator on which every
    path of positive length acts as zero.
    """

    pair: GentlePair
    generators: list[tuple[str, int]]
    differential: dict[tuple[int, int], dict[Path, Coeff]] = field(default_factory=dict)
    labels: list[str] | None = None
    top_only: bool = False

    def shifted(self, n: int) -> "DgModule":
        return DgModule(self.pair, [(v, m + n) for v, m in self.generators],
                        {k: dict(c) for k, c in self.differential.items()}, self.labels, self.top_only)

    def vertex(self, u: int) -> str:
        return self.generators[u][0]

    def shift(self, u: int) -> int:
        return self.generators[u][1]


def component_degree(pair: GentlePair, module_src: DgModule, u: int, module_tgt: DgModule, v: int, q: Path) -> int:
    return pair.degree(q) + module_src.shift(u) - module_tgt.shift(v)


def build_x_module(pair: GentlePair, s: GradedString) -> DgModule:
    require_valid(pair, s)
    gens = list(zip(s.vertices, s.shifts))
    diff: dict[tuple[int, int], dict[Path, Coeff]] = {}
    for i, letter in enumerate(s.letters):
        p = pair.path(letter.path)
        key = (i + 1, i) if letter.direction == L else (i, i + 1)
        diff[key] = {p: Fraction(1)}
    labels = [f"P{v}[{m}]" for v, m in gens]
    return DgModule(pair, gens, diff, labels)


def projective_module(pair: GentlePair, vertex: str, shift: int = 0) -> DgModule:
    return DgModule(pair, [(vertex, shift)], {}, [f"P{vertex}[{shift}]"])


def simple_module(pair: GentlePair, vertex: str, shift: int = 0) -> DgModule:
    return DgModule(pair, [(vertex, shift)], {}, [f"S{vertex}[{shift}]"], top_only=True)


# ---- geometry of a string: ends and passages -------------------------------------

def _letter_end(pair: GentlePair, s: GradedString, i: int, side: str) -> tuple[str, int]:
    """Arc-end of the vertex on ``side`` of letter ``i`` that the letter uses."""
    arrow, _ = _letter_arrow_at(s, i, side)
    vertex = s.vertices[i] if side == "left" else s.vertices[i + 1]
    return pair.end_with_arrow(vertex, arrow)


def crossings(pair: GentlePair, s: GradedString, flip_single: bool = False) -> list[tuple[tuple[str, int], tuple[str, int]]]:
    """For each position, the arc-end the string enters through and the one it leaves by.

    For a one-vertex string the orientation is a convention: slot 0 to slot 1,
    or the reverse when ``flip_single`` is set.
    """
    r = len(s.vertices)
    if r == 1:
        v = s.vertices[0]
        return [((v, 1), (v, 0))] if flip_single else [((v, 0), (v, 1))]
    out = []
    for u in range(r):
        if u < r - 1:
            leave = _letter_end(pair, s, u, "left")
            enter = pair.other_end(leave) if u == 0 else _letter_end(pair, s, u - 1, "right")
        else:
            enter = _letter_end(pair, s, u - 1, "right")
            leave = pair.other_end(enter)
        out.append((enter, leave))
    return out


@dataclass(frozen=True)
class OrientedArc:
    """A string read from one of its ends.

    ``index[u]`` is the position in the underlying string of the ``u``-th
    crossing; ``steps[u] = (enter, leave)`` arc-ends of that crossing.
    The end of the arc we start from is ``steps[0][0]``'s fan.
    """

    string: GradedString
    label: str
    index: tuple[int, ...]
    steps: tuple[tuple[tuple[str, int], tuple[str, int]], ...]

    def vertex(self, u: int) -> str:
        return self.string.vertices[self.index[u]]

    def shift(self, u: int) -> int:
        return self.string.shifts[self.index[u]]

    def __len__(self) -> int:
        return len(self.index)


def string_ends(pair: GentlePair, s: GradedString) -> dict[str, tuple[str, int]]:
    """Arc-end keys at which the string starts (``head``) and stops (``tail``)."""
    steps = crossings(pair, s)
    return {"head": steps[0][0], "tail": steps[-1][1]}


def oriented(pair: GentlePair, s: GradedString, label: str) -> OrientedArc:
    """Orient ``s`` out of its ``head`` or ``tail`` end."""
    steps = crossings(pair, s)
    r = len(s.vertices)
    if label == "head":
        return OrientedArc(s, label, tuple(range(r)), tuple(steps))
    if label == "tail":
        rev = tuple((b, a) for a, b in reversed(steps))
        return OrientedArc(s, label, tuple(range(r - 1, -1, -1)), rev)
    raise ValueError(label)


def end_descriptor(pair: GentlePair, s: GradedString, end: str) -> tuple[int, int]:
    """``(fan id, position in fan)`` of the marked point where the given end sits."""
    key = string_ends(pair, s)[end]
    return pair.fan_position[key]


# ---- JSON ------------------------------------------------------------------------

_ARC_KEYS = {"over", "vertices", "shifts", "letters"}


def string_to_json(s: GradedString) -> dict:
    return {
        "over": s.over,
        "vertices": list(s.vertices),
        "shifts": list(s.shifts),
        "letters": [{"dir": l.direction, "path": list(l.path)} for l in s.letters],
    }


def string_from_json(data: dict) -> GradedString:
    if not isinstance(data, dict):
        raise StringError("arc must be a JSON object")
    extra = set(data) - _ARC_KEYS
    if extra:
        raise StringError(f"unknown arc keys: {sorted(extra)}")
    over = data.get("over", "primal")
    if over not in ("primal", "dual"):
        raise StringError("'over' must be 'primal' or 'dual'")
    letters = []
    for item in data.get("letters", []):
        if set(item) - {"dir", "path"}:
            raise StringError(f"unknown letter keys: {sorted(set(item) - {'dir', 'path'})}")
        letters.append(Letter(str(item["dir"]), tuple(str(a) for a in item["path"])))
    return GradedString(tuple(str(v) for v in data["vertices"]), tuple(int(x) for x in data["shifts"]),
                        tuple(letters), over)


def load_string(path) -> GradedString:
    with open(path, encoding="utf-8") as fh:
        return string_from_json(json.load(fh))


def module_signature(m: DgModule) -> tuple:
    """Hashable form of a module, for equality tests."""
    diff = tuple(sorted((k, tuple(sorted((p.arrows, p.source, p.target, c) for p, c in v.items())))
                        for k, v in m.differential.items() if v))
    return (tuple(m.generators), diff, m.top_only)


def iter_letters(s: GradedString) -> Iterable[tuple[int, Letter]]:
    return enumerate(s.letters)
