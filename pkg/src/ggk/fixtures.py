"""The worked example surface: genus 0, three boundary components, seven arcs."""
from __future__ import annotations

from .dissection import Dissection, dissection_from_json
from .gentle_core import GentlePair, make_pair

EXAMPLE_ARROWS = [
    ("a1", "1", "2", 0),
    ("a2", "2", "3", 0),
    ("a3", "4", "3", 0),
    ("a4", "4", "6", 0),
    ("a5", "5", "2", 0),
    ("a6", "6", "5", 0),
    ("a7", "6", "7", 0),
    ("a8", "1", "7", 0),
]
EXAMPLE_RELATIONS = [("a4", "a6"), ("a5", "a2")]
EXAMPLE_DUAL_RELATIONS = {("a2*", "a1*"), ("a5*", "a6*"), ("a7*", "a4*")}


def example_pair() -> GentlePair:
    return make_pair([str(i) for i in range(1, 8)], EXAMPLE_ARROWS, EXAMPLE_RELATIONS)


def _side(arc: str, end: int) -> dict:
    return {"arc": arc, "end": end}


MARK = {"marked": True}


def example_dissection_json(degrees: dict[str, int] | None = None) -> dict:
    """Six polygons, each with one closed marked point; angle ids match the example quiver."""
    deg = {a[0]: 0 for a in EXAMPLE_ARROWS}
    deg.update(degrees or {})
    polys = [
        ([MARK, _side("1", 0), _side("2", 0)], ["a1"]),
        ([MARK, _side("5", 0), _side("2", 1), _side("3", 0)], ["a5", "a2"]),
        ([MARK, _side("4", 0), _side("3", 1)], ["a3"]),
        ([MARK, _side("4", 1), _side("6", 0), _side("5", 1)], ["a4", "a6"]),
        ([MARK, _side("6", 1), _side("7", 0)], ["a7"]),
        ([MARK, _side("1", 1), _side("7", 1)], ["a8"]),
    ]
    return {
        "arcs": [str(i) for i in range(1, 8)],
        "polygons": [
            {"sides": sides, "angle_degrees": [deg[a] for a in ids], "angle_ids": ids} for sides, ids in polys
        ],
    }


def example_dissection(degrees: dict[str, int] | None = None) -> Dissection:
    return dissection_from_json(example_dissection_json(degrees))
