import copy

import pytest
from hypothesis import given

from ggk.dissection import (
    MARKED,
    DissectionError,
    algebra_from_dissection,
    dissection_from_json,
    dissection_to_json,
    dual_pair_of,
    surface_summary,
)
from ggk.fixtures import EXAMPLE_DUAL_RELATIONS, example_dissection, example_dissection_json, example_pair
from ggk.gentle_core import same_pair
from ggk.random_gen import random_pair

import random

from conftest import seeds


def test_example_dissection_gives_example_pair(fx_dissection, fx):
    pair = algebra_from_dissection(fx_dissection)
    assert same_pair(pair, fx)
    assert set(pair.relations) == {("a4", "a6"), ("a5", "a2")}


def test_example_dissection_has_six_polygons(fx_dissection):
    assert len(fx_dissection.polygons) == 6


def test_example_surface_summary(fx_dissection):
    summary = surface_summary(fx_dissection)
    assert (summary.genus, summary.boundary_components) == (0, 3)
    assert summary.open_marked_points == 6
    assert summary.consistent


def test_dual_of_example_dissection(fx_dissection):
    dual = dual_pair_of(fx_dissection)
    assert set(dual.relations) == EXAMPLE_DUAL_RELATIONS
    assert all(a.degree == 1 for a in dual.arrows)


def test_angle_degrees_carry_over():
    pair = algebra_from_dissection(example_dissection({"a1": 2, "a4": -1}))
    assert pair.arrow["a1"].degree == 2
    assert pair.arrow["a4"].degree == -1
    dual = dual_pair_of(example_dissection({"a1": 2}))
    assert dual.arrow["a1*"].degree == -1


def test_dissection_json_round_trip(fx_dissection):
    data = dissection_to_json(fx_dissection)
    assert data == example_dissection_json()
    assert dissection_from_json(data) == fx_dissection


def _broken(mutate):
    data = copy.deepcopy(example_dissection_json())
    mutate(data)
    return data


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(extra=1),
    lambda d: d["polygons"][0].update(colour="red"),
    lambda d: d["polygons"][0]["sides"].append({"marked": True}),
    lambda d: d["polygons"][0]["sides"].pop(0),
    lambda d: d["polygons"][0]["angle_degrees"].append(0),
    lambda d: d["polygons"][0]["sides"][1].update(end=2),
    lambda d: d["polygons"][0]["sides"][1].update(arc="99"),
    lambda d: d["polygons"].pop(),
])
def test_malformed_dissections_are_rejected(mutate):
    with pytest.raises(DissectionError):
        dissection_from_json(_broken(mutate))


@pytest.mark.parametrize("polygons", [
    [
        {"sides": [{"marked": True}, {"arc": "x", "end": 0}, {"arc": "y", "end": 0}], "angle_degrees": [0]},
        {"sides": [{"marked": True}, {"arc": "y", "end": 1}, {"arc": "x", "end": 1}], "angle_degrees": [0]},
    ],
    [
        {"sides": [{"marked": True}, {"arc": "x", "end": 0}, {"arc": "x", "end": 1}], "angle_degrees": [0]},
        {"sides": [{"marked": True}, {"arc": "y", "end": 0}], "angle_degrees": []},
        {"sides": [{"marked": True}, {"arc": "y", "end": 1}], "angle_degrees": []},
    ],
])
def test_unobstructed_cycle_means_interior_marked_point(polygons):
    arcs = sorted({s["arc"] for p in polygons for s in p["sides"] if "arc" in s})
    with pytest.raises(DissectionError, match="interior"):
        algebra_from_dissection(dissection_from_json({"arcs": arcs, "polygons": polygons}))


def _glued_counts(d):
    """Glue polygon corners directly: side 0 runs along its arc forwards, side 1 backwards."""
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            x = parent[x]
        return x

    boundary = []
    for pi, p in enumerate(d.polygons):
        n = len(p.sides)
        for j, side in enumerate(p.sides):
            start, stop = (pi, j), (pi, (j + 1) % n)
            if side[0] == MARKED:
                boundary.append((start, stop))
                continue
            u, v = ((side[1], 0), (side[1], 1)) if side[2] == 0 else ((side[1], 1), (side[1], 0))
            parent[find(start)] = find(u)
            parent[find(stop)] = find(v)
    points = {find(x) for x in list(parent)}
    adj = {}
    for a, b in boundary:
        adj.setdefault(find(a), set()).add(find(b))
        adj.setdefault(find(b), set()).add(find(a))
    seen, comps = set(), 0
    for v in adj:
        if v not in seen:
            comps += 1
            stack = [v]
            while stack:
                x = stack.pop()
                if x not in seen:
                    seen.add(x)
                    stack.extend(adj[x])
    return len(points), comps


def test_disconnected_surface_summary():
    data = {
        "arcs": ["x", "y"],
        "polygons": [
            {"sides": [{"marked": True}, {"arc": "x", "end": 0}], "angle_degrees": []},
            {"sides": [{"marked": True}, {"arc": "x", "end": 1}], "angle_degrees": []},
            {"sides": [{"marked": True}, {"arc": "y", "end": 0}], "angle_degrees": []},
            {"sides": [{"marked": True}, {"arc": "y", "end": 1}], "angle_degrees": []},
        ],
    }
    summary = surface_summary(dissection_from_json(data))
    assert (summary.components, summary.genus, summary.boundary_components) == (2, 0, 2)
    assert summary.consistent


def test_example_gluing_matches_fans(fx_dissection, fx):
    assert _glued_counts(fx_dissection) == (len(fx.fan_list), 3)


@given(seeds)
def test_random_dissections_are_connected_and_consistent(seed):
    pair, d = random_pair(random.Random(seed), 8)
    assert len(pair.vertices) == len(d.arcs)
    summary = surface_summary(d)
    assert summary.components == 1
    assert summary.consistent
    assert _glued_counts(d) == (len(pair.fan_list), summary.boundary_components)


@given(seeds)
def test_dissection_round_trip_on_random_input(seed):
    _, d = random_pair(random.Random(seed), 8)
    assert dissection_from_json(dissection_to_json(d)) == d
    assert same_pair(algebra_from_dissection(d), algebra_from_dissection(dissection_from_json(dissection_to_json(d))))
