import pytest
from hypothesis import given

from ggk.gentle_core import (
    InfiniteDimensionalError,
    NotComposableError,
    Path,
    StructureError,
    compose_paths,
    dumps_pair,
    loads_pair,
    make_pair,
    maximal_relation_paths,
    nonzero_paths,
    pair_from_json,
    quadratic_dual,
    same_pair,
    validate_gentle,
)
from ggk.fixtures import EXAMPLE_ARROWS, EXAMPLE_DUAL_RELATIONS, EXAMPLE_RELATIONS

from conftest import pair_from_seed, seeds


def test_example_is_gentle(fx):
    assert validate_gentle(fx).ok


def test_three_outgoing_arrows_violate_degree_bound():
    pair = make_pair(["0", "1", "2", "3"], [("b1", "0", "1"), ("b2", "0", "2"), ("b3", "0", "3")])
    report = validate_gentle(pair)
    assert not report.ok
    assert any("outgoing" in v for v in report.violations)


def test_extra_relation_violates_unique_relation_bullet():
    pair = make_pair([str(i) for i in range(1, 8)], EXAMPLE_ARROWS, EXAMPLE_RELATIONS + [("a1", "a2")])
    report = validate_gentle(pair)
    assert not report.ok
    assert any("a2" in v and "relation" in v for v in report.violations)


def test_dangling_arrow_is_a_structural_error():
    with pytest.raises(StructureError):
        make_pair(["1"], [("x", "1", "9")])


def test_nonzero_paths_from_4_to_7(fx):
    labels = {p.arrows for p in fx.paths_between("4", "7")}
    assert labels == {("a4", "a7")}


def test_sink_has_only_its_empty_path(fx):
    assert fx.paths_from("3") == (Path.trivial("3"),)


def test_nonzero_path_census(fx):
    groups = nonzero_paths(fx)
    every = [p for ps in groups.values() for p in ps]
    by_length = {}
    for p in every:
        by_length.setdefault(len(p), set()).add((p.source, p.arrows))
    assert len(by_length[0]) == 7
    assert len(by_length[1]) == 8
    assert {a for _, a in by_length[2]} == {("a1", "a2"), ("a6", "a5"), ("a4", "a7")}
    assert max(by_length) == 2


def test_oriented_cycle_without_relations_is_infinite():
    pair = make_pair(["1", "2"], [("x", "1", "2"), ("y", "2", "1")])
    with pytest.raises(InfiniteDimensionalError):
        nonzero_paths(pair)


def test_quadratic_dual_of_example(fx):
    dual = quadratic_dual(fx)
    assert set(dual.relations) == EXAMPLE_DUAL_RELATIONS
    assert all(a.degree == 1 for a in dual.arrows)
    assert validate_gentle(dual).ok


def test_double_dual_of_example(fx):
    assert same_pair(quadratic_dual(quadratic_dual(fx)), fx)


def test_maximal_relation_paths(fx):
    assert {p.arrows for p in maximal_relation_paths(fx, "4")} == {("a3",), ("a4", "a6")}
    assert maximal_relation_paths(fx, "3") == []
    assert [p.arrows for p in maximal_relation_paths(fx, "5")] == [("a5", "a2")]


def test_compose_paths(fx):
    assert compose_paths(fx, fx.path(["a4"]), fx.path(["a7"])).arrows == ("a4", "a7")
    assert compose_paths(fx, fx.path(["a4"]), fx.path(["a6"])) is None
    assert compose_paths(fx, Path.trivial("4"), fx.path(["a4"])).arrows == ("a4",)
    with pytest.raises(NotComposableError):
        compose_paths(fx, fx.path(["a4"]), fx.path(["a1"]))


def test_fans_of_example(fx):
    fans = fx.fan_list
    assert len(fans) == 6
    a3_fan = next(f for f in fans if f.arrows == ("a3",))
    assert {v for v, _ in a3_fan.ends} == {"4", "3"}
    assert sorted(f.arrows for f in fans if f.arrows) == [("a1", "a2"), ("a3",), ("a4", "a7"), ("a6", "a5"), ("a8",)]


def test_single_vertex_has_two_singleton_fans():
    pair = make_pair(["x"], [])
    assert [f.ends for f in pair.fan_list] == [(("x", 0),), (("x", 1),)]


def test_algebra_json_round_trip_is_bit_exact(fx):
    text = dumps_pair(fx)
    assert dumps_pair(loads_pair(text)) == text
    assert same_pair(loads_pair(text), fx)


def test_algebra_parser_rejects_unknown_keys():
    with pytest.raises(ValueError):
        pair_from_json({"vertices": ["1"], "arrows": [], "relations": [], "extra": 1})


@given(seeds)
def test_dual_is_an_involution(seed):
    pair = pair_from_seed(seed, 12)
    assert same_pair(quadratic_dual(quadratic_dual(pair)), pair)


@given(seeds)
def test_maximal_relation_paths_start_with_each_outgoing_arrow_once(seed):
    pair = pair_from_seed(seed)
    for v in pair.vertices:
        paths = maximal_relation_paths(pair, v)
        assert len(paths) <= 2
        assert sorted(p.arrows[0] for p in paths) == sorted(a.id for a in pair.out_arrows[v])


@given(seeds)
def test_every_arrow_and_arc_end_lies_in_exactly_one_fan(seed):
    pair = pair_from_seed(seed)
    arrows = [a for f in pair.fan_list for a in f.arrows]
    ends = [e for f in pair.fan_list for e in f.ends]
    assert sorted(arrows) == sorted(a.id for a in pair.arrows)
    assert sorted(ends) == sorted((v, s) for v in pair.vertices for s in (0, 1))
    for f in pair.fan_list:
        if f.arrows:
            p = pair.path(f.arrows)
            assert pair.is_nonzero(p)
            before = [b for b in pair.in_arrows[p.source] if not pair.is_relation(b.id, p.arrows[0])]
            after = [b for b in pair.out_arrows[p.target] if not pair.is_relation(p.arrows[-1], b.id)]
            assert not before and not after


@given(seeds)
def test_nonzero_paths_are_closed_under_subpaths(seed):
    pair = pair_from_seed(seed)
    known = {(p.source, p.arrows) for ps in nonzero_paths(pair).values() for p in ps}
    for ps in nonzero_paths(pair).values():
        for p in ps:
            for i in range(len(p.arrows)):
                for j in range(i + 1, len(p.arrows) + 1):
                    sub = pair.path(p.arrows[i:j])
                    assert (sub.source, sub.arrows) in known
