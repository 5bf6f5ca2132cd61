import json
from fractions import Fraction

import pytest
from hypothesis import given

from ggk.homalg import square_zero
from ggk.string_model import (
    L,
    R,
    StringError,
    build_x_module,
    canonical_form,
    crossings,
    end_descriptor,
    generator_string,
    make_string,
    module_signature,
    same_arc,
    shift_string,
    string_ends,
    string_from_json,
    string_to_json,
    validate_string,
)

from conftest import pair_from_seed, seeds, strings_from_seed

PS4 = make_string([5, 6, 4, 3], [2, 1, 0, 1], [(R, ["a6"]), (R, ["a4"]), (L, ["a3"])])


def test_resolution_string_of_4_is_valid(fx):
    assert validate_string(fx, PS4).ok


@pytest.mark.parametrize("bad, fragment", [
    (make_string([4, 5], [0, 1], [(R, ["a4", "a6"])]), "is zero"),
    (make_string([5, 6, 4, 3], [2, 1, 0, 2], [(R, ["a6"]), (R, ["a4"]), (L, ["a3"])]), "grading"),
    (make_string([7, 6, 4], [2, 1, 0], [(R, ["a7"]), (R, ["a4"])]), "not a relation"),
    (make_string([6, 4, 6], [1, 0, 1], [(R, ["a4"]), (L, ["a4"])]), "not reduced"),
    (make_string([6, 4, 7], [1, 0, 1], [(R, ["a4"]), (L, ["a4", "a7"])]), "not reduced"),
    (make_string([4, 6], [0, 1], [(R, ["zz"])]), "unknown arrow"),
    (make_string([4, 7], [0, 1], [(R, ["a4"])]), "expected"),
])
def test_invalid_strings_are_reported(fx, bad, fragment):
    report = validate_string(fx, bad)
    assert not report.ok
    assert any(fragment in p for p in report.problems)


def test_same_direction_letters_through_a_relation_are_allowed(fx):
    assert validate_string(fx, make_string([5, 6, 4], [2, 1, 0], [(R, ["a6"]), (R, ["a4"])])).ok


def test_x_module_of_resolution_string(fx):
    m = build_x_module(fx, PS4)
    assert m.generators == [("5", 2), ("6", 1), ("4", 0), ("3", 1)]
    diff = {k: {p.arrows: c for p, c in v.items()} for k, v in m.differential.items()}
    assert diff == {(0, 1): {("a6",): 1}, (1, 2): {("a4",): 1}, (3, 2): {("a3",): 1}}
    assert square_zero(m)


def test_ends_of_resolution_string(fx):
    assert string_ends(fx, PS4) == {"head": ("5", 1), "tail": ("3", 0)}
    assert end_descriptor(fx, PS4, "tail") == (0, 2)
    assert end_descriptor(fx, PS4, "head") == (5, 0)


def test_ends_of_generator_string(fx):
    g1 = generator_string("1")
    assert end_descriptor(fx, g1, "head") == (0, 0)
    assert end_descriptor(fx, g1, "tail") == (4, 0)


def test_canonical_form_picks_one_reading():
    s = make_string([2, 1], [1, 0], [(R, ["a1"])])
    c = canonical_form(s)
    assert (c.vertices, c.shifts, [(l.direction, l.path) for l in c.letters]) == (("1", "2"), (0, 1), [(L, ("a1",))])
    assert canonical_form(s.reversed()) == c


def test_arc_json_round_trip_and_strictness():
    data = string_to_json(PS4)
    assert string_from_json(json.loads(json.dumps(data))) == PS4
    with pytest.raises(StringError):
        string_from_json({**data, "colour": "red"})
    with pytest.raises(StringError):
        string_from_json({**data, "over": "both"})


@given(seeds)
def test_random_strings_are_valid_with_square_zero_modules(seed):
    pair = pair_from_seed(seed)
    for s in strings_from_seed(seed, pair, 3):
        assert validate_string(pair, s).ok
        m = build_x_module(pair, s)
        assert square_zero(m)


@given(seeds)
def test_reversal_gives_the_same_module_up_to_relabelling(seed):
    pair = pair_from_seed(seed)
    s = strings_from_seed(seed, pair, 1)[0]
    rev = s.reversed()
    assert validate_string(pair, rev).ok
    m, n = build_x_module(pair, s), build_x_module(pair, rev)
    r = len(s)
    relabelled = {(r - 1 - u, r - 1 - v): c for (u, v), c in m.differential.items()}
    assert n.generators == m.generators[::-1]
    assert relabelled == n.differential
    assert same_arc(s, rev)
    assert canonical_form(s) == canonical_form(rev)


@given(seeds)
def test_shift_moves_every_generator(seed):
    pair = pair_from_seed(seed)
    s = strings_from_seed(seed, pair, 1)[0]
    t = shift_string(s, 3)
    assert validate_string(pair, t).ok
    assert same_arc(s, t)
    assert module_signature(build_x_module(pair, t)) == module_signature(build_x_module(pair, s).shifted(3))


@given(seeds)
def test_crossings_follow_the_fans(seed):
    pair = pair_from_seed(seed)
    s = strings_from_seed(seed, pair, 1)[0]
    steps = crossings(pair, s)
    for (enter, leave), v in zip(steps, s.vertices):
        assert enter[0] == leave[0] == v
        assert {enter[1], leave[1]} == {0, 1}
    for (_, leave), (enter, _) in zip(steps, steps[1:]):
        assert pair.fan_position[leave][0] == pair.fan_position[enter][0]
        assert leave != enter
