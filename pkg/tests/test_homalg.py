import random
from fractions import Fraction

import pytest
import sympy
from sympy.polys.matrices import DomainMatrix
from hypothesis import given, strategies as st

from ggk.gentle_core import Path
from ggk.homalg import (
    DEFAULT_PRIME,
    DgMorphism,
    HomError,
    add,
    compose,
    hom_complex,
    hom_differential,
    hom_dims,
    identity,
    is_closed,
    is_quasi_iso,
    rank,
    thread_total_module,
    underlying_cohomology,
)
from ggk.string_model import L, R, build_x_module, make_string, projective_module, simple_module

from conftest import pair_from_seed, seeds, strings_from_seed

PS4 = make_string([5, 6, 4, 3], [2, 1, 0, 1], [(R, ["a6"]), (R, ["a4"]), (L, ["a3"])])


def _sympy_rank(rows, width):
    if not rows:
        return 0
    return sympy.Matrix([[row.get(j, 0) for j in range(width)] for row in rows]).rank()


def _rank_mod_p(dense, p):
    field = sympy.GF(p)
    return DomainMatrix([[field(int(x)) for x in row] for row in dense], (len(dense), len(dense[0])), field).rank()


@given(st.lists(st.dictionaries(st.integers(0, 6), st.integers(-3, 3).map(Fraction), max_size=5), max_size=7))
def test_rank_agrees_with_sympy_over_q(rows):
    rows = [{k: v for k, v in r.items() if v} for r in rows]
    assert rank(rows) == _sympy_rank(rows, 7)


@given(st.lists(st.dictionaries(st.integers(0, 5), st.integers(-40, 40).map(Fraction), max_size=4), max_size=6))
def test_rank_agrees_with_sympy_mod_p(rows):
    p = 7
    rows = [{k: v for k, v in r.items() if v} for r in rows]
    assert rank(rows, p) == _rank_mod_p([[r.get(j, 0) for j in range(6)] for r in rows] or [[0] * 6], p)


def test_rank_mod_p_can_drop():
    assert rank([{0: Fraction(1), 1: Fraction(2)}, {0: Fraction(2), 1: Fraction(4 + 7)}]) == 2
    assert rank([{0: Fraction(1), 1: Fraction(2)}, {0: Fraction(2), 1: Fraction(4 + 7)}], 7) == 1


def test_hom_between_projectives_counts_paths(fx):
    assert hom_dims(projective_module(fx, "7"), projective_module(fx, "4")) == {0: 1}
    assert hom_dims(projective_module(fx, "5"), projective_module(fx, "4")) == {}
    assert hom_dims(projective_module(fx, "4"), projective_module(fx, "4", 2)) == {-2: 1}


def test_generator_of_degree_one_example(fx):
    g1 = build_x_module(fx, make_string([1], [0], []))
    g2 = build_x_module(fx, make_string([2], [0], []))
    assert hom_dims(g2, g1) == {0: 1}


def test_hom_from_resolution_of_4_to_p4(fx):
    m = build_x_module(fx, PS4)
    p4 = projective_module(fx, "4")
    # the identity component on P4 is not closed because a3 and a4 land on it
    assert hom_dims(m, p4) == {1: 1}
    assert hom_dims(p4, m) == {0: 1}


def test_resolution_of_4_resolves_the_simple(fx):
    m = build_x_module(fx, PS4)
    assert underlying_cohomology(m) == {("4", 0): 1}
    ext = {v: hom_dims(m, simple_module(fx, v)) for v in fx.vertices}
    assert ext == {"1": {}, "2": {}, "3": {1: 1}, "4": {0: 1}, "5": {2: 1}, "6": {1: 1}, "7": {}}


def test_underlying_cohomology_of_p4(fx):
    assert underlying_cohomology(projective_module(fx, "4")) == {("3", 0): 1, ("4", 0): 1, ("6", 0): 1, ("7", 0): 1}


def test_hom_to_shifted_simple_is_concentrated(fx):
    assert hom_dims(projective_module(fx, "2", 3), simple_module(fx, "2", 1)) == {2: 1}


def test_simple_module_is_a_target_only(fx):
    with pytest.raises(HomError):
        hom_complex(simple_module(fx, "2"), projective_module(fx, "2"))


def test_quasi_iso_needs_closed_degree_zero(fx):
    m = build_x_module(fx, PS4)
    assert is_quasi_iso(identity(m))
    p4 = projective_module(fx, "4")
    open_map = DgMorphism(m, p4, 0, {(2, 0): {Path.trivial("4"): Fraction(1)}})
    assert not is_closed(open_map)
    with pytest.raises(HomError):
        is_quasi_iso(open_map)
    with pytest.raises(HomError):
        is_quasi_iso(DgMorphism(m, m, 1, {}))


def test_inclusion_of_p4_is_not_a_quasi_iso(fx):
    m = build_x_module(fx, PS4)
    p4 = projective_module(fx, "4")
    inc = DgMorphism(p4, m, 0, {(0, 2): {Path.trivial("4"): Fraction(1)}})
    assert is_closed(inc)
    assert not is_quasi_iso(inc)


def test_thread_total_rejects_open_maps(fx):
    a = build_x_module(fx, PS4)
    b = projective_module(fx, "4", -1)
    f = DgMorphism(a, b, 1, {(2, 0): {Path.trivial("4"): Fraction(1)}})
    f.check_degrees()
    with pytest.raises(HomError, match="not closed"):
        thread_total_module([a, b], [f])


def _euler(c):
    return sum((-1) ** (d % 2) * len(b) for d, b in c.basis.items())


@given(seeds)
def test_hom_complex_squares_to_zero_and_euler_characteristic_matches(seed):
    pair = pair_from_seed(seed, 6)
    s, t = strings_from_seed(seed, pair, 2, 4)
    m, n = build_x_module(pair, s), build_x_module(pair, t)
    c = hom_complex(m, n)
    assert c.check_square_zero()
    dims = hom_dims(m, n)
    assert sum((-1) ** (d % 2) * k for d, k in dims.items()) == _euler(c)


@given(seeds)
def test_rationals_and_prime_field_agree(seed):
    pair = pair_from_seed(seed, 6)
    s, t = strings_from_seed(seed, pair, 2, 4)
    m, n = build_x_module(pair, s), build_x_module(pair, t)
    assert hom_dims(m, n) == hom_dims(m, n, DEFAULT_PRIME)
    assert underlying_cohomology(m) == underlying_cohomology(m, DEFAULT_PRIME)


@given(seeds)
def test_hom_from_projective_is_underlying_cohomology(seed):
    pair = pair_from_seed(seed, 6)
    s = strings_from_seed(seed, pair, 1, 4)[0]
    m = build_x_module(pair, s)
    h = underlying_cohomology(m)
    for i in pair.vertices:
        expected = {d: k for (v, d), k in h.items() if v == i}
        assert hom_dims(projective_module(pair, i), m) == expected


@given(seeds)
def test_differential_is_a_derivation_of_composition(seed):
    rng = random.Random(seed)
    pair = pair_from_seed(seed, 6)
    a, b, c = strings_from_seed(seed, pair, 3, 4)
    ma, mb, mc = (build_x_module(pair, x) for x in (a, b, c))
    cf, cg = hom_complex(ma, mb), hom_complex(mb, mc)
    if not cf.basis or not cg.basis:
        return
    df, dg = rng.choice(sorted(cf.basis)), rng.choice(sorted(cg.basis))
    f = cf.element(df, {i: Fraction(rng.randint(-2, 2)) for i in range(len(cf.basis[df]))})
    g = cg.element(dg, {i: Fraction(rng.randint(-2, 2)) for i in range(len(cg.basis[dg]))})
    lhs = hom_differential(compose(g, f))
    # d(f) = f.d_M - (-1)^|f| d_N.f is -(-1)^|f| times the textbook sign, hence the twist on the first term
    rhs = add(compose(hom_differential(g), f).scaled((-1) ** (df % 2)), compose(g, hom_differential(f)))
    assert add(lhs, rhs, -1).is_zero()
