"""Batch verification: every check compares two independent computations."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .dissection import algebra_from_dissection, dual_pair_of
from .fixtures import EXAMPLE_DUAL_RELATIONS, EXAMPLE_RELATIONS, example_dissection, example_pair
from .gentle_core import GentlePair, pair_to_json, quadratic_dual, same_pair
from .homalg import (
    DEFAULT_PRIME,
    compose,
    equal_morphisms,
    fingerprint,
    hom_dims,
    is_closed,
    is_quasi_iso,
    underlying_cohomology,
)
from .intersections import (
    IntersectionError,
    all_intersections,
    boundary_intersections,
    compose_intersections,
    int_table,
    int_with_dual_simple,
    morphism_from_intersection,
)
from .koszul import (
    Thread,
    adjacent_angle_pairs,
    half_rotate,
    half_rotate_open,
    homotopy_equivalence_pair,
    koszul_object,
    simple_resolution,
    smooth_thread,
    strong_formality_check,
    thread_total,
)
from .random_gen import random_dg_thread, random_pair, random_string
from .string_model import (
    GradedString,
    _unshifted,
    build_x_module,
    generator_string,
    projective_module,
    same_arc,
    string_to_json,
)


@dataclass
class CriterionResult:
    name: str
    passed: bool
    checked: int
    mismatches: list[dict] = field(default_factory=list)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.checked} instances, {len(self.mismatches)} mismatches, {self.seconds:.2f}s"


@dataclass
class VerifyReport:
    seed: int
    field: str
    results: list[CriterionResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "field": self.field,
            "passed": self.passed,
            "criteria": [
                {"name": r.name, "passed": r.passed, "checked": r.checked,
                 "seconds": round(r.seconds, 3), "mismatches": r.mismatches[:5]}
                for r in self.results
            ],
        }


def _timed(name: str, body) -> CriterionResult:
    start = time.perf_counter()
    checked, mismatches = body()
    if not checked and not mismatches:
        mismatches = [{"why": "no instances were checked"}]
    return CriterionResult(name, not mismatches, checked, mismatches, time.perf_counter() - start)


def _repro(pair: GentlePair, **strings) -> dict:
    out = {"algebra": pair_to_json(pair)}
    for k, v in strings.items():
        out[k] = string_to_json(v) if isinstance(v, GradedString) else v
    return out


def distinct_strings(rng: random.Random, pair: GentlePair, count: int, max_len: int = 5, over: str = "primal",
                     tries: int = 2000) -> list[GradedString]:
    """Up to ``count`` random strings, pairwise different as arcs."""
    out: list[GradedString] = []
    seen = set()
    for _ in range(tries):
        if len(out) >= count:
            break
        s = random_string(rng, pair, max_len, over=over)
        key = _unshifted(s)
        if key not in seen:
            seen.add(key)
            out.append(s)
    return out


def _random_pairs(rng: random.Random, count: int, max_vertices: int, min_vertices: int = 2) -> list[GentlePair]:
    return [random_pair(rng, max_vertices, min_vertices=min_vertices)[0] for _ in range(count)]


# ---- criteria --------------------------------------------------------------------------------

def check_fixture(pair_from_file: GentlePair | None = None, dual_from_file: GentlePair | None = None) -> CriterionResult:
    def body():
        bad = []
        primal = pair_from_file or algebra_from_dissection(example_dissection())
        dual = dual_from_file or dual_pair_of(example_dissection())
        if not same_pair(primal, example_pair()):
            bad.append({"expected": pair_to_json(example_pair()), "got": pair_to_json(primal)})
        if set(primal.relations) != set(EXAMPLE_RELATIONS):
            bad.append({"relations": list(primal.relations)})
        if set(dual.relations) != EXAMPLE_DUAL_RELATIONS:
            bad.append({"dual_relations": list(dual.relations)})
        if any(a.degree != 1 for a in dual.arrows):
            bad.append({"dual_degrees": [a.degree for a in dual.arrows]})
        return 4, bad
    return _timed("fixture reproduction", body)


def check_dual_involution(seed: int, count: int = 100, max_vertices: int = 12) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        bad = []
        for pair in _random_pairs(rng, count, max_vertices, 1):
            back = quadratic_dual(quadratic_dual(pair))
            if not same_pair(back, pair):
                bad.append(_repro(pair))
        return count, bad
    return _timed("quadratic dual involution", body)


def check_resolutions(seed: int, count: int = 50, max_vertices: int = 8, prime: int | None = None) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        bad = []
        checked = 0
        for pair in [example_pair()] + _random_pairs(rng, count, max_vertices, 1):
            for v in pair.vertices:
                s = simple_resolution(pair, v)
                checked += 1
                if underlying_cohomology(build_x_module(pair, s), prime) != {(v, 0): 1}:
                    bad.append(_repro(pair, vertex=v, resolution=s))
        return checked, bad
    return _timed("resolutions of simples", body)


def check_strong_formality(seed: int, count: int = 50, max_vertices: int = 8) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        bad = []
        checked = 0
        for pair in [example_pair()] + _random_pairs(rng, count, max_vertices, 1):
            checked += len(adjacent_angle_pairs(pair)) or 1
            if not strong_formality_check(pair):
                bad.append(_repro(pair))
        return checked, bad
    return _timed("strong formality of resolutions", body)


def _int_dim_pairs(rng, pair, n_pairs, max_len):
    strings = distinct_strings(rng, pair, 2 * n_pairs + 2, max_len)
    out = []
    for i in range(len(strings)):
        for j in range(len(strings)):
            if i != j and len(out) < n_pairs:
                out.append((strings[i], strings[j]))
    return out


def check_int_dim(seed: int, fixture_pairs: int = 30, random_pairs: int = 100, max_vertices: int = 7,
                  prime: int | None = None) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        bad = []
        checked = 0
        fx = example_pair()
        corpus = [(fx, s, t) for s, t in _int_dim_pairs(rng, fx, fixture_pairs, 5)]
        while len(corpus) < fixture_pairs + random_pairs:
            pair = random_pair(rng, max_vertices, min_vertices=2)[0]
            strings = distinct_strings(rng, pair, 2, 5)
            if len(strings) == 2:
                corpus.append((pair, strings[0], strings[1]))
        for pair, s, t in corpus:
            checked += 1
            left = int_table(pair, s, t)
            right = hom_dims(build_x_module(pair, s), build_x_module(pair, t), prime)
            if left != right:
                bad.append(_repro(pair, source=s, target=t, intersections=left, hom=right))
        return checked, bad
    return _timed("intersections equal Hom dimensions", body)


def collect_threads(seed: int, count: int, max_vertices: int = 6) -> list[tuple[GentlePair, Thread]]:
    rng = random.Random(seed)
    out = []
    attempts = 0
    while len(out) < count and attempts < 50 * count:
        attempts += 1
        pair = example_pair() if attempts % 2 else random_pair(rng, max_vertices, min_vertices=2)[0]
        length = 2 + len(out) % 3
        try:
            out.append((pair, random_dg_thread(rng, pair, length)))
        except RuntimeError:
            continue
    return out


def check_smoothing(seed: int, count: int = 12, probes: int = 5, prime: int | None = None) -> CriterionResult:
    def body():
        rng = random.Random(seed + 1)
        bad = []
        threads = collect_threads(seed, count)
        for pair, th in threads:
            total = thread_total(pair, th)
            result = smooth_thread(pair, th)
            smoothed = build_x_module(pair, result)
            probe_mods = [projective_module(pair, v) for v in pair.vertices]
            probe_mods += [build_x_module(pair, s) for s in distinct_strings(rng, pair, probes, 4)]
            repro = lambda why: _repro(pair, why=why, thread=[string_to_json(s) for s in th.strings],
                                       ends=[list(e) for e in th.ends], result=result)
            if underlying_cohomology(total, prime) != underlying_cohomology(smoothed, prime):
                bad.append(repro("underlying cohomology"))
            elif fingerprint(total, probe_mods, prime) != fingerprint(smoothed, probe_mods, prime):
                bad.append(repro("Hom tables"))
            if len(th.strings) == 2:
                s, t = th.strings
                e1, e2 = th.ends[0]
                _, _, chi, psi = homotopy_equivalence_pair(pair, s, e1, t, e2)
                if not (is_closed(chi) and is_closed(psi)):
                    bad.append(repro("chi/psi not closed"))
                elif not (is_quasi_iso(chi, prime) and is_quasi_iso(psi, prime)):
                    bad.append(repro("chi/psi not quasi-isomorphisms"))
        return len(threads), bad
    return _timed("smoothing of dg threads", body)


def koszul_corpus(seed: int, count: int = 24, max_vertices: int = 6) -> list[tuple[GentlePair, GradedString, GradedString]]:
    """(pair, open arc, closed arc) triples; every third closed arc is a dual generator."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        pair = example_pair() if len(out) % 2 == 0 else random_pair(rng, max_vertices, min_vertices=2)[0]
        dual = quadratic_dual(pair)
        sigma = random_string(rng, pair, 5)
        if len(out) % 3 == 0:
            eta = generator_string(rng.choice(pair.vertices), 0, "dual")
        else:
            eta = random_string(rng, dual, 4, over="dual")
        out.append((pair, sigma, eta))
    return out


def check_koszul(seed: int, count: int = 24, prime: int | None = None) -> CriterionResult:
    def body():
        bad = []
        for pair, sigma, eta in koszul_corpus(seed, count):
            rotated = half_rotate(pair, eta)
            xs = build_x_module(pair, sigma)
            hom = hom_dims(xs, koszul_object(pair, eta), prime)
            if same_arc(sigma, rotated):
                ints = None  # self intersections are not counted
            else:
                ints = int_table(pair, sigma, rotated)
                if ints != hom:
                    bad.append(_repro(pair, open=sigma, closed=eta, rotated=rotated, hom=hom, intersections=ints))
                    continue
            if len(eta.vertices) == 1:
                # Hom(P_i[m], S_i[n]) sits in degree m - n
                direct = {rho - eta.shifts[0]: c
                          for rho, c in int_with_dual_simple(pair, sigma, eta.vertices[0]).items()}
                if direct != hom:
                    bad.append(_repro(pair, open=sigma, closed=eta, hom=hom, crossings=direct))
        return count, bad
    return _timed("Koszul intersections equal Hom dimensions", body)


def check_cross_duality(seed: int, count: int = 24, prime: int | None = None) -> CriterionResult:
    def body():
        bad = []
        for pair, sigma, eta in koszul_corpus(seed, count):
            dual = quadratic_dual(pair)
            primal_side = hom_dims(build_x_module(pair, sigma), koszul_object(pair, eta), prime).get(0, 0)
            closed = half_rotate_open(pair, sigma)
            dual_side = hom_dims(build_x_module(dual, eta), build_x_module(dual, closed), prime).get(1, 0)
            if primal_side != dual_side:
                bad.append(_repro(pair, open=sigma, closed=eta, degree0=primal_side, degree1_dual=dual_side))
        return count, bad
    return _timed("cross duality", body)


def composable_triples(pair: GentlePair, strings: list[GradedString]):
    """All ``(alpha, beta, alpha'')`` with ``alpha: a -> b`` and ``beta: b -> c`` meeting at one end of ``b``."""
    for a in strings:
        for b in strings:
            if a is b or same_arc(a, b):
                continue
            for r1 in boundary_intersections(pair, a, b):
                if r1.source is not a:
                    continue
                for c in strings:
                    if c is a or c is b or same_arc(c, a) or same_arc(c, b):
                        continue
                    for r2 in boundary_intersections(pair, b, c):
                        if r2.source is b and r2.source_end == r1.target_end:
                            try:
                                yield r1, r2, compose_intersections(pair, r1, r2)
                            except IntersectionError:
                                continue


def check_morphisms(seed: int, min_triples: int = 10, max_triples: int = 200) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        pair = example_pair()
        strings = [generator_string(v) for v in pair.vertices] + distinct_strings(rng, pair, 12, 4)
        strings = [s for i, s in enumerate(strings) if not any(same_arc(s, t) for t in strings[:i])]
        bad = []
        checked = 0
        modules = {id(s): build_x_module(pair, s) for s in strings}
        for s in strings:
            for t in strings:
                if s is t:
                    continue
                for rec in all_intersections(pair, s, t):
                    if rec.kind == "interior":
                        checked += 1
                        partner = [r for r in all_intersections(pair, t, s) if r.kind == "interior"
                                   and r.case == rec.case and sorted(r.source_positions) == sorted(rec.target_positions)
                                   and sorted(r.target_positions) == sorted(rec.source_positions)
                                   and r.index == 1 - rec.index]
                        if not partner:
                            bad.append(_repro(pair, why="interior pair", source=s, target=t))
                    elif rec.source is s:
                        checked += 1
                        f = morphism_from_intersection(pair, rec, modules[id(s)], modules[id(t)])
                        if not is_closed(f):
                            bad.append(_repro(pair, why="not closed", source=s, target=t, record=rec.describe()))
        triples = 0
        for r1, r2, r3 in composable_triples(pair, strings):
            if triples >= max_triples:
                break
            triples += 1
            a, b, c = r1.source, r1.target, r2.target
            f = morphism_from_intersection(pair, r1, modules[id(a)], modules[id(b)])
            g = morphism_from_intersection(pair, r2, modules[id(b)], modules[id(c)])
            h = morphism_from_intersection(pair, r3, modules[id(a)], modules[id(c)])
            if not equal_morphisms(compose(g, f), h):
                bad.append(_repro(pair, why="composition", a=a, b=b, c=c))
        if triples < min_triples:
            bad.append({"why": f"only {triples} composable triples found"})
        return checked + triples, bad
    return _timed("morphism algebra", body)


SUITES = {
    "fixture": ["fixture"],
    "dual": ["dual"],
    "resolution": ["resolution", "formality"],
    "int-dim": ["int-dim", "morphisms"],
    "smoothing": ["smoothing"],
    "koszul": ["koszul", "cross-duality"],
}
SUITES["all"] = [c for name in ("fixture", "dual", "resolution", "int-dim", "smoothing", "koszul") for c in SUITES[name]]


def run_criterion(name: str, seed: int, prime: int | None) -> CriterionResult:
    runners = {
        "fixture": lambda: check_fixture(),
        "dual": lambda: check_dual_involution(seed),
        "resolution": lambda: check_resolutions(seed, prime=prime),
        "formality": lambda: check_strong_formality(seed),
        "int-dim": lambda: check_int_dim(seed, prime=prime),
        "morphisms": lambda: check_morphisms(seed),
        "smoothing": lambda: check_smoothing(seed, prime=prime),
        "koszul": lambda: check_koszul(seed, prime=prime),
        "cross-duality": lambda: check_cross_duality(seed, prime=prime),
    }
    return runners[name]()


def run_suite(suite: str = "all", seed: int = 0, field_name: str = "q") -> VerifyReport:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    prime = DEFAULT_PRIME if field_name == "p" else None
    return VerifyReport(seed, field_name, [run_criterion(c, seed, prime) for c in SUITES[suite]])
