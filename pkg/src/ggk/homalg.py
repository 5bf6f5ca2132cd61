"""Hom complexes between string dg modules and exact cohomology.

Conventions: a map between generators ``(i, m) -> (j, n)`` labelled by a path
``q`` from ``j`` to ``i`` has degree ``|q| + m - n``; composition is path
concatenation; the Hom differential is ``d(f) = f d_M - (-1)^{|f|} d_N f``.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .gentle_core import GentlePair, Path, compose_paths
from .string_model import DgModule

DEFAULT_PRIME = 32003

LinComb = dict[Path, Fraction]


class HomError(ValueError):
    pass


# ---- exact linear algebra ----------------------------------------------------------

def _normalize(x, p: int | None):
    if p is None:
        return Fraction(x)
    x = Fraction(x)
    return (x.numerator * pow(x.denominator, -1, p)) % p


def rank(rows: list[dict[int, Fraction]], p: int | None = None) -> int:
    """Rank of a sparse matrix given as a list of ``{column: value}`` rows.

    Exact over the rationals (``p=None``) or over the prime field ``GF(p)``.
    """
    pivots: dict[int, dict[int, object]] = {}
    r = 0
    for row in rows:
        vec = {c: _normalize(v, p) for c, v in row.items()}
        vec = {c: v for c, v in vec.items() if v != 0}
        while vec:
            col = min(vec)
            if col not in pivots:
                inv = (1 / vec[col]) if p is None else pow(vec[col], -1, p)
                if p is None:
                    vec = {c: v * inv for c, v in vec.items()}
                else:
                    vec = {c: (v * inv) % p for c, v in vec.items()}
                pivots[col] = vec
                r += 1
                break
            factor = vec[col]
            piv = pivots[col]
            for c, v in piv.items():
                nv = vec.get(c, 0) - factor * v
                if p is not None:
                    nv %= p
                if nv == 0:
                    vec.pop(c, None)
                else:
                    vec[c] = nv
    return r


# ---- path-valued matrices ----------------------------------------------------------

def _add(target: LinComb, path: Path, coeff) -> None:
    val = target.get(path, 0) + coeff
    if val == 0:
        target.pop(path, None)
    else:
        target[path] = val


def _mul_lincomb(pair: GentlePair, outer: LinComb, inner: LinComb, top_only: bool = False) -> LinComb:
    """``outer`` applied after ``inner``: the path product ``outer * inner``."""
    out: LinComb = {}
    for q2, c2 in outer.items():
        for q1, c1 in inner.items():
            q = compose_paths(pair, q2, q1)
            if q is None or (top_only and q.arrows):
                continue
            _add(out, q, c2 * c1)
    return out


@dataclass
class DgMorphism:
    """A homogeneous map of the given degree between two dg modules."""

    source: DgModule
    target: DgModule
    degree: int
    components: dict[tuple[int, int], LinComb] = field(default_factory=dict)

    def clean(self) -> "DgMorphism":
        self.components = {k: v for k, v in self.components.items() if v}
        return self

    def is_zero(self) -> bool:
        return not any(self.components.values())

    def scaled(self, c) -> "DgMorphism":
        return DgMorphism(self.source, self.target, self.degree,
                          {k: {p: x * c for p, x in v.items()} for k, v in self.components.items()}).clean()

    def check_degrees(self) -> None:
        pair = self.source.pair
        for (u, v), comb in self.components.items():
            for q in comb:
                if q.source != self.target.vertex(v) or q.target != self.source.vertex(u):
                    raise HomError(f"component {u}->{v}: path {q.label()} has wrong endpoints")
                d = pair.degree(q) + self.source.shift(u) - self.target.shift(v)
                if d != self.degree:
                    raise HomError(f"component {u}->{v}: degree {d}, expected {self.degree}")


def compose(g: DgMorphism, f: DgMorphism) -> DgMorphism:
    """``g o f`` (first ``f``)."""
    pair = f.source.pair
    by_src: dict[int, list[tuple[int, LinComb]]] = defaultdict(list)
    for (v, w), comb in g.components.items():
        by_src[v].append((w, comb))
    comps: dict[tuple[int, int], LinComb] = {}
    for (u, v), comb_f in f.components.items():
        for w, comb_g in by_src.get(v, ()):
            prod = _mul_lincomb(pair, comb_g, comb_f, g.target.top_only)
            acc = comps.setdefault((u, w), {})
            for q, c in prod.items():
                _add(acc, q, c)
    return DgMorphism(f.source, g.target, f.degree + g.degree, comps).clean()


def add(f: DgMorphism, g: DgMorphism, c=1) -> DgMorphism:
    """``f + c * g``."""
    if f.degree != g.degree and not f.is_zero() and not g.is_zero():
        raise HomError("cannot add morphisms of different degrees")
    comps = {k: dict(v) for k, v in f.components.items()}
    for k, v in g.components.items():
        acc = comps.setdefault(k, {})
        for q, x in v.items():
            _add(acc, q, x * c)
    return DgMorphism(f.source, f.target, f.degree, comps).clean()


def differential_morphism(m: DgModule) -> DgMorphism:
    comps = {k: dict(v) for k, v in m.differential.items()}
    return DgMorphism(m, m, 1, comps).clean()


def identity(m: DgModule) -> DgMorphism:
    return DgMorphism(m, m, 0, {(u, u): {Path.trivial(m.vertex(u)): Fraction(1)} for u in range(len(m.generators))})


def zero_morphism(m: DgModule, n: DgModule, degree: int = 0) -> DgMorphism:
    return DgMorphism(m, n, degree, {})


def hom_differential(f: DgMorphism) -> DgMorphism:
    """``d(f) = f d_M - (-1)^{|f|} d_N f``."""
    left = compose(f, differential_morphism(f.source))
    right = compose(differential_morphism(f.target), f)
    sign = -1 if f.degree % 2 == 0 else 1
    out = add(left, right, sign)
    out.degree = f.degree + 1
    return out


def is_closed(f: DgMorphism) -> bool:
    return hom_differential(f).is_zero()


def square_zero(m: DgModule) -> bool:
    d = differential_morphism(m)
    return compose(d, d).is_zero()


def equal_morphisms(f: DgMorphism, g: DgMorphism) -> bool:
    return add(f, g, -1).is_zero()


# ---- Hom complexes -------------------------------------------------------------------

@dataclass
class HomComplex:
    source: DgModule
    target: DgModule
    basis: dict[int, list[tuple[int, int, Path]]]
    field_prime: int | None = None

    def index(self, degree: int) -> dict[tuple[int, int, Path], int]:
        return {b: i for i, b in enumerate(self.basis.get(degree, []))}

    def element(self, degree: int, coords: dict[int, Fraction]) -> DgMorphism:
        comps: dict[tuple[int, int], LinComb] = {}
        for i, c in coords.items():
            u, v, q = self.basis[degree][i]
            _add(comps.setdefault((u, v), {}), q, c)
        return DgMorphism(self.source, self.target, degree, comps).clean()

    def coordinates(self, f: DgMorphism) -> dict[int, Fraction]:
        idx = self.index(f.degree)
        out: dict[int, Fraction] = {}
        for (u, v), comb in f.components.items():
            for q, c in comb.items():
                out[idx[(u, v, q)]] = c
        return out

    def differential_rows(self, degree: int) -> list[dict[int, Fraction]]:
        """Rows: images of the degree-``degree`` basis in degree ``degree + 1`` coordinates."""
        rows = []
        target_idx = self.index(degree + 1)
        for b in self.basis.get(degree, []):
            f = self.element(degree, {self.index(degree)[b]: Fraction(1)})
            df = hom_differential(f)
            row: dict[int, Fraction] = {}
            for (u, v), comb in df.components.items():
                for q, c in comb.items():
                    row[target_idx[(u, v, q)]] = c
            rows.append(row)
        return rows

    def check_square_zero(self) -> bool:
        for deg, elems in self.basis.items():
            for i in range(len(elems)):
                f = self.element(deg, {i: Fraction(1)})
                if not hom_differential(hom_differential(f)).is_zero():
                    return False
        return True


def hom_complex(m: DgModule, n: DgModule, p: int | None = None) -> HomComplex:
    if m.pair is not n.pair and m.pair != n.pair:
        raise HomError("modules live over different algebras")
    if m.top_only:
        raise HomError("the simple module is only supported as a target")
    pair = m.pair
    basis: dict[int, list[tuple[int, int, Path]]] = defaultdict(list)
    for u, (iu, mu) in enumerate(m.generators):
        for v, (jv, nv) in enumerate(n.generators):
            if n.top_only:
                paths = (Path.trivial(iu),) if iu == jv else ()
            else:
                paths = pair.paths_between(jv, iu)
            for q in paths:
                basis[pair.degree(q) + mu - nv].append((u, v, q))
    return HomComplex(m, n, {k: sorted(v, key=lambda b: (b[0], b[1], b[2])) for k, v in basis.items()}, p)


def cohomology_dims(c: HomComplex) -> dict[int, int]:
    degrees = sorted(c.basis)
    ranks = {d: rank(c.differential_rows(d), c.field_prime) for d in degrees}
    out = {}
    for d in degrees:
        dim = len(c.basis[d]) - ranks.get(d, 0) - ranks.get(d - 1, 0)
        if dim:
            out[d] = dim
    return out


def hom_dims(m: DgModule, n: DgModule, p: int | None = None) -> dict[int, int]:
    return cohomology_dims(hom_complex(m, n, p))


def cohomology_class_rank(c: HomComplex, morphisms: list[DgMorphism]) -> int:
    """Dimension of the span of the classes of closed morphisms (all of one degree)."""
    if not morphisms:
        return 0
    deg = morphisms[0].degree
    boundaries = c.differential_rows(deg - 1)
    base = rank(boundaries, c.field_prime)
    rows = boundaries + [c.coordinates(f) for f in morphisms]
    return rank(rows, c.field_prime) - base


# ---- underlying complexes ---------------------------------------------------------------

def _underlying_basis(m: DgModule, i: str) -> list[tuple[int, Path]]:
    out = []
    for u, (ku, _) in enumerate(m.generators):
        if m.top_only:
            if ku == i:
                out.append((u, Path.trivial(i)))
        else:
            out.extend((u, q) for q in m.pair.paths_between(ku, i))
    return out


def _underlying_degree(m: DgModule, u: int, q: Path) -> int:
    return m.pair.degree(q) - m.shift(u)


def _apply_components(pair: GentlePair, comps, basis_tgt_index, u: int, q: Path, top_only: bool):
    row: dict[int, Fraction] = {}
    for (a, b), comb in comps.items():
        if a != u:
            continue
        for c, x in comb.items():
            prod = compose_paths(pair, c, q)
            if prod is None or (top_only and prod.arrows):
                continue
            k = basis_tgt_index[(b, prod)]
            row[k] = row.get(k, 0) + x
    return {k: v for k, v in row.items() if v}


def underlying_complex(m: DgModule, i: str):
    """Graded basis of ``M e_i`` and its differential rows, keyed by degree."""
    basis = _underlying_basis(m, i)
    by_deg: dict[int, list[tuple[int, Path]]] = defaultdict(list)
    for u, q in basis:
        by_deg[_underlying_degree(m, u, q)].append((u, q))
    return dict(by_deg)


def underlying_cohomology(m: DgModule, p: int | None = None) -> dict[tuple[str, int], int]:
    """Cohomology dimensions of ``M e_i`` for every vertex ``i`` and degree."""
    pair = m.pair
    out: dict[tuple[str, int], int] = {}
    for i in pair.vertices:
        by_deg = underlying_complex(m, i)
        ranks = {}
        for d, elems in by_deg.items():
            tgt = by_deg.get(d + 1, [])
            tidx = {b: k for k, b in enumerate(tgt)}
            rows = [_apply_components(pair, m.differential, tidx, u, q, m.top_only) for u, q in elems]
            ranks[d] = rank(rows, p)
        for d, elems in by_deg.items():
            dim = len(elems) - ranks[d] - ranks.get(d - 1, 0)
            if dim:
                out[(i, d)] = dim
    return dict(sorted(out.items()))


def is_quasi_iso(f: DgMorphism, p: int | None = None) -> bool:
    """Whether a closed degree-0 map induces isomorphisms on every ``H(M e_i)``.

    Checked by acyclicity of the mapping cone of the induced chain maps.
    """
    if f.degree != 0:
        raise HomError("quasi-isomorphisms have degree 0")
    if not is_closed(f):
        raise HomError("morphism is not closed")
    m, n = f.source, f.target
    pair = m.pair
    for i in pair.vertices:
        bm = underlying_complex(m, i)
        bn = underlying_complex(n, i)
        degrees = sorted(set(bm) | {d - 1 for d in bm} | set(bn) | {d + 1 for d in bn})
        # cone degree d: M^{d+1} (+) N^d ; d(x, y) = (-d x, f x + d y)
        def cone_basis(d):
            return [("m", b) for b in bm.get(d + 1, [])] + [("n", b) for b in bn.get(d, [])]

        ranks = {}
        sizes = {}
        for d in degrees:
            src = cone_basis(d)
            tgt = cone_basis(d + 1)
            sizes[d] = len(src)
            tidx = {b: k for k, b in enumerate(tgt)}
            rows = []
            for kind, (u, q) in src:
                row: dict[int, Fraction] = {}
                if kind == "m":
                    part = _apply_components(pair, m.differential, {b: k for (t, b), k in tidx.items() if t == "m"}, u, q, False)
                    for k, v in part.items():
                        row[k] = row.get(k, 0) - v
                    part = _apply_components(pair, f.components, {b: k for (t, b), k in tidx.items() if t == "n"}, u, q, n.top_only)
                    for k, v in part.items():
                        row[k] = row.get(k, 0) + v
                else:
                    part = _apply_components(pair, n.differential, {b: k for (t, b), k in tidx.items() if t == "n"}, u, q, n.top_only)
                    for k, v in part.items():
                        row[k] = row.get(k, 0) + v
                rows.append({k: v for k, v in row.items() if v})
            ranks[d] = rank(rows, p)
        for d in degrees:
            if sizes[d] - ranks[d] - ranks.get(d - 1, 0) != 0:
                return False
    return True


# ---- total modules of threads ---------------------------------------------------------------

def thread_total_module(modules: list[DgModule], morphisms: list[DgMorphism]) -> tuple[DgModule, list[int]]:
    """Direct sum of ``modules`` with the degree-1 maps added to the differential.

    ``morphisms[i]`` joins ``modules[i]`` and ``modules[i + 1]`` in either
    direction.  Returns the module and the generator offset of each summand.
    """
    if len(morphisms) != len(modules) - 1:
        raise HomError("need one morphism between each consecutive pair of modules")
    pair = modules[0].pair
    gens: list[tuple[str, int]] = []
    labels: list[str] = []
    offsets = []
    diff: dict[tuple[int, int], LinComb] = {}
    for k, mod in enumerate(modules):
        offsets.append(len(gens))
        gens.extend(mod.generators)
        labels.extend(f"{k}:{lab}" for lab in (mod.labels or [str(g) for g in mod.generators]))
        for (u, v), comb in mod.differential.items():
            diff[(u + offsets[k], v + offsets[k])] = dict(comb)
    ids = {id(mod): k for k, mod in enumerate(modules)}
    for i, f in enumerate(morphisms):
        if f.degree != 1:
            raise HomError(f"thread morphism {i} has degree {f.degree}, expected 1")
        if not is_closed(f):
            raise HomError(f"thread morphism {i} is not closed")
        a, b = ids.get(id(f.source)), ids.get(id(f.target))
        if {a, b} != {i, i + 1}:
            raise HomError(f"thread morphism {i} does not join summands {i} and {i + 1}")
        for (u, v), comb in f.components.items():
            acc = diff.setdefault((u + offsets[a], v + offsets[b]), {})
            for q, c in comb.items():
                _add(acc, q, c)
    total = DgModule(pair, gens, {k: v for k, v in diff.items() if v}, labels)
    d = differential_morphism(total)
    dd = compose(d, d)
    if not dd.is_zero():
        (u, w), comb = next(iter(dd.components.items()))
        raise HomError(f"total differential does not square to zero: composite {labels[u]} -> {labels[w]} "
                       f"is {', '.join(q.label() for q in comb)}")
    return total, offsets


def embedding(summand: DgModule, total: DgModule, offset: int, sign: int = 1) -> DgMorphism:
    comps = {(u, u + offset): {Path.trivial(summand.vertex(u)): Fraction(sign)} for u in range(len(summand.generators))}
    return DgMorphism(summand, total, 0, comps)


def projection(total: DgModule, summand: DgModule, offset: int, sign: int = 1) -> DgMorphism:
    comps = {(u + offset, u): {Path.trivial(summand.vertex(u)): Fraction(sign)} for u in range(len(summand.generators))}
    return DgMorphism(total, summand, 0, comps)


def fingerprint(m: DgModule, probes: list[DgModule], p: int | None = None) -> tuple:
    """Hom dimensions to and from each probe; equal for quasi-isomorphic K-projectives."""
    return tuple((tuple(sorted(hom_dims(x, m, p).items())), tuple(sorted(hom_dims(m, x, p).items())))
                 for x in probes)
