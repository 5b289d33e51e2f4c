"""The algebra A(Z) of a pointed matched circle, as a subalgebra of A(4k).

Elements are kept as sets of *canonical representatives*: one equitable
diagram per swap class, with every horizontal strand moved to the smaller
point of its matched pair.  ``ArcAlgebraElement.expansion`` recovers the
honest element of A(4k).  Products and differentials are computed on the
expansions and read back off the canonical terms, which is exact because
A(Z) is a differential subalgebra.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from . import config, f2
from .errors import DuplicateEndpoint, SizeLimit
from .pmc import PointedMatchedCircle
from .strands import (
    AlgebraElement,
    StrandDiagram,
    Strands,
    compose,
    format_diagram,
    resolve,
    sort_key,
)


# -- swap classes ---------------------------------------------------------------

def is_equitable(x: Strands, match: Sequence[int]) -> bool:
    S = {s for s, _ in x}
    T = {t for _, t in x}
    return all(match[s - 1] not in S for s in S) and all(match[t - 1] not in T for t in T)


def canonical(x: Strands, match: Sequence[int]) -> Strands:
    out = []
    for s, t in x:
        if s == t:
            m = min(s, match[s - 1])
            out.append((m, m))
        else:
            out.append((s, t))
    return tuple(sorted(out))


def swap_class(x: Strands, match: Sequence[int]) -> list[Strands]:
    """Every diagram related to ``x`` by horizontal strand swapping."""
    moving = [(s, t) for s, t in x if s != t]
    horizontal = [s for s, t in x if s == t]
    out = []
    for choice in itertools.product(*[(h, match[h - 1]) for h in horizontal]):
        out.append(tuple(sorted(moving + [(c, c) for c in choice])))
    return out


def _idem_pairs(points: Iterable[int], pair_of: dict[int, int]) -> frozenset[int]:
    return frozenset(pair_of[p] for p in points)


# -- the algebra ----------------------------------------------------------------

class ArcAlgebra:
    """Cached arithmetic on basic generators of one A(Z)."""

    def __init__(self, circle: PointedMatchedCircle):
        self.circle = circle
        self.match = circle.match
        self.n = circle.n_points
        self._prod: dict[tuple[Strands, Strands], frozenset] = {}
        self._diff: dict[Strands, frozenset] = {}
        self._basis: dict[int, list[Strands]] = {}
        self._classes: dict[Strands, list[Strands]] = {}

    def expand(self, rep: Strands) -> list[Strands]:
        cls = self._classes.get(rep)
        if cls is None:
            cls = swap_class(rep, self.match)
            self._classes[rep] = cls
        return cls

    def is_canonical(self, x: Strands) -> bool:
        return canonical(x, self.match) == x

    def left_idem(self, rep: Strands) -> frozenset[int]:
        return _idem_pairs((s for s, _ in rep), self.circle.pair_of)

    def right_idem(self, rep: Strands) -> frozenset[int]:
        return _idem_pairs((t for _, t in rep), self.circle.pair_of)

    def idempotent_rep(self, pairs: Iterable[int]) -> Strands:
        pts = sorted(self.circle.pairs[i][0] for i in pairs)
        return tuple((p, p) for p in pts)

    def is_idempotent_rep(self, rep: Strands) -> bool:
        return all(s == t for s, t in rep)

    def mul_gens(self, x: Strands, y: Strands) -> frozenset:
        key = (x, y)
        hit = self._prod.get(key)
        if hit is not None:
            return hit
        if len(x) != len(y) or self.right_idem(x) != self.left_idem(y):
            res: frozenset = frozenset()
        else:
            acc: set = set()
            ys = self.expand(y)
            by_source: dict[frozenset, list[Strands]] = {}
            for yy in ys:
                by_source.setdefault(frozenset(s for s, _ in yy), []).append(yy)
            for xx in self.expand(x):
                for yy in by_source.get(frozenset(t for _, t in xx), ()):
                    z = compose(xx, yy)
                    if z is not None and self.is_canonical(z):
                        acc ^= {z}
            res = frozenset(acc)
        self._prod[key] = res
        return res

    def d_gen(self, x: Strands) -> frozenset:
        hit = self._diff.get(x)
        if hit is not None:
            return hit
        acc: set = set()
        for xx in self.expand(x):
            for r in resolve(xx):
                if self.is_canonical(r):
                    acc ^= {r}
        res = frozenset(acc)
        self._diff[x] = res
        return res

    def basis_weight(self, w: int) -> list[Strands]:
        """Canonical representatives of all basic generators of weight ``w``."""
        hit = self._basis.get(w)
        if hit is not None:
            return hit
        pairs = self.circle.pairs
        out = []
        # choose which pairs are occupied at the source and at the target
        for src_pairs in itertools.combinations(range(len(pairs)), w):
            for src in itertools.product(*[pairs[i] for i in src_pairs]):
                src_sorted = tuple(sorted(src))
                for strands in _equitable_maps(src_sorted, self.n, self.match):
                    if self.is_canonical(strands):
                        out.append(strands)
        out = sorted(set(out), key=sort_key)
        self._basis[w] = out
        return out


def _equitable_maps(S: tuple[int, ...], n: int, match: Sequence[int]) -> Iterator[Strands]:
    def rec(i: int, used: frozenset, acc: list):
        if i == len(S):
            yield tuple(acc)
            return
        s = S[i]
        for t in range(s, n + 1):
            if t in used or match[t - 1] in used:
                continue
            acc.append((s, t))
            yield from rec(i + 1, used | {t}, acc)
            acc.pop()

    yield from rec(0, frozenset(), [])


@lru_cache(maxsize=None)
def algebra_of(circle: PointedMatchedCircle) -> ArcAlgebra:
    return ArcAlgebra(circle)


# -- elements -------------------------------------------------------------------

@dataclass(frozen=True)
class ArcAlgebraElement:
    circle: PointedMatchedCircle
    gens: frozenset = frozenset()

    @property
    def algebra(self) -> ArcAlgebra:
        return algebra_of(self.circle)

    @property
    def expansion(self) -> AlgebraElement:
        alg = self.algebra
        acc: set = set()
        for g in self.gens:
            acc.update(StrandDiagram(alg.n, x) for x in alg.expand(g))
        return AlgebraElement(alg.n, frozenset(acc))

    @classmethod
    def zero(cls, circle: PointedMatchedCircle) -> "ArcAlgebraElement":
        return cls(circle, frozenset())

    @classmethod
    def basic(cls, circle: PointedMatchedCircle, rep: Strands) -> "ArcAlgebraElement":
        return cls(circle, frozenset([rep]))

    def __bool__(self) -> bool:
        return bool(self.gens)

    def __len__(self) -> int:
        return len(self.gens)

    def __iter__(self) -> Iterator[Strands]:
        return iter(sorted(self.gens, key=sort_key))

    def _check(self, other: "ArcAlgebraElement") -> None:
        if other.circle != self.circle:
            raise ValueError("elements of different algebras")

    def __add__(self, other: "ArcAlgebraElement") -> "ArcAlgebraElement":
        self._check(other)
        return ArcAlgebraElement(self.circle, self.gens ^ other.gens)

    def __mul__(self, other: "ArcAlgebraElement") -> "ArcAlgebraElement":
        self._check(other)
        alg = self.algebra
        acc: set = set()
        for x in self.gens:
            for y in other.gens:
                acc ^= alg.mul_gens(x, y)
        return ArcAlgebraElement(self.circle, frozenset(acc))

    def d(self) -> "ArcAlgebraElement":
        alg = self.algebra
        acc: set = set()
        for x in self.gens:
            acc ^= alg.d_gen(x)
        return ArcAlgebraElement(self.circle, frozenset(acc))

    def weights(self) -> set[int]:
        return {len(g) for g in self.gens}

    def __str__(self) -> str:
        if not self.gens:
            return "0"
        n = self.algebra.n
        return " + ".join("a(" + format_diagram(StrandDiagram(n, g)) + ")" for g in self)


def from_expansion(circle: PointedMatchedCircle, elem: AlgebraElement) -> ArcAlgebraElement:
    """Inverse of ``expansion``; raises ``ValueError`` if ``elem`` is not in A(Z)."""
    alg = algebra_of(circle)
    reps = {canonical(d.strands, alg.match) for d in elem.terms}
    out = ArcAlgebraElement(circle, frozenset(reps))
    if out.expansion != elem:
        raise ValueError("element is not a sum of full swap classes of equitable diagrams")
    return out


# -- operations -----------------------------------------------------------------

def a_map(x: StrandDiagram, circle: PointedMatchedCircle) -> ArcAlgebraElement:
    if x.n != circle.n_points:
        raise ValueError(f"diagram lives in A({x.n}), circle needs A({circle.n_points})")
    if not is_equitable(x.strands, circle.match):
        return ArcAlgebraElement.zero(circle)
    return ArcAlgebraElement.basic(circle, canonical(x.strands, circle.match))


@dataclass(frozen=True, order=True)
class Chord:
    start: int
    end: int

    def __post_init__(self):
        if not self.start < self.end:
            raise ValueError(f"chord [{self.start},{self.end}] must run forward")

    def to_json(self) -> list[int]:
        return [self.start, self.end]


def chord_element(
    circle: PointedMatchedCircle,
    chords: Iterable[Chord | Sequence[int]],
    weight: int | None = None,
) -> ArcAlgebraElement:
    """a(rho) for a set of chords, optionally restricted to one total weight."""
    rho = [c if isinstance(c, Chord) else Chord(*c) for c in chords]
    n = circle.n_points
    for c in rho:
        if not (1 <= c.start and c.end <= n):
            raise ValueError(f"chord [{c.start},{c.end}] outside 1..{n}")
    starts = [c.start for c in rho]
    ends = [c.end for c in rho]
    if len(set(starts)) != len(starts):
        raise DuplicateEndpoint("two chords share an initial point")
    if len(set(ends)) != len(ends):
        raise DuplicateEndpoint("two chords share a terminal point")
    blocked = set(starts) | set(ends)
    free = [p for p in range(1, n + 1) if p not in blocked]
    moving = [(c.start, c.end) for c in rho]
    reps: set = set()
    sizes = range(len(free) + 1) if weight is None else [weight - len(rho)]
    for size in sizes:
        if size < 0:
            continue
        for S0 in itertools.combinations(free, size):
            x = tuple(sorted(moving + [(s, s) for s in S0]))
            if is_equitable(x, circle.match):
                reps.add(canonical(x, circle.match))
    return ArcAlgebraElement(circle, frozenset(reps))


def idempotent(circle: PointedMatchedCircle, pairs: Iterable[int]) -> ArcAlgebraElement:
    alg = algebra_of(circle)
    return ArcAlgebraElement.basic(circle, alg.idempotent_rep(pairs))


def idempotents(circle: PointedMatchedCircle) -> list[ArcAlgebraElement]:
    m = len(circle.pairs)
    out = []
    for w in range(m + 1):
        for subset in itertools.combinations(range(m), w):
            out.append(idempotent(circle, subset))
    return out


def unit(circle: PointedMatchedCircle) -> ArcAlgebraElement:
    acc: set = set()
    for e in idempotents(circle):
        acc |= e.gens
    return ArcAlgebraElement(circle, frozenset(acc))


def basis(circle: PointedMatchedCircle, i: int) -> list[ArcAlgebraElement]:
    k = circle.k
    if not -k <= i <= k:
        raise ValueError(f"summand index {i} outside {-k}..{k}")
    alg = algebra_of(circle)
    return [ArcAlgebraElement.basic(circle, g) for g in alg.basis_weight(k + i)]


def differential_complex(circle: PointedMatchedCircle, i: int) -> f2.ChainComplexF2:
    alg = algebra_of(circle)
    gens = alg.basis_weight(circle.k + i)
    index = {g: j for j, g in enumerate(gens)}
    entries = set()
    for j, g in enumerate(gens):
        for h in alg.d_gen(g):
            entries.add((index[h], j))
    labels = [format_diagram(StrandDiagram(alg.n, g)) for g in gens]
    mat = f2.SparseMatrixF2(len(gens), len(gens), frozenset(entries))
    return f2.ChainComplexF2(labels, mat)


def poincare_polynomial(circle: PointedMatchedCircle) -> list[int]:
    """Homology dimensions of A(Z, i) for i = -k..k."""
    limit = config.guard("poincare_genus")
    if circle.k > limit:
        raise SizeLimit(f"poincare: genus {circle.k} exceeds guard {limit}")
    return [f2.homology_dim(differential_complex(circle, i)) for i in range(-circle.k, circle.k + 1)]
