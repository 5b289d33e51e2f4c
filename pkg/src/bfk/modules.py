"""Finite presentations of type D structures, A-infinity modules and bimodules.

Algebra coefficients are basic generators of A(Z), always referred to by
their canonical representative (a ``Strands`` tuple).  An idempotent is a
frozenset of matched-pair indices; a type D generator may also carry
``None``, meaning the unit (the generator spans a free module).

Type D conventions: ``delta[(x, y)]`` is the coefficient ``a_{x,y}`` of
``y`` in ``delta1(x)``, so ``I(x) . a_{x,y} . I(y) = a_{x,y}``.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

from . import config
from .arcalg import ArcAlgebraElement, algebra_of
from .errors import AlgebraMismatch, IdempotentMismatch, SizeLimit
from .pmc import PointedMatchedCircle
from .strands import StrandDiagram, Strands, format_diagram, sort_key

Idem = frozenset | None


def _name(circle: PointedMatchedCircle, rep: Strands) -> str:
    return format_diagram(StrandDiagram(circle.n_points, rep))


@dataclass
class Report:
    """Outcome of a structure-relation check; ``failures`` carry witnesses."""

    failures: list = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok

    def lines(self) -> list[str]:
        return [str(f) for f in self.failures]


# -- type D ---------------------------------------------------------------------

@dataclass
class TypeDStructure:
    circle: PointedMatchedCircle
    gens: tuple
    idem: dict
    delta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.gens = tuple(self.gens)
        if len(set(self.gens)) != len(self.gens):
            raise ValueError("duplicate generator names")
        for g in self.gens:
            if g not in self.idem:
                raise ValueError(f"generator {g!r} has no idempotent")
        clean = {}
        for (x, y), a in self.delta.items():
            if x not in self.idem or y not in self.idem:
                raise ValueError(f"delta term {x!r}->{y!r} names an unknown generator")
            if a.circle != self.circle:
                raise AlgebraMismatch("coefficient from a different algebra")
            if a:
                clean[(x, y)] = a
        self.delta = clean

    def coeff(self, x, y) -> ArcAlgebraElement:
        return self.delta.get((x, y), ArcAlgebraElement.zero(self.circle))

    def out_edges(self, x) -> Iterator[tuple[Strands, Hashable]]:
        for y in self.gens:
            a = self.delta.get((x, y))
            if a:
                for rep in a:
                    yield rep, y

    def check_idempotents(self) -> None:
        alg = algebra_of(self.circle)
        for (x, y), a in self.delta.items():
            for rep in a:
                ix, iy = self.idem[x], self.idem[y]
                if ix is not None and alg.left_idem(rep) != ix:
                    raise IdempotentMismatch(
                        f"{_name(self.circle, rep)} in delta({x!r}) does not start at I({x!r})"
                    )
                if iy is not None and alg.right_idem(rep) != iy:
                    raise IdempotentMismatch(
                        f"{_name(self.circle, rep)} in delta({x!r}) does not end at I({y!r})"
                    )

    def __str__(self) -> str:
        lines = [f"type D structure over {self.circle}"]
        for g in self.gens:
            lines.append(f"  {g}: idempotent {sorted(self.idem[g]) if self.idem[g] is not None else 'unit'}")
        for (x, y), a in sorted(self.delta.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1]))):
            lines.append(f"  delta {x} -> {a} (x) {y}")
        return "\n".join(lines)


@dataclass
class Residual:
    source: Hashable
    target: Hashable
    value: ArcAlgebraElement

    def __str__(self) -> str:
        return f"d(a_{{{self.source},{self.target}}}) + sum a a = {self.value}"


def verify_type_d(m: TypeDStructure) -> Report:
    """d(a_xy) + sum_w a_xw a_wy = 0 for every pair of generators."""
    m.check_idempotents()
    report = Report()
    for x in m.gens:
        for y in m.gens:
            report.checked += 1
            acc = m.coeff(x, y).d()
            for w in m.gens:
                a, b = m.delta.get((x, w)), m.delta.get((w, y))
                if a and b:
                    acc = acc + a * b
            if acc:
                report.failures.append(Residual(x, y, acc))
    return report


def _edge_graph(m: TypeDStructure) -> dict:
    alg = algebra_of(m.circle)
    graph: dict = defaultdict(set)
    for (x, y), a in m.delta.items():
        if any(not alg.is_idempotent_rep(r) for r in a):
            graph[x].add(y)
    return graph


def _has_cycle(nodes: Iterable, graph: Mapping) -> bool:
    color: dict = {}
    for start in nodes:
        if color.get(start):
            continue
        stack = [(start, iter(graph.get(start, ())))]
        color[start] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[node] = 2
                stack.pop()
            elif color.get(nxt) == 1:
                return True
            elif not color.get(nxt):
                color[nxt] = 1
                stack.append((nxt, iter(graph.get(nxt, ()))))
    return False


def is_bounded(m: TypeDStructure) -> bool:
    """No directed cycle of delta1 passes through a non-idempotent coefficient."""
    return not _has_cycle(m.gens, _edge_graph(m))


def delta_n(m: TypeDStructure, n: int) -> dict:
    """n-fold iterate of delta1: ``x -> {(a_1, ..., a_n, y): 1}`` as a set of keys."""
    if n < 0:
        raise ValueError("n must be non-negative")
    out = {}
    for x in m.gens:
        layer = {((), x)}
        for _ in range(n):
            nxt: set = set()
            for seq, y in layer:
                for rep, z in m.out_edges(y):
                    nxt ^= {(seq + (rep,), z)}
            layer = nxt
        out[x] = layer
    return out


def delta_paths(m: TypeDStructure, x, max_len: int | None = None) -> dict:
    """All nonvanishing delta iterates from ``x`` that an A-side can consume.

    Returns ``{(seq, y): parity}`` with odd parity only.  Sequences of length
    two or more containing an idempotent are dropped (strict unitality kills
    them on the other side).  ``max_len=None`` requires boundedness.
    """
    if max_len is None:
        if not is_bounded(m):
            raise ValueError("unbounded structure needs an explicit length cap")
        max_len = len(m.gens) + 1
    alg = algebra_of(m.circle)
    result: dict = {((), x): 1}
    layer = {((), x): 1}
    for length in range(1, max_len + 1):
        nxt: dict = defaultdict(int)
        for (seq, y), par in layer.items():
            for rep, z in m.out_edges(y):
                if length >= 2 and alg.is_idempotent_rep(rep):
                    continue
                if seq and alg.is_idempotent_rep(seq[0]):
                    continue
                nxt[(seq + (rep,), z)] ^= par
        layer = {k: v for k, v in nxt.items() if v}
        if not layer:
            break
        result.update(layer)
    return result


# -- A-infinity operations ----------------------------------------------------

@dataclass(frozen=True)
class PeriodicFamily:
    """``op(source, prefix, repeat * i, suffix) = outputs`` for every i >= 0."""

    source: Hashable
    prefix: tuple
    repeat: tuple
    suffix: tuple
    outputs: frozenset

    def matches(self, x, inputs: tuple) -> bool:
        if x != self.source:
            return False
        p, s, r = len(self.prefix), len(self.suffix), len(self.repeat)
        if len(inputs) < p + s or inputs[:p] != self.prefix:
            return False
        if s and inputs[len(inputs) - s:] != self.suffix:
            return False
        mid = inputs[p: len(inputs) - s]
        if not r:
            return not mid
        if len(mid) % r:
            return False
        return all(mid[i: i + r] == self.repeat for i in range(0, len(mid), r))

    def instances(self, max_inputs: int) -> Iterator[tuple]:
        i = 0
        while True:
            seq = self.prefix + self.repeat * i + self.suffix
            if len(seq) > max_inputs:
                return
            yield seq
            if not self.repeat:
                return
            i += 1


class _OpsMixin:
    """Shared lookup for operation tables keyed by ``(gen, inputs)``."""

    ops: dict
    families: list

    def _lookup(self, x, inputs: tuple) -> frozenset:
        acc = set(self.ops.get((x, inputs), ()))
        for fam in self.families:
            if fam.matches(x, inputs):
                acc ^= set(fam.outputs)
        return frozenset(acc)

    @property
    def bounded(self) -> bool:
        return not self.families

    def max_arity(self) -> int | None:
        if self.families:
            return None
        return max((len(k[1]) for k in self.ops), default=0)


@dataclass
class AInfModule(_OpsMixin):
    """Right A-infinity module; ``ops[(x, (a_1..a_n))]`` is m_{n+1} as a set of gens."""

    circle: PointedMatchedCircle
    gens: tuple
    idem: dict
    ops: dict = field(default_factory=dict)
    families: list = field(default_factory=list)

    def __post_init__(self):
        self.gens = tuple(self.gens)
        for g in self.gens:
            if self.idem.get(g) is None:
                raise ValueError(f"A-side generator {g!r} needs an explicit idempotent")
        self.ops = {k: frozenset(v) for k, v in self.ops.items() if v}

    def m(self, x, inputs: tuple) -> frozenset:
        """m_{n+1}(x, a_1, ..., a_n) on basic generators, with strict unitality."""
        alg = algebra_of(self.circle)
        if any(alg.is_idempotent_rep(a) for a in inputs):
            if len(inputs) == 1:
                e = inputs[0]
                return frozenset([x]) if alg.left_idem(e) == self.idem[x] else frozenset()
            return frozenset()
        return self._lookup(x, inputs)

    def m_multi(self, xs: Iterable, inputs: Sequence[ArcAlgebraElement]) -> frozenset:
        acc: set = set()
        choices = [sorted(a.gens, key=sort_key) for a in inputs]
        for x in xs:
            for combo in itertools.product(*choices):
                acc ^= set(self.m(x, tuple(combo)))
        return frozenset(acc)

    def relevant_inputs(self) -> list:
        """Non-idempotent basic generators whose weight matches the idempotents."""
        alg = algebra_of(self.circle)
        weights = {len(self.idem[g]) for g in self.gens}
        out = []
        for w in sorted(weights):
            out += [r for r in alg.basis_weight(w) if not alg.is_idempotent_rep(r)]
        return out


def _composable_sequences(alg, start_idem, pool_by_left: dict, n: int) -> Iterator[tuple]:
    def rec(idem, acc):
        if len(acc) == n:
            yield tuple(acc)
            return
        for a in pool_by_left.get(idem, ()):
            acc.append(a)
            yield from rec(alg.right_idem(a), acc)
            acc.pop()

    yield from rec(start_idem, [])


@dataclass
class AInfFailure:
    gen: Hashable
    inputs: tuple
    value: frozenset
    circle: PointedMatchedCircle

    def __str__(self) -> str:
        ins = ", ".join(_name(self.circle, a) for a in self.inputs)
        return f"A-infinity relation fails at ({self.gen!r}; {ins}): residual {sorted(map(str, self.value))}"


def verify_a_inf(m: AInfModule, n_max: int = 6) -> Report:
    """Check the A-infinity relation for every generator and input tuple of length <= n_max."""
    alg = algebra_of(m.circle)
    pool = m.relevant_inputs()
    by_left: dict = defaultdict(list)
    for a in pool:
        by_left[alg.left_idem(a)].append(a)
    arity = m.max_arity()
    top = n_max if arity is None else min(n_max, 2 * arity)
    report = Report()
    for x in m.gens:
        for n in range(0, top + 1):
            for seq in _composable_sequences(alg, m.idem[x], by_left, n):
                report.checked += 1
                acc: set = set()
                # composition terms
                for j in range(0, n + 1):
                    inner = m.m(x, seq[:j])
                    for y in inner:
                        acc ^= set(m.m(y, seq[j:]))
                # internal differentials
                for ell in range(n):
                    for b in alg.d_gen(seq[ell]):
                        acc ^= set(m.m(x, seq[:ell] + (b,) + seq[ell + 1:]))
                # adjacent products
                for ell in range(n - 1):
                    for b in alg.mul_gens(seq[ell], seq[ell + 1]):
                        acc ^= set(m.m(x, seq[:ell] + (b,) + seq[ell + 2:]))
                if acc:
                    report.failures.append(AInfFailure(x, seq, frozenset(acc), m.circle))
    return report


# -- duality ------------------------------------------------------------------

class MorDual(AInfModule):
    """Mor(N, A) for a type D structure N: a dg right module, computed lazily.

    Generators are pairs ``(y, a)``: the map sending ``y`` to the basic
    generator ``a`` (with ``I(y) a = a``) and every other generator to 0.
    ``m1(y, a) = (y, da) + sum_x (x, a_{x,y} a)`` and ``m2((y, a), c) = (y, ac)``.
    """

    def __init__(self, n: TypeDStructure):
        alg = algebra_of(n.circle)
        gens = []
        idem = {}
        for y in n.gens:
            iy = n.idem[y]
            if iy is None:
                raise ValueError("dual needs explicit idempotents on every generator")
            for a in alg.basis_weight(len(iy)):
                if alg.left_idem(a) == iy:
                    gens.append((y, a))
                    idem[(y, a)] = alg.right_idem(a)
        self.source = n
        self._alg = alg
        self._cache: dict = {}
        super().__init__(n.circle, tuple(gens), idem, {}, [])

    def max_arity(self) -> int:
        return 1

    def m(self, x, inputs: tuple) -> frozenset:
        key = (x, inputs)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        alg = self._alg
        y, a = x
        acc: set = set()
        if not inputs:
            for b in alg.d_gen(a):
                acc ^= {(y, b)}
            for xx in self.source.gens:
                coeff = self.source.delta.get((xx, y))
                if coeff:
                    for c in coeff:
                        for b in alg.mul_gens(c, a):
                            acc ^= {(xx, b)}
        elif len(inputs) == 1:
            c = inputs[0]
            if alg.is_idempotent_rep(c):
                acc = {x} if alg.left_idem(c) == self.idem[x] else set()
            else:
                for b in alg.mul_gens(a, c):
                    acc ^= {(y, b)}
        res = frozenset(acc)
        self._cache[key] = res
        return res

    def materialize(self) -> AInfModule:
        """Plain table version (for serialization)."""
        ops = {}
        pool = self.relevant_inputs()
        for x in self.gens:
            v = self.m(x, ())
            if v:
                ops[(x, ())] = v
            for c in pool:
                if self._alg.left_idem(c) == self.idem[x]:
                    v = self.m(x, (c,))
                    if v:
                        ops[(x, (c,))] = v
        return AInfModule(self.circle, self.gens, dict(self.idem), ops, [])


def dual_d_to_a(n: TypeDStructure) -> MorDual:
    n.check_idempotents()
    return MorDual(n)


# -- bimodules ----------------------------------------------------------------

@dataclass
class TypeDDBimodule:
    """Two left type D actions; ``delta[(x, y)]`` is a set of ``(a_left, a_right)`` pairs."""

    left: PointedMatchedCircle
    right: PointedMatchedCircle
    gens: tuple
    idem: dict  # gen -> (left idempotent, right idempotent)
    delta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.gens = tuple(self.gens)
        self.delta = {k: frozenset(v) for k, v in self.delta.items() if v}


def _dd_d(la, ra, term):
    a, b = term
    out: set = set()
    for x in la.d_gen(a):
        out ^= {(x, b)}
    for y in ra.d_gen(b):
        out ^= {(a, y)}
    return out


def _dd_mul(la, ra, s, t):
    out: set = set()
    for x in la.mul_gens(s[0], t[0]):
        for y in ra.mul_gens(s[1], t[1]):
            out ^= {(x, y)}
    return out


def verify_type_dd(m: TypeDDBimodule) -> Report:
    la, ra = algebra_of(m.left), algebra_of(m.right)
    report = Report()
    for x in m.gens:
        for y in m.gens:
            report.checked += 1
            acc: set = set()
            for term in m.delta.get((x, y), ()):
                acc ^= _dd_d(la, ra, term)
            for w in m.gens:
                for s in m.delta.get((x, w), ()):
                    for t in m.delta.get((w, y), ()):
                        acc ^= _dd_mul(la, ra, s, t)
            if acc:
                report.failures.append((x, y, sorted(acc)))
    return report


@dataclass
class TypeDABimodule(_OpsMixin):
    """Left type D over A(left), right A-infinity over A(right).

    ``ops[(x, (a_1..a_n))]`` is a set of ``(b, y)`` pairs: the term
    ``b (x) y`` of ``delta^1_{1+n}(x, a_1, ..., a_n)``.
    """

    left: PointedMatchedCircle
    right: PointedMatchedCircle
    gens: tuple
    idem: dict  # gen -> (left idempotent, right idempotent)
    ops: dict = field(default_factory=dict)
    families: list = field(default_factory=list)

    def __post_init__(self):
        self.gens = tuple(self.gens)
        self.ops = {k: frozenset(v) for k, v in self.ops.items() if v}

    def delta(self, x, inputs: tuple) -> frozenset:
        ra = algebra_of(self.right)
        if any(ra.is_idempotent_rep(a) for a in inputs):
            if len(inputs) == 1 and ra.left_idem(inputs[0]) == self.idem[x][1]:
                la = algebra_of(self.left)
                return frozenset([(la.idempotent_rep(self.idem[x][0]), x)])
            return frozenset()
        return self._lookup(x, inputs)

    def d_graph_bounded(self) -> bool:
        la = algebra_of(self.left)
        graph: dict = defaultdict(set)
        for (x, inputs), outs in self.ops.items():
            if inputs:
                continue
            for b, y in outs:
                if not la.is_idempotent_rep(b):
                    graph[x].add(y)
        return not _has_cycle(self.gens, graph)


def verify_type_da(b: TypeDABimodule, n_max: int = 6) -> Report:
    """DA structure relation on composable right inputs of length <= n_max.

    For inputs a_1..a_n the sum of: split compositions (left outputs
    multiplied), d of the left output, delta with some d(a_l), and delta with
    some adjacent product a_l a_(l+1), must vanish.
    """
    la, ra = algebra_of(b.left), algebra_of(b.right)
    weights = {len(b.idem[g][1]) for g in b.gens}
    pool = [r for w in sorted(weights) for r in ra.basis_weight(w) if not ra.is_idempotent_rep(r)]
    by_left: dict = defaultdict(list)
    for a in pool:
        by_left[ra.left_idem(a)].append(a)
    arity = b.max_arity()
    top = n_max if arity is None else min(n_max, 2 * arity)
    report = Report()
    for x in b.gens:
        for n in range(0, top + 1):
            for seq in _composable_sequences(ra, b.idem[x][1], by_left, n):
                report.checked += 1
                acc: set = set()
                for j in range(0, n + 1):
                    for c1, y in b.delta(x, seq[:j]):
                        for c2, z in b.delta(y, seq[j:]):
                            for p in la.mul_gens(c1, c2):
                                acc ^= {(p, z)}
                for c, y in b.delta(x, seq):
                    for dc in la.d_gen(c):
                        acc ^= {(dc, y)}
                for ell in range(n):
                    for e in ra.d_gen(seq[ell]):
                        acc ^= set(b.delta(x, seq[:ell] + (e,) + seq[ell + 1:]))
                for ell in range(n - 1):
                    for e in ra.mul_gens(seq[ell], seq[ell + 1]):
                        acc ^= set(b.delta(x, seq[:ell] + (e,) + seq[ell + 2:]))
                if acc:
                    report.failures.append((x, tuple(_name(b.right, a) for a in seq), sorted(acc)))
    return report


def identity_da(circle: PointedMatchedCircle, weight: int | None = None) -> TypeDABimodule:
    """One generator per idempotent; ``delta^1_2(i, a) = a (x) j`` for every basic a from i to j."""
    alg = algebra_of(circle)
    w = circle.k if weight is None else weight
    gens, idem = [], {}
    for subset in itertools.combinations(range(len(circle.pairs)), w):
        s = frozenset(subset)
        name = "i" + "".join(str(p) for p in sorted(s))
        gens.append(name)
        idem[name] = (s, s)
    by_idem = {idem[g][0]: g for g in gens}
    ops: dict = {}
    for a in alg.basis_weight(w):
        if alg.is_idempotent_rep(a):
            continue
        src, dst = by_idem[alg.left_idem(a)], by_idem[alg.right_idem(a)]
        ops[(src, (a,))] = frozenset([(a, dst)])
    return TypeDABimodule(circle, circle, tuple(gens), idem, ops, [])


# -- delta^1 solving ------------------------------------------------------------

@dataclass
class _Equation:
    linear: frozenset
    quadratic: frozenset
    top: int


def _build_equations(unknowns: list, fixed: list, d_atom: Callable, mul_atom: Callable) -> list[_Equation]:
    """Equations of d(a_xy) + sum a_xw a_wy = 0, one per output atom per (x, y).

    Variables are indices into ``fixed + unknowns``; fixed ones are forced to 1.
    """
    terms = fixed + unknowns
    by_source: dict = defaultdict(list)
    for idx, (x, atom, y) in enumerate(terms):
        by_source[x].append(idx)
    eqs: dict = defaultdict(lambda: [set(), set()])
    for idx, (x, atom, y) in enumerate(terms):
        for out in d_atom(atom):
            eqs[(x, y, out)][0] ^= {idx}
    for i, (x, a, w) in enumerate(terms):
        for j in by_source.get(w, ()):
            _, b, y = terms[j]
            for out in mul_atom(a, b):
                key = tuple(sorted((i, j)))
                if i == j:
                    eqs[(x, y, out)][0] ^= {i}  # v^2 = v over F2
                else:
                    eqs[(x, y, out)][1] ^= {key}
    out = []
    for lin, quad in eqs.values():
        if not lin and not quad:
            continue
        top = max([*lin, *(max(q) for q in quad)])
        out.append(_Equation(frozenset(lin), frozenset(quad), top))
    return out


def _eval(eq: _Equation, val: list) -> int:
    s = 0
    for i in eq.linear:
        s ^= val[i]
    for i, j in eq.quadratic:
        s ^= val[i] & val[j]
    return s


def _search(n_fixed: int, n_unknown: int, eqs: list[_Equation]) -> list[tuple[int, ...]]:
    total = n_fixed + n_unknown
    at: dict = defaultdict(list)
    for e in eqs:
        at[e.top].append(e)
    val = [1] * n_fixed + [0] * n_unknown
    for i in range(n_fixed):
        if any(_eval(e, val) for e in at[i]):
            return []
    sols = []

    def rec(i: int):
        if i == total:
            sols.append(tuple(val[n_fixed:]))
            return
        for bit in (0, 1):
            val[i] = bit
            if not any(_eval(e, val) for e in at[i]):
                rec(i + 1)
        val[i] = 0

    rec(n_fixed)
    return sols


def _d_atom_factory(circle):
    alg = algebra_of(circle)
    return alg.d_gen, alg.mul_gens


def solve_delta(
    circle: PointedMatchedCircle,
    gens: Sequence,
    idem: Mapping,
    support: Sequence[tuple],
    fixed: Sequence[tuple] = (),
) -> list[TypeDStructure]:
    """Every assignment of the ``support`` coefficients making delta1 square to zero.

    ``support`` and ``fixed`` hold ``(x, rep, y)`` triples (``rep`` a canonical
    basic generator).  Fixed terms are always present.  Solutions come back
    in lexicographic order of the unknown bit vector, zero before one.
    """
    limit = config.guard("solve_unknowns")
    if len(support) > limit:
        raise SizeLimit(f"solve_delta: {len(support)} unknowns exceed guard {limit}")
    d_atom, mul_atom = _d_atom_factory(circle)
    fixed, support = list(fixed), list(support)
    _check_distinct(support, fixed)
    eqs = _build_equations(support, fixed, d_atom, mul_atom)
    out = []
    for bits in _search(len(fixed), len(support), eqs):
        chosen = fixed + [t for t, b in zip(support, bits) if b]
        out.append(_assemble(circle, gens, idem, chosen))
    return out


def solve_delta_bruteforce(circle, gens, idem, support, fixed=()) -> list[TypeDStructure]:
    """Exhaustive reference for :func:`solve_delta` (same output order)."""
    out = []
    for bits in itertools.product((0, 1), repeat=len(support)):
        chosen = list(fixed) + [t for t, b in zip(support, bits) if b]
        cand = _assemble(circle, gens, idem, chosen)
        if verify_type_d(cand).ok:
            out.append(cand)
    return out


def solve_dd(
    left: PointedMatchedCircle,
    right: PointedMatchedCircle,
    gens: Sequence,
    idem: Mapping,
    support: Sequence[tuple],
    fixed: Sequence[tuple] = (),
) -> list[TypeDDBimodule]:
    """DD analogue of :func:`solve_delta`; atoms are ``(a_left, a_right)`` pairs."""
    limit = config.guard("solve_unknowns")
    if len(support) > limit:
        raise SizeLimit(f"solve_dd: {len(support)} unknowns exceed guard {limit}")
    la, ra = algebra_of(left), algebra_of(right)
    fixed, support = list(fixed), list(support)
    _check_distinct(support, fixed)
    eqs = _build_equations(
        support,
        fixed,
        lambda t: _dd_d(la, ra, t),
        lambda s, t: _dd_mul(la, ra, s, t),
    )
    out = []
    for bits in _search(len(fixed), len(support), eqs):
        chosen = fixed + [t for t, b in zip(support, bits) if b]
        delta: dict = defaultdict(set)
        for x, atom, y in chosen:
            delta[(x, y)] ^= {atom}
        out.append(TypeDDBimodule(left, right, tuple(gens), dict(idem), dict(delta)))
    return out


def _check_distinct(support, fixed) -> None:
    if len(set(support)) != len(support):
        raise ValueError("support lists a term twice")
    if set(support) & set(fixed):
        raise ValueError("a support term is already fixed")


def _assemble(circle, gens, idem, chosen) -> TypeDStructure:
    delta: dict = defaultdict(set)
    for x, rep, y in chosen:
        delta[(x, y)] ^= {rep}
    return TypeDStructure(
        circle,
        tuple(gens),
        dict(idem),
        {k: ArcAlgebraElement(circle, frozenset(v)) for k, v in delta.items()},
    )


# -- built-in torus-boundary pieces -------------------------------------------
#
# Torus chords (left-to-right products): rho1 = [1,2], rho2 = [2,3],
# rho3 = [3,4], rho12 = [1,3], rho23 = [2,4], rho123 = [1,4].  Pair 0 is
# {1,3} (iota0), pair 1 is {2,4} (iota1).
#
# Framing n is labelled so that Mor(D(n1), D(n2)) has rank |n1 - n2|
# (2 when n1 = n2) and rank 1 against "inf".

INF = "inf"


def _torus_chords():
    from .pmc import torus

    circle = torus()
    alg = algebra_of(circle)

    def rho(a, b):
        rep = ((a, b),)
        assert alg.is_canonical(rep)
        return rep

    names = {
        "1": rho(1, 2), "2": rho(2, 3), "3": rho(3, 4),
        "12": rho(1, 3), "23": rho(2, 4), "123": rho(1, 4),
    }
    return circle, names


def _check_framing(n) -> None:
    if n == INF:
        return
    if not isinstance(n, int):
        raise ValueError(f"framing must be an integer or {INF!r}, got {n!r}")
    limit = config.guard("framing")
    if abs(n) > limit:
        raise SizeLimit(f"framing {n} exceeds guard {limit}")


def builtin_solid_torus_d(framing) -> TypeDStructure:
    """Type D structure of the solid torus with the given boundary framing.

    ``n < 0``: generators x (iota0), g1..g|n| (iota1) with
    delta x = rho1 g1 + rho3 g|n| and delta g(i+1) = rho23 g(i); bounded.
    ``n > 0``: the cycle x -rho123-> g1 -rho23-> ... g(n) -rho2-> x.
    ``n = 0``: x at iota0 with a rho12 self-loop; ``inf``: x at iota1 with a rho23 self-loop.
    """
    _check_framing(framing)
    circle, rho = _torus_chords()
    i0, i1 = frozenset([0]), frozenset([1])
    terms: list[tuple] = []
    if framing == INF:
        gens, idem = ["x"], {"x": i1}
        terms.append(("x", rho["23"], "x"))
    elif framing == 0:
        gens, idem = ["x"], {"x": i0}
        terms.append(("x", rho["12"], "x"))
    else:
        m = abs(framing)
        gs = [f"g{i}" for i in range(1, m + 1)]
        gens = ["x"] + gs
        idem = {"x": i0, **{g: i1 for g in gs}}
        if framing < 0:
            terms.append(("x", rho["1"], "g1"))
            terms.append(("x", rho["3"], gs[-1]))
            for i in range(1, m):
                terms.append((gs[i], rho["23"], gs[i - 1]))
        else:
            terms.append(("x", rho["123"], "g1"))
            for i in range(1, m):
                terms.append((gs[i - 1], rho["23"], gs[i]))
            terms.append((gs[-1], rho["2"], "x"))
    return _assemble(circle, gens, idem, terms)


def periodic_solid_torus_a(framing) -> AInfModule:
    """One-generator periodic A-infinity models for framings 0 and ``inf``.

    ``inf``: x at iota0 with m(x, rho3, rho23^i, rho2) = x.
    ``0``: x at iota1 with m(x, rho2, rho12^i, rho1) = x.
    """
    circle, rho = _torus_chords()
    if framing == INF:
        fam = PeriodicFamily("x", (rho["3"],), (rho["23"],), (rho["2"],), frozenset(["x"]))
        return AInfModule(circle, ("x",), {"x": frozenset([0])}, {}, [fam])
    if framing == 0:
        fam = PeriodicFamily("x", (rho["2"],), (rho["12"],), (rho["1"],), frozenset(["x"]))
        return AInfModule(circle, ("x",), {"x": frozenset([1])}, {}, [fam])
    raise ValueError("periodic models exist only for framings 0 and 'inf'")


def builtin_solid_torus_a(framing, model: str = "dual") -> AInfModule:
    """A-side solid torus: the dual of the type D built-in, or the periodic model."""
    _check_framing(framing)
    if model == "dual":
        return dual_d_to_a(builtin_solid_torus_d(framing))
    if model == "periodic":
        return periodic_solid_torus_a(framing)
    raise ValueError(f"unknown model {model!r}")


# -- JSON schema ------------------------------------------------------------------

def _literal(circle: PointedMatchedCircle, text) -> Strands:
    from .arcalg import a_map
    from .errors import MalformedInput
    from .strands import parse_diagram

    if not isinstance(text, str):
        raise MalformedInput(f"coefficient {text!r}: expected a diagram literal string")
    elem = a_map(parse_diagram(text, circle.n_points), circle)
    if not elem:
        raise MalformedInput(f"coefficient {text!r}: diagram is not equitable for this circle")
    return next(iter(elem.gens))


def _idem_field(raw, where: str, n_pairs: int, allow_none: bool):
    from .errors import MalformedInput

    if raw is None:
        if allow_none:
            return None
        raise MalformedInput(f"{where}: idempotent required")
    if not isinstance(raw, list) or not all(isinstance(p, int) for p in raw):
        raise MalformedInput(f"{where}: expected a list of pair indices")
    if any(not 0 <= p < n_pairs for p in raw) or len(set(raw)) != len(raw):
        raise MalformedInput(f"{where}: pair indices must be distinct and in 0..{n_pairs - 1}")
    return frozenset(raw)


def module_from_json(doc: dict):
    """Parse the module schema into a TypeDStructure, AInfModule, DD or DA bimodule."""
    from .errors import MalformedInput
    from .pmc import from_json as pmc_from_json

    if not isinstance(doc, dict):
        raise MalformedInput("module: expected a JSON object")
    for key in ("algebra", "side", "generators", "delta"):
        if key not in doc:
            raise MalformedInput(f"{key}: missing")
    side = doc["side"]
    if side not in ("D", "A", "DD", "DA"):
        raise MalformedInput(f"side: {side!r} is not one of D, A, DD, DA")
    left = pmc_from_json(doc["algebra"])
    right = pmc_from_json(doc["right_algebra"]) if "right_algebra" in doc else left
    gens, idem = [], {}
    for i, g in enumerate(doc["generators"]):
        if not isinstance(g, dict) or "name" not in g:
            raise MalformedInput(f"generators[{i}].name: missing")
        name = str(g["name"])
        if name in idem:
            raise MalformedInput(f"generators[{i}].name: duplicate {name!r}")
        raw = g.get("idempotent")
        where = f"generators[{i}].idempotent"
        if side in ("D", "A"):
            idem[name] = _idem_field(raw, where, len(left.pairs), allow_none=(side == "D"))
        else:
            if not isinstance(raw, list) or len(raw) != 2:
                raise MalformedInput(f"{where}: expected [left pairs, right pairs]")
            idem[name] = (
                _idem_field(raw[0], where, len(left.pairs), False),
                _idem_field(raw[1], where, len(right.pairs), False),
            )
        gens.append(name)
    entries = doc["delta"]
    if not isinstance(entries, list):
        raise MalformedInput("delta: expected a list")
    for i, e in enumerate(entries):
        if not isinstance(e, dict):
            raise MalformedInput(f"delta[{i}]: expected an object")
        for key in ("from", "to"):
            if str(e.get(key)) not in idem:
                raise MalformedInput(f"delta[{i}].{key}: unknown generator {e.get(key)!r}")
    try:
        if side == "D":
            terms = []
            for i, e in enumerate(entries):
                for c in e.get("coeffs", []):
                    terms.append((str(e["from"]), _literal(left, c), str(e["to"])))
            return _assemble(left, gens, idem, terms)
        if side == "A":
            ops: dict = defaultdict(set)
            fams = []
            for e in entries:
                src, dst = str(e["from"]), str(e["to"])
                if "repeat" in e:
                    fams.append(PeriodicFamily(
                        src,
                        tuple(_literal(left, c) for c in e.get("prefix", [])),
                        tuple(_literal(left, c) for c in e["repeat"]),
                        tuple(_literal(left, c) for c in e.get("suffix", [])),
                        frozenset([dst]),
                    ))
                else:
                    key = (src, tuple(_literal(left, c) for c in e.get("coeffs", [])))
                    ops[key] ^= {dst}
            return AInfModule(left, tuple(gens), idem, dict(ops), fams)
        if side == "DD":
            delta: dict = defaultdict(set)
            for i, e in enumerate(entries):
                for pair in e.get("coeffs", []):
                    if not isinstance(pair, list) or len(pair) != 2:
                        raise MalformedInput(f"delta[{i}].coeffs: DD terms are [left, right] literal pairs")
                    delta[(str(e["from"]), str(e["to"]))] ^= {(_literal(left, pair[0]), _literal(right, pair[1]))}
            return TypeDDBimodule(left, right, tuple(gens), idem, dict(delta))
        ops = defaultdict(set)
        for e in entries:
            key = (str(e["from"]), tuple(_literal(right, c) for c in e.get("inputs", [])))
            for c in e.get("coeffs", []):
                ops[key] ^= {(_literal(left, c), str(e["to"]))}
        return TypeDABimodule(left, right, tuple(gens), idem, dict(ops), [])
    except ValueError as exc:
        raise MalformedInput(str(exc)) from None


def module_to_json(m) -> dict:
    """Inverse of :func:`module_from_json` for type D structures and table A-modules."""
    def lit(circle, rep):
        return _name(circle, rep)

    def idem_out(v):
        return None if v is None else sorted(v)

    if isinstance(m, TypeDStructure):
        delta = []
        for (x, y), a in sorted(m.delta.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1]))):
            delta.append({"from": x, "coeffs": [lit(m.circle, r) for r in a], "to": y})
        return {
            "algebra": m.circle.to_json(),
            "side": "D",
            "generators": [{"name": g, "idempotent": idem_out(m.idem[g])} for g in m.gens],
            "delta": delta,
        }
    if isinstance(m, AInfModule):
        if isinstance(m, MorDual):
            m = m.materialize()
        delta = []
        for (x, ins), outs in sorted(m.ops.items(), key=lambda kv: (str(kv[0][0]), [sort_key(r) for r in kv[0][1]])):
            for y in sorted(outs, key=str):
                delta.append({"from": x, "coeffs": [lit(m.circle, r) for r in ins], "to": y})
        for f in m.families:
            for y in sorted(f.outputs, key=str):
                delta.append({
                    "from": f.source,
                    "prefix": [lit(m.circle, r) for r in f.prefix],
                    "repeat": [lit(m.circle, r) for r in f.repeat],
                    "suffix": [lit(m.circle, r) for r in f.suffix],
                    "to": y,
                })
        return {
            "algebra": m.circle.to_json(),
            "side": "A",
            "generators": [{"name": str(g), "idempotent": sorted(m.idem[g])} for g in m.gens],
            "delta": delta,
        }
    raise TypeError(f"cannot serialize {type(m).__name__}")
