"""Gluing: box tensor products, Mor complexes and Hochschild complexes.

Every complex is checked for ``boundary^2 = 0`` before it is returned, so a
``NotAComplex`` error here points at invalid input modules.
"""

from __future__ import annotations

from collections import defaultdict

from .arcalg import ArcAlgebraElement, algebra_of
from .errors import AlgebraMismatch, NotSelfGluable, UnboundedPair
from .f2 import ChainComplexF2
from .modules import AInfModule, TypeDABimodule, TypeDStructure, delta_paths, is_bounded


def _same_circle(a, b, what: str) -> None:
    if a != b:
        raise AlgebraMismatch(f"{what}: modules live over different algebras")


def _path_cap(m_arity: int | None, n: TypeDStructure) -> int | None:
    """Length cap for delta paths of ``n``, or None for 'all paths' (n bounded)."""
    n_bounded = is_bounded(n)
    if m_arity is None and not n_bounded:
        raise UnboundedPair("both factors are unbounded; refusing to truncate")
    if n_bounded:
        return None if m_arity is None else m_arity
    return m_arity


def box_tensor(m: AInfModule, n: TypeDStructure) -> ChainComplexF2:
    """The complex M box N: d(x (x) y) = sum m_{k+1}(x, a_1..a_k) (x) y'."""
    _same_circle(m.circle, n.circle, "box_tensor")
    n.check_idempotents()
    cap = _path_cap(m.max_arity(), n)
    basis = [(x, y) for x in m.gens for y in n.gens if m.idem[x] == n.idem[y]]
    alive = set(basis)
    paths = {y: delta_paths(n, y, cap if cap is not None else None) for y in n.gens}
    d: dict = {}
    for x, y in basis:
        acc: set = set()
        for (seq, y2), _ in paths[y].items():
            for x2 in m.m(x, seq):
                if (x2, y2) in alive:
                    acc ^= {(x2, y2)}
        d[(x, y)] = acc
    return ChainComplexF2.from_map(basis, d).check()


def box_da_d(b: TypeDABimodule, n: TypeDStructure) -> TypeDStructure:
    """B box N as a type D structure over B's left algebra; generators are ``'x|y'``."""
    _same_circle(b.right, n.circle, "box_da_d")
    n.check_idempotents()
    cap = _path_cap(b.max_arity(), n)
    gens, idem, names = [], {}, {}
    for x in b.gens:
        for y in n.gens:
            if b.idem[x][1] == n.idem[y]:
                name = f"{x}|{y}"
                gens.append(name)
                idem[name] = b.idem[x][0]
                names[(x, y)] = name
    delta: dict = defaultdict(set)
    for (x, y), src in names.items():
        for (seq, y2), _ in delta_paths(n, y, cap).items():
            for rep, x2 in b.delta(x, seq):
                tgt = names.get((x2, y2))
                if tgt is not None:
                    delta[(src, tgt)] ^= {rep}
    coeffs = {k: ArcAlgebraElement(b.left, frozenset(v)) for k, v in delta.items() if v}
    return TypeDStructure(b.left, tuple(gens), idem, coeffs)


def mor_basis(m1: TypeDStructure, m2: TypeDStructure) -> list[tuple]:
    alg = algebra_of(m1.circle)
    out = []
    for x in m1.gens:
        ix = m1.idem[x]
        for y in m2.gens:
            iy = m2.idem[y]
            if ix is None or iy is None:
                raise ValueError("Mor needs explicit idempotents on both sides")
            if len(ix) != len(iy):
                continue
            for rep in alg.basis_weight(len(ix)):
                if alg.left_idem(rep) == ix and alg.right_idem(rep) == iy:
                    out.append((x, rep, y))
    return out


def mor_complex_d(m1: TypeDStructure, m2: TypeDStructure) -> ChainComplexF2:
    """Mor(M1, M2) over A.

    A basis map ``f = (x -> a (x) y)`` has differential
    ``d(a)`` at (x, y), plus ``a b`` at (x, y') for each ``b (x) y'`` in
    delta(y), plus ``c a`` at (x', y) for each ``c (x) x`` in delta(x').
    Products read left to right, as in the strands algebra.
    """
    _same_circle(m1.circle, m2.circle, "mor_complex_d")
    m1.check_idempotents()
    m2.check_idempotents()
    alg = algebra_of(m1.circle)
    basis = mor_basis(m1, m2)
    d: dict = {}
    into: dict = defaultdict(list)  # x -> [(x', c)] with c (x) x in delta(x')
    for (xp, x), coeff in m1.delta.items():
        for c in coeff:
            into[x].append((xp, c))
    for x, a, y in basis:
        acc: set = set()
        for a2 in alg.d_gen(a):
            acc ^= {(x, a2, y)}
        for b, y2 in m2.out_edges(y):
            for p in alg.mul_gens(a, b):
                acc ^= {(x, p, y2)}
        for xp, c in into[x]:
            for p in alg.mul_gens(c, a):
                acc ^= {(xp, p, y)}
        d[(x, a, y)] = acc
    return ChainComplexF2.from_map(basis, d).check()


def hochschild(b: TypeDABimodule) -> ChainComplexF2:
    """Cyclic self-pairing of a DA bimodule whose two sides share one algebra.

    Carriers are generators with equal left and right idempotents.  The
    differential of ``x`` collects idempotent outputs ``b (x) x2`` of
    ``delta^1_{1+n}(x, a_1..a_n)``, where ``a_1..a_n`` are the non-idempotent
    left outputs read along a ``delta^1_1`` path from ``x2`` to a carrier ``y``;
    each such configuration contributes ``y``.
    """
    if b.left != b.right:
        raise NotSelfGluable("left and right algebras differ")
    if not b.bounded or not b.d_graph_bounded():
        raise UnboundedPair("Hochschild complex needs a bounded bimodule")
    la = algebra_of(b.left)
    # delta^1_1 graph: x -> [(rep, y)]
    step: dict = defaultdict(list)
    for x in b.gens:
        for rep, y in b.delta(x, ()):
            step[x].append((rep, y))
    carriers = [x for x in b.gens if b.idem[x][0] == b.idem[x][1]]
    carrier_set = set(carriers)

    # all delta^1_1 paths from each generator, keeping non-idempotent labels
    def paths_from(start):
        out = defaultdict(int)
        stack = [((), start)]
        while stack:
            seq, g = stack.pop()
            out[(seq, g)] ^= 1
            for rep, h in step[g]:
                if la.is_idempotent_rep(rep):
                    continue
                stack.append((seq + (rep,), h))
        return out

    paths = {g: paths_from(g) for g in b.gens}
    d: dict = {}
    for x in carriers:
        acc: set = set()
        for x2 in b.gens:
            for (seq, y), par in paths[x2].items():
                if not par or y not in carrier_set:
                    continue
                if not seq:
                    # n = 0: delta^1_1(x) itself with idempotent output
                    if x2 != y:
                        continue
                    outs = b.delta(x, ())
                else:
                    outs = b.delta(x, seq)
                for rep, tgt in outs:
                    if tgt == x2 and la.is_idempotent_rep(rep):
                        acc ^= {y}
        d[x] = acc
    return ChainComplexF2.from_map(carriers, d).check()


def boundary_sum_d(n1: TypeDStructure, n2: TypeDStructure, circle) -> TypeDStructure:
    """Boundary connected sum of two torus-boundary type D structures.

    ``circle`` must be the split genus-2 circle (1-3, 2-4, 5-7, 6-8).  Points
    1..4 carry ``n1`` and 5..8 carry ``n2``; the idempotent of a product
    generator is the union of the shifted pair sets, and delta acts on one
    factor at a time with the other idempotent as a horizontal strand.
    """
    if circle.k != 2 or circle.match != (3, 4, 1, 2, 7, 8, 5, 6):
        raise AlgebraMismatch("boundary_sum_d needs the split genus-2 circle")
    for part in (n1, n2):
        if part.circle.k != 1:
            raise AlgebraMismatch("boundary_sum_d glues torus-boundary pieces")
    shift_pair = {0: 2, 1: 3}

    def lift(rep, horizontal_pairs, offset):
        moved = tuple((s + offset, t + offset) for s, t in rep)
        extra = tuple((circle.pairs[p][0], circle.pairs[p][0]) for p in horizontal_pairs)
        return tuple(sorted(moved + extra))

    gens, idem = [], {}
    for x in n1.gens:
        for y in n2.gens:
            name = f"{x}#{y}"
            gens.append(name)
            idem[name] = frozenset(n1.idem[x]) | frozenset(shift_pair[p] for p in n2.idem[y])
    delta: dict = defaultdict(set)
    for x in n1.gens:
        for y in n2.gens:
            right_pairs = [shift_pair[p] for p in n2.idem[y]]
            for rep, x2 in n1.out_edges(x):
                delta[(f"{x}#{y}", f"{x2}#{y}")] ^= {lift(rep, right_pairs, 0)}
            for rep, y2 in n2.out_edges(y):
                delta[(f"{x}#{y}", f"{x}#{y2}")] ^= {lift(rep, sorted(n1.idem[x]), 4)}
    coeffs = {k: ArcAlgebraElement(circle, frozenset(v)) for k, v in delta.items() if v}
    return TypeDStructure(circle, tuple(gens), idem, coeffs)


__all__ = [
    "box_tensor",
    "box_da_d",
    "mor_basis",
    "mor_complex_d",
    "hochschild",
    "boundary_sum_d",
]
