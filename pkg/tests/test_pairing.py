from __future__ import annotations

import itertools
import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from bfk import f2, modules as M, pmc
from bfk.arcalg import ArcAlgebraElement, algebra_of, idempotent
from bfk.errors import AlgebraMismatch, NotSelfGluable, UnboundedPair
from bfk.pairing import boundary_sum_d, box_da_d, box_tensor, hochschild, mor_basis, mor_complex_d

from oracles import dense_rank
from test_modules import random_bounded


def random_valid(rng: random.Random, size: int) -> M.TypeDStructure:
    """A random bounded type D structure: one solution over a random acyclic support."""
    base = random_bounded(rng, size)
    support = [(x, r, y) for (x, y), a in sorted(base.delta.items(), key=str) for r in sorted(a)][:12]
    return rng.choice(M.solve_delta(T2, base.gens, base.idem, support))

T2 = pmc.torus()
ALG = algebra_of(T2)
I0, I1 = frozenset([0]), frozenset([1])
FRAMINGS = [M.INF] + list(range(-3, 4))


def expected_rank(a, b):
    """Lens-space rule for gluing two framed solid tori along the torus."""
    if a == b:
        return 2
    if M.INF in (a, b):
        return 1
    return abs(a - b)


def oracle_homology(c: f2.ChainComplexF2) -> int:
    n = len(c.basis)
    mat = [[0] * n for _ in range(n)]
    for r, col in c.boundary.entries:
        mat[r][col] = 1
    return n - 2 * dense_rank(mat)


# -- box tensor ------------------------------------------------------------------

def test_trivial_box_counts_matched_pairs():
    m = M.AInfModule(T2, ["p", "q", "r"], {"p": I0, "q": I1, "r": I0})
    n = M.TypeDStructure(T2, ["x", "y"], {"x": I0, "y": I0})
    c = box_tensor(m, n)
    assert len(c) == 4 and c.boundary.is_zero()
    assert f2.homology_dim(c) == 4


def test_s3_configuration():
    c = box_tensor(M.builtin_solid_torus_a(M.INF), M.builtin_solid_torus_d(0))
    assert f2.homology_dim(c) == 1


@pytest.mark.parametrize("framing", FRAMINGS)
def test_s2xs1_configuration(framing):
    c = box_tensor(M.builtin_solid_torus_a(framing), M.builtin_solid_torus_d(framing))
    assert f2.homology_dim(c) == 2


@pytest.mark.parametrize("a,b", list(itertools.product(FRAMINGS, repeat=2)))
def test_box_table(a, b):
    c = box_tensor(M.builtin_solid_torus_a(a), M.builtin_solid_torus_d(b))
    assert f2.homology_dim(c) == expected_rank(a, b)
    assert oracle_homology(c) == expected_rank(a, b)


@pytest.mark.parametrize("b", [-3, -2, -1])
def test_periodic_models_agree_with_duals(b):
    d = M.builtin_solid_torus_d(b)
    for a in (M.INF, 0):
        got = f2.homology_dim(box_tensor(M.periodic_solid_torus_a(a), d))
        assert got == expected_rank(a, b)


def test_unbounded_pair_refused():
    with pytest.raises(UnboundedPair):
        box_tensor(M.periodic_solid_torus_a(M.INF), M.builtin_solid_torus_d(0))


def test_algebra_mismatch():
    g2 = pmc.split_genus2()
    n = M.TypeDStructure(g2, ["x"], {"x": frozenset([0, 2])})
    with pytest.raises(AlgebraMismatch):
        box_tensor(M.builtin_solid_torus_a(0), n)
    with pytest.raises(AlgebraMismatch):
        mor_complex_d(M.builtin_solid_torus_d(0), n)


def _count_formula(m, n):
    cm = Counter(m.idem[x] for x in m.gens)
    cn = Counter(n.idem[y] for y in n.gens)
    return sum(cm[e] * cn[e] for e in cm)


@given(st.integers(0, 10_000), st.integers(1, 5), st.sampled_from(FRAMINGS))
def test_generator_count_and_reduce(seed, size, framing):
    n = random_valid(random.Random(seed), size)
    m = M.builtin_solid_torus_a(framing)
    c = box_tensor(m, n)
    assert len(c) == _count_formula(m, n)
    assert c.squares_to_zero()
    r = f2.reduce(c)
    assert r.boundary.is_zero()
    assert len(r) == f2.homology_dim(c) == oracle_homology(c)


def _with_cancelling_pair(n: M.TypeDStructure, idem) -> M.TypeDStructure:
    """Add u -> v with an idempotent coefficient: a contractible summand."""
    delta = dict(n.delta)
    delta[("u", "v")] = idempotent(T2, sorted(idem))
    gens = n.gens + ("u", "v")
    return M.TypeDStructure(T2, gens, {**n.idem, "u": idem, "v": idem}, delta)


@given(st.integers(0, 10_000), st.integers(1, 5), st.sampled_from([I0, I1]))
def test_box_respects_homotopy_equivalence(seed, size, idem):
    n = random_valid(random.Random(seed), size)
    n2 = _with_cancelling_pair(n, idem)
    assert M.verify_type_d(n2).ok
    for framing in (M.INF, 0, 2):
        m = M.builtin_solid_torus_a(framing)
        assert f2.homology_dim(box_tensor(m, n)) == f2.homology_dim(box_tensor(m, n2))


# -- DA box D -----------------------------------------------------------------------

@pytest.mark.parametrize("framing", FRAMINGS)
def test_identity_da_is_neutral(framing):
    d = M.builtin_solid_torus_d(framing)
    out = box_da_d(M.identity_da(T2), d)
    assert M.verify_type_d(out).ok
    rename = {}
    for g in out.gens:
        _, y = g.split("|")
        rename[g] = y
    assert sorted(rename.values()) == sorted(d.gens)
    assert {rename[g]: out.idem[g] for g in out.gens} == {y: d.idem[y] for y in d.gens}
    moved = {(rename[a], rename[b]): c.gens for (a, b), c in out.delta.items()}
    assert moved == {k: c.gens for k, c in d.delta.items()}


def test_identity_da_preserves_mor():
    d = M.builtin_solid_torus_d(-2)
    out = box_da_d(M.identity_da(T2), d)
    assert f2.homology_dim(mor_complex_d(out, d)) == f2.homology_dim(mor_complex_d(d, d)) == 2


def test_da_unbounded_pair():
    rho = M._torus_chords()[1]
    fam = M.PeriodicFamily("i0", (rho["3"],), (rho["23"],), (rho["2"],), frozenset([(rho["12"], "i0")]))
    b = M.identity_da(T2)
    looped = M.TypeDABimodule(T2, T2, b.gens, b.idem, b.ops, [fam])
    with pytest.raises(UnboundedPair):
        box_da_d(looped, M.builtin_solid_torus_d(0))


# -- Mor ----------------------------------------------------------------------------

def test_mor_one_generator_is_truncated_algebra():
    for circle, idem in ((T2, I0), (T2, I1), (pmc.split_genus2(), frozenset([0, 2]))):
        alg = algebra_of(circle)
        m = M.TypeDStructure(circle, ["x"], {"x": idem})
        c = mor_complex_d(m, m)
        reps = [r for r in alg.basis_weight(len(idem)) if alg.left_idem(r) == idem == alg.right_idem(r)]
        assert sorted(a for _, a, _ in c.basis) == sorted(reps)
        index = {r: i for i, r in enumerate(reps)}
        mat = [[0] * len(reps) for _ in reps]
        for r in reps:
            for z in alg.d_gen(r):
                mat[index[z]][index[r]] ^= 1
        assert f2.homology_dim(c) == len(reps) - 2 * dense_rank(mat)


def test_mor_composition_order():
    # delta x = rho1 y.  For f = (x -> a (x) x) the postcomposition term is a * rho1
    # at (x, y); nothing maps into x, so there is no precomposition term.
    rho = M._torus_chords()[1]
    n = M.TypeDStructure(
        T2, ["x", "y"], {"x": I0, "y": I1}, {("x", "y"): ArcAlgebraElement.basic(T2, rho["1"])}
    )
    c = mor_complex_d(n, n)
    j = c.basis.index(("x", rho["12"], "x"))
    image = {c.basis[r] for r, col in c.boundary.entries if col == j}
    # rho12 ends at 3 while rho1 starts at 1, so rho12 * rho1 = 0
    assert image == set()
    j = c.basis.index(("x", ALG.idempotent_rep([0]), "x"))
    image = {c.basis[r] for r, col in c.boundary.entries if col == j}
    assert image == {("x", rho["1"], "y")}


@pytest.mark.parametrize("a,b", list(itertools.product(FRAMINGS, repeat=2)))
def test_box_mor_consistency(a, b):
    d1, d2 = M.builtin_solid_torus_d(a), M.builtin_solid_torus_d(b)
    mor = f2.homology_dim(mor_complex_d(d1, d2))
    box = f2.homology_dim(box_tensor(M.dual_d_to_a(d1), d2))
    assert mor == box == expected_rank(a, b)


def test_mor_basis_requires_idempotents():
    n = M.TypeDStructure(T2, ["x"], {"x": None})
    with pytest.raises(ValueError):
        mor_basis(n, n)


# -- Hochschild ---------------------------------------------------------------------

def test_hochschild_trivial():
    gens = ["a", "b", "c"]
    idem = {"a": (I0, I0), "b": (I1, I1), "c": (I0, I1)}
    c = hochschild(M.TypeDABimodule(T2, T2, gens, idem))
    assert len(c) == 2 and c.boundary.is_zero()


def test_hochschild_identity():
    c = hochschild(M.identity_da(T2))
    assert c.squares_to_zero()
    assert f2.homology_dim(c) == oracle_homology(c) == 2
    assert hochschild(M.identity_da(T2)).to_text() == c.to_text()


def test_hochschild_genus2_identity_is_a_complex():
    g2 = pmc.split_genus2()
    c = hochschild(M.identity_da(g2))
    assert c.squares_to_zero()
    assert f2.homology_dim(c) == oracle_homology(c)


def test_hochschild_errors():
    g2 = pmc.split_genus2()
    with pytest.raises(NotSelfGluable):
        hochschild(M.TypeDABimodule(T2, g2, ["x"], {"x": (I0, frozenset([0]))}))
    rho = M._torus_chords()[1]
    fam = M.PeriodicFamily("i0", (rho["3"],), (rho["23"],), (rho["2"],), frozenset([(rho["12"], "i0")]))
    b = M.identity_da(T2)
    with pytest.raises(UnboundedPair):
        hochschild(M.TypeDABimodule(T2, T2, b.gens, b.idem, b.ops, [fam]))


# -- boundary sums ------------------------------------------------------------------

SMALL = [M.INF, -2, -1, 0, 1]


@pytest.mark.parametrize("a,b,extra", [(M.INF, 0, -1), (-1, -1, M.INF), (1, -2, 0), (-3, 2, 1)])
def test_kunneth_doubles_rank(a, b, extra):
    g2 = pmc.split_genus2()
    left = boundary_sum_d(M.builtin_solid_torus_d(a), M.builtin_solid_torus_d(extra), g2)
    right = boundary_sum_d(M.builtin_solid_torus_d(b), M.builtin_solid_torus_d(extra), g2)
    assert M.verify_type_d(left).ok and M.verify_type_d(right).ok
    single = f2.homology_dim(mor_complex_d(M.builtin_solid_torus_d(a), M.builtin_solid_torus_d(b)))
    assert f2.homology_dim(mor_complex_d(left, right)) == 2 * single
    if M.is_bounded(right):
        box = box_tensor(M.dual_d_to_a(left), right)
        assert f2.homology_dim(box) == 2 * single


@pytest.mark.parametrize("a1,a2,b1,b2", [(M.INF, 0, -1, 1), (-2, 0, 1, M.INF), (-1, -2, -1, -2)])
def test_boundary_sum_is_multiplicative(a1, a2, b1, b2):
    g2 = pmc.split_genus2()
    D = M.builtin_solid_torus_d
    left = boundary_sum_d(D(a1), D(a2), g2)
    right = boundary_sum_d(D(b1), D(b2), g2)
    got = f2.homology_dim(mor_complex_d(left, right))
    assert got == expected_rank(a1, b1) * expected_rank(a2, b2)


def test_boundary_sum_needs_split_circle():
    D = M.builtin_solid_torus_d
    with pytest.raises(AlgebraMismatch):
        boundary_sum_d(D(0), D(0), pmc.antipodal_genus2())
