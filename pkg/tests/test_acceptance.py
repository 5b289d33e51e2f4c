"""Acceptance criteria 1-7, one test per criterion.

Each test records a PASS or FAIL line with its wall time; the lines are
printed as the tests run and again in the terminal summary.
"""

from __future__ import annotations

import itertools
import random
import time
from contextlib import contextmanager

from bfk import arcalg, f2, modules as M, pmc
from bfk.arcalg import basis as a_basis, poincare_polynomial
from bfk.grading import check_algebra_grading
from bfk.pairing import boundary_sum_d, box_tensor, mor_complex_d
from bfk.strands import AlgebraElement, basis as s_basis, differential, multiply, parse_diagram

from test_f2 import random_complex
from test_modules import _support
from test_pairing import expected_rank, random_valid

RESULTS: list[str] = []
FRAMINGS = [M.INF] + list(range(-3, 4))


@contextmanager
def criterion(number: int, title: str, budget: float):
    start = time.perf_counter()
    status, note = "FAIL", ""
    try:
        yield
        elapsed = time.perf_counter() - start
        if elapsed > budget:
            note = f" (over budget {budget:.0f} s)"
        else:
            status = "PASS"
    except BaseException as exc:
        note = f" ({type(exc).__name__})"
        raise
    finally:
        elapsed = time.perf_counter() - start
        line = f"{status} criterion {number}: {title} [{elapsed:.2f} s]{note}"
        RESULTS.append(line)
        print(line)
    assert status == "PASS", line


def test_criterion_1_split_genus_two():
    with criterion(1, "Poincare polynomial of the split genus-2 algebra", 60):
        assert poincare_polynomial(pmc.split_genus2()) == [1, 32, 98, 32, 1]


def test_criterion_2_antipodal_genus_two():
    with criterion(2, "Poincare polynomial of the antipodal genus-2 algebra", 60):
        assert poincare_polynomial(pmc.antipodal_genus2()) == [1, 32, 70, 32, 1]


def test_criterion_3_structural_facts():
    with criterion(3, "bottom summands for every circle of genus <= 2", 120):
        for k in (0, 1, 2):
            dims = set()
            for z in pmc.enumerate_circles(k):
                assert f2.homology_dim(arcalg.differential_complex(z, -k)) == 1
                if k == 0:
                    continue
                piece = a_basis(z, -k + 1)
                assert all(not g.d() for g in piece)
                dims.add(len(piece))
            assert len(dims) <= 1


def test_criterion_4_gradability_obstruction():
    with criterion(4, "y.x = d((dx).y) and integer gradings are refuted", 30):
        z = pmc.torus()
        x = arcalg.a_map(parse_diagram("S={1,2} T={2,3} phi=[1>3,2>2]", 4), z)
        y = arcalg.a_map(parse_diagram("S={1,2} T={1,4} phi=[1>1,2>4]", 4), z)
        assert y * x and y * x == (x.d() * y).d()
        gens = a_basis(z, 1)
        reps = [next(iter(g.gens)) for g in gens]
        rng = random.Random(4)
        for _ in range(100):
            table = {r: rng.randint(-10, 10) for r in reps}
            assert not check_algebra_grading(gens, table).ok


def test_criterion_5_gluing_checkpoints():
    with criterion(5, "solid torus gluings and the Kunneth doubling", 5):
        D, A = M.builtin_solid_torus_d, M.builtin_solid_torus_a
        for n in FRAMINGS:
            assert f2.homology_dim(box_tensor(A(n), D(n))) == 2
        assert f2.homology_dim(box_tensor(A(M.INF), D(0))) == 1
        assert f2.homology_dim(box_tensor(M.periodic_solid_torus_a(M.INF), D(-1))) == 1
        g2 = pmc.split_genus2()
        for a, b, extra in [(M.INF, 0, -1), (-1, -1, M.INF), (1, -2, 0)]:
            single = f2.homology_dim(mor_complex_d(D(a), D(b)))
            left = boundary_sum_d(D(a), D(extra), g2)
            right = boundary_sum_d(D(b), D(extra), g2)
            assert f2.homology_dim(mor_complex_d(left, right)) == 2 * single


def test_criterion_6_box_mor_cross_validation():
    with criterion(6, "Mor and box ranks agree for framings |n| <= 3", 30):
        D = M.builtin_solid_torus_d
        for a, b in itertools.product(FRAMINGS, repeat=2):
            mor = f2.homology_dim(mor_complex_d(D(a), D(b)))
            box = f2.homology_dim(box_tensor(M.dual_d_to_a(D(a)), D(b)))
            assert mor == box == expected_rank(a, b)


def _strands_properties():
    for n in range(1, 5):
        b = s_basis(n)
        elems = [AlgebraElement.of(x) for x in b]
        for x in b:
            assert not differential(differential(x))
        for (x, ex), (y, ey) in itertools.product(zip(b, elems), repeat=2):
            assert differential(multiply(x, y)) == differential(x) * ey + ex * differential(y)
        by_source: dict = {}
        for x in b:
            by_source.setdefault(x.S, []).append(x)
        for x in b:
            for y in by_source.get(x.T, []):
                xy = multiply(x, y)
                for z in by_source.get(y.T, []):
                    assert xy * AlgebraElement.of(z) == AlgebraElement.of(x) * multiply(y, z)


def _torus_algebra_properties():
    z = pmc.torus()
    gens = [g for i in (-1, 0, 1) for g in a_basis(z, i)]
    for a in gens:
        assert not a.d().d()
    for a, b in itertools.product(gens, repeat=2):
        assert (a * b).d() == a.d() * b + a * b.d()


def _pairing_outputs():
    D = M.builtin_solid_torus_d
    for a, b in itertools.product(FRAMINGS, repeat=2):
        assert box_tensor(M.dual_d_to_a(D(a)), D(b)).squares_to_zero()
        assert mor_complex_d(D(a), D(b)).squares_to_zero()


def _reduce_suite():
    rng = random.Random(500)
    for _ in range(500):
        c = random_complex(rng, rng.randint(1, 30))
        r = f2.reduce(c)
        assert r.boundary.is_zero() and len(r) == f2.homology_dim(c)


def _dual_suite():
    rng = random.Random(6)
    sources = [M.builtin_solid_torus_d(n) for n in FRAMINGS]
    sources += [random_valid(rng, rng.randint(1, 4)) for _ in range(20)]
    for n in sources:
        assert M.verify_a_inf(M.dual_d_to_a(n), 6).ok


def _solver_suite():
    rng = random.Random(12)
    for _ in range(150):
        gens = [f"g{i}" for i in range(rng.randint(1, 4))]
        idem = {g: frozenset([rng.randrange(2)]) for g in gens}
        support = _support(rng, gens, idem, rng.randint(0, 12))
        fast = M.solve_delta(pmc.torus(), gens, idem, support)
        slow = M.solve_delta_bruteforce(pmc.torus(), gens, idem, support)
        assert [s.delta for s in fast] == [s.delta for s in slow]


def test_criterion_7_property_suites():
    with criterion(7, "algebra, pairing, reduce, dual and solver property suites", 300):
        _strands_properties()
        _torus_algebra_properties()
        _pairing_outputs()
        _reduce_suite()
        _dual_suite()
        _solver_suite()
