"""The grading group G(F), G-set gradings, and grading checkers.

Half-integer Maslov components are stored doubled (``maslov2``) so the
arithmetic stays in the integers.  A checker never raises on bad data; it
returns a :class:`GradingReport` listing every violation it found.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Sequence

from .arcalg import ArcAlgebraElement, algebra_of, format_diagram
from .errors import FormMismatch
from .pmc import PointedMatchedCircle
from .strands import StrandDiagram


@dataclass(frozen=True)
class GradingGroup:
    """Central extension of Z^m by Z twisted by an antisymmetric form.

    ``parity`` fixes which elements belong to the subgroup of
    (1/2)Z x H1: ``maslov2`` must be congruent mod 2 to ``parity . h1``.
    The default (all zeros) keeps the Maslov component integral.
    """

    form: tuple[tuple[int, ...], ...]
    parity: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "form", tuple(tuple(int(v) for v in row) for row in self.form))
        if self.parity is not None:
            object.__setattr__(self, "parity", tuple(int(v) for v in self.parity))
        m = len(self.form)
        for i in range(m):
            if len(self.form[i]) != m:
                raise ValueError("intersection form must be square")
            for j in range(m):
                if self.form[i][j] != -self.form[j][i]:
                    raise ValueError("intersection form must be antisymmetric")
        if self.parity is not None and len(self.parity) != m:
            raise ValueError("parity vector has the wrong length")

    @property
    def rank(self) -> int:
        return len(self.form)

    def pairing(self, a: Sequence[int], b: Sequence[int]) -> int:
        return sum(a[i] * self.form[i][j] * b[j] for i in range(self.rank) for j in range(self.rank) if a[i] and b[j])

    def element(self, maslov2: int, h1: Sequence[int] | None = None) -> "GradingGroupElement":
        h1 = tuple(h1) if h1 is not None else (0,) * self.rank
        return GradingGroupElement(self, maslov2, h1)

    def identity(self) -> "GradingGroupElement":
        return self.element(0)

    def lam(self) -> "GradingGroupElement":
        return self.element(2)

    def contains(self, g: "GradingGroupElement") -> bool:
        par = self.parity or (0,) * self.rank
        return (g.maslov2 - sum(p * a for p, a in zip(par, g.h1))) % 2 == 0


@dataclass(frozen=True)
class GradingGroupElement:
    group: GradingGroup = field(repr=False)
    maslov2: int
    h1: tuple[int, ...]

    def __post_init__(self):
        if len(self.h1) != self.group.rank:
            raise ValueError(f"h1 vector must have length {self.group.rank}")

    def __mul__(self, other: "GradingGroupElement") -> "GradingGroupElement":
        return g_multiply(self, other)

    def inverse(self) -> "GradingGroupElement":
        # alpha . alpha = 0 for an antisymmetric form
        return GradingGroupElement(self.group, -self.maslov2, tuple(-a for a in self.h1))

    def __pow__(self, n: int) -> "GradingGroupElement":
        base = self if n >= 0 else self.inverse()
        out = self.group.identity()
        for _ in range(abs(n)):
            out = out * base
        return out

    @property
    def maslov(self) -> float:
        return self.maslov2 / 2

    def to_json(self) -> dict:
        return {"m2": self.maslov2, "h1": list(self.h1)}


def g_multiply(x: GradingGroupElement, y: GradingGroupElement) -> GradingGroupElement:
    if x.group.form != y.group.form:
        raise FormMismatch("elements belong to grading groups with different forms")
    m2 = x.maslov2 + y.maslov2 + 2 * x.group.pairing(x.h1, y.h1)
    h1 = tuple(a + b for a, b in zip(x.h1, y.h1))
    return GradingGroupElement(x.group, m2, h1)


def intersection_form(circle: PointedMatchedCircle) -> tuple[tuple[int, ...], ...]:
    """Form on the matched-pair basis: +-1 for interleaved pairs, else 0.

    For pairs ``(a, b)`` and ``(c, d)`` with ``a < c < b < d`` the entry is
    ``+1`` in position (first, second) and ``-1`` transposed.
    """
    pairs = circle.pairs
    m = len(pairs)
    form = [[0] * m for _ in range(m)]
    for i, j in itertools.combinations(range(m), 2):
        (a, b), (c, d) = pairs[i], pairs[j]
        if a < c < b < d:
            form[i][j], form[j][i] = 1, -1
        elif c < a < d < b:
            form[i][j], form[j][i] = -1, 1
    return tuple(tuple(r) for r in form)


def grading_group(circle: PointedMatchedCircle) -> GradingGroup:
    return GradingGroup(intersection_form(circle))


def h1_projection(g: GradingGroupElement) -> tuple[int, ...]:
    return g.h1


# -- generic group arithmetic (G(F) elements or plain integers) ---------------

def _mul(g, h):
    if isinstance(g, int) and isinstance(h, int):
        return g + h
    return g_multiply(g, h)


def _lam_inv(g):
    if isinstance(g, int):
        return g - 1
    return g.group.lam().inverse() * g


def _show(g) -> str:
    if isinstance(g, GradingGroupElement):
        return f"(m2={g.maslov2}, h1={list(g.h1)})"
    return repr(g)


@dataclass
class GradingReport:
    violations: list[str] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def _rep_of(key):
    if isinstance(key, ArcAlgebraElement):
        if len(key.gens) != 1:
            raise ValueError("grading keys must be basic generators")
        return next(iter(key.gens))
    return key


def check_algebra_grading(
    gens: Iterable[ArcAlgebraElement],
    gr: Mapping,
) -> GradingReport:
    """Check d(A_g) in A_{lambda^-1 g} and A_g A_h in A_{gh} on basic generators.

    ``gens`` are basic generators spanning a subalgebra piece; ``gr`` maps each
    (as an element or canonical representative) to a group element or an int.
    """
    gens = list(gens)
    report = GradingReport()
    if not gens:
        return report
    circle = gens[0].circle
    alg = algebra_of(circle)
    table = {_rep_of(k): v for k, v in gr.items()}
    reps = [_rep_of(g) for g in gens]

    def name(rep) -> str:
        return format_diagram(StrandDiagram(alg.n, rep))

    for rep in reps:
        if rep not in table:
            report.violations.append(f"missing grading for {name(rep)}")
    if report.violations:
        return report
    for a in reps:
        want = _lam_inv(table[a])
        for b in alg.d_gen(a):
            report.checked += 1
            if b not in table:
                report.violations.append(f"d({name(a)}) contains ungraded {name(b)}")
            elif table[b] != want:
                report.violations.append(
                    f"d({name(a)}) contains {name(b)}: grading {_show(table[b])} != {_show(want)}"
                )
    for a in reps:
        for b in reps:
            prod = alg.mul_gens(a, b)
            if not prod:
                continue
            want = _mul(table[a], table[b])
            for c in prod:
                report.checked += 1
                if c not in table:
                    report.violations.append(f"{name(a)} * {name(b)} contains ungraded {name(c)}")
                elif table[c] != want:
                    report.violations.append(
                        f"{name(a)} * {name(b)} contains {name(c)}: grading {_show(table[c])} != {_show(want)}"
                    )
    return report


# -- G-sets ---------------------------------------------------------------------

@dataclass
class GSet:
    """A finite carrier with a (left or right) action given by a table or callable."""

    elements: tuple
    act: Mapping | Callable
    side: str = "left"

    def apply(self, g, s):
        if callable(self.act):
            if self.side == "left":
                return self.act(g, s)
            return self.act(s, g)
        key = (g, s) if self.side == "left" else (s, g)
        return self.act[key]

    def check_action(self, samples: Sequence, identity, mul: Callable = _mul) -> list[str]:
        """Identity and compatibility laws on sampled group elements."""
        problems = []
        carrier = set(self.elements)
        for s in self.elements:
            try:
                if self.apply(identity, s) != s:
                    problems.append(f"identity moves {s!r}")
            except KeyError:
                problems.append(f"MalformedGSet: no action of identity on {s!r}")
        for g, h in itertools.product(samples, repeat=2):
            for s in self.elements:
                try:
                    if self.side == "left":
                        lhs = self.apply(mul(g, h), s)
                        rhs = self.apply(g, self.apply(h, s))
                    else:
                        lhs = self.apply(mul(g, h), s)
                        rhs = self.apply(h, self.apply(g, s))
                except KeyError as exc:
                    problems.append(f"MalformedGSet: action undefined at {exc}")
                    continue
                if lhs not in carrier:
                    problems.append(f"MalformedGSet: action leaves the carrier at {s!r}")
                elif lhs != rhs:
                    problems.append(f"action not compatible at {s!r}")
        return problems


@dataclass
class GSetGrading:
    carrier: GSet
    assignment: dict
    algebra_grading: dict
    lam: Any = None  # lambda for the group; defaults to 1 for integer gradings


def check_module_grading(module, grading: GSetGrading) -> GradingReport:
    """Check A_g M_s in M_gs and the differential lowering by lambda.

    For a type D structure this means ``gr(a) * gr(y) = lambda^-1 gr(x)``
    for every term ``a (x) y`` of ``delta1(x)``.
    """
    report = GradingReport()
    carrier = set(grading.carrier.elements)
    lam = grading.lam if grading.lam is not None else 1
    lam_inv = -1 if isinstance(lam, int) else lam.inverse()
    table = {_rep_of(k): v for k, v in grading.algebra_grading.items()}
    alg = algebra_of(module.circle)

    for x in module.gens:
        s = grading.assignment.get(x)
        if s is None:
            report.violations.append(f"generator {x!r} has no grading")
        elif s not in carrier:
            report.violations.append(f"MalformedGSet: grading of {x!r} is {s!r}, not in the carrier")
    if report.violations:
        return report

    for (x, y), coeff in sorted(module.delta.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1]))):
        for rep in coeff:
            report.checked += 1
            name = format_diagram(StrandDiagram(alg.n, rep))
            if rep not in table:
                report.violations.append(f"coefficient {name} of {x!r}->{y!r} is ungraded")
                continue
            try:
                lhs = grading.carrier.apply(table[rep], grading.assignment[y])
                rhs = grading.carrier.apply(lam_inv, grading.assignment[x])
            except KeyError as exc:
                report.violations.append(f"MalformedGSet: action undefined at {exc}")
                continue
            if lhs not in carrier or rhs not in carrier:
                report.violations.append(f"MalformedGSet: action leaves the carrier on {x!r}->{y!r}")
            elif lhs != rhs:
                report.violations.append(
                    f"{x!r} -> {name} (x) {y!r}: gr(a).gr(y) = {lhs!r} but lambda^-1 gr(x) = {rhs!r}"
                )
    return report


@dataclass
class LambdaSet:
    orbits: list[frozenset]
    lam: dict[int, int]

    def __len__(self) -> int:
        return len(self.orbits)


def gset_product(
    S: GSet,
    T: GSet,
    generators: Iterable,
    lam,
) -> LambdaSet:
    """Orbits of S x T under (s g, t) ~ (s, g t), with the induced lambda action.

    ``generators`` must generate the acting group (finite carriers only).
    """
    if S.side != "right" or T.side != "left":
        raise ValueError("gset_product needs a right G-set and a left G-set")
    gens = list(generators)
    for g in gens:
        if isinstance(g, GradingGroupElement) and isinstance(lam, GradingGroupElement):
            if g.group.form != lam.group.form:
                raise FormMismatch("generators and lambda come from different groups")
    pairs = [(s, t) for s in S.elements for t in T.elements]
    index = {p: i for i, p in enumerate(pairs)}
    parent = list(range(len(pairs)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for s, t in pairs:
        for g in gens:
            a = index[(S.apply(g, s), t)]
            b = index[(s, T.apply(g, t))]
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
    groups: dict[int, set] = {}
    for p, i in index.items():
        groups.setdefault(find(i), set()).add(p)
    orbits = sorted((frozenset(v) for v in groups.values()), key=lambda o: sorted(map(repr, o)))
    where = {p: k for k, o in enumerate(orbits) for p in o}
    lam_map = {}
    for k, o in enumerate(orbits):
        s, t = min(o, key=repr)
        lam_map[k] = where[(s, T.apply(lam, t))]
    return LambdaSet(orbits, lam_map)
