"""The strands algebra A(n) over F2.

A basis diagram is stored as its graph: a tuple of ``(s, phi(s))`` pairs
sorted by ``s``.  Products are read left to right, so ``x * y`` is nonzero
only when the targets of ``x`` are the sources of ``y``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .errors import MalformedInput

Strands = tuple[tuple[int, int], ...]


# -- raw tuple kernels (hot paths, used by arcalg as well) ---------------------

def inv_count(strands: Strands) -> int:
    targets = [t for _, t in strands]
    count = 0
    for i in range(len(targets)):
        ti = targets[i]
        for j in range(i + 1, len(targets)):
            if targets[j] < ti:
                count += 1
    return count


def compose(x: Strands, y: Strands) -> Strands | None:
    """Product of two basis diagrams, or ``None`` when it vanishes."""
    if len(x) != len(y):
        return None
    ymap = dict(y)
    out = []
    for s, t in x:
        u = ymap.get(t)
        if u is None:
            return None
        out.append((s, u))
    result = tuple(out)
    if inv_count(result) != inv_count(x) + inv_count(y):
        return None
    return result


def resolve(x: Strands) -> list[Strands]:
    """Terms of the differential of one basis diagram."""
    base = inv_count(x)
    if base == 0:
        return []
    out = []
    m = len(x)
    for i in range(m):
        for j in range(i + 1, m):
            if x[j][1] < x[i][1]:
                swapped = list(x)
                swapped[i] = (x[i][0], x[j][1])
                swapped[j] = (x[j][0], x[i][1])
                cand = tuple(swapped)
                if inv_count(cand) == base - 1:
                    out.append(cand)
    return out


def sort_key(x: Strands):
    return (tuple(s for s, _ in x), tuple(sorted(t for _, t in x)), x)


# -- public types ---------------------------------------------------------------

@dataclass(frozen=True, order=False)
class StrandDiagram:
    n: int
    strands: Strands

    def __post_init__(self):
        seen_t = set()
        prev = 0
        for s, t in self.strands:
            if not (1 <= s <= self.n and 1 <= t <= self.n):
                raise ValueError(f"strand {s}->{t} outside 1..{self.n}")
            if s <= prev:
                raise ValueError("sources must be strictly increasing")
            if t < s:
                raise ValueError(f"strand {s}->{t} moves backwards")
            if t in seen_t:
                raise ValueError(f"target {t} used twice")
            seen_t.add(t)
            prev = s

    @classmethod
    def from_map(cls, n: int, phi: dict[int, int]) -> "StrandDiagram":
        return cls(n, tuple(sorted(phi.items())))

    @property
    def S(self) -> tuple[int, ...]:
        return tuple(s for s, _ in self.strands)

    @cached_property
    def T(self) -> tuple[int, ...]:
        return tuple(sorted(t for _, t in self.strands))

    @property
    def phi(self) -> dict[int, int]:
        return dict(self.strands)

    @property
    def weight(self) -> int:
        return len(self.strands)

    def is_idempotent(self) -> bool:
        return all(s == t for s, t in self.strands)

    def __lt__(self, other: "StrandDiagram") -> bool:
        return (self.n, sort_key(self.strands)) < (other.n, sort_key(other.strands))

    def __mul__(self, other):
        return AlgebraElement.of(self) * AlgebraElement.of(other)

    def __str__(self) -> str:
        return format_diagram(self)


@dataclass(frozen=True)
class AlgebraElement:
    """An F2 combination of basis diagrams of A(n); presence means coefficient 1."""

    n: int
    terms: frozenset = frozenset()

    @classmethod
    def of(cls, *diagrams: StrandDiagram) -> "AlgebraElement":
        if not diagrams:
            raise ValueError("need at least one diagram to infer n")
        n = diagrams[0].n
        acc: set = set()
        for d in diagrams:
            if d.n != n:
                raise ValueError("mixed ambient sizes")
            acc ^= {d}
        return cls(n, frozenset(acc))

    @classmethod
    def zero(cls, n: int) -> "AlgebraElement":
        return cls(n, frozenset())

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[StrandDiagram]:
        return iter(sorted(self.terms))

    def __len__(self) -> int:
        return len(self.terms)

    def _check(self, other: "AlgebraElement") -> None:
        if other.n != self.n:
            raise ValueError(f"A({self.n}) and A({other.n}) do not mix")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(self.n, self.terms ^ other.terms)

    def __mul__(self, other):
        if isinstance(other, StrandDiagram):
            other = AlgebraElement.of(other)
        self._check(other)
        acc: set = set()
        for x in self.terms:
            for y in other.terms:
                z = compose(x.strands, y.strands)
                if z is not None:
                    acc ^= {StrandDiagram(self.n, z)}
        return AlgebraElement(self.n, frozenset(acc))

    def weights(self) -> set[int]:
        return {d.weight for d in self.terms}

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(format_diagram(d) for d in self)


# -- operations -----------------------------------------------------------------

def inversions(x: StrandDiagram) -> tuple[set[tuple[int, int]], int]:
    """Inversion pairs ``(s1, s2)`` with ``s1 < s2`` and ``phi(s2) < phi(s1)``."""
    inv = {
        (s1, s2)
        for (s1, t1), (s2, t2) in itertools.combinations(x.strands, 2)
        if t2 < t1
    }
    return inv, len(inv)


def multiply(x, y) -> AlgebraElement:
    if isinstance(x, StrandDiagram):
        x = AlgebraElement.of(x)
    return x * y


def differential(x) -> AlgebraElement:
    if isinstance(x, StrandDiagram):
        x = AlgebraElement.of(x)
    acc: set = set()
    for d in x.terms:
        for r in resolve(d.strands):
            acc ^= {StrandDiagram(x.n, r)}
    return AlgebraElement(x.n, frozenset(acc))


def basis(n: int, weight: int | None = None) -> list[StrandDiagram]:
    """All basis diagrams of A(n), optionally restricted to one weight."""
    weights = range(n + 1) if weight is None else [weight]
    out = []
    for w in weights:
        if not 0 <= w <= n:
            raise ValueError(f"weight {w} outside 0..{n}")
        for S in itertools.combinations(range(1, n + 1), w):
            for strands in _upward_maps(S, n):
                out.append(StrandDiagram(n, strands))
    out.sort()
    return out


def _upward_maps(S: tuple[int, ...], n: int) -> Iterator[Strands]:
    def rec(i: int, used: frozenset, acc: list):
        if i == len(S):
            yield tuple(acc)
            return
        s = S[i]
        for t in range(s, n + 1):
            if t not in used:
                acc.append((s, t))
                yield from rec(i + 1, used | {t}, acc)
                acc.pop()

    yield from rec(0, frozenset(), [])


def identity(n: int, S: Iterable[int]) -> StrandDiagram:
    return StrandDiagram(n, tuple((s, s) for s in sorted(S)))


# -- literal syntax -------------------------------------------------------------
#
#   diagram := "S={" ints "}" "T={" ints "}" "phi=[" maps "]"
#   ints    := (int ("," int)*)?
#   maps    := (int ">" int ("," int ">" int)*)?
#
# Whitespace between the three fields is free.  T must equal the image of phi.

_LITERAL = re.compile(
    r"^\s*S=\{(?P<S>[\d,\s]*)\}\s*T=\{(?P<T>[\d,\s]*)\}\s*phi=\[(?P<phi>[\d,>\s]*)\]\s*$"
)


def _ints(text: str) -> list[int]:
    text = text.strip()
    return [int(v) for v in text.split(",")] if text else []


def parse_diagram(text: str, n: int) -> StrandDiagram:
    m = _LITERAL.match(text)
    if not m:
        raise MalformedInput(f"diagram literal {text!r} does not match S={{..}} T={{..}} phi=[..]")
    S, T = _ints(m["S"]), _ints(m["T"])
    phi: dict[int, int] = {}
    body = m["phi"].strip()
    if body:
        for item in body.split(","):
            a, sep, b = item.partition(">")
            if not sep:
                raise MalformedInput(f"phi entry {item!r} lacks '>'")
            phi[int(a)] = int(b)
    if sorted(phi) != sorted(S) or sorted(phi.values()) != sorted(T):
        raise MalformedInput(f"diagram literal {text!r}: phi does not map S onto T")
    try:
        return StrandDiagram.from_map(n, phi)
    except ValueError as exc:
        raise MalformedInput(f"diagram literal {text!r}: {exc}") from None


def format_diagram(x: StrandDiagram) -> str:
    S = ",".join(str(s) for s in x.S)
    T = ",".join(str(t) for t in x.T)
    phi = ",".join(f"{s}>{t}" for s, t in x.strands)
    return f"S={{{S}}} T={{{T}}} phi=[{phi}]"
