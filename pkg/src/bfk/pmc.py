"""Pointed matched circles.

Points are labelled ``1..4k`` in the orientation order of the circle, with
the basepoint sitting between ``4k`` and ``1``.  The matching is stored as a
tuple ``match`` with ``match[i-1]`` the partner of ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from . import config
from .errors import Disconnected, NotInvolution, SizeLimit


@dataclass(frozen=True)
class PointedMatchedCircle:
    k: int
    match: tuple[int, ...]

    def __post_init__(self):
        _check_involution(self.k, self.match)

    @property
    def n_points(self) -> int:
        return 4 * self.k

    def partner(self, i: int) -> int:
        return self.match[i - 1]

    @cached_property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        """Matched pairs ``(p, q)`` with ``p < q``, sorted by ``p``.

        The position of a pair in this tuple is its *pair index*; idempotents
        are sets of pair indices.
        """
        return tuple((i, self.partner(i)) for i in range(1, self.n_points + 1) if i < self.partner(i))

    @cached_property
    def pair_of(self) -> dict[int, int]:
        out = {}
        for idx, (p, q) in enumerate(self.pairs):
            out[p] = idx
            out[q] = idx
        return out

    def pair_list(self) -> list[list[int]]:
        return [list(p) for p in self.pairs]

    def to_json(self) -> dict:
        return {"genus": self.k, "matching": self.pair_list()}

    def __str__(self) -> str:
        body = ", ".join(f"{p}<->{q}" for p, q in self.pairs)
        return f"PMC(k={self.k}: {body})"


def _check_involution(k: int, match: Sequence[int]) -> None:
    n = 4 * k
    if k < 0:
        raise NotInvolution(f"genus must be non-negative, got {k}")
    if len(match) != n:
        raise NotInvolution(f"expected {n} points, matching covers {len(match)}")
    for i, j in enumerate(match, start=1):
        if not 1 <= j <= n:
            raise NotInvolution(f"point {i} matched to out-of-range {j}")
        if j == i:
            raise NotInvolution(f"point {i} is matched to itself")
        if match[j - 1] != i:
            raise NotInvolution(f"matching is not an involution at {i}")


def surgery_components(k: int, match: Sequence[int]) -> int:
    """Number of components after surgering the circle along matched pairs.

    Vertices are the boundary arcs of the cut circle: arc ``i`` runs from
    point ``i`` to point ``i+1`` and arc ``0`` runs from the basepoint to
    point ``1`` (arc ``4k`` runs from ``4k`` to the basepoint).  Arcs ``0``
    and ``4k`` meet at the basepoint.  The band at a matched pair ``{p, q}``
    joins the arc entering ``p`` to the arc leaving ``q`` and vice versa.
    """
    n = 4 * k
    if n == 0:
        return 1
    parent = list(range(n + 1))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    union(0, n)
    for p in range(1, n + 1):
        q = match[p - 1]
        union(p - 1, q)  # arc entering p continues along the arc leaving q
    return len({find(a) for a in range(n + 1)})


def validate(k: int, pairs: Iterable[Sequence[int]]) -> PointedMatchedCircle:
    """Build a circle from a genus and a list of matched pairs."""
    n = 4 * k
    match = [0] * n
    for pair in pairs:
        if len(pair) != 2:
            raise NotInvolution(f"pair {list(pair)} does not have two points")
        a, b = int(pair[0]), int(pair[1])
        for x in (a, b):
            if not 1 <= x <= n:
                raise NotInvolution(f"point {x} outside 1..{n}")
            if match[x - 1]:
                raise NotInvolution(f"point {x} appears in more than one pair")
        if a == b:
            raise NotInvolution(f"point {a} is matched to itself")
        match[a - 1] = b
        match[b - 1] = a
    missing = [i + 1 for i, j in enumerate(match) if j == 0]
    if missing:
        raise NotInvolution(f"points {missing} are unmatched")
    if surgery_components(k, match) != 1:
        raise Disconnected("surgery along the matched pairs is disconnected")
    return PointedMatchedCircle(k, tuple(match))


def genus(z: PointedMatchedCircle) -> int:
    return z.k


def reverse(z: PointedMatchedCircle) -> PointedMatchedCircle:
    """Orientation reversal: point ``i`` becomes ``4k+1-i``."""
    n = z.n_points
    match = [0] * n
    for i in range(1, n + 1):
        match[n - i] = n + 1 - z.partner(i)
    return PointedMatchedCircle(z.k, tuple(match))


def _matchings(points: list[int]):
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for idx, other in enumerate(rest):
        remaining = rest[:idx] + rest[idx + 1:]
        for tail in _matchings(remaining):
            yield [(first, other)] + tail


def enumerate_circles(k: int) -> list[PointedMatchedCircle]:
    """All valid circles with ``4k`` points, without quotienting symmetries."""
    if k > config.guard("pmc_genus"):
        raise SizeLimit(f"enumerate: genus {k} exceeds guard {config.guard('pmc_genus')}")
    out = []
    for pairs in _matchings(list(range(1, 4 * k + 1))):
        try:
            out.append(validate(k, pairs))
        except Disconnected:
            continue
    return out


def torus() -> PointedMatchedCircle:
    return validate(1, [(1, 3), (2, 4)])


def sphere() -> PointedMatchedCircle:
    return validate(0, [])


def split_genus2() -> PointedMatchedCircle:
    return validate(2, [(1, 3), (2, 4), (5, 7), (6, 8)])


def antipodal_genus2() -> PointedMatchedCircle:
    return validate(2, [(1, 5), (2, 6), (3, 7), (4, 8)])


def from_json(doc: dict) -> PointedMatchedCircle:
    from .errors import MalformedInput

    if not isinstance(doc, dict):
        raise MalformedInput("pmc: document must be an object")
    if "genus" not in doc:
        raise MalformedInput("pmc: missing field 'genus'")
    if "matching" not in doc:
        raise MalformedInput("pmc: missing field 'matching'")
    if not isinstance(doc["genus"], int):
        raise MalformedInput("pmc: field 'genus' must be an integer")
    if not isinstance(doc["matching"], list):
        raise MalformedInput("pmc: field 'matching' must be a list of pairs")
    return validate(doc["genus"], doc["matching"])
