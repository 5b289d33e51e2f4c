"""Combinatorial bordered Heegaard diagrams.

Only incidence data is kept: which alpha curve and beta circle each
intersection point lies on, and where the alpha arcs meet the boundary.
Alpha arcs are labelled ``a1 .. a2k`` in the order of ``arc_endpoints``;
every other alpha label is an alpha circle.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import config
from .errors import MalformedInput, SizeLimit
from .pmc import PointedMatchedCircle, reverse, validate


@dataclass(frozen=True)
class Point:
    alpha: str
    beta: str


@dataclass(frozen=True)
class BorderedDiagram:
    g: int
    k: int
    arc_endpoints: tuple  # ((p, q), ...) boundary positions, one pair per arc
    points: tuple  # (Point, ...)
    alpha_circles: tuple = ()
    beta_circles: tuple = ()

    def __post_init__(self):
        if self.g < 0 or self.k < 0 or self.k > self.g:
            raise MalformedInput(f"k: need 0 <= k <= g, got g={self.g}, k={self.k}")
        if len(self.arc_endpoints) != 2 * self.k:
            raise MalformedInput(
                f"arc_endpoints: expected {2 * self.k} arcs for k={self.k}, got {len(self.arc_endpoints)}"
            )
        seen: set = set()
        for i, ends in enumerate(self.arc_endpoints):
            if len(ends) != 2:
                raise MalformedInput(f"arc_endpoints[{i}]: an arc has exactly two endpoints")
            for p in ends:
                if not isinstance(p, int) or p <= 0:
                    raise MalformedInput(f"arc_endpoints[{i}]: position {p!r} must be a positive integer")
                if p in seen:
                    raise MalformedInput(f"arc_endpoints[{i}]: position {p} used twice")
                seen.add(p)
        arcs = set(self.arc_labels)
        circles = set(self.alpha_circles)
        if arcs & circles:
            raise MalformedInput("alpha_circles: a label is also an arc label")
        for i, pt in enumerate(self.points):
            if pt.alpha not in arcs and pt.alpha not in circles:
                raise MalformedInput(f"points[{i}].alpha: unknown alpha curve {pt.alpha!r}")
            if pt.beta not in self.beta_circles:
                raise MalformedInput(f"points[{i}].beta: unknown beta circle {pt.beta!r}")
        if len(self.alpha_circles) != self.g - self.k:
            raise MalformedInput(f"alpha_circles: expected {self.g - self.k}, got {len(self.alpha_circles)}")
        if len(self.beta_circles) != self.g:
            raise MalformedInput(f"beta_circles: expected {self.g}, got {len(self.beta_circles)}")

    @property
    def arc_labels(self) -> tuple[str, ...]:
        return tuple(f"a{i + 1}" for i in range(2 * self.k))

    def isolated_betas(self) -> list[str]:
        """Beta circles meeting no alpha curve (allowed, but they kill every generator)."""
        hit = {p.beta for p in self.points}
        return [b for b in self.beta_circles if b not in hit]


def from_json(doc: dict, strict: bool = False) -> BorderedDiagram:
    """Parse the diagram schema; ``strict`` also rejects isolated beta circles."""
    if not isinstance(doc, dict):
        raise MalformedInput("diagram: expected a JSON object")
    for key in ("g", "k", "arc_endpoints", "points"):
        if key not in doc:
            raise MalformedInput(f"{key}: missing")
    g, k = doc["g"], doc["k"]
    if not isinstance(g, int) or not isinstance(k, int):
        raise MalformedInput("g: genus fields must be integers")
    ends = doc["arc_endpoints"]
    if not isinstance(ends, list):
        raise MalformedInput("arc_endpoints: expected a list")
    pts = []
    for i, p in enumerate(doc["points"]):
        if not isinstance(p, dict) or "alpha" not in p or "beta" not in p:
            raise MalformedInput(f"points[{i}]: needs alpha and beta labels")
        pts.append(Point(str(p["alpha"]), str(p["beta"])))
    arc_labels = {f"a{i + 1}" for i in range(len(ends))}
    if "alpha_circles" in doc:
        circles = tuple(str(c) for c in doc["alpha_circles"])
    else:
        circles = tuple(sorted({p.alpha for p in pts if p.alpha not in arc_labels}))
    if "beta_circles" in doc:
        betas = tuple(str(b) for b in doc["beta_circles"])
    else:
        betas = tuple(sorted({p.beta for p in pts}))
    diagram = BorderedDiagram(g, k, tuple(tuple(e) for e in ends), tuple(pts), circles, betas)
    if strict and g > 0 and diagram.isolated_betas():
        raise MalformedInput(f"beta_circles: {diagram.isolated_betas()[0]} meets no alpha curve")
    return diagram


def boundary_pmc(h: BorderedDiagram) -> PointedMatchedCircle:
    """Endpoints in boundary order become 1..4k; endpoints of one arc are matched."""
    order = sorted(p for ends in h.arc_endpoints for p in ends)
    rank = {p: i + 1 for i, p in enumerate(order)}
    pairs = [(rank[p], rank[q]) for p, q in h.arc_endpoints]
    return validate(h.k, pairs)


def _arc_pair_index(h: BorderedDiagram, circle: PointedMatchedCircle) -> dict[str, int]:
    order = sorted(p for ends in h.arc_endpoints for p in ends)
    rank = {p: i + 1 for i, p in enumerate(order)}
    return {f"a{i + 1}": circle.pair_of[rank[p]] for i, (p, _) in enumerate(h.arc_endpoints)}


def generators(h: BorderedDiagram) -> list[tuple[int, ...]]:
    """All generators as tuples of point indices, one per beta circle in order.

    Each beta circle and each alpha circle carries exactly one point, each
    alpha arc at most one.
    """
    limit = config.guard("diagram_points")
    if len(h.points) > limit:
        raise SizeLimit(f"generators: {len(h.points)} points exceed guard {limit}")
    by_beta: dict[str, list[int]] = {b: [] for b in h.beta_circles}
    for i, p in enumerate(h.points):
        by_beta[p.beta].append(i)
    circles = set(h.alpha_circles)
    out: list[tuple[int, ...]] = []
    chosen: list[int] = []
    used: set[str] = set()

    def rec(j: int) -> None:
        if j == len(h.beta_circles):
            if circles <= used:
                out.append(tuple(chosen))
            return
        # prune: remaining betas must be able to cover the unused circles
        if len(circles - used) > len(h.beta_circles) - j:
            return
        for i in by_beta[h.beta_circles[j]]:
            a = h.points[i].alpha
            if a in used:
                continue
            used.add(a)
            chosen.append(i)
            rec(j + 1)
            chosen.pop()
            used.discard(a)

    rec(0)
    return out


def occupied_arcs(h: BorderedDiagram, x: tuple[int, ...]) -> list[str]:
    arcs = set(h.arc_labels)
    return sorted(h.points[i].alpha for i in x if h.points[i].alpha in arcs)


def idempotent_a(h: BorderedDiagram, x: tuple[int, ...]) -> frozenset[int]:
    """Pairs of the boundary circle whose arcs ``x`` occupies."""
    circle = boundary_pmc(h)
    index = _arc_pair_index(h, circle)
    return frozenset(index[a] for a in occupied_arcs(h, x))


def idempotent_d(h: BorderedDiagram, x: tuple[int, ...]) -> frozenset[int]:
    """Pairs of the reversed circle for the arcs ``x`` leaves empty."""
    circle = boundary_pmc(h)
    rev = reverse(circle)
    n = circle.n_points
    index = _arc_pair_index(h, circle)
    occupied = set(occupied_arcs(h, x))
    out = set()
    for a in h.arc_labels:
        if a in occupied:
            continue
        p = circle.pairs[index[a]][0]
        out.add(rev.pair_of[n + 1 - p])
    return frozenset(out)


def to_json(h: BorderedDiagram) -> dict:
    return {
        "g": h.g,
        "k": h.k,
        "arc_endpoints": [list(e) for e in h.arc_endpoints],
        "alpha_circles": list(h.alpha_circles),
        "beta_circles": list(h.beta_circles),
        "points": [{"alpha": p.alpha, "beta": p.beta} for p in h.points],
    }
