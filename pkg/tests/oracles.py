"""Slow, independent reference implementations used only by the tests.

Each oracle avoids the kernel's own code path: connectivity by walking the
surgered 1-manifold, products by the double-crossing criterion, ranks by
dense elimination in numpy, swap classes by closure under single swaps.
"""

from __future__ import annotations

import itertools
from collections import deque

import numpy as np


# -- pointed matched circles ----------------------------------------------------

def surgered_components(n_points: int, match: dict[int, int]) -> int:
    """Count components of the circle surgered along matched pairs.

    Each marked point p splits into a left end ``(p, -1)`` and a right end
    ``(p, +1)``.  Circle segments join ``(p, +1)`` to ``(p+1, -1)`` cyclically;
    the band for ``{p, q}`` joins ``(p, -1)`` to ``(q, +1)`` and ``(p, +1)``
    to ``(q, -1)``.  Components are cycles in the resulting 2-regular graph.
    """
    if n_points == 0:
        return 1
    adj: dict = {}

    def link(a, b):
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)

    for p in range(1, n_points + 1):
        nxt = p % n_points + 1
        link((p, 1), (nxt, -1))
    for p, q in match.items():
        if p < q:
            link((p, -1), (q, 1))
            link((p, 1), (q, -1))
    seen = set()
    comps = 0
    for v in adj:
        if v in seen:
            continue
        comps += 1
        stack = [v]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            stack.extend(adj[u])
    return comps


def all_matchings(n: int):
    """Every fixed-point-free involution of 1..n, by brute force over permutations."""
    out = []
    for perm in itertools.permutations(range(1, n + 1)):
        if all(perm[i] != i + 1 and perm[perm[i] - 1] == i + 1 for i in range(n)):
            out.append(perm)
    return out


# -- strands --------------------------------------------------------------------

def crossings(phi: dict[int, int]) -> set:
    return {(a, b) for a, b in itertools.combinations(sorted(phi), 2) if phi[b] < phi[a]}


def product(x: dict[int, int], y: dict[int, int]):
    """Concatenate x then y; None if endpoints mismatch or two strands cross twice."""
    if sorted(x.values()) != sorted(y):
        return None
    for a, b in itertools.combinations(sorted(x), 2):
        crossed_in_x = x[b] < x[a]
        ya, yb = x[a], x[b]
        lo, hi = min(ya, yb), max(ya, yb)
        crossed_in_y = y[hi] < y[lo]
        if crossed_in_x and crossed_in_y:
            return None
    return {s: y[t] for s, t in x.items()}


def differential(x: dict[int, int]) -> list[dict[int, int]]:
    base = len(crossings(x))
    out = []
    for a, b in crossings(x):
        z = dict(x)
        z[a], z[b] = x[b], x[a]
        if len(crossings(z)) == base - 1:
            out.append(z)
    return out


def all_diagrams(n: int) -> list[dict[int, int]]:
    out = []
    for w in range(n + 1):
        for S in itertools.combinations(range(1, n + 1), w):
            for T in itertools.permutations(range(1, n + 1), w):
                if all(t >= s for s, t in zip(S, T)):
                    out.append(dict(zip(S, T)))
    return out


def freeze(phi: dict[int, int]) -> tuple:
    return tuple(sorted(phi.items()))


# -- swap classes ---------------------------------------------------------------

def swap_closure(x: dict[int, int], match: dict[int, int]) -> set:
    """Closure of ``x`` under moving one horizontal strand to its partner."""
    start = freeze(x)
    seen = {start}
    queue = deque([start])
    while queue:
        cur = dict(queue.popleft())
        for s, t in list(cur.items()):
            if s != t:
                continue
            m = match[s]
            if m in cur or m in cur.values():
                continue
            nxt = dict(cur)
            del nxt[s]
            nxt[m] = m
            key = freeze(nxt)
            if key not in seen:
                seen.add(key)
                queue.append(key)
    return seen


def equitable(x: dict[int, int], match: dict[int, int]) -> bool:
    S, T = set(x), set(x.values())
    return all(match[s] not in S for s in S) and all(match[t] not in T for t in T)


def algebra_classes(n: int, match: dict[int, int], weight: int) -> list[frozenset]:
    """Basic generators of A(Z) of one weight, as frozensets of strand diagrams."""
    out = set()
    for x in all_diagrams(n):
        if len(x) == weight and equitable(x, match):
            out.add(frozenset(swap_closure(x, match)))
    return sorted(out, key=lambda c: sorted(c))


# -- F2 linear algebra -----------------------------------------------------------

def dense_rank(mat) -> int:
    a = np.array(mat, dtype=np.uint8) % 2
    if a.size == 0:
        return 0
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if a[i, c]:
                piv = i
                break
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
        if r == rows:
            break
    return r


def class_homology(n: int, match: dict[int, int], weight: int) -> int:
    """dim H of the weight piece of A(Z), built from swap classes and dense ranks."""
    classes = algebra_classes(n, match, weight)
    index = {}
    for j, cls in enumerate(classes):
        for d in cls:
            index[d] = j
    size = len(classes)
    mat = np.zeros((size, size), dtype=np.uint8)
    for j, cls in enumerate(classes):
        acc: dict = {}
        for d in cls:
            for z in differential(dict(d)):
                key = freeze(z)
                acc[key] = acc.get(key, 0) ^ 1
        hits = [k for k, v in acc.items() if v]
        touched = set()
        for k in hits:
            if k in index:
                touched.add(index[k])
        for i in touched:
            mat[i, j] = 1
    return size - 2 * dense_rank(mat)


# -- diagrams ---------------------------------------------------------------------

def brute_generators(points, alpha_arcs, alpha_circles, betas) -> int:
    """Count g-subsets of points meeting the occupancy rules."""
    g = len(betas)
    count = 0
    for subset in itertools.combinations(range(len(points)), g):
        a = [points[i][0] for i in subset]
        b = [points[i][1] for i in subset]
        if sorted(b) != sorted(betas):
            continue
        if len(set(a)) != len(a):
            continue
        if not set(alpha_circles) <= set(a):
            continue
        count += 1
    return count


# -- group orbits -------------------------------------------------------------------

def orbit_partition(S, T, group, act_s, act_t, inverse) -> int:
    """Orbits of S x T under (s g, t) ~ (s, g t), by BFS over the whole group.

    The neighbours of (s, t) are (s g, g^-1 t) for every g.
    """
    seen = set()
    count = 0
    for p in ((s, t) for s in S for t in T):
        if p in seen:
            continue
        count += 1
        queue = deque([p])
        seen.add(p)
        while queue:
            s, t = queue.popleft()
            for g in group:
                q = (act_s(s, g), act_t(inverse(g), t))
                if q not in seen:
                    seen.add(q)
                    queue.append(q)
    return count
