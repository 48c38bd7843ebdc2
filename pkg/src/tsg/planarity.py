"""Planarity for small graphs by exhaustive search for Kuratowski subdivisions."""
from __future__ import annotations

from itertools import combinations
from typing import Iterable

Adj = dict[str, set[str]]


def _adjacency(vertices: Iterable[str], edges: Iterable[Iterable[str]]) -> Adj:
    adj: Adj = {str(v): set() for v in vertices}
    for e in edges:
        a, b = (str(x) for x in e)
        if a != b:
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
    return adj


def _reduce(adj: Adj) -> Adj:
    """Drop vertices of degree <= 1 and smooth degree-2 vertices; planarity is unchanged."""
    adj = {v: set(n) for v, n in adj.items()}
    changed = True
    while changed:
        changed = False
        for v in sorted(adj):
            nbrs = adj[v]
            if len(nbrs) <= 1:
                for w in nbrs:
                    adj[w].discard(v)
                del adj[v]
                changed = True
            elif len(nbrs) == 2:
                a, b = nbrs
                adj[a].discard(v)
                adj[b].discard(v)
                adj[a].add(b)
                adj[b].add(a)
                del adj[v]
                changed = True
    return adj


def _disjoint_paths(adj: Adj, pairs: list[tuple[str, str]], blocked: set[str]) -> bool:
    """Internally disjoint paths joining every pair, interiors avoiding ``blocked``."""
    if not pairs:
        return True
    (s, t), rest = pairs[0], pairs[1:]
    if t in adj[s]:
        # a direct edge never hurts the remaining pairs
        return _disjoint_paths(adj, rest, blocked)

    path: list[str] = []

    def walk(v: str) -> bool:
        for w in adj[v]:
            if w == t:
                if _disjoint_paths(adj, rest, blocked | set(path)):
                    return True
            elif w not in blocked and w not in path:
                path.append(w)
                if walk(w):
                    return True
                path.pop()
        return False

    return walk(s)


def _has_k5(adj: Adj) -> bool:
    hubs = sorted(v for v, n in adj.items() if len(n) >= 4)
    for branch in combinations(hubs, 5):
        if _disjoint_paths(adj, list(combinations(branch, 2)), set(branch)):
            return True
    return False


def _has_k33(adj: Adj) -> bool:
    hubs = sorted(v for v, n in adj.items() if len(n) >= 3)
    for six in combinations(hubs, 6):
        first = six[0]
        for rest in combinations(six[1:], 2):
            left = (first,) + rest
            right = tuple(v for v in six if v not in left)
            pairs = [(a, b) for a in left for b in right]
            if _disjoint_paths(adj, pairs, set(six)):
                return True
    return False


def is_planar(vertices: Iterable[str], edges: Iterable[Iterable[str]]) -> bool:
    adj = _reduce(_adjacency(vertices, edges))
    n = len(adj)
    m = sum(len(x) for x in adj.values()) // 2
    if n <= 4:
        return True
    if m > 3 * n - 6:
        return False
    return not (_has_k5(adj) or _has_k33(adj))
