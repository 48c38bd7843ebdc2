"""Simple labelled graphs: Petersen-family built-ins, canonical forms, automorphisms, and the two moves."""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from itertools import combinations
from pathlib import Path
from typing import Iterable

from .permgroup import GroupError, PermGroup, Permutation, label_key, normalize_domain

MAX_VERTICES = 12


class GraphError(ValueError):
    pass


def _edge(a: str, b: str) -> tuple[str, str]:
    return (a, b) if label_key(a) <= label_key(b) else (b, a)


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise GraphError("duplicate vertex labels")
        for a, b in self.edges:
            if a == b:
                raise GraphError(f"loop at {a}")
            if a not in vs or b not in vs:
                raise GraphError(f"edge {{{a},{b}}} uses an undeclared vertex")
        if len(set(self.edges)) != len(self.edges):
            raise GraphError("parallel edges")

    @classmethod
    def build(cls, vertices: Iterable, edges: Iterable[Iterable]) -> Graph:
        verts = normalize_domain(vertices)
        es = set()
        for e in edges:
            a, b = (str(x) for x in e)
            if a == b:
                raise GraphError(f"loop at {a}")
            pair = _edge(a, b)
            if pair in es:
                raise GraphError(f"parallel edge {{{a},{b}}}")
            es.add(pair)
        return cls(verts, tuple(sorted(es, key=lambda e: (label_key(e[0]), label_key(e[1])))))

    @cached_property
    def adjacency(self) -> dict[str, frozenset[str]]:
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return {v: frozenset(n) for v, n in adj.items()}

    @cached_property
    def edge_set(self) -> frozenset[frozenset[str]]:
        return frozenset(frozenset(e) for e in self.edges)

    def has_edge(self, a: str, b: str) -> bool:
        return b in self.adjacency[a]

    def degree(self, v: str) -> int:
        return len(self.adjacency[v])

    def degree_sequence(self) -> tuple[int, ...]:
        return tuple(sorted((self.degree(v) for v in self.vertices), reverse=True))

    def invariants(self) -> tuple[int, int, tuple[int, ...]]:
        return (len(self.vertices), len(self.edges), self.degree_sequence())

    def induced(self, subset: Iterable[str]) -> Graph:
        keep = set(subset)
        return Graph.build(keep, [e for e in self.edges if e[0] in keep and e[1] in keep])

    def relabel(self, mapping: dict[str, str]) -> Graph:
        return Graph.build((mapping.get(v, v) for v in self.vertices),
                           ((mapping.get(a, a), mapping.get(b, b)) for a, b in self.edges))

    def is_bipartite(self) -> bool:
        side: dict[str, int] = {}
        for s in self.vertices:
            if s in side:
                continue
            side[s] = 0
            queue = deque([s])
            while queue:
                v = queue.popleft()
                for w in self.adjacency[v]:
                    if w not in side:
                        side[w] = 1 - side[v]
                        queue.append(w)
                    elif side[w] == side[v]:
                        return False
        return True

    def is_automorphism(self, p: Permutation) -> bool:
        if p.domain != self.vertices:
            return False
        m = p.mapping()
        return all(frozenset((m[a], m[b])) in self.edge_set for a, b in self.edges)

    def triangles(self) -> list[tuple[str, str, str]]:
        out = []
        for a, b in self.edges:
            for c in sorted(self.adjacency[a] & self.adjacency[b], key=label_key):
                if label_key(c) > label_key(b):
                    out.append((a, b, c))
        return out

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: dict) -> Graph:
        try:
            return cls.build(data["vertices"], data["edges"])
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphError(f"malformed graph document: {exc}") from exc


def load_graph(path: str | Path) -> Graph:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise GraphError(f"cannot read graph file {path}: {exc}") from exc
    return Graph.from_json(data)


def dump_graph(g: Graph) -> str:
    return json.dumps(g.to_json(), sort_keys=True)


# built-ins -----------------------------------------------------------------

FAMILY_NAMES = ("K6", "K331", "P7", "K44minus", "P8", "P9", "P10")
BUILTIN_NAMES = ("K33",) + FAMILY_NAMES

_NAME_ALIASES = {
    "k33": "K33", "k3,3": "K33",
    "k6": "K6",
    "k331": "K331", "k3,3,1": "K331",
    "k44minus": "K44minus", "k44-": "K44minus", "k4,4-": "K44minus", "k44m": "K44minus",
    "p7": "P7", "p8": "P8", "p9": "P9", "p10": "P10", "petersen": "P10",
}


def canonical_graph_name(name: str) -> str:
    key = name.strip().lower()
    if key not in _NAME_ALIASES:
        raise GraphError(f"unknown graph {name!r}; known: {', '.join(BUILTIN_NAMES)}")
    return _NAME_ALIASES[key]


def _k33_edges():
    return [(a, b) for a in "123" for b in "456"]


def _k33() -> Graph:
    return Graph.build("123456", _k33_edges())


def _k331() -> Graph:
    return Graph.build("1234567", _k33_edges() + [(v, "7") for v in "123456"])


def _k44minus() -> Graph:
    return Graph.build(list("123456vw"),
                       _k33_edges() + [("v", b) for b in "456"] + [("w", a) for a in "123"])


def _p7() -> Graph:
    edges = [("1", "2"), ("1", "3"), ("2", "3")]
    edges += [(a, x) for a in "123" for x in "abc"]
    edges += [("w", x) for x in "abc"]
    return Graph.build(list("123abcw"), edges)


def _p8() -> Graph:
    # triangle {1,2,a} of P7 replaced by a Y, then relabelled: the degree-5 vertex
    # becomes 1, its degree-3 neighbour 8, the 4-cycle 2-4-5-3, and the two
    # remaining degree-3 vertices 6 (on the pair 2,5) and 7 (on the pair 3,4)
    p7 = builtin_graph("P7")
    moved = delta_y(p7, MoveSite.triangle(("1", "2", "a")))
    fresh = (set(moved.vertices) - set(p7.vertices)).pop()
    relabel = {"3": "1", "1": "2", "c": "3", "b": "4", "2": "5", fresh: "6", "w": "7", "a": "8"}
    return moved.relabel(relabel)


def _p9() -> Graph:
    hexagon = [(str(i), str(i % 6 + 1)) for i in range(1, 7)]
    triangle = [("a", "b"), ("b", "c"), ("a", "c")]
    spokes = [("a", "1"), ("a", "4"), ("b", "2"), ("b", "5"), ("c", "3"), ("c", "6")]
    return Graph.build(list("123456abc"), hexagon + triangle + spokes)


def _p10() -> Graph:
    outer = [(str(1 + j), str(1 + (j + 1) % 5)) for j in range(5)]
    inner = [(str(6 + j), str(6 + (j + 2) % 5)) for j in range(5)]
    spokes = [(str(1 + j), str(6 + j)) for j in range(5)]
    return Graph.build(range(1, 11), outer + inner + spokes)


def _k6() -> Graph:
    return Graph.build("123456", combinations("123456", 2))


_BUILDERS = {"K33": _k33, "K6": _k6, "K331": _k331, "K44minus": _k44minus,
             "P7": _p7, "P8": _p8, "P9": _p9, "P10": _p10}


@lru_cache(maxsize=None)
def builtin_graph(name: str) -> Graph:
    return _BUILDERS[canonical_graph_name(name)]()


# canonical labelling -------------------------------------------------------

def _refine(g: Graph, colors: dict[str, int]) -> dict[str, int]:
    """Equitable refinement; new colours are ranks of label-free signatures."""
    while True:
        sig = {v: (colors[v], tuple(sorted(colors[w] for w in g.adjacency[v]))) for v in g.vertices}
        ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        new = {v: ranks[sig[v]] for v in g.vertices}
        if len(ranks) == len(set(colors.values())):
            return new
        colors = new


def _leaves(g: Graph):
    """Yield the discrete colourings at the leaves of the individualisation-refinement tree."""
    start = _refine(g, {v: 0 for v in g.vertices})
    stack = [start]
    while stack:
        colors = stack.pop()
        cells: dict[int, list[str]] = {}
        for v, c in colors.items():
            cells.setdefault(c, []).append(v)
        target = min((c for c, vs in cells.items() if len(vs) > 1), default=None)
        if target is None:
            yield colors
            continue
        for v in sorted(cells[target], key=label_key, reverse=True):
            split = {w: 2 * c + (1 if c == target and w != v else 0) for w, c in colors.items()}
            stack.append(_refine(g, split))


def _certificate(g: Graph, colors: dict[str, int]) -> tuple:
    return tuple(sorted(tuple(sorted((colors[a], colors[b]))) for a, b in g.edges))


@dataclass(frozen=True)
class CanonicalForm:
    n: int
    certificate: tuple
    labelling: tuple[tuple[str, int], ...] = field(compare=False, hash=False)


@lru_cache(maxsize=4096)
def canonical_form(g: Graph) -> CanonicalForm:
    if len(g.vertices) > MAX_VERTICES:
        raise GraphError(f"graphs are limited to {MAX_VERTICES} vertices")
    best = None
    best_colors = None
    for colors in _leaves(g):
        cert = _certificate(g, colors)
        if best is None or cert < best:
            best, best_colors = cert, colors
    if best_colors is None:
        best, best_colors = (), {}
    return CanonicalForm(len(g.vertices), best,
                         tuple(sorted(best_colors.items(), key=lambda kv: kv[1])))


def graphs_isomorphic(g: Graph, h: Graph) -> tuple[bool, dict[str, str] | None]:
    """Isomorphism test by canonical form; the witness maps vertices of g to vertices of h."""
    if g.invariants() != h.invariants():
        return False, None
    cg, ch = canonical_form(g), canonical_form(h)
    if cg != ch:
        return False, None
    inv_h = {pos: v for v, pos in ch.labelling}
    witness = {v: inv_h[pos] for v, pos in cg.labelling}
    for a, b in g.edges:
        if not h.has_edge(witness[a], witness[b]):
            raise AssertionError("canonical labelling produced an invalid witness")
    return True, witness


@lru_cache(maxsize=256)
def automorphism_group(g: Graph) -> PermGroup:
    """Full automorphism group, found by matching leaf certificates of the refinement tree."""
    if len(g.vertices) > MAX_VERTICES:
        raise GraphError(f"graphs are limited to {MAX_VERTICES} vertices")
    form = canonical_form(g)
    base = dict(form.labelling)
    at_pos = {pos: v for v, pos in base.items()}
    index = {v: i for i, v in enumerate(g.vertices)}
    found = set()
    for colors in _leaves(g):
        if _certificate(g, colors) != form.certificate:
            continue
        # v sits where at_pos[...] sits in the canonical leaf
        found.add(tuple(index[at_pos[colors[v]]] for v in g.vertices))
    elements = [Permutation(g.vertices, images) for images in sorted(found)]
    for p in elements:
        if not g.is_automorphism(p):
            raise AssertionError(f"{p} is not an automorphism")
    group = PermGroup.from_elements(elements, g.vertices)
    if group.order != len(elements):
        raise AssertionError("automorphism search did not return a group")
    return group


# moves ---------------------------------------------------------------------

class MoveKind(Enum):
    TRIANGLE_TO_Y = "delta_y"
    Y_TO_TRIANGLE = "y_delta"


@dataclass(frozen=True)
class MoveSite:
    kind: MoveKind
    site: tuple[str, str, str]
    center: str | None = None

    @classmethod
    def triangle(cls, vertices: Iterable[str]) -> MoveSite:
        return cls(MoveKind.TRIANGLE_TO_Y, tuple(sorted(map(str, vertices), key=label_key)))

    @classmethod
    def y(cls, g: Graph, center: str) -> MoveSite:
        center = str(center)
        if center not in g.adjacency:
            raise GraphError(f"unknown vertex {center}")
        return cls(MoveKind.Y_TO_TRIANGLE, tuple(sorted(g.adjacency[center], key=label_key)), center)

    def __str__(self) -> str:
        body = ",".join(self.site)
        if self.kind is MoveKind.TRIANGLE_TO_Y:
            return f"delta_y{{{body}}}"
        return f"y_delta[{self.center}]{{{body}}}"


def fresh_label(g: Graph) -> str:
    used = set(g.vertices)
    k = 1
    while str(k) in used:
        k += 1
    return str(k)


def delta_y(g: Graph, site: MoveSite) -> Graph:
    """Replace a triangle by a new degree-three vertex joined to its corners."""
    if site.kind is not MoveKind.TRIANGLE_TO_Y or len(set(site.site)) != 3:
        raise GraphError("delta_y needs a triangle site")
    a, b, c = site.site
    if not all(x in g.adjacency for x in site.site):
        raise GraphError(f"site {site} uses unknown vertices")
    if not (g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c)):
        raise GraphError(f"{{{a},{b},{c}}} is not a triangle")
    new = fresh_label(g)
    drop = {frozenset((a, b)), frozenset((b, c)), frozenset((a, c))}
    edges = [e for e in g.edges if frozenset(e) not in drop] + [(new, x) for x in site.site]
    return Graph.build(list(g.vertices) + [new], edges)


def y_delta(g: Graph, site: MoveSite) -> Graph:
    """Remove a degree-three vertex and join its three neighbours in a triangle."""
    if site.kind is not MoveKind.Y_TO_TRIANGLE or site.center is None:
        raise GraphError("y_delta needs a Y site")
    v = site.center
    if v not in g.adjacency or g.degree(v) != 3 or set(g.adjacency[v]) != set(site.site):
        raise GraphError(f"{v} is not the centre of a Y on {site.site}")
    a, b, c = site.site
    for x, y in ((a, b), (b, c), (a, c)):
        if g.has_edge(x, y):
            raise GraphError(f"y_delta at {v} would duplicate edge {{{x},{y}}}")
    edges = [e for e in g.edges if v not in e] + [(a, b), (b, c), (a, c)]
    return Graph.build([x for x in g.vertices if x != v], edges)


def move_sites(g: Graph) -> list[MoveSite]:
    sites = [MoveSite.triangle(t) for t in g.triangles()]
    for v in g.vertices:
        if g.degree(v) == 3:
            nbrs = sorted(g.adjacency[v], key=label_key)
            if not any(g.has_edge(x, y) for x, y in combinations(nbrs, 2)):
                sites.append(MoveSite(MoveKind.Y_TO_TRIANGLE, tuple(nbrs), v))
    return sites


def apply_move(g: Graph, site: MoveSite) -> Graph:
    return delta_y(g, site) if site.kind is MoveKind.TRIANGLE_TO_Y else y_delta(g, site)


# family closure ------------------------------------------------------------

FAMILY_INVARIANTS: dict[tuple[int, tuple[int, ...]], str] = {
    (6, (5, 5, 5, 5, 5, 5)): "K6",
    (7, (6, 4, 4, 4, 4, 4, 4)): "K331",
    (7, (5, 5, 5, 4, 4, 4, 3)): "P7",
    (8, (4, 4, 4, 4, 4, 4, 3, 3)): "K44minus",
    (8, (5, 4, 4, 4, 4, 3, 3, 3)): "P8",
    (9, (4, 4, 4, 3, 3, 3, 3, 3, 3)): "P9",
    (10, (3,) * 10): "P10",
}


@dataclass(frozen=True)
class FamilyMember:
    graph: Graph
    canonical_name: str | None
    invariants: tuple[int, int, tuple[int, ...]]
    provenance: tuple[str, ...]

    def as_dict(self) -> dict:
        n, m, degs = self.invariants
        return {"name": self.canonical_name, "vertices": n, "edges": m,
                "degrees": list(degs), "provenance": list(self.provenance)}


def family_name(g: Graph) -> str | None:
    return FAMILY_INVARIANTS.get((len(g.vertices), g.degree_sequence()))


def family_closure(seed: Graph, max_vertices: int = MAX_VERTICES) -> list[FamilyMember]:
    """Breadth-first closure of ``seed`` under both moves, one member per isomorphism class."""
    if len(seed.vertices) > max_vertices:
        raise GraphError(f"seed exceeds {max_vertices} vertices")
    seen = {canonical_form(seed): FamilyMember(seed, family_name(seed), seed.invariants(), ())}
    queue = deque([seed])
    while queue:
        g = queue.popleft()
        path = seen[canonical_form(g)].provenance
        for site in move_sites(g):
            h = apply_move(g, site)
            if len(h.vertices) > max_vertices:
                raise GraphError(f"closure exceeded {max_vertices} vertices")
            form = canonical_form(h)
            if form not in seen:
                seen[form] = FamilyMember(h, family_name(h), h.invariants(), path + (str(site),))
                queue.append(h)
    return sorted(seen.values(), key=lambda m: (len(m.graph.vertices), canonical_form(m.graph).certificate))


def restrict_automorphism(alpha: Permutation, g: Graph, core: Iterable[str]) -> Permutation:
    """Restriction of ``alpha`` to an invariant vertex subset."""
    core_set = {str(v) for v in core}
    if not g.is_automorphism(alpha):
        raise GraphError(f"{alpha} is not an automorphism")
    m = alpha.mapping()
    if {m[v] for v in core_set} != core_set:
        raise GraphError(f"core {sorted(core_set, key=label_key)} is not invariant under {alpha}")
    return Permutation.from_mapping(core_set, {v: m[v] for v in core_set})


def restriction_map(g: Graph, core: Iterable[str]) -> dict[Permutation, Permutation]:
    core = list(core)
    return {a: restrict_automorphism(a, g, core) for a in automorphism_group(g).elements}
