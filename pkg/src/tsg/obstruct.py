"""Necessary conditions for realizing graph automorphisms by finite-order maps of the 3-sphere.

An automorphism induced by a finite-order homeomorphism is modelled by its
combinatorial fixed structure: fixed vertices, edges with both ends fixed
(these are fixed pointwise, since a finite-order map of an arc that fixes the
endpoints is the identity) and one fixed midpoint per inverted edge.

A non-trivial finite-order map fixes either nothing or a circle when it
preserves orientation, and two points or a 2-sphere when it reverses it.  A
reversing map whose fixed set is a 2-sphere is an involution: its square
preserves orientation and fixes that sphere, so the square is the identity.

Every filter is a necessary condition only.  ``Pass`` means "not excluded".
For K3,3 and graphs restricting onto it, the element-class catalog of K3,3 is
authoritative; the geometric filters alone let ``(1425)(36)`` through as a
positive element.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

from .groupid import identify_group, reference_group
from .permgroup import (
    PermGroup,
    Permutation,
    class_map,
    enumerate_subgroups,
    index_two_subgroups,
    label_key,
    parse_permutation,
)
from .planarity import is_planar
from .spatialgraph import Graph, automorphism_group, builtin_graph, graphs_isomorphic

REASONS = (
    "identity",
    "empty-fixed-structure",
    "degree-exceeds-two",
    "cycle-plus-extra",
    "midpoint-collision",
    "exceeds-S0",
    "not-involution",
    "nonplanar-fixed-graph",
    "coloring-infeasible",
    "odd-order-needs-positive",
    "restriction-class-mismatch",
)

Orientation = Literal["positive", "reversing"]


class ObstructionError(ValueError):
    pass


@dataclass(frozen=True, eq=True)
class Verdict:
    status: Literal["pass", "fail"]
    reason: str | None = None
    witness: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.status == "fail" and self.reason is None:
            raise ValueError("a failing verdict needs a reason")
        if self.reason is not None and self.reason not in REASONS:
            raise ValueError(f"unknown reason code {self.reason!r}")

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        return {"status": self.status, "reason": self.reason, "witness": self.witness}


def _pass(reason: str | None = None, **witness) -> Verdict:
    return Verdict("pass", reason, witness)


def _fail(reason: str, **witness) -> Verdict:
    return Verdict("fail", reason, witness)


def _edge_key(e) -> tuple:
    a, b = e
    return (label_key(a), label_key(b))


@dataclass(frozen=True)
class FixedStructure:
    fixed_vertices: tuple[str, ...]
    fixed_edges: tuple[tuple[str, str], ...]
    inverted_edges: tuple[tuple[str, str], ...]

    @property
    def empty(self) -> bool:
        return not (self.fixed_vertices or self.inverted_edges)

    def to_json(self) -> dict:
        return {"fixed_vertices": list(self.fixed_vertices),
                "fixed_edges": [list(e) for e in self.fixed_edges],
                "inverted_edges": [list(e) for e in self.inverted_edges]}


def _require_automorphism(alpha: Permutation, g: Graph) -> None:
    if not g.is_automorphism(alpha):
        raise ObstructionError(f"{alpha} is not an automorphism of the graph")


def fixed_structure(alpha: Permutation, g: Graph) -> FixedStructure:
    _require_automorphism(alpha, g)
    m = alpha.mapping()
    fixed = tuple(v for v in g.vertices if m[v] == v)
    fset = set(fixed)
    fixed_edges = tuple(e for e in g.edges if e[0] in fset and e[1] in fset)
    inverted = tuple(e for e in g.edges if m[e[0]] == e[1] and m[e[1]] == e[0])
    return FixedStructure(fixed, fixed_edges, inverted)


def circle_filter(alpha: Permutation, g: Graph) -> Verdict:
    """Can the fixed structure lie in a circle (or be empty)?"""
    fs = fixed_structure(alpha, g)
    if alpha.is_identity:
        return _pass("identity")
    if fs.empty:
        return _pass("empty-fixed-structure")
    degree = {v: 0 for v in fs.fixed_vertices}
    for a, b in fs.fixed_edges:
        degree[a] += 1
        degree[b] += 1
    for v in fs.fixed_vertices:
        if degree[v] > 2:
            return _fail("degree-exceeds-two", vertex=v, degree=degree[v])
    components = _component_count(fs.fixed_vertices, fs.fixed_edges)
    if len(fs.fixed_edges) == len(fs.fixed_vertices) - components:
        return _pass()
    # max degree 2 with a cycle: acceptable only if that cycle is all there is
    if components == 1 and not fs.inverted_edges:
        return _pass()
    return _fail("cycle-plus-extra", fixed_vertices=list(fs.fixed_vertices),
                 inverted_edges=[list(e) for e in fs.inverted_edges])


def _component_count(vertices, edges) -> int:
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = len(parent)
    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            count -= 1
    return count


def inversion_collision_filter(alpha: Permutation, g: Graph) -> Verdict:
    """A power inverting an edge fixes its midpoint, which alpha must then fix as well."""
    fs = fixed_structure(alpha, g)
    if alpha.is_identity:
        return _pass("identity")
    if fs.empty and not fs.fixed_edges:
        return _pass("empty-fixed-structure")
    m = alpha.mapping()
    power = alpha
    for k in range(1, alpha.order):
        pm = power.mapping()
        for a, b in g.edges:
            if pm[a] == b and pm[b] == a and {m[a], m[b]} != {a, b}:
                return _fail("midpoint-collision", k=k, edge=[a, b])
        power = power * alpha
    return _pass()


def sphere_coloring(alpha: Permutation, g: Graph) -> tuple[dict[str, int] | None, list[str] | None]:
    """Put the moved vertices of an involution on two sides of its fixed sphere.

    Returns ``(colouring, None)`` or ``(None, conflicting_edge)``.  An edge between
    moved vertices on opposite sides crosses the sphere, so alpha must map it to
    itself; every other such edge forces equal sides.
    """
    m = alpha.mapping()
    moved = [v for v in g.vertices if m[v] != v]
    parent = {v: v for v in moved}
    parity = {v: 0 for v in moved}  # side of v relative to its root

    def find(x):
        p = 0
        while parent[x] != x:
            p ^= parity[x]
            x = parent[x]
        return x, p

    def union(a, b, rel) -> bool:
        ra, pa = find(a)
        rb, pb = find(b)
        if ra == rb:
            return pa ^ pb == rel
        parent[ra] = rb
        parity[ra] = pa ^ pb ^ rel
        return True

    for v in moved:
        union(v, m[v], 1)
    for a, b in sorted(g.edges, key=_edge_key):
        if a in parent and b in parent and {m[a], m[b]} != {a, b}:
            if not union(a, b, 0):
                return None, [a, b]
    coloring = {}
    for v in moved:
        coloring[v] = find(v)[1]
    # normalise so that the least moved vertex is on side 0
    if moved and coloring[moved[0]]:
        coloring = {v: 1 - c for v, c in coloring.items()}
    return coloring, None


def reversing_filter(alpha: Permutation, g: Graph) -> Verdict:
    """Fixed set two points or a 2-sphere, for an orientation-reversing finite-order map."""
    fs = fixed_structure(alpha, g)
    if alpha.is_identity:
        return _pass("identity")
    if alpha.order % 2:
        return _fail("odd-order-needs-positive", order=alpha.order)
    square = alpha * alpha
    sq = positive_admissible(square, g)
    if not sq.passed:
        return _fail(sq.reason, square=str(square), **{k: v for k, v in sq.witness.items() if k != "square"})
    points = len(fs.fixed_vertices) + len(fs.inverted_edges)
    if not fs.fixed_edges and points <= 2:
        return _pass(branch="S0", points=points)
    if not square.is_identity:
        if fs.fixed_edges:
            return _fail("not-involution", order=alpha.order, fixed_edges=len(fs.fixed_edges))
        return _fail("exceeds-S0", order=alpha.order, points=points)
    if not is_planar(fs.fixed_vertices, fs.fixed_edges):
        return _fail("nonplanar-fixed-graph", fixed_vertices=list(fs.fixed_vertices))
    coloring, conflict = sphere_coloring(alpha, g)
    if coloring is None:
        return _fail("coloring-infeasible", edge=conflict)
    sides = {"+": sorted((v for v, c in coloring.items() if c == 0), key=label_key),
             "-": sorted((v for v, c in coloring.items() if c == 1), key=label_key)}
    return _pass(branch="S2", sides=sides)


# K3,3 element classes ------------------------------------------------------

K33_LABELS = ("1", "2", "3", "4", "5", "6")


@dataclass(frozen=True)
class ElementClassCatalogK33:
    positive_classes: tuple[str, ...] = (
        "(1 2)(4 5)", "(1 4)(2 5)(3 6)", "(1 2 3)", "(1 2 3)(4 5 6)", "(1 4 2 5 3 6)")
    negative_classes: tuple[str, ...] = ("(1 2)", "(1 4 2 5)(3 6)", "(1 2)(4 5 6)")

    @property
    def group(self) -> PermGroup:
        return automorphism_group(builtin_graph("K33"))

    def kind(self, p: Permutation) -> str:
        """'identity', 'positive' or 'negative' for an element of Aut(K3,3)."""
        return _class_kinds(self)[_k33_class_map()[p]]


@lru_cache(maxsize=1)
def _k33_class_map() -> dict[Permutation, Permutation]:
    return class_map(automorphism_group(builtin_graph("K33")))


@lru_cache(maxsize=4)
def _class_kinds(catalog: ElementClassCatalogK33) -> dict[Permutation, str]:
    cmap = _k33_class_map()
    kinds = {Permutation.identity(K33_LABELS): "identity"}
    for kind, reps in (("positive", catalog.positive_classes), ("negative", catalog.negative_classes)):
        for text in reps:
            rep = cmap[parse_permutation(text, K33_LABELS)]
            if rep in kinds:
                raise ValueError(f"{text} is catalogued twice")
            kinds[rep] = kind
    return kinds


K33_CATALOG = ElementClassCatalogK33()

K33_POSITIVE_GROUPS = ("D3xD3", "(Z3xZ3):Z2", "D3xZ3", "D6", "Z3xZ3", "D3", "Z6", "D2", "Z3", "Z2")


@lru_cache(maxsize=1)
def k33_positive_subgroup_classes() -> frozenset[str]:
    """Iso classes of subgroups of the positively realizable groups of K3,3."""
    names = {"1"}
    for name in K33_POSITIVE_GROUPS:
        names |= {c.iso for c in enumerate_subgroups(reference_group(name))}
    return frozenset(names)


_CORE_SOURCES = (("K33", K33_LABELS), ("K331", K33_LABELS), ("K44minus", K33_LABELS))


@lru_cache(maxsize=256)
def k33_core(g: Graph) -> tuple[tuple[str, str], ...] | None:
    """Pairs (vertex of g, K3,3 label) for an automorphism-invariant K3,3 in g, if catalogued."""
    for name, core in _CORE_SOURCES:
        ok, witness = graphs_isomorphic(builtin_graph(name), g)
        if ok:
            return tuple(sorted(((witness[x], x) for x in core), key=lambda p: label_key(p[1])))
    return None


def restrict_to_k33(alpha: Permutation, g: Graph) -> Permutation:
    core = k33_core(g)
    if core is None:
        raise ObstructionError("graph has no catalogued invariant K3,3 core")
    to_k33 = dict(core)
    from_k33 = {b: a for a, b in core}
    m = alpha.mapping()
    images = {}
    for x in K33_LABELS:
        y = m[from_k33[x]]
        if y not in to_k33:
            raise ObstructionError(f"{alpha} does not preserve the K3,3 core")
        images[x] = to_k33[y]
    return Permutation.from_mapping(K33_LABELS, images)


def restriction_class_filter(alpha: Permutation, g: Graph, orientation: Orientation) -> Verdict:
    """The restriction to the K3,3 core must lie in a class realizable with this orientation."""
    _require_automorphism(alpha, g)
    if orientation not in ("positive", "reversing"):
        raise ObstructionError(f"unknown orientation {orientation!r}")
    r = restrict_to_k33(alpha, g)
    if alpha.is_identity:
        return _pass("identity")
    kind = K33_CATALOG.kind(r)
    wanted = "positive" if orientation == "positive" else "negative"
    if kind == wanted or (kind == "identity" and orientation == "positive"):
        return _pass(restriction=str(r), klass=kind)
    return _fail("restriction-class-mismatch", restriction=str(r), klass=kind)


# element admissibility -----------------------------------------------------

@lru_cache(maxsize=65536)
def positive_admissible(alpha: Permutation, g: Graph) -> Verdict:
    _require_automorphism(alpha, g)
    if alpha.is_identity:
        return _pass("identity")
    for check in (circle_filter, inversion_collision_filter):
        v = check(alpha, g)
        if not v.passed:
            return v
    if k33_core(g) is not None:
        v = restriction_class_filter(alpha, g, "positive")
        if not v.passed:
            return v
    return _pass()


@lru_cache(maxsize=65536)
def reversing_admissible(alpha: Permutation, g: Graph) -> Verdict:
    _require_automorphism(alpha, g)
    if alpha.is_identity:
        return _pass("identity")
    v = reversing_filter(alpha, g)
    if not v.passed:
        return v
    if k33_core(g) is not None:
        r = restriction_class_filter(alpha, g, "reversing")
        if not r.passed:
            return r
    return v


def realizable_admissible(alpha: Permutation, g: Graph) -> Verdict:
    pos = positive_admissible(alpha, g)
    if pos.passed:
        return _pass(pos.reason, orientation="positive")
    if alpha.order % 2:
        return _fail(pos.reason, orientation="none", reversing="odd order", **pos.witness)
    rev = reversing_admissible(alpha, g)
    if rev.passed:
        return _pass(rev.reason, orientation="reversing", **rev.witness)
    return _fail(pos.reason, orientation="none", positive=pos.to_json(), reversing_verdict=rev.to_json())


def admissible(alpha: Permutation, g: Graph, mode: str) -> Verdict:
    if mode == "positive":
        return positive_admissible(alpha, g)
    if mode == "reversing":
        return reversing_admissible(alpha, g)
    if mode == "any":
        return realizable_admissible(alpha, g)
    raise ObstructionError(f"unknown mode {mode!r}")


# group-level candidates ----------------------------------------------------

def _require_subgroup(h: PermGroup, g: Graph) -> None:
    if h.domain != g.vertices or not all(g.is_automorphism(x) for x in h.generators):
        raise ObstructionError("group is not a subgroup of the automorphism group")


def group_tsg_plus_candidate(h: PermGroup, g: Graph) -> Verdict:
    """Could ``h`` be the orientation-preserving symmetry group of some embedding?"""
    _require_subgroup(h, g)
    for x in h.elements:
        v = positive_admissible(x, g)
        if not v.passed:
            return _fail(v.reason, element=str(x), **v.witness)
    if k33_core(g) is not None:
        image = PermGroup.generated([restrict_to_k33(x, g) for x in h.generators], K33_LABELS)
        name = identify_group(image)
        if name not in k33_positive_subgroup_classes():
            return _fail("restriction-class-mismatch", restriction_iso=name)
    return _pass()


def _split_failure(h: PermGroup, n: PermGroup, g: Graph) -> dict | None:
    for x in n.elements:
        v = positive_admissible(x, g)
        if not v.passed:
            return {"element": str(x), "side": "positive", "reason": v.reason}
    for x in h.elements:
        if x in n:
            continue
        v = reversing_admissible(x, g)
        if not v.passed:
            return {"element": str(x), "side": "reversing", "reason": v.reason}
    return None


def group_tsg_candidate(h: PermGroup, g: Graph) -> Verdict:
    """Could ``h`` be the full symmetry group of some embedding?"""
    plus = group_tsg_plus_candidate(h, g)
    if plus.passed:
        return _pass(mode="positive")
    attempts = []
    for n in index_two_subgroups(h):
        failure = _split_failure(h, n, g)
        if failure is None:
            return _pass(mode="split", positive_half=[str(x) for x in n.elements])
        attempts.append({"positive_half": [str(x) for x in n.elements], **failure})
    reason = attempts[0]["reason"] if attempts else plus.reason
    return _fail(reason, positive=plus.to_json(), splits=attempts)
