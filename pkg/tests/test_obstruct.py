from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from tsg.obstruct import (
    K33_CATALOG,
    ObstructionError,
    circle_filter,
    fixed_structure,
    group_tsg_candidate,
    group_tsg_plus_candidate,
    inversion_collision_filter,
    k33_core,
    positive_admissible,
    realizable_admissible,
    restriction_class_filter,
    reversing_admissible,
    reversing_filter,
    sphere_coloring,
)
from tsg.permgroup import PermGroup, Permutation, all_subgroups, class_map, parse_permutation
from tsg.spatialgraph import BUILTIN_NAMES, automorphism_group, builtin_graph

K33, K331, K44M = builtin_graph("K33"), builtin_graph("K331"), builtin_graph("K44minus")
P7, P8, P9 = builtin_graph("P7"), builtin_graph("P8"), builtin_graph("P9")


def perm(text, g):
    return parse_permutation(text, g.vertices)


def group(g, *gens):
    return PermGroup.parse(gens, g.vertices)


def edges(*pairs):
    return tuple(tuple(p) for p in pairs)


# fixed structure -------------------------------------------------------------

def test_fixed_structure_examples():
    fs = fixed_structure(perm("(1 2 3)", K331), K331)
    assert fs.fixed_vertices == ("4", "5", "6", "7")
    assert fs.fixed_edges == edges("47", "57", "67")
    assert fs.inverted_edges == ()
    fs = fixed_structure(perm("(1 4)(2 5)(3 6)", K33), K33)
    assert (fs.fixed_vertices, fs.fixed_edges) == ((), ())
    assert fs.inverted_edges == edges("14", "25", "36")
    fs = fixed_structure(Permutation.identity(P9.vertices), P9)
    assert fs.fixed_vertices == P9.vertices and fs.fixed_edges == P9.edges and fs.inverted_edges == ()


def test_non_automorphism_rejected():
    with pytest.raises(ObstructionError):
        fixed_structure(perm("(1 4)", K33), K33)
    with pytest.raises(ObstructionError):
        circle_filter(perm("(1 2)", P9), P9)


# element filters ---------------------------------------------------------------

def test_circle_filter_examples():
    v = circle_filter(perm("(1 2 3)", K331), K331)
    assert (v.status, v.reason, v.witness["vertex"]) == ("fail", "degree-exceeds-two", "7")
    assert circle_filter(perm("(1 2 3)", K33), K33).passed
    v = circle_filter(perm("(1 4)(2 5)(3 6)", P9), P9)
    assert v.passed and fixed_structure(perm("(1 4)(2 5)(3 6)", P9), P9).fixed_vertices == ("a", "b", "c")
    assert circle_filter(Permutation.identity(K33.vertices), K33).reason == "identity"


def test_circle_filter_cycle_plus_extra():
    from tsg.spatialgraph import Graph
    g = Graph.build("123456", [("1", "2"), ("2", "3"), ("1", "3"), ("4", "5"), ("4", "6")])
    v = circle_filter(perm("(5 6)", g), g)
    assert (v.status, v.reason) == ("fail", "cycle-plus-extra")
    g = Graph.build("12345", [("1", "2"), ("2", "3"), ("1", "3"), ("4", "5")])
    assert circle_filter(perm("(4 5)", g), g).reason == "cycle-plus-extra"


def test_circle_filter_paths_and_points():
    alpha = perm("(2 6)(3 5)(b c)", P9)
    fs = fixed_structure(alpha, P9)
    assert fs.fixed_vertices == ("1", "4", "a")
    assert circle_filter(alpha, P9).passed  # path 1-a-4, no cycle
    v = circle_filter(perm("(1 2)(4 5)", K33), K33)
    assert v.passed  # fixed 3 and 6, inverted 12 and 45: isolated points


def test_inversion_collision_examples():
    v = inversion_collision_filter(perm("(1 4 2 5 3 6)", K331), K331)
    assert (v.status, v.reason, v.witness) == ("fail", "midpoint-collision", {"k": 3, "edge": ["1", "5"]})
    v = inversion_collision_filter(perm("(1 4 2 5 3 6)", K33), K33)
    assert (v.status, v.reason) == ("pass", "empty-fixed-structure")
    assert inversion_collision_filter(perm("(1 4)(2 5)(3 6)", K33), K33).passed


def test_reversing_filter_examples():
    v = reversing_filter(perm("(1 2)", K33), K33)
    assert v.passed and v.witness["branch"] == "S2"
    v = reversing_filter(perm("(2 5)(3 4)", P8), P8)
    assert (v.status, v.reason) == ("fail", "coloring-infeasible")
    v = reversing_filter(perm("(1 4)(2 5)(3 6)", K331), K331)
    assert (v.status, v.reason) == ("fail", "coloring-infeasible")
    v = reversing_filter(perm("(1 2 3)", K33), K33)
    assert v.reason == "odd-order-needs-positive"
    v = reversing_filter(perm("(1 4 2 5)(3 6)", K331), K331)
    assert v.passed and v.witness == {"branch": "S0", "points": 2}


def test_reversing_filter_square_propagates():
    # the square (4 6 5) fixes the apex together with 1, 2 and 3
    v = reversing_filter(perm("(1 2)(4 5 6)", K331), K331)
    assert not v.passed
    assert v.reason == "degree-exceeds-two" and v.witness["square"] == "(4 6 5)"


def test_restriction_class_examples():
    v = restriction_class_filter(perm("(1 4 2 5 3 6)", K331), K331, "reversing")
    assert (v.status, v.reason) == ("fail", "restriction-class-mismatch")
    v = restriction_class_filter(perm("(1 4 2 5)(3 6)(v w)", K44M), K44M, "reversing")
    assert v.passed
    for o in ("positive", "reversing"):
        assert restriction_class_filter(Permutation.identity(K331.vertices), K331, o).passed
    with pytest.raises(ObstructionError):
        restriction_class_filter(perm("(1 2)", P7), P7, "positive")


def test_admissibility_examples():
    v = realizable_admissible(perm("(1 2 3)", K331), K331)
    assert not v.passed and v.reason == "degree-exceeds-two"
    a = perm("(1 4 2 5)(3 6)", K331)
    assert positive_admissible(a, K331).reason == "restriction-class-mismatch"
    assert reversing_admissible(a, K331).passed
    for g in (K33, K331, P8):
        ident = Permutation.identity(g.vertices)
        assert positive_admissible(ident, g) and reversing_admissible(ident, g) and realizable_admissible(ident, g)


def test_k33_catalog_soundness():
    cmap = class_map(K33_CATALOG.group)
    reps = K33_CATALOG.positive_classes + K33_CATALOG.negative_classes
    assert len({cmap[perm(r, K33)] for r in reps}) == 8
    for r in K33_CATALOG.positive_classes:
        a = perm(r, K33)
        assert circle_filter(a, K33) and inversion_collision_filter(a, K33)
        assert positive_admissible(a, K33)
    for r in K33_CATALOG.negative_classes:
        a = perm(r, K33)
        assert reversing_filter(a, K33)
        assert reversing_admissible(a, K33)
    assert not circle_filter(perm("(1 2)", K33), K33)
    # the geometric filters alone let (1425)(36) through; the catalog decides
    gap = perm("(1 4 2 5)(3 6)", K33)
    assert circle_filter(gap, K33) and inversion_collision_filter(gap, K33)
    assert not positive_admissible(gap, K33)


def test_k33_core_of_relabelled_graph():
    h = K331.relabel(dict(zip(K331.vertices, "abcdefg")))
    assert k33_core(h) is not None
    assert k33_core(P7) is None
    alpha = perm("(a b c)", h)
    assert positive_admissible(alpha, h).reason == "degree-exceeds-two"
    six = perm("(a d b e c f)", h)
    assert positive_admissible(six, h).reason == "midpoint-collision"


# group filters -----------------------------------------------------------------

def test_group_plus_examples():
    assert group_tsg_plus_candidate(group(K331, "(1 4 2 5)(3 6)"), K331).reason == "restriction-class-mismatch"
    assert group_tsg_plus_candidate(group(P7, "(1 2 3)(a b c)", "(1 2)(a b)"), P7)
    assert group_tsg_plus_candidate(automorphism_group(P9), P9)
    with pytest.raises(ObstructionError):
        group_tsg_plus_candidate(group(K33, "(1 4)"), K33)


def test_group_full_examples():
    d4 = group(K331, "(1 4 2 5)(3 6)", "(1 2)")
    v = group_tsg_candidate(d4, K331)
    assert v.passed and v.witness["mode"] == "split"
    assert sorted(v.witness["positive_half"]) == sorted(["id", "(1 2)(4 5)", "(1 4)(2 5)(3 6)", "(1 5)(2 4)(3 6)"])
    d2 = group(P8, "(2 5)(3 4)", "(2 3)(4 5)(6 7)")
    assert d2.order == 4
    v = group_tsg_candidate(d2, P8)
    assert (v.status, v.reason) == ("fail", "coloring-infeasible")
    splits = v.witness["splits"]
    assert len(splits) == 3
    # the half containing the core-fixing involution already fails on the positive side
    assert [s["reason"] for s in splits if "(2 5)(3 4)" not in s["positive_half"]] == ["coloring-infeasible"] * 2
    v = group_tsg_candidate(group(P7, "(1 2)", "(a b)"), P7)
    assert v.passed and v.witness["positive_half"] == ["id", "(1 2)(a b)"]


# coloring oracle -----------------------------------------------------------------

def _coloring_exhaustive(alpha, g):
    m = alpha.mapping()
    orbits = sorted({tuple(sorted((v, m[v]))) for v in g.vertices if m[v] != v})
    for signs in product((0, 1), repeat=len(orbits)):
        side = {}
        for (a, b), s in zip(orbits, signs):
            side[a], side[b] = s, 1 - s
        if all({m[a], m[b]} == {a, b} for a, b in g.edges
               if a in side and b in side and side[a] != side[b]):
            return True
    return False


INVOLUTIONS = [(name, x) for name in ("K33", "K331", "K44minus", "P7", "P8", "P9", "P10")
               for x in automorphism_group(builtin_graph(name)).elements if x.order == 2]


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(INVOLUTIONS))
def test_coloring_matches_exhaustive(case):
    name, alpha = case
    g = builtin_graph(name)
    coloring, conflict = sphere_coloring(alpha, g)
    assert (coloring is not None) == _coloring_exhaustive(alpha, g)
    if coloring is not None:
        m = alpha.mapping()
        assert all(coloring[m[v]] != coloring[v] for v in coloring)


def test_p8_wlog_case_is_covered():
    # both side assignments of the two orbits are examined, not just one
    alpha = perm("(2 5)(3 4)", P8)
    assert not _coloring_exhaustive(alpha, P8)
    assert sphere_coloring(alpha, P8) == (None, ["2", "4"])


# properties ----------------------------------------------------------------------

SMALL = [n for n in BUILTIN_NAMES if n not in ("K6",)]
pairs = st.sampled_from(SMALL).flatmap(lambda n: st.tuples(
    st.just(n),
    st.sampled_from(automorphism_group(builtin_graph(n)).elements),
    st.sampled_from(automorphism_group(builtin_graph(n)).elements)))


def _summary(v):
    return (v.status, v.reason)


@settings(max_examples=200, deadline=None)
@given(pairs)
def test_conjugation_invariance(case):
    name, alpha, beta = case
    g = builtin_graph(name)
    conj = beta * alpha * beta.inverse()
    for f in (circle_filter, inversion_collision_filter, reversing_filter,
              positive_admissible, reversing_admissible, realizable_admissible):
        assert _summary(f(alpha, g)) == _summary(f(conj, g)), f.__name__


@settings(max_examples=200, deadline=None)
@given(pairs)
def test_reversing_implies_positive_square(case):
    name, alpha, _ = case
    g = builtin_graph(name)
    if reversing_admissible(alpha, g):
        assert positive_admissible(alpha * alpha, g)


SUBGROUPS = {n: all_subgroups(automorphism_group(builtin_graph(n))) for n in ("K331", "K44minus", "P7", "P9")}


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(sorted(SUBGROUPS)).flatmap(
    lambda n: st.tuples(st.just(n), st.sampled_from(SUBGROUPS[n]))), st.integers(0, 10**6))
def test_plus_candidate_monotone(case, pick):
    name, h = case
    g = builtin_graph(name)
    subs = [k for k in SUBGROUPS[name] if k.is_subgroup_of(h)]
    k = subs[pick % len(subs)]
    if group_tsg_plus_candidate(h, g):
        assert group_tsg_plus_candidate(k, g)
