"""Per-graph analyses and the verification report against the stored classification catalog."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Mapping

from .groupid import canonical_name, identify_group, reference_group
from .obstruct import (
    K33_CATALOG,
    ObstructionError,
    circle_filter,
    group_tsg_candidate,
    group_tsg_plus_candidate,
    inversion_collision_filter,
    positive_admissible,
    realizable_admissible,
    reversing_filter,
)
from .permgroup import (
    DEFAULT_SUBGROUP_CAP,
    GroupError,
    PermGroup,
    conjugacy_classes,
    enumerate_subgroups,
    parse_permutation,
)
from .spatialgraph import (
    BUILTIN_NAMES,
    Graph,
    GraphError,
    automorphism_group,
    builtin_graph,
    canonical_form,
    canonical_graph_name,
    family_closure,
    restriction_map,
)


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    graph: str
    positive_groups: tuple[str, ...]
    realizable_only_groups: tuple[str, ...]
    provenance: str

    @property
    def tsg_plus(self) -> frozenset[str]:
        return frozenset(self.positive_groups) | {"1"}

    @property
    def tsg(self) -> frozenset[str]:
        return self.tsg_plus | set(self.realizable_only_groups)

    def to_json(self) -> dict:
        return {"graph": self.graph, "positive": list(self.positive_groups),
                "realizable_only": list(self.realizable_only_groups), "cite": self.provenance}


def _entry_from_json(raw) -> CatalogEntry:
    if not isinstance(raw, dict):
        raise CatalogError("catalog entry must be an object")
    missing = {"graph", "positive", "realizable_only", "cite"} - raw.keys()
    if missing:
        raise CatalogError(f"catalog entry lacks {sorted(missing)}")
    try:
        graph = canonical_graph_name(raw["graph"])
    except (GraphError, KeyError, AttributeError) as exc:
        raise CatalogError(f"unknown graph {raw['graph']!r}") from exc
    lists = []
    for key in ("positive", "realizable_only"):
        if not isinstance(raw[key], list) or not all(isinstance(x, str) for x in raw[key]):
            raise CatalogError(f"{graph}: {key} must be a list of names")
        names = []
        for x in raw[key]:
            try:
                names.append(canonical_name(x))
            except KeyError:
                raise CatalogError(f"{graph}: unknown group name {x!r}") from None
        if len(set(names)) != len(names):
            raise CatalogError(f"{graph}: repeated name in {key}")
        lists.append(tuple(names))
    if set(lists[0]) & set(lists[1]):
        raise CatalogError(f"{graph}: positive and realizable_only overlap")
    if not isinstance(raw["cite"], str):
        raise CatalogError(f"{graph}: cite must be a string")
    return CatalogEntry(graph, lists[0], lists[1], raw["cite"])


def parse_catalog(text: str) -> list[CatalogEntry]:
    if not text.strip():
        raise CatalogError("no entries")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"malformed catalog JSON: {exc}") from exc
    if isinstance(data, dict):
        data = data.get("entries")
    if not isinstance(data, list):
        raise CatalogError("catalog must be a list of entries or an object with 'entries'")
    if not data:
        raise CatalogError("no entries")
    entries = [_entry_from_json(raw) for raw in data]
    seen = Counter(e.graph for e in entries)
    dupes = sorted(g for g, c in seen.items() if c > 1)
    if dupes:
        raise CatalogError(f"duplicate graph entry: {', '.join(dupes)}")
    return entries


def load_catalog(path: str | Path | None = None) -> list[CatalogEntry]:
    """Read a catalog file, or the embedded default when ``path`` is None."""
    if path is None:
        text = resources.files("tsg").joinpath("data/catalog.json").read_text(encoding="utf-8")
    else:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise CatalogError(f"cannot read catalog {path}: {exc}") from exc
    return parse_catalog(text)


def iso_sort_key(name: str) -> tuple:
    try:
        return (reference_group(name).order, name)
    except KeyError:
        return (10**9, name)


def _sorted_names(names: Iterable[str]) -> list[str]:
    return sorted(set(names), key=iso_sort_key)


def _relation(computed: frozenset[str], claimed: frozenset[str]) -> str:
    if computed == claimed:
        return "equal"
    return "superset" if computed >= claimed else "missing"


@dataclass
class GraphReport:
    graph: str
    aut_order: int
    aut_iso: str
    conjugacy: list[tuple[str, int]]
    pipeline: str
    subgroup_classes: list[dict] = field(default_factory=list)
    tsg_plus: list[str] = field(default_factory=list)
    tsg: list[str] = field(default_factory=list)
    exclusions: dict[str, dict[str, list[str]]] = field(default_factory=dict)
    comparisons: dict[str, str] = field(default_factory=dict)

    @property
    def subgroup_iso_classes(self) -> list[str]:
        return _sorted_names(c["iso"] for c in self.subgroup_classes)

    def to_json(self) -> dict:
        return {
            "graph": self.graph,
            "aut": {"order": self.aut_order, "iso": self.aut_iso,
                    "classes": [{"representative": r, "size": s} for r, s in self.conjugacy]},
            "pipeline": self.pipeline,
            "subgroup_classes": self.subgroup_classes,
            "tsg_plus_candidates": self.tsg_plus,
            "tsg_candidates": self.tsg,
            "exclusions": self.exclusions,
            "comparisons": self.comparisons,
        }


def _by_iso(d: dict[str, set[str]]) -> list[tuple[str, list[str]]]:
    return [(k, sorted(v)) for k, v in sorted(d.items(), key=lambda kv: iso_sort_key(kv[0]))]


def catalog_by_graph(catalog: Iterable[CatalogEntry]) -> dict[str, CatalogEntry]:
    return {e.graph: e for e in catalog}


def analyze(g: Graph, name: str, entry: CatalogEntry | None = None,
            full_pipeline: bool = False) -> GraphReport:
    aut = automorphism_group(g)
    conj = [(str(r), s) for r, s in conjugacy_classes(aut)]
    report = GraphReport(name, aut.order, identify_group(aut), conj, "full")
    if aut.order > DEFAULT_SUBGROUP_CAP and not full_pipeline:
        report.pipeline = "pipeline-skipped"
        if entry is not None:
            report.tsg_plus = _sorted_names(entry.tsg_plus)
            report.tsg = _sorted_names(entry.tsg)
    else:
        classes = enumerate_subgroups(aut, max_order=max(aut.order, DEFAULT_SUBGROUP_CAP))
        plus, full = set(), set()
        excluded: dict[str, set[str]] = {}
        excluded_plus: dict[str, set[str]] = {}
        for c in classes:
            rep = c.representative
            report.subgroup_classes.append({
                "iso": c.iso, "order": c.order, "conjugates": len(c),
                "generators": [str(x) for x in rep.generators]})
            plus_verdict = group_tsg_plus_candidate(rep, g)
            if plus_verdict:
                plus.add(c.iso)
            else:
                excluded_plus.setdefault(c.iso, set()).add(plus_verdict.reason)
            verdict = group_tsg_candidate(rep, g)
            if verdict:
                full.add(c.iso)
            else:
                excluded.setdefault(c.iso, set()).add(verdict.reason)
        report.tsg_plus = _sorted_names(plus)
        report.tsg = _sorted_names(full)
        # a class counts as excluded only if every conjugacy class of it fails
        report.exclusions = {
            "tsg_plus": {k: v for k, v in _by_iso(excluded_plus) if k not in plus},
            "tsg": {k: v for k, v in _by_iso(excluded) if k not in full},
        }
    if entry is not None:
        report.comparisons = {
            "tsg_plus": _relation(frozenset(report.tsg_plus), entry.tsg_plus),
            "tsg": _relation(frozenset(report.tsg), entry.tsg),
        }
    return report


def analyze_graph(name: str, catalog: Iterable[CatalogEntry] | None = None,
                  full_pipeline: bool = False, graph: Graph | None = None) -> GraphReport:
    name = canonical_graph_name(name)
    entries = catalog_by_graph(load_catalog() if catalog is None else catalog)
    g = builtin_graph(name) if graph is None else graph
    return analyze(g, name, entries.get(name), full_pipeline)


# expected values -------------------------------------------------------------

FAMILY_TABLE = (
    (6, 15, (5,) * 6),
    (7, 15, (6,) + (4,) * 6),
    (7, 15, (5, 5, 5, 4, 4, 4, 3)),
    (8, 15, (4,) * 6 + (3, 3)),
    (8, 15, (5, 4, 4, 4, 4, 3, 3, 3)),
    (9, 15, (4, 4, 4) + (3,) * 6),
    (10, 15, (3,) * 10),
)

AUT_EXPECTED = {
    "K33": (72, "(D3xD3):Z2"), "K6": (720, "S6"), "K331": (72, "(D3xD3):Z2"),
    "P7": (36, "D3xD3"), "K44minus": (72, "(D3xD3):Z2"), "P8": (8, "D4"),
    "P9": (12, "D6"), "P10": (120, "S5"),
}

K33_CLASS_SIZES = (1, 4, 4, 6, 6, 9, 12, 12, 18)

K33_SUBGROUP_CLASSES = ("(D3xD3):Z2", "D3xD3", "(Z3xZ3):Z4", "(Z3xZ3):Z2", "D3xZ3", "D6",
                        "Z3xZ3", "D4", "D3", "Z6", "D2", "Z4", "Z3", "Z2", "1")

K33_ABSENT = ("S4", "A4", "Z2xZ4", "Z2xZ2xZ2")

K33_GENERATING_SETS = (
    ("(D3xD3):Z2", ("(1 2)", "(1 2 3)", "(4 5)", "(4 5 6)", "(1 4)(2 5)(3 6)")),
    ("(Z3xZ3):Z4", ("(1 2 3)", "(4 5 6)", "(1 4 2 5)(3 6)")),
    ("(Z3xZ3):Z2", ("(1 2 3)", "(4 5 6)", "(1 4)(2 5)(3 6)")),
    ("D3xD3", ("(1 2)", "(1 2 3)", "(4 5)", "(4 5 6)")),
    ("D3xZ3", ("(1 2)", "(1 2 3)", "(4 5 6)")),
    ("Z3xZ3", ("(1 2 3)", "(4 5 6)")),
    ("D6", ("(1 2)(5 6)", "(1 4 2 5 3 6)")),
    ("D4", ("(1 2)", "(1 4 2 5)(3 6)")),
    ("D3", ("(1 2)", "(1 2 3)")),
    ("D2", ("(1 2)", "(4 5)")),
    ("Z6", ("(1 4 2 5 3 6)",)),
    ("Z4", ("(1 4 2 5)(3 6)",)),
    ("Z3", ("(1 2 3)",)),
    ("Z2", ("(1 2)",)),
)

CORE = ("1", "2", "3", "4", "5", "6")

EQUALITY_GRAPHS = ("K33", "K331", "K44minus", "P7", "P8", "P9")

_CITES = {
    "family": "Petersen family: closure of K6 under triangle-Y and Y-triangle moves",
    "aut": "automorphism groups of the family members",
    "k33-classes": "conjugacy classes of Aut(K3,3) and their sizes",
    "k33-subgroups": "subgroups of Aut(K3,3) up to isomorphism",
    "k33-gens": "generating sets for subgroups of Aut(K3,3)",
    "k33-elements": "positively and negatively realizable classes of Aut(K3,3)",
    "no3cycle": "K3,3,1: an order-3 automorphism fixing the apex fixes a Y, which is not in a circle",
    "no6cycle": "K3,3,1: the cube of an order-6 automorphism inverts edges whose midpoints collide",
    "half-turn": "K3,3,1: the involution swapping the parts cannot put sides on a sphere",
    "restriction": "Aut restricts isomorphically onto Aut(K3,3)",
}


@dataclass
class Item:
    id: str
    claim: str
    cite: str
    status: str
    computed: object
    expected: object

    def to_json(self) -> dict:
        return {"id": self.id, "claim": self.claim, "cite": self.cite, "status": self.status,
                "computed": self.computed, "expected": self.expected}


class _Items:
    def __init__(self):
        self.items: list[Item] = []

    def check(self, id: str, claim: str, cite: str, expected, compute: Callable[[], object],
              ok: Callable[[object, object], bool] | None = None) -> None:
        try:
            computed = compute()
            passed = (ok or (lambda c, e: c == e))(computed, expected)
        except (ObstructionError, GraphError, GroupError, KeyError) as exc:
            computed, passed = f"error: {exc}", False
        self.items.append(Item(id, claim, cite, "pass" if passed else "fail", computed, expected))


def _family_rows(seed: Graph) -> list[list]:
    return sorted([m.graph.invariants()[0], m.graph.invariants()[1], list(m.graph.invariants()[2])]
                  for m in family_closure(seed))


def _verdict_summary(v) -> dict:
    return {"status": v.status, "reason": v.reason, "witness": v.witness}


def _restriction_is_bijection(g: Graph) -> dict:
    rmap = restriction_map(g, CORE)
    k33 = automorphism_group(builtin_graph("K33"))
    images = {p.images for p in rmap.values()}
    onto = images == {p.images for p in k33.elements}
    return {"domain": len(rmap), "image": len(images), "onto_aut_k33": onto}


def verify_claims(catalog: Iterable[CatalogEntry] | None = None,
                 overrides: Mapping[str, Graph] | None = None,
                 full_pipeline: bool = False) -> dict:
    """Line-item report comparing computations with the catalog and the expected structure."""
    entries = catalog_by_graph(load_catalog() if catalog is None else catalog)
    overrides = {canonical_graph_name(k): v for k, v in (overrides or {}).items()}

    def graph(name: str) -> Graph:
        return overrides.get(name) or builtin_graph(name)

    out = _Items()
    cite = _CITES

    # family closure
    expected_rows = sorted([n, m, list(d)] for n, m, d in FAMILY_TABLE)
    out.check("family.k6-closure", "closure of K6 has exactly 7 members with the listed invariants",
              cite["family"], expected_rows, lambda: _family_rows(graph("K6")))
    out.check("family.p10-closure", "closure of P10 equals closure of K6 up to isomorphism",
              cite["family"], True,
              lambda: {canonical_form(m.graph) for m in family_closure(graph("P10"))}
              == {canonical_form(m.graph) for m in family_closure(graph("K6"))})

    # automorphism groups
    for name in BUILTIN_NAMES:
        order, iso = AUT_EXPECTED[name]
        out.check(f"aut.{name}.order", f"|Aut({name})| = {order}", cite["aut"], order,
                  lambda name=name: automorphism_group(graph(name)).order)
        out.check(f"aut.{name}.iso", f"Aut({name}) is {iso}", cite["aut"], iso,
                  lambda name=name: identify_group(automorphism_group(graph(name))))
    for name in ("K331", "K44minus"):
        out.check(f"aut.{name}.restriction", f"restriction Aut({name}) -> Aut(K33) is a bijection",
                  cite["restriction"], {"domain": 72, "image": 72, "onto_aut_k33": True},
                  lambda name=name: _restriction_is_bijection(graph(name)))

    # K3,3 group theory
    k33 = lambda: automorphism_group(graph("K33"))
    out.check("k33.class-sizes", "Aut(K33) has 9 conjugacy classes of the listed sizes",
              cite["k33-classes"], list(K33_CLASS_SIZES),
              lambda: sorted(s for _, s in conjugacy_classes(k33())))
    out.check("k33.subgroup-classes", "Aut(K33) has exactly 15 subgroup iso classes",
              cite["k33-subgroups"], _sorted_names(K33_SUBGROUP_CLASSES),
              lambda: _sorted_names(c.iso for c in enumerate_subgroups(k33())))
    out.check("k33.absent", "S4, A4, Z2xZ4 and Z2xZ2xZ2 are not subgroups of Aut(K33)",
              cite["k33-subgroups"], [],
              lambda: sorted({c.iso for c in enumerate_subgroups(k33())} & set(K33_ABSENT)))
    for iso, gens in K33_GENERATING_SETS:
        out.check(f"k33.gens.{iso}", f"<{', '.join(gens)}> is {iso}", cite["k33-gens"], iso,
                  lambda gens=gens: identify_group(PermGroup.parse(gens, CORE)))

    # element filters
    def on(name, text):
        g = graph(name)
        return parse_permutation(text, g.vertices), g

    out.check("elem.K33.positive-classes", "positive class representatives pass the circle and collision filters",
              cite["k33-elements"], {r: "pass" for r in K33_CATALOG.positive_classes},
              lambda: {r: ("pass" if circle_filter(*on("K33", r)) and inversion_collision_filter(*on("K33", r))
                           else "fail") for r in K33_CATALOG.positive_classes})
    out.check("elem.K33.transposition", "(1 2) fails the circle filter on K33", cite["k33-elements"],
              "fail", lambda: circle_filter(*on("K33", "(1 2)")).status)
    out.check("elem.K33.negative-classes", "negative class representatives pass the reversing filter",
              cite["k33-elements"], {r: "pass" for r in K33_CATALOG.negative_classes},
              lambda: {r: reversing_filter(*on("K33", r)).status for r in K33_CATALOG.negative_classes})
    out.check("elem.K331.3-cycle", "(1 2 3) is not realizable on K331", cite["no3cycle"],
              {"status": "fail", "reason": "degree-exceeds-two"},
              lambda: {k: v for k, v in _verdict_summary(realizable_admissible(*on("K331", "(1 2 3)"))).items()
                       if k != "witness"})
    out.check("elem.K331.6-cycle", "(1 4 2 5 3 6) fails the positive filters with k=3, e={1,5}",
              cite["no6cycle"],
              {"status": "fail", "reason": "midpoint-collision", "witness": {"k": 3, "edge": ["1", "5"]}},
              lambda: _verdict_summary(positive_admissible(*on("K331", "(1 4 2 5 3 6)"))))
    out.check("elem.K331.half-turn", "(1 4)(2 5)(3 6) fails the reversing filter on K331",
              cite["half-turn"], {"status": "fail", "reason": "coloring-infeasible"},
              lambda: {k: v for k, v in _verdict_summary(reversing_filter(*on("K331", "(1 4)(2 5)(3 6)"))).items()
                       if k != "witness"})

    # classification against the catalog
    for name in BUILTIN_NAMES:
        entry = entries.get(name)
        if entry is None:
            continue
        try:
            report = analyze(graph(name), name, entry, full_pipeline)
        except (ObstructionError, GraphError, GroupError) as exc:
            report = None
            error = f"error: {exc}"
        c = entry.provenance

        def computed(attr, report=report):
            if report is None:
                raise GraphError(error)
            return getattr(report, attr)

        claimed_plus, claimed = _sorted_names(entry.tsg_plus), _sorted_names(entry.tsg)
        if report is not None and report.pipeline == "full":
            out.check(f"catalog.{name}.subgroups", f"every catalogued group for {name} is a subgroup of Aut",
                      c, [], lambda r=report: [x for x in claimed if x not in r.subgroup_iso_classes])
        out.check(f"candidates.{name}.tsg-plus-contains",
                  f"positive groups of {name} are not excluded by the filters", c, [],
                  lambda: _excluded(computed("tsg_plus"), claimed_plus, report, positive=True))
        out.check(f"candidates.{name}.tsg-contains",
                  f"realizable groups of {name} are not excluded by the filters", c, [],
                  lambda: _excluded(computed("tsg"), claimed, report, positive=False))
        if name in EQUALITY_GRAPHS:
            out.check(f"candidates.{name}.tsg-plus-equal",
                      f"filters reproduce the positive classification of {name}", c, claimed_plus,
                      lambda: computed("tsg_plus"))
            out.check(f"candidates.{name}.tsg-equal",
                      f"filters reproduce the full classification of {name}", c, claimed,
                      lambda: computed("tsg"))

    items = [i.to_json() for i in out.items]
    summary = Counter(i["status"] for i in items)
    return {"items": items, "summary": {"pass": summary["pass"], "fail": summary["fail"]}}


def _excluded(computed: list[str], claimed: list[str], report: GraphReport | None, positive: bool) -> list:
    missing = [x for x in claimed if x not in computed]
    if report is None or report.pipeline != "full":
        return missing
    reasons = report.exclusions["tsg_plus" if positive else "tsg"]
    return [{"group": x, "excluded_by": reasons.get(x, ["not a subgroup"])} for x in missing]


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
