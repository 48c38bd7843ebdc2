"""Isomorphism classes of small groups: fingerprints, reference catalog, explicit isomorphisms."""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .permgroup import (
    DEFAULT_ELEMENT_CAP,
    CapExceeded,
    PermGroup,
    Permutation,
    Raw,
    _closure_raw,
    _compose,
    _greedy_generators,
    _identity,
    _inverse,
    _raw_order,
)

# name -> (degree, generators in compact cycle notation over 1..degree)
_REFERENCE_SPECS: dict[str, tuple[int, tuple[str, ...]]] = {
    "1": (1, ()),
    "Z2": (2, ("(12)",)),
    "Z3": (3, ("(123)",)),
    "Z4": (4, ("(1234)",)),
    "Z5": (5, ("(12345)",)),
    "Z6": (6, ("(123456)",)),
    "D2": (4, ("(12)", "(34)")),
    "D3": (3, ("(123)", "(12)")),
    "D4": (4, ("(1234)", "(13)")),
    "D5": (5, ("(12345)", "(25)(34)")),
    "D6": (6, ("(123456)", "(26)(35)")),
    "Z3xZ3": (6, ("(123)", "(456)")),
    "D3xZ3": (6, ("(12)", "(123)", "(456)")),
    "D3xD3": (6, ("(12)", "(123)", "(45)", "(456)")),
    # generalized dihedral: the involution inverts every element of Z3xZ3
    "(Z3xZ3):Z2": (6, ("(123)", "(456)", "(12)(45)")),
    "(Z3xZ3):Z4": (6, ("(123)", "(456)", "(1425)(36)")),
    "(D3xD3):Z2": (6, ("(12)", "(123)", "(45)", "(456)", "(14)(25)(36)")),
    "Z2xZ4": (6, ("(1234)", "(56)")),
    "Z2xZ2xZ2": (6, ("(12)", "(34)", "(56)")),
    "A4": (4, ("(123)", "(12)(34)")),
    "S4": (4, ("(1234)", "(12)")),
    "Z5:Z4": (5, ("(12345)", "(2354)")),
    "A5": (5, ("(12345)", "(123)")),
    "S5": (5, ("(12345)", "(12)")),
    "D4xZ2": (6, ("(1234)", "(13)", "(56)")),
    "A4xZ2": (6, ("(123)", "(12)(34)", "(56)")),
    "S4xZ2": (6, ("(1234)", "(12)", "(56)")),
    "A6": (6, ("(123)", "(23456)")),
    "S6": (6, ("(123456)", "(12)")),
}

ALIASES = {"Z2xZ2": "D2", "S3": "D3", "D3xZ2": "D6", "Z3xZ2": "Z6", "Z2xZ3": "Z6"}

CATALOG_NAMES: tuple[str, ...] = tuple(_REFERENCE_SPECS)


def canonical_name(name: str) -> str:
    """Canonical spelling of an iso-class name; raises KeyError for unknown names."""
    name = name.strip()
    name = ALIASES.get(name, name)
    if name not in _REFERENCE_SPECS:
        raise KeyError(name)
    return name


def is_known_name(name: str) -> bool:
    try:
        canonical_name(name)
    except KeyError:
        return False
    return True


@lru_cache(maxsize=None)
def reference_group(name: str) -> PermGroup:
    name = canonical_name(name)
    degree, gens = _REFERENCE_SPECS[name]
    return PermGroup.parse(gens, range(1, degree + 1))


@dataclass(frozen=True)
class GroupFingerprint:
    order: int
    element_order_multiset: tuple[tuple[int, int], ...]
    is_abelian: bool
    center_order: int
    derived_subgroup_order: int

    def as_dict(self) -> dict:
        return {
            "order": self.order,
            "element_orders": {str(k): v for k, v in self.element_order_multiset},
            "is_abelian": self.is_abelian,
            "center_order": self.center_order,
            "derived_subgroup_order": self.derived_subgroup_order,
        }


def _commutator(a: Raw, b: Raw) -> Raw:
    return _compose(_compose(a, b), _compose(_inverse(a), _inverse(b)))


def _derived_order(g: PermGroup) -> int:
    n = len(g.domain)
    gens = [s.images for s in g.generators]
    dgens = list({_commutator(a, b) for a in gens for b in gens} - {_identity(n)})
    members = set(_closure_raw(dgens, n, g.order))
    changed = True
    while changed:
        changed = False
        for s in gens:
            s_inv = _inverse(s)
            for x in list(dgens):
                y = _compose(s, _compose(x, s_inv))
                if y not in members:
                    dgens.append(y)
                    members = set(_closure_raw(dgens, n, g.order))
                    changed = True
    return len(members)


def fingerprint(g: PermGroup) -> GroupFingerprint:
    raw = g._raw
    gens = [s.images for s in g.generators]
    orders = Counter(_raw_order(e) for e in raw)
    center = sum(1 for e in raw if all(_compose(e, s) == _compose(s, e) for s in gens))
    return GroupFingerprint(
        order=len(raw),
        element_order_multiset=tuple(sorted(orders.items())),
        is_abelian=center == len(raw),
        center_order=center,
        derived_subgroup_order=_derived_order(g),
    )


# explicit isomorphism search -----------------------------------------------

class _Search:
    """Data for mapping a generating set of one group into another."""

    def __init__(self, g: PermGroup):
        self.raw = g._raw
        self.n = len(g.domain)
        self.index = set(self.raw)
        self.class_size = self._class_sizes(g)

    @staticmethod
    def _class_sizes(g: PermGroup) -> dict[Raw, int]:
        from .permgroup import conjugacy_classes, class_map
        sizes = {rep.images: size for rep, size in conjugacy_classes(g)}
        return {k.images: sizes[v.images] for k, v in class_map(g).items()}

    def signature(self, e: Raw) -> tuple[int, int]:
        return (_raw_order(e), self.class_size[e])


def _word_checks(src: Sequence[Raw], dst: Sequence[Raw]) -> bool:
    """Cheap necessary conditions: orders of short products agree."""
    k = len(src)
    for i in range(k):
        for j in range(i):
            if _raw_order(_compose(src[i], src[j])) != _raw_order(_compose(dst[i], dst[j])):
                return False
            if _raw_order(_compose(src[i], _inverse(src[j]))) != _raw_order(_compose(dst[i], _inverse(dst[j]))):
                return False
    return True


def _extend(src_gens: Sequence[Raw], dst_gens: Sequence[Raw], n_src: int, size: int) -> dict[Raw, Raw] | None:
    ident_s = _identity(n_src)
    ident_d = _identity(len(dst_gens[0])) if dst_gens else None
    if ident_d is None:
        return {ident_s: ident_s} if size == 1 else None
    phi = {ident_s: ident_d}
    queue = deque([ident_s])
    while queue:
        x = queue.popleft()
        fx = phi[x]
        for s, t in zip(src_gens, dst_gens):
            y = _compose(x, s)
            fy = _compose(fx, t)
            if y in phi:
                if phi[y] != fy:
                    return None
            else:
                phi[y] = fy
                queue.append(y)
    if len(phi) != size or len(set(phi.values())) != size:
        return None
    return phi


def _find_isomorphism(g: PermGroup, h: PermGroup) -> dict[Raw, Raw] | None:
    if g.order != h.order:
        return None
    if g.order == 1:
        return {_identity(len(g.domain)): _identity(len(h.domain))}
    sg, sh = _Search(g), _Search(h)
    gens = _greedy_generators(g._raw)
    by_sig: dict[tuple[int, int], list[Raw]] = {}
    for e in h._raw:
        by_sig.setdefault(sh.signature(e), []).append(e)
    options = [by_sig.get(sg.signature(s), []) for s in gens]
    if any(not o for o in options):
        return None
    sub_orders = [len(_closure_raw(gens[:k + 1], len(g.domain), g.order)) for k in range(len(gens))]
    n_h = len(h.domain)

    chosen: list[Raw] = []

    def backtrack(k: int):
        if k == len(gens):
            return _extend(gens, chosen, len(g.domain), g.order)
        for cand in options[k]:
            chosen.append(cand)
            ok = _word_checks(gens[:k + 1], chosen)
            if ok and k > 0:
                try:
                    ok = len(_closure_raw(chosen, n_h, sub_orders[k])) == sub_orders[k]
                except CapExceeded:
                    ok = False
            if ok:
                found = backtrack(k + 1)
                if found is not None:
                    return found
            chosen.pop()
        return None

    return backtrack(0)


def is_isomorphic(g: PermGroup, h: PermGroup,
                  cap: int = DEFAULT_ELEMENT_CAP) -> tuple[bool, dict[Permutation, Permutation] | None]:
    """Decide isomorphism; on success also return the element map g -> h."""
    if g.order > cap or h.order > cap:
        raise CapExceeded(f"isomorphism test limited to order {cap}")
    if fingerprint(g) != fingerprint(h):
        return False, None
    phi = _find_isomorphism(g, h)
    if phi is None:
        return False, None
    return True, {Permutation(g.domain, a): Permutation(h.domain, b) for a, b in phi.items()}


@lru_cache(maxsize=None)
def _reference_fingerprint(name: str) -> GroupFingerprint:
    return fingerprint(reference_group(name))


_identify_cache: dict[tuple[tuple[str, ...], frozenset], str] = {}


def identify_group(g: PermGroup) -> str:
    """Catalog name of ``g`` up to isomorphism, or ``unknown(order=N)``."""
    key = (g.domain, g._raw_set)
    if key in _identify_cache:
        return _identify_cache[key]
    fp = fingerprint(g)
    result = f"unknown(order={fp.order})"
    for name in CATALOG_NAMES:
        ref = reference_group(name)
        if ref.order != fp.order or _reference_fingerprint(name) != fp:
            continue
        if _find_isomorphism(g, ref) is not None:
            result = name
            break
    _identify_cache[key] = result
    return result
