"""Exact permutation groups on small labelled domains.

Elements are stored as tuples of domain indices (``images[i]`` is the index
of the image of ``domain[i]``).  Products follow function composition:
``(p * q)(x) == p(q(x))``, so ``q`` is applied first.
"""
from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

DEFAULT_ELEMENT_CAP = 10_080
DEFAULT_SUBGROUP_CAP = 72

Raw = tuple[int, ...]


class GroupError(ValueError):
    pass


class CapExceeded(GroupError):
    pass


class PermutationSyntaxError(GroupError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def label_key(label: str) -> tuple:
    """Sort key: integer labels numerically first, then the rest as strings."""
    if label.isdigit():
        return (0, int(label), label)
    return (1, 0, label)


def normalize_domain(labels: Iterable) -> tuple[str, ...]:
    return tuple(sorted({str(x) for x in labels}, key=label_key))


# raw tuple helpers ---------------------------------------------------------

def _compose(p: Raw, q: Raw) -> Raw:
    return tuple([p[j] for j in q])


def _inverse(p: Raw) -> Raw:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def _raw_order(p: Raw) -> int:
    seen = [False] * len(p)
    result = 1
    for start in range(len(p)):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = p[i]
            length += 1
        result = math.lcm(result, length)
    return result


def _identity(n: int) -> Raw:
    return tuple(range(n))


@dataclass(frozen=True)
class Permutation:
    domain: tuple[str, ...]
    images: Raw

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.domain))):
            raise GroupError("images do not form a bijection on the domain")

    @classmethod
    def identity(cls, domain: Iterable) -> Permutation:
        dom = normalize_domain(domain)
        return cls(dom, _identity(len(dom)))

    @classmethod
    def from_mapping(cls, domain: Iterable, mapping: dict) -> Permutation:
        dom = normalize_domain(domain)
        pos = {x: i for i, x in enumerate(dom)}
        images = tuple(pos[str(mapping.get(x, x))] for x in dom)
        return cls(dom, images)

    @classmethod
    def from_cycles(cls, domain: Iterable, cycles: Iterable[Sequence]) -> Permutation:
        mapping = {}
        for cyc in cycles:
            cyc = [str(x) for x in cyc]
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                mapping[a] = b
        return cls.from_mapping(domain, mapping)

    def __call__(self, label) -> str:
        return self.domain[self.images[self.domain.index(str(label))]]

    def mapping(self) -> dict[str, str]:
        return {x: self.domain[j] for x, j in zip(self.domain, self.images)}

    def __mul__(self, other: Permutation) -> Permutation:
        if self.domain != other.domain:
            raise GroupError("cannot compose permutations on different domains")
        return Permutation(self.domain, _compose(self.images, other.images))

    def inverse(self) -> Permutation:
        return Permutation(self.domain, _inverse(self.images))

    def __pow__(self, k: int) -> Permutation:
        base = self.images if k >= 0 else _inverse(self.images)
        result = _identity(len(base))
        for _ in range(abs(k) % self.order):
            result = _compose(base, result)
        return Permutation(self.domain, result)

    def __lt__(self, other: Permutation) -> bool:
        return self.images < other.images

    @property
    def is_identity(self) -> bool:
        return self.images == _identity(len(self.images))

    @cached_property
    def order(self) -> int:
        return _raw_order(self.images)

    def support(self) -> tuple[str, ...]:
        return tuple(x for i, x in enumerate(self.domain) if self.images[i] != i)

    def cycles(self) -> list[tuple[str, ...]]:
        """Non-trivial cycles, each starting at its least label, sorted by first label."""
        seen = set()
        out = []
        for start in range(len(self.domain)):
            if start in seen or self.images[start] == start:
                continue
            cyc = []
            i = start
            while i not in seen:
                seen.add(i)
                cyc.append(self.domain[i])
                i = self.images[i]
            out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "id"
        return "".join("(" + " ".join(c) + ")" for c in cycles)

    def __repr__(self) -> str:
        return f"Permutation({str(self)!r})"


_TOKEN = re.compile(r"\S+")


def parse_permutation(text: str, domain: Iterable) -> Permutation:
    """Parse cycle notation such as ``"(1 4 2 5 3 6)"`` or ``"id"``.

    Labels are separated by spaces.  When every label of the domain is a
    single character the compact form ``"(142536)"`` is accepted too.
    """
    dom = normalize_domain(domain)
    known = set(dom)
    single_char = all(len(x) == 1 for x in dom)
    if text.strip() == "id":
        return Permutation.identity(dom)

    mapping: dict[str, str] = {}
    used: dict[str, int] = {}
    pos = 0
    ncycles = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        if text[pos] != "(":
            raise PermutationSyntaxError(f"expected '(' but found {text[pos]!r}", pos)
        close = text.find(")", pos)
        if close < 0:
            raise PermutationSyntaxError("unclosed cycle", pos)
        if "(" in text[pos + 1:close]:
            raise PermutationSyntaxError("nested '('", text.index("(", pos + 1))
        body_start = pos + 1
        body = text[body_start:close]
        tokens = [(m.group(), body_start + m.start()) for m in _TOKEN.finditer(body)]
        if not tokens:
            raise PermutationSyntaxError("empty cycle", pos)
        if len(tokens) == 1 and tokens[0][0] not in known:
            word, at = tokens[0]
            if not single_char:
                raise PermutationSyntaxError(
                    f"unknown label {word!r}; separate labels with spaces", at)
            tokens = [(ch, at + k) for k, ch in enumerate(word)]
        labels = []
        for label, at in tokens:
            if label not in known:
                raise PermutationSyntaxError(f"unknown label {label!r}", at)
            if label in used:
                raise PermutationSyntaxError(f"label {label!r} repeated", at)
            used[label] = at
            labels.append(label)
        for a, b in zip(labels, labels[1:] + labels[:1]):
            mapping[a] = b
        ncycles += 1
        pos = close + 1
    if ncycles == 0:
        raise PermutationSyntaxError("empty permutation; use 'id' for the identity", 0)
    return Permutation.from_mapping(dom, mapping)


# group tables --------------------------------------------------------------

class _Table:
    """Indexed element list with lazily built multiplication table."""

    def __init__(self, elements: list[Raw]):
        self.elements = elements
        self.index = {e: i for i, e in enumerate(elements)}
        self.n = len(elements)
        self.identity = self.index[_identity(len(elements[0]))]

    @cached_property
    def mul(self) -> list[list[int]]:
        idx = self.index
        els = self.elements
        return [[idx[_compose(a, b)] for b in els] for a in els]

    @cached_property
    def inv(self) -> list[int]:
        return [self.index[_inverse(e)] for e in self.elements]

    @cached_property
    def orders(self) -> list[int]:
        return [_raw_order(e) for e in self.elements]

    def closure(self, gens: Sequence[int], start: int = 0) -> int:
        """Bitmask of the subgroup generated by ``gens`` together with bitmask ``start``."""
        mul = self.mul
        mask = start | (1 << self.identity)
        members = [i for i in range(self.n) if mask >> i & 1]
        k = 0
        while k < len(members):
            x = members[k]
            row = mul[x]
            for s in gens:
                y = row[s]
                if not mask >> y & 1:
                    mask |= 1 << y
                    members.append(y)
            k += 1
        return mask

    def cyclic(self, i: int) -> int:
        mask = 1 << self.identity
        x = i
        while x != self.identity:
            mask |= 1 << x
            x = self.mul[x][i]
        return mask

    def members(self, mask: int) -> list[int]:
        return [i for i in range(self.n) if mask >> i & 1]


def _closure_raw(gens: Sequence[Raw], n: int, cap: int) -> list[Raw]:
    ident = _identity(n)
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = _compose(x, s)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise CapExceeded(f"group has more than {cap} elements")
                queue.append(y)
    return sorted(seen)


@dataclass(frozen=True)
class PermGroup:
    domain: tuple[str, ...]
    generators: tuple[Permutation, ...] = ()
    cap: int = field(default=DEFAULT_ELEMENT_CAP, compare=False, repr=False)

    def __post_init__(self):
        for g in self.generators:
            if g.domain != self.domain:
                raise GroupError(f"generator {g} is not on domain {self.domain}")

    @classmethod
    def generated(cls, generators: Iterable[Permutation], domain: Iterable | None = None,
                  cap: int = DEFAULT_ELEMENT_CAP) -> PermGroup:
        gens = tuple(generators)
        if domain is None:
            if not gens:
                raise GroupError("domain required for a group without generators")
            dom = gens[0].domain
        else:
            dom = normalize_domain(domain)
        return cls(dom, gens, cap)

    @classmethod
    def parse(cls, generators: Iterable[str], domain: Iterable) -> PermGroup:
        dom = normalize_domain(domain)
        return cls(dom, tuple(parse_permutation(t, dom) for t in generators))

    @classmethod
    def _from_raw(cls, domain: tuple[str, ...], raw: list[Raw], gens: Sequence[Raw] | None = None,
                  cap: int = DEFAULT_ELEMENT_CAP) -> PermGroup:
        raw = sorted(raw)
        if gens is None:
            gens = _greedy_generators(raw)
        group = cls(domain, tuple(Permutation(domain, g) for g in gens), cap)
        group.__dict__["_raw"] = raw
        return group

    @classmethod
    def from_elements(cls, elements: Iterable[Permutation], domain: Iterable | None = None) -> PermGroup:
        """Group whose element set is given explicitly (closure is verified)."""
        els = list(elements)
        dom = normalize_domain(domain) if domain is not None else els[0].domain
        raw = sorted({e.images for e in els} | {_identity(len(dom))})
        group = cls._from_raw(dom, raw)
        if len(group._raw) != len(_closure_raw([g.images for g in group.generators], len(dom), len(raw))):
            raise GroupError("element set is not closed under composition")
        return group

    @cached_property
    def _raw(self) -> list[Raw]:
        return _closure_raw([g.images for g in self.generators], len(self.domain), self.cap)

    @cached_property
    def _table(self) -> _Table:
        return _Table(self._raw)

    @cached_property
    def _raw_set(self) -> frozenset[Raw]:
        return frozenset(self._raw)

    @property
    def elements(self) -> tuple[Permutation, ...]:
        return tuple(Permutation(self.domain, e) for e in self._raw)

    @property
    def order(self) -> int:
        return len(self._raw)

    def __len__(self) -> int:
        return self.order

    def __contains__(self, p: Permutation) -> bool:
        return p.domain == self.domain and p.images in self._raw_set

    def identity(self) -> Permutation:
        return Permutation.identity(self.domain)

    def same_elements(self, other: PermGroup) -> bool:
        return self.domain == other.domain and self._raw_set == other._raw_set

    def is_subgroup_of(self, other: PermGroup) -> bool:
        return self.domain == other.domain and all(g in other for g in self.generators)

    def __str__(self) -> str:
        return "<" + ", ".join(str(g) for g in self.generators) + ">"


def _greedy_generators(raw: Sequence[Raw]) -> list[Raw]:
    """Small generating set: scan elements by decreasing order, keep those not yet generated."""
    if not raw:
        return []
    n = len(raw[0])
    target = len(raw)
    ranked = sorted(raw, key=lambda e: (-_raw_order(e), e))
    gens: list[Raw] = []
    current = {_identity(n)}
    for e in ranked:
        if len(current) == target:
            break
        if e in current:
            continue
        gens.append(e)
        current = set(_closure_raw(gens, n, target))
    return gens


# group-level operations ----------------------------------------------------

def group_elements(g: PermGroup) -> tuple[Permutation, ...]:
    return g.elements


def group_order(g: PermGroup) -> int:
    return g.order


def _conjugator(s: Raw):
    s_inv = _inverse(s)
    return lambda x: _compose(s, _compose(x, s_inv))


def conjugacy_classes(g: PermGroup) -> list[tuple[Permutation, int]]:
    """(least element, class size) for each class, sorted by representative."""
    conj = [_conjugator(s.images) for s in g.generators]
    assigned: set[Raw] = set()
    out = []
    for x in g._raw:  # sorted, so the first unseen element is the least of its class
        if x in assigned:
            continue
        orbit = {x}
        queue = [x]
        while queue:
            y = queue.pop()
            for c in conj:
                z = c(y)
                if z not in orbit:
                    orbit.add(z)
                    queue.append(z)
        assigned |= orbit
        out.append((Permutation(g.domain, x), len(orbit)))
    return out


def class_map(g: PermGroup) -> dict[Permutation, Permutation]:
    """Map every element to the representative of its conjugacy class."""
    conj = [_conjugator(s.images) for s in g.generators]
    rep: dict[Raw, Raw] = {}
    for x in g._raw:
        if x in rep:
            continue
        rep[x] = x
        queue = [x]
        while queue:
            y = queue.pop()
            for c in conj:
                z = c(y)
                if z not in rep:
                    rep[z] = x
                    queue.append(z)
    return {Permutation(g.domain, k): Permutation(g.domain, v) for k, v in rep.items()}


@dataclass(frozen=True)
class SubgroupClass:
    """A conjugacy class of subgroups; ``members`` are sorted, the first is the representative."""
    iso: str
    order: int
    members: tuple[PermGroup, ...]

    @property
    def representative(self) -> PermGroup:
        return self.members[0]

    def __len__(self) -> int:
        return len(self.members)


def _subgroup_masks(t: _Table) -> dict[int, tuple[int, ...]]:
    """All subgroups as bitmasks, by joining known subgroups with cyclic subgroups to a fixed point."""
    cyclic: dict[int, int] = {}
    for i in range(t.n):
        m = t.cyclic(i)
        if m not in cyclic or t.orders[i] > t.orders[cyclic[m]]:
            cyclic[m] = i
    trivial = 1 << t.identity
    found: dict[int, tuple[int, ...]] = {trivial: ()}
    for m, i in cyclic.items():
        if m != trivial:
            found[m] = (i,)
    queue = list(found)
    while queue:
        h = queue.pop()
        gens = found[h]
        for c, i in cyclic.items():
            if c & ~h == 0:
                continue
            j = t.closure(gens + (i,), h)
            if j not in found:
                found[j] = gens + (i,)
                queue.append(j)
    return found


def _mask_key(t: _Table, mask: int) -> tuple:
    return tuple(t.members(mask))


def enumerate_subgroups(g: PermGroup, max_order: int = DEFAULT_SUBGROUP_CAP) -> list[SubgroupClass]:
    """Every subgroup of ``g``, grouped into conjugacy classes and tagged with an iso name."""
    if g.order > max_order:
        raise CapExceeded(f"subgroup enumeration limited to order {max_order}, got {g.order}")
    return list(_enumerate_subgroups(g))


@lru_cache(maxsize=64)
def _enumerate_subgroups(g: PermGroup) -> tuple[SubgroupClass, ...]:
    from .groupid import identify_group

    t = g._table
    masks = _subgroup_masks(t)
    conj_perm = []
    for s in g.generators:
        c = _conjugator(s.images)
        conj_perm.append([t.index[c(e)] for e in t.elements])

    def conj_mask(p: list[int], m: int) -> int:
        out = 0
        for i in t.members(m):
            out |= 1 << p[i]
        return out

    seen: set[int] = set()
    classes = []
    for m in sorted(masks, key=lambda m: (bin(m).count("1"), _mask_key(t, m))):
        if m in seen:
            continue
        orbit = {m}
        queue = [m]
        while queue:
            x = queue.pop()
            for p in conj_perm:
                y = conj_mask(p, x)
                if y not in orbit:
                    orbit.add(y)
                    queue.append(y)
        seen |= orbit
        members = []
        for x in sorted(orbit, key=lambda x: _mask_key(t, x)):
            raw = [t.elements[i] for i in t.members(x)]
            gens = [t.elements[i] for i in masks[x]] if x in masks else None
            members.append(PermGroup._from_raw(g.domain, raw, gens))
        rep = members[0]
        classes.append(SubgroupClass(identify_group(rep), rep.order, tuple(members)))
    classes.sort(key=lambda c: (c.order, c.iso, _mask_key(t, _mask_of(t, c.representative))))
    return tuple(classes)


def _mask_of(t: _Table, h: PermGroup) -> int:
    mask = 0
    for e in h._raw:
        mask |= 1 << t.index[e]
    return mask


def all_subgroups(g: PermGroup, max_order: int = DEFAULT_SUBGROUP_CAP) -> list[PermGroup]:
    return [h for cls in enumerate_subgroups(g, max_order) for h in cls.members]


def index_two_subgroups(g: PermGroup) -> list[PermGroup]:
    """Kernels of the surjections onto Z2, found by assigning parities to generators."""
    gens = [s.images for s in g.generators]
    if g.order % 2:
        return []
    n = len(g.domain)
    out = []
    seen = set()
    for bits in range(1, 1 << len(gens)):
        parity = {_identity(n): 0}
        queue = deque([_identity(n)])
        ok = True
        while queue and ok:
            x = queue.popleft()
            for k, s in enumerate(gens):
                y = _compose(x, s)
                p = parity[x] ^ (bits >> k & 1)
                if y in parity:
                    if parity[y] != p:
                        ok = False
                        break
                else:
                    parity[y] = p
                    queue.append(y)
        if not ok:
            continue
        kernel = tuple(sorted(x for x, p in parity.items() if p == 0))
        if kernel in seen or len(kernel) * 2 != g.order:
            continue
        seen.add(kernel)
        out.append(PermGroup._from_raw(g.domain, list(kernel)))
    out.sort(key=lambda h: h._raw)
    return out


def subgroup_conjugate(h: PermGroup, x: Permutation) -> PermGroup:
    """x h x^-1 as an element set."""
    c = _conjugator(x.images)
    return PermGroup._from_raw(h.domain, [c(e) for e in h._raw])

