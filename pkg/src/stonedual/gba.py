"""Finite generalized Boolean algebras and their classical Stone duality.

Elements are bitmasks over a declared universe of atom identifiers.  A family
of masks containing the empty mask and closed under union, intersection and
set difference is exactly a finite GBA (automatically an atomic Boolean
algebra), so representing elements extensionally is lossless.  Closure is
validated, never completed silently.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import MissingBottom, NotClosed, UnknownElement
from .report import Report


class FinGBA:
    """Finite GBA over a universe of named atoms; elements are bitmasks.

    The lattice order is mask inclusion, join/meet/difference are the mask
    operations.  Lattice atoms (minimal non-zero elements) need not be
    mask singletons when the family is a proper subfamily of the power set.
    """

    def __init__(self, universe, masks):
        self.universe = tuple(universe)
        self.elements = tuple(sorted(set(masks)))
        self.index = {m: i for i, m in enumerate(self.elements)}
        self.bottom = 0
        self.top = 0
        for m in self.elements:
            self.top |= m

    def __len__(self):
        return len(self.elements)

    def __contains__(self, mask):
        return mask in self.index

    def __eq__(self, other):
        return (isinstance(other, FinGBA)
                and self.universe == other.universe
                and self.elements == other.elements)

    def __repr__(self):
        return f"FinGBA({len(self.universe)} atoms, {len(self.elements)} elements)"

    def require(self, mask):
        if mask not in self.index:
            raise UnknownElement(f"mask {mask} is not an element")
        return mask

    def leq(self, a, b):
        return a & b == a

    def join(self, a, b):
        return self.require(self.require(a) | self.require(b))

    def meet(self, a, b):
        return self.require(self.require(a) & self.require(b))

    def diff(self, a, b):
        return self.require(self.require(a) & ~self.require(b))

    def mask_of(self, atom_names):
        pos = {name: i for i, name in enumerate(self.universe)}
        mask = 0
        for name in atom_names:
            if name not in pos:
                raise UnknownElement(f"unknown atom identifier {name!r}")
            mask |= 1 << pos[name]
        return mask

    def names_of(self, mask):
        return tuple(name for i, name in enumerate(self.universe) if mask >> i & 1)

    def lattice_atoms(self):
        """Minimal non-zero elements, in mask order."""
        out = []
        for m in self.elements:
            if m == 0:
                continue
            if all(n == 0 or n == m or n & m != n for n in self.elements):
                out.append(m)
        return tuple(out)


@dataclass(frozen=True)
class PrimeCharacter:
    """Evaluation at one lattice atom: phi(e) = 1 iff atom <= e."""
    atom: int

    def __call__(self, e):
        return 1 if self.atom & e == self.atom else 0


def make_gba(universe, subsets):
    """Validate a family of atom-subsets as a finite GBA.

    Accepts subsets as iterables of atom identifiers from `universe`, or as
    ready-made bitmasks.  Raises MissingBottom or NotClosed; never completes
    the closure, so defects in a candidate projection lattice stay visible.
    """
    universe = tuple(universe)
    pos = {name: i for i, name in enumerate(universe)}
    masks = []
    for sub in subsets:
        if isinstance(sub, int):
            masks.append(sub)
        else:
            mask = 0
            for name in sub:
                if name not in pos:
                    raise UnknownElement(f"unknown atom identifier {name!r}")
                mask |= 1 << pos[name]
            masks.append(mask)
    family = set(masks)
    if 0 not in family:
        raise MissingBottom("bottom (empty subset) is missing")
    gba = FinGBA(universe, family)
    for a, b in combinations(sorted(family), 2):
        for op, res in (("or", a | b), ("and", a & b), ("diff", a & ~b), ("diff", b & ~a)):
            if res not in family:
                raise NotClosed(op, gba.names_of(a), gba.names_of(b), gba.names_of(res))
    return gba


def atoms(E):
    """Prime characters of E, one per lattice atom."""
    return tuple(PrimeCharacter(a) for a in E.lattice_atoms())


def char_eval(phi, e):
    return 1 if phi.atom & e == phi.atom else 0


def basic_set(E, e):
    """D_e: the prime characters sending e to 1."""
    E.require(e)
    return frozenset(phi for phi in atoms(E) if char_eval(phi, e))


def verify_stone_duality(E):
    """Check the finite Stone duality statements on E.

    (i) e -> D_e is a bijection of E onto all subsets of the character space,
    (ii) D respects joins and meets, (iii) evaluation at a point recovers the
    point (counit identity).  All three are theorems for valid instances;
    failures would carry witnesses.
    """
    rpt = Report("stone-duality")
    chars = atoms(E)
    d = {e: basic_set(E, e) for e in E.elements}

    distinct = len(set(d.values())) == len(E.elements)
    full = len(E.elements) == 2 ** len(chars)
    bad = None
    if not distinct:
        for a, b in combinations(E.elements, 2):
            if d[a] == d[b]:
                bad = (E.names_of(a), E.names_of(b))
                break
    rpt.check("eta-bijective", distinct and full, bad or (len(E.elements), len(chars)))

    ok_join = ok_meet = True
    wj = wm = None
    for a in E.elements:
        for b in E.elements:
            if ok_join and d[a | b] != d[a] | d[b]:
                ok_join, wj = False, (E.names_of(a), E.names_of(b))
            if ok_meet and d[a & b] != d[a] & d[b]:
                ok_meet, wm = False, (E.names_of(a), E.names_of(b))
    rpt.check("D-preserves-join", ok_join, wj)
    rpt.check("D-preserves-meet", ok_meet, wm)

    ok_pt = True
    wp = None
    for phi in chars:
        for e in E.elements:
            if char_eval(phi, e) != (1 if phi in d[e] else 0):
                ok_pt, wp = False, (E.names_of(phi.atom), E.names_of(e))
                break
        if not ok_pt:
            break
    rpt.check("counit-point-identity", ok_pt, wp)
    return rpt


def enumerate_filters(E):
    """All proper filters of E: non-empty, upward closed, meet closed, 0-free."""
    n = len(E.elements)
    filters = []
    for bits in range(1, 1 << n):
        members = [E.elements[i] for i in range(n) if bits >> i & 1]
        if 0 in members:
            continue
        ok = True
        for a in members:
            for b in E.elements:
                if a & b == a and b not in members:  # upward closure
                    ok = False
                    break
            if not ok:
                break
        if ok:
            for a in members:
                for b in members:
                    if (a & b) not in members:  # meet closure
                        ok = False
                        break
                if not ok:
                    break
        if ok:
            filters.append(frozenset(members))
    return filters


def filters_coincide(E):
    """Prime = ultra = principal-at-an-atom, by exhaustive enumeration.

    Enumerates all subsets, so only usable on small instances (<= 16 or so
    elements); the statement itself holds in every finite GBA.
    """
    filters = enumerate_filters(E)
    prime = set()
    for f in filters:
        if all((a | b) not in f or a in f or b in f
               for a in E.elements for b in E.elements):
            prime.add(f)
    ultra = {f for f in filters if not any(f < g for g in filters)}
    principal = {frozenset(e for e in E.elements if a & e == a)
                 for a in E.lattice_atoms()}
    return prime == ultra == principal
