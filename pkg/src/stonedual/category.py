"""Finite categories, local sections, slice semigroups, and cofunctors.

A category is stored as dense index tables; comp[x][y] is the composite
"y then x" and carries -1 where d(x) != r(y).  Composability is always
decided from the d/r tables, never from the sentinel pattern.

Slices (local sections) of a category C form a semigroup under setwise
composition, with support = units over d(A) and cosupport = units over r(A).
Cofunctors C ~> D act on target objects by source arrows and are validated
eagerly; bijective-on-arrows cofunctors translate to covering functors
D -> C and back, exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from math import prod

from .algebra import (BiUnaryAlgebra, SemigroupMorphism, check_morphism,
                      classify, deterministic_sets, make_algebra)
from .errors import (AxiomFail, BadTableShape, CompDomainMismatch,
                     CompositionMismatch, MathFail, NotBijectiveOnArrows,
                     NotStarBijective, ParentMismatch, TooLarge)

DEFAULT_MAX_SIZE = 100000


class FinCat:
    """Finite category as index tables over objects and arrows."""

    def __init__(self, objects, arrows, d, r, unit, comp):
        self.objects = tuple(objects)
        self.arrows = tuple(arrows)
        self.d = tuple(d)
        self.r = tuple(r)
        self.unit = tuple(unit)
        self.comp = tuple(tuple(row) for row in comp)
        self.n_obj = len(self.objects)
        self.n_arr = len(self.arrows)
        self._cache = {}

    def __repr__(self):
        return f"FinCat({self.n_obj} objects, {self.n_arr} arrows)"

    def same_tables(self, other):
        return (self.objects == other.objects and self.arrows == other.arrows
                and self.d == other.d and self.r == other.r
                and self.unit == other.unit and self.comp == other.comp)

    def composable(self, x, y):
        return self.d[x] == self.r[y]

    def compose(self, x, y):
        return self.comp[x][y]

    def d_fiber(self, o):
        """Arrows starting at object o."""
        if "dfib" not in self._cache:
            fib = [[] for _ in range(self.n_obj)]
            for a in range(self.n_arr):
                fib[self.d[a]].append(a)
            self._cache["dfib"] = tuple(tuple(f) for f in fib)
        return self._cache["dfib"][o]

    def is_unit(self, a):
        return self.unit[self.d[a]] == a


def make_category(objects, arrows, d, r, unit, comp):
    """Validate the axioms exhaustively and build the category.

    Checks, in order: table shapes; comp defined exactly on composable
    pairs; units anchored (DRU); domain/range of composites (DP, RP);
    associativity on composable triples (A); unit laws (UL).
    """
    n_obj, n_arr = len(objects), len(arrows)
    if len(set(objects)) != n_obj or len(set(arrows)) != n_arr:
        raise BadTableShape("object or arrow names are not unique")
    if len(d) != n_arr or len(r) != n_arr:
        raise BadTableShape("d/r tables must have one entry per arrow")
    if any(not 0 <= o < n_obj for o in d) or any(not 0 <= o < n_obj for o in r):
        raise BadTableShape("d/r entry out of range")
    if len(unit) != n_obj or any(not 0 <= a < n_arr for a in unit):
        raise BadTableShape("unit table must pick an arrow per object")
    if len(comp) != n_arr or any(len(row) != n_arr for row in comp):
        raise BadTableShape("comp table must be n_arr x n_arr")
    for x in range(n_arr):
        for y in range(n_arr):
            v = comp[x][y]
            if d[x] == r[y]:
                if not 0 <= v < n_arr:
                    raise CompDomainMismatch(
                        f"comp undefined on composable pair ({x},{y})")
            elif v != -1:
                raise CompDomainMismatch(
                    f"comp defined on non-composable pair ({x},{y})")
    for o in range(n_obj):
        u = unit[o]
        if d[u] != o or r[u] != o:
            raise AxiomFail("DRU", (o,))
    for x in range(n_arr):
        for y in range(n_arr):
            if d[x] != r[y]:
                continue
            xy = comp[x][y]
            if d[xy] != d[y]:
                raise AxiomFail("DP", (x, y))
            if r[xy] != r[x]:
                raise AxiomFail("RP", (x, y))
    for x in range(n_arr):
        for y in range(n_arr):
            if d[x] != r[y]:
                continue
            xy = comp[x][y]
            for z in range(n_arr):
                if d[y] == r[z] and comp[xy][z] != comp[x][comp[y][z]]:
                    raise AxiomFail("A", (x, y, z))
    for x in range(n_arr):
        if comp[unit[r[x]]][x] != x or comp[x][unit[d[x]]] != x:
            raise AxiomFail("UL", (x,))
    return FinCat(objects, arrows, d, r, unit, comp)


def is_groupoid(C):
    """Per-arrow inverse table, or (None, witness arrow) when one is missing."""
    inv = []
    for a in range(C.n_arr):
        found = None
        for b in range(C.n_arr):
            if (C.d[b] == C.r[a] and C.r[b] == C.d[a]
                    and C.comp[a][b] == C.unit[C.r[a]]
                    and C.comp[b][a] == C.unit[C.d[a]]):
                found = b
                break
        if found is None:
            return None, a
        inv.append(found)
    return tuple(inv), None


class Slice:
    """A set of arrows on which d is injective (a local section)."""

    __slots__ = ("parent", "arrows")

    def __init__(self, parent, arrows):
        arrows = frozenset(arrows)
        seen = {}
        for a in sorted(arrows):
            o = parent.d[a]
            if o in seen:
                raise MathFail("d is not injective on the subset",
                               witness=(seen[o], a))
            seen[o] = a
        self.parent = parent
        self.arrows = arrows

    def __eq__(self, other):
        return (isinstance(other, Slice) and self.parent is other.parent
                and self.arrows == other.arrows)

    def __hash__(self):
        return hash((id(self.parent), self.arrows))

    def __repr__(self):
        names = ",".join(self.parent.arrows[a] for a in sorted(self.arrows))
        return "{" + names + "}"

    def is_bislice(self):
        return len({self.parent.r[a] for a in self.arrows}) == len(self.arrows)


def slice_product(A, B):
    if A.parent is not B.parent:
        raise ParentMismatch("slices live in different categories")
    C = A.parent
    out = {C.comp[a][b] for a in A.arrows for b in B.arrows
           if C.d[a] == C.r[b]}
    return Slice(C, out)


def slice_support(A):
    C = A.parent
    return Slice(C, {C.unit[C.d[a]] for a in A.arrows})


def slice_cosupport(A):
    C = A.parent
    return Slice(C, {C.unit[C.r[a]] for a in A.arrows})


def predicted_slice_count(C):
    return prod(1 + len(C.d_fiber(o)) for o in range(C.n_obj))


def enumerate_slices(C, bislices_only=False):
    """All local (bi)sections as frozensets, ordered by size then contents."""
    fibers = [(None,) + C.d_fiber(o) for o in range(C.n_obj)]
    out = []
    for choice in iproduct(*fibers):
        picked = frozenset(a for a in choice if a is not None)
        if bislices_only and len({C.r[a] for a in picked}) != len(picked):
            continue
        out.append(picked)
    out.sort(key=lambda s: (len(s), sorted(s)))
    return out


def slice_semigroup(C, bislices_only=False, max_size=DEFAULT_MAX_SIZE):
    """The semigroup of all local (bi)sections with support and cosupport.

    Element 0 is the empty slice, the zero.  The result always classifies
    boolean_range and etale_range (boolean_birestriction when restricted to
    bisections); that is asserted here, not assumed.
    """
    predicted = predicted_slice_count(C)
    if predicted > max_size:
        raise TooLarge(predicted, max_size)
    cache_key = ("slice_sg", bislices_only)
    if cache_key in C._cache:
        return C._cache[cache_key]
    elems = enumerate_slices(C, bislices_only)
    index = {s: i for i, s in enumerate(elems)}
    names = ["{" + ",".join(C.arrows[a] for a in sorted(s)) + "}"
             for s in elems]
    comp, d, r, unit = C.comp, C.d, C.r, C.unit

    def setprod(A, B):
        return frozenset(comp[a][b] for a in A for b in B if d[a] == r[b])

    mult = [[index[setprod(A, B)] for B in elems] for A in elems]
    star = [index[frozenset(unit[d[a]] for a in A)] for A in elems]
    plus = [index[frozenset(unit[r[a]] for a in A)] for A in elems]
    S = make_algebra(names, mult, star, plus, zero=index[frozenset()])
    S._cache["slice_sets"] = tuple(elems)
    S._cache["slice_parent"] = C
    cls = classify(S)
    if bislices_only:
        assert cls.flags["boolean_birestriction"], cls.witnesses
    else:
        assert cls.flags["boolean_range"], cls.witnesses
        assert cls.flags["etale_range"], cls.witnesses
    C._cache[cache_key] = S
    return S


def semigroup_slices(C, S):
    """The arrow sets behind the elements of a slice semigroup of C."""
    if S._cache.get("slice_parent") is C:
        return S._cache["slice_sets"]
    pos = {nm: a for a, nm in enumerate(C.arrows)}
    sets = []
    for name in S.names:
        body = name[1:-1]
        sets.append(frozenset(pos[nm] for nm in body.split(",")) if body
                    else frozenset())
    return tuple(sets)


def slice_of_index(C, S, i):
    """Recover the arrow set behind element i of a slice semigroup of C."""
    return Slice(C, semigroup_slices(C, S)[i])


class Cofunctor:
    """An action (mu, f) of C on the objects of D plus its arrow lift rho1.

    mu[s][x] and rho1[s][x] are -1 exactly when d(s) != f(x); every
    structural law is verified at construction.
    """

    def __init__(self, source, target, anchor, mu, rho1):
        C, D = source, target
        self.source, self.target = C, D
        self.anchor = tuple(anchor)
        self.mu = tuple(tuple(row) for row in mu)
        self.rho1 = tuple(tuple(row) for row in rho1)
        if len(self.anchor) != D.n_obj or any(
                not 0 <= o < C.n_obj for o in self.anchor):
            raise BadTableShape("anchor must map target objects to source objects")
        if len(self.mu) != C.n_arr or any(len(row) != D.n_obj for row in self.mu):
            raise BadTableShape("mu must be n_arr(source) x n_obj(target)")
        if len(self.rho1) != C.n_arr or any(
                len(row) != D.n_obj for row in self.rho1):
            raise BadTableShape("rho1 must be n_arr(source) x n_obj(target)")
        self._validate()

    def defined(self, s, x):
        return self.source.d[s] == self.anchor[x]

    def _validate(self):
        C, D, f = self.source, self.target, self.anchor
        mu, rho1 = self.mu, self.rho1
        for s in range(C.n_arr):
            for x in range(D.n_obj):
                if C.d[s] != f[x]:
                    if mu[s][x] != -1 or rho1[s][x] != -1:
                        raise CompDomainMismatch(
                            f"action defined off its domain at ({s},{x})")
                    continue
                sx, rx = mu[s][x], rho1[s][x]
                if not 0 <= sx < D.n_obj or not 0 <= rx < D.n_arr:
                    raise CompDomainMismatch(
                        f"action undefined on its domain at ({s},{x})")
                if f[sx] != C.r[s]:
                    raise AxiomFail("A1", (s, x))
                if D.d[rx] != x:
                    raise AxiomFail("rho-d", (s, x))
                if D.r[rx] != sx:
                    raise AxiomFail("rho-r", (s, x))
        for x in range(D.n_obj):
            u = C.unit[f[x]]
            if mu[u][x] != x:
                raise AxiomFail("A3", (x,))
            if rho1[u][x] != D.unit[x]:
                raise AxiomFail("rho-unit", (x,))
        for t in range(C.n_arr):
            for x in range(D.n_obj):
                if C.d[t] != f[x]:
                    continue
                tx = mu[t][x]
                for s in range(C.n_arr):
                    if C.d[s] != C.r[t]:
                        continue
                    st = C.comp[s][t]
                    if mu[s][tx] != mu[st][x]:
                        raise AxiomFail("A2", (s, t, x))
                    if D.comp[rho1[s][tx]][rho1[t][x]] != rho1[st][x]:
                        raise AxiomFail("rho-comp", (s, t, x))

    def pairs(self):
        for s in range(self.source.n_arr):
            for x in range(self.target.n_obj):
                if self.defined(s, x):
                    yield s, x

    def pushforward(self, arrow_set):
        """F_*(A): all lifts of arrows of A at every anchored object."""
        rho1, f = self.rho1, self.anchor
        d = self.source.d
        return frozenset(rho1[s][x] for s in arrow_set
                         for x in range(self.target.n_obj) if d[s] == f[x])

    def equal_tables(self, other):
        return (self.source.same_tables(other.source)
                and self.target.same_tables(other.target)
                and self.anchor == other.anchor and self.mu == other.mu
                and self.rho1 == other.rho1)


def identity_cofunctor(C):
    anchor = list(range(C.n_obj))
    mu = [[C.r[s] if C.d[s] == x else -1 for x in range(C.n_obj)]
          for s in range(C.n_arr)]
    rho1 = [[s if C.d[s] == x else -1 for x in range(C.n_obj)]
            for s in range(C.n_arr)]
    return Cofunctor(C, C, anchor, mu, rho1)


@dataclass
class CofunctorFlags:
    flags: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    def __getattr__(self, item):
        flags = object.__getattribute__(self, "flags")
        if item in flags:
            return flags[item]
        raise AttributeError(item)

    def render(self):
        from .report import format_witness
        out = []
        for name in ("injective_on_arrows", "surjective_on_arrows",
                     "bijective_on_arrows", "action_injective"):
            line = f"{name}={str(self.flags[name]).lower()}"
            w = self.witnesses.get(name)
            if w is not None and not self.flags[name]:
                line += f" witness={format_witness(w)}"
            out.append(line)
        return "\n".join(out)


def check_cofunctor(F):
    """Injectivity/surjectivity flags of the arrow lift and the action."""
    C, D = F.source, F.target
    flags, wit = {}, {}

    inj = True
    for x in range(D.n_obj):
        seen = {}
        for s in range(C.n_arr):
            if not F.defined(s, x):
                continue
            t = F.rho1[s][x]
            if t in seen:
                inj = False
                wit["injective_on_arrows"] = (seen[t], s, x)
                break
            seen[t] = s
        if not inj:
            break
    flags["injective_on_arrows"] = inj

    surj = True
    lifted = {(x, F.rho1[s][x]) for s, x in F.pairs()}
    for t in range(D.n_arr):
        if (D.d[t], t) not in lifted:
            surj = False
            wit["surjective_on_arrows"] = (t,)
            break
    flags["surjective_on_arrows"] = surj

    flags["bijective_on_arrows"] = inj and surj
    if not (inj and surj):
        wit["bijective_on_arrows"] = wit.get("injective_on_arrows",
                                             wit.get("surjective_on_arrows"))

    act = True
    for s in range(C.n_arr):
        seen = {}
        for x in range(D.n_obj):
            if not F.defined(s, x):
                continue
            sx = F.mu[s][x]
            if sx in seen:
                act = False
                wit["action_injective"] = (s, seen[sx], x)
                break
            seen[sx] = x
        if not act:
            break
    flags["action_injective"] = act
    return CofunctorFlags(flags, wit)


def compose_cofunctors(G, F):
    """The composite of F: C ~> D followed by G: D ~> E, acting through D."""
    if F.target is not G.source and not F.target.same_tables(G.source):
        raise CompositionMismatch("inner categories do not match")
    C, E = F.source, G.target
    anchor = [F.anchor[G.anchor[x]] for x in range(E.n_obj)]
    mu = [[-1] * E.n_obj for _ in range(C.n_arr)]
    rho1 = [[-1] * E.n_obj for _ in range(C.n_arr)]
    for s in range(C.n_arr):
        for x in range(E.n_obj):
            if C.d[s] != anchor[x]:
                continue
            mid = F.rho1[s][G.anchor[x]]
            mu[s][x] = G.mu[mid][x]
            rho1[s][x] = G.rho1[mid][x]
    return Cofunctor(C, E, anchor, mu, rho1)


def cofunctor_to_morphism(F, max_size=DEFAULT_MAX_SIZE):
    """The pushforward A -> F_*(A) between the slice semigroups.

    Asserts the structure theorems relating cofunctor flags to morphism
    types: injective on arrows gives weak meet preservation, surjective
    gives properness, injective action preserves bideterministic elements.
    """
    S = slice_semigroup(F.source, max_size=max_size)
    T = slice_semigroup(F.target, max_size=max_size)
    sets_S = semigroup_slices(F.source, S)
    index_T = {fs: i for i, fs in enumerate(semigroup_slices(F.target, T))}
    m = []
    for i in range(S.n):
        image = F.pushforward(sets_S[i])
        if image not in index_T:
            raise MathFail("pushforward of a slice is not a slice",
                           witness=(i,))
        m.append(index_T[image])
    f = SemigroupMorphism(S, T, tuple(m))
    flags = check_cofunctor(F)
    assert check_morphism(f, 1).ok
    if flags.flags["injective_on_arrows"]:
        assert check_morphism(f, 2).ok
    if flags.flags["surjective_on_arrows"]:
        assert check_morphism(f, 3).ok
    if flags.flags["action_injective"]:
        _, _, bd_S = deterministic_sets(S)
        bd_T = set(deterministic_sets(T)[2])
        assert all(m[i] in bd_T for i in bd_S)
    return f


class CoveringFunctor:
    """A functor whose arrow map is a bijection on every d-fiber."""

    def __init__(self, source, target, f0, f1):
        D, C = source, target
        self.source, self.target = D, C
        self.f0 = tuple(f0)
        self.f1 = tuple(f1)
        if len(self.f0) != D.n_obj or any(not 0 <= o < C.n_obj for o in self.f0):
            raise BadTableShape("f0 must map source objects to target objects")
        if len(self.f1) != D.n_arr or any(not 0 <= a < C.n_arr for a in self.f1):
            raise BadTableShape("f1 must map source arrows to target arrows")
        self._validate()

    def _validate(self):
        D, C, f0, f1 = self.source, self.target, self.f0, self.f1
        for t in range(D.n_arr):
            if C.d[f1[t]] != f0[D.d[t]] or C.r[f1[t]] != f0[D.r[t]]:
                raise AxiomFail("functor-dr", (t,))
        for x in range(D.n_obj):
            if f1[D.unit[x]] != C.unit[f0[x]]:
                raise AxiomFail("functor-unit", (x,))
        for t in range(D.n_arr):
            for u in range(D.n_arr):
                if D.d[t] == D.r[u] and f1[D.comp[t][u]] != C.comp[f1[t]][f1[u]]:
                    raise AxiomFail("functor-comp", (t, u))
        for x in range(D.n_obj):
            fiber = D.d_fiber(x)
            images = [f1[t] for t in fiber]
            if len(set(images)) != len(images):
                raise NotStarBijective("arrow map repeats on a d-fiber",
                                       witness=("injective", x))
            target_fiber = set(C.d_fiber(f0[x]))
            if set(images) != target_fiber:
                raise NotStarBijective("arrow map misses part of a d-fiber",
                                       witness=("surjective", x))

    def translate(self, s, x):
        """The unique source arrow over s starting at x."""
        for t in self.source.d_fiber(x):
            if self.f1[t] == s:
                return t
        raise NotStarBijective("no arrow over the requested one at this object",
                               witness=("missing", s, x))

    def equal_tables(self, other):
        return (self.source.same_tables(other.source)
                and self.target.same_tables(other.target)
                and self.f0 == other.f0 and self.f1 == other.f1)


def cofunctor_to_covering(F):
    """Repackage a bijective-on-arrows cofunctor as a functor D -> C."""
    flags = check_cofunctor(F)
    if not flags.flags["bijective_on_arrows"]:
        raise NotBijectiveOnArrows(
            "cofunctor is not bijective on arrows",
            witness=flags.witnesses.get("bijective_on_arrows"))
    D = F.target
    f1 = [-1] * D.n_arr
    for s, x in F.pairs():
        f1[F.rho1[s][x]] = s
    return CoveringFunctor(D, F.source, F.anchor, f1)


def covering_to_cofunctor(g):
    """Rebuild the cofunctor C ~> D whose arrow lift is g's fiber inverse."""
    D, C = g.source, g.target
    mu = [[-1] * D.n_obj for _ in range(C.n_arr)]
    rho1 = [[-1] * D.n_obj for _ in range(C.n_arr)]
    for x in range(D.n_obj):
        for s in C.d_fiber(g.f0[x]):
            t = g.translate(s, x)
            mu[s][x] = D.r[t]
            rho1[s][x] = t
    return Cofunctor(C, D, g.f0, mu, rho1)
