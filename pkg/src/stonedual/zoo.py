"""Instance generators and the verification corpus.

Partial-map semigroups are generated with a fixed element order: domains by
bitmask ascending, images lexicographically within a domain.  Element names
are value strings ("12", "2-", "--"), one character per point.  PT_2 is
therefore --, 1-, 2-, -1, -2, 11, 12, 21, 22 in indices 0..8.

Categories beyond the named ones come from a bounded exhaustive enumeration
(up to isomorphism) used as the adjunction test corpus.
"""

from __future__ import annotations

from itertools import product as iproduct

from .algebra import BiUnaryAlgebra, make_algebra
from .category import FinCat, make_category
from .duality import category_signature, iso_categories
from .errors import InputError, TooLarge

PT_ORDER_BOUND = 4
PAIR_GROUPOID_BOUND = 6


def _partial_maps(n, keep):
    """Partial self-maps of {1..n} passing keep(map), in canonical order."""
    maps = []
    for dom_mask in range(1 << n):
        dom = [x for x in range(1, n + 1) if dom_mask >> (x - 1) & 1]
        for images in iproduct(range(1, n + 1), repeat=len(dom)):
            m = dict(zip(dom, images))
            if keep(m):
                maps.append(m)
    return maps


def _map_name(m, n):
    return "".join(str(m[x]) if x in m else "-" for x in range(1, n + 1))


def _map_algebra(n, keep):
    if not 1 <= n:
        raise InputError("point count must be at least 1")
    if n > PT_ORDER_BOUND:
        raise TooLarge((n + 1) ** n, (PT_ORDER_BOUND + 1) ** PT_ORDER_BOUND)
    maps = _partial_maps(n, keep)
    key = {tuple(sorted(m.items())): i for i, m in enumerate(maps)}

    def idx(m):
        return key[tuple(sorted(m.items()))]

    def compose(s, t):
        # right to left: (s*t)(x) = s(t(x))
        return {x: s[t[x]] for x in t if t[x] in s}

    mult = [[idx(compose(s, t)) for t in maps] for s in maps]
    star = [idx({x: x for x in m}) for m in maps]
    plus = [idx({y: y for y in m.values()}) for m in maps]
    names = [_map_name(m, n) for m in maps]
    return make_algebra(names, mult, star, plus, zero=idx({}))


def gen_pt(n):
    """All partial self-maps of an n-point set."""
    return _map_algebra(n, lambda m: True)


def gen_i(n):
    """All injective partial self-maps of an n-point set."""
    return _map_algebra(n, lambda m: len(set(m.values())) == len(m))


def gen_triangular(n):
    """All order-increasing partial self-maps: s(x) >= x on the domain."""
    return _map_algebra(n, lambda m: all(v >= x for x, v in m.items()))


def gen_pair_groupoid(n):
    """K_n: objects 1..n, one arrow between every ordered pair of objects."""
    if not 1 <= n:
        raise InputError("object count must be at least 1")
    if n > PAIR_GROUPOID_BOUND:
        raise TooLarge(n * n, PAIR_GROUPOID_BOUND * PAIR_GROUPOID_BOUND)
    objects = [str(o) for o in range(1, n + 1)]
    pairs = [(x, y) for x in range(n) for y in range(n)]  # arrow x -> y
    idx = {p: i for i, p in enumerate(pairs)}
    arrows = [f"a{y + 1}{x + 1}" for x, y in pairs]
    d = [x for x, _ in pairs]
    r = [y for _, y in pairs]
    unit = [idx[(o, o)] for o in range(n)]
    comp = [[idx[(x2, y1)] if x1 == y2 else -1
             for (x2, y2) in pairs] for (x1, y1) in pairs]
    return make_category(objects, arrows, d, r, unit, comp)


def gen_free_arrow():
    """The free category on a single arrow between two objects."""
    objects = ["1", "2"]
    arrows = ["id1", "id2", "a21"]
    d = [0, 1, 0]
    r = [0, 1, 1]
    unit = [0, 1]
    comp = [[0, -1, -1], [-1, 1, 2], [2, -1, -1]]
    return make_category(objects, arrows, d, r, unit, comp)


ZOO_SEMIGROUP_NAMES = ("pt_1", "pt_2", "i_2", "triangular_2", "triangular_3")
ZOO_CATEGORY_NAMES = ("k_1", "k_2", "k_3", "free_arrow")


def zoo_semigroups():
    return {
        "pt_1": gen_pt(1),
        "pt_2": gen_pt(2),
        "i_2": gen_i(2),
        "triangular_2": gen_triangular(2),
        "triangular_3": gen_triangular(3),
    }


def zoo_categories():
    return {
        "k_1": gen_pair_groupoid(1),
        "k_2": gen_pair_groupoid(2),
        "k_3": gen_pair_groupoid(3),
        "free_arrow": gen_free_arrow(),
    }


def _complete_comp(n_arr, d, r, unit):
    """Yield all associative completions of the composition table.

    Unit rows and columns are forced; each remaining cell assignment
    triggers exactly the associativity comparisons it completes, so every
    composable triple is checked at the moment its last table entry lands.
    """
    comp = [[-1] * n_arr for _ in range(n_arr)]
    cells = []
    occ = [set() for _ in range(n_arr)]  # occ[z] = filled cells with value z
    for x in range(n_arr):
        for y in range(n_arr):
            if d[x] != r[y]:
                continue
            if y == unit[d[x]]:
                comp[x][y] = x
                occ[x].add((x, y))
            elif x == unit[r[y]]:
                comp[x][y] = y
                occ[y].add((x, y))
            else:
                cells.append((x, y))

    def consistent(x, y, z):
        # triples with (x, y) as the left inner pair: (x*y)*c vs x*(y*c)
        for c in range(n_arr):
            if d[y] != r[c]:
                continue
            bc = comp[y][c]
            if bc < 0:
                continue
            left, right = comp[z][c], comp[x][bc]
            if left >= 0 and right >= 0 and left != right:
                return False
        # triples with (x, y) as the right inner pair: (a*x)*y vs a*(x*y)
        for a in range(n_arr):
            if d[a] != r[x]:
                continue
            ab = comp[a][x]
            if ab < 0:
                continue
            left, right = comp[ab][y], comp[a][z]
            if left >= 0 and right >= 0 and left != right:
                return False
        # cell (x, y) as a left-outer value: x = a*b, y = c
        for a, b in occ[x]:
            if d[b] != r[y]:
                continue
            bc = comp[b][y]
            if bc >= 0:
                right = comp[a][bc]
                if right >= 0 and right != z:
                    return False
        # cell (x, y) as a right-outer value: x = a, y = b*c
        for b, c in occ[y]:
            if d[x] != r[b]:
                continue
            ab = comp[x][b]
            if ab >= 0:
                left = comp[ab][c]
                if left >= 0 and left != z:
                    return False
        return True

    def fill(k):
        if k == len(cells):
            yield [row[:] for row in comp]
            return
        x, y = cells[k]
        for z in range(n_arr):
            if d[z] != d[y] or r[z] != r[x]:
                continue
            comp[x][y] = z
            occ[z].add((x, y))
            if consistent(x, y, z):
                yield from fill(k + 1)
            occ[z].discard((x, y))
            comp[x][y] = -1

    yield from fill(0)


def enumerate_categories(max_objects=3, max_arrows=5):
    """All categories with at most the given objects and total arrows,
    one representative per isomorphism class."""
    found = []
    buckets = {}
    for n_obj in range(1, max_objects + 1):
        if n_obj > max_arrows:
            break
        unit = list(range(n_obj))
        for extra in range(max_arrows - n_obj + 1):
            n_arr = n_obj + extra
            # non-unit arrows get nondecreasing (d, r) pairs; isomorphic
            # relabelings are removed afterwards
            pair_choices = [(x, y) for x in range(n_obj) for y in range(n_obj)]
            for drs in _nondecreasing_tuples(pair_choices, extra):
                d = unit[:] + [x for x, _ in drs]
                r = unit[:] + [y for _, y in drs]
                for comp in _complete_comp(n_arr, d, r, unit):
                    objects = [f"o{i + 1}" for i in range(n_obj)]
                    arrows = [f"u{i + 1}" for i in range(n_obj)] + \
                             [f"g{i + 1}" for i in range(extra)]
                    C = make_category(objects, arrows, d, r, unit, comp)
                    key = (n_obj, n_arr,
                           tuple(sorted(category_signature(C))))
                    bucket = buckets.setdefault(key, [])
                    if not any(iso_categories(C, D) for D in bucket):
                        bucket.append(C)
                        found.append(C)
    return found


def _nondecreasing_tuples(choices, k):
    if k == 0:
        yield ()
        return
    for i, c in enumerate(choices):
        for rest in _nondecreasing_tuples(choices[i:], k - 1):
            yield (c,) + rest


def corpus_semigroups():
    """Semigroup members of the verification corpus."""
    return list(zoo_semigroups().items())


def corpus_categories(max_objects=3, max_arrows=5):
    """Category members: the named zoo plus the bounded enumeration."""
    members = list(zoo_categories().items())
    for i, C in enumerate(enumerate_categories(max_objects, max_arrows)):
        members.append((f"enum_{i:03d}", C))
    return members


def search_no_cosupport(max_order=8, budget=5.0, base=3):
    """Exploratory: hunt for a restriction semigroup with local units that
    admits no compatible cosupport, among small subalgebras of PT_base.

    Closes random-free, systematically generated subsets under product and
    star; stops at the time budget.  Returns (found, checked, witness).
    """
    import time
    from itertools import combinations

    from .algebra import classify, infer_cosupport
    from .errors import MathFail, NoLeftUnit

    start = time.monotonic()
    PT = gen_pt(base)
    n = PT.n
    checked = 0
    seen = set()

    def closure(gens):
        elems = set(gens)
        frontier = list(elems)
        while frontier:
            x = frontier.pop()
            sx = PT.star[x]
            if sx not in elems:
                elems.add(sx)
                frontier.append(sx)
            for y in list(elems):
                for p in (PT.mult[x][y], PT.mult[y][x]):
                    if p not in elems:
                        elems.add(p)
                        frontier.append(p)
                        if len(elems) > max_order:
                            return None
        # star insertions above bypass the in-loop cap
        return frozenset(elems) if len(elems) <= max_order else None

    def as_algebra(elems):
        keep = sorted(elems)
        pos = {e: i for i, e in enumerate(keep)}
        return make_algebra([PT.names[e] for e in keep],
                            [[pos[PT.mult[a][b]] for b in keep] for a in keep],
                            [pos[PT.star[a]] for a in keep])

    for size in (1, 2, 3):
        for gens in combinations(range(n), size):
            if time.monotonic() - start > budget:
                return False, checked, None
            elems = closure(gens)
            if elems is None or elems in seen:
                continue
            seen.add(elems)
            S = as_algebra(elems)
            cls = classify(S)
            if not (cls.flags["restriction"] and cls.flags["has_local_units"]):
                continue
            checked += 1
            try:
                res = infer_cosupport(S)
            except (NoLeftUnit, MathFail):
                return True, checked, tuple(sorted(elems))
            if not res:
                return True, checked, tuple(sorted(elems))
    return False, checked, None
