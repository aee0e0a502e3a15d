"""Finite semigroups with a support operation (and optionally a cosupport).

Tables are lists of element indices, mult[i][j] being the product i*j in
written order.  Everything downstream (orders, joins, classification flags,
morphism typing) is derived from the three tables by exhaustive evaluation;
failed universal statements report the lexicographically first counterexample.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from . import gba as gba_mod
from .errors import (BadTableShape, InputError, MathFail, NoLeftUnit,
                     NoPlusTable, NotAssociative, PlusStarMismatch)

_NUMPY_THRESHOLD = 48


class BiUnaryAlgebra:
    """Immutable (2,1)- or (2,1,1)-algebra given by explicit tables."""

    def __init__(self, names, mult, star, plus=None, zero=None):
        self.names = tuple(names)
        self.n = len(self.names)
        self.mult = tuple(tuple(row) for row in mult)
        self.star = tuple(star)
        self.plus = tuple(plus) if plus is not None else None
        self.zero = zero
        self._cache = {}

    def __len__(self):
        return self.n

    def __repr__(self):
        kind = "(2,1,1)" if self.plus is not None else "(2,1)"
        return f"BiUnaryAlgebra({self.n} elements, {kind})"

    def name(self, i):
        return self.names[i]

    def projections(self):
        return self._cache.setdefault("proj", tuple(sorted(set(self.star))))

    def is_projection(self, i):
        return self.star[i] == i

    def detected_zero(self):
        """The two-sided zero element, if the multiplication has one."""
        if "zero" not in self._cache:
            found = None
            for z in range(self.n):
                row = self.mult[z]
                if all(row[s] == z and self.mult[s][z] == z for s in range(self.n)):
                    found = z
                    break
            self._cache["zero"] = found
        return self._cache["zero"]

    def leq(self, a, b):
        # natural partial order: a <= b iff a = b * a^*
        return self.mult[b][self.star[a]] == a

    def leq_plus(self, a, b):
        if self.plus is None:
            raise NoPlusTable("the dual order needs a plus table")
        return self.mult[self.plus[a]][b] == a

    def up_masks(self):
        """up[i] = bitmask of {j : i <= j}."""
        if "up" not in self._cache:
            n, mult, star = self.n, self.mult, self.star
            up = [0] * n
            down = [0] * n
            for i in range(n):
                si = star[i]
                for j in range(n):
                    if mult[j][si] == i:
                        up[i] |= 1 << j
                        down[j] |= 1 << i
            self._cache["up"] = tuple(up)
            self._cache["down"] = tuple(down)
        return self._cache["up"]

    def down_masks(self):
        self.up_masks()
        return self._cache["down"]


def _iter_bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _check_table(names, table, n, what):
    if len(table) != n:
        raise BadTableShape(f"{what} table has {len(table)} rows, expected {n}")
    for row in table:
        if isinstance(row, int):
            if not 0 <= row < n:
                raise BadTableShape(f"{what} entry {row} out of range")
        else:
            if len(row) != n:
                raise BadTableShape(f"{what} row has {len(row)} entries, expected {n}")
            for v in row:
                if not 0 <= v < n:
                    raise BadTableShape(f"{what} entry {v} out of range")


def _assoc_pure(mult):
    n = len(mult)
    for i in range(n):
        mi = mult[i]
        for j in range(n):
            row_ij = mult[mi[j]]
            mj = mult[j]
            for k in range(n):
                if row_ij[k] != mi[mj[k]]:
                    raise NotAssociative(i, j, k)


def _assoc_numpy(mult):
    import numpy as np
    a = np.asarray(mult, dtype=np.int64)
    n = len(mult)
    for i in range(n):
        left = a[a[i]]          # (i*j)*k
        right = a[i][a]         # i*(j*k)
        if not np.array_equal(left, right):
            j, k = map(int, np.argwhere(left != right)[0])
            raise NotAssociative(i, j, k)


def make_algebra(names, mult, star, plus=None, zero=None):
    """Validate tables (shape, associativity, zero laws) and build the algebra."""
    n = len(names)
    if len(set(names)) != n:
        raise BadTableShape("element names are not unique")
    _check_table(names, mult, n, "mult")
    _check_table(names, star, n, "star")
    if plus is not None:
        _check_table(names, plus, n, "plus")
    if n > _NUMPY_THRESHOLD:
        _assoc_numpy(mult)
    else:
        _assoc_pure(mult)
    if zero is not None:
        if not 0 <= zero < n:
            raise BadTableShape(f"zero index {zero} out of range")
        for s in range(n):
            if mult[zero][s] != zero or mult[s][zero] != zero:
                raise MathFail(f"declared zero is not a zero at {names[s]}",
                               witness=(zero, s))
        if star[zero] != zero:
            raise MathFail("declared zero is not a projection", witness=(zero,))
    return BiUnaryAlgebra(names, mult, star, plus, zero)


def projections(S):
    """P(S), the image of the star table; cross-checked against plus if present."""
    p = S.projections()
    if S.plus is not None and tuple(sorted(set(S.plus))) != p:
        raise PlusStarMismatch("images of star and plus tables differ")
    return p


def nat_leq(S, a, b, side="star"):
    if side == "star":
        return S.leq(a, b)
    if side == "plus":
        return S.leq_plus(a, b)
    raise InputError(f"unknown order side {side!r}")


def compatible(S, s, t, mode="right"):
    mult, star = S.mult, S.star
    if mode == "right":
        return mult[s][star[t]] == mult[t][star[s]]
    if mode in ("left", "bi"):
        if S.plus is None:
            raise NoPlusTable(f"mode {mode!r} needs a plus table")
        plus = S.plus
        left = mult[plus[t]][s] == mult[plus[s]][t]
        if mode == "left":
            return left
        return left and mult[s][star[t]] == mult[t][star[s]]
    raise InputError(f"unknown compatibility mode {mode!r}")


def join(S, s, t):
    """Least upper bound of s and t under <=, or None."""
    cache = S._cache.setdefault("join", {})
    key = (s, t) if s <= t else (t, s)
    if key in cache:
        return cache[key]
    up = S.up_masks()
    common = up[s] & up[t]
    result = None
    for m in _iter_bits(common):
        if common & ~up[m] == 0:
            result = m
            break
    cache[key] = result
    return result


def meet(S, s, t):
    """Greatest lower bound of s and t under <=, or None."""
    down = S.down_masks()
    common = down[s] & down[t]
    for m in _iter_bits(common):
        if common & ~down[m] == 0:
            return m
    return None


def join_all(S, elems):
    """Fold of binary joins; None as soon as one join is missing."""
    acc = None
    for e in elems:
        acc = e if acc is None else join(S, acc, e)
        if acc is None:
            return None
    return acc


def has_local_units(S):
    mult = S.mult
    proj = S.projections()
    for s in range(S.n):
        if not any(mult[e][s] == s for e in proj):
            return False, (s,)
    return True, None


def detected_zero_projection(S):
    z = S.detected_zero()
    if z is not None and S.star[z] == z:
        return z
    return None


def projection_gba(S):
    """(P(S), <=) as an explicit GBA over the minimal non-zero projections.

    Returns (gba, to_mask, from_mask).  Raises MathFail when the poset is not
    a GBA: no zero projection, atom map not injective, or image not closed
    under union / difference.  Diagnoses, never repairs.
    """
    if "pgba" in S._cache:
        return S._cache["pgba"]
    proj = S.projections()
    z = detected_zero_projection(S)
    if z is None:
        raise MathFail("P(S) has no zero projection",
                       witness=("MissingZeroProjection",))
    mult = S.mult
    nonzero = [e for e in proj if e != z]
    # e <= f on projections is e = f*e
    below = {e: [f for f in nonzero if mult[e][f] == f] for e in nonzero}
    atoms = [e for e in nonzero if below[e] == [e]]
    to_mask = {}
    for e in proj:
        mask = 0
        for i, a in enumerate(atoms):
            if mult[e][a] == a:
                mask |= 1 << i
        to_mask[e] = mask
    from_mask = {}
    for e in proj:
        m = to_mask[e]
        if m in from_mask:
            raise MathFail(
                f"projections {S.name(from_mask[m])} and {S.name(e)} sit over "
                "the same atoms", witness=("RepNotInjective", from_mask[m], e))
        from_mask[m] = e
    family = set(from_mask)
    for a, b in combinations(sorted(family), 2):
        for op, res in (("or", a | b), ("diff", a & ~b), ("diff", b & ~a)):
            if res not in family:
                raise MathFail(
                    f"projection lattice not closed under {op}",
                    witness=("NotClosed", op, from_mask[a], from_mask[b]))
    universe = [S.name(a) for a in atoms]
    result = gba_mod.make_gba(universe, sorted(family)), to_mask, from_mask
    S._cache["pgba"] = result
    return result


def deterministic_sets(S):
    """(D, CD, BD): deterministic, codeterministic, bideterministic elements."""
    if S.plus is None:
        raise NoPlusTable("codeterminism needs a plus table")
    mult, star, plus = S.mult, S.star, S.plus
    proj = S.projections()
    det = tuple(a for a in range(S.n)
                if all(mult[e][a] == mult[a][star[mult[e][a]]] for e in proj))
    codet = tuple(a for a in range(S.n)
                  if all(mult[a][e] == mult[plus[mult[a][e]]][a] for e in proj))
    bidet = tuple(a for a in det if a in set(codet))
    return det, codet, bidet


def bd_subalgebra(S):
    """The induced algebra on the bideterministic elements, with its embedding."""
    _, _, bidet = deterministic_sets(S)
    keep = list(bidet)
    pos = {e: i for i, e in enumerate(keep)}
    for a in keep:
        for b in keep:
            if S.mult[a][b] not in pos:
                raise MathFail("bideterministic set is not closed under product",
                               witness=(a, b))
        if S.star[a] not in pos or S.plus[a] not in pos:
            raise MathFail("bideterministic set is not closed under star/plus",
                           witness=(a,))
    sub = make_algebra(
        [S.names[e] for e in keep],
        [[pos[S.mult[a][b]] for b in keep] for a in keep],
        [pos[S.star[a]] for a in keep],
        [pos[S.plus[a]] for a in keep])
    if set(sub.projections()) != {pos[e] for e in S.projections()}:
        raise MathFail("projections changed when passing to the subalgebra")
    return sub, tuple(keep)


def partial_isomorphisms(S):
    """All elements with a partial inverse, as a dict s -> partner.

    Verifies the expected structure: partners are unique, the set is closed
    under product and star, and its idempotents commute (an inverse
    semigroup sitting inside S).
    """
    mult, star = S.mult, S.star
    partner = {}
    for s in range(S.n):
        mates = [t for t in range(S.n)
                 if mult[s][t] == star[t] and mult[t][s] == star[s]]
        if len(mates) > 1:
            raise MathFail(f"element {S.name(s)} has two partial inverses",
                           witness=(s, mates[0], mates[1]))
        if mates:
            partner[s] = mates[0]
    members = set(partner)
    for s in members:
        if star[s] not in members:
            raise MathFail("partial isomorphisms not closed under star",
                           witness=(s,))
        for t in members:
            if mult[s][t] not in members:
                raise MathFail("partial isomorphisms not closed under product",
                               witness=(s, t))
    for s, t in partner.items():
        if mult[mult[s][t]][s] != s or mult[mult[t][s]][t] != t:
            raise MathFail("partial inverse fails regularity", witness=(s, t))
    idem = [s for s in members if mult[s][s] == s]
    for e in idem:
        for f in idem:
            if mult[e][f] != mult[f][e]:
                raise MathFail("idempotent partial isomorphisms do not commute",
                               witness=(e, f))
    return partner


@dataclass
class CosupportResult:
    table: tuple | None
    axiom: str | None = None
    witness: tuple | None = None

    def __bool__(self):
        return self.table is not None


def infer_cosupport(S):
    """Forced candidate for the plus table, verified against the dual axioms.

    s^+ must be the least projection f with f*s = s, so compute that product
    and check the candidate satisfies the coEhresmann and linking axioms.
    Raises NoLeftUnit when some element has no left local unit at all.
    """
    mult, star = S.mult, S.star
    proj = S.projections()
    cand = []
    for s in range(S.n):
        units = [f for f in proj if mult[f][s] == s]
        if not units:
            raise NoLeftUnit(s)
        m = units[0]
        for f in units[1:]:
            m = mult[m][f]
        if mult[m][s] != s:
            raise MathFail("left local units are not meet-closed", witness=(s,))
        cand.append(m)
    cand = tuple(cand)
    probe = BiUnaryAlgebra(S.names, S.mult, S.star, cand, S.zero)
    wit = _plus_axiom_witness(probe)
    if wit is not None:
        return CosupportResult(None, wit[0], wit[1])
    return CosupportResult(cand)


def _star_axiom_witness(S):
    """First failure among the support axioms, or None."""
    mult, star = S.mult, S.star
    n = S.n
    for x in range(n):
        if mult[x][star[x]] != x:
            return ("x*support(x)=x", (x,))
    for x in range(n):
        sx = star[x]
        for y in range(n):
            sy = star[y]
            p = mult[sx][sy]
            if p != mult[sy][sx] or p != star[p]:
                return ("supports-commute-and-are-projections", (x, y))
            if star[mult[x][y]] != star[mult[sx][y]]:
                return ("support(xy)=support(support(x)y)", (x, y))
    return None


def _plus_axiom_witness(S):
    """First failure among the cosupport and linking axioms, or None."""
    mult, star, plus = S.mult, S.star, S.plus
    n = S.n
    for x in range(n):
        if mult[plus[x]][x] != x:
            return ("cosupport(x)*x=x", (x,))
        if star[plus[x]] != plus[x]:
            return ("support(cosupport(x))=cosupport(x)", (x,))
        if plus[star[x]] != star[x]:
            return ("cosupport(support(x))=support(x)", (x,))
    for x in range(n):
        px = plus[x]
        for y in range(n):
            py = plus[y]
            p = mult[px][py]
            if p != mult[py][px] or p != plus[p]:
                return ("cosupports-commute-and-are-projections", (x, y))
            if plus[mult[x][y]] != plus[mult[x][py]]:
                return ("cosupport(xy)=cosupport(x cosupport(y))", (x, y))
    return None


def _restriction_witness(S):
    mult, star = S.mult, S.star
    n = S.n
    for x in range(n):
        sx = star[x]
        for y in range(n):
            if mult[sx][y] != mult[y][star[mult[x][y]]]:
                return ("support(x)y=y support(xy)", (x, y))
    return None


def _corestriction_witness(S):
    mult, plus = S.mult, S.plus
    n = S.n
    for x in range(n):
        for y in range(n):
            if mult[x][plus[y]] != mult[plus[mult[x][y]]][x]:
                return ("x cosupport(y)=cosupport(xy)x", (x, y))
    return None


_FLAGS = (
    "ehresmann", "coehresmann", "biehresmann", "restriction", "corestriction",
    "birestriction", "range", "has_zero_projection", "has_local_units",
    "preboolean_restriction", "boolean_restriction", "preboolean_birestriction",
    "boolean_birestriction", "boolean_range", "etale_range", "groupoidal_etale",
    "inverse", "has_binary_meets",
)


@dataclass
class AlgebraClassification:
    flags: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    plus_inferred: bool = False

    def __getattr__(self, item):
        flags = object.__getattribute__(self, "flags")
        if item in flags:
            return flags[item]
        raise AttributeError(item)

    def witness(self, flag):
        return self.witnesses.get(flag)

    def render(self, names=None):
        out = []
        for flag in _FLAGS:
            line = f"{flag}={str(self.flags[flag]).lower()}"
            w = self.witnesses.get(flag)
            if w is not None and not self.flags[flag]:
                if names is not None:
                    axiom, tup = w
                    tup = tuple(names[i] if isinstance(i, int) and 0 <= i < len(names)
                                else i for i in tup)
                    w = (axiom, tup)
                from .report import format_witness
                line += f" witness={format_witness(w)}"
            out.append(line)
        if self.plus_inferred:
            out.append("plus_inferred=true")
        return "\n".join(out)


def classify(S):
    """Compute every structural flag by exhaustive axiom evaluation.

    Plus-dependent flags are evaluated against the stored plus table; when
    none is stored but a compatible cosupport is forced by the star reduct,
    the inferred table is used and plus_inferred is set.
    """
    if "classification" in S._cache:
        return S._cache["classification"]
    flags = {}
    wit = {}

    def put(flag, ok, witness=None):
        flags[flag] = bool(ok)
        if not ok and witness is not None:
            wit[flag] = witness
        return bool(ok)

    w = _star_axiom_witness(S)
    put("ehresmann", w is None, w)

    probe = S
    plus_inferred = False
    if S.plus is None and flags["ehresmann"]:
        try:
            inferred = infer_cosupport(S)
        except (NoLeftUnit, MathFail) as exc:
            inferred = CosupportResult(None, "no-left-unit",
                                       getattr(exc, "witness", None))
        if inferred:
            probe = BiUnaryAlgebra(S.names, S.mult, S.star, inferred.table, S.zero)
            plus_inferred = True

    if probe.plus is None:
        missing = ("no-plus-table", ())
        for flag in ("coehresmann", "corestriction"):
            put(flag, False, missing)
    else:
        w = _plus_axiom_witness(probe)
        put("coehresmann", w is None, w)
        if flags["coehresmann"]:
            w = _corestriction_witness(probe)
            put("corestriction", w is None, w)
        else:
            put("corestriction", False, wit.get("coehresmann"))

    put("biehresmann", flags["ehresmann"] and flags["coehresmann"],
        wit.get("ehresmann") or wit.get("coehresmann"))

    if flags["ehresmann"]:
        w = _restriction_witness(S)
        put("restriction", w is None, w)
    else:
        put("restriction", False, wit.get("ehresmann"))

    put("birestriction", flags["restriction"] and flags["corestriction"]
        and flags["biehresmann"],
        wit.get("restriction") or wit.get("corestriction") or wit.get("biehresmann"))
    put("range", flags["biehresmann"] and flags["restriction"],
        wit.get("biehresmann") or wit.get("restriction"))

    z = detected_zero_projection(S)
    put("has_zero_projection", z is not None, ("MissingZeroProjection", ()))
    lu, luw = has_local_units(S)
    put("has_local_units", lu, ("no-left-unit", luw) if luw else None)

    # (BR2) P(S) is a GBA; shared by the restriction and birestriction ladders
    br2 = False
    br2_wit = None
    if flags["has_zero_projection"]:
        try:
            projection_gba(S)
            br2 = True
        except MathFail as exc:
            br2_wit = ("BR2", exc.witness)
    else:
        br2_wit = ("BR2", ("MissingZeroProjection",))

    br1 = br1p = br3 = None  # witnesses; computed only when meaningful
    if flags["restriction"] and flags["has_zero_projection"] and br2:
        br1 = _br1_witness(S, probe, bicompat=False)
        br1p = _br1prime_witness(S)
        br3 = _br3_witness(S)

    def ladder(flag, base_ok, base_wit, *conds):
        if not base_ok:
            return put(flag, False, base_wit)
        for cond in conds:
            if cond is not None:
                return put(flag, False, cond)
        return put(flag, True)

    base_r = flags["restriction"] and flags["has_zero_projection"] and br2
    base_r_wit = (wit.get("restriction")
                  or (("has_zero_projection", ()) if not flags["has_zero_projection"]
                      else br2_wit))
    ladder("preboolean_restriction", base_r, base_r_wit, br1p, br3)
    ladder("boolean_restriction", base_r, base_r_wit, br1, br3)

    base_b = flags["birestriction"] and flags["has_zero_projection"] and br2
    base_b_wit = (wit.get("birestriction")
                  or (("has_zero_projection", ()) if not flags["has_zero_projection"]
                      else br2_wit))
    if base_b:
        bbr1 = _br1_witness(S, probe, bicompat=True)
        ladder("preboolean_birestriction", base_b, base_b_wit, br1p, br3)
        ladder("boolean_birestriction", base_b, base_b_wit, bbr1)
    else:
        put("preboolean_birestriction", False, base_b_wit)
        put("boolean_birestriction", False, base_b_wit)

    put("boolean_range", flags["range"] and flags["boolean_restriction"],
        wit.get("range") or wit.get("boolean_restriction"))

    if flags["boolean_range"]:
        _, _, bidet = deterministic_sets(probe)
        w = _join_cover_witness(S, set(bidet))
        put("etale_range", w is None, w)
    else:
        put("etale_range", False, wit.get("boolean_range"))

    # join cover by partial isomorphisms; unlike etale this needs no
    # boolean_range prerequisite (a projection semilattice qualifies)
    try:
        piso = set(partial_isomorphisms(S))
    except MathFail as exc:
        put("groupoidal_etale", False, ("partial-isomorphisms", exc.witness))
    else:
        w = _join_cover_witness(S, piso)
        put("groupoidal_etale", w is None, w)

    w = _inverse_witness(S)
    put("inverse", w is None, w)

    w = None
    for s in range(S.n):
        for t in range(S.n):
            if meet(S, s, t) is None:
                w = ("no-meet", (s, t))
                break
        if w:
            break
    put("has_binary_meets", w is None, w)

    cls = AlgebraClassification(flags, wit, plus_inferred)
    _assert_implications(cls)
    S._cache["classification"] = cls
    return cls


def _br1_witness(S, probe, bicompat):
    n = S.n
    for s in range(n):
        for t in range(n):
            if bicompat:
                if not compatible(probe, s, t, "bi"):
                    continue
            elif not compatible(S, s, t, "right"):
                continue
            if join(S, s, t) is None:
                return ("BBR1" if bicompat else "BR1", (s, t))
    return None


def _br1prime_witness(S):
    up = S.up_masks()
    n = S.n
    for s in range(n):
        for t in range(n):
            if up[s] & up[t] and join(S, s, t) is None:
                return ("BR1'", (s, t))
    return None


def _br3_witness(S):
    n, mult = S.n, S.mult
    for s in range(n):
        for t in range(n):
            j = join(S, s, t)
            if j is None:
                continue
            for u in range(n):
                ju = join(S, mult[s][u], mult[t][u])
                if ju is None or ju != mult[j][u]:
                    return ("BR3", (s, t, u))
    return None


def _join_cover_witness(S, lower_class):
    down = S.down_masks()
    for s in range(S.n):
        lows = [b for b in _iter_bits(down[s]) if b in lower_class]
        if join_all(S, lows) != s:
            return ("join-cover", (s,))
    return None


def _inverse_witness(S):
    mult = S.mult
    n = S.n
    for s in range(n):
        count = 0
        for t in range(n):
            if mult[mult[s][t]][s] == s and mult[mult[t][s]][t] == t:
                count += 1
        if count != 1:
            return ("unique-inverse", (s,))
    return None


def _assert_implications(cls):
    f = cls.flags
    assert not f["restriction"] or f["ehresmann"]
    assert not f["birestriction"] or f["biehresmann"]
    assert not f["boolean_restriction"] or f["preboolean_restriction"]
    assert not f["boolean_birestriction"] or f["preboolean_birestriction"]
    assert not f["etale_range"] or f["boolean_range"]
    assert not f["boolean_range"] or f["range"]
    assert not f["range"] or (f["restriction"] and f["biehresmann"])


@dataclass(frozen=True)
class SemigroupMorphism:
    source: BiUnaryAlgebra
    target: BiUnaryAlgebra
    map: tuple

    def __post_init__(self):
        if len(self.map) != self.source.n:
            raise BadTableShape("morphism map has wrong length")
        for v in self.map:
            if not 0 <= v < self.target.n:
                raise BadTableShape(f"morphism value {v} out of range")


@dataclass
class MorphismVerdict:
    ok: bool
    mtype: int
    failed: str | None = None
    witness: tuple | None = None


def check_morphism(f, mtype, require_plus=False):
    """Decide whether f is a morphism of the requested type (1..4).

    Type 1 is the base: a (2,1)-homomorphism whose projection restriction is
    a proper GBA morphism.  Type 2 adds weak meet preservation, type 3 adds
    properness (decided by a normalized join criterion), type 4 adds both.
    With require_plus the map must preserve the cosupport as well.
    """
    if mtype not in (1, 2, 3, 4):
        raise InputError(f"unknown morphism type {mtype}")
    S, T, m = f.source, f.target, f.map

    for i in range(S.n):
        for j in range(S.n):
            if m[S.mult[i][j]] != T.mult[m[i]][m[j]]:
                return MorphismVerdict(False, mtype, "mult", (i, j))
    for i in range(S.n):
        if m[S.star[i]] != T.star[m[i]]:
            return MorphismVerdict(False, mtype, "star", (i,))
    if require_plus:
        if S.plus is None or T.plus is None:
            raise NoPlusTable("plus preservation requested without plus tables")
        for i in range(S.n):
            if m[S.plus[i]] != T.plus[m[i]]:
                return MorphismVerdict(False, mtype, "plus", (i,))

    try:
        _, to_S, from_S = projection_gba(S)
        _, to_T, from_T = projection_gba(T)
    except MathFail as exc:
        raise InputError(f"projection lattices must be GBAs: {exc}") from exc
    zs = detected_zero_projection(S)
    zt = detected_zero_projection(T)
    if m[zs] != zt:
        return MorphismVerdict(False, mtype, "proj-zero", (zs,))
    projS = S.projections()
    for e in projS:
        for g in projS:
            je = from_S[to_S[e] | to_S[g]]
            if m[je] != from_T[to_T[m[e]] | to_T[m[g]]]:
                return MorphismVerdict(False, mtype, "proj-join", (e, g))
            de = from_S[to_S[e] & ~to_S[g]]
            if m[de] != from_T[to_T[m[e]] & ~to_T[m[g]]]:
                return MorphismVerdict(False, mtype, "proj-diff", (e, g))
    for t in T.projections():
        if not any(T.leq(t, m[e]) for e in projS):
            return MorphismVerdict(False, mtype, "proj-proper", (t,))

    if mtype in (2, 4):
        w = _weak_meet_witness(f)
        if w is not None:
            return MorphismVerdict(False, mtype, "weakly-meet-preserving", w)
    if mtype in (3, 4):
        w = _proper_witness(f)
        if w is not None:
            return MorphismVerdict(False, mtype, "proper", w)
    return MorphismVerdict(True, mtype)


def _weak_meet_witness(f):
    S, T, m = f.source, f.target, f.map
    downT = T.down_masks()
    downS = S.down_masks()
    pre = [0] * T.n  # pre[u] = bitmask of {s in S : u <= f(s)}
    for s in range(S.n):
        for u in _iter_bits(downT[m[s]]):
            pre[u] |= 1 << s
    for u in range(T.n):
        cand = pre[u]
        for s in _iter_bits(cand):
            for t in _iter_bits(cand):
                if not downS[s] & downS[t] & cand:
                    return (s, t, u)
    return None


def _proper_witness(f):
    S, T, m = f.source, f.target, f.map
    downT = T.down_masks()
    image_down = 0
    for s in range(S.n):
        image_down |= downT[m[s]]
    for t in range(T.n):
        pieces = list(_iter_bits(downT[t] & image_down))
        if join_all(T, pieces) != t:
            return (t,)
    return None


def _signatures(S):
    n, mult, star = S.n, S.mult, S.star
    plus = S.plus or star
    up, down = S.up_masks(), S.down_masks()
    z = S.detected_zero()
    sig = [(star[i] == i, plus[i] == i, mult[i][i] == i, i == z,
            sum(1 for j in range(n) if star[j] == i),
            sum(1 for j in range(n) if plus[j] == i),
            bin(up[i]).count("1"), bin(down[i]).count("1")) for i in range(n)]
    for _ in range(2):
        ids = {s: k for k, s in enumerate(sorted(set(sig)))}
        coded = [ids[s] for s in sig]
        sig = [(coded[i], coded[star[i]], coded[plus[i]],
                tuple(sorted((coded[j], coded[mult[i][j]], coded[mult[j][i]])
                             for j in range(n))))
               for i in range(n)]
    ids = {s: k for k, s in enumerate(sorted(set(sig)))}
    return [ids[s] for s in sig]


def iso_algebras(S, T):
    """Search for a table isomorphism S -> T; None when there is none.

    Backtracking over signature-compatible assignments; the fast path
    rejects on size or signature-profile mismatch.
    """
    if S.n != T.n:
        return None
    if (S.plus is None) != (T.plus is None):
        return None
    sigS, sigT = _signatures(S), _signatures(T)
    if sorted(sigS) != sorted(sigT):
        return None
    candidates = [[t for t in range(T.n) if sigT[t] == sigS[s]] for s in range(S.n)]
    order = sorted(range(S.n), key=lambda s: len(candidates[s]))
    mapping = [-1] * S.n
    used = [False] * T.n

    def consistent(s, t):
        # partial check: product constraints where the image is already fixed
        for s2 in order:
            t2 = mapping[s2]
            if t2 < 0:
                continue
            for a, b, ta, tb in ((s, s2, t, t2), (s2, s, t2, t)):
                p = mapping[S.mult[a][b]]
                if p >= 0 and p != T.mult[ta][tb]:
                    return False
        if mapping[S.star[s]] >= 0 and mapping[S.star[s]] != T.star[t]:
            return False
        if S.plus is not None:
            if mapping[S.plus[s]] >= 0 and mapping[S.plus[s]] != T.plus[t]:
                return False
        return True

    def full_check():
        # the partial checks skip products whose image was unassigned at the
        # time, so a completed assignment still needs one exhaustive pass
        for i in range(S.n):
            if mapping[S.star[i]] != T.star[mapping[i]]:
                return False
            if S.plus is not None and mapping[S.plus[i]] != T.plus[mapping[i]]:
                return False
            mi = S.mult[i]
            ti = T.mult[mapping[i]]
            for j in range(S.n):
                if mapping[mi[j]] != ti[mapping[j]]:
                    return False
        return True

    def extend(k):
        if k == len(order):
            return full_check()
        s = order[k]
        for t in candidates[s]:
            if used[t]:
                continue
            mapping[s] = t
            used[t] = True
            if consistent(s, t) and extend(k + 1):
                return True
            mapping[s] = -1
            used[t] = False
        return False

    if not extend(0):
        return None
    return tuple(mapping)
