import pytest

from oracles import germ_relation_mismatch, proj_atoms
from stonedual.algebra import (SemigroupMorphism, bd_subalgebra, classify,
                               make_algebra)
from stonedual.category import (check_cofunctor, is_groupoid, make_category,
                                semigroup_slices, slice_semigroup)
from stonedual.duality import (category_signature, counit_epsilon,
                               germ_category, iso_categories,
                               morphism_to_cofunctor, theta, unit_eta,
                               verify_adjunction,
                               verify_birestriction_equivalence,
                               verify_groupoidal, with_inferred_plus)
from stonedual.errors import (NoLocalUnits, NotAMorphism,
                              NotBooleanBirestriction, NotPreBoolean,
                              UnknownElement)
from stonedual.zoo import (gen_free_arrow, gen_i, gen_pair_groupoid, gen_pt,
                           gen_triangular)


def chain_semilattice(n):
    return make_algebra([f"c{i}" for i in range(n)],
                        [[min(i, j) for j in range(n)] for i in range(n)],
                        list(range(n)))


def no_left_unit_algebra():
    # restriction semigroup {z < e, s} with e*s = z, so s has no left unit
    return make_algebra(["z", "e", "s"],
                        [[0, 0, 0], [0, 1, 0], [0, 2, 0]],
                        [0, 1, 1])


# -- germ category structure -----------------------------------------------------

@pytest.mark.parametrize("gen,n", [(gen_pt, 1), (gen_pt, 2), (gen_i, 2),
                                   (gen_triangular, 2), (gen_triangular, 3)])
def test_canonical_germs_agree_with_brute_relation(gen, n):
    S = gen(n)
    assert germ_relation_mismatch(S) is None
    G = germ_category(S)
    atomic = {s for s in range(S.n) if S.star[s] in set(proj_atoms(S))}
    assert set(G.germ_elems) == atomic
    assert list(G.atoms) == sorted(proj_atoms(S))


@pytest.mark.parametrize("gen,n", [(gen_pt, 2), (gen_i, 2),
                                   (gen_triangular, 2)])
def test_germ_composition_is_multiplication(gen, n):
    S = gen(n)
    G = germ_category(S)
    C = G.category
    for j in range(C.n_arr):
        for k in range(C.n_arr):
            if C.d[j] != C.r[k]:
                continue
            assert G.germ_elems[C.comp[j][k]] == \
                S.mult[G.germ_elems[j]][G.germ_elems[k]]


def test_germ_of_pt2_is_pair_groupoid():
    G = germ_category(gen_pt(2))
    assert (G.category.n_obj, G.category.n_arr) == (2, 4)
    assert iso_categories(G.category, gen_pair_groupoid(2)) is not None


def test_germ_of_triangular_is_free_arrow():
    G = germ_category(gen_triangular(2))
    assert (G.category.n_obj, G.category.n_arr) == (2, 3)
    assert iso_categories(G.category, gen_free_arrow()) is not None
    assert is_groupoid(G.category)[0] is None


def test_germ_ignores_non_injective_elements():
    # PT_2 and its bideterministic part I_2 have the same germs
    G1 = germ_category(gen_pt(2))
    G2 = germ_category(gen_i(2))
    assert iso_categories(G1.category, G2.category) is not None


def test_germ_requires_preboolean():
    with pytest.raises(NotPreBoolean):
        germ_category(chain_semilattice(3))


def test_germ_requires_local_units():
    S = no_left_unit_algebra()
    cls = classify(S)
    assert cls.flags["preboolean_restriction"]
    assert not cls.flags["has_local_units"]
    with pytest.raises(NoLocalUnits):
        germ_category(S)


# -- theta and the unit ------------------------------------------------------------

def test_theta_sizes_and_errors():
    S = gen_pt(2)
    G = germ_category(S)
    for s in range(S.n):
        dom_size = sum(c != "-" for c in S.names[s])
        assert len(theta(S, s).arrows) == dom_size
    assert theta(S, S.zero).arrows == frozenset()
    with pytest.raises(UnknownElement):
        theta(S, S.n)


def test_unit_eta_bijective_for_boolean_restriction():
    S = gen_pt(2)
    eta = unit_eta(S)
    assert len(set(eta.map)) == S.n == eta.target.n


def test_unit_eta_proper_embedding_otherwise():
    S = gen_i(2)
    eta = unit_eta(S)
    assert len(set(eta.map)) == S.n
    assert eta.target.n == 9


# -- counit and adjunction -----------------------------------------------------------

@pytest.mark.parametrize("make", [lambda: gen_pair_groupoid(1),
                                  lambda: gen_pair_groupoid(2),
                                  gen_free_arrow])
def test_counit_is_bijective_on_arrows(make):
    C = make()
    eps = counit_epsilon(C)
    flags = check_cofunctor(eps)
    assert flags.flags["bijective_on_arrows"]
    assert eps.target is C


@pytest.mark.parametrize("gen,n", [(gen_pt, 1), (gen_pt, 2), (gen_i, 2),
                                   (gen_triangular, 2), (gen_triangular, 3)])
def test_triangle_identity_semigroup_side(gen, n):
    rep = verify_adjunction(gen(n))
    assert rep.passed, rep.render()


@pytest.mark.parametrize("make", [lambda: gen_pair_groupoid(1),
                                  lambda: gen_pair_groupoid(2),
                                  lambda: gen_pair_groupoid(3),
                                  gen_free_arrow])
def test_triangle_identity_category_side(make):
    rep = verify_adjunction(make())
    assert rep.passed, rep.render()


def test_verify_adjunction_rejects_other_inputs():
    with pytest.raises(UnknownElement):
        verify_adjunction("not an instance")


# -- cofunctors from morphisms ---------------------------------------------------------

def test_inclusion_gives_action_injective_cofunctor():
    I, P = gen_i(2), gen_pt(2)
    f = SemigroupMorphism(I, P, tuple(P.names.index(nm) for nm in I.names))
    F = morphism_to_cofunctor(f)
    flags = check_cofunctor(F)
    assert flags.flags["action_injective"]


def test_morphism_to_cofunctor_validates():
    P = gen_pt(2)
    bad = SemigroupMorphism(P, P, (P.zero,) * P.n)
    with pytest.raises(NotAMorphism):
        morphism_to_cofunctor(bad)


def test_pushforward_naturality_square():
    I, P = gen_i(2), gen_pt(2)
    f = SemigroupMorphism(I, P, tuple(P.names.index(nm) for nm in I.names))
    F = morphism_to_cofunctor(f)
    from stonedual.category import cofunctor_to_morphism
    F_star = cofunctor_to_morphism(F)
    eta_I, eta_P = unit_eta(I), unit_eta(P)
    for s in range(I.n):
        assert F_star.map[eta_I.map[s]] == eta_P.map[f.map[s]]


# -- theorem reports -----------------------------------------------------------------

def test_birestriction_equivalence_on_i2():
    rep = verify_birestriction_equivalence(gen_i(2))
    assert rep.passed, rep.render()
    assert rep.data["bijection"] == (0, 1, 2, 3, 4, 5, 6)


def test_birestriction_equivalence_rejects_pt2():
    with pytest.raises(NotBooleanBirestriction):
        verify_birestriction_equivalence(gen_pt(2))


@pytest.mark.parametrize("make", [lambda: gen_pair_groupoid(2),
                                  gen_free_arrow])
def test_groupoid_criterion_on_categories(make):
    rep = verify_groupoidal(make())
    assert rep.passed, rep.render()


@pytest.mark.parametrize("gen,n,expect", [(gen_pt, 2, True),
                                          (gen_i, 2, True),
                                          (gen_triangular, 2, False)])
def test_groupoid_criterion_on_semigroups(gen, n, expect):
    S = gen(n)
    rep = verify_groupoidal(S)
    assert rep.passed, rep.render()
    assert ("inversion" in rep.data) == expect


def test_with_inferred_plus_matches_stored_table():
    S = gen_i(2)
    stripped = make_algebra(S.names, S.mult, S.star, zero=S.zero)
    assert with_inferred_plus(stripped).plus == S.plus
    assert with_inferred_plus(S) is S


# -- category isomorphism search -------------------------------------------------------

def relabel_category(C, operm, aperm):
    ainv = [0] * C.n_arr
    for old, new in enumerate(aperm):
        ainv[new] = old
    oinv = [0] * C.n_obj
    for old, new in enumerate(operm):
        oinv[new] = old
    return make_category(
        [C.objects[oinv[i]] for i in range(C.n_obj)],
        [C.arrows[ainv[i]] for i in range(C.n_arr)],
        [operm[C.d[ainv[a]]] for a in range(C.n_arr)],
        [operm[C.r[ainv[a]]] for a in range(C.n_arr)],
        [aperm[C.unit[oinv[o]]] for o in range(C.n_obj)],
        [[aperm[C.comp[ainv[x]][ainv[y]]]
          if C.d[ainv[x]] == C.r[ainv[y]] else -1
          for y in range(C.n_arr)] for x in range(C.n_arr)])


def test_iso_categories_finds_relabeling():
    C = gen_pair_groupoid(2)
    D = relabel_category(C, (1, 0), (3, 1, 2, 0))
    found = iso_categories(C, D)
    assert found is not None
    omap, amap = found
    for x in range(C.n_arr):
        assert D.d[amap[x]] == omap[C.d[x]]
        for y in range(C.n_arr):
            if C.d[x] == C.r[y]:
                assert amap[C.comp[x][y]] == D.comp[amap[x]][amap[y]]


def test_iso_categories_rejects_different_sizes():
    assert iso_categories(gen_pair_groupoid(2), gen_free_arrow()) is None


def test_iso_categories_rejects_same_size_non_isomorphic():
    cyclic = make_category(["o"], ["u", "a", "b"], [0] * 3, [0] * 3, [0],
                           [[0, 1, 2], [1, 2, 0], [2, 0, 1]])
    left = make_category(["o"], ["u", "e", "f"], [0] * 3, [0] * 3, [0],
                         [[0, 1, 2], [1, 1, 1], [2, 2, 2]])
    assert iso_categories(cyclic, left) is None


def test_category_signature_is_relabeling_invariant():
    C = gen_pair_groupoid(3)
    D = relabel_category(C, (2, 0, 1), tuple(reversed(range(C.n_arr))))
    assert sorted(category_signature(C)) == sorted(category_signature(D))
