import pytest

from freeqcat import fixtures
from freeqcat.presheaves import (
    Presheaf,
    copresheaf_category,
    copresheaf_hom,
    corepresentable,
    enumerate_copresheaves,
    enumerate_presheaves,
    fast_copresheaf_hom,
    fast_presheaf_hom,
    left_extend,
    mu,
    presheaf_category,
    presheaf_hom,
    representable,
    restrict,
    validate_presheaf,
)
from freeqcat.qcategory import QFunctor, identity_functor, opposite_qcategory
from freeqcat.limits import _colimit_table
from freeqcat.reports import CapExceededError

from conftest import brute_presheaves, small_instances


def comps(phi):
    return {x: set(h.elems) for x, h in phi.components.items() if h.elems}


def test_counts(e_ch, e_ac, e_x):
    assert [comps(p) for p in enumerate_presheaves(e_ch)] == [{}, {"0": {"id"}}, {"0": {"id"}, "1": {"id"}}]
    assert len(enumerate_presheaves(e_ac)) == 4
    assert [comps(p) for p in enumerate_presheaves(e_x, "Y")] == [{}, {"e": {"f"}}]


@pytest.mark.parametrize("E", small_instances(60, max_elements=10))
def test_enumeration_matches_brute_force(E):
    for z in E.base.objects:
        fast = sorted(p.key for p in enumerate_presheaves(E, z))
        slow = sorted(p.key for p in brute_presheaves(E, z))
        assert fast == slow


def test_cap_is_never_silent(e_ac):
    with pytest.raises(CapExceededError):
        enumerate_presheaves(e_ac, cap=3)
    assert len(enumerate_presheaves(e_ac, cap=4)) == 4


def test_hom_examples(e_ac, e_x):
    P = {frozenset(comps(p)): p for p in enumerate_presheaves(e_ac)}
    a, ab = P[frozenset({"a"})], P[frozenset({"a", "b"})]
    assert presheaf_hom(a, ab).elems == {"id"}
    assert presheaf_hom(ab, a).elems == set()
    empty_y, f_y = enumerate_presheaves(e_x, "Y")
    assert presheaf_hom(empty_y, f_y).elems == {"1Y"}
    for p in enumerate_presheaves(e_x):
        assert e_x.base.identity(p.extent) in presheaf_hom(p, p)


@pytest.mark.parametrize("E", [fixtures.E_X(), fixtures.E_CH()] + small_instances(25, max_elements=10))
def test_mask_homs_match_residual_formula(E):
    ps = enumerate_presheaves(E)
    for p in ps:
        for q in ps:
            assert fast_presheaf_hom(p, q) == presheaf_hom(p, q)
    P, _ = presheaf_category(E)
    for p in ps[:6]:
        for q in ps[:6]:
            assert P.hom(P.id_of(p), P.id_of(q)) == presheaf_hom(p, q)


def test_presheaf_category_shapes(e_ac, e_x):
    P, Y = presheaf_category(e_ac)
    assert len(P) == 4 and len(set(Y.object_map.values())) == 2
    assert len(presheaf_category(e_x)[0]) == 4
    one = fixtures.point()
    P1, _ = presheaf_category(one)
    assert len(P1) == 2
    lo, hi = P1.ids
    assert P1.hom(lo, hi).elems == {"id"} and not P1.hom(hi, lo).elems


@pytest.mark.parametrize("E", [fixtures.E_AC(), fixtures.E_X()] + small_instances(25, max_elements=12))
def test_yoneda(E):
    P, Y = presheaf_category(E)
    for x in E.ids:
        assert validate_presheaf(representable(E, x)).ok
        for y in E.ids:
            assert P.hom(Y(x), Y(y)) == E.hom(x, y)
        for phi in P.presheaves:
            # the Yoneda lemma: P E(Y x, phi) = phi(x)
            assert fast_presheaf_hom(representable(E, x), phi) == phi(x)


def test_copresheaves(e_ac, e_ch):
    Q, Yd = copresheaf_category(e_ac)
    assert len(Q) == 4
    assert {x for x, h in Q.copresheaf(Yd("a")).components.items() if h.elems} == {"a"}
    assert len(copresheaf_category(fixtures.point())[0]) == 2


@pytest.mark.parametrize("E", [fixtures.E_CH(), fixtures.E_X()] + small_instances(20, max_elements=10))
def test_copresheaf_category_matches_direct_formula(E):
    Q, Yd = copresheaf_category(E)
    cs = Q.copresheaves
    for a in cs:
        for b in cs:
            direct = copresheaf_hom(a, b)
            assert Q.hom(a.id, b.id) == direct == fast_copresheaf_hom(a, b)
    for x in E.ids:
        assert Q.copresheaf(Yd(x)) == corepresentable(E, x)
    assert sorted(c.key for c in enumerate_copresheaves(E)) == sorted(c.key for c in cs)


def test_copresheaves_are_presheaves_on_the_opposite(e_ch):
    Q, _ = copresheaf_category(e_ch)
    Pop, _ = presheaf_category(opposite_qcategory(e_ch))
    for a in Q.copresheaves:
        for b in Q.copresheaves:
            pa, pb = a.as_op_presheaf(), b.as_op_presheaf()
            assert Q.hom(a.id, b.id).elems == Pop.hom(Pop.id_of(pb), Pop.id_of(pa)).elems


def test_mu_examples(e_ac):
    P, Y = presheaf_category(e_ac)
    PP, _ = presheaf_category(P)
    for pid in P.ids:
        assert mu(e_ac, PP.presheaf(PP.yoneda(pid))) == P.presheaf(pid)
    empty = Presheaf(P, "*", {})
    assert all(not h.elems for h in mu(e_ac, empty).components.values())
    Phi = Presheaf(P, "*", {Y("a"): {"id"}, Y("b"): {"id"}})
    assert comps(mu(e_ac, Phi)) == {"a": {"id"}, "b": {"id"}}


@pytest.mark.parametrize("E", [fixtures.E_X(), fixtures.E_CH()] + small_instances(15, max_elements=4))
def test_mu_is_left_adjoint_to_yoneda(E):
    P, _ = presheaf_category(E)
    PP, _ = presheaf_category(P)
    table = _colimit_table(identity_functor(P), [(p.extent, p.mask) for p in PP.presheaves])
    for Phi, found in zip(PP.presheaves, table):
        assert P.id_of(mu(E, Phi)) in found


def test_restrict_and_extend(e_ac, e_ch):
    F = QFunctor(e_ac, e_ch, {"a": "0", "b": "1"})
    down0, down01 = enumerate_presheaves(e_ch)[1:]
    assert comps(restrict(F, down01)) == {"a": {"id"}, "b": {"id"}}
    assert comps(restrict(F, down0)) == {"a": {"id"}}
    assert restrict(identity_functor(e_ch), down0) == down0
    a = Presheaf(e_ac, "*", {"a": {"id"}})
    assert comps(left_extend(F, a)) == {"0": {"id"}}
    assert comps(left_extend(F, Presheaf(e_ac, "*", {}))) == {}
    assert left_extend(identity_functor(e_ch), representable(e_ch, "1")) == representable(e_ch, "1")


@pytest.mark.parametrize("E", small_instances(20, max_elements=8))
def test_extension_is_left_adjoint_to_restriction(E):
    from freeqcat.qcategory import enumerate_functors

    for F in enumerate_functors(E, E, limit=4):
        for psi in enumerate_presheaves(E):
            for phi in enumerate_presheaves(E):
                assert presheaf_hom(left_extend(F, psi), phi) == presheaf_hom(psi, restrict(F, phi))


def test_ids_are_stable(e_ac):
    first = [p.id for p in enumerate_presheaves(e_ac)]
    again = [p.id for p in enumerate_presheaves(fixtures.E_AC())]
    assert first == again and len(set(first)) == 4
