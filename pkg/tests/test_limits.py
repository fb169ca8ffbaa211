import pytest

from freeqcat import fixtures
from freeqcat.limits import (
    is_cototal,
    is_total,
    left_adjoint,
    preserves_colimits,
    preserves_limits,
    right_adjoint,
    singular,
    weighted_colimit,
    weighted_limit,
)
from freeqcat.macneille import macneille
from freeqcat.presheaves import (
    Copresheaf,
    Presheaf,
    copresheaf_hom,
    corepresentable,
    enumerate_copresheaves,
    enumerate_presheaves,
    presheaf_category,
    presheaf_hom,
    representable,
)
from freeqcat.qcategory import QFunctor, enumerate_functors, identity_functor, is_iso

from conftest import small_instances


def comps(phi):
    return {x: set(h.elems) for x, h in phi.components.items() if h.elems}


def oracle_colimits(phi, F):
    """Objects ``v`` with ``C(v, c) = P I(phi, C(F, c))``, using the residual formula."""
    C = F.cod
    targets = {c: presheaf_hom(phi, singular(F, c)) for c in C.ids}
    return sorted(v for v in C.objects_over(phi.extent) if all(C.hom(v, c) == targets[c] for c in C.ids))


def test_singular_examples(e_ac, e_ch):
    assert singular(identity_functor(e_ch), "0") == representable(e_ch, "0")
    F = QFunctor(e_ac, e_ch, {"a": "0", "b": "1"})
    assert comps(singular(F, "0")) == {"a": {"id"}}
    assert comps(singular(F, "1")) == {"a": {"id"}, "b": {"id"}}


def test_colimit_examples(e_ch, e_ac):
    one = identity_functor(e_ch)
    full = Presheaf(e_ch, "*", {"0": {"id"}, "1": {"id"}})
    assert [w.object for w in weighted_colimit(full, one)] == ["1"]
    assert weighted_colimit(Presheaf(e_ac, "*", {"a": {"id"}, "b": {"id"}}), identity_functor(e_ac)) == []
    for E in (e_ch, e_ac):
        for x in E.ids:
            assert x in [w.object for w in weighted_colimit(representable(E, x), identity_functor(E))]


def test_certificates_hold_exactly(e_ch):
    full = Presheaf(e_ch, "*", {"0": {"id"}, "1": {"id"}})
    (w,) = weighted_colimit(full, identity_functor(e_ch))
    assert w.certificate == {c: e_ch.hom("1", c) for c in e_ch.ids}


def test_limit_examples(e_ch, e_ac):
    up01 = Copresheaf(e_ch, "*", {"0": {"id"}, "1": {"id"}})
    assert [w.object for w in weighted_limit(up01, identity_functor(e_ch))] == ["0"]
    assert weighted_limit(Copresheaf(e_ac, "*", {"a": {"id"}, "b": {"id"}}), identity_functor(e_ac)) == []
    for x in e_ch.ids:
        assert x in [w.object for w in weighted_limit(corepresentable(e_ch, x), identity_functor(e_ch))]


@pytest.mark.parametrize("E", [fixtures.E_X(), fixtures.E_AC()] + small_instances(40, max_elements=10))
def test_colimits_match_oracle(E):
    for F in enumerate_functors(E, E, limit=3):
        for phi in enumerate_presheaves(E):
            found = [w.object for w in weighted_colimit(phi, F)]
            assert found == oracle_colimits(phi, F)
            for v in found:
                assert all(is_iso(E, v, w) for w in found)


@pytest.mark.parametrize("E", [fixtures.E_X()] + small_instances(30, max_elements=10))
def test_limits_match_oracle(E):
    one = identity_functor(E)
    for psi in enumerate_copresheaves(E):
        targets = {c: copresheaf_hom(corepresentable(E, c), psi) for c in E.ids}
        want = sorted(v for v in E.objects_over(psi.extent) if all(E.hom(c, v) == targets[c] for c in E.ids))
        assert [w.object for w in weighted_limit(psi, one)] == want


def test_totality_examples(e_ch, e_ac):
    assert is_total(e_ch)
    d = is_total(e_ac)
    assert not d
    assert {"a": {"id"}, "b": {"id"}} in [comps(p) for p in d.failures]
    P, _ = presheaf_category(e_ac)
    assert is_total(P)
    assert is_cototal(e_ch) and not is_cototal(e_ac)


@pytest.mark.parametrize("E", small_instances(200))
def test_totality_duality_and_local_method(E):
    d = is_total(E)
    assert d.value == is_cototal(E).value
    assert d.value == is_total(E, method="local").value
    assert d.value == bool(left_adjoint(presheaf_category(E)[1]))


def test_adjoint_examples(e_ch, e_ac):
    r = right_adjoint(identity_functor(e_ch))
    assert r.functor.object_map == {"0": "0", "1": "1"} and r.certified
    P, Y = presheaf_category(e_ch)
    sup = left_adjoint(Y)
    assert sup and sup.certified
    assert {P.presheaf(p).key: c for p, c in sup.functor.object_map.items()} == {
        ("*", ((), ())): "0",
        ("*", (("id",), ())): "0",
        ("*", (("id",), ("id",))): "1",
    }
    P, Y = presheaf_category(e_ac)
    none = left_adjoint(Y)
    assert not none
    assert P.presheaf(none.counterexample).key in {("*", ((), ())), ("*", (("id",), ("id",))), }


def test_adjoint_hom_equality(e_ch):
    P, Y = presheaf_category(e_ch)
    L = left_adjoint(Y).functor
    for d in P.ids:
        for c in e_ch.ids:
            assert e_ch.hom(L(d), c) == P.hom(d, Y(c))


def test_preservation_examples(e_ch, e_ac):
    P, Y = presheaf_category(e_ch)
    sup = left_adjoint(Y).functor
    assert preserves_colimits(sup)
    assert preserves_colimits(presheaf_category(e_ac)[1])
    J = macneille(e_ac).embedding
    assert preserves_colimits(J) and preserves_limits(J)


@pytest.mark.parametrize("E", [E for E in small_instances(120) if is_total(E)][:30])
def test_adjoint_functor_theorem_on_functors_out_of_totals(E):
    targets = [E, presheaf_category(E)[0], macneille(E).completion]
    for D in targets:
        for F in enumerate_functors(E, D, limit=6):
            if preserves_colimits(F):
                G = right_adjoint(F)
                assert G and G.certified
            else:
                assert not right_adjoint(F)
