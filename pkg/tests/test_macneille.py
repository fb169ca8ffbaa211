
import pytest

from freeqcat import fixtures
from freeqcat.base import terminal_category
from freeqcat.harness import GenConfig, gen_qcategory
from freeqcat.limits import is_total, left_adjoint, preserves_colimits, right_adjoint
from freeqcat.macneille import (
    completion_properties,
    fix_category,
    is_codense,
    is_cut,
    is_cut_cocontinuous,
    is_dense,
    isbell_functors,
    limit_closure,
    macneille,
    sharp,
)
from freeqcat.presheaves import Presheaf, presheaf_category, representable
from freeqcat.qcategory import (
    QFunctor,
    compose_functors,
    enumerate_functors,
    find_isomorphism,
    identity_functor,
    is_iso,
    opposite_qcategory,
)

from conftest import classical_completion, small_instances


def comps(phi):
    return {x: set(h.elems) for x, h in phi.components.items() if h.elems}


def random_preorders(n):
    out = []
    for seed in range(n):
        cfg = GenConfig(seed=seed, max_fiber_objects=5)
        out.append(gen_qcategory(cfg, terminal_category()))
    return out


def test_antichain_completion_is_a_diamond(e_ac):
    M = macneille(e_ac)
    assert sorted(sorted(comps(p)) for p in M.cut_index) == [[], ["a"], ["a", "b"], ["b"]]
    R, _ = classical_completion(e_ac)
    assert find_isomorphism(M.completion, R) is not None


@pytest.mark.parametrize("E", random_preorders(60))
def test_completion_matches_classical_oracle(E):
    M = macneille(E)
    R, pairs = classical_completion(E)
    assert find_isomorphism(M.completion, R) is not None
    # the bijection sends a cut to the set of points it contains
    assert {frozenset(comps(p)) for p in M.cut_index} == {L for L, _ in pairs}


def test_chain_completion(e_ch):
    M = macneille(e_ch)
    assert [comps(p) for p in M.cut_index] == [{"0": {"id"}}, {"0": {"id"}, "1": {"id"}}]
    assert not is_cut(e_ch, Presheaf(e_ch, "*", {}))
    J = M.embedding
    assert all(any(is_iso(M.completion, p, J(x)) for x in e_ch.ids) for p in M.completion.ids)


def test_arrow_fixture_completion(e_x):
    M = macneille(e_x)
    over_y = [p for p in M.cut_index if p.extent == "Y"]
    assert [comps(p) for p in over_y] == [{"e": {"f"}}]
    assert is_cut(e_x, over_y[0])
    assert not is_cut(e_x, Presheaf(e_x, "Y", {}))


@pytest.mark.parametrize("E", [fixtures.E_AC(), fixtures.E_CH(), fixtures.E_X()] + small_instances(30))
def test_cut_basics(E):
    M = macneille(E)
    for x in E.ids:
        assert is_cut(E, representable(E, x))
        assert M.completion.presheaf(M.embedding(x)) == representable(E, x)
    assert all(is_cut(E, p) for p in M.cut_index)


def test_completion_properties_on_fixtures(e_ac, e_ch):
    rep = completion_properties(e_ac)
    assert rep.ok and "equivalence_when_total" not in rep.checks
    assert completion_properties(e_ch).checks["equivalence_when_total"]
    P, _ = presheaf_category(e_ac)
    assert completion_properties(P).checks["equivalence_when_total"]


@pytest.mark.parametrize("E", [fixtures.E_AC(), fixtures.E_X()] + small_instances(30))
def test_self_duality(E):
    R = macneille(E).completion
    Rop = macneille(opposite_qcategory(E)).completion
    assert find_isomorphism(R.materialize(), opposite_qcategory(Rop).materialize()) is not None


@pytest.mark.parametrize("E", [fixtures.E_AC(), fixtures.E_CH(), fixtures.E_X(), fixtures.chain3()] + small_instances(15, max_elements=6))
def test_cuts_are_the_limit_closure_of_representables(E):
    assert sorted(limit_closure(E)) == sorted(macneille(E).completion.ids)


def test_density_examples(e_ac):
    assert is_dense(identity_functor(e_ac))
    J = macneille(e_ac).embedding
    assert is_dense(J) and is_codense(J)
    F = QFunctor(fixtures.point(), e_ac, {"*": "a"})
    d = is_dense(F)
    assert not d and d.counterexample == "b"


def test_cut_cocontinuity_examples(e_ch):
    assert is_cut_cocontinuous(identity_functor(e_ch))
    P, Y = presheaf_category(e_ch)
    sup = left_adjoint(Y).functor
    assert is_cut_cocontinuous(sup)
    # the restriction of the empty sieve along Y is not a cut of the chain
    assert not is_cut_cocontinuous(Y)


@pytest.mark.parametrize("E", [fixtures.E_CH(), fixtures.chain3()] + [E for E in small_instances(60) if is_total(E)][:12])
def test_three_conditions_agree_out_of_a_total(E):
    for D in (E, macneille(E).completion, fixtures.chain3() if E.base == terminal_category() else E):
        for F in enumerate_functors(E, D, limit=8):
            adj = bool(right_adjoint(F))
            assert adj == is_cut_cocontinuous(F).value == preserves_colimits(F).value


def test_sharp_examples(e_ac, e_ch):
    M = macneille(e_ac)
    Js = sharp(M.embedding)
    assert all(is_iso(M.completion, Js(p), p) for p in M.completion.ids)
    P, Y = presheaf_category(e_ac)
    Ys = sharp(Y)
    assert all(Ys(p) == p for p in M.completion.ids)
    C3 = fixtures.chain3()
    F = QFunctor(e_ch, C3, {"0": "0", "1": "2"})
    Fs = sharp(F)
    assert {comps(macneille(e_ch).completion.presheaf(p)).keys().__len__(): v for p, v in Fs.object_map.items()} == {1: "0", 2: "2"}


@pytest.mark.parametrize("E", [fixtures.E_AC(), fixtures.E_CH(), fixtures.E_X()] + small_instances(20, max_elements=6))
def test_bireflection(E):
    M = macneille(E)
    for D in (macneille(E).completion, presheaf_category(E)[0]):
        for F in enumerate_functors(E, D, limit=6):
            if not is_cut_cocontinuous(F):
                continue
            Fs = sharp(F)
            assert all(is_iso(D, Fs(M.embedding(x)), F(x)) for x in E.ids)
        for G in enumerate_functors(M.completion, D, limit=6):
            if not right_adjoint(G):
                continue
            GJ = compose_functors(G, M.embedding)
            assert all(is_iso(D, sharp(GJ)(p), G(p)) for p in M.completion.ids)


def test_fix_category(e_ac, e_ch):
    one = identity_functor(e_ch)
    assert fix_category(one, one).category.ids == e_ch.ids
    up, down = isbell_functors(e_ac)
    fr = fix_category(up, down)
    assert fr.ok and len(fr.category) == 4
    assert sorted(fr.category.ids) == sorted(macneille(e_ac).completion.ids)
    up, down = isbell_functors(e_ch)
    fr = fix_category(up, down)
    assert fr.ok
    _, Y = presheaf_category(e_ch)
    assert sorted(fr.category.ids) == sorted(set(Y.object_map.values()))
    with pytest.raises(ValueError):
        fix_category(down, up)


@pytest.mark.parametrize("E", small_instances(20, max_elements=8))
def test_fix_of_isbell_is_the_completion(E):
    up, down = isbell_functors(E)
    fr = fix_category(up, down)
    assert fr.ok
    assert sorted(fr.category.ids) == sorted(macneille(E).completion.ids)
