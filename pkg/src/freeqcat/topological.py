"""Final and initial liftings, topologicity and the Isbell adjunction."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import _sieves
from .limits import is_total, left_adjoint
from .presheaves import (
    DEFAULT_CAP,
    Copresheaf,
    Presheaf,
    corepresentable,
    fast_copresheaf_hom,
    fast_presheaf_hom,
    presheaf_category,
    representable,
)
from .qcategory import QCategory, opposite_qcategory
from .reports import Decision


@dataclass(frozen=True)
class LiftingProblem:
    """Legs ``(x, g)`` with ``g: |x| -> apex`` (final) or ``g: apex -> |x|`` (initial)."""

    direction: str
    apex: str
    legs: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if self.direction not in ("final", "initial"):
            raise ValueError(f"direction must be 'final' or 'initial', not {self.direction!r}")
        object.__setattr__(self, "legs", tuple(tuple(leg) for leg in self.legs))


def check_problem(E: QCategory, prob: LiftingProblem):
    B = E.base
    if not B.has_object(prob.apex):
        raise ValueError(f"unknown apex {prob.apex!r}")
    for x, g in prob.legs:
        if not E.has_object(x):
            raise ValueError(f"unknown object {x!r}")
        want = (E.extent(x), prob.apex) if prob.direction == "final" else (prob.apex, E.extent(x))
        if g not in B.hom(*want):
            raise ValueError(f"leg ({x}, {g}) is not a morphism {want[0]} -> {want[1]}")


def generated_sieve(E: QCategory, prob: LiftingProblem) -> Presheaf:
    """``phi(x) = {g_i o k | k in E(x, x_i)}``."""
    check_problem(E, prob)
    if prob.direction != "final":
        raise ValueError("generated_sieve needs a final problem")
    B = E.base
    comps = {x: set() for x in E.ids}
    for xi, g in prob.legs:
        for x in E.ids:
            comps[x] |= {B.compose(g, k) for k in E.hom(x, xi).elems}
    phi = Presheaf(E, prob.apex, {x: frozenset(v) for x, v in comps.items()})
    assert _sieves.space(E, phi.extent).is_sieve(phi.mask)
    return phi


def generated_cosieve(E: QCategory, prob: LiftingProblem) -> Copresheaf:
    """``psi(x) = {k o g_i | k in E(x_i, x)}``."""
    check_problem(E, prob)
    if prob.direction != "initial":
        raise ValueError("generated_cosieve needs an initial problem")
    B = E.base
    comps = {x: set() for x in E.ids}
    for xi, g in prob.legs:
        for x in E.ids:
            comps[x] |= {B.compose(k, g) for k in E.hom(xi, x).elems}
    return Copresheaf(E, prob.apex, {x: frozenset(v) for x, v in comps.items()})


def _final_lifting(E: QCategory, z: str, legs) -> list[str]:
    B = E.base
    comp = B.composition
    required = {}
    for e in E.ids:
        homs = [(E.hom(x, e).elems, g) for x, g in legs]
        required[e] = frozenset(
            t for t in B.hom(z, E.extent(e)) if all(comp[t, g] in h for h, g in homs)
        )
    return sorted(v for v in E.objects_over(z) if all(E.hom(v, e).elems == required[e] for e in E.ids))


def final_lifting(E: QCategory, prob: LiftingProblem) -> list[str]:
    """Objects ``zbar`` over the apex such that ``t in E(zbar, e)`` iff every ``t o g_i`` lies in ``E(x_i, e)``."""
    check_problem(E, prob)
    if prob.direction != "final":
        raise ValueError("final_lifting needs a final problem")
    return _final_lifting(E, prob.apex, prob.legs)


def initial_lifting(E: QCategory, prob: LiftingProblem) -> list[str]:
    check_problem(E, prob)
    if prob.direction != "initial":
        raise ValueError("initial_lifting needs an initial problem")
    return _final_lifting(opposite_qcategory(E), prob.apex, prob.legs)


def sieve_legs(phi) -> tuple[tuple[str, str], ...]:
    return tuple((x, f) for x in phi.over.ids for f in sorted(phi(x).elems))


def is_topological(E: QCategory, cap: int = DEFAULT_CAP) -> Decision:
    """Whether every sieve on ``E`` has a final lifting."""
    P, _ = presheaf_category(E, cap)
    witnesses, failures = {}, []
    for phi in P.presheaves:
        found = _final_lifting(E, phi.extent, sieve_legs(phi))
        if found:
            witnesses[phi.id] = found[0]
        else:
            failures.append(phi)
    return Decision(not failures, witnesses, failures, {"checked": len(P.presheaves)})


def isbell_up(E: QCategory, phi: Presheaf) -> Copresheaf:
    """``up(phi)(x) = {g: z -> |x| | g o h in E(y, x) for all h in phi(y)}``."""
    B = E.base
    comp = B.composition
    legs = sieve_legs(phi)
    comps = {}
    for x in E.ids:
        comps[x] = frozenset(
            g
            for g in B.hom(phi.extent, E.extent(x))
            if all(comp[g, h] in E.hom(y, x).elems for y, h in legs)
        )
    return Copresheaf(E, phi.extent, comps)


def isbell_down(E: QCategory, psi: Copresheaf) -> Presheaf:
    """``down(psi)(y) = {h: |y| -> z | g o h in E(y, x) for all g in psi(x)}``."""
    B = E.base
    comp = B.composition
    legs = sieve_legs(psi)
    comps = {}
    for y in E.ids:
        comps[y] = frozenset(
            h
            for h in B.hom(E.extent(y), psi.extent)
            if all(comp[g, h] in E.hom(y, x).elems for x, g in legs)
        )
    return Presheaf(E, psi.extent, comps)


def isbell_up_abstract(E: QCategory, phi: Presheaf) -> Copresheaf:
    """``x -> P E(phi, Y x)``."""
    return Copresheaf(E, phi.extent, {x: fast_presheaf_hom(phi, representable(E, x)) for x in E.ids})


def isbell_down_abstract(E: QCategory, psi: Copresheaf) -> Presheaf:
    """``y -> P+ E(Y+ y, psi)``."""
    return Presheaf(E, psi.extent, {y: fast_copresheaf_hom(corepresentable(E, y), psi) for y in E.ids})


def lifting_by_duality(E: QCategory, prob: LiftingProblem) -> list[str]:
    """Final problems as initial liftings of the upper bounds, and dually."""
    check_problem(E, prob)
    if prob.direction == "final":
        up = isbell_up(E, generated_sieve(E, prob))
        return initial_lifting(E, LiftingProblem("initial", prob.apex, sieve_legs(up)))
    down = isbell_down(E, generated_cosieve(E, prob))
    return final_lifting(E, LiftingProblem("final", prob.apex, sieve_legs(down)))


@dataclass
class MainTheoremReport:
    """The four equivalent predicates and whether they agree."""

    predicates: dict[str, bool]
    counterexamples: dict[str, object] = field(default_factory=dict)

    @property
    def agree(self) -> bool:
        return len(set(self.predicates.values())) == 1

    @property
    def value(self) -> bool:
        return all(self.predicates.values())

    def __str__(self):
        body = ", ".join(f"{k}={v}" for k, v in self.predicates.items())
        return f"{'agree' if self.agree else 'DISAGREE'}: {body}"


def main_theorem_check(E: QCategory, cap: int = DEFAULT_CAP) -> MainTheoremReport:
    """Evaluate (i) final liftings of generating families, (ii) sieve liftings,
    (iii) a left adjoint to Yoneda and (iv) totality, each on its own route."""
    P, Y = presheaf_category(E, cap)
    cex = {}
    lifts = True
    for phi in P.presheaves:
        sp = _sieves.space(E, phi.extent)
        legs = tuple(sp.elems[i] for i in sp.generators(phi.mask))
        if not final_lifting(E, LiftingProblem("final", phi.extent, legs)):
            lifts = False
            cex["families"] = LiftingProblem("final", phi.extent, legs)
            break
    top = is_topological(E, cap)
    adj = left_adjoint(Y)
    tot = is_total(E, cap)
    if not top:
        cex["topological"] = top.counterexample
    if not adj:
        cex["yoneda_left_adjoint"] = adj.counterexample
    if not tot:
        cex["total"] = tot.counterexample
    preds = {"families": lifts, "topological": top.value, "yoneda_left_adjoint": bool(adj), "total": tot.value}
    return MainTheoremReport(preds, cex)
