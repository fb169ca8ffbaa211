"""Random instances and the conformance suite."""

from __future__ import annotations

import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

from . import fixtures
from .base import FinCategory, Morphism, terminal_category, validate_category
from .limits import is_cototal, is_total
from .macneille import completion_properties
from .presheaves import DEFAULT_CAP, enumerate_copresheaves, presheaf_category
from .qcategory import QCategory, QObject, opposite_qcategory, validate_qcategory
from .quantaloid import QHom
from .reports import CapExceededError
from .topological import (
    is_topological,
    isbell_down,
    isbell_down_abstract,
    isbell_up,
    isbell_up_abstract,
    main_theorem_check,
)


@dataclass
class GenConfig:
    seed: int = 42
    max_base_objects: int = 3
    max_base_morphisms: int = 8
    max_fiber_objects: int = 4
    presheaf_cap: int = DEFAULT_CAP

    def __post_init__(self):
        for name in ("max_base_objects", "max_base_morphisms", "max_fiber_objects", "presheaf_cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")


def _rng(cfg: GenConfig, salt="") -> random.Random:
    return random.Random(f"{cfg.seed}:{salt}")


# ---------------------------------------------------------------- base categories

_OBJECT_NAMES = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
# endomorphism relations: idempotent e.e = e, involution s.s = 1
_MAX_WORDS = 64


def _normalize(word):
    out = []
    for g in word:
        if out and out[-1] == g:
            if g.startswith("e"):
                continue
            if g.startswith("s"):
                out.pop()
                continue
        out.append(g)
    return tuple(out)


def _free_category(objects, gens):
    """Normal-form words of the category generated by ``gens`` (name -> (src, dst))."""
    words = {(): None}
    typed = {}
    for o in objects:
        typed[("1", o)] = (o, o)
    frontier = [(o, ()) for o in objects]
    seen = {(o, ()) for o in objects}
    while frontier:
        src, w = frontier.pop()
        dst = gens[w[-1]][1] if w else src
        for g, (a, b) in gens.items():
            if a != dst:
                continue
            nw = _normalize(w + (g,))
            key = (src, nw)
            if key in seen:
                continue
            seen.add(key)
            if len(seen) > _MAX_WORDS:
                return None
            frontier.append(key)
    del words, typed
    out = {}
    for src, w in seen:
        dst = gens[w[-1]][1] if w else src
        out[src, w] = (src, dst)
    return out


def _quotient(morphs, compose, pairs_to_merge):
    parent = {m: m for m in morphs}

    def find(m):
        while parent[m] != m:
            parent[m] = parent[parent[m]]
            m = parent[m]
        return m

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            # keep the shorter word as representative
            if (len(rb[1]), rb) < (len(ra[1]), ra):
                ra, rb = rb, ra
            parent[rb] = ra
            return True
        return False

    for a, b in pairs_to_merge:
        union(a, b)
    composable = [(g, f) for g in morphs for f in morphs if morphs[f][1] == morphs[g][0]]
    changed = True
    while changed:
        changed = False
        table = {}
        for g, f in composable:
            key = (find(g), find(f))
            h = find(compose(g, f))
            if key in table and table[key] != h:
                changed |= union(table[key], h)
            else:
                table[key] = h
    return find


def gen_fin_category(cfg: GenConfig, rng: random.Random | None = None) -> FinCategory:
    """A random finite category: a free category on random generators, quotiented."""
    rng = _rng(cfg, "base") if rng is None else rng
    if rng.random() < 0.3:
        return terminal_category()
    for _ in range(200):
        B = _try_category(cfg, rng)
        if B is not None and validate_category(B).ok:
            return B
    return terminal_category()


def _try_category(cfg: GenConfig, rng: random.Random) -> FinCategory | None:
    n = rng.randint(1, min(cfg.max_base_objects, cfg.max_base_morphisms))
    if n == 1 and cfg.max_base_morphisms == 1:
        return terminal_category()
    objects = list(_OBJECT_NAMES[:n])
    gens = {}
    for i, j in product(range(n), repeat=2):
        if i < j:
            for _ in range(rng.choice([0, 0, 1, 1, 2])):
                gens[f"a{len(gens)}"] = (objects[i], objects[j])
    for o in objects:
        r = rng.random()
        if r < 0.2:
            gens[f"e{len(gens)}"] = (o, o)
        elif r < 0.35:
            gens[f"s{len(gens)}"] = (o, o)
    words = _free_category(objects, gens)
    if words is None:
        return None

    def compose(g, f):
        return (f[0], _normalize(f[1] + g[1]))

    parallel = [(a, b) for a in words for b in words if a < b and words[a] == words[b] and a[1] and b[1]]
    rng.shuffle(parallel)
    k = rng.randint(0, len(parallel)) if parallel else 0
    find = _quotient(words, compose, parallel[:k])
    classes = sorted({find(m) for m in words}, key=lambda m: (m[0], len(m[1]), m[1]))
    if len(classes) > cfg.max_base_morphisms:
        return None

    def name(m):
        return "1" + m[0] if not m[1] else ".".join(reversed(m[1]))

    morphisms = [Morphism(name(m), *words[m]) for m in classes]
    identities = {o: "1" + o for o in objects}
    composition = {}
    for g, f in product(classes, repeat=2):
        if words[f][1] == words[g][0]:
            composition[name(g), name(f)] = name(find(compose(g, f)))
    return FinCategory(tuple(objects), tuple(morphisms), identities, composition)


# ---------------------------------------------------------------- Q-categories


def saturate(B: FinCategory, homs: dict, ids) -> dict:
    """Least hom data containing ``homs`` and satisfying the identity and composition laws."""
    out = {k: set(v) for k, v in homs.items()}
    changed = True
    while changed:
        changed = False
        for x, y, z in product(ids, repeat=3):
            f_s, g_s = out.get((x, y)), out.get((y, z))
            if not f_s or not g_s:
                continue
            comp = {B.compose(g, f) for g in g_s for f in f_s}
            tgt = out.setdefault((x, z), set())
            if not comp <= tgt:
                tgt |= comp
                changed = True
    return out


def gen_qcategory(cfg: GenConfig, B: FinCategory, rng: random.Random | None = None) -> QCategory:
    """Random extents and hom subsets, closed under the composition law."""
    rng = _rng(cfg, "q") if rng is None else rng
    k = rng.randint(1, cfg.max_fiber_objects)
    ids = [f"x{i}" for i in range(k)]
    extent = {x: rng.choice(B.objects) for x in ids}
    density = rng.choice([0.2, 0.4, 0.6])
    homs = {}
    for x, y in product(ids, repeat=2):
        hs = {f for f in B.hom(extent[x], extent[y]) if rng.random() < density}
        if x == y:
            hs.add(B.identity(extent[x]))
        homs[x, y] = hs
    homs = saturate(B, homs, ids)
    E = QCategory(
        B,
        [QObject(x, extent[x]) for x in ids],
        {key: QHom(extent[key[0]], extent[key[1]], frozenset(v)) for key, v in homs.items() if v},
    )
    assert validate_qcategory(E).ok
    return E


def gen_instance(cfg: GenConfig, index: int) -> QCategory:
    rng = _rng(cfg, f"case-{index}")
    B = gen_fin_category(cfg, rng)
    return gen_qcategory(cfg, B, rng)


def pinned_instances() -> list[tuple[str, QCategory]]:
    ex = fixtures.E_X()
    P, _ = presheaf_category(ex)
    return [("E_AC", fixtures.E_AC()), ("E_CH", fixtures.E_CH()), ("E_X", ex), ("P(E_X)", P.materialize())]


# ---------------------------------------------------------------- conformance


def isbell_laws(E: QCategory, cap: int = DEFAULT_CAP) -> bool:
    P, _ = presheaf_category(E, cap)
    for phi in P.presheaves:
        up = isbell_up(E, phi)
        if up != isbell_up_abstract(E, phi) or isbell_up(E, isbell_down(E, up)) != up:
            return False
    for psi in enumerate_copresheaves(E, cap=cap):
        down = isbell_down(E, psi)
        if down != isbell_down_abstract(E, psi) or isbell_down(E, isbell_up(E, down)) != down:
            return False
    return True


def check_case(E: QCategory, cap: int = DEFAULT_CAP) -> dict[str, bool]:
    """All suite checks on one instance; raises ``CapExceededError`` when too large."""
    checks = {}
    report = main_theorem_check(E, cap)
    checks["main_theorem"] = report.agree
    Eop = opposite_qcategory(E)
    checks["topological_duality"] = is_topological(E, cap).value == is_topological(Eop, cap).value
    checks["total_duality"] = is_total(E, cap).value == is_cototal(E, cap).value
    checks["completion"] = completion_properties(E, cap).ok
    checks["isbell"] = isbell_laws(E, cap)
    return checks


@dataclass
class CaseResult:
    index: int
    name: str
    checks: dict[str, bool] = field(default_factory=dict)
    skipped: str | None = None
    counterexample_file: str | None = None

    @property
    def ok(self) -> bool:
        return self.skipped is not None or all(self.checks.values())


@dataclass
class SuiteReport:
    cases: list[CaseResult]

    @property
    def failed(self) -> list[CaseResult]:
        return [c for c in self.cases if not c.ok]

    @property
    def skipped(self) -> int:
        return sum(1 for c in self.cases if c.skipped)

    @property
    def checked(self) -> int:
        return len(self.cases) - self.skipped

    @property
    def ok(self) -> bool:
        return not self.failed

    def summary(self) -> str:
        return (
            f"{len(self.cases)} cases: {self.checked} checked, {self.skipped} skipped by cap, "
            f"{len(self.failed)} failed"
        )

    def to_json(self) -> dict:
        return {
            "cases": [
                {
                    "index": c.index,
                    "name": c.name,
                    "checks": c.checks,
                    "skipped": c.skipped,
                    "counterexample_file": c.counterexample_file,
                }
                for c in self.cases
            ],
            "checked": self.checked,
            "skipped": self.skipped,
            "failed": len(self.failed),
        }


def _run_case(args) -> CaseResult:
    index, name, data, cap = args
    E = QCategory.from_json(data)
    try:
        return CaseResult(index, name, check_case(E, cap))
    except CapExceededError as exc:
        return CaseResult(index, name, skipped=str(exc))


def suite_instances(cfg: GenConfig, n_cases: int) -> list[tuple[str, QCategory]]:
    cases = pinned_instances()
    cases += [(f"fuzz-{i}", gen_instance(cfg, i)) for i in range(n_cases)]
    return cases


def conformance(
    cfg: GenConfig, n_cases: int, out_dir: str | Path | None = None, parallel: int = 1
) -> SuiteReport:
    """Run every check on the pinned fixtures followed by ``n_cases`` random instances."""
    jobs = [(i, name, E.to_json(), cfg.presheaf_cap) for i, (name, E) in enumerate(suite_instances(cfg, n_cases))]
    if parallel > 1:
        with ProcessPoolExecutor(parallel) as pool:
            results = list(pool.map(_run_case, jobs, chunksize=4))
    else:
        results = [_run_case(job) for job in jobs]
    results.sort(key=lambda r: r.index)
    if out_dir is not None:
        out = Path(out_dir)
        for r, job in zip(results, jobs):
            if not r.ok:
                out.mkdir(parents=True, exist_ok=True)
                path = out / f"counterexample-{cfg.seed}-{r.index}.json"
                path.write_text(json.dumps(job[2], indent=1, sort_keys=True))
                r.counterexample_file = str(path)
    return SuiteReport(results)
