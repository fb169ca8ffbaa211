import json

import pytest

from freeqcat.base import terminal_category, validate_category
from freeqcat.harness import (
    GenConfig,
    SuiteReport,
    CaseResult,
    check_case,
    conformance,
    gen_instance,
    pinned_instances,
    saturate,
)
from freeqcat.qcategory import QCategory, validate_qcategory


def test_deterministic_under_seed():
    cfg = GenConfig(seed=7)
    a = [gen_instance(cfg, i).to_json() for i in range(30)]
    b = [gen_instance(cfg, i).to_json() for i in range(30)]
    assert a == b
    c = [gen_instance(GenConfig(seed=8), i).to_json() for i in range(30)]
    assert a != c


def test_thousand_samples_are_valid():
    cfg = GenConfig(seed=1)
    for i in range(1000):
        E = gen_instance(cfg, i)
        assert validate_category(E.base).ok
        assert validate_qcategory(E).ok
        assert len(E.base.objects) <= cfg.max_base_objects
        assert len(E.base.morphisms) <= cfg.max_base_morphisms
        assert len(E) <= cfg.max_fiber_objects


def test_bases_are_not_all_trivial():
    cfg = GenConfig(seed=3)
    sizes = {len(gen_instance(cfg, i).base.morphisms) for i in range(200)}
    assert 1 in sizes and max(sizes) > 2


def test_smallest_config_gives_the_terminal_category():
    cfg = GenConfig(seed=0, max_base_objects=1, max_base_morphisms=1, max_fiber_objects=1)
    for i in range(50):
        E = gen_instance(cfg, i)
        assert E.base == terminal_category()
        assert len(E) == 1


def test_bad_config():
    with pytest.raises(ValueError):
        GenConfig(max_fiber_objects=0)


def test_saturate_closes_under_composition():
    B = terminal_category()
    homs = saturate(B, {("a", "b"): {"id"}, ("b", "c"): {"id"}}, ["a", "b", "c"])
    assert homs[("a", "c")] == {"id"}


def test_pinned_cases():
    names = [n for n, _ in pinned_instances()]
    assert names == ["E_AC", "E_CH", "E_X", "P(E_X)"]
    for _, E in pinned_instances():
        assert all(check_case(E).values())


def test_conformance_small_run(tmp_path):
    rep = conformance(GenConfig(seed=5), 20, out_dir=tmp_path)
    assert len(rep.cases) == 24
    assert rep.ok and rep.skipped == 0 and rep.checked == 24
    assert "24 cases" in rep.summary()
    assert json.loads(json.dumps(rep.to_json()))["failed"] == 0
    assert list(tmp_path.iterdir()) == []


def test_cap_skips_are_counted():
    rep = conformance(GenConfig(seed=5, presheaf_cap=2), 10)
    assert rep.skipped > 0
    assert rep.ok
    assert rep.checked + rep.skipped == 14


def test_parallel_matches_serial():
    a = conformance(GenConfig(seed=9), 12).to_json()
    b = conformance(GenConfig(seed=9), 12, parallel=2).to_json()
    assert a == b


def test_counterexample_file_round_trip(tmp_path, monkeypatch):
    import freeqcat.harness as h

    real = h.check_case
    monkeypatch.setattr(h, "check_case", lambda E, cap: {**real(E, cap), "forced": len(E) != 2})
    rep = h.conformance(GenConfig(seed=5), 6, out_dir=tmp_path)
    assert rep.failed
    for c in rep.failed:
        data = json.loads(open(c.counterexample_file).read())
        E = QCategory.from_json(data)
        assert len(E) == 2
        assert f"counterexample-5-{c.index}.json" in c.counterexample_file


def test_report_accounting():
    rep = SuiteReport([CaseResult(0, "a", {"x": True}), CaseResult(1, "b", skipped="cap"), CaseResult(2, "c", {"x": False})])
    assert rep.skipped == 1 and rep.checked == 2 and len(rep.failed) == 1 and not rep.ok
