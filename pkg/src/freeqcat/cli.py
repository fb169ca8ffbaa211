"""Command-line entry point.

Exit codes: 0 true or success, 1 false or counterexample, 2 usage or I/O
error, 3 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .base import FinCategory, validate_category
from .harness import GenConfig, conformance
from .limits import is_cototal, is_total, left_adjoint, right_adjoint
from .macneille import cuts, is_codense, is_dense, macneille
from .presheaves import DEFAULT_CAP, Copresheaf, Presheaf, enumerate_presheaves
from .qcategory import QCategory, QFunctor, validate_qcategory
from .reports import CapExceededError
from .topological import (
    LiftingProblem,
    final_lifting,
    initial_lifting,
    is_topological,
    isbell_down,
    isbell_up,
    main_theorem_check,
)

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read_json(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return json.loads(text)


def _load_qcat(path: str) -> QCategory:
    data = _read_json(path)
    if "base" not in data or "objects" not in data:
        raise UsageError(f"{path}: not a Q-category file")
    return QCategory.from_json(data)


def _load_functor(path: str) -> QFunctor:
    data = _read_json(path)
    if "embedding" in data:
        cod = QCategory.from_json(data)
        emb = data["embedding"]
        dom = QCategory.from_json(emb["dom"], base=cod.base)
        return QFunctor(dom, cod, dict(emb["object_map"]))
    if {"dom", "cod", "object_map"} <= data.keys():
        dom = QCategory.from_json(data["dom"])
        cod = QCategory.from_json(data["cod"], base=dom.base)
        return QFunctor(dom, cod, dict(data["object_map"]))
    raise UsageError(f"{path}: not a functor file")


class Out:
    def __init__(self, as_json: bool):
        self.as_json = as_json

    def emit(self, text: str, data):
        if self.as_json:
            print(json.dumps(data, sort_keys=True))
        else:
            print(text)


def _verdict(value: bool) -> int:
    return EXIT_TRUE if value else EXIT_FALSE


def cmd_validate(args, out: Out) -> int:
    data = _read_json(args.file)
    if "composition" in data and "base" not in data:
        report = validate_category(FinCategory.from_json(data))
    else:
        E = QCategory.from_json(data)
        report = validate_category(E.base)
        if report.ok:
            report = validate_qcategory(E)
    out.emit(
        str(report),
        {"ok": report.ok, "violations": [[v.kind, list(v.witness)] for v in report]},
    )
    return _verdict(report.ok)


def cmd_presheaves(args, out: Out) -> int:
    E = _load_qcat(args.qcat)
    found = enumerate_presheaves(E, args.extent, cap=args.cap)
    items = [p.to_json() for p in found]
    out.emit("\n".join(json.dumps(p, sort_keys=True) for p in items), items)
    return EXIT_TRUE


def _parse_leg(text: str) -> tuple[str, str]:
    x, sep, g = text.rpartition(":")
    if not sep or not x:
        raise UsageError(f"leg {text!r} must look like OBJECT:MORPHISM")
    return x, g


def cmd_lift(args, out: Out) -> int:
    E = _load_qcat(args.qcat)
    prob = LiftingProblem(args.direction, args.apex, [_parse_leg(s) for s in args.leg or []])
    found = final_lifting(E, prob) if args.direction == "final" else initial_lifting(E, prob)
    out.emit("\n".join(found) if found else "no lifting", {"witnesses": found})
    return _verdict(bool(found))


def cmd_isbell(args, out: Out) -> int:
    E = _load_qcat(args.qcat)
    data = _read_json(args.file)
    if args.direction == "up":
        res = isbell_up(E, Presheaf.from_json(E, data))
    else:
        res = isbell_down(E, Copresheaf.from_json(E, data))
    out.emit(json.dumps(res.to_json(), sort_keys=True), res.to_json())
    return EXIT_TRUE


def _show(item):
    if isinstance(item, (Presheaf, Copresheaf)):
        return item.to_json()
    return list(item) if isinstance(item, tuple) else item


def cmd_check(args, out: Out) -> int:
    E = _load_qcat(args.qcat)
    if args.property == "cuts":
        found = [p.to_json() for p in cuts(E, args.cap)]
        out.emit("\n".join(json.dumps(p, sort_keys=True) for p in found), found)
        return EXIT_TRUE
    decide = {"topological": is_topological, "total": is_total, "cototal": is_cototal}[args.property]
    d = decide(E, args.cap)
    cex = None if d.value else _show(d.counterexample)
    text = "true" if d.value else "false\ncounterexample: " + json.dumps(cex, sort_keys=True)
    out.emit(text, {"value": d.value, "counterexample": cex})
    return _verdict(d.value)


def cmd_complete(args, out: Out) -> int:
    E = _load_qcat(args.qcat)
    M = macneille(E, args.cap)
    data = M.completion.to_json()
    data["embedding"] = {"dom": E.to_json(), "object_map": dict(sorted(M.embedding.object_map.items()))}
    data["cuts"] = {p.id: p.to_json() for p in M.cut_index}
    text = json.dumps(data, sort_keys=True, indent=1)
    if args.output and args.output != "-":
        Path(args.output).write_text(text)
        out.emit(f"wrote {len(M.cut_index)} cuts to {args.output}", {"cuts": len(M.cut_index), "path": args.output})
    else:
        print(text)
    return EXIT_TRUE


def cmd_dense(args, out: Out) -> int:
    F = _load_functor(args.functor)
    d = is_codense(F, args.cap) if args.codense else is_dense(F, args.cap)
    text = "true" if d.value else f"false\ncounterexample: {d.counterexample}"
    out.emit(text, {"value": d.value, "counterexample": d.counterexample, "characterizations": d.detail})
    return _verdict(d.value)


def cmd_adjoint(args, out: Out) -> int:
    F = _load_functor(args.functor)
    res = left_adjoint(F) if args.side == "left" else right_adjoint(F)
    if res:
        omap = dict(sorted(res.functor.object_map.items()))
        text = "\n".join(f"{d} -> {c}" for d, c in omap.items())
        out.emit(text, {"object_map": omap, "sources": res.sources, "certified": res.certified})
        return EXIT_TRUE
    out.emit(f"none\ncounterexample: {res.counterexample}", {"object_map": None, "counterexample": res.counterexample})
    return EXIT_FALSE


def cmd_fuzz(args, out: Out) -> int:
    cfg = GenConfig(
        seed=args.seed,
        max_base_objects=args.max_base_objects,
        max_base_morphisms=args.max_base_morphisms,
        max_fiber_objects=args.max_fiber_objects,
        presheaf_cap=args.cap,
    )
    report = conformance(cfg, args.cases, out_dir=args.out, parallel=args.parallel)
    lines = [report.summary()] + [
        f"case {c.index} ({c.name}) failed: {c.checks} -> {c.counterexample_file}" for c in report.failed
    ]
    out.emit("\n".join(lines), report.to_json())
    return _verdict(report.ok)


def cmd_main_theorem(args, out: Out) -> int:
    E = _load_qcat(args.qcat)
    rep = main_theorem_check(E, args.cap)
    out.emit(str(rep), {"agree": rep.agree, "predicates": rep.predicates})
    return _verdict(rep.agree)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="print canonical JSON")
    common.add_argument("--cap", type=int, default=argparse.SUPPRESS, help="presheaf enumeration cap")
    common.add_argument("--parallel", type=int, default=argparse.SUPPRESS, help="worker processes")

    parser = argparse.ArgumentParser(prog="freeqcat", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="validate a category or Q-category file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("presheaves", parents=[common], help="list presheaves in canonical order")
    p.add_argument("qcat")
    p.add_argument("--extent")
    p.set_defaults(func=cmd_presheaves)

    p = sub.add_parser("lift", parents=[common], help="final or initial liftings")
    p.add_argument("direction", choices=["final", "initial"])
    p.add_argument("qcat")
    p.add_argument("--apex", required=True)
    p.add_argument("--leg", action="append", metavar="X:G")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("isbell", parents=[common], help="upper or lower bounds")
    p.add_argument("direction", choices=["up", "down"])
    p.add_argument("qcat")
    p.add_argument("file", help="presheaf (up) or copresheaf (down) file")
    p.set_defaults(func=cmd_isbell)

    p = sub.add_parser("check", parents=[common], help="decide a property")
    p.add_argument("property", choices=["topological", "total", "cototal", "cuts"])
    p.add_argument("qcat")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("complete", parents=[common], help="MacNeille completion")
    p.add_argument("qcat")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("dense", parents=[common], help="density of a functor")
    p.add_argument("functor")
    p.add_argument("--codense", action="store_true")
    p.set_defaults(func=cmd_dense)

    p = sub.add_parser("adjoint", parents=[common], help="left or right adjoint of a functor")
    p.add_argument("side", choices=["left", "right"])
    p.add_argument("functor")
    p.set_defaults(func=cmd_adjoint)

    p = sub.add_parser("fuzz", parents=[common], help="run the conformance suite")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--cases", type=int, default=200)
    p.add_argument("--max-base-objects", type=int, default=3)
    p.add_argument("--max-base-morphisms", type=int, default=8)
    p.add_argument("--max-fiber-objects", type=int, default=4)
    p.add_argument("--out", help="directory for counterexample files")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("main-theorem", parents=[common], help="evaluate the four equivalent predicates")
    p.add_argument("qcat")
    p.set_defaults(func=cmd_main_theorem)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_TRUE
    # the flags are shared by every subparser, so defaults are filled in here
    for name, value in (("json", False), ("cap", DEFAULT_CAP), ("parallel", 1)):
        if not hasattr(args, name):
            setattr(args, name, value)
    out = Out(args.json)
    try:
        return args.func(args, out)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (OSError, json.JSONDecodeError, KeyError, ValueError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
