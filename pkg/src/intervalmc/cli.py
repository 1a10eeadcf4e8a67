"""Command-line front end.

Exit codes: 0 holds, 1 fails, 2 input error, 3 formula outside the
selected engine's fragment, 4 approximate verdict (bounded oracle on a
formula it cannot decide exactly).
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import class_checker, descriptor_checker, logic, model, oracle, reductions
from .errors import IntervalMCError

EXIT_HOLDS = 0
EXIT_FAILS = 1
EXIT_INPUT_ERROR = 2
EXIT_FRAGMENT = 3
EXIT_APPROXIMATE = 4


def _load_model(path):
    with open(path, "r", encoding="utf-8") as handle:
        return model.parse_kripke(handle.read())


def _load_formula(args):
    if args.formula is not None:
        return logic.parse_formula(args.formula)
    with open(args.formula_file, "r", encoding="utf-8") as handle:
        return logic.parse_formula(handle.read())


def _emit(report, as_json):
    if as_json:
        print(json.dumps(report, sort_keys=True))
        return
    print(f"result: {report['result']}")
    print(f"engine: {report['engine']}")
    if report["counterexample"] is not None:
        print("counterexample: " + " ".join(report["counterexample"]))
    if report["bound"] is not None:
        print(f"bound: {report['bound']}")
    for key in sorted(report["stats"]):
        print(f"stats.{key}: {report['stats'][key]}")


def cmd_check(args) -> int:
    try:
        K = _load_model(args.model)
        phi = _load_formula(args)
    except (IntervalMCError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    desugared = logic.desugar(phi)
    frag = logic.classify(desugared)

    engine = args.engine
    if engine == "auto":
        if frag.forall_aabe:
            engine = "descriptor"
        elif frag.ab_bar:
            engine = "class"
        else:
            engine = "oracle"
    if engine == "descriptor" and not frag.forall_aabe:
        print("error: formula is not in the ForallAABE fragment", file=sys.stderr)
        return EXIT_FRAGMENT
    if engine == "class" and not frag.ab_bar:
        print("error: formula is not in the ABbar fragment", file=sys.stderr)
        return EXIT_FRAGMENT

    started = time.monotonic()
    bound = None
    if engine == "descriptor":
        verdict = descriptor_checker.model_check_univ(K, desugared)
        result, counterexample, stats = verdict.result, verdict.counterexample, verdict.stats
    elif engine == "class":
        verdict = class_checker.check_ab(K, desugared)
        result, counterexample, stats = verdict.result, verdict.counterexample, verdict.stats
    else:
        bound = args.bound if args.bound is not None else oracle.default_bound(K, desugared)
        if bound < 2:
            print("error: --bound must be at least 2", file=sys.stderr)
            return EXIT_INPUT_ERROR
        bv = oracle.model_check_bounded(K, desugared, bound)
        counterexample = None
        stats = {}
        if not bv.value and frag.forall_aabe:
            # A bounded refutation of a universal-fragment formula is exact.
            result = "fails"
            counterexample = bv.failing_track
        elif bv.value:
            result = "approximate-true"
        else:
            result = "approximate-false"
    stats = dict(stats)
    stats["time_ms"] = round((time.monotonic() - started) * 1000, 3)

    if counterexample is not None and not (
        model.is_track(K, counterexample) and counterexample[0] == K.init
    ):
        print("error: internal counterexample failed re-validation", file=sys.stderr)
        return EXIT_INPUT_ERROR
    report = {
        "result": result,
        "engine": engine,
        "counterexample": list(counterexample) if counterexample is not None else None,
        "stats": stats,
        "bound": bound,
    }
    if engine == "descriptor" and result == "fails" and _looks_like_sat_instance(K):
        variables = sorted(K.ap)
        report["stats"]["assignment"] = {
            v: reductions.decode_sat_assignment(variables, K, counterexample)[v]
            for v in variables
        }
    _emit(report, args.json)
    if result == "holds":
        return EXIT_HOLDS
    if result == "fails":
        return EXIT_FAILS
    return EXIT_APPROXIMATE


def _looks_like_sat_instance(K) -> bool:
    if K.init != "w0" or not K.ap:
        return False
    expected = {"w0"}
    for i in range(1, len(K.ap) + 1):
        expected |= {f"w{i}_T", f"w{i}_F"}
    return set(K.states) == expected


def cmd_gen_sat(args) -> int:
    try:
        with open(args.dimacs, "r", encoding="utf-8") as handle:
            cnf = reductions.parse_dimacs(handle.read())
    except (IntervalMCError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    K, gamma = reductions.build_sat_instance(cnf)
    _write_instance(args.out_model, args.out_formula, K, gamma)
    print(f"|W|={len(K.states)} |delta|={len(K.edges)} |pl|={len(logic.prop_letters(gamma))}")
    return EXIT_HOLDS


def cmd_gen_qbf(args) -> int:
    try:
        with open(args.qdimacs, "r", encoding="utf-8") as handle:
            qbf = reductions.parse_qdimacs(handle.read())
    except (IntervalMCError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    K, xi = reductions.build_qbf_instance(qbf)
    _write_instance(args.out_model, args.out_formula, K, xi)
    print(f"|W|={len(K.states)} |delta|={len(K.edges)} |pl|={len(logic.prop_letters(xi))}")
    return EXIT_HOLDS


def _write_instance(model_path, formula_path, K, phi):
    with open(model_path, "w", encoding="utf-8") as handle:
        handle.write(model.format_kripke(K))
    with open(formula_path, "w", encoding="utf-8") as handle:
        handle.write(logic.to_text(phi) + "\n")


def cmd_classify(args) -> int:
    try:
        phi = logic.parse_formula(args.formula)
    except IntervalMCError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    frag = logic.classify(logic.desugar(phi))
    names = frag.names()
    if args.json:
        print(
            json.dumps(
                {
                    "fragments": list(names),
                    "modalities": sorted(m.text for m in frag.modalities),
                },
                sort_keys=True,
            )
        )
    else:
        print(" ".join(names) if names else "none")
    return EXIT_HOLDS


def cmd_descriptors(args) -> int:
    try:
        K = _load_model(args.model)
        direction = {"fwd": "forward", "bwd": "backward"}[args.dir]
        found = model.witnessed_descriptors(K, args.state, direction)
    except (IntervalMCError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    for d in found:
        witness = model.shortest_witness(K, d)
        print(f"{d!r} witness_len={len(witness)}")
    return EXIT_HOLDS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intervalmc",
        description="Model checking for interval temporal logic fragments over finite Kripke structures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="model check a formula against a structure")
    check.add_argument("--model", required=True)
    group = check.add_mutually_exclusive_group(required=True)
    group.add_argument("--formula")
    group.add_argument("--formula-file")
    check.add_argument(
        "--engine", choices=("auto", "descriptor", "class", "oracle"), default="auto"
    )
    check.add_argument("--bound", type=int)
    check.add_argument("--json", action="store_true")
    check.set_defaults(func=cmd_check)

    gen_sat = sub.add_parser("gen-sat", help="build a checking instance from a DIMACS file")
    gen_sat.add_argument("--dimacs", required=True)
    gen_sat.add_argument("--out-model", required=True)
    gen_sat.add_argument("--out-formula", required=True)
    gen_sat.set_defaults(func=cmd_gen_sat)

    gen_qbf = sub.add_parser("gen-qbf", help="build a checking instance from a QDIMACS file")
    gen_qbf.add_argument("--qdimacs", required=True)
    gen_qbf.add_argument("--out-model", required=True)
    gen_qbf.add_argument("--out-formula", required=True)
    gen_qbf.set_defaults(func=cmd_gen_qbf)

    classify_p = sub.add_parser("classify", help="print fragment membership of a formula")
    classify_p.add_argument("--formula", required=True)
    classify_p.add_argument("--json", action="store_true")
    classify_p.set_defaults(func=cmd_classify)

    descr = sub.add_parser("descriptors", help="list witnessed descriptor elements")
    descr.add_argument("--model", required=True)
    descr.add_argument("--state", required=True)
    descr.add_argument("--dir", choices=("fwd", "bwd"), default="fwd")
    descr.set_defaults(func=cmd_descriptors)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def entry():
    raise SystemExit(main())
