"""Command-line interface.

Subcommands::

    plic analyze   INSTANCE   structural + classification report (chain
                              and oracle sections when affordable)
    plic construct INSTANCE   build and verify a matching code
    plic verify    INSTANCE CODE   check a code against an instance
    plic sweep     --m M --k K     cross-check every k-absent family

Reports are JSON documents with top-level ``"schema": "pliable-bound/1"``
printed to stdout.  Identical invocations produce byte-identical output
when ``--no-timing`` strips the wall-clock field.

Exit codes: 0 success; 1 unreadable or invalid input; 2 an enumeration
budget or guard was exceeded (a partial report is still printed);
3 internal invariant violation; 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from typing import Any

from . import __version__, bitset
from .chain import l_star
from .classify import classify
from .codes import construct_for, parse_code, serialize_code, verify_code
from .errors import (
    BudgetExceeded,
    OracleBudgetExceeded,
    PicError,
    SearchSpaceTooLarge,
    TheoremViolation,
)
from .instance import Partition, PicInstance, from_absent_masks, parse_instance
from .oracle import crosscheck, exact_linear_rate, subspace_count
from .structure import longest_nested_chain, smallest_breakable_bound

SCHEMA = "pliable-bound/1"
DEFAULT_CLI_BUDGET = 100_000

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_BUDGET = 2
EXIT_INTERNAL = 3
EXIT_VERIFY = 4


def _indices(mask: int) -> list[int]:
    return list(bitset.indices_of(mask))


def _family(masks) -> list[list[int]]:
    return sorted(
        (_indices(h) for h in masks), key=lambda t: (len(t), t)
    )


def _params_json(params: dict[str, Any]) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key, value in params.items():
        if isinstance(value, Partition):
            out[key] = {
                "p0": _indices(value.p0),
                "parts": [_indices(p) for p in value.parts],
            }
        elif isinstance(value, frozenset):
            out[key] = sorted(value)
        elif key == "htilde":
            out[key] = _indices(value)
        elif isinstance(value, tuple):
            out[key] = list(value)
        else:
            out[key] = value
    return out


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise PicError(f"cannot read {path}: {exc}") from exc


def _emit(report: dict[str, Any], args: argparse.Namespace, started: float) -> None:
    if not getattr(args, "no_timing", False):
        report["timing"] = {"seconds": round(time.perf_counter() - started, 6)}
    if getattr(args, "pretty", False):
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(json.dumps(report, separators=(",", ":"), sort_keys=True))


def _base_report(command: str, inst: PicInstance | None = None) -> dict[str, Any]:
    report: dict[str, Any] = {
        "schema": SCHEMA,
        "tool": {"name": "plic", "version": __version__},
        "command": command,
    }
    if inst is not None:
        report["instance"] = {
            "m": inst.m,
            "absent": _family(inst.absent),
            "present_count": len(inst.present),
        }
    return report


def _structure_section(inst: PicInstance) -> dict[str, Any]:
    l_max, witness = longest_nested_chain(inst)
    sharpened = smallest_breakable_bound(inst)
    lower = inst.m - l_max
    if sharpened is not None and sharpened > lower:
        lower = sharpened
    return {
        "l_max": l_max,
        "longest_chain": [_indices(h) for h in witness.sets],
        "smallest_breakable_l": (
            inst.m - sharpened + 1 if sharpened is not None else None
        ),
        "breakable_bound": sharpened,
        "lower_bound": lower,
    }


def _classify_section(inst: PicInstance) -> dict[str, Any]:
    rr = classify(inst)
    return {
        "lower": rr.lower,
        "upper": rr.upper,
        "exact": rr.exact,
        "provenance": rr.provenance,
        "params": _params_json(rr.params),
    }


def cmd_analyze(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    inst = parse_instance(_read(args.instance))
    report = _base_report("analyze", inst)
    report["structure"] = _structure_section(inst)
    report["classify"] = _classify_section(inst)

    chain_required = math.prod(
        inst.m - h.bit_count() for h in inst.present
    ) * (1 << inst.m)
    if args.chain == "off":
        report["chain"] = {"computed": False, "reason": "disabled"}
    elif chain_required > args.budget:
        report["chain"] = {
            "computed": False,
            "reason": "budget",
            "required": chain_required,
            "budget": args.budget,
        }
        if args.chain == "force":
            report["error"] = {
                "type": "BudgetExceeded",
                "what": "decoding-choice enumeration",
                "required": chain_required,
                "budget": args.budget,
            }
            _emit(report, args, started)
            return EXIT_BUDGET
    else:
        result = l_star(inst, args.budget)
        report["chain"] = {
            "computed": True,
            "l_star": result.value,
            "lower_bound": inst.m - result.value,
            "choices": result.choices,
            "evaluations": result.evaluations,
        }

    oracle_required = subspace_count(inst.m, args.q) * ((1 << inst.m) - 1)
    guard_ok = (args.q == 2 and inst.m <= 7) or (args.q <= 5 and inst.m <= 5)
    if args.oracle == "off":
        report["oracle"] = {"computed": False, "reason": "disabled"}
    elif oracle_required > args.budget or not guard_ok:
        report["oracle"] = {
            "computed": False,
            "reason": "budget" if guard_ok else "guard",
            "required": oracle_required,
            "budget": args.budget,
        }
        if args.oracle == "force":
            report["error"] = {
                "type": "BudgetExceeded",
                "what": "subspace enumeration",
                "required": oracle_required,
                "budget": args.budget,
            }
            _emit(report, args, started)
            return EXIT_BUDGET
    else:
        result = exact_linear_rate(inst, args.q)
        report["oracle"] = {
            "computed": True,
            "q": args.q,
            "rate": result.rate,
            "search_space": result.search_space,
        }
    _emit(report, args, started)
    return EXIT_OK


def cmd_construct(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    inst = parse_instance(_read(args.instance))
    rr = classify(inst)
    code = construct_for(inst, rr)
    outcome = verify_code(inst, code)
    if not outcome.ok:
        raise TheoremViolation(
            "constructed code failed verification: "
            f"{[_indices(h) for h in outcome.unsatisfied]}"
        )
    report = _base_report("construct", inst)
    report["classify"] = _classify_section(inst)
    report["code"] = {
        "q": code.field.q,
        "length": code.length,
        "rows": [list(row) for row in code.rows],
        "verified": True,
    }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(serialize_code(code, pretty=args.pretty))
            fh.write("\n")
        report["code"]["path"] = args.out
    _emit(report, args, started)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    inst = parse_instance(_read(args.instance))
    code = parse_code(_read(args.code), m=inst.m)
    outcome = verify_code(inst, code)
    report = _base_report("verify", inst)
    report["code"] = {"q": code.field.q, "length": code.length}
    report["verified"] = outcome.ok
    report["receivers"] = [
        {"side_information": _indices(r.receiver), "decodable": list(r.decodable)}
        for r in outcome.receivers
    ]
    report["unsatisfied"] = [_indices(h) for h in outcome.unsatisfied]
    _emit(report, args, started)
    return EXIT_OK if outcome.ok else EXIT_VERIFY


def cmd_sweep(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    if args.m > 4:
        raise SearchSpaceTooLarge(
            f"oracle sweeps are supported up to m=4, got m={args.m}"
        )
    universe = bitset.sort_canonical(range(1, bitset.full_mask(args.m)))
    if not 0 <= args.k <= len(universe):
        raise PicError(
            f"k={args.k} out of range 0..{len(universe)} for m={args.m}"
        )
    import itertools

    count = 0
    rate_histogram: dict[int, int] = {}
    provenance_histogram: dict[str, int] = {}
    exact_count = 0
    failures: list[str] = []
    budget = args.budget if args.lstar else None
    for fam in itertools.combinations(universe, args.k):
        inst = from_absent_masks(args.m, fam)
        count += 1
        try:
            report = crosscheck(inst, args.q, lstar_budget=budget)
        except TheoremViolation as exc:
            failures.append(f"{_family(fam)}: {exc}")
            continue
        rr = report.classification
        rate_histogram[report.oracle_rate] = (
            rate_histogram.get(report.oracle_rate, 0) + 1
        )
        provenance_histogram[rr.provenance] = (
            provenance_histogram.get(rr.provenance, 0) + 1
        )
        if rr.exact:
            exact_count += 1
    report = _base_report("sweep")
    report.update(
        {
            "m": args.m,
            "k": args.k,
            "q": args.q,
            "count": count,
            "passes": count - len(failures),
            "failures": failures[:20],
            "failure_count": len(failures),
            "exact_count": exact_count,
            "rate_histogram": {str(k): v for k, v in sorted(rate_histogram.items())},
            "provenance_histogram": dict(sorted(provenance_histogram.items())),
        }
    )
    _emit(report, args, started)
    return EXIT_OK if not failures else EXIT_INTERNAL


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plic",
        description=(
            "Broadcast-rate bounds, exact-rate classification, and verified "
            "code constructions for pliable index coding with absent receivers."
        ),
    )
    parser.add_argument("--version", action="version", version=f"plic {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--pretty", action="store_true", help="indent the report")
        p.add_argument(
            "--no-timing",
            action="store_true",
            help="omit the wall-clock field for byte-identical reports",
        )

    p_analyze = sub.add_parser("analyze", help="bounds and classification report")
    p_analyze.add_argument("instance", help="instance JSON file")
    p_analyze.add_argument("--q", type=int, default=2, help="oracle field (default 2)")
    p_analyze.add_argument(
        "--budget",
        type=int,
        default=DEFAULT_CLI_BUDGET,
        help=f"state-evaluation budget for chain/oracle (default {DEFAULT_CLI_BUDGET})",
    )
    group = p_analyze.add_mutually_exclusive_group()
    group.add_argument(
        "--oracle",
        dest="oracle",
        action="store_const",
        const="force",
        default="auto",
        help="require the exact oracle (exit 2 if over budget)",
    )
    group.add_argument(
        "--no-oracle", dest="oracle", action="store_const", const="off"
    )
    group_chain = p_analyze.add_mutually_exclusive_group()
    group_chain.add_argument(
        "--chain",
        dest="chain",
        action="store_const",
        const="force",
        default="auto",
        help="require the exhaustive chain bound (exit 2 if over budget)",
    )
    group_chain.add_argument(
        "--no-chain", dest="chain", action="store_const", const="off"
    )
    common(p_analyze)
    p_analyze.set_defaults(func=cmd_analyze)

    p_construct = sub.add_parser("construct", help="build and verify a code")
    p_construct.add_argument("instance", help="instance JSON file")
    p_construct.add_argument("--out", help="write the code JSON here")
    common(p_construct)
    p_construct.set_defaults(func=cmd_construct)

    p_verify = sub.add_parser("verify", help="check a code against an instance")
    p_verify.add_argument("instance", help="instance JSON file")
    p_verify.add_argument("code", help="code JSON file")
    common(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_sweep = sub.add_parser(
        "sweep", help="cross-check all k-absent families of nonempty proper subsets"
    )
    p_sweep.add_argument("--m", type=int, required=True)
    p_sweep.add_argument("--k", type=int, required=True)
    p_sweep.add_argument("--q", type=int, default=2)
    p_sweep.add_argument(
        "--lstar", action="store_true", help="include the chain bound per instance"
    )
    p_sweep.add_argument(
        "--budget", type=int, default=DEFAULT_CLI_BUDGET, help="chain-bound budget"
    )
    common(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BudgetExceeded, SearchSpaceTooLarge, OracleBudgetExceeded) as exc:
        _print_error(exc)
        return EXIT_BUDGET
    except TheoremViolation as exc:
        _print_error(exc)
        return EXIT_INTERNAL
    except PicError as exc:
        _print_error(exc)
        return EXIT_INPUT
    except Exception as exc:  # pragma: no cover - safety net
        _print_error(exc)
        return EXIT_INTERNAL


def _print_error(exc: Exception) -> None:
    doc = {
        "schema": SCHEMA,
        "error": {"type": type(exc).__name__, "message": str(exc)},
    }
    if isinstance(exc, BudgetExceeded):
        doc["error"]["required"] = exc.required
        doc["error"]["budget"] = exc.budget
    print(json.dumps(doc, separators=(",", ":"), sort_keys=True))


if __name__ == "__main__":
    sys.exit(main())
