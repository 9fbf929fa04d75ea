"""Command-line front end.

Exit codes: 0 success, 1 a check ran and came out false, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Sequence

from . import formats
from .analyzer import (
    NormFiltrationModel,
    Ranks,
    check_p_power_lengths,
    structure_theorem_check,
    synthesize,
    theorem_ranks,
)
from .errors import FpgError, InternalCheckFailed
from .module import GroupSpec, decompose, jordan_type, restrict
from .oracle import DEFAULT_BUDGET, EnumerationBudget
from .sweeps import SweepConfig, format_report, run_selftest

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT = 0, 1, 2


class UsageError(FpgError):
    code = "usage"


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(args, text: str, payload: dict) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def cmd_jordan_type(args) -> int:
    X = formats.parse_module(_read(args.file))
    jt = jordan_type(X)
    _emit(args, f"{jt}\n", {"jordan_type": list(jt.parts), "dim": X.dim})
    return EXIT_OK


def cmd_decompose(args) -> int:
    X = formats.parse_module(_read(args.file))
    dec = decompose(X)
    lines = [f"type {dec.lengths()}"]
    for i, y in dec.all_generators():
        lines.append(f"length {i}: " + " ".join(map(str, y)))
    payload = {
        "jordan_type": list(dec.lengths().parts),
        "generators": [{"length": i, "vector": list(y)} for i, y in dec.all_generators()],
    }
    _emit(args, "\n".join(lines) + "\n", payload)
    return EXIT_OK


def cmd_restrict(args) -> int:
    X = formats.parse_module(_read(args.file))
    Y = restrict(X, args.level)
    jt = jordan_type(Y)
    _emit(
        args,
        f"{jt}\n",
        {"level": args.level, "subgroup_order": Y.group.order, "jordan_type": list(jt.parts)},
    )
    return EXIT_OK


def cmd_theorem_ranks(args) -> int:
    data = formats.parse_norm_data(_read(args.file))
    ranks = theorem_ranks(data)
    dim = ranks.dimension(data.group.p)
    _emit(args, f"ranks {ranks}\ndim {dim}\n", {"ranks": list(ranks.values), "dim": dim})
    return EXIT_OK


def cmd_synthesize(args) -> int:
    if args.file:
        data = formats.parse_norm_data(_read(args.file))
        group, ranks, m = data.group, theorem_ranks(data), data.m
    else:
        if args.p is None or args.n is None or args.ranks is None:
            raise UsageError("synthesize needs a norm data file or all of --p, --n, --ranks")
        group, ranks, m = GroupSpec(args.p, args.n), Ranks(args.ranks), 1
    model = synthesize(ranks, group, m)
    payload = {
        "p": group.p,
        "n": group.n,
        "ranks": list(ranks.values),
        "dim": model.module.dim,
        "norm_dims": [W.dim for W in model.W],
    }
    _emit(args, formats.format_model(model), payload)
    return EXIT_OK


def _model_table(model: NormFiltrationModel, report) -> list[str]:
    X = model.module
    lines = [f"model p={X.p} n={X.group.n} dim={X.dim}"]
    for problem in report.filtration.model_problems:
        lines.append(f"invalid: {problem}")
    lines.append("j  level  dim(filtration)  dim(W)  W-included  result")
    for c in report.filtration.checks:
        lines.append(
            f"{c.j:<2} {c.level:<6} {c.filtration.dim:<16} {c.norm_image.dim:<7} "
            f"{'yes' if c.inclusion else 'no':<11} {'pass' if c.passed else 'FAIL'}"
        )
        if not c.passed:
            lines.append(f"   filtration basis: {[list(v) for v in c.filtration.vectors]}")
            lines.append(f"   W_{c.level} basis:      {[list(v) for v in c.norm_image.vectors]}")
    failed = report.filtration.failed_at
    if report.filtration.passed:
        lines.append("lemma: pass")
    elif failed:
        lines.append("lemma: FAIL at j=" + ",".join(map(str, failed)))
    else:
        lines.append("lemma: FAIL (invalid model)")
    if not report.theorem_checked:
        lines.append("theorem: skipped")
    else:
        counts = " ".join(f"{i}:{k}" for i, k in report.counts.items())
        lines.append(f"summand counts {counts}")
        lines.append(f"expected ranks {report.expected}")
        lines.append("theorem: " + ("certified" if report.certified else "FAIL"))
    return lines


def cmd_verify_model(args) -> int:
    model = formats.parse_model(_read(args.file))
    report = structure_theorem_check(model)
    payload = {
        "valid_model": report.filtration.valid_model,
        "model_problems": list(report.filtration.model_problems),
        "checks": [c.summary() for c in report.filtration.checks],
        "lemma": "pass" if report.filtration.passed else "fail",
        "theorem": (
            "skipped" if not report.theorem_checked
            else "certified" if report.certified else "fail"
        ),
    }
    if report.theorem_checked:
        payload["counts"] = {str(i): k for i, k in report.counts.items()}
        payload["expected_ranks"] = list(report.expected.values)
    _emit(args, "\n".join(_model_table(model, report)) + "\n", payload)
    return EXIT_OK if report.certified else EXIT_CHECK_FAILED


def cmd_check_p_power(args) -> int:
    X = formats.parse_module(_read(args.file))
    res = check_p_power_lengths(X)
    text = "ok\n" if res.ok else "non-p-power lengths " + ",".join(map(str, res.offenders)) + "\n"
    _emit(args, text, {"ok": res.ok, "offenders": list(res.offenders)})
    return EXIT_OK if res.ok else EXIT_CHECK_FAILED


def cmd_selftest(args) -> int:
    cfg = SweepConfig(
        primes=args.primes,
        max_dim=args.max_dim,
        budget=EnumerationBudget(args.budget, args.seed),
        conjugations=args.conjugations,
    )
    results = run_selftest(cfg)
    payload = {
        "families": [r.as_dict() for r in results],
        "status": "pass" if all(r.ok for r in results) else "fail",
    }
    _emit(args, format_report(results), payload)
    return EXIT_OK if all(r.ok for r in results) else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="cap on p**dim for exhaustive enumeration")

    parser = argparse.ArgumentParser(
        prog="fpgmod", description="Modules over the group ring of a cyclic p-group."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func: Callable, help: str, file_arg: bool = True):
        sp = sub.add_parser(name, parents=[common], help=help)
        if file_arg:
            sp.add_argument("file", help="input file, or - for stdin")
        sp.set_defaults(func=func)
        return sp

    add("jordan-type", cmd_jordan_type, "print the Jordan type of a module")
    add("decompose", cmd_decompose, "split a module into cyclic summands")
    sp = add("restrict", cmd_restrict, "Jordan type of the restriction to H_k")
    sp.add_argument("--level", "-k", type=int, required=True)
    add("theorem-ranks", cmd_theorem_ranks, "free ranks from norm dimensions")
    sp = add("synthesize", cmd_synthesize, "build the canonical model for given ranks", file_arg=False)
    sp.add_argument("file", nargs="?", help="norm data file")
    sp.add_argument("--p", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--ranks", type=_int_list)
    add("verify-model", cmd_verify_model, "check the norm filtration of a model")
    add("check-p-power", cmd_check_p_power, "check that all summand lengths are powers of p")
    sp = add("selftest", cmd_selftest, "run the oracle sweeps", file_arg=False)
    sp.add_argument("--max-dim", type=int, default=8)
    sp.add_argument("--primes", type=_int_list, default=(2, 3, 5, 7))
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--conjugations", type=int, default=100)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except FpgError as exc:
        sys.stderr.write(f"error[{exc.code}]: {exc}\n")
        return EXIT_INPUT
    except InternalCheckFailed as exc:
        sys.stderr.write(f"error[{exc.code}]: {exc}\n")
        return EXIT_INPUT
    except OSError as exc:
        sys.stderr.write(f"error[io]: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
