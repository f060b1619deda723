"""Command-line front end.

Exit codes: 0 feasible / success, 1 infeasible / mismatch, 2 usage, parse or
budget error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import bounds, crosscheck, dp
from .core import (InstanceFormatError, dumps_instance, instance_to_dict, profile,
                   read_instance, validate, verify_schedule, write_instance)
from .instances import (Style, random_instance, read_bin_packing, reduce_bin_packing,
                        verify_reduction)
from .oracle import SCHEDULE_CAP

EXIT_OK, EXIT_NO, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def env_budget() -> int:
    raw = os.environ.get("SCHED_BUDGET")
    if not raw:
        return dp.DEFAULT_BUDGET
    try:
        return int(raw, 0)
    except ValueError:
        raise UsageError(f"SCHED_BUDGET must be an integer, got {raw!r}") from None


def _profile_dict(instance):
    prof = profile(instance)
    return {
        "n": prof.n,
        "m": instance.machines,
        "ell": prof.ell,
        "t_max": prof.t_max,
        "looseness": str(prof.looseness),
        "slack": prof.slack,
        "height": prof.height,
        "short_jobs": list(prof.short_jobs),
    }


def _bounds_dict(instance):
    prof = profile(instance)
    m = instance.machines
    out = {"slack_bound": None, "looseness_bound": None, "looseness_bound_source": None}
    if prof.n and not prof.trivially_infeasible and m >= 1:
        out["slack_bound"] = bounds.slack_height_bound(m, prof.slack).value
        lb = bounds.looseness_height_bound(m, max(prof.ell, 1), prof.looseness)
        out["looseness_bound"] = lb.value
        out["looseness_bound_source"] = lb.source
    return out


def _load(path):
    try:
        instance = read_instance(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except (InstanceFormatError, ValueError, TypeError) as exc:
        raise UsageError(f"{path}: {exc}") from None
    structural = [p for p in validate(instance) if "window too short" not in p]
    if structural:
        raise UsageError(f"{path}: invalid instance: " + "; ".join(structural))
    return instance


def _emit(report: dict, args, lines):
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args) -> int:
    instance = _load(args.path)
    prof = _profile_dict(instance)
    bds = _bounds_dict(instance)
    problems = validate(instance)
    report = {"command": "analyze", "path": str(args.path), "profile": prof, "bounds": bds,
              "violations": problems}
    lines = [
        f"jobs {prof['n']}  machines {prof['m']}",
        f"ell {prof['ell']}  t_max {prof['t_max']}  looseness {prof['looseness']}  "
        f"slack {prof['slack']}  height {prof['height']}",
        f"slack bound {bds['slack_bound']}",
        f"looseness bound {bds['looseness_bound']}"
        + (f" ({bds['looseness_bound_source']})" if bds["looseness_bound_source"] else ""),
    ]
    lines += [f"violation: {p}" for p in problems]
    _emit(report, args, lines)
    return EXIT_OK


def cmd_decide(args) -> int:
    instance = _load(args.path)
    budget = args.budget if args.budget is not None else env_budget()
    kw = dict(budget=budget, backend=args.backend)
    began = time.perf_counter()
    check = None
    if args.driver == "plain":
        res = dp.solve(instance, witness=args.witness, **kw)
        feasible, schedule, stats = res.feasible, res.schedule, res.stats
    else:
        solver = (bounds.solve_bounded_looseness if args.driver == "looseness"
                  else bounds.solve_bounded_slack)
        res = solver(instance, witness=args.witness, **kw)
        feasible, schedule, stats, check = res.feasible, res.schedule, res.stats, res.precheck
    elapsed = time.perf_counter() - began
    if schedule is not None and not verify_schedule(instance, schedule):
        raise AssertionError("solver produced a schedule that fails verification")

    dp_invoked = bool(stats and stats.dp_invoked)
    report = {
        "command": "decide",
        "path": str(args.path),
        "driver": args.driver,
        "profile": _profile_dict(instance),
        "bounds": _bounds_dict(instance),
        "answer": "feasible" if feasible else "infeasible",
        "statistics": {
            "dp_invoked": dp_invoked,
            "precheck_rejected": bool(check and check.rejected),
            "memo_entries": stats.memo_entries if stats else 0,
            "backend": stats.backend if stats else None,
            "seconds": round(elapsed, 6),
        },
    }
    if check is not None:
        report["precheck"] = {"passed": check.passed, "height": check.height,
                              "bound": check.bound, "source": check.source}
    if args.witness:
        report["schedule"] = schedule.to_records() if schedule is not None else None

    lines = [report["answer"]]
    if check is not None:
        verdict = "pass" if check.passed else "reject"
        lines.append(f"precheck {verdict}: height {check.height}, bound {check.bound}")
    lines.append("dp invoked" if dp_invoked else "dp skipped")
    lines.append(f"memo entries {report['statistics']['memo_entries']}")
    if args.witness and schedule is not None:
        for row in schedule.to_records():
            lines.append(f"job {row['job']} machine {row['machine']} start {row['start']}")
    _emit(report, args, lines)
    return EXIT_OK if feasible else EXIT_NO


def cmd_minimize(args) -> int:
    instance = _load(args.path)
    budget = args.budget if args.budget is not None else env_budget()
    cap = args.max if args.max is not None else max(instance.n, 1)
    if cap < 1:
        raise UsageError("--max must be at least 1")
    prof = profile(instance)
    lower = None if prof.trivially_infeasible else bounds.min_machines_lower_bound(instance)
    best = bounds.min_machines(instance, cap, budget=budget, backend=args.backend)
    report = {"command": "minimize", "path": str(args.path), "profile": _profile_dict(instance),
              "lower_bound": lower, "max": cap, "minimum": best}
    lines = [f"lower bound {lower}",
             f"minimum {best}" if best is not None else f"no feasible machine count <= {cap}"]
    _emit(report, args, lines)
    return EXIT_OK if best is not None else EXIT_NO


def cmd_reduce(args) -> int:
    try:
        bp = read_bin_packing(args.bp_path)
    except OSError as exc:
        raise UsageError(f"cannot read {args.bp_path}: {exc}") from None
    except InstanceFormatError as exc:
        raise UsageError(f"{args.bp_path}: {exc}") from None
    try:
        out = reduce_bin_packing(bp, args.c)
    except (OverflowError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    rep = verify_reduction(bp, out)
    if args.out:
        write_instance(out.instance, args.out)
    report = {
        "command": "reduce",
        "A": out.a_sum,
        "B": out.big_b,
        "c": args.c,
        "trivial": out.trivial,
        "jobs": out.instance.n,
        "properties": {
            "vacuous": rep.vacuous,
            "job_count": rep.job_count_ok,
            "looseness": rep.looseness_ok,
            "height": rep.height_ok,
            "agreeable": rep.agreeable_ok,
            "all_hold": rep.all_hold,
        },
    }
    if not args.out:
        report["instance"] = instance_to_dict(out.instance)
    head = f"A={out.a_sum} B={out.big_b}"
    if out.trivial:
        head += ", V > A: trivial yes-instance"
    elif rep.all_hold:
        head += ", all properties hold"
    lines = [head, f"jobs {out.instance.n}  machines {out.instance.machines}"]
    lines += rep.lines()
    if not args.out:
        lines.append(dumps_instance(out.instance))
    _emit(report, args, lines)
    return EXIT_OK if rep.all_hold else EXIT_NO


def cmd_generate(args) -> int:
    try:
        style = Style.parse(args.style)
        instance = random_instance(args.seed, args.n, args.m, style, args.horizon)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.out:
        write_instance(instance, args.out)
        if args.json:
            print(json.dumps({"command": "generate", "out": str(args.out),
                              "profile": _profile_dict(instance)}, indent=2, sort_keys=True))
        else:
            print(f"wrote {instance.n} jobs to {args.out}")
    else:
        print(dumps_instance(instance))
    return EXIT_OK


def cmd_crosscheck(args) -> int:
    if args.n_max > SCHEDULE_CAP:
        raise UsageError(f"--n-max {args.n_max} exceeds the oracle cap of {SCHEDULE_CAP}")
    if args.count < 0 or args.m_max < 1 or args.t_max < 2 or args.n_max < 0:
        raise UsageError("need --count >= 0, --n-max >= 0, --m-max >= 1, --t-max >= 2")
    budget = env_budget()
    suite = list(crosscheck.random_suite(args.seed, args.count, args.n_max, args.m_max,
                                         args.t_max))
    began = time.perf_counter()
    if args.workers > 1 and suite:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(args.workers) as pool:
            outcomes = list(pool.map(crosscheck.check_instance, suite, [budget] * len(suite),
                                     chunksize=16))
    else:
        outcomes = [crosscheck.check_instance(inst, budget) for inst in suite]
    elapsed = time.perf_counter() - began
    mismatches = [o for o in outcomes if not o.agree]
    violations = [o for o in outcomes if o.agree and o.problems]
    report = {
        "command": "crosscheck",
        "count": len(outcomes),
        "mismatches": len(mismatches),
        "bound_violations": len(violations),
        "feasible": sum(o.answers["oracle"] for o in outcomes),
        "seconds": round(elapsed, 3),
        "failures": [{"instance": instance_to_dict(o.instance), "problems": o.problems}
                     for o in mismatches + violations],
    }
    lines = [
        f"{len(outcomes)} instances, {report['feasible']} feasible, {elapsed:.2f}s",
        f"{len(mismatches)} mismatches",
        f"{len(violations)} bound violations",
    ]
    for o in mismatches + violations:
        lines.append("; ".join(o.problems))
        lines.append(json.dumps(instance_to_dict(o.instance)))
    _emit(report, args, lines)
    return EXIT_OK if not (mismatches or violations) else EXIT_NO


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_ERROR)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="icsched", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print one JSON document")
    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--budget", type=int, default=None,
                        help="ceiling on projected table entries (default 2^40 or $SCHED_BUDGET)")
    solver.add_argument("--backend", choices=["python", "cython"], default=None)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", parents=[common], help="profile and height bounds")
    p.add_argument("path", type=Path)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("decide", parents=[common, solver], help="decide feasibility")
    p.add_argument("path", type=Path)
    p.add_argument("--driver", choices=["plain", "looseness", "slack"], default="plain")
    p.add_argument("--witness", action="store_true", help="include a verified schedule")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("minimize", parents=[common, solver], help="fewest feasible machines")
    p.add_argument("path", type=Path)
    p.add_argument("--max", type=int, default=None, help="largest machine count to try")
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("reduce", parents=[common], help="bin packing to scheduling")
    p.add_argument("bp_path", type=Path)
    p.add_argument("--c", type=int, default=1)
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("generate", parents=[common], help="seeded random instance")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--style", default="unconstrained",
                   help="unconstrained, slack:<sigma> or looseness:<p/q>")
    p.add_argument("--horizon", type=int, default=10)
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("crosscheck", parents=[common], help="DP vs drivers vs oracle")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--m-max", type=int, default=3)
    p.add_argument("--t-max", type=int, default=12)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_crosscheck)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except dp.BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
