"""End-to-end acceptance criteria, one test each.

Every test prints a single PASS/FAIL line, so ``pytest -v`` shows the
outcome even when output capture is on.
"""
import itertools
import time
from fractions import Fraction

import pytest

from icsched import bounds, crosscheck, dp
from icsched.core import profile, split_at_gaps, verify_schedule
from icsched.dp import decide, solve
from icsched.instances import reduce_bin_packing, schedule_from_partition, verify_reduction
from icsched.oracle import BinPackingInstance, bin_packing_decide

from helpers import PACKING, FIVE_UNIT

SUITE_SEED = 2024
SUITE_SIZE = 500
GRID_BUDGET = 2 ** 62


def report(capsys, number, title, ok, detail=""):
    with capsys.disabled():
        print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {title}"
              + (f" ({detail})" if detail else ""))
    assert ok, detail


@pytest.fixture(scope="module")
def suite_run():
    suite = list(crosscheck.random_suite(SUITE_SEED, SUITE_SIZE, n_max=6, m_max=3, t_max=12))
    began = time.perf_counter()
    outcomes = [crosscheck.check_instance(inst) for inst in suite]
    return outcomes, time.perf_counter() - began


def test_oracle_equivalence(suite_run, capsys):
    outcomes, seconds = suite_run
    times_ok = all(max([j.deadline for j in o.instance.jobs], default=0) <= 12 for o in outcomes)
    mismatches = sum(not o.agree for o in outcomes)
    ok = len(outcomes) >= 500 and mismatches == 0 and seconds < 60 and times_ok
    report(capsys, 1, "oracle equivalence", ok,
           f"{len(outcomes)} instances, {mismatches} mismatches, {seconds:.1f}s")


def bp_grid():
    for n in range(2, 6):
        for items in itertools.product(range(1, 6), repeat=n):
            for m in (2, 3):
                if m > n:
                    continue
                for volume in range(1, 16):
                    yield BinPackingInstance(volume, items, m)


def test_reduction_biconditional(capsys):
    cases = mismatches = bad_witness = yes = 0
    for bp in bp_grid():
        cases += 1
        out = reduce_bin_packing(bp, 1)
        packing = bin_packing_decide(bp)
        if decide(out.instance, budget=GRID_BUDGET) != (packing is not None):
            mismatches += 1
        if packing is not None:
            yes += 1
            sched = schedule_from_partition(bp, out, packing)
            if not verify_schedule(out.instance, sched):
                bad_witness += 1
    ok = mismatches == 0 and bad_witness == 0
    report(capsys, 2, "reduction biconditional", ok,
           f"{cases} cases, {yes} yes, {mismatches} mismatches, {bad_witness} bad translations")


def test_reduction_golden(capsys):
    out = reduce_bin_packing(PACKING, 1)
    inst = out.instance
    prof = profile(inst)
    rep = verify_reduction(PACKING, out)
    checks = {
        "A": out.a_sum == 8,
        "B": out.big_b == 96,
        "jobs": inst.n == 12,
        "looseness": prof.looseness == Fraction(13, 12),
        "height": prof.height == 6,
        "agreeable": rep.agreeable_ok,
        "feasible": decide(inst),
        "min machines": bounds.min_machines(inst, 4) == 3,
    }
    failed = [k for k, v in checks.items() if not v]
    report(capsys, 3, "reduction golden values", not failed,
           "failed: " + ", ".join(failed) if failed else "A=8 B=96 n=12 13/12 h=6 m*=3")


def test_bound_soundness(suite_run, capsys):
    outcomes, _ = suite_run
    feasible = [o for o in outcomes if o.answers["oracle"]]
    bad = [o for o in outcomes if crosscheck.bound_violations(o.instance, o.answers["oracle"])]
    report(capsys, 4, "height bound soundness", not bad,
           f"{len(feasible)} feasible instances, {len(bad)} violations")


def test_precheck_witness(capsys):
    res = bounds.solve_bounded_slack(FIVE_UNIT)
    check = res.precheck
    ok = (not res.feasible and check.rejected and check.height == 5 and check.bound == 1
          and not res.dp_invoked)
    report(capsys, 5, "slack precheck skips the table", ok,
           f"h={check.height} bound={check.bound} dp_invoked={res.dp_invoked}")


def test_state_count_bound(suite_run, capsys):
    outcomes, _ = suite_run
    bad = sum(not o.entries_ok for o in outcomes)
    small = solve(reduce_bin_packing(PACKING, 1).instance)
    ok = bad == 0 and small.stats.bound_respected()
    report(capsys, 6, "memo entries within the table bound", ok,
           f"{len(outcomes)} solves, {bad} over the bound, reduced-instance entries {small.stats.memo_entries}")


def test_witness_soundness(suite_run, capsys):
    outcomes, _ = suite_run
    witness_problems = sum(any("witness" in p or "schedule emitted" in p for p in o.problems)
                           for o in outcomes)
    small = reduce_bin_packing(PACKING, 1)
    translated = schedule_from_partition(PACKING, small, bin_packing_decide(PACKING))
    dp_witness = dp.solve_with_witness(small.instance)
    ok = (witness_problems == 0 and verify_schedule(small.instance, translated)
          and verify_schedule(small.instance, dp_witness)
          and dp.solve_with_witness(FIVE_UNIT) is None)
    report(capsys, 7, "witness soundness", ok, f"{witness_problems} bad witnesses")


def test_metamorphic(capsys):
    suite = list(crosscheck.random_suite(SUITE_SEED + 1, 200, n_max=6, m_max=3, t_max=12))
    violations = 0
    for k, inst in enumerate(suite):
        base = decide(inst, coloring=False)
        if decide(inst.shifted(1 + k % 17), coloring=False) != base:
            violations += 1
        if base and not decide(inst.with_machines(inst.machines + 1), coloring=False):
            violations += 1
        if all(decide(p, coloring=False) for p in split_at_gaps(inst)) != base:
            violations += 1
    report(capsys, 8, "metamorphic relations", violations == 0,
           f"{len(suite)} instances, {violations} violations")
