"""Height bounds for feasible instances and the solvers built on them.

A feasible instance on ``m`` machines cannot be arbitrarily tall:

* with looseness ``lam > 1`` and longest window ``ell`` its height is at most
  ``2m (ln ell / (ln lam - ln(lam - 1)) + 1)``;
* with slack ``sigma`` its height is at most ``(2 sigma + 1) m``.

Instances over the bound are rejected without running the DP.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from . import dp
from .core import Instance, profile, require_valid

Rational = Union[int, Fraction]

# relative widening applied before flooring the float bound
_MARGIN = 1e-9


@dataclass(frozen=True)
class HeightBound:
    value: int
    source: str  # "looseness", "slack" or "degenerate"

    def __int__(self):
        return self.value


def looseness_height_bound(m: int, ell: int, looseness: Rational) -> HeightBound:
    lam = Fraction(looseness)
    if lam < 1:
        raise ValueError(f"looseness must be at least 1, got {lam}")
    if m < 1 or ell < 1:
        raise ValueError("need m >= 1 and ell >= 1")
    if lam == 1:
        # every job fills its whole window, so more than m live windows cannot fit
        return HeightBound(m, "degenerate")
    # the ratio is base-independent; ln(lam / (lam - 1)) avoids cancellation
    ratio = math.log(ell) / math.log(lam / (lam - 1))
    raw = 2 * m * (ratio + 1)
    value = math.floor(raw * (1 + _MARGIN) + _MARGIN)
    return HeightBound(value, "looseness")


def slack_height_bound(m: int, sigma: int) -> HeightBound:
    if m < 1 or sigma < 0:
        raise ValueError("need m >= 1 and sigma >= 0")
    return HeightBound((2 * sigma + 1) * m, "slack")


@dataclass(frozen=True)
class Precheck:
    passed: bool
    height: int
    bound: Optional[int]
    source: str

    @property
    def rejected(self) -> bool:
        return not self.passed


def precheck(instance: Instance, mode: str = "both") -> Precheck:
    """Compare the instance height against its own looseness/slack bound."""
    if mode not in ("looseness", "slack", "both"):
        raise ValueError(f"unknown precheck mode {mode!r}")
    require_valid(instance)
    prof = profile(instance)
    if prof.trivially_infeasible:
        return Precheck(False, prof.height, None, "window too short")
    if prof.n == 0:
        return Precheck(True, 0, 0, mode)
    bounds = []
    if mode in ("looseness", "both"):
        bounds.append(looseness_height_bound(instance.machines, prof.ell, prof.looseness))
    if mode in ("slack", "both"):
        bounds.append(slack_height_bound(instance.machines, prof.slack))
    tightest = min(bounds, key=lambda b: b.value)
    return Precheck(prof.height <= tightest.value, prof.height, tightest.value, tightest.source)


@dataclass
class DriverResult:
    feasible: bool
    precheck: Precheck
    stats: Optional[dp.SolveStats] = None
    schedule: object = None

    @property
    def dp_invoked(self) -> bool:
        return self.stats is not None and self.stats.dp_invoked

    def __bool__(self):
        return self.feasible


def _drive(instance: Instance, mode: str, witness: bool, **solver_kw) -> DriverResult:
    check = precheck(instance, mode)
    if check.rejected:
        return DriverResult(False, check)
    result = dp.solve(instance, witness=witness, **solver_kw)
    return DriverResult(result.feasible, check, result.stats, result.schedule)


def solve_bounded_looseness(instance: Instance, witness: bool = False, **solver_kw) -> DriverResult:
    return _drive(instance, "looseness", witness, **solver_kw)


def solve_bounded_slack(instance: Instance, witness: bool = False, **solver_kw) -> DriverResult:
    return _drive(instance, "slack", witness, **solver_kw)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def min_machines_lower_bound(instance: Instance) -> int:
    """Machines any feasible schedule needs, from height, slack, looseness and load."""
    require_valid(instance.with_machines(1))
    prof = profile(instance)
    if prof.n == 0:
        return 1
    h = prof.height
    best = 1
    if prof.slack >= 0:
        best = max(best, _ceil_div(h, 2 * prof.slack + 1))
    if prof.looseness >= 1:
        m = 1
        while looseness_height_bound(m, prof.ell, prof.looseness).value < h:
            m += 1
        best = max(best, m)
    span = max(j.deadline for j in instance.jobs) - min(j.release for j in instance.jobs)
    work = sum(j.processing for j in instance.jobs)
    best = max(best, _ceil_div(work, span))
    return best


def min_machines(instance: Instance, m_max: int, **solver_kw) -> Optional[int]:
    """Fewest machines (at most ``m_max``) on which the jobs are feasible."""
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    if profile(instance).trivially_infeasible:
        return None
    for m in range(min_machines_lower_bound(instance), m_max + 1):
        if dp.decide(instance.with_machines(m), **solver_kw):
            return m
    return None
