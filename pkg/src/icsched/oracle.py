"""Exhaustive reference deciders for tiny instances.

Kept deliberately naive: they share no code with the DP beyond the instance
types, so agreement between the two is meaningful.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Dict, List, Optional, Sequence, Tuple

from .core import Instance, Job, Schedule, require_valid

SCHEDULE_CAP = 8
BIN_PACKING_CAP = 12


class OracleCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class BinPackingInstance:
    volume: int
    items: Tuple[int, ...]
    bins: int

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        if self.volume < 1:
            raise ValueError("bin volume must be at least 1")
        if any(a < 1 for a in self.items):
            raise ValueError("items must be positive")
        if not 1 <= self.bins <= len(self.items):
            raise ValueError("need 1 <= bins <= number of items")

    @property
    def n(self) -> int:
        return len(self.items)


def greedy_starts(sequence: Sequence[Job]) -> Optional[List[int]]:
    """Earliest starts for jobs run in the given order on one machine.

    Returns None when some job misses its deadline.
    """
    starts = []
    free = None
    for job in sequence:
        s = job.release if free is None else max(job.release, free)
        if s + job.processing > job.deadline:
            return None
        starts.append(s)
        free = s + job.processing
    return starts


def _machine_order(jobs: List[Job]) -> Optional[List[Tuple[Job, int]]]:
    for order in permutations(jobs):
        starts = greedy_starts(order)
        if starts is not None:
            return list(zip(order, starts))
    return None


def _search(instance: Instance) -> Optional[Schedule]:
    jobs = sorted(instance.jobs, key=lambda j: j.id)
    m = instance.machines
    groups: List[List[Job]] = []

    def place(k: int) -> Optional[Dict[int, Tuple[int, int]]]:
        if k == len(jobs):
            out = {}
            for machine, group in enumerate(groups, start=1):
                runs = _machine_order(group)
                if runs is None:
                    return None
                for job, start in runs:
                    out[job.id] = (machine, start)
            return out
        # canonical form: a job opens at most one new machine, so machine
        # labels follow the smallest job id on each machine
        for g in range(len(groups)):
            groups[g].append(jobs[k])
            found = place(k + 1)
            groups[g].pop()
            if found is not None:
                return found
        if len(groups) < m:
            groups.append([jobs[k]])
            found = place(k + 1)
            groups.pop()
            if found is not None:
                return found
        return None

    found = place(0)
    return None if found is None else Schedule(found)


def _guard(instance: Instance, cap: int) -> None:
    require_valid(instance)
    if instance.n > cap:
        raise OracleCapExceeded(f"{instance.n} jobs exceed the oracle cap of {cap}")


def brute_force_schedule(instance: Instance, cap: int = SCHEDULE_CAP) -> Optional[Schedule]:
    _guard(instance, cap)
    if any(not j.fits for j in instance.jobs):
        return None
    return _search(instance)


def brute_force_decide(instance: Instance, cap: int = SCHEDULE_CAP) -> bool:
    return brute_force_schedule(instance, cap) is not None


def bin_packing_decide(bp: BinPackingInstance, cap: int = BIN_PACKING_CAP):
    """A partition of item indices (0-based) into ``bins`` sets, or None."""
    if bp.n > cap:
        raise OracleCapExceeded(f"{bp.n} items exceed the oracle cap of {cap}")
    loads = []
    sets: List[List[int]] = []

    def put(i: int) -> bool:
        if i == bp.n:
            return True
        a = bp.items[i]
        for b in range(len(sets)):
            if loads[b] + a <= bp.volume:
                loads[b] += a
                sets[b].append(i)
                if put(i + 1):
                    return True
                sets[b].pop()
                loads[b] -= a
        if len(sets) < bp.bins and a <= bp.volume:
            loads.append(a)
            sets.append([i])
            if put(i + 1):
                return True
            sets.pop()
            loads.pop()
        return False

    if not put(0):
        return None
    parts = [frozenset(s) for s in sets]
    parts += [frozenset()] * (bp.bins - len(parts))
    for s in parts:
        assert sum(bp.items[i] for i in s) <= bp.volume
    return parts
