"""Exact feasibility via the release-time / subset / idle-offset table.

``T[t, S, b] = 1`` iff every job of ``S`` plus every job due by ``t`` can be
scheduled so that machine ``i`` is idle from ``t + b[i]`` on.  The instance
is feasible iff ``T[t_max, S_{t_max}, (ell, ..., ell)] = 1``.

The instance is first cut at idle gaps; each part is shifted to start at
time 0 and solved on its own.
"""
from __future__ import annotations

import heapq
import os
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import _pykernel
from ._timeline import Timeline
from .core import Instance, Schedule, height, profile, require_valid, split_at_gaps

try:  # compiled kernel; absent when the extension was not built
    from . import _ckernel
except ImportError:  # pragma: no cover - depends on the build
    _ckernel = None

DEFAULT_BUDGET = 2 ** 40
STRATEGIES = ("jump", "literal")


class BudgetExceeded(RuntimeError):
    """The projected table size is above the configured ceiling."""

    def __init__(self, projected: int, budget: int):
        super().__init__(f"budget exceeded: projected {projected} table entries > budget {budget}")
        self.projected = projected
        self.budget = budget


def available_backends() -> List[str]:
    return ["python"] + (["cython"] if _ckernel is not None else [])


def default_backend() -> str:
    forced = os.environ.get("ICSCHED_BACKEND")
    if forced:
        return forced
    return "cython" if _ckernel is not None else "python"


def entry_bound(t_max: int, height: int, ell: int, machines: int) -> int:
    """Upper bound on the number of distinct table entries."""
    return (t_max + 1) * 2 ** height * (2 * ell + 1) ** machines


# ---------------------------------------------------------------------------
# literal table, one entry at a time


@dataclass(frozen=True)
class DpState:
    t: int
    live_subset: frozenset
    idle_offsets: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "live_subset", frozenset(self.live_subset))
        object.__setattr__(self, "idle_offsets", tuple(self.idle_offsets))


class DpTable:
    """Memo of the literal recurrence for one (unsplit, unshifted) instance."""

    def __init__(self, instance: Instance, record: bool = True):
        require_valid(instance)
        self.instance = instance
        self.timeline = Timeline(instance.jobs)
        self.kernel = _pykernel.LiteralKernel(self.timeline, instance.machines, record=record)

    @property
    def ell(self) -> int:
        return self.timeline.ell

    @property
    def t_max(self) -> int:
        return self.timeline.t_max

    def __len__(self):
        return self.kernel.entries

    def key(self, state: DpState):
        tl = self.timeline
        if not 0 <= state.t <= tl.t_max:
            raise ValueError(f"t={state.t} outside [0, {tl.t_max}]")
        if len(state.idle_offsets) != self.instance.machines:
            raise ValueError("offset vector length must equal the machine count")
        if any(abs(x) > tl.ell for x in state.idle_offsets):
            raise ValueError(f"offsets must lie in [-{tl.ell}, {tl.ell}]")
        return state.t, tl.encode(state.t, state.live_subset), state.idle_offsets

    def rule(self, state: DpState):
        """The case that decided the entry, or None if it was not evaluated as 1."""
        return self.kernel.rule(*self.key(state))


def dp_entry(instance: Instance, state: DpState, table: Optional[DpTable] = None) -> int:
    table = table if table is not None else DpTable(instance)
    if table.instance is not instance and table.instance != instance:
        raise ValueError("table was built for a different instance")
    t, mask, b = table.key(state)
    return int(table.kernel.run(t, mask, b))


# ---------------------------------------------------------------------------
# whole-instance solving


@dataclass
class PartStats:
    n: int
    t_max: int
    ell: int
    height: int
    bound: int
    entries: int = 0
    feasible: Optional[bool] = None
    solved_by: str = "dp"


@dataclass
class SolveStats:
    dp_invoked: bool = False
    backend: str = ""
    strategy: str = ""
    parts: List[PartStats] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def memo_entries(self) -> int:
        return sum(p.entries for p in self.parts)

    def bound_respected(self) -> bool:
        return all(p.entries <= p.bound for p in self.parts)


@dataclass
class DpResult:
    feasible: bool
    schedule: Optional[Schedule]
    stats: SolveStats

    def __bool__(self):
        return self.feasible


def _interval_coloring(jobs) -> Dict[int, Tuple[int, int]]:
    """Run every job at its release time; assign machines greedily.

    Uses at most height-many machines, since the runs sit inside the windows.
    """
    free: List[int] = []
    heap: List[Tuple[int, int]] = []
    used = 0
    out = {}
    for j in sorted(jobs, key=lambda j: (j.release, j.id)):
        while heap and heap[0][0] <= j.release:
            _, k = heapq.heappop(heap)
            heapq.heappush(free, k)
        if free:
            k = heapq.heappop(free)
        else:
            used += 1
            k = used
        out[j.id] = (k, j.release)
        heapq.heappush(heap, (j.release + j.processing, k))
    return out


def _make_kernel(tl: Timeline, machines: int, record: bool, backend: str, strategy: str,
                 bound: int):
    if strategy == "literal":
        return _pykernel.LiteralKernel(tl, machines, record)
    if backend == "cython":
        if _ckernel is None:
            raise RuntimeError("compiled kernel is not available")
        if _ckernel.fits(tl.width, machines, bound):
            return _ckernel.JumpKernel(tl, machines, record)
    return _pykernel.JumpKernel(tl, machines, record)


def _reconstruct(kernel, tl: Timeline, machines: int, sort_offsets: bool):
    """Replay recorded rules from the root; return {local job: (machine, start)}."""
    t = tl.t_max
    mask = tl.full_mask(t)
    actual = [tl.ell] * machines
    placed = {}
    while True:
        if sort_offsets:
            perm = sorted(range(machines), key=actual.__getitem__)
        else:
            perm = list(range(machines))
        b = tuple(actual[p] for p in perm)
        rule = kernel.rule(t, mask, b)
        if rule is None:
            raise AssertionError(f"no rule recorded for state {(t, mask, b)}")
        kind = rule[0]
        if kind == "base":
            return placed
        if kind == "a":
            mask = tl.step_down(t, mask)
            actual = [min(x + 1, tl.ell) for x in actual]
            t -= 1
        elif kind == "bi":
            actual[perm[rule[1]]] -= 1
        else:
            _, pos, i, v = rule
            k = tl.live(t)[pos]
            machine = perm[i]
            start = t + v - tl.proc[k]
            placed[k] = (machine + 1, start)
            actual[machine] = v - tl.proc[k]
            mask &= ~(1 << pos)


def solve(instance: Instance, *, witness: bool = False, budget: int = DEFAULT_BUDGET,
          backend: Optional[str] = None, strategy: str = "jump",
          coloring: bool = True) -> DpResult:
    """Decide feasibility, optionally with a witness schedule.

    With ``coloring`` on, parts whose height is at most the machine count are
    answered without the table: running every job at its release time keeps at
    most ``height`` jobs busy at once, and interval graphs colour with that
    many machines.
    """
    require_valid(instance)
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    backend = backend or default_backend()
    if backend not in ("python", "cython"):
        raise ValueError(f"unknown backend {backend!r}")
    stats = SolveStats(backend=backend, strategy=strategy)
    began = time.perf_counter()
    m = instance.machines

    if profile(instance).trivially_infeasible:
        stats.seconds = time.perf_counter() - began
        return DpResult(False, None, stats)

    plans = []
    for part in split_at_gaps(instance):
        offset = min(j.release for j in part.jobs)
        local = part.shifted(-offset)
        tl = Timeline(local.jobs)
        h = height(local)
        bound = entry_bound(tl.t_max, h, tl.ell, m)
        ps = PartStats(local.n, tl.t_max, tl.ell, h, bound)
        if coloring and m >= h:
            ps.solved_by = "coloring"
        elif bound > budget:
            raise BudgetExceeded(bound, budget)
        plans.append((part, offset, tl, ps))

    assignments: Dict[int, Tuple[int, int]] = {}
    feasible = True
    for part, offset, tl, ps in plans:
        stats.parts.append(ps)
        if ps.solved_by == "coloring":
            ps.feasible = True
            if witness:
                assignments.update(_interval_coloring(part.jobs))
            continue
        stats.dp_invoked = True
        kernel = _make_kernel(tl, m, witness, backend, strategy, ps.bound)
        ok = bool(kernel.run(tl.t_max, tl.full_mask(tl.t_max), (tl.ell,) * m))
        ps.entries = kernel.entries
        ps.feasible = ok
        if not ok:
            feasible = False
            break
        if witness:
            placed = _reconstruct(kernel, tl, m, sort_offsets=strategy == "jump")
            for k, (machine, start) in placed.items():
                assignments[tl.ids[k]] = (machine, start + offset)

    stats.seconds = time.perf_counter() - began
    schedule = Schedule(assignments) if (witness and feasible) else None
    return DpResult(feasible, schedule, stats)


def decide(instance: Instance, **kwargs) -> bool:
    return solve(instance, **kwargs).feasible


def solve_with_witness(instance: Instance, **kwargs) -> Optional[Schedule]:
    return solve(instance, witness=True, **kwargs).schedule
