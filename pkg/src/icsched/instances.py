"""Bin Packing to scheduling reduction and random instance generation."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .core import TIME_LIMIT, Instance, InstanceFormatError, Job, Schedule, height
from .oracle import BinPackingInstance


@dataclass(frozen=True)
class ReductionOutput:
    instance: Instance
    a_sum: int
    big_b: int
    trivial: bool
    job_map: Dict[Tuple[int, int], int] = field(default_factory=dict)
    c: int = 1


def reduction_job_id(i: int, k: int, m: int) -> int:
    """Id of copy ``k`` (1-based) of item ``i`` (1-based)."""
    return (i - 1) * m + (k - 1)


def reduce_bin_packing(bp: BinPackingInstance, c: int = 1) -> ReductionOutput:
    """Scheduling instance on ``bins`` machines, feasible iff ``bp`` packs.

    Item ``i`` becomes ``m`` jobs released at ``(i-1)B``; the first copy needs
    ``B + a_i`` time, the others ``B``.  Deadlines are ``iB + A`` except for the
    last item, whose jobs are due at ``nB + V``.
    """
    if c < 1:
        raise ValueError("c must be a positive integer")
    n, m = bp.n, bp.bins
    if n < 2:
        raise ValueError("the reduction needs at least two items")
    a_sum = sum(bp.items)
    big_b = (m * n) ** c * a_sum
    if n * big_b + max(a_sum, bp.volume) >= TIME_LIMIT:
        raise OverflowError(f"B = {big_b} pushes deadlines past 2^62")
    if bp.volume > a_sum:
        one = Instance((Job(0, 0, 1, 1),), m)
        return ReductionOutput(one, a_sum, big_b, True, {}, c)

    jobs = []
    job_map = {}
    for i in range(1, n + 1):
        a_i = bp.items[i - 1]
        release = (i - 1) * big_b
        deadline = i * big_b + (a_sum if i < n else bp.volume)
        for k in range(1, m + 1):
            jid = reduction_job_id(i, k, m)
            proc = big_b + a_i if k == 1 else big_b
            jobs.append(Job(jid, release, deadline, proc))
            job_map[(i, k)] = jid
    return ReductionOutput(Instance(tuple(jobs), m), a_sum, big_b, False, job_map, c)


@dataclass(frozen=True)
class PropertyReport:
    vacuous: bool
    job_count: int = 0
    looseness: Fraction = Fraction(1)
    looseness_cap: Fraction = Fraction(1)
    height: int = 0
    job_count_ok: bool = True
    looseness_ok: bool = True
    height_ok: bool = True
    agreeable_ok: bool = True

    @property
    def all_hold(self) -> bool:
        return self.job_count_ok and self.looseness_ok and self.height_ok and self.agreeable_ok

    def lines(self) -> List[str]:
        if self.vacuous:
            return ["trivial yes-instance (V > A): properties vacuous"]
        mark = {True: "ok", False: "FAILED"}
        return [
            f"job count {self.job_count}: {mark[self.job_count_ok]}",
            f"looseness {self.looseness} <= {self.looseness_cap}: {mark[self.looseness_ok]}",
            f"height {self.height} <= 2m: {mark[self.height_ok]}",
            f"agreeable deadlines: {mark[self.agreeable_ok]}",
        ]


def agreeable(jobs: Sequence[Job]) -> bool:
    """Sorting by release also sorts by deadline (ties allowed)."""
    ordered = sorted(jobs, key=lambda j: (j.release, j.deadline))
    return all(a.deadline <= b.deadline for a, b in zip(ordered, ordered[1:])
               if a.release < b.release)


def verify_reduction(bp: BinPackingInstance, out: ReductionOutput, c: Optional[int] = None
                     ) -> PropertyReport:
    if out.trivial:
        return PropertyReport(vacuous=True)
    c = out.c if c is None else c
    m, n = bp.bins, bp.n
    jobs = out.instance.jobs
    lam = max(Fraction(j.deadline - j.release, j.processing) for j in jobs)
    cap = 1 + Fraction(1, (m * n) ** c)
    h = height(out.instance)
    return PropertyReport(
        vacuous=False,
        job_count=len(jobs),
        looseness=lam,
        looseness_cap=cap,
        height=h,
        job_count_ok=len(jobs) == m * n and out.instance.machines == m,
        looseness_ok=lam <= cap,
        height_ok=h <= 2 * m,
        agreeable_ok=agreeable(jobs),
    )


def schedule_from_partition(bp: BinPackingInstance, out: ReductionOutput,
                            partition: Sequence) -> Schedule:
    """Turn a packing into a schedule of the reduced instance.

    ``partition[k]`` holds the 0-based items of bin ``k``.  The long copy of an
    item in bin ``k`` runs on machine ``k+1``; the short copies fill the other
    machines.  Each machine is delayed by the items already packed in its bin.
    """
    if out.trivial:
        return Schedule({0: (1, 0)})
    m, big_b = bp.bins, out.big_b
    bin_of = {}
    for k, items in enumerate(partition):
        for i in items:
            bin_of[i] = k
    if sorted(bin_of) != list(range(bp.n)) or len(partition) != m:
        raise ValueError("partition must cover every item once, using exactly m bins")

    delay = [0] * m
    assignments = {}
    for i in range(1, bp.n + 1):
        home = bin_of[i - 1]
        release = (i - 1) * big_b
        spares = iter(range(2, m + 1))
        for machine in range(m):
            if machine == home:
                jid = out.job_map[(i, 1)]
            else:
                jid = out.job_map[(i, next(spares))]
            assignments[jid] = (machine + 1, release + delay[machine])
        delay[home] += bp.items[i - 1]
    return Schedule(assignments)


# ---------------------------------------------------------------------------
# random instances


@dataclass(frozen=True)
class Style:
    kind: str = "unconstrained"  # "slack", "looseness" or "unconstrained"
    limit: Union[int, Fraction, None] = None

    @classmethod
    def slack(cls, sigma_max: int) -> "Style":
        if sigma_max < 0:
            raise ValueError("slack target must be non-negative")
        return cls("slack", sigma_max)

    @classmethod
    def looseness(cls, lam_max) -> "Style":
        lam = Fraction(lam_max)
        if lam < 1:
            raise ValueError("looseness target must be at least 1")
        return cls("looseness", lam)

    @classmethod
    def parse(cls, text: str) -> "Style":
        """``slack:2``, ``looseness:3/2`` or ``unconstrained``."""
        kind, _, arg = text.partition(":")
        if kind == "slack":
            return cls.slack(int(arg))
        if kind == "looseness":
            return cls.looseness(Fraction(arg))
        if kind == "unconstrained" and not arg:
            return cls()
        raise ValueError(f"bad style {text!r}")


def random_instance(seed: int, n: int, m: int, style: Style = Style(), horizon: int = 10
                    ) -> Instance:
    if n < 0 or m < 1 or horizon < 1:
        raise ValueError("need n >= 0, m >= 1 and horizon >= 1")
    if style.kind not in ("slack", "looseness", "unconstrained"):
        raise ValueError(f"unknown style {style.kind!r}")
    if style.kind == "looseness" and Fraction(style.limit) < 1:
        raise ValueError("looseness target must be at least 1")
    if style.kind == "slack" and style.limit < 0:
        raise ValueError("slack target must be non-negative")
    rng = random.Random(seed)
    jobs = []
    for k in range(n):
        release = rng.randrange(horizon)
        proc = rng.randint(1, horizon)
        if style.kind == "slack":
            extra = rng.randint(0, style.limit)
        elif style.kind == "looseness":
            lam = Fraction(style.limit)
            longest = lam.numerator * proc // lam.denominator
            extra = rng.randint(0, longest - proc)
        else:
            extra = rng.randint(0, horizon)
        jobs.append(Job(k, release, release + proc + extra, proc))
    return Instance(tuple(jobs), m)


# ---------------------------------------------------------------------------
# bin packing files

_BP_KEYS = {"volume", "items", "bins"}


def bin_packing_from_dict(data) -> BinPackingInstance:
    if not isinstance(data, dict) or set(data) != _BP_KEYS:
        raise InstanceFormatError(f"bin packing file needs exactly the keys {sorted(_BP_KEYS)}")
    values = [data["volume"], data["bins"], *data["items"]] if isinstance(data["items"], list) else None
    if values is None or any(isinstance(v, bool) or not isinstance(v, int) for v in values):
        raise InstanceFormatError("volume, bins and items must be integers")
    try:
        return BinPackingInstance(data["volume"], tuple(data["items"]), data["bins"])
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from None


def bin_packing_to_dict(bp: BinPackingInstance) -> dict:
    return {"volume": bp.volume, "items": list(bp.items), "bins": bp.bins}


def read_bin_packing(path: Union[str, Path]) -> BinPackingInstance:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"malformed JSON: {exc}") from None
    return bin_packing_from_dict(data)
