"""Instance model, window analytics and schedule checking.

Time windows are half-open: job ``j`` may run only inside
``[release, deadline)``.  All times are non-negative integers.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

TIME_LIMIT = 2 ** 62

WINDOW_TOO_SHORT = "window too short"


class InstanceFormatError(ValueError):
    """Raised when an instance file or mapping does not match the schema."""


def _check_int(name: str, value) -> int:
    # bool is an int subclass; reject it explicitly
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    return value


@dataclass(frozen=True)
class Job:
    id: int
    release: int
    deadline: int
    processing: int

    def __post_init__(self):
        for name in ("id", "release", "deadline", "processing"):
            _check_int(name, getattr(self, name))
        if self.id < 0:
            raise ValueError(f"job id must be non-negative, got {self.id}")
        if self.release < 0 or self.deadline < 0:
            raise ValueError(f"job {self.id}: negative times are not allowed")

    @property
    def window(self) -> int:
        return self.deadline - self.release

    @property
    def fits(self) -> bool:
        return self.processing <= self.deadline - self.release

    def shifted(self, delta: int) -> "Job":
        return Job(self.id, self.release + delta, self.deadline + delta, self.processing)


@dataclass(frozen=True)
class Instance:
    jobs: Tuple[Job, ...]
    machines: int

    def __post_init__(self):
        object.__setattr__(self, "jobs", tuple(self.jobs))
        _check_int("machines", self.machines)

    @property
    def n(self) -> int:
        return len(self.jobs)

    def job(self, job_id: int) -> Job:
        for j in self.jobs:
            if j.id == job_id:
                return j
        raise KeyError(job_id)

    def with_machines(self, machines: int) -> "Instance":
        return Instance(self.jobs, machines)

    def shifted(self, delta: int) -> "Instance":
        return Instance(tuple(j.shifted(delta) for j in self.jobs), self.machines)


@dataclass(frozen=True)
class Schedule:
    """Map from job id to ``(machine, start)``; machines are numbered from 1."""

    assignments: Mapping[int, Tuple[int, int]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "assignments", dict(self.assignments))

    def __len__(self):
        return len(self.assignments)

    def __getitem__(self, job_id: int) -> Tuple[int, int]:
        return self.assignments[job_id]

    def machine_of(self, job_id: int) -> int:
        return self.assignments[job_id][0]

    def start_of(self, job_id: int) -> int:
        return self.assignments[job_id][1]

    def shifted(self, delta: int) -> "Schedule":
        return Schedule({j: (k, s + delta) for j, (k, s) in self.assignments.items()})

    def to_records(self) -> List[dict]:
        """Triples sorted by (machine, start, job)."""
        rows = [
            {"job": j, "machine": k, "start": s}
            for j, (k, s) in self.assignments.items()
        ]
        rows.sort(key=lambda r: (r["machine"], r["start"], r["job"]))
        return rows

    @classmethod
    def from_records(cls, rows: Iterable[Mapping[str, int]]) -> "Schedule":
        return cls({r["job"]: (r["machine"], r["start"]) for r in rows})


@dataclass(frozen=True)
class InstanceProfile:
    n: int
    ell: int
    t_max: int
    looseness: Fraction
    slack: int
    height: int
    short_jobs: Tuple[int, ...] = ()

    @property
    def trivially_infeasible(self) -> bool:
        """Some job cannot fit inside its own window."""
        return bool(self.short_jobs)


# ---------------------------------------------------------------------------
# validation and analytics


def validate(instance: Instance) -> List[str]:
    """Return a list of human-readable violations; empty means valid."""
    problems = []
    if instance.machines < 1:
        problems.append("machines < 1")
    seen = set()
    for j in instance.jobs:
        if j.id in seen:
            problems.append(f"duplicate job id {j.id}")
        seen.add(j.id)
        if j.deadline <= j.release:
            problems.append(f"job {j.id}: deadline <= release")
        if j.processing < 1:
            problems.append(f"job {j.id}: processing < 1")
        elif j.deadline > j.release and j.processing > j.deadline - j.release:
            problems.append(f"job {j.id}: {WINDOW_TOO_SHORT}")
        if j.deadline >= TIME_LIMIT or j.release >= TIME_LIMIT:
            problems.append(f"job {j.id}: time exceeds 2^62")
    return problems


def structural_problems(instance: Instance) -> List[str]:
    """Violations that make the instance ill-formed (not merely infeasible)."""
    return [p for p in validate(instance) if not p.endswith(WINDOW_TOO_SHORT)]


def require_valid(instance: Instance) -> None:
    problems = structural_problems(instance)
    if problems:
        raise ValueError("invalid instance: " + "; ".join(problems))


def max_overlap(windows: Iterable[Tuple[int, int]]) -> int:
    """Maximum number of half-open intervals sharing a point."""
    events = []
    for lo, hi in windows:
        if hi > lo:
            events.append((lo, 1))
            events.append((hi, -1))
    # at equal times the -1 sorts first, so [a, b) and [b, c) do not overlap
    events.sort()
    best = cur = 0
    for _, delta in events:
        cur += delta
        if cur > best:
            best = cur
    return best


def height(instance: Instance) -> int:
    return max_overlap((j.release, j.deadline) for j in instance.jobs)


def profile(instance: Instance) -> InstanceProfile:
    jobs = instance.jobs
    if not jobs:
        return InstanceProfile(0, 0, 0, Fraction(1), 0, 0)
    ell = max(abs(j.deadline - j.release) for j in jobs)
    t_max = max(j.release for j in jobs)
    looseness = max(Fraction(j.deadline - j.release, j.processing) for j in jobs)
    slack = max(j.deadline - j.release - j.processing for j in jobs)
    short = tuple(j.id for j in jobs if not j.fits)
    return InstanceProfile(len(jobs), ell, t_max, looseness, slack, height(instance), short)


def jobs_live_at(instance: Instance, t: int) -> frozenset:
    return frozenset(j.id for j in instance.jobs if j.release <= t < j.deadline)


def jobs_due_by(instance: Instance, t: int) -> frozenset:
    return frozenset(j.id for j in instance.jobs if j.deadline <= t)


def split_at_gaps(instance: Instance) -> List[Instance]:
    """Cut the instance at every time no window is live.

    Parts come out in time order and keep the original machine count; within
    a part, jobs keep their original relative order.
    """
    if not instance.jobs:
        return []
    order = sorted(range(instance.n), key=lambda k: instance.jobs[k].release)
    groups: List[List[int]] = []
    reach = None
    for k in order:
        j = instance.jobs[k]
        if reach is None or j.release >= reach:
            groups.append([k])
            reach = j.deadline
        else:
            groups[-1].append(k)
            reach = max(reach, j.deadline)
    return [
        Instance(tuple(instance.jobs[k] for k in sorted(g)), instance.machines)
        for g in groups
    ]


# ---------------------------------------------------------------------------
# schedule checking


def schedule_problems(instance: Instance, schedule: Schedule) -> List[str]:
    """Reasons the schedule is not a feasible witness (empty when it is)."""
    reasons = []
    by_id = {j.id: j for j in instance.jobs}
    assigned = schedule.assignments
    for jid in by_id:
        if jid not in assigned:
            reasons.append(f"job {jid} missing")
    for jid in assigned:
        if jid not in by_id:
            reasons.append(f"unknown job {jid}")

    per_machine: Dict[int, List[Tuple[int, int, int]]] = {}
    for jid, (machine, start) in assigned.items():
        job = by_id.get(jid)
        if job is None:
            continue
        if not 1 <= machine <= instance.machines:
            reasons.append(f"job {jid}: machine {machine} out of range")
        if start < job.release:
            reasons.append(f"job {jid}: starts at {start} before release {job.release}")
        if start + job.processing > job.deadline:
            reasons.append(
                f"job {jid}: finishes at {start + job.processing} after deadline {job.deadline}"
            )
        per_machine.setdefault(machine, []).append((start, start + job.processing, jid))

    for machine, runs in per_machine.items():
        runs.sort()
        for (s0, e0, j0), (s1, e1, j1) in zip(runs, runs[1:]):
            if s1 < e0:
                reasons.append(f"machine {machine}: jobs {j0} and {j1} overlap")
    return reasons


def verify_schedule(instance: Instance, schedule: Schedule) -> bool:
    return not schedule_problems(instance, schedule)


# ---------------------------------------------------------------------------
# JSON interchange

_INSTANCE_KEYS = {"machines", "jobs"}
_JOB_KEYS = ("id", "release", "deadline", "processing")


def _expect_int(obj, key, where):
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceFormatError(f"{where}: field {key!r} must be an integer")
    return value


def instance_from_dict(data) -> Instance:
    if not isinstance(data, dict):
        raise InstanceFormatError("instance must be a JSON object")
    keys = set(data)
    if keys != _INSTANCE_KEYS:
        extra = sorted(keys - _INSTANCE_KEYS)
        missing = sorted(_INSTANCE_KEYS - keys)
        raise InstanceFormatError(f"bad instance keys (unknown {extra}, missing {missing})")
    machines = _expect_int(data, "machines", "instance")
    if not isinstance(data["jobs"], list):
        raise InstanceFormatError("'jobs' must be a list")
    jobs = []
    for pos, raw in enumerate(data["jobs"]):
        where = f"jobs[{pos}]"
        if not isinstance(raw, dict) or set(raw) != set(_JOB_KEYS):
            raise InstanceFormatError(f"{where}: expected exactly the keys {list(_JOB_KEYS)}")
        values = [_expect_int(raw, k, where) for k in _JOB_KEYS]
        try:
            jobs.append(Job(*values))
        except ValueError as exc:
            raise InstanceFormatError(f"{where}: {exc}") from None
    return Instance(tuple(jobs), machines)


def instance_to_dict(instance: Instance) -> dict:
    return {
        "machines": instance.machines,
        "jobs": [
            {"id": j.id, "release": j.release, "deadline": j.deadline, "processing": j.processing}
            for j in instance.jobs
        ],
    }


def loads_instance(text: str) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"malformed JSON: {exc}") from None
    return instance_from_dict(data)


def dumps_instance(instance: Instance, indent: Optional[int] = 2) -> str:
    return json.dumps(instance_to_dict(instance), indent=indent)


def read_instance(path: Union[str, Path]) -> Instance:
    return loads_instance(Path(path).read_text())


def write_instance(instance: Instance, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps_instance(instance) + "\n")


def make_instance(rows: Sequence[Tuple[int, int, int]], machines: int) -> Instance:
    """Build an instance from ``(release, deadline, processing)`` rows, ids 0..n-1."""
    return Instance(tuple(Job(k, *row) for k, row in enumerate(rows)), machines)
