"""Live-set tables shared by the DP kernels.

Live sets only change where a window opens or closes, so times are grouped
into segments ``[seg_start[s], seg_start[s+1])`` with one live set each.
Members of a live set are indexed by ascending job id; a subset is a bit mask
over those positions.

For ``s >= 1`` the segment also describes the step from time
``seg_start[s]`` down to ``seg_start[s] - 1``:

``seg_new[s]``
    positions whose job is released exactly at ``seg_start[s]``;
``seg_prev[s][k]``
    position in segment ``s-1`` of the job at position ``k`` (-1 if new);
``seg_due[s]``
    positions in segment ``s-1`` of jobs due exactly at ``seg_start[s]``.

Inside a segment the downward step is the identity.
"""
from __future__ import annotations

from bisect import bisect_right
from typing import List, Sequence, Tuple

from .core import Job


class Timeline:
    def __init__(self, jobs: Sequence[Job]):
        jobs = sorted(jobs, key=lambda j: j.id)
        self.ids = [j.id for j in jobs]
        self.rel = [j.release for j in jobs]
        self.dl = [j.deadline for j in jobs]
        self.proc = [j.processing for j in jobs]
        self.n = len(jobs)
        self.ell = max((d - r for r, d in zip(self.rel, self.dl)), default=0)
        self.t_max = max(self.rel, default=0)

        starts: dict = {}
        ends: dict = {}
        for k in range(self.n):
            starts.setdefault(self.rel[k], []).append(k)
            ends.setdefault(self.dl[k], []).append(k)
        events = sorted({0} | {t for t in list(starts) + list(ends) if t <= self.t_max})

        self.seg_start: List[int] = []
        self.seg_live: List[Tuple[int, ...]] = []
        self.seg_new: List[int] = []
        self.seg_due: List[int] = []
        self.seg_prev: List[Tuple[int, ...]] = []
        current: Tuple[int, ...] = ()
        for t in events:
            prev = current
            gone = set(ends.get(t, ()))
            current = tuple(sorted([k for k in prev if k not in gone] + starts.get(t, [])))
            where = {k: p for p, k in enumerate(prev)}
            pp = tuple(where.get(k, -1) for k in current)
            self.seg_start.append(t)
            self.seg_live.append(current)
            self.seg_prev.append(pp)
            self.seg_new.append(sum(1 << p for p, q in enumerate(pp) if q < 0))
            self.seg_due.append(sum(1 << p for p, k in enumerate(prev) if k in gone))
        self.width = max((len(s) for s in self.seg_live), default=0)

    @property
    def segments(self) -> int:
        return len(self.seg_start)

    def segment(self, t: int) -> int:
        return bisect_right(self.seg_start, t) - 1

    def live(self, t: int) -> Tuple[int, ...]:
        return self.seg_live[self.segment(t)]

    def full_mask(self, t: int) -> int:
        return (1 << len(self.live(t))) - 1

    def step_down(self, t: int, mask: int) -> int:
        """Subset of S_t (inside S_{t-1}) re-indexed at t-1, plus jobs due at t."""
        s = self.segment(t)
        if self.seg_start[s] != t:
            return mask
        return remap(self.seg_prev[s], mask) | self.seg_due[s]

    def released_at(self, t: int) -> int:
        s = self.segment(t)
        return self.seg_new[s] if self.seg_start[s] == t else 0

    def encode(self, t: int, job_ids) -> int:
        pos = {self.ids[k]: p for p, k in enumerate(self.live(t))}
        mask = 0
        for jid in job_ids:
            if jid not in pos:
                raise ValueError(f"job {jid} is not live at time {t}")
            mask |= 1 << pos[jid]
        return mask

    def decode(self, t: int, mask: int) -> frozenset:
        members = self.live(t)
        return frozenset(self.ids[members[p]] for p in range(len(members)) if mask >> p & 1)


def remap(prev_pos: Sequence[int], mask: int) -> int:
    out = 0
    p = 0
    while mask:
        if mask & 1:
            out |= 1 << prev_pos[p]
        mask >>= 1
        p += 1
    return out
