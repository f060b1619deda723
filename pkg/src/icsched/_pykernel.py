"""Pure-Python DP kernels.

``JumpKernel`` is the production evaluator.  ``LiteralKernel`` transcribes
the three recurrence cases one-to-one and exists as the reference the fast
path is checked against.

Both memoize ``T[t, S, b]`` keyed by ``(t, mask, b)``.  Rules recorded in
witness mode:

``("base",)``, ``("a",)``, ``("bi", machine)``, ``("bii", pos, machine, v)``

where ``pos`` indexes S_t, ``machine`` indexes the offset vector and, for
``bii``, the job occupies ``[t + v - p, t + v)``.
"""
from __future__ import annotations

import sys
from contextlib import contextmanager

from ._timeline import Timeline, remap

BASE = ("base",)
CASE_A = ("a",)


@contextmanager
def recursion_room(depth: int):
    old = sys.getrecursionlimit()
    if depth > old:
        sys.setrecursionlimit(depth)
    try:
        yield
    finally:
        sys.setrecursionlimit(old)


class _Kernel:
    def __init__(self, tl: Timeline, machines: int, record: bool = False):
        self.tl = tl
        self.m = machines
        self.ell = tl.ell
        self.record = record
        self.memo: dict = {}
        self.rules: dict = {}

    @property
    def entries(self) -> int:
        return len(self.memo)

    def rule(self, t, mask, b):
        return self.rules.get((t, mask, tuple(b)))

    def _descend(self, t, mask, b):
        """Follow case (a) down from (t, mask, b) until it no longer applies.

        Returns the visited keys and the first state where (a) fails or a
        memoized value is found.
        """
        tl = self.tl
        ell = self.ell
        memo = self.memo
        seg_start = tl.seg_start
        s = tl.segment(t)
        chain = []
        key = (t, mask, b)
        while key not in memo and t >= 1:
            if t == seg_start[s]:
                if mask & tl.seg_new[s]:
                    break
                mask = remap(tl.seg_prev[s], mask) | tl.seg_due[s]
                s -= 1
            chain.append(key)
            b = tuple(x + 1 if x < ell else ell for x in b)
            t -= 1
            key = (t, mask, b)
        return chain, key

    def value(self, t, mask, b) -> bool:
        b = tuple(b)
        chain, key = self._descend(t, mask, b)
        memo = self.memo
        if key in memo:
            val = memo[key]
        elif key[0] == 0 and key[1] == 0:
            val = memo[key] = True
            if self.record:
                self.rules[key] = BASE
        else:
            val = self._case_b(*key)
            memo[key] = val
        for k in chain:
            memo[k] = val
            if self.record:
                self.rules[k] = CASE_A
        return val


class JumpKernel(_Kernel):
    """Case (b) with the (b)(i) descents collapsed.

    T[t, S, .] is monotone in the offset vector, so walking one machine's
    offset down before a placement never beats placing the job with that
    machine's offset clipped to the job's deadline.  Offset vectors are kept
    sorted because machines are interchangeable.
    """

    def _case_b(self, t, mask, b):
        tl = self.tl
        members = tl.live(t)
        rel, dl, proc = tl.rel, tl.dl, tl.proc
        m = self.m
        pos = 0
        rest = mask
        while rest:
            if rest & 1:
                k = members[pos]
                room = dl[k] - t
                earliest = rel[k] - t + proc[k]
                sub = mask & ~(1 << pos)
                last = None
                for i in range(m):
                    bi = b[i]
                    if bi == last:
                        continue
                    last = bi
                    v = bi if bi < room else room
                    if v <= 0 or v < earliest:
                        continue
                    nb = list(b)
                    nb[i] = v - proc[k]
                    nb.sort()
                    if self.value(t, sub, tuple(nb)):
                        if self.record:
                            self.rules[(t, mask, b)] = ("bii", pos, i, v)
                        return True
            rest >>= 1
            pos += 1
        return False

    def run(self, t, mask, b) -> bool:
        with recursion_room(8 * (self.tl.n + self.m) + 200):
            return self.value(t, mask, tuple(sorted(b)))


class LiteralKernel(_Kernel):
    """All three cases exactly as stated, no symmetry reduction."""

    def _case_b(self, t, mask, b):
        tl = self.tl
        ell = self.ell
        m = self.m
        for i in range(m):
            if b[i] > -ell:
                nb = list(b)
                nb[i] -= 1
                if self.value(t, mask, tuple(nb)):
                    if self.record:
                        self.rules[(t, mask, b)] = ("bi", i)
                    return True
        members = tl.live(t)
        for pos, k in enumerate(members):
            if not mask >> pos & 1:
                continue
            sub = mask & ~(1 << pos)
            for i in range(m):
                bi = b[i]
                if bi > 0 and t + bi <= tl.dl[k] and t + bi - tl.proc[k] >= tl.rel[k]:
                    nb = list(b)
                    nb[i] = bi - tl.proc[k]
                    if self.value(t, sub, tuple(nb)):
                        if self.record:
                            self.rules[(t, mask, b)] = ("bii", pos, i, bi)
                        return True
        return False

    def run(self, t, mask, b) -> bool:
        depth = 4 * (self.tl.n + 1) * (2 * self.ell + 2) * max(self.m, 1) + 200
        with recursion_room(depth):
            return self.value(t, mask, tuple(b))
