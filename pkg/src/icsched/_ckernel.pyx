# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled twin of ``_pykernel.JumpKernel``.

Keys pack ``(t, mask, b)`` into one integer below the table-size bound, so the
caller must check ``fits`` first.
"""
from libc.stdint cimport int32_t, int64_t, uint64_t
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector

import numpy as np

cdef enum:
    MAXM = 32

cdef enum:
    RULE_BASE = 1
    RULE_A = 2
    RULE_BII = 3


def fits(int width, int machines, bound):
    return width <= 62 and 1 <= machines <= MAXM and bound < 2 ** 63


cdef inline void _sink(int64_t* b, int i) noexcept nogil:
    # b[i] just decreased; restore ascending order
    cdef int64_t x = b[i]
    while i > 0 and b[i - 1] > x:
        b[i] = b[i - 1]
        i -= 1
    b[i] = x


cdef class JumpKernel:
    cdef int m
    cdef int width
    cdef int64_t ell
    cdef uint64_t radix
    cdef uint64_t span
    cdef bint record
    cdef int64_t[::1] rel
    cdef int64_t[::1] dl
    cdef int64_t[::1] proc
    cdef int nseg
    cdef int64_t[::1] seg_start
    cdef int32_t[:, ::1] members
    cdef int32_t[:, ::1] prev_pos
    cdef uint64_t[::1] new_mask
    cdef uint64_t[::1] due_mask
    cdef unordered_map[uint64_t, char] memo
    cdef unordered_map[uint64_t, int64_t] rules

    def __init__(self, tl, int machines, bint record=False):
        cdef Py_ssize_t t, p
        if not 1 <= machines <= MAXM:
            raise ValueError("machine count outside compiled kernel range")
        self.m = machines
        self.width = max(tl.width, 1)
        self.ell = tl.ell
        self.radix = 2 * tl.ell + 1
        self.span = 1
        for _ in range(machines):
            self.span *= self.radix
        self.record = record
        self.rel = np.asarray(tl.rel, dtype=np.int64)
        self.dl = np.asarray(tl.dl, dtype=np.int64)
        self.proc = np.asarray(tl.proc, dtype=np.int64)
        self.nseg = tl.segments
        self.seg_start = np.asarray(tl.seg_start, dtype=np.int64)
        members = np.full((self.nseg, self.width), -1, dtype=np.int32)
        prev_pos = np.full((self.nseg, self.width), -1, dtype=np.int32)
        for t in range(self.nseg):
            row = tl.seg_live[t]
            if row:
                members[t, :len(row)] = row
                prev_pos[t, :len(row)] = tl.seg_prev[t]
        self.members = members
        self.prev_pos = prev_pos
        self.new_mask = np.asarray(tl.seg_new, dtype=np.uint64)
        self.due_mask = np.asarray(tl.seg_due, dtype=np.uint64)

    @property
    def entries(self):
        return self.memo.size()

    cdef inline uint64_t _key(self, int64_t t, uint64_t mask, int64_t* b) noexcept nogil:
        cdef uint64_t idx = 0
        cdef int i
        for i in range(self.m - 1, -1, -1):
            idx = idx * self.radix + <uint64_t>(b[i] + self.ell)
        return ((<uint64_t>t << self.width) | mask) * self.span + idx

    cdef int _segment(self, int64_t t) noexcept nogil:
        cdef int lo = 0
        cdef int hi = self.nseg
        cdef int mid
        # last segment starting at or before t
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.seg_start[mid] <= t:
                lo = mid
            else:
                hi = mid
        return lo

    cdef uint64_t _remap(self, int s, uint64_t mask) noexcept nogil:
        cdef uint64_t out = 0
        cdef int p = 0
        while mask:
            if mask & 1:
                out |= (<uint64_t>1) << self.prev_pos[s, p]
            mask >>= 1
            p += 1
        return out

    cdef char _value(self, int64_t t, uint64_t mask, int64_t* b_in):
        cdef int64_t b[MAXM]
        cdef int i
        cdef vector[uint64_t] chain
        cdef uint64_t key
        cdef char val
        cdef bint found = False
        cdef int s = self._segment(t)
        for i in range(self.m):
            b[i] = b_in[i]
        while True:
            key = self._key(t, mask, b)
            it = self.memo.find(key)
            if it != self.memo.end():
                val = self.memo[key]
                found = True
                break
            if t >= 1:
                if t == self.seg_start[s]:
                    if mask & self.new_mask[s]:
                        break
                    mask = self._remap(s, mask) | self.due_mask[s]
                    s -= 1
                chain.push_back(key)
                for i in range(self.m):
                    if b[i] < self.ell:
                        b[i] += 1
                t -= 1
                continue
            break
        if not found:
            if t == 0 and mask == 0:
                val = 1
                if self.record:
                    self.rules[key] = RULE_BASE
            else:
                val = self._case_b(t, s, mask, b, key)
            self.memo[key] = val
        for k in chain:
            self.memo[k] = val
            if self.record:
                self.rules[k] = RULE_A
        return val

    cdef char _case_b(self, int64_t t, int s, uint64_t mask, int64_t* b, uint64_t key):
        cdef int64_t nb[MAXM]
        cdef uint64_t rest = mask
        cdef uint64_t sub
        cdef int pos = 0
        cdef int i, q
        cdef int32_t k
        cdef int64_t room, earliest, v, bi
        while rest:
            if rest & 1:
                k = self.members[s, pos]
                room = self.dl[k] - t
                earliest = self.rel[k] - t + self.proc[k]
                sub = mask & ~((<uint64_t>1) << pos)
                for i in range(self.m):
                    bi = b[i]
                    if i > 0 and b[i - 1] == bi:
                        continue
                    v = bi if bi < room else room
                    if v <= 0 or v < earliest:
                        continue
                    for q in range(self.m):
                        nb[q] = b[q]
                    nb[i] = v - self.proc[k]
                    _sink(nb, i)
                    if self._value(t, sub, nb):
                        if self.record:
                            self.rules[key] = RULE_BII | (<int64_t>pos << 2) | (<int64_t>i << 10) | (v << 16)
                        return 1
            rest >>= 1
            pos += 1
        return 0

    def run(self, int64_t t, uint64_t mask, b):
        cdef int64_t arr[MAXM]
        cdef int i
        vals = sorted(b)
        if len(vals) != self.m:
            raise ValueError("offset vector length must equal the machine count")
        for i in range(self.m):
            arr[i] = vals[i]
        return bool(self._value(t, mask, arr))

    def rule(self, int64_t t, uint64_t mask, b):
        cdef int64_t arr[MAXM]
        cdef int i
        for i in range(self.m):
            arr[i] = b[i]
        key = self._key(t, mask, arr)
        it = self.rules.find(key)
        if it == self.rules.end():
            return None
        code = self.rules[key]
        kind = code & 3
        if kind == RULE_BASE:
            return ("base",)
        if kind == RULE_A:
            return ("a",)
        return ("bii", (code >> 2) & 0xFF, (code >> 10) & 0x3F, code >> 16)
