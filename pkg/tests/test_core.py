import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icsched.core import (Instance, InstanceFormatError, Job, Schedule, dumps_instance, height,
                          instance_from_dict, instance_to_dict, jobs_due_by, jobs_live_at,
                          loads_instance, make_instance, profile, read_instance, split_at_gaps,
                          validate, verify_schedule, write_instance)
from icsched.dp import solve_with_witness

from helpers import I1, I2, reduced, instances


def scan_height(inst):
    # independent oracle: count live windows at every integer time
    if not inst.jobs:
        return 0
    lo = min(j.release for j in inst.jobs)
    hi = max(j.deadline for j in inst.jobs)
    return max(len(jobs_live_at(inst, t)) for t in range(lo, hi + 1))


class TestValidate:
    def test_well_formed(self):
        assert validate(I1) == []

    def test_window_too_short(self):
        report = validate(make_instance([(0, 2, 3)], 1))
        assert len(report) == 1 and "window too short" in report[0]

    def test_no_machines(self):
        assert validate(Instance((), 0)) == ["machines < 1"]

    def test_duplicate_ids(self):
        inst = Instance((Job(3, 0, 2, 1), Job(3, 1, 4, 1)), 1)
        assert any("duplicate" in r for r in validate(inst))

    def test_negative_times_rejected(self):
        with pytest.raises(ValueError):
            Job(0, -1, 2, 1)

    def test_m_above_n_allowed(self):
        assert validate(make_instance([(0, 1, 1)], 5)) == []


class TestProfile:
    def test_two_jobs(self):
        p = profile(I2)
        assert (p.n, p.ell, p.t_max, p.slack, p.height) == (2, 3, 1, 1, 2)
        assert p.looseness == Fraction(3, 2)
        assert isinstance(p.looseness, Fraction)

    def test_chain_height(self):
        inst = make_instance([(0, 2, 1), (1, 3, 1), (2, 4, 1)], 1)
        assert height(inst) == 2

    def test_touching_windows_do_not_overlap(self):
        assert height(make_instance([(0, 2, 1), (2, 4, 1)], 1)) == 1

    def test_reduced_height(self):
        inst = reduced().instance
        assert scan_height(inst) == 6
        assert profile(inst).height == 6

    def test_short_window_flagged(self):
        assert profile(make_instance([(0, 2, 3)], 1)).trivially_infeasible

    def test_empty(self):
        p = profile(Instance((), 1))
        assert p.n == 0 and p.height == 0

    @given(instances(max_n=6, max_time=12))
    def test_height_matches_scan(self, inst):
        assert profile(inst).height == scan_height(inst)

    @given(instances(max_n=6, max_time=12))
    def test_looseness_slack_relation(self, inst):
        p = profile(inst)
        if inst.n == 0:
            return
        assert p.looseness >= 1 and p.slack >= 0
        assert p.slack <= (p.looseness - 1) * max(j.processing for j in inst.jobs)
        assert 1 <= p.height <= p.n

    @given(instances(max_n=6, max_time=12), st.integers(0, 50))
    def test_shift_invariance(self, inst, delta):
        a, b = profile(inst), profile(inst.shifted(delta))
        assert (a.ell, a.looseness, a.slack, a.height) == (b.ell, b.looseness, b.slack, b.height)


class TestLiveAndDue:
    def test_live(self):
        assert jobs_live_at(I2, 0) == {0}
        assert jobs_live_at(I2, 2) == {0, 1}
        assert jobs_live_at(I2, 3) == set()

    def test_due(self):
        assert jobs_due_by(I2, 3) == {0, 1}
        assert jobs_due_by(I2, 2) == set()
        assert jobs_due_by(I2, 10) == {0, 1}


class TestSplit:
    def test_gap(self):
        parts = split_at_gaps(make_instance([(0, 2, 1), (5, 7, 1)], 1))
        assert [[j.id for j in p.jobs] for p in parts] == [[0], [1]]
        assert all(p.machines == 1 for p in parts)

    def test_no_gap(self):
        assert split_at_gaps(I2) == [I2]

    def test_empty(self):
        assert split_at_gaps(Instance((), 2)) == []

    @given(instances(max_n=7, max_time=15))
    def test_parts_cover_and_are_disjoint(self, inst):
        parts = split_at_gaps(inst)
        ids = sorted(j.id for p in parts for j in p.jobs)
        assert ids == sorted(j.id for j in inst.jobs)
        for a, b in zip(parts, parts[1:]):
            assert max(j.deadline for j in a.jobs) <= min(j.release for j in b.jobs)
        assert all(p.machines == inst.machines for p in parts)


class TestVerify:
    def test_exact_fit(self):
        assert verify_schedule(I1, Schedule({0: (1, 0)}))

    def test_late(self):
        assert not verify_schedule(I1, Schedule({0: (1, 1)}))

    def test_overlap_same_machine(self):
        inst = make_instance([(0, 5, 2), (0, 5, 2)], 1)
        assert not verify_schedule(inst, Schedule({0: (1, 0), 1: (1, 1)}))

    def test_missing_and_extra(self):
        assert not verify_schedule(I2, Schedule({0: (1, 0)}))
        assert not verify_schedule(I1, Schedule({0: (1, 0), 9: (1, 0)}))

    def test_bad_machine(self):
        assert not verify_schedule(I1, Schedule({0: (2, 0)}))

    @settings(max_examples=60)
    @given(instances(max_n=5, max_time=10), st.integers(0, 20))
    def test_witness_and_shift(self, inst, delta):
        sched = solve_with_witness(inst)
        if sched is None:
            return
        assert verify_schedule(inst, sched)
        assert verify_schedule(inst.shifted(delta), sched.shifted(delta))


class TestJson:
    def test_round_trip_keeps_order(self):
        inst = Instance((Job(7, 1, 4, 2), Job(2, 0, 3, 1)), 2)
        again = loads_instance(dumps_instance(inst))
        assert again == inst
        assert [j.id for j in again.jobs] == [7, 2]

    def test_file_round_trip(self, tmp_path):
        path = tmp_path / "i.json"
        write_instance(I2, path)
        assert read_instance(path) == I2

    def test_schema(self):
        d = instance_to_dict(I1)
        assert d == {"machines": 1, "jobs": [{"id": 0, "release": 0, "deadline": 2, "processing": 2}]}

    @pytest.mark.parametrize("data", [
        {"machines": 1, "jobs": [], "extra": 1},
        {"machines": 1, "jobs": [{"id": 0, "release": 0, "deadline": 2, "processing": 1, "w": 3}]},
        {"machines": 1, "jobs": [{"id": 0, "release": 0, "deadline": 2}]},
        {"machines": 1.5, "jobs": []},
        {"machines": True, "jobs": []},
        {"jobs": []},
        [],
    ])
    def test_strict(self, data):
        with pytest.raises(InstanceFormatError):
            instance_from_dict(data)

    def test_malformed_text(self):
        with pytest.raises(InstanceFormatError):
            loads_instance("{not json")

    @given(instances(max_n=6, max_time=20))
    def test_round_trip_property(self, inst):
        assert loads_instance(json.dumps(instance_to_dict(inst))) == inst
