import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icsched import dp
from icsched.core import Instance, make_instance, profile, split_at_gaps, verify_schedule
from icsched.dp import (BudgetExceeded, DpState, DpTable, decide, dp_entry, entry_bound, solve,
                        solve_with_witness)
from icsched.instances import random_instance
from icsched.crosscheck import STYLES
from icsched.oracle import brute_force_decide

from helpers import FIVE_UNIT, I1, I2, reduced, instances


def suite(seed, count, n_max=6, m_max=3, horizon=4):
    rng = random.Random(seed)
    for k in range(count):
        yield random_instance(rng.getrandbits(32), rng.randint(0, n_max), rng.randint(1, m_max),
                              STYLES[k % len(STYLES)], horizon)


class TestEntries:
    def test_exact_fit_placement(self):
        table = DpTable(I1)
        state = DpState(0, {0}, (2,))
        assert dp_entry(I1, state, table) == 1
        assert table.rule(state) == ("bii", 0, 0, 2)
        assert dp_entry(I1, DpState(0, set(), (0,)), table) == 1

    def test_too_little_room(self):
        table = DpTable(I1)
        assert dp_entry(I1, DpState(0, {0}, (1,)), table) == 0
        for b in range(-2, 2):
            assert dp_entry(I1, DpState(0, {0}, (b,)), table) == 0

    def test_base_row(self):
        for inst in (I1, I2, I2.with_machines(2)):
            ell = profile(inst).ell
            m = inst.machines
            assert dp_entry(inst, DpState(0, set(), (-ell,) * m)) == 1

    def test_case_a_at_later_time(self):
        # at t=1 job B is live and not in S_0, so case (a) cannot fire
        table = DpTable(I2)
        assert dp_entry(I2, DpState(1, {0, 1}, (3,)), table) == 0
        two = I2.with_machines(2)
        assert dp_entry(two, DpState(1, {0, 1}, (3, 3))) == 1

    def test_state_checks(self):
        table = DpTable(I1)
        with pytest.raises(ValueError):
            table.key(DpState(5, set(), (0,)))
        with pytest.raises(ValueError):
            table.key(DpState(0, set(), (3,)))
        with pytest.raises(ValueError):
            table.key(DpState(0, set(), (0, 0)))
        with pytest.raises(ValueError):
            table.key(DpState(0, {9}, (0,)))


class TestDecide:
    def test_examples(self):
        assert decide(I1)
        assert not decide(I2)
        assert decide(I2.with_machines(2))
        assert decide(reduced().instance)

    def test_empty_is_feasible(self):
        assert decide(Instance((), 1))
        assert solve_with_witness(Instance((), 3)).assignments == {}

    def test_short_window_short_circuits(self):
        res = solve(make_instance([(0, 2, 3), (0, 5, 1)], 2))
        assert not res.feasible and not res.stats.dp_invoked

    def test_witness_examples(self):
        assert solve_with_witness(I1).assignments == {0: (1, 0)}
        w = solve_with_witness(I2.with_machines(2))
        assert verify_schedule(I2.with_machines(2), w)
        assert w.machine_of(0) != w.machine_of(1)
        assert (w.start_of(0), w.start_of(1)) == (0, 1)
        assert solve_with_witness(I2) is None

    def test_reduced_witness(self, backend):
        inst = reduced().instance
        res = solve(inst, witness=True, backend=backend)
        assert res.feasible and res.stats.dp_invoked
        assert verify_schedule(inst, res.schedule)
        assert res.stats.bound_respected()

    def test_budget_guard(self):
        with pytest.raises(BudgetExceeded, match="budget"):
            solve(reduced().instance, budget=1000)

    def test_budget_skipped_when_colourable(self):
        assert solve(reduced().instance.with_machines(6), budget=1).feasible

    def test_unknown_options(self):
        with pytest.raises(ValueError):
            solve(I1, strategy="bottom-up")
        with pytest.raises(ValueError):
            solve(I1, backend="fortran")

    def test_entry_bound(self):
        assert entry_bound(3, 2, 1, 2) == 4 * 4 * 9


class TestEquivalence:
    @pytest.mark.parametrize("seed", range(4))
    def test_against_oracle(self, seed, backend):
        for inst in suite(seed, 120):
            truth = brute_force_decide(inst)
            res = solve(inst, witness=True, coloring=False, backend=backend)
            assert res.feasible == truth, inst
            assert res.stats.bound_respected()
            if truth:
                assert verify_schedule(inst, res.schedule)
            else:
                assert res.schedule is None

    @pytest.mark.parametrize("seed", range(3))
    def test_literal_matches_jump(self, seed):
        for inst in suite(100 + seed, 80, n_max=4, m_max=2, horizon=3):
            lit = solve(inst, witness=True, coloring=False, strategy="literal", backend="python")
            jump = solve(inst, coloring=False, backend="python")
            assert lit.feasible == jump.feasible, inst
            assert lit.stats.bound_respected()
            if lit.feasible:
                assert verify_schedule(inst, lit.schedule)

    def test_backends_agree(self):
        if "cython" not in dp.available_backends():
            pytest.skip("compiled kernel not built")
        for inst in suite(7, 200):
            py = solve(inst, coloring=False, backend="python")
            cy = solve(inst, coloring=False, backend="cython")
            assert py.feasible == cy.feasible
            assert py.stats.memo_entries == cy.stats.memo_entries

    def test_coloring_shortcut_agrees(self):
        for inst in suite(11, 200):
            assert decide(inst) == decide(inst, coloring=False)


class TestMetamorphic:
    @settings(max_examples=80, deadline=None)
    @given(instances(max_n=5, max_time=10), st.integers(1, 30))
    def test_shift(self, inst, delta):
        assert decide(inst) == decide(inst.shifted(delta))

    @settings(max_examples=80, deadline=None)
    @given(instances(max_n=5, max_m=2, max_time=10))
    def test_more_machines(self, inst):
        if decide(inst):
            assert decide(inst.with_machines(inst.machines + 1))

    @settings(max_examples=80, deadline=None)
    @given(instances(max_n=6, max_time=14))
    def test_gap_parts(self, inst):
        parts = split_at_gaps(inst)
        assert decide(inst) == all(decide(p) for p in parts)

    def test_five_unit_jobs(self):
        assert not decide(FIVE_UNIT.with_machines(4))
        assert decide(FIVE_UNIT.with_machines(5))
