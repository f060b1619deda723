"""Exact feasibility, height bounds and instance tools for scheduling jobs with
release times and deadlines on identical machines."""
from .bounds import (looseness_height_bound, min_machines, min_machines_lower_bound, precheck,
                     slack_height_bound, solve_bounded_looseness, solve_bounded_slack)
from .core import (Instance, InstanceProfile, Job, Schedule, jobs_due_by, jobs_live_at,
                   make_instance, profile, split_at_gaps, validate, verify_schedule)
from .dp import BudgetExceeded, DpState, DpTable, decide, dp_entry, solve, solve_with_witness
from .instances import (ReductionOutput, Style, random_instance, reduce_bin_packing,
                        schedule_from_partition, verify_reduction)
from .oracle import (BinPackingInstance, bin_packing_decide, brute_force_decide,
                     brute_force_schedule)

__version__ = "0.1.0"
