"""Random agreement checks between the DP, the bounded drivers and the oracle."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, List, Optional

from . import bounds, dp
from .core import Instance, profile, verify_schedule
from .instances import Style, random_instance
from .oracle import SCHEDULE_CAP, brute_force_decide

STYLES = (
    Style(),
    Style.slack(0),
    Style.slack(1),
    Style.slack(2),
    Style.looseness(1),
    Style.looseness(Fraction(3, 2)),
    Style.looseness(2),
)


def random_suite(seed: int, count: int, n_max: int = 6, m_max: int = 3, t_max: int = 12
                 ) -> Iterator[Instance]:
    """Mixed-style instances whose release times and deadlines stay within ``t_max``."""
    if n_max > SCHEDULE_CAP:
        raise ValueError(f"n_max above the oracle cap of {SCHEDULE_CAP}")
    if n_max < 0 or m_max < 1 or t_max < 2:
        raise ValueError("need n_max >= 0, m_max >= 1 and t_max >= 2")
    horizon = max(1, (t_max + 1) // 3)
    # releases < horizon, processing <= horizon, extra slack <= horizon
    styles = [s for s in STYLES
              if s.kind != "slack" or s.limit <= horizon
              if s.kind != "looseness" or s.limit <= 2]
    rng = random.Random(seed)
    for k in range(count):
        n = rng.randint(0, n_max)
        m = rng.randint(1, m_max)
        style = styles[k % len(styles)]
        yield random_instance(rng.getrandbits(32), n, m, style, horizon)


@dataclass
class Outcome:
    instance: Instance
    answers: dict
    problems: List[str] = field(default_factory=list)
    entries_ok: bool = True

    @property
    def agree(self) -> bool:
        return len(set(self.answers.values())) == 1


def check_instance(instance: Instance, budget: int = dp.DEFAULT_BUDGET,
                   backend: Optional[str] = None) -> Outcome:
    kw = dict(budget=budget, backend=backend)
    plain = dp.solve(instance, witness=True, coloring=False, **kw)
    loose = bounds.solve_bounded_looseness(instance, **kw)
    slack = bounds.solve_bounded_slack(instance, **kw)
    truth = brute_force_decide(instance)
    out = Outcome(instance, {
        "dp": plain.feasible,
        "looseness": loose.feasible,
        "slack": slack.feasible,
        "oracle": truth,
    })
    if not out.agree:
        out.problems.append(f"answers differ: {out.answers}")
    if plain.feasible and not verify_schedule(instance, plain.schedule):
        out.problems.append("witness failed verification")
    if not plain.feasible and plain.schedule is not None:
        out.problems.append("schedule emitted for an infeasible instance")
    out.entries_ok = plain.stats.bound_respected()
    if not out.entries_ok:
        out.problems.append("memo entries above the table bound")
    out.problems.extend(bound_violations(instance, truth))
    return out


def bound_violations(instance: Instance, feasible: bool) -> List[str]:
    """Height-bound failures on an instance known to be (in)feasible."""
    if not feasible or instance.n == 0:
        return []
    found = []
    prof = profile(instance)
    m = instance.machines
    if prof.height > bounds.slack_height_bound(m, prof.slack).value:
        found.append("feasible instance above the slack height bound")
    if prof.height > bounds.looseness_height_bound(m, prof.ell, prof.looseness).value:
        found.append("feasible instance above the looseness height bound")
    for mode in ("looseness", "slack", "both"):
        if bounds.precheck(instance, mode).rejected:
            found.append(f"{mode} precheck rejected a feasible instance")
    return found
