from hypothesis import strategies as st

from icsched.core import Instance, Job, make_instance
from icsched.instances import reduce_bin_packing
from icsched.oracle import BinPackingInstance

I1 = make_instance([(0, 2, 2)], 1)
I2 = make_instance([(0, 3, 2), (1, 3, 2)], 1)
FIVE_UNIT = make_instance([(0, 1, 1)] * 5, 1)
PACKING = BinPackingInstance(3, (1, 2, 2, 3), 3)


def reduced():
    return reduce_bin_packing(PACKING, 1)


@st.composite
def instances(draw, max_n=5, max_m=3, max_time=10, fitting=True):
    n = draw(st.integers(0, max_n))
    m = draw(st.integers(1, max_m))
    jobs = []
    for k in range(n):
        release = draw(st.integers(0, max_time - 1))
        deadline = draw(st.integers(release + 1, max_time))
        if fitting:
            proc = draw(st.integers(1, deadline - release))
        else:
            proc = draw(st.integers(1, max_time))
        jobs.append(Job(k, release, deadline, proc))
    return Instance(tuple(jobs), m)


@st.composite
def bin_packings(draw, max_n=5, max_value=5, max_bins=3, max_volume=15):
    n = draw(st.integers(2, max_n))
    items = tuple(draw(st.lists(st.integers(1, max_value), min_size=n, max_size=n)))
    bins = draw(st.integers(1, min(max_bins, n)))
    volume = draw(st.integers(1, max_volume))
    return BinPackingInstance(volume, items, bins)
