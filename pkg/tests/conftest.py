import time

import pytest

from arrlog.graphic import bipartite_2m, graphic_arrangement
from arrlog.logder import degree_sequence


@pytest.fixture(scope="session")
def k26_sequence():
    # the slowest case in the suite, computed once; elapsed time kept for the time limit check
    start = time.perf_counter()
    seq = degree_sequence(graphic_arrangement(bipartite_2m(6)))
    seq.elapsed = time.perf_counter() - start
    return seq
