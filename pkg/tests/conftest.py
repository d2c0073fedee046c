import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from qsbo import sim
from qsbo.distributions import DiscreteDistribution
from qsbo.newsvendor import NewsvendorInstance
from qsbo.sim import Circuit, Statevector

settings.register_profile("default", deadline=None, max_examples=50,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# lines appended by tests/test_acceptance.py, echoed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def random_instance(rng, n=3, t_max=0.5):
    p = rng.dirichlet(np.ones(1 << n))
    r = rng.uniform(0.5, 1.5)
    c = rng.uniform(0.05, 0.9) * r
    t = rng.uniform(0, t_max)
    return NewsvendorInstance(r=r, c=c, t=t, demand=DiscreteDistribution(p))


def random_circuit(rng, n, num_gates):
    circ = Circuit(n)
    for _ in range(num_gates):
        kind = rng.integers(7)
        q = [int(v) for v in rng.permutation(n)]
        ang = float(rng.uniform(-math.pi, math.pi))
        if kind == 0:
            circ.append(sim.h(q[0]))
        elif kind == 1:
            circ.append(sim.ry(ang, q[0]))
        elif kind == 2:
            circ.append(sim.phase(ang, q[0]))
        elif n >= 2 and kind == 3:
            circ.append(sim.cnot(q[0], q[1]))
        elif n >= 2 and kind == 4:
            circ.append(sim.cry(ang, q[0], q[1]))
        elif n >= 3 and kind == 5:
            circ.append(sim.ccx(q[0], q[1], q[2]))
        elif n >= 2:
            circ.append(sim.swap(q[0], q[1]))
        else:
            circ.append(sim.x(q[0]))
    return circ


def random_state(rng, n):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return Statevector(n, v / np.linalg.norm(v))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
