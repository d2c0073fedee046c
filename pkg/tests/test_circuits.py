import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qsbo import sim
from qsbo.circuits import (AnsatzSpec, LinearPayoffTerm, ScalingSpec, build_ansatz, build_comparator,
                           build_distribution_loader, build_grover_operator, build_newsvendor_A,
                           build_payoff_rotation, build_qft, comparator_metrics)
from qsbo.distributions import DiscreteDistribution
from qsbo.errors import StructuralError, ValidationError
from qsbo.newsvendor import NewsvendorInstance, profit_grid, scaling_for
from qsbo.sim import Circuit, Statevector
from qsbo.solver import supply_pmf

from conftest import random_circuit, random_instance


def comparator_output(comp, n, a, b, z):
    idx = a | (b << n) | (z << (2 * n))
    out = sim.apply_circuit(Statevector.basis(comp.num_qubits, idx), comp)
    return int(np.argmax(np.abs(out.amplitudes)))


def test_loader_point_mass_is_identity():
    out = sim.run(build_distribution_loader([1.0, 0, 0, 0]))
    assert np.allclose(out.amplitudes, [1, 0, 0, 0])


def test_loader_uniform():
    assert np.allclose(sim.run(build_distribution_loader([0.25] * 4)).probabilities(), 0.25)


@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_loader_random_pmf(n, seed):
    p = np.random.default_rng(seed).dirichlet(np.ones(1 << n))
    amps = sim.run(build_distribution_loader(p)).amplitudes
    assert np.allclose(np.abs(amps) ** 2, p, atol=1e-9)
    assert np.all(amps.real > -1e-12) and np.allclose(amps.imag, 0)


def test_loader_rejects_bad_pmf():
    with pytest.raises(ValidationError):
        build_distribution_loader([0.5, 0.6])
    with pytest.raises(ValidationError):
        build_distribution_loader([1.2, -0.2])


def test_ansatz_examples():
    assert np.allclose(sim.run(build_ansatz(AnsatzSpec(3, 2, [0.0] * 9))).amplitudes[0], 1)
    amps = sim.run(build_ansatz(AnsatzSpec(1, 0, [math.pi / 2]))).amplitudes
    assert np.allclose(amps, [math.cos(math.pi / 4), math.sin(math.pi / 4)])
    c = build_ansatz(AnsatzSpec(4, 2, [0.1] * 12))
    assert len(c) == 18
    assert c.count_ops() == {"RY": 12, "CZ": 6}
    with pytest.raises(ValidationError):
        AnsatzSpec(3, 2, [0.0] * 8)


def test_comparator_examples():
    comp = build_comparator(2)
    z = comp["z"][0]
    assert (comparator_output(comp, 2, 3, 3, 0) >> z) & 1 == 1
    assert (comparator_output(comp, 2, 0, 1, 0) >> z) & 1 == 0
    with pytest.raises(ValidationError):
        build_comparator(0)


def test_comparator_exhaustive_n3():
    n = 3
    comp = build_comparator(n)
    for a in range(1 << n):
        for b in range(1 << n):
            out = comparator_output(comp, n, a, b, 0)
            assert out == a | (b << n) | (int(b <= a) << (2 * n))


def test_comparator_metrics_self_consistent():
    for n in range(1, 7):
        size, depth = comparator_metrics(n)
        assert size == len(build_comparator(n).gates)
        assert depth == build_comparator(n).depth()


def test_payoff_constant_term():
    scaling = ScalingSpec(0.1, -1.0, 1.0)
    # f = 0 is the midpoint, so the angle is exactly pi/4
    circ = build_payoff_rotation([LinearPayoffTerm(0.0)], [0, 1], 2, scaling)
    for i in range(4):
        out = sim.apply_circuit(Statevector.basis(3, i), circ)
        assert sim.qubit_one_probability(out, 2) == pytest.approx(0.5, abs=1e-12)


def test_payoff_zero_index_uses_offset_only():
    scaling = ScalingSpec(0.2, 0.0, 10.0)
    circ = build_payoff_rotation([LinearPayoffTerm(1.5, offset=2.0)], [0, 1, 2], 3, scaling)
    out = sim.apply_circuit(Statevector.zero(4), circ)
    assert sim.qubit_one_probability(out, 3) == pytest.approx(float(scaling.probability(2.0)), abs=1e-12)


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0.01, 1.0))
def test_payoff_pointwise_law(slope, offset, c):
    f = slope * np.arange(8) + offset
    lo, hi = float(f.min()), float(f.max())
    if hi - lo < 1e-6:
        hi = lo + 1.0
    scaling = ScalingSpec(c, lo, hi)
    circ = build_payoff_rotation([LinearPayoffTerm(slope, offset)], [0, 1, 2], 3, scaling)
    for i in range(8):
        out = sim.apply_circuit(Statevector.basis(4, i), circ)
        assert sim.qubit_one_probability(out, 3) == pytest.approx(float(scaling.probability(f[i])), abs=1e-9)


def test_payoff_overlap_is_structural_error():
    with pytest.raises(StructuralError):
        build_payoff_rotation([LinearPayoffTerm(1.0)], [0, 1], 1, ScalingSpec(0.1, 0, 1))


def _prob_one(A):
    return sim.qubit_one_probability(sim.run(A), A["objective"][0])


def test_newsvendor_A_point_demand_point_supply():
    inst = NewsvendorInstance(r=0.6, c=0.2, t=0.1, demand=DiscreteDistribution.point(5, 3))
    scaling = scaling_for(inst, 0.1)
    theta = np.zeros(9)
    theta[[0, 2]] = math.pi  # supply |101> = 5
    A = build_newsvendor_A(AnsatzSpec(3, 2, theta), build_distribution_loader(inst.demand), inst, scaling)
    assert _prob_one(A) == pytest.approx(float(scaling.probability(1.9)), abs=1e-10)


def test_newsvendor_A_zero_supply(rng):
    inst = random_instance(rng)
    scaling = scaling_for(inst, 0.1)
    A = build_newsvendor_A(AnsatzSpec(3, 2, np.zeros(9)), build_distribution_loader(inst.demand), inst, scaling)
    assert _prob_one(A) == pytest.approx(float(scaling.probability(0.0)), abs=1e-10)


@given(st.integers(0, 2**32 - 1))
def test_newsvendor_A_double_sum(seed):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng)
    scaling = scaling_for(inst, rng.uniform(0.05, 0.5))
    theta = rng.uniform(-math.pi, math.pi, 9)
    A = build_newsvendor_A(AnsatzSpec(3, 2, theta), build_distribution_loader(inst.demand), inst, scaling)
    state = sim.run(A)
    q = supply_pmf(theta, 3, 2).probs
    want = q @ scaling.probability(profit_grid(inst)) @ inst.demand.probs
    assert sim.qubit_one_probability(state, A["objective"][0]) == pytest.approx(want, abs=1e-8)
    # every flag and the carry ancilla is returned to |0>
    for qb in list(A["flags"]) + list(A["anc"]):
        assert sim.qubit_one_probability(state, qb) < 1e-12


def test_newsvendor_A_width_mismatch(rng):
    inst = random_instance(rng)
    with pytest.raises(ValidationError):
        build_newsvendor_A(AnsatzSpec(2, 1, np.zeros(4)), build_distribution_loader(inst.demand), inst,
                           scaling_for(inst))


def _ry_problem(a):
    c = Circuit(1).append(sim.ry(2 * math.asin(math.sqrt(a)), 0))
    return c


def _grover_power_prob(A, obj, k):
    Q = build_grover_operator(A, obj)
    s = sim.run(A)
    for _ in range(k):
        s = sim.apply_circuit(s, Q)
    return sim.qubit_one_probability(s, obj)


def test_grover_examples():
    A = _ry_problem(0.3)
    assert _grover_power_prob(A, 0, 0) == pytest.approx(0.3)
    assert _grover_power_prob(A, 0, 1) == pytest.approx(math.sin(3 * math.asin(math.sqrt(0.3))) ** 2, abs=1e-12)


@given(st.integers(0, 3), st.integers(0, 2**32 - 1))
def test_grover_law_random_A(k, seed):
    rng = np.random.default_rng(seed)
    A = random_circuit(rng, 4, 20)
    a = sim.qubit_one_probability(sim.run(A), 3)
    want = math.sin((2 * k + 1) * math.asin(math.sqrt(a))) ** 2
    assert _grover_power_prob(A, 3, k) == pytest.approx(want, abs=1e-8)


def test_qft_examples(rng):
    m = 3
    v = rng.normal(size=8) + 1j * rng.normal(size=8)
    s = Statevector(m, v / np.linalg.norm(v))
    back = sim.apply_circuit(sim.apply_circuit(s, build_qft(m)), build_qft(m, inverse=True))
    assert np.allclose(back.amplitudes, s.amplitudes, atol=1e-9)
    assert np.allclose(sim.run(build_qft(m)).amplitudes, 1 / math.sqrt(8), atol=1e-12)
    out = sim.apply_circuit(Statevector.basis(2, 1), build_qft(2))
    assert np.allclose(out.amplitudes, np.array([1, 1j, -1, -1j]) / 2, atol=1e-12)
