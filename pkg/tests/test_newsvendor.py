import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qsbo.circuits import AnsatzSpec, ScalingSpec, build_distribution_loader, build_newsvendor_A
from qsbo.distributions import DiscreteDistribution, bimodal_standin
from qsbo.errors import ValidationError
from qsbo.estimation import AEProblem, exact_amplitude
from qsbo.newsvendor import (NewsvendorInstance, critical_fractile, expected_profit_curve, expected_profit_exact,
                             mc_quantum_estimate, optimal_supply_bruteforce, profit, saa_estimate, scaling_for,
                             unscale_estimate)
from qsbo.qgan import GeneratorConfig
from qsbo.solver import OptimizerSpec, QSBOConfig, qsbo_solve, supply_pmf

from conftest import random_instance


def inst_of(pmf, r=0.6, c=0.2, t=0.1):
    return NewsvendorInstance(r=r, c=c, t=t, demand=DiscreteDistribution(pmf))


UNIFORM8 = [1 / 8] * 8


def test_profit_examples():
    inst = inst_of(UNIFORM8)
    assert profit(0, 6, inst) == 0
    assert profit(5, 5, inst) == pytest.approx(1.9)
    assert profit(7, 2, inst) == pytest.approx(-0.3)
    with pytest.raises(ValidationError):
        profit(-1, 2, inst)


def test_instance_validation():
    with pytest.raises(ValidationError):
        inst_of(UNIFORM8, r=0.2, c=0.3)
    with pytest.raises(ValidationError):
        inst_of(UNIFORM8, t=-0.1)


def test_expected_profit_examples():
    point = inst_of(DiscreteDistribution.point(4, 3).probs)
    for s in range(8):
        assert expected_profit_exact(s, point) == pytest.approx(profit(s, 4, point))
    assert expected_profit_exact(7, inst_of(UNIFORM8)) == pytest.approx(0.6)


def test_expected_profit_matches_large_saa(rng):
    inst = random_instance(rng)
    mean, se = saa_estimate(inst, 4, num_samples=1_000_000, seed=5, return_std=True)
    assert abs(mean - expected_profit_exact(4, inst)) <= 3 * se


def test_bruteforce_examples():
    inst = inst_of(DiscreteDistribution.point(5, 3).probs)
    assert optimal_supply_bruteforce(inst)[0] == 5
    assert optimal_supply_bruteforce(inst_of(UNIFORM8, t=100.0))[0] == 0


def test_bimodal_standin_instance():
    inst = NewsvendorInstance(0.6, 0.3, 0.2, bimodal_standin())
    s, v = optimal_supply_bruteforce(inst)
    assert s == 4 and v == pytest.approx(0.42572512, abs=1e-8)


def test_bruteforce_tie_goes_to_smallest():
    # r = 2c and demand split evenly on {2, 3}: E[profit(2)] = E[profit(3)] = 1
    inst = inst_of([0, 0, 0.5, 0.5, 0, 0, 0, 0], r=1.0, c=0.5, t=0.0)
    curve = expected_profit_curve(inst)
    assert curve[2] == pytest.approx(curve[3])
    assert optimal_supply_bruteforce(inst)[0] == 2


def test_saa_examples(rng):
    point = inst_of(DiscreteDistribution.point(3, 3).probs)
    assert saa_estimate(point, 5, num_samples=17, seed=1) == pytest.approx(profit(5, 3, point))
    inst = random_instance(rng)
    mean, se = saa_estimate(inst, 3, num_samples=100_000, seed=2, return_std=True)
    assert abs(mean - expected_profit_exact(3, inst)) <= 4 * se
    assert saa_estimate(inst, 3, 1000, seed=9) == saa_estimate(inst, 3, 1000, seed=9)
    with pytest.raises(ValidationError):
        saa_estimate(inst, 3, 0)


def test_critical_fractile_examples():
    assert critical_fractile(DiscreteDistribution(UNIFORM8), 0.6, 0.2) == 5
    # fractile above CDF(6) saturates at the top of the support
    skew = DiscreteDistribution([0.01] * 7 + [0.93])
    assert critical_fractile(skew, 1.0, 0.01) == 7
    with pytest.raises(ValidationError):
        critical_fractile(DiscreteDistribution(UNIFORM8), 0.2, 0.2)


@given(st.integers(0, 2**32 - 1))
def test_critical_fractile_near_bruteforce(seed):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, t_max=0.0)
    q = critical_fractile(inst.demand, inst.r, inst.c)
    assert abs(q - optimal_supply_bruteforce(inst)[0]) <= 1


def test_mc_quantum_examples():
    inst = NewsvendorInstance(0.6, 0.2, 0.1, bimodal_standin())
    zero = GeneratorConfig(3, 2, np.zeros(9))
    assert mc_quantum_estimate(inst, 4, zero, shots=1024, seed=0) == pytest.approx(-(4 * 0.2 + 0.1))

    class Exact:
        def pmf(self):
            return inst.demand

    est = mc_quantum_estimate(inst, 4, Exact(), shots=2_000_000, seed=1)
    assert est == pytest.approx(expected_profit_exact(4, inst), abs=5e-3)


def test_unscale_examples():
    sc = ScalingSpec(0.1, -2.0, 3.0)
    assert unscale_estimate(0.5, sc) == pytest.approx(0.5)
    assert unscale_estimate(0.6, sc) == pytest.approx(3.0)
    assert unscale_estimate(0.4, sc) == pytest.approx(-2.0)
    with pytest.raises(ValidationError):
        unscale_estimate(1.2, sc)


@given(st.integers(0, 2**32 - 1))
def test_unscale_round_trip_small_c(seed):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng)
    sc = scaling_for(inst, 0.01)
    s = int(rng.integers(8))
    E = expected_profit_exact(s, inst)
    P = float(sc.probability(np.array([profit(s, d, inst) for d in range(8)])) @ inst.demand.probs)
    assert abs(unscale_estimate(P, sc) - E) / (sc.f_max - sc.f_min) < 1e-4


@given(st.integers(0, 2**32 - 1))
def test_exactness_chain(seed):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng)
    theta = rng.uniform(-math.pi, math.pi, 9)
    q = supply_pmf(theta, 3, 2).probs
    want = q @ expected_profit_curve(inst)
    for c_scale in (0.2, 0.1, 0.05):
        sc = scaling_for(inst, c_scale)
        A = build_newsvendor_A(AnsatzSpec(3, 2, theta), build_distribution_loader(inst.demand), inst, sc)
        got = unscale_estimate(exact_amplitude(AEProblem(A, A["objective"][0])), sc)
        assert abs(got - want) <= (sc.f_max - sc.f_min) * 2 * c_scale ** 2


def test_qsbo_exact_objective_finds_point_demand():
    inst = NewsvendorInstance(0.6, 0.2, 0.1, DiscreteDistribution.point(5, 3))
    res = qsbo_solve(inst, QSBOConfig(qae="exact", seed=0, optimizer=OptimizerSpec(budget=400)))
    assert res.s_star == 5
    assert res.supply_pmf.probs.sum() == pytest.approx(1.0)
    assert res.s_star == int(np.argmax(res.supply_pmf.probs))
    assert res.objective_evals == len(res.trace) <= 400


def test_qsbo_budget_and_determinism():
    inst = NewsvendorInstance(0.6, 0.3, 0.2, bimodal_standin())
    cfg = QSBOConfig(seed=3, optimizer=OptimizerSpec(budget=120, starts=2))
    a, b = qsbo_solve(inst, cfg), qsbo_solve(inst, cfg)
    assert a.objective_evals <= 120
    assert np.array_equal(a.theta_star, b.theta_star) and a.expected_profit_estimate == b.expected_profit_estimate
    assert a.oracle_queries > 0


def test_qsbo_config_validation():
    with pytest.raises(ValidationError):
        QSBOConfig(c_scale=0.0)
    with pytest.raises(ValidationError):
        OptimizerSpec(budget=0)
    with pytest.raises(ValidationError):
        QSBOConfig(qae="exact", readout={"p01": 0.02, "p10": 0.02})


def test_qsbo_with_generator_loader():
    gen = GeneratorConfig.initial(3, 2, seed=1)
    inst = NewsvendorInstance(0.6, 0.2, 0.1, gen.pmf())
    res = qsbo_solve(inst, QSBOConfig(qae="exact", seed=1, optimizer=OptimizerSpec(budget=300)),
                     demand_loader=gen.circuit())
    assert res.s_star == optimal_supply_bruteforce(inst)[0]
