import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qsbo import sim
from qsbo.circuits import AnsatzSpec, build_distribution_loader, build_grover_operator, build_newsvendor_A
from qsbo.errors import ResourceError, ValidationError
from qsbo.estimation import (AEProblem, bernoulli_problem, canonical_qae, exact_amplitude, iqae, log_likelihood,
                             mlqae, qae_outcome_distribution)
from qsbo.newsvendor import profit_grid, scaling_for
from qsbo.sim import Circuit
from qsbo.solver import supply_pmf

from conftest import random_instance


def test_exact_amplitude_examples(rng):
    assert exact_amplitude(AEProblem(Circuit(1).append(sim.ry(math.pi / 2, 0)), 0)) == pytest.approx(0.5)
    assert exact_amplitude(AEProblem(Circuit(2), 1)) == 0.0
    inst = random_instance(rng)
    scaling = scaling_for(inst)
    theta = rng.uniform(-math.pi, math.pi, 9)
    A = build_newsvendor_A(AnsatzSpec(3, 2, theta), build_distribution_loader(inst.demand), inst, scaling)
    want = supply_pmf(theta, 3, 2).probs @ scaling.probability(profit_grid(inst)) @ inst.demand.probs
    assert exact_amplitude(AEProblem(A, A["objective"][0])) == pytest.approx(want, abs=1e-10)


def test_grover_circuit_matches_builder():
    A = Circuit(1).append(sim.ry(0.4, 0))
    p = AEProblem(A, 0)
    assert p.grover_circuit.gates == build_grover_operator(A, 0).gates


def test_reduced_problem_has_same_statistics(rng):
    from conftest import random_circuit
    A = random_circuit(rng, 4, 25)
    full = AEProblem(A, 2)
    red = full.reduced()
    for k in range(5):
        assert red.prob_one(k) == pytest.approx(full.prob_one(k), abs=1e-10)


def test_canonical_on_grid_half():
    est = canonical_qae(bernoulli_problem(0.5), m=3, shots=50, seed=0)
    assert est.a_hat == pytest.approx(0.5, abs=1e-12)
    dist = qae_outcome_distribution(bernoulli_problem(0.5), 3)
    assert dist[2] + dist[6] == pytest.approx(1.0, abs=1e-12)


def test_canonical_zero():
    est = canonical_qae(bernoulli_problem(0.0), m=4, shots=20, seed=1)
    assert est.a_hat == 0.0


def test_canonical_off_grid_bound():
    est = canonical_qae(bernoulli_problem(0.3), m=4, shots=1000, seed=2)
    assert abs(est.a_hat - 0.3) <= math.pi / 16 + math.pi ** 2 / 256


def test_canonical_queries_and_limits():
    est = canonical_qae(bernoulli_problem(0.2), m=3, shots=10, seed=0)
    assert est.oracle_queries == 7 * 10
    with pytest.raises(ResourceError):
        canonical_qae(bernoulli_problem(0.2), m=25, shots=1)
    with pytest.raises(ValidationError):
        canonical_qae(bernoulli_problem(0.2), m=0, shots=1)


def test_mlqae_single_power_large_shots():
    est = mlqae(bernoulli_problem(0.5), powers=[0], shots_per_power=1_000_000, seed=0)
    assert est.theta_hat == pytest.approx(math.pi / 4, abs=2e-3)


def test_mlqae_on_grid_quarter():
    est = mlqae(bernoulli_problem(0.25), powers=[0, 1, 2, 4], shots_per_power=2000, seed=11)
    assert abs(est.a_hat - 0.25) < 0.01


def test_mlqae_likelihood_peaks_near_truth():
    theta_true = math.asin(math.sqrt(0.3))
    good = 0
    for seed in range(50):
        est = mlqae(bernoulli_problem(0.3), powers=[0, 1, 2, 4], shots_per_power=100, seed=seed)
        d = est.details
        ll = lambda t: log_likelihood(t, d["powers"], d["hits"], d["shots"])[0]
        good += ll(theta_true) >= max(ll(theta_true - 0.3), ll(theta_true + 0.3))
    assert good >= 45


def test_mlqae_degenerate_flag():
    est = mlqae(bernoulli_problem(0.0), powers=[0, 1], shots_per_power=10, seed=0)
    assert est.degenerate and est.a_hat == 0.0
    with pytest.raises(ValidationError):
        mlqae(bernoulli_problem(0.1), powers=[])


def test_mlqae_error_shrinks_with_queries():
    def rmse(q):
        errs = [mlqae(bernoulli_problem(0.3), powers=[0] + [1 << j for j in range(q)], shots_per_power=100,
                      seed=s).a_hat - 0.3 for s in range(200)]
        return math.sqrt(np.mean(np.square(errs)))
    # each extra power roughly doubles the query count; error should halve (+-30%)
    errs = [rmse(q) for q in (3, 4, 5)]
    for a, b in zip(errs, errs[1:]):
        assert 2 * 0.7 <= a / b <= 2 * 1.3


def test_iqae_zero():
    est = iqae(bernoulli_problem(0.0), epsilon=0.01, alpha=0.05, shots_per_round=100, seed=0)
    assert est.a_hat == 0.0
    assert 0.0 <= est.ci_low and est.ci_high <= 0.01 + 1e-12


def test_iqae_interval_width():
    est = iqae(bernoulli_problem(0.3), epsilon=0.005, alpha=0.05, shots_per_round=100, seed=4)
    assert est.ci_high - est.ci_low <= 0.01 + 1e-12
    assert est.ci_low <= est.a_hat <= est.ci_high


def test_iqae_argument_checks():
    with pytest.raises(ValidationError):
        iqae(bernoulli_problem(0.3), epsilon=0.0)
    with pytest.raises(ValidationError):
        iqae(bernoulli_problem(0.3), alpha=1.0)


def test_iqae_round_cap_carries_partial():
    with pytest.raises(ResourceError) as info:
        iqae(bernoulli_problem(0.3), epsilon=1e-4, shots_per_round=10, seed=0, max_rounds=2)
    assert info.value.partial is not None


@given(st.floats(0, 1), st.integers(0, 2**32 - 1), st.sampled_from(["canonical", "mlqae", "iqae"]))
def test_estimates_in_range(a, seed, method):
    p = bernoulli_problem(a)
    if method == "canonical":
        est = canonical_qae(p, m=3, shots=20, seed=seed)
    elif method == "mlqae":
        est = mlqae(p, powers=[0, 1, 2], shots_per_power=20, seed=seed)
    else:
        est = iqae(p, epsilon=0.02, shots_per_round=50, seed=seed)
    assert 0 <= est.ci_low <= est.a_hat <= est.ci_high <= 1
    assert est.a_hat == pytest.approx(math.sin(est.theta_hat) ** 2, abs=1e-12)


@given(st.integers(0, 7))
def test_canonical_on_grid_exact(y):
    a = math.sin(y * math.pi / 8) ** 2
    dist = qae_outcome_distribution(bernoulli_problem(a), 3)
    support = {y % 8, (8 - y) % 8}
    assert sum(dist[i] for i in support) == pytest.approx(1.0, abs=1e-12)
    assert canonical_qae(bernoulli_problem(a), 3, shots=10, seed=y).a_hat == pytest.approx(a, abs=1e-12)
