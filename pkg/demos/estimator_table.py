"""Compare amplitude estimators on one fixed amplitude.

Prints mean absolute error and oracle queries for canonical QAE, MLQAE and
IQAE at a = 0.3 over 50 seeds, with plain Monte Carlo for reference.

    python demos/estimator_table.py
"""
import numpy as np

from qsbo.estimation import bernoulli_problem, canonical_qae, exponential_powers, iqae, mlqae

A, SEEDS = 0.3, range(50)
problem = bernoulli_problem(A)

runs = {
    "canonical m=6": lambda s: canonical_qae(problem, m=6, shots=20, seed=s),
    "mlqae q=5": lambda s: mlqae(problem, powers=exponential_powers(5), shots_per_power=100, seed=s),
    "iqae eps=0.005": lambda s: iqae(problem, epsilon=0.005, alpha=0.05, shots_per_round=100, seed=s),
}
print(f"{'method':16s} {'mean |err|':>10s} {'queries':>9s}")
for name, run in runs.items():
    ests = [run(s) for s in SEEDS]
    err = np.mean([abs(e.a_hat - A) for e in ests])
    print(f"{name:16s} {err:10.5f} {np.mean([e.oracle_queries for e in ests]):9.0f}")

shots = 2000
mc = [np.random.default_rng(s).binomial(shots, A) / shots for s in SEEDS]
print(f"{'monte carlo':16s} {np.mean(np.abs(np.subtract(mc, A))):10.5f} {shots:9d}")
