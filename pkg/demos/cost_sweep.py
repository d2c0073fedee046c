"""Optimal supply as the unit cost rises.

Runs QSBO on the built-in bimodal demand for a handful of unit costs and
prints the recovered supply level next to the brute-force optimum.

    python demos/cost_sweep.py
"""
from qsbo.distributions import bimodal_standin
from qsbo.newsvendor import NewsvendorInstance, optimal_supply_bruteforce
from qsbo.solver import QSBOConfig, qsbo_solve

demand = bimodal_standin()
print(" c    qsbo s*  brute s*  est. profit")
for i, c in enumerate([0.1, 0.2, 0.3, 0.4, 0.5]):
    inst = NewsvendorInstance(r=0.6, c=c, t=0.1, demand=demand)
    res = qsbo_solve(inst, QSBOConfig(seed=i))
    best, _ = optimal_supply_bruteforce(inst)
    print(f"{c:.1f}  {res.s_star:7d}  {best:8d}  {res.expected_profit_estimate:11.4f}")
