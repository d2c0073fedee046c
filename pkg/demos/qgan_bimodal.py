"""Train a 3-qubit qGAN loader on the bimodal demand and solve with it.

    python demos/qgan_bimodal.py [epochs]
"""
import sys

import numpy as np

from qsbo.distributions import bimodal_standin
from qsbo.newsvendor import NewsvendorInstance, optimal_supply_bruteforce
from qsbo.qgan import GeneratorConfig, TrainingConfig, relative_entropy, train
from qsbo.solver import QSBOConfig, qsbo_solve

epochs = int(sys.argv[1]) if len(sys.argv) > 1 else 200
target = bimodal_standin()
rng = np.random.default_rng(0)
data = target.sample(2000, rng)
gen, trace = train(data, GeneratorConfig.initial(3, 2, rng), cfg=TrainingConfig(epochs=epochs), target_pmf=target)

print("epoch  relative entropy")
for e in range(0, epochs, max(1, epochs // 10)):
    print(f"{e + 1:5d}  {trace.relative_entropy[e]:.4f}")
print("target   ", np.round(target.probs, 3))
print("generator", np.round(gen.pmf().probs, 3), f"KL={relative_entropy(target, gen.pmf()):.4f}")

inst = NewsvendorInstance(r=0.6, c=0.3, t=0.2, demand=gen.pmf())
res = qsbo_solve(inst, QSBOConfig(seed=0), demand_loader=gen.circuit())
print(f"s* with learned loader: {res.s_star} (brute force on target: "
      f"{optimal_supply_bruteforce(NewsvendorInstance(0.6, 0.3, 0.2, target))[0]})")
