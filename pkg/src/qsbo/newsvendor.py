"""Newsvendor profit model and classical baselines."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import ScalingSpec
from .distributions import DiscreteDistribution
from .errors import ValidationError


@dataclass(frozen=True)
class NewsvendorInstance:
    """Revenue ``r`` and unit cost ``c`` per item, fixed order cost ``t``."""

    r: float
    c: float
    t: float
    demand: DiscreteDistribution

    def __post_init__(self):
        if not isinstance(self.demand, DiscreteDistribution):
            object.__setattr__(self, "demand", DiscreteDistribution(self.demand))
        if not (self.r > self.c > 0):
            raise ValidationError(f"need r > c > 0, got r={self.r}, c={self.c}")
        if self.t < 0:
            raise ValidationError(f"fixed cost must be >= 0, got {self.t}")

    @property
    def num_qubits(self) -> int:
        return self.demand.num_qubits

    @property
    def max_units(self) -> int:
        return self.demand.size - 1


def profit(s, d, inst: NewsvendorInstance):
    """``min(s, d) r - s c - [s >= 1] t``; broadcasts over arrays."""
    s = np.asarray(s)
    d = np.asarray(d)
    if np.any(s < 0) or np.any(d < 0):
        raise ValidationError("supply and demand must be non-negative")
    out = np.minimum(s, d) * inst.r - s * inst.c - (s >= 1) * inst.t
    return float(out) if out.ndim == 0 else out


def profit_grid(inst: NewsvendorInstance) -> np.ndarray:
    """``grid[s, d]`` over the full register range."""
    u = np.arange(inst.demand.size)
    return profit(u[:, None], u[None, :], inst)


def scaling_for(inst: NewsvendorInstance, c_scale: float = 0.1) -> ScalingSpec:
    """Scaling with exact payoff bounds over every (supply, demand) pair."""
    g = profit_grid(inst)
    return ScalingSpec(c_scale, float(g.min()), float(g.max()))


def expected_profit_exact(s: int, inst: NewsvendorInstance) -> float:
    return float(profit(s, inst.demand.support, inst) @ inst.demand.probs)


def expected_profit_curve(inst: NewsvendorInstance) -> np.ndarray:
    """Exact expected profit for every supply level."""
    return profit_grid(inst) @ inst.demand.probs


def optimal_supply_bruteforce(inst: NewsvendorInstance):
    """``(s*, E[profit(s*)])``; ties go to the smallest supply."""
    curve = expected_profit_curve(inst)
    s = int(np.argmax(curve))
    return s, float(curve[s])


def saa_estimate(inst: NewsvendorInstance, s: int, num_samples: int = 100_000, seed=None,
                 return_std: bool = False):
    """Sample-average profit at supply ``s`` over iid demand draws."""
    if num_samples < 1:
        raise ValidationError("num_samples must be >= 1")
    d = inst.demand.sample(num_samples, seed)
    vals = profit(s, d, inst)
    vals = np.atleast_1d(vals)
    mean = float(vals.mean())
    if return_std:
        return mean, float(vals.std(ddof=1) / np.sqrt(num_samples)) if num_samples > 1 else 0.0
    return mean


def critical_fractile(demand: DiscreteDistribution, r: float, c: float) -> int:
    """Smallest ``q`` with ``CDF(q) >= (r - c) / r``."""
    if not (r > c > 0):
        raise ValidationError(f"need r > c > 0, got r={r}, c={c}")
    frac = (r - c) / r
    cdf = demand.cdf()
    # guard against cdf[-1] = 1 - 1e-16
    idx = int(np.searchsorted(cdf, frac - 1e-12, side="left"))
    return min(idx, demand.size - 1)


def mc_quantum_estimate(inst: NewsvendorInstance, s: int, generator, shots: int = 1024, seed=None) -> float:
    """Average profit over demand values measured from a generator circuit.

    ``generator`` is a :class:`~qsbo.qgan.GeneratorConfig` or any object with
    a ``pmf()`` returning a distribution over the demand register.
    """
    from .qgan import generator_pmf

    pmf = generator_pmf(generator) if hasattr(generator, "theta_p") else generator.pmf()
    probs = np.asarray(getattr(pmf, "probs", pmf))
    if len(probs) != inst.demand.size:
        raise ValidationError("generator register does not match the demand register")
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, probs / probs.sum())
    vals = profit(s, inst.demand.support, inst)
    return float(counts @ vals / shots)


def unscale_estimate(P: float, scaling: ScalingSpec) -> float:
    """Invert the first-order map ``E -> c (2 (E - f_min)/(f_max - f_min) - 1) + 1/2``."""
    if scaling.c <= 0:
        raise ValidationError("scaling c must be positive")
    if not 0 <= P <= 1:
        raise ValidationError(f"probability must lie in [0, 1], got {P}")
    return scaling.f_min + (P - 0.5 + scaling.c) * (scaling.f_max - scaling.f_min) / (2 * scaling.c)
