"""Discrete distributions over ``{0, ..., 2**n - 1}``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import binom

from .errors import ValidationError


@dataclass(frozen=True)
class DiscreteDistribution:
    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float).copy()
        if p.ndim != 1 or len(p) < 2 or (len(p) & (len(p) - 1)):
            raise ValidationError(f"support size must be a power of two >= 2, got {p.shape}")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise ValidationError("probabilities must be finite and non-negative")
        if abs(p.sum() - 1) > 1e-9:
            raise ValidationError(f"probabilities sum to {p.sum():.12g}, expected 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @classmethod
    def normalized(cls, weights) -> "DiscreteDistribution":
        w = np.asarray(weights, dtype=float)
        if np.any(w < 0) or w.sum() <= 0:
            raise ValidationError("weights must be non-negative with a positive sum")
        return cls(w / w.sum())

    @classmethod
    def point(cls, value: int, num_qubits: int) -> "DiscreteDistribution":
        p = np.zeros(1 << num_qubits)
        p[value] = 1.0
        return cls(p)

    @classmethod
    def uniform(cls, num_qubits: int) -> "DiscreteDistribution":
        return cls(np.full(1 << num_qubits, 1.0 / (1 << num_qubits)))

    @classmethod
    def from_samples(cls, samples, num_qubits: int) -> "DiscreteDistribution":
        counts = np.bincount(np.asarray(samples, dtype=int), minlength=1 << num_qubits)
        if len(counts) != 1 << num_qubits:
            raise ValidationError("sample values exceed the register range")
        return cls.normalized(counts)

    @property
    def num_qubits(self) -> int:
        return int(math.log2(len(self.probs)))

    @property
    def size(self) -> int:
        return len(self.probs)

    @property
    def support(self) -> np.ndarray:
        return np.arange(len(self.probs))

    def cdf(self) -> np.ndarray:
        return np.cumsum(self.probs)

    def mean(self) -> float:
        return float(self.support @ self.probs)

    def sample(self, size: int, rng) -> np.ndarray:
        rng = np.random.default_rng(rng)
        return rng.choice(len(self.probs), size=size, p=self.probs)


def bimodal_standin(num_qubits: int = 3) -> DiscreteDistribution:
    """``0.55 Bin(N, 0.7) + 0.45 Bin(N, 0.3)`` on ``N = 2**n - 1``.

    For three qubits the local maxima sit at 2 and 5.  Used in place of the
    untabulated bimodal demand of the reference experiments.
    """
    N = (1 << num_qubits) - 1
    k = np.arange(N + 1)
    return DiscreteDistribution.normalized(0.55 * binom.pmf(k, N, 0.70) + 0.45 * binom.pmf(k, N, 0.30))
