"""Per-qubit readout errors and subspace-restricted mitigation.

Histograms map bitstrings (most significant qubit first, as printed by the
simulator) to counts or probabilities.  Mitigation solves the assignment
system only on the observed bitstrings plus their single-flip neighbours,
never forming the full ``2**n`` matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

import numpy as np
from scipy.sparse.linalg import lsqr

from .errors import NumericalError, ValidationError

DIRECT_SOLVE_LIMIT = 512


@dataclass(frozen=True)
class ReadoutErrorModel:
    """``p01[q]``: read 1 given 0; ``p10[q]``: read 0 given 1, for qubit ``q``."""

    p01: tuple
    p10: tuple

    def __post_init__(self):
        p01 = tuple(float(v) for v in self.p01)
        p10 = tuple(float(v) for v in self.p10)
        if len(p01) != len(p10) or not p01:
            raise ValidationError("p01 and p10 need one entry per qubit")
        for a, b in zip(p01, p10):
            if not (0 <= a < 0.5 and 0 <= b < 0.5):
                raise ValidationError(f"flip probabilities must lie in [0, 0.5), got ({a}, {b})")
        object.__setattr__(self, "p01", p01)
        object.__setattr__(self, "p10", p10)

    @classmethod
    def uniform(cls, num_qubits: int, p01: float = 0.02, p10: Optional[float] = None) -> "ReadoutErrorModel":
        p10 = p01 if p10 is None else p10
        return cls((p01,) * num_qubits, (p10,) * num_qubits)

    @property
    def num_qubits(self) -> int:
        return len(self.p01)

    def confusion(self, q: int) -> np.ndarray:
        """Column-stochastic ``M[read, true]`` for qubit ``q``."""
        a, b = self.p01[q], self.p10[q]
        return np.array([[1 - a, b], [a, 1 - b]])


def _parse(hist: Mapping[str, float], num_qubits: int):
    keys, vals = [], []
    for k, v in hist.items():
        if len(k) != num_qubits or set(k) - {"0", "1"}:
            raise ValidationError(f"bitstring {k!r} does not match {num_qubits} qubits")
        if v < 0:
            raise ValidationError("histogram entries must be non-negative")
        keys.append(int(k, 2))
        vals.append(float(v))
    return np.array(keys, dtype=np.int64), np.array(vals)


def _fmt(i: int, n: int) -> str:
    return format(int(i), f"0{n}b")


def apply_readout_noise(counts: Mapping[str, int], model: ReadoutErrorModel, seed=None) -> Dict[str, int]:
    """Flip each bit of each shot independently; deterministic per seed."""
    n = model.num_qubits
    keys, vals = _parse(counts, n)
    if np.any(vals != np.round(vals)):
        raise ValidationError("counts must be integers")
    rng = np.random.default_rng(seed)
    order = np.argsort(keys)
    shots = np.repeat(keys[order], vals[order].astype(np.int64))
    out = shots.copy()
    for q in range(n):
        bit = (shots >> q) & 1
        p = np.where(bit == 1, model.p10[q], model.p01[q])
        flip = rng.random(shots.size) < p
        out ^= flip.astype(np.int64) << q
    uniq, cnt = np.unique(out, return_counts=True)
    return {_fmt(u, n): int(c) for u, c in zip(uniq, cnt)}


def apply_readout_channel(probs, model: ReadoutErrorModel) -> np.ndarray:
    """Exact noisy distribution for a full probability vector (index = integer value)."""
    n = model.num_qubits
    p = np.asarray(probs, dtype=float)
    if p.shape != (1 << n,):
        raise ValidationError(f"need {1 << n} probabilities")
    t = p.reshape([2] * n)
    for q in range(n):
        # integer bit q lives on tensor axis n - 1 - q
        t = np.moveaxis(np.tensordot(model.confusion(q), t, axes=([1], [n - 1 - q])), 0, n - 1 - q)
    return t.reshape(-1)


def m3_subspace(keys: Iterable[int], num_qubits: int) -> np.ndarray:
    """Observed bitstrings together with all their Hamming-1 neighbours."""
    keys = np.asarray(list(keys), dtype=np.int64)
    halo = [keys] + [keys ^ (1 << q) for q in range(num_qubits)]
    return np.unique(np.concatenate(halo))


def reduced_assignment_matrix(subspace: Sequence[int], model: ReadoutErrorModel) -> np.ndarray:
    """``A[i, j] = P(read subspace[i] | true subspace[j])`` from per-qubit factors."""
    s = np.asarray(subspace, dtype=np.int64)
    A = np.ones((s.size, s.size))
    for q in range(model.num_qubits):
        M = model.confusion(q)
        bits = (s >> q) & 1
        A *= M[bits[:, None], bits[None, :]]
    return A


def project_to_simplex(v) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1
    idx = np.arange(1, v.size + 1)
    rho = np.nonzero(u - css / idx > 0)[0][-1]
    return np.maximum(v - css[rho] / (rho + 1), 0.0)


@dataclass
class QuasiDistribution:
    """Bitstring weights that sum to one but may be negative."""

    weights: Dict[str, float]
    num_qubits: int
    subspace: Optional[np.ndarray] = None
    _nearest: Optional[Dict[str, float]] = field(default=None, repr=False)

    def __post_init__(self):
        total = sum(self.weights.values())
        if abs(total - 1) > 1e-6:
            raise ValidationError(f"quasi-probabilities sum to {total}, expected 1")

    def __getitem__(self, key: str) -> float:
        return self.weights.get(key, 0.0)

    def __iter__(self):
        return iter(self.weights)

    def items(self):
        return self.weights.items()

    def nearest_probability(self) -> Dict[str, float]:
        if self._nearest is None:
            keys = list(self.weights)
            proj = project_to_simplex([self.weights[k] for k in keys])
            self._nearest = {k: float(v) for k, v in zip(keys, proj)}
        return self._nearest

    def to_array(self, nearest: bool = False) -> np.ndarray:
        src = self.nearest_probability() if nearest else self.weights
        out = np.zeros(1 << self.num_qubits)
        for k, v in src.items():
            out[int(k, 2)] = v
        return out


def m3_mitigate(noisy_counts: Mapping[str, float], model: ReadoutErrorModel,
                direct_limit: int = DIRECT_SOLVE_LIMIT) -> QuasiDistribution:
    """Solve the reduced assignment system for quasi-probabilities.

    Works for integer counts or exact probabilities alike.  Columns of the
    reduced matrix are renormalised over the subspace, so probability mass
    leaking outside it is not counted as lost.
    """
    n = model.num_qubits
    keys, vals = _parse(noisy_counts, n)
    if keys.size == 0 or vals.sum() <= 0:
        raise ValidationError("noisy histogram is empty")
    sub = m3_subspace(keys[vals > 0], n)
    A = reduced_assignment_matrix(sub, model)
    A /= A.sum(axis=0, keepdims=True)
    b = np.zeros(sub.size)
    b[np.searchsorted(sub, keys)] += vals / vals.sum()
    if sub.size <= direct_limit:
        cond = np.linalg.cond(A)
        if not np.isfinite(cond) or cond > 1e12:
            raise NumericalError("reduced assignment matrix is singular",
                                 diagnostics={"size": int(sub.size), "condition": float(cond)})
        x = np.linalg.solve(A, b)
    else:
        sol = lsqr(A, b, atol=1e-12, btol=1e-12, iter_lim=10 * sub.size)
        x, istop = sol[0], sol[1]
        if istop not in (1, 2, 4, 5) or not np.all(np.isfinite(x)):
            raise NumericalError("iterative solve did not converge",
                                 diagnostics={"size": int(sub.size), "istop": int(istop)})
    x = x / x.sum()
    return QuasiDistribution({_fmt(k, n): float(v) for k, v in zip(sub, x)}, n, subspace=sub)


def total_variation(p: Mapping[str, float], q: Mapping[str, float]) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def normalize_counts(counts: Mapping[str, float]) -> Dict[str, float]:
    total = float(sum(counts.values()))
    if total <= 0:
        raise ValidationError("histogram is empty")
    return {k: v / total for k, v in counts.items()}


@dataclass(frozen=True)
class ReadoutSpec:
    """Uniform readout noise applied to every measured register, optionally mitigated."""

    p01: float = 0.02
    p10: float = 0.02
    mitigate: bool = True

    def __post_init__(self):
        ReadoutErrorModel.uniform(1, self.p01, self.p10)

    def measure(self, probs, shots: int, rng) -> np.ndarray:
        """Counts over ``len(probs)`` outcomes after noisy readout.

        With mitigation the result is the nearest-probability correction
        scaled back to ``shots``, so entries may be fractional.
        """
        probs = np.asarray(probs, dtype=float)
        n = int(np.log2(probs.size))
        model = ReadoutErrorModel.uniform(n, self.p01, self.p10)
        ideal = rng.multinomial(shots, probs / probs.sum())
        noisy = apply_readout_noise({_fmt(i, n): int(c) for i, c in enumerate(ideal) if c}, model,
                                    seed=rng)
        if not self.mitigate:
            out = np.zeros(probs.size)
            for k, v in noisy.items():
                out[int(k, 2)] = v
            return out
        quasi = m3_mitigate(noisy, model)
        return quasi.to_array(nearest=True) * shots
