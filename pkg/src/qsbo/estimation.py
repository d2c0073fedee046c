"""Amplitude estimation: canonical (phase-estimation) QAE, maximum-likelihood
QAE and iterative QAE, all driven by an :class:`AEProblem`.

Query accounting: one application of the Grover operator ``Q`` is one oracle
query; the initial ``A`` of each shot is free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.stats import beta as beta_dist, norm

from . import sim
from .circuits import build_grover_operator, build_qft
from .errors import ResourceError, ValidationError
from .sim import Circuit, Statevector

MAX_SIM_QUBITS = 22
_DENSE_LIMIT = 6


@dataclass
class AmplitudeEstimate:
    a_hat: float
    theta_hat: float
    ci_low: float
    ci_high: float
    oracle_queries: int
    shots_used: int
    method: str = ""
    degenerate: bool = False
    details: Dict = field(default_factory=dict)

    @classmethod
    def from_theta(cls, theta, ci_low, ci_high, queries, shots, **kw) -> "AmplitudeEstimate":
        theta = float(min(max(theta, 0.0), math.pi / 2))
        a = math.sin(theta) ** 2
        return cls(a, theta, min(ci_low, a), max(ci_high, a), int(queries), int(shots), **kw)


class AEProblem:
    """An A-operator with a designated objective qubit.

    ``prob_one(k)`` is ``P(objective = 1)`` after ``Q^k A |0>``, computed by
    gate-level simulation (dense matrix powers for tiny problems).
    """

    def __init__(self, a_circuit: Circuit, objective_qubit: int):
        if not 0 <= objective_qubit < a_circuit.num_qubits:
            raise ValidationError(f"objective qubit {objective_qubit} not in the A circuit")
        self.a_circuit = a_circuit
        self.objective_qubit = objective_qubit
        self._grover: Optional[Circuit] = None
        self._a_state: Optional[Statevector] = None
        self._q_matrix: Optional[np.ndarray] = None
        self._cache: Dict[int, float] = {}
        # optional noisy measurement model with a ``measure(probs, shots, rng)`` method
        self.readout = None

    def measure(self, probs, shots: int, rng) -> np.ndarray:
        """Outcome counts for ``shots`` measurements of a register with ``probs``."""
        probs = np.asarray(probs, dtype=float)
        if self.readout is None:
            return rng.multinomial(shots, probs / probs.sum())
        return self.readout.measure(probs, shots, rng)

    def sample_hits(self, k: int, shots: int, rng):
        """Number of objective-qubit ones in ``shots`` runs of ``Q^k A``."""
        p = self.prob_one(k)
        if self.readout is None:
            return int(rng.binomial(shots, p))
        return float(self.measure([1 - p, p], shots, rng)[1])

    @property
    def num_qubits(self) -> int:
        return self.a_circuit.num_qubits

    @property
    def grover_circuit(self) -> Circuit:
        if self._grover is None:
            self._grover = build_grover_operator(self.a_circuit, self.objective_qubit)
        return self._grover

    def a_state(self) -> Statevector:
        if self._a_state is None:
            self._a_state = sim.run(self.a_circuit)
        return self._a_state

    def prob_one(self, k: int) -> float:
        if k < 0:
            raise ValidationError("Grover power must be non-negative")
        if k not in self._cache:
            if k == 0:
                state = self.a_state()
            elif self.num_qubits <= _DENSE_LIMIT:
                if self._q_matrix is None:
                    self._q_matrix = sim.to_matrix(self.grover_circuit)
                amps = np.linalg.matrix_power(self._q_matrix, k) @ self.a_state().amplitudes
                state = Statevector(self.num_qubits, amps)
            else:
                state = self.a_state()
                for _ in range(k):
                    state = sim.apply_circuit(state, self.grover_circuit)
            self._cache[k] = min(max(sim.qubit_one_probability(state, self.objective_qubit), 0.0), 1.0)
        return self._cache[k]

    def reduced(self) -> "AEProblem":
        """Single-qubit problem with the same amplitude.

        ``Q`` leaves the plane spanned by the good and bad components of
        ``A|0>`` invariant and acts there as a rotation by ``2 theta``, so every
        estimator sees identical outcome statistics on this two-level model.
        """
        a = exact_amplitude(self)
        out = bernoulli_problem(a)
        out.readout = self.readout
        return out


def bernoulli_problem(a: float) -> AEProblem:
    """``A = RY(2 asin(sqrt(a)))`` on one qubit."""
    if not 0 <= a <= 1:
        raise ValidationError(f"amplitude must lie in [0, 1], got {a}")
    circ = Circuit(1)
    circ.append(sim.ry(2 * math.asin(math.sqrt(a)), 0))
    return AEProblem(circ, 0)


def exact_amplitude(problem: AEProblem) -> float:
    return problem.prob_one(0)


# -- canonical QAE -----------------------------------------------------------

def build_qae_circuit(problem: AEProblem, m: int) -> Circuit:
    """Phase-estimation circuit: ancillas ``0..m-1``, problem qubits after them."""
    nq = problem.num_qubits
    width = m + nq
    prob_qubits = list(range(m, width))
    circ = Circuit(width)
    circ.registers = {"eval": range(0, m), "state": range(m, width)}
    circ.extend(sim.h(j) for j in range(m))
    circ.compose(problem.a_circuit, prob_qubits)
    for j in range(m):
        cq = sim.controlled(problem.grover_circuit, j, width, prob_qubits)
        for _ in range(1 << j):
            circ.compose(cq)
    circ.compose(build_qft(m, inverse=True), list(range(m)))
    return circ


def qae_outcome_distribution(problem: AEProblem, m: int) -> np.ndarray:
    """Exact distribution of the measured ancilla integer ``y``."""
    if m < 1:
        raise ValidationError("need at least one evaluation qubit")
    if m + problem.num_qubits > MAX_SIM_QUBITS:
        raise ResourceError(f"{m + problem.num_qubits} qubits exceed the {MAX_SIM_QUBITS}-qubit simulator limit")
    circ = build_qae_circuit(problem, m)
    return sim.run(circ).probabilities(list(range(m)))


def canonical_qae(problem: AEProblem, m: int, shots: int = 100, seed=None) -> AmplitudeEstimate:
    """Canonical QAE; the point estimate comes from the most frequent ``y``.

    The interval is ``a_hat +- (2 sqrt(a_hat(1-a_hat)) pi/M + pi^2/M^2)``, the
    single-measurement error bound.
    """
    if shots < 1:
        raise ValidationError("shots must be >= 1")
    M = 1 << m
    probs = qae_outcome_distribution(problem, m)
    rng = np.random.default_rng(seed)
    counts = problem.measure(probs, shots, rng)
    y = int(np.argmax(counts))
    theta = math.pi * y / M
    a = math.sin(theta) ** 2
    # y and M - y give the same estimate; report theta in [0, pi/2]
    theta = math.asin(math.sqrt(a))
    half = 2 * math.sqrt(a * (1 - a)) * math.pi / M + math.pi ** 2 / M ** 2
    return AmplitudeEstimate.from_theta(
        theta, max(0.0, a - half), min(1.0, a + half), (M - 1) * shots, shots,
        method="canonical", details={"y": y, "counts": counts.tolist(), "M": M})


# -- maximum-likelihood QAE --------------------------------------------------

def exponential_powers(q: int) -> List[int]:
    """``[0, 1, 2, 4, ..., 2**(q-1)]``."""
    return [0] + [1 << j for j in range(q)]


def log_likelihood(theta, powers, hits, shots) -> np.ndarray:
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    total = np.zeros_like(theta)
    tiny = 1e-300
    for k, h, N in zip(powers, hits, shots):
        ang = (2 * k + 1) * theta
        p1 = np.clip(np.sin(ang) ** 2, tiny, 1.0)
        p0 = np.clip(np.cos(ang) ** 2, tiny, 1.0)
        total += h * np.log(p1) + (N - h) * np.log(p0)
    return total


def _golden_max(f, lo, hi, tol=1e-12, maxiter=200):
    g = (math.sqrt(5) - 1) / 2
    c, d = hi - g * (hi - lo), lo + g * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if hi - lo < tol:
            break
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - g * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + g * (hi - lo)
            fd = f(d)
    return (lo + hi) / 2


def mlqae(problem: AEProblem, powers: Optional[Sequence[int]] = None, shots_per_power: int = 100,
          seed=None, alpha: float = 0.05, grid_points: int = 10_000) -> AmplitudeEstimate:
    """Maximum-likelihood QAE over a fixed schedule of Grover powers."""
    powers = list(exponential_powers(4) if powers is None else powers)
    if not powers or any(k < 0 for k in powers):
        raise ValidationError("powers must be a non-empty list of non-negative integers")
    if shots_per_power < 1:
        raise ValidationError("shots_per_power must be >= 1")
    rng = np.random.default_rng(seed)
    hits = [problem.sample_hits(k, shots_per_power, rng) for k in powers]
    shots = [shots_per_power] * len(powers)

    degenerate = all(h == 0 for h in hits) or all(h == N for h, N in zip(hits, shots))
    if degenerate:
        theta = 0.0 if hits[0] == 0 else math.pi / 2
    else:
        grid = np.linspace(0, math.pi / 2, grid_points)
        ll = log_likelihood(grid, powers, hits, shots)
        i = int(np.argmax(ll))
        step = grid[1] - grid[0]
        lo, hi = max(0.0, grid[i] - step), min(math.pi / 2, grid[i] + step)
        theta = _golden_max(lambda t: float(log_likelihood(t, powers, hits, shots)[0]), lo, hi)

    fisher = sum(4 * N * (2 * k + 1) ** 2 for k, N in zip(powers, shots))
    half = norm.ppf(1 - alpha / 2) / math.sqrt(fisher)
    lo_t, hi_t = max(0.0, theta - half), min(math.pi / 2, theta + half)
    return AmplitudeEstimate.from_theta(
        theta, math.sin(lo_t) ** 2, math.sin(hi_t) ** 2,
        sum(k * N for k, N in zip(powers, shots)), sum(shots),
        method="mlqae", degenerate=degenerate,
        details={"powers": powers, "hits": hits, "shots": shots})


# -- iterative QAE -----------------------------------------------------------

def clopper_pearson(hits: int, shots: int, alpha: float):
    """Two-sided exact binomial interval at level ``1 - alpha``."""
    lo = 0.0 if hits == 0 else float(beta_dist.ppf(alpha / 2, hits, shots - hits + 1))
    hi = 1.0 if hits == shots else float(beta_dist.ppf(1 - alpha / 2, hits + 1, shots - hits))
    return lo, hi


def _find_next_k(k, theta_lo, theta_hi, up, min_ratio=2.0):
    """Largest ``k' >= min_ratio``-scaled ``k`` whose angle interval
    ``(4k'+2) [theta_lo, theta_hi]`` stays inside one half-period."""
    K_i = 4 * k + 2
    width = theta_hi - theta_lo
    K_max = int(math.pi / width) if width > 0 else 10 ** 9
    K = K_max - (K_max - 2) % 4
    while K >= min_ratio * K_i:
        lo = (K * theta_lo) % (2 * math.pi)
        hi = (K * theta_hi) % (2 * math.pi)
        if hi >= lo:
            if hi <= math.pi:
                return (K - 2) // 4, True
            if lo >= math.pi:
                return (K - 2) // 4, False
        K -= 4
    return k, up


def _pooled_mle(history, shots_per_round, lo, hi):
    """Likelihood maximiser over all rounds, restricted to ``[lo, hi]``.

    Every round's outcome probability is monotone on the final interval, so
    a coarse grid followed by golden-section refinement suffices.
    """
    if not history or hi <= lo:
        return (lo + hi) / 2
    powers = [r["k"] for r in history]
    hits = [r["hits"] for r in history]
    shots = [shots_per_round] * len(history)
    grid = np.linspace(lo, hi, 65)
    ll = log_likelihood(grid, powers, hits, shots)
    i = int(np.argmax(ll))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    t = _golden_max(lambda th: float(log_likelihood(th, powers, hits, shots)[0]), a, b)
    # boundary optima (e.g. a = 0 with no hits) are kept exactly
    for edge in (lo, hi):
        if log_likelihood(edge, powers, hits, shots)[0] >= log_likelihood(t, powers, hits, shots)[0]:
            t = edge
    return t


def iqae(problem: AEProblem, epsilon: float = 0.01, alpha: float = 0.05, shots_per_round: int = 100,
         seed=None, max_rounds: int = 200, min_ratio: float = 2.0) -> AmplitudeEstimate:
    """Iterative QAE with Clopper-Pearson intervals.

    Each round picks the largest Grover power whose rotated angle interval
    cannot alias, samples the objective qubit, and intersects the implied
    angle interval with the current one.  Stops once the interval on ``a`` is
    no wider than ``2 * epsilon``.
    """
    if not 0 < epsilon < 0.5:
        raise ValidationError(f"epsilon must lie in (0, 0.5), got {epsilon}")
    if not 0 < alpha < 1:
        raise ValidationError(f"alpha must lie in (0, 1), got {alpha}")
    if shots_per_round < 1:
        raise ValidationError("shots_per_round must be >= 1")
    rng = np.random.default_rng(seed)
    # worst-case number of rounds; splits alpha across them
    T = int(math.log(min_ratio * math.pi / 8 / epsilon) / math.log(min_ratio)) + 1
    alpha_i = alpha / T

    theta_lo, theta_hi = 0.0, math.pi / 2
    k, up = 0, True
    hits = shots = 0
    queries = total_shots = 0
    history = []
    rounds = 0
    while math.sin(theta_hi) ** 2 - math.sin(theta_lo) ** 2 > 2 * epsilon:
        rounds += 1
        if rounds > max_rounds:
            partial = AmplitudeEstimate.from_theta(
                (theta_lo + theta_hi) / 2, math.sin(theta_lo) ** 2, math.sin(theta_hi) ** 2,
                queries, total_shots, method="iqae", details={"rounds": history})
            raise ResourceError(f"IQAE did not converge within {max_rounds} rounds", partial)
        new_k, up = _find_next_k(k, theta_lo, theta_hi, up, min_ratio)
        if new_k != k:
            hits = shots = 0
        k = new_k
        h = problem.sample_hits(k, shots_per_round, rng)
        hits += h
        shots += shots_per_round
        queries += k * shots_per_round
        total_shots += shots_per_round
        p_lo, p_hi = clopper_pearson(hits, shots, alpha_i)

        K = 4 * k + 2
        base = math.floor(K * theta_lo / (2 * math.pi)) * 2 * math.pi
        if up:
            w_lo, w_hi = math.acos(1 - 2 * p_lo), math.acos(1 - 2 * p_hi)
        else:
            w_lo, w_hi = 2 * math.pi - math.acos(1 - 2 * p_hi), 2 * math.pi - math.acos(1 - 2 * p_lo)
        new_lo, new_hi = (base + w_lo) / K, (base + w_hi) / K
        # intervals from successive rounds are nested up to rounding
        theta_lo, theta_hi = max(theta_lo, new_lo), min(theta_hi, new_hi)
        if theta_hi < theta_lo:
            theta_lo = theta_hi = (theta_lo + theta_hi) / 2
        history.append({"k": k, "up": up, "hits": h, "theta_lo": theta_lo, "theta_hi": theta_hi})

    theta_point = _pooled_mle(history, shots_per_round, theta_lo, theta_hi)
    a_lo, a_hi = math.sin(theta_lo) ** 2, math.sin(theta_hi) ** 2
    return AmplitudeEstimate.from_theta(
        theta_point, a_lo, a_hi, queries, total_shots, method="iqae",
        details={"rounds": history})
