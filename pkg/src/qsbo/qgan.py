"""Hybrid qGAN: an RY/CZ generator circuit trained against a small
feed-forward discriminator to load an empirical distribution into amplitudes.

The discriminator sees outcomes mapped affinely onto ``[-1, 1]`` and is
trained by analytic gradient steps.  The generator angles are moved by a
derivative-free optimiser on the generator loss, evaluated against the exact
generated pmf.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from . import sim
from .circuits import AnsatzSpec, build_ansatz
from .distributions import DiscreteDistribution
from .errors import TrainingDivergence, ValidationError

_CLAMP = 1e-12
KL_SMOOTHING = 1e-8


@dataclass
class GeneratorConfig:
    n: int
    k: int
    theta_p: np.ndarray

    def __post_init__(self):
        self.theta_p = np.asarray(self.theta_p, dtype=float).ravel()
        if self.n < 1 or self.k < 0:
            raise ValidationError("need n >= 1 qubits and depth k >= 0")
        want = AnsatzSpec.num_params(self.n, self.k)
        if self.theta_p.size != want:
            raise ValidationError(f"generator with n={self.n}, k={self.k} needs {want} angles, "
                                  f"got {self.theta_p.size}")
        if not np.all(np.isfinite(self.theta_p)):
            raise ValidationError("generator angles must be finite")

    @classmethod
    def initial(cls, n: int, k: int, seed=None, spread: float = 0.1) -> "GeneratorConfig":
        """Start near the uniform pmf: first layer at pi/2, the rest small.

        Starting with full support keeps every mode reachable; point-mass
        starts tend to settle with a mode missing.
        """
        rng = np.random.default_rng(seed)
        theta = rng.normal(0.0, spread, AnsatzSpec.num_params(n, k))
        theta[:n] += math.pi / 2
        return cls(n, k, theta)

    def circuit(self) -> sim.Circuit:
        return build_ansatz(AnsatzSpec(self.n, self.k, self.theta_p))

    def pmf(self) -> DiscreteDistribution:
        return generator_pmf(self)

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "k": self.k, "theta": [float(t) for t in self.theta_p]})

    @classmethod
    def from_json(cls, text: str) -> "GeneratorConfig":
        try:
            d = json.loads(text)
            return cls(int(d["n"]), int(d["k"]), d["theta"])
        except (KeyError, TypeError, json.JSONDecodeError) as e:
            raise ValidationError(f"malformed generator parameters: {e}") from e

    def save(self, path) -> None:
        Path(path).write_text(self.to_json() + "\n")

    @classmethod
    def load(cls, path) -> "GeneratorConfig":
        return cls.from_json(Path(path).read_text())


def generator_pmf(config: GeneratorConfig) -> DiscreteDistribution:
    """Exact outcome distribution of the generator circuit on ``|0...0>``."""
    p = sim.run(config.circuit()).probabilities()
    return DiscreteDistribution(p / p.sum())


def _leaky(z):
    return np.where(z > 0, z, 0.01 * z)


def _sigmoid(z):
    return 0.5 * (1 + np.tanh(0.5 * z))


@dataclass
class Discriminator:
    """Fully connected net; leaky-ReLU hidden layers, logistic output."""

    layer_sizes: Tuple[int, ...] = (1, 8, 8, 1)
    weights: List[np.ndarray] = field(default_factory=list)
    biases: List[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        self.layer_sizes = tuple(int(s) for s in self.layer_sizes)
        if len(self.layer_sizes) < 2 or self.layer_sizes[0] != 1 or self.layer_sizes[-1] != 1:
            raise ValidationError("discriminator maps one input to one output")
        if not self.weights:
            self.weights = [np.zeros((o, i)) for i, o in zip(self.layer_sizes, self.layer_sizes[1:])]
            self.biases = [np.zeros(o) for o in self.layer_sizes[1:]]
        self.weights = [np.asarray(w, dtype=float) for w in self.weights]
        self.biases = [np.asarray(b, dtype=float) for b in self.biases]
        for w, b, i, o in zip(self.weights, self.biases, self.layer_sizes, self.layer_sizes[1:]):
            if w.shape != (o, i) or b.shape != (o,):
                raise ValidationError("weight shapes do not match layer sizes")
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
                raise ValidationError("discriminator weights must be finite")

    @classmethod
    def initialize(cls, layer_sizes=(1, 8, 8, 1), seed=None) -> "Discriminator":
        rng = np.random.default_rng(seed)
        ws = [rng.normal(0, math.sqrt(2.0 / i), (o, i)) for i, o in zip(layer_sizes, layer_sizes[1:])]
        bs = [np.zeros(o) for o in layer_sizes[1:]]
        return cls(tuple(layer_sizes), ws, bs)

    @property
    def params(self) -> List[np.ndarray]:
        return self.weights + self.biases

    def copy(self) -> "Discriminator":
        return Discriminator(self.layer_sizes, [w.copy() for w in self.weights],
                             [b.copy() for b in self.biases])

    def _forward(self, x):
        """Pre-activations and activations for a batch ``x`` of shape (m,)."""
        a = np.asarray(x, dtype=float).reshape(-1, 1)
        acts, pres = [a], []
        for j, (w, b) in enumerate(zip(self.weights, self.biases)):
            z = a @ w.T + b
            pres.append(z)
            a = _leaky(z) if j < len(self.weights) - 1 else z
            acts.append(a)
        return pres, acts

    def logits(self, x) -> np.ndarray:
        return self._forward(x)[1][-1][:, 0]

    def __call__(self, x) -> np.ndarray:
        return _sigmoid(self.logits(x))

    def backward(self, x, dlogit) -> List[np.ndarray]:
        """Gradient of ``sum_i dlogit_i * logit(x_i)``, ordered like :attr:`params`."""
        pres, acts = self._forward(x)
        delta = np.asarray(dlogit, dtype=float).reshape(-1, 1)
        gw, gb = [], []
        for j in range(len(self.weights) - 1, -1, -1):
            gw.append(delta.T @ acts[j])
            gb.append(delta.sum(axis=0))
            if j:
                delta = (delta @ self.weights[j]) * np.where(pres[j - 1] > 0, 1.0, 0.01)
        return gw[::-1] + gb[::-1]

    def output_gradient(self, x: float) -> List[np.ndarray]:
        """Gradient of ``D(x)`` itself with respect to every parameter."""
        d = float(self(np.array([x]))[0])
        return self.backward(np.array([x]), np.array([d * (1 - d)]))


def discriminator_forward(disc: Discriminator, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValidationError("discriminator input must be finite")
    out = disc(x.ravel())
    return float(out[0]) if x.ndim == 0 else out


def scale_samples(values, n: int) -> np.ndarray:
    """Map outcomes ``0..2**n-1`` onto ``[-1, 1]``."""
    top = (1 << n) - 1
    return 2.0 * np.asarray(values, dtype=float) / max(top, 1) - 1.0


def _clamped(d):
    return np.clip(d, _CLAMP, 1 - _CLAMP)


def generator_loss(disc: Discriminator, gen_samples) -> float:
    """``-mean log D(g)`` over the (already scaled) generated batch."""
    g = np.asarray(gen_samples, dtype=float).ravel()
    if g.size == 0:
        raise ValidationError("generated batch is empty")
    return float(-np.mean(np.log(_clamped(disc(g)))))


def discriminator_loss(disc: Discriminator, real_batch, gen_batch) -> float:
    """Negated batch objective of the discriminator.

    The discriminator maximises ``mean log D(x) + mean log(1 - D(g))``; this
    returns minus that, so smaller is better for a minimiser.
    """
    x = np.asarray(real_batch, dtype=float).ravel()
    g = np.asarray(gen_batch, dtype=float).ravel()
    if x.size == 0 or g.size == 0:
        raise ValidationError("real and generated batches must be non-empty")
    return float(-(np.mean(np.log(_clamped(disc(x)))) + np.mean(np.log(_clamped(1 - disc(g))))))


def _discriminator_grad(disc, x, g):
    """Gradient of :func:`discriminator_loss` (unclamped) for the parameters."""
    dx = -(1 - disc(x)) / len(x)
    dg = disc(g) / len(g)
    gx = disc.backward(x, dx)
    gg = disc.backward(g, dg)
    return [a + b for a, b in zip(gx, gg)]


def relative_entropy(p, q) -> float:
    """``KL(p || q)`` in nats, with ``q`` mixed with a tiny uniform part."""
    p = np.asarray(getattr(p, "probs", p), dtype=float)
    q = np.asarray(getattr(q, "probs", q), dtype=float)
    if p.shape != q.shape:
        raise ValidationError(f"support sizes differ: {p.shape} vs {q.shape}")
    q = (1 - KL_SMOOTHING) * q + KL_SMOOTHING / q.size
    mask = p > 0
    return float(max(np.sum(p[mask] * np.log(p[mask] / q[mask])), 0.0))


@dataclass
class TrainingConfig:
    epochs: int = 200
    batch_size: int = 200
    discriminator_lr: float = 1e-3
    discriminator_optimizer: str = "adam"
    discriminator_steps: int = 10
    generator_maxiter: int = 12
    generator_step: float = 0.002
    seed: Optional[int] = 0

    def __post_init__(self):
        if self.epochs < 1 or self.batch_size < 1:
            raise ValidationError("epochs and batch_size must be >= 1")
        if self.discriminator_lr <= 0:
            raise ValidationError("discriminator learning rate must be positive")
        if self.discriminator_optimizer not in ("adam", "sgd"):
            raise ValidationError("discriminator optimizer must be 'adam' or 'sgd'")
        if self.generator_maxiter < 1 or self.discriminator_steps < 1:
            raise ValidationError("step counts must be >= 1")


@dataclass
class TrainingTrace:
    generator_loss: List[float] = field(default_factory=list)
    discriminator_loss: List[float] = field(default_factory=list)
    relative_entropy: List[float] = field(default_factory=list)
    theta_p: List[np.ndarray] = field(default_factory=list)

    def rows(self):
        for e, (lg, ld, kl) in enumerate(zip(self.generator_loss, self.discriminator_loss,
                                             self.relative_entropy)):
            yield {"epoch": e + 1, "generator_loss": lg, "discriminator_loss": ld, "relative_entropy": kl}


class _Adam:
    def __init__(self, lr, b1=0.9, b2=0.999, eps=1e-8):
        self.lr, self.b1, self.b2, self.eps = lr, b1, b2, eps
        self.m = self.v = None
        self.t = 0

    def step(self, params, grads):
        if self.m is None:
            self.m = [np.zeros_like(p) for p in params]
            self.v = [np.zeros_like(p) for p in params]
        self.t += 1
        for p, g, m, v in zip(params, grads, self.m, self.v):
            m *= self.b1
            m += (1 - self.b1) * g
            v *= self.b2
            v += (1 - self.b2) * g * g
            mh = m / (1 - self.b1 ** self.t)
            vh = v / (1 - self.b2 ** self.t)
            p -= self.lr * mh / (np.sqrt(vh) + self.eps)


def train(target_samples, gen: GeneratorConfig, disc: Optional[Discriminator] = None,
          cfg: Optional[TrainingConfig] = None, target_pmf=None) -> Tuple[GeneratorConfig, TrainingTrace]:
    """Alternating adversarial training; returns the best generator by relative entropy.

    Relative entropy is measured against ``target_pmf`` when given, otherwise
    against the empirical pmf of ``target_samples``.
    """
    cfg = cfg or TrainingConfig()
    n = gen.n
    data = np.asarray(target_samples, dtype=int).ravel()
    if data.size == 0:
        raise ValidationError("no target samples")
    if data.min() < 0 or data.max() >= 1 << n:
        raise ValidationError(f"target samples must lie in 0..{(1 << n) - 1}")
    ref = DiscreteDistribution.from_samples(data, n) if target_pmf is None else target_pmf
    ref = np.asarray(getattr(ref, "probs", ref), dtype=float)

    rng = np.random.default_rng(cfg.seed)
    disc = disc.copy() if disc is not None else Discriminator.initialize(seed=rng.integers(2 ** 32))
    theta = gen.theta_p.copy()
    grid = scale_samples(np.arange(1 << n), n)
    real = scale_samples(data, n)
    opt = _Adam(cfg.discriminator_lr) if cfg.discriminator_optimizer == "adam" else None
    trace = TrainingTrace()

    def pmf_of(t):
        return generator_pmf(GeneratorConfig(n, gen.k, t)).probs

    def lg_exact(t):
        # expectation of -log D over the exact generated pmf
        logd = np.log(_clamped(disc(grid)))
        return float(-pmf_of(t) @ logd)

    best_theta, best_kl = theta.copy(), relative_entropy(ref, pmf_of(theta))
    for _ in range(cfg.epochs):
        order = rng.permutation(real.size)
        lgs, lds = [], []
        for start in range(0, real.size, cfg.batch_size):
            xb = real[order[start:start + cfg.batch_size]]
            q = pmf_of(theta)
            for _ in range(cfg.discriminator_steps):
                gb = grid[rng.choice(q.size, size=xb.size, p=q)]
                grads = _discriminator_grad(disc, xb, gb)
                if opt is not None:
                    opt.step(disc.params, grads)
                else:
                    for p, g in zip(disc.params, grads):
                        p -= cfg.discriminator_lr * g
            ld = discriminator_loss(disc, xb, gb)
            res = minimize(lg_exact, theta, method="COBYLA",
                           options={"maxiter": cfg.generator_maxiter, "rhobeg": cfg.generator_step})
            theta = np.asarray(res.x, dtype=float)
            lg = lg_exact(theta)
            if not (math.isfinite(lg) and math.isfinite(ld) and np.all(np.isfinite(theta))):
                raise TrainingDivergence("non-finite loss during training", trace=trace)
            lgs.append(lg)
            lds.append(ld)
        kl = relative_entropy(ref, pmf_of(theta))
        trace.generator_loss.append(float(np.mean(lgs)))
        trace.discriminator_loss.append(float(np.mean(lds)))
        trace.relative_entropy.append(kl)
        trace.theta_p.append(theta.copy())
        if kl < best_kl:
            best_theta, best_kl = theta.copy(), kl
    return GeneratorConfig(n, gen.k, best_theta), trace
