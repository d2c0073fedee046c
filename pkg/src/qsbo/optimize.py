"""Derivative-free minimisers for noisy objectives."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from .errors import ValidationError


@dataclass
class OptimizeResult:
    x: np.ndarray
    fun: float
    nfev: int
    converged: bool
    restarts: int = 0
    history: List[Tuple[np.ndarray, float]] = field(default_factory=list)


class _Budget:
    def __init__(self, f, budget, bounds):
        self.f = f
        self.budget = budget
        self.lo, self.hi = bounds
        self.nfev = 0
        self.history = []

    def __call__(self, x):
        x = np.clip(x, self.lo, self.hi)
        self.nfev += 1
        y = float(self.f(x))
        self.history.append((x.copy(), y))
        return y

    @property
    def left(self):
        return self.budget - self.nfev


def nelder_mead(f: Callable[[np.ndarray], float], x0: Sequence[float], bounds: Tuple[float, float],
                budget: int = 1000, initial_step: float = 0.5, reeval_every: int = 20,
                xatol: float = 1e-3, fatol: float = 1e-6, max_restarts: int = 50,
                confirm_evals: int = 3, restart_scales: Sequence[float] = (1.0, 2.0, 4.0),
                restart_sampler: Optional[Callable[[], np.ndarray]] = None) -> OptimizeResult:
    """Bounded Nelder-Mead with restarts, for a possibly noisy ``f``.

    Points are clipped into ``bounds``.  Every ``reeval_every`` iterations the
    best vertex is evaluated again and its value replaced by the running mean
    of all its evaluations, so a single lucky draw cannot pin the simplex.
    When the simplex collapses, its best vertex is evaluated until it has
    ``confirm_evals`` samples and replaces the incumbent only if its mean is
    better; the search then restarts around the incumbent.  With a
    ``restart_sampler``, every other restart instead begins from a fresh
    point it draws, which lets the search leave a basin it has settled in.
    """
    if budget < 1:
        raise ValidationError("optimizer budget must be >= 1")
    fb = _Budget(f, budget, bounds)
    x0 = np.clip(np.asarray(x0, dtype=float), *bounds)
    dim = len(x0)
    alpha, gamma, rho, sigma = 1.0, 2.0, 0.5, 0.5
    # incumbent value is a running mean over all of its evaluations
    best_x, best_sum, best_n = x0.copy(), fb(x0), 1
    restarts = 0
    converged = False
    while fb.left > dim:
        fresh = restart_sampler is not None and restarts % 2 == 1
        if fresh:
            start = np.clip(np.asarray(restart_sampler(), dtype=float), *bounds)
            step = initial_step
        else:
            start = best_x
            # local restarts cycle through larger steps to leave shallow basins
            step = initial_step * restart_scales[(restarts // (2 if restart_sampler else 1)) % len(restart_scales)]
        simplex = [start.copy()]
        for i in range(dim):
            v = start.copy()
            v[i] += step if v[i] + step <= bounds[1] else -step
            simplex.append(np.clip(v, *bounds))
        if fresh:
            values = [fb(v) for v in simplex]
            n_evals = [1] * (dim + 1)
        else:
            values = [best_sum / best_n] + [fb(v) for v in simplex[1:]]
            n_evals = [best_n] + [1] * dim
        it = 0
        stalled = False
        while fb.left > 0:
            it += 1
            order = np.argsort(values)
            simplex = [simplex[i] for i in order]
            values = [values[i] for i in order]
            n_evals = [n_evals[i] for i in order]
            if reeval_every and it % reeval_every == 0:
                y = fb(simplex[0])
                values[0] = (values[0] * n_evals[0] + y) / (n_evals[0] + 1)
                n_evals[0] += 1
                continue
            spread_x = max(np.max(np.abs(v - simplex[0])) for v in simplex[1:])
            if spread_x < xatol or abs(values[-1] - values[0]) < fatol:
                stalled = True
                break
            centroid = np.mean(simplex[:-1], axis=0)
            xr = np.clip(centroid + alpha * (centroid - simplex[-1]), *bounds)
            fr = fb(xr)
            if values[0] <= fr < values[-2]:
                simplex[-1], values[-1], n_evals[-1] = xr, fr, 1
                continue
            if fr < values[0]:
                if fb.left <= 0:
                    simplex[-1], values[-1], n_evals[-1] = xr, fr, 1
                    break
                xe = np.clip(centroid + gamma * (xr - centroid), *bounds)
                fe = fb(xe)
                if fe < fr:
                    simplex[-1], values[-1] = xe, fe
                else:
                    simplex[-1], values[-1] = xr, fr
                n_evals[-1] = 1
                continue
            if fb.left <= 0:
                break
            if fr < values[-1]:
                xc = np.clip(centroid + rho * (xr - centroid), *bounds)
            else:
                xc = np.clip(centroid + rho * (simplex[-1] - centroid), *bounds)
            fc = fb(xc)
            if fc < min(fr, values[-1]):
                simplex[-1], values[-1], n_evals[-1] = xc, fc, 1
                continue
            # shrink towards the best vertex
            for i in range(1, dim + 1):
                if fb.left <= 0:
                    break
                simplex[i] = np.clip(simplex[0] + sigma * (simplex[i] - simplex[0]), *bounds)
                values[i] = fb(simplex[i])
                n_evals[i] = 1
        i = int(np.argmin(values))
        cand_x, cand_sum, cand_n = simplex[i].copy(), values[i] * n_evals[i], n_evals[i]
        same = np.array_equal(cand_x, best_x)
        # confirm a new candidate before it may replace the incumbent
        while not same and cand_n < confirm_evals and fb.left > 0:
            cand_sum += fb(cand_x)
            cand_n += 1
        if same:
            best_sum, best_n = cand_sum, cand_n
        elif cand_sum / cand_n < best_sum / best_n:
            best_x, best_sum, best_n = cand_x, cand_sum, cand_n
        if not stalled:
            break
        converged = True
        if restarts >= max_restarts:
            break
        restarts += 1
    return OptimizeResult(best_x, best_sum / best_n, fb.nfev, converged, restarts, fb.history)


def cobyla(f: Callable[[np.ndarray], float], x0: Sequence[float], bounds: Tuple[float, float],
           budget: int = 1000, initial_step: float = 0.5, **_) -> OptimizeResult:
    """scipy's COBYLA with box constraints and an evaluation budget."""
    fb = _Budget(f, budget, bounds)
    x0 = np.clip(np.asarray(x0, dtype=float), *bounds)
    res = minimize(fb, x0, method="COBYLA", bounds=[bounds] * len(x0),
                   options={"maxiter": budget, "rhobeg": initial_step})
    xs = np.clip(res.x, *bounds)
    return OptimizeResult(xs, float(res.fun), fb.nfev, bool(res.success), 0, fb.history)


OPTIMIZERS = {"nelder-mead": nelder_mead, "cobyla": cobyla}
