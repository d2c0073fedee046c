"""Command-line experiment runner.

``qsbo run CONFIG`` executes one experiment described by a JSON file and
writes ``results.csv``, SVG charts and ``manifest.json`` into the output
directory.  ``qsbo train-qgan CONFIG`` fits a generator and writes its
parameters, a per-epoch trace and two charts.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import platform
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

import numpy as np
import scipy
from pydantic import BaseModel, ConfigDict, Field, ValidationError as PydanticError, model_validator

from . import __version__, svg
from .circuits import AnsatzSpec, build_distribution_loader, build_newsvendor_A
from .distributions import DiscreteDistribution, bimodal_standin
from .errors import QSBOError, ResourceError, TrainingDivergence, ValidationError
from .estimation import AEProblem
from .mitigation import ReadoutSpec
from .newsvendor import (NewsvendorInstance, expected_profit_curve, mc_quantum_estimate,
                         optimal_supply_bruteforce, profit, scaling_for, unscale_estimate)
from .qgan import GeneratorConfig, TrainingConfig, generator_pmf, relative_entropy, train
from .solver import DEFAULT_QAE_PARAMS, OptimizerSpec, QSBOConfig, estimate_objective, qsbo_solve

SCHEMA_VERSION = 1
EXIT_OK, EXIT_ERROR, EXIT_CONFIG, EXIT_RESOURCE, EXIT_DIVERGENCE = 0, 1, 2, 3, 4
EXPERIMENTS = ("solve", "sweep-cost", "sweep-fixed", "sweep-demand", "train-qgan", "estimate-compare", "ae-bench")


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class DemandModel(_Strict):
    pmf: Optional[List[float]] = None
    qgan_params: Optional[str] = None
    builtin: Optional[Literal["bimodal"]] = None
    label: Optional[str] = None

    @model_validator(mode="after")
    def _one_source(self):
        given = [k for k in ("pmf", "qgan_params", "builtin") if getattr(self, k) is not None]
        if len(given) != 1:
            raise ValueError(f"exactly one of pmf, qgan_params, builtin is required (got {given or 'none'})")
        return self


class InstanceModel(_Strict):
    r: float = 0.6
    c: float = 0.3
    t: float = 0.2


class OptimizerModel(_Strict):
    method: Literal["nelder-mead", "cobyla"] = "nelder-mead"
    budget: int = Field(1000, ge=1)
    initial_step: float = Field(0.5, gt=0)
    reeval_every: int = Field(20, ge=0)
    xatol: float = Field(0.02, gt=0)
    starts: int = Field(4, ge=1)
    start_spread: float = Field(0.5, ge=0)
    select_evals: int = Field(3, ge=0)


class QSBOModel(_Strict):
    depth: int = Field(2, ge=0)
    c_scale: float = Field(0.1, gt=0, le=1)
    qae: Literal["canonical", "mlqae", "iqae", "exact"] = "iqae"
    qae_params: Dict[str, Any] = Field(default_factory=dict)
    optimizer: OptimizerModel = Field(default_factory=OptimizerModel)
    backend: Literal["reduced", "full"] = "reduced"
    final_evals: int = Field(5, ge=1)


class NoiseModel(_Strict):
    p01: float = Field(0.02, ge=0, lt=0.5)
    p10: float = Field(0.02, ge=0, lt=0.5)
    mitigate: bool = True


class QGANModel(_Strict):
    depth: int = Field(2, ge=0)
    epochs: int = Field(200, ge=1)
    batch_size: int = Field(200, ge=1)
    num_samples: int = Field(2000, ge=1)
    discriminator_lr: float = Field(1e-3, gt=0)
    discriminator_optimizer: Literal["adam", "sgd"] = "adam"
    discriminator_steps: int = Field(10, ge=1)
    generator_maxiter: int = Field(12, ge=1)
    generator_step: float = Field(0.002, gt=0)


class CompareModel(_Strict):
    saa_samples: int = Field(100_000, ge=1)
    mc_shots: int = Field(1024, ge=1)
    quantum_samples: int = Field(256, ge=1)


class AEBenchModel(_Strict):
    methods: List[Literal["canonical", "mlqae", "iqae"]] = Field(
        default_factory=lambda: ["canonical", "mlqae", "iqae"], min_length=1)
    supplies: Optional[List[int]] = None


class ExperimentConfig(_Strict):
    schema_version: Literal[1]
    experiment: Literal["solve", "sweep-cost", "sweep-fixed", "sweep-demand", "train-qgan",
                        "estimate-compare", "ae-bench"]
    instance: InstanceModel = Field(default_factory=InstanceModel)
    demand: Optional[DemandModel] = None
    demands: Optional[List[DemandModel]] = None
    sweep: Optional[List[float]] = None
    qsbo: QSBOModel = Field(default_factory=QSBOModel)
    noise: Optional[NoiseModel] = None
    qgan: QGANModel = Field(default_factory=QGANModel)
    compare: CompareModel = Field(default_factory=CompareModel)
    ae_bench: AEBenchModel = Field(default_factory=AEBenchModel)
    seed: int = Field(0, ge=0)
    output_dir: str = "results"

    @model_validator(mode="after")
    def _shape(self):
        kind = self.experiment
        if kind in ("sweep-cost", "sweep-fixed"):
            if not self.sweep:
                raise ValueError(f"{kind} needs a non-empty 'sweep' list")
        elif self.sweep is not None:
            raise ValueError(f"'sweep' is only valid for sweep-cost and sweep-fixed, not {kind}")
        if kind == "sweep-demand":
            if not self.demands:
                raise ValueError("sweep-demand needs a non-empty 'demands' list")
            if self.demand is not None:
                raise ValueError("sweep-demand takes 'demands', not 'demand'")
        else:
            if self.demands is not None:
                raise ValueError(f"'demands' is only valid for sweep-demand, not {kind}")
            if self.demand is None:
                self.demand = DemandModel(builtin="bimodal")
        if kind == "train-qgan" and self.demand.qgan_params is not None:
            raise ValueError("train-qgan needs a pmf or built-in demand, not generator parameters")
        return self


def load_config(path) -> ExperimentConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as e:
        raise ValidationError(f"cannot read config {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ValidationError(f"config {path} is not valid JSON: {e}") from e
    try:
        return ExperimentConfig.model_validate(raw)
    except PydanticError as e:
        msgs = []
        for err in e.errors():
            loc = ".".join(str(p) for p in err["loc"]) or "<root>"
            msgs.append(f"{loc}: {err['msg']}")
        raise ValidationError("invalid config: " + "; ".join(msgs)) from e


# -- planning -----------------------------------------------------------------

def _demand(spec: DemandModel, base: Path):
    """``(distribution, loader circuit or None, label)`` for a demand block."""
    if spec.builtin is not None:
        return bimodal_standin(), None, spec.label or "bimodal"
    if spec.pmf is not None:
        return DiscreteDistribution(spec.pmf), None, spec.label or "pmf"
    path = Path(spec.qgan_params)
    if not path.is_absolute():
        path = base / path
    try:
        gen = GeneratorConfig.load(path)
    except OSError as e:
        raise ValidationError(f"demand.qgan_params: cannot read {path}: {e}") from e
    return generator_pmf(gen), gen.circuit(), spec.label or path.stem


def _qsbo_config(cfg: ExperimentConfig, seed: int, **overrides) -> QSBOConfig:
    q = cfg.qsbo
    kw = dict(depth=q.depth, c_scale=q.c_scale, qae=q.qae, qae_params=dict(q.qae_params),
              optimizer=OptimizerSpec(**q.optimizer.model_dump()), seed=seed, backend=q.backend,
              final_evals=q.final_evals,
              readout=ReadoutSpec(**cfg.noise.model_dump()) if cfg.noise else None)
    kw.update(overrides)
    return QSBOConfig(**kw)


def _point_seeds(seed: int, n: int) -> List[int]:
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(n)]


def plan(cfg: ExperimentConfig, base: Path, seed: int) -> List[Dict[str, Any]]:
    """Build and validate every point of the experiment without running it."""
    kind = cfg.experiment
    inst_kw = cfg.instance.model_dump()
    tasks = []
    if kind in ("solve", "sweep-cost", "sweep-fixed", "estimate-compare", "ae-bench"):
        dist, loader, label = _demand(cfg.demand, base)
        if kind == "solve":
            points = [("", "", inst_kw)]
        elif kind == "sweep-cost":
            points = [("c", v, {**inst_kw, "c": v}) for v in cfg.sweep]
        elif kind == "sweep-fixed":
            points = [("t", v, {**inst_kw, "t": v}) for v in cfg.sweep]
        else:
            points = [("", "", inst_kw)]
        seeds = [seed] if len(points) == 1 else _point_seeds(seed, len(points))
        for (param, value, kw), s in zip(points, seeds):
            inst = NewsvendorInstance(demand=dist, **kw)
            tasks.append({"kind": kind, "param": param, "value": value, "inst": inst, "loader": loader,
                          "label": label, "qsbo": _qsbo_config(cfg, s), "seed": s})
    elif kind == "sweep-demand":
        seeds = _point_seeds(seed, len(cfg.demands))
        for i, (spec, s) in enumerate(zip(cfg.demands, seeds)):
            dist, loader, label = _demand(spec, base)
            inst = NewsvendorInstance(demand=dist, **inst_kw)
            tasks.append({"kind": kind, "param": "demand", "value": label, "inst": inst, "loader": loader,
                          "label": label, "qsbo": _qsbo_config(cfg, s), "seed": s})
    if kind == "estimate-compare":
        t = tasks[0]
        n = cfg.compare.quantum_samples
        t["compare"] = cfg.compare.model_dump()
        t["iqae"] = _qsbo_config(cfg, seed, qae="iqae",
                                 qae_params={**DEFAULT_QAE_PARAMS["iqae"], "shots_per_round": n})
        t["mlqae"] = _qsbo_config(cfg, seed, qae="mlqae",
                                  qae_params={**DEFAULT_QAE_PARAMS["mlqae"], "shots_per_power": n})
    if kind == "ae-bench":
        t = tasks[0]
        size = t["inst"].demand.size
        supplies = cfg.ae_bench.supplies if cfg.ae_bench.supplies is not None else list(range(size))
        if any(not 0 <= s < size for s in supplies):
            raise ValidationError(f"ae_bench.supplies must lie in 0..{size - 1}")
        t["supplies"] = supplies
        t["methods"] = list(cfg.ae_bench.methods)
    if kind == "train-qgan":
        dist, _, label = _demand(cfg.demand, base)
        q = cfg.qgan
        tcfg = TrainingConfig(epochs=q.epochs, batch_size=q.batch_size, discriminator_lr=q.discriminator_lr,
                              discriminator_optimizer=q.discriminator_optimizer,
                              discriminator_steps=q.discriminator_steps, generator_maxiter=q.generator_maxiter,
                              generator_step=q.generator_step, seed=seed)
        tasks.append({"kind": kind, "dist": dist, "label": label, "train": tcfg, "depth": q.depth,
                      "num_samples": q.num_samples, "seed": seed})
    return tasks


# -- execution ----------------------------------------------------------------

def _row(task, s_star, pmf, profit_est, queries, wall_ms, experiment=None, param=None, value=None,
         oracle=None):
    o_s, o_p = oracle if oracle is not None else optimal_supply_bruteforce(task["inst"])
    return {"experiment": experiment or task["kind"], "swept_param": task["param"] if param is None else param,
            "swept_value": task["value"] if value is None else value, "s_star": s_star,
            "supply_pmf": [float(p) for p in pmf], "profit_estimate": float(profit_est),
            "oracle_s_star": o_s, "oracle_profit": float(o_p), "qae_queries": int(queries),
            "seed": task["seed"], "wall_ms": wall_ms}


def _one_hot(s: int, size: int) -> np.ndarray:
    v = np.zeros(size)
    v[s] = 1.0
    return v


def _basis_angles(s: int, n: int, depth: int) -> np.ndarray:
    """Ansatz angles preparing the basis state ``|s>``."""
    theta = np.zeros(AnsatzSpec.num_params(n, depth))
    for q in range(n):
        if (s >> q) & 1:
            theta[q] = math.pi
    return theta


def _run_task(task) -> List[Dict[str, Any]]:
    kind = task["kind"]
    t0 = time.perf_counter()
    if kind in ("solve", "sweep-cost", "sweep-fixed", "sweep-demand"):
        res = qsbo_solve(task["inst"], task["qsbo"], demand_loader=task["loader"])
        ms = (time.perf_counter() - t0) * 1e3
        return [_row(task, res.s_star, res.supply_pmf.probs, res.expected_profit_estimate,
                     res.oracle_queries, ms)]
    inst = task["inst"]
    size = inst.demand.size
    if kind == "estimate-compare":
        c = task["compare"]
        rows = []
        # common random numbers across supply levels
        d = inst.demand.sample(c["saa_samples"], np.random.default_rng(task["seed"]))
        saa = np.array([np.mean(profit(s, d, inst)) for s in range(size)])
        s = int(np.argmax(saa))
        rows.append(_row(task, s, _one_hot(s, size), saa[s], 0, (time.perf_counter() - t0) * 1e3,
                         param="method", value="SAA"))
        t1 = time.perf_counter()
        gen = _LoaderGenerator(task["loader"], inst.demand)
        mc = np.array([mc_quantum_estimate(inst, s, gen, shots=c["mc_shots"], seed=task["seed"])
                       for s in range(size)])
        s = int(np.argmax(mc))
        rows.append(_row(task, s, _one_hot(s, size), mc[s], 0, (time.perf_counter() - t1) * 1e3,
                         param="method", value="MC+QC"))
        for label, key in (("QSBO(IQAE)", "iqae"), ("QSBO(MLQAE)", "mlqae")):
            t1 = time.perf_counter()
            res = qsbo_solve(inst, task[key], demand_loader=task["loader"])
            rows.append(_row(task, res.s_star, res.supply_pmf.probs, res.expected_profit_estimate,
                             res.oracle_queries, (time.perf_counter() - t1) * 1e3, param="method",
                             value=label))
        return rows
    if kind == "ae-bench":
        qcfg = task["qsbo"]
        loader = task["loader"] if task["loader"] is not None else build_distribution_loader(inst.demand)
        scaling = scaling_for(inst, qcfg.c_scale)
        curve = expected_profit_curve(inst)
        o_s = optimal_supply_bruteforce(inst)[0]
        rng = np.random.default_rng(task["seed"])
        rows = []
        for method in task["methods"]:
            params = dict(DEFAULT_QAE_PARAMS[method])
            if method == qcfg.qae:
                params.update(qcfg.qae_params)
            for s in task["supplies"]:
                t1 = time.perf_counter()
                A = build_newsvendor_A(AnsatzSpec(inst.num_qubits, qcfg.depth,
                                                  _basis_angles(s, inst.num_qubits, qcfg.depth)),
                                       loader, inst, scaling)
                problem = AEProblem(A, A["objective"][0])
                problem.readout = qcfg.readout
                if qcfg.backend == "reduced":
                    problem = problem.reduced()
                a_hat, q = estimate_objective(problem, method, params, rng)
                rows.append(_row(task, s, _one_hot(s, size), unscale_estimate(a_hat, scaling), q,
                                 (time.perf_counter() - t1) * 1e3, experiment=f"ae-bench/{method}",
                                 param="supply", value=s, oracle=(o_s, curve[s])))
        return rows
    raise ValidationError(f"unknown experiment {kind!r}")


class _LoaderGenerator:
    """Measurement source for the Monte Carlo baseline: the demand loader circuit."""

    def __init__(self, loader, demand):
        self.loader = loader
        self.demand = demand

    def pmf(self):
        if self.loader is None:
            return self.demand
        from . import sim
        return DiscreteDistribution(sim.run(self.loader).probabilities())


RESULT_COLUMNS_HEAD = ["experiment", "swept_param", "swept_value", "s_star"]
RESULT_COLUMNS_TAIL = ["profit_estimate", "oracle_s_star", "oracle_profit", "qae_queries", "seed", "wall_ms"]


def result_columns(num_supply: int) -> List[str]:
    return RESULT_COLUMNS_HEAD + [f"supply_pmf_{i}" for i in range(num_supply)] + RESULT_COLUMNS_TAIL


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_results(rows, path: Path, timing: bool) -> None:
    width = len(rows[0]["supply_pmf"])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(result_columns(width))
    for r in rows:
        w.writerow([_cell(r[c]) for c in RESULT_COLUMNS_HEAD] + [_cell(p) for p in r["supply_pmf"]]
                   + [_cell(r[c]) for c in RESULT_COLUMNS_TAIL[:-1]]
                   + [f"{r['wall_ms']:.1f}" if timing else ""])
    path.write_text(buf.getvalue())


def _charts(cfg: ExperimentConfig, tasks, rows, out: Path) -> List[str]:
    kind = cfg.experiment
    written = []
    if kind == "ae-bench":
        supplies = tasks[0]["supplies"]
        curve = expected_profit_curve(tasks[0]["inst"])
        series = [("exact", [float(curve[s]) for s in supplies])]
        for m in tasks[0]["methods"]:
            series.append((m, [r["profit_estimate"] for r in rows if r["experiment"] == f"ae-bench/{m}"]))
        (out / "ae_bench.svg").write_text(svg.line_plot(series, "Expected profit by supply level",
                                                        "supply index", "expected profit"))
        return ["ae_bench.svg"]
    if kind == "sweep-demand":
        for i, (t, r) in enumerate(zip(tasks, rows)):
            name = f"supply_{i}.svg"
            demand = t["inst"].demand
            (out / name).write_text(svg.bars_with_lines(
                list(demand.support), list(demand.probs), f"demand ({t['label']})",
                [(f"supply, s*={r['s_star']}", r["supply_pmf"])], f"Optimal supply: {t['label']}"))
            written.append(name)
        return written
    demand = tasks[0]["inst"].demand
    if kind == "estimate-compare":
        lines = [(f"{r['swept_value']} s*={r['s_star']}", r["supply_pmf"]) for r in rows]
    elif kind == "solve":
        lines = [(f"supply, s*={rows[0]['s_star']}", rows[0]["supply_pmf"])]
    else:
        lines = [(f"{r['swept_param']}={r['swept_value']:g}", r["supply_pmf"]) for r in rows]
    (out / "supply.svg").write_text(svg.bars_with_lines(list(demand.support), list(demand.probs), "demand",
                                                        lines, f"Optimal supply ({kind})"))
    return ["supply.svg"]


def _manifest(cfg: ExperimentConfig, seed: int, outputs: List[str], out: Path, extra=None) -> None:
    data = {
        "tool": "qsbo",
        "version": __version__,
        "schema_version": SCHEMA_VERSION,
        "seed": seed,
        "config": cfg.model_dump(mode="json"),
        "outputs": sorted(outputs),
        "versions": {"python": platform.python_version(), "numpy": np.__version__, "scipy": scipy.__version__},
    }
    if extra:
        data.update(extra)
    (out / "manifest.json").write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def run_experiment(cfg: ExperimentConfig, out: Path, seed: int, jobs: int = 1, timing: bool = False,
                   base: Path = Path(".")) -> List[Dict[str, Any]]:
    tasks = plan(cfg, base, seed)
    if cfg.experiment == "train-qgan":
        run_training(cfg, tasks[0], out, seed)
        return []
    out.mkdir(parents=True, exist_ok=True)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_task, tasks))
    else:
        chunks = [_run_task(t) for t in tasks]
    rows = [r for chunk in chunks for r in chunk]
    write_results(rows, out / "results.csv", timing)
    outputs = ["results.csv"] + _charts(cfg, tasks, rows, out)
    _manifest(cfg, seed, outputs + ["manifest.json"], out)
    return rows


def write_trace(trace, path: Path) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["epoch", "generator_loss", "discriminator_loss", "relative_entropy"])
    for row in trace.rows():
        w.writerow([row["epoch"], repr(row["generator_loss"]), repr(row["discriminator_loss"]),
                    repr(row["relative_entropy"])])
    path.write_text(buf.getvalue())


def run_training(cfg: ExperimentConfig, task, out: Path, seed: int) -> GeneratorConfig:
    out.mkdir(parents=True, exist_ok=True)
    dist = task["dist"]
    rng = np.random.default_rng(seed)
    data = dist.sample(task["num_samples"], rng)
    gen0 = GeneratorConfig.initial(dist.num_qubits, task["depth"], rng)
    outputs = ["generator.json", "trace.csv", "losses.svg", "entropy.svg", "manifest.json"]
    try:
        gen, trace = train(data, gen0, cfg=task["train"], target_pmf=dist)
    except TrainingDivergence as e:
        if e.trace is not None:
            write_trace(e.trace, out / "trace.csv")
        _manifest(cfg, seed, ["trace.csv", "manifest.json"], out, {"status": "diverged"})
        raise
    gen.save(out / "generator.json")
    write_trace(trace, out / "trace.csv")
    (out / "losses.svg").write_text(svg.line_plot(
        [("generator", trace.generator_loss), ("discriminator", trace.discriminator_loss)],
        "qGAN losses", "epoch", "loss"))
    (out / "entropy.svg").write_text(svg.line_plot(
        [("relative entropy", trace.relative_entropy)], "Relative entropy to the target", "epoch", "nats"))
    final = relative_entropy(dist, generator_pmf(gen))
    _manifest(cfg, seed, outputs, out, {"status": "ok", "final_relative_entropy": final})
    return gen


# -- entry point --------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qsbo", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"qsbo {__version__}")
    p.add_argument("--validate", metavar="CONFIG", help="parse and check a config file, then exit")
    sub = p.add_subparsers(dest="command")
    for name, text in (("run", "run an experiment"), ("train-qgan", "train a qGAN demand loader")):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("config")
        sp.add_argument("--out", help="output directory (overrides output_dir)")
        sp.add_argument("--seed", type=int, help="base seed (overrides the config)")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes for sweep points")
        sp.add_argument("--timing", action="store_true", help="record wall_ms (breaks byte-identical reruns)")
        sp.add_argument("--validate", action="store_true", help="parse and check the config only")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.validate and not args.command:
            cfg = load_config(args.validate)
            plan(cfg, Path(args.validate).resolve().parent, cfg.seed)
            print(f"{args.validate}: ok ({cfg.experiment})")
            return EXIT_OK
        if not args.command:
            _parser().print_help()
            return EXIT_CONFIG
        cfg = load_config(args.config)
        if args.command == "train-qgan" and cfg.experiment != "train-qgan":
            raise ValidationError(f"experiment: train-qgan expects a train-qgan config, got {cfg.experiment}")
        if args.jobs < 1:
            raise ValidationError("--jobs must be >= 1")
        if args.seed is not None and args.seed < 0:
            raise ValidationError("--seed must be >= 0")
        seed = cfg.seed if args.seed is None else args.seed
        base = Path(args.config).resolve().parent
        if args.validate:
            plan(cfg, base, seed)
            print(f"{args.config}: ok ({cfg.experiment})")
            return EXIT_OK
        out = Path(args.out or cfg.output_dir)
        run_experiment(cfg, out, seed, jobs=args.jobs, timing=args.timing, base=base)
        print(f"wrote {out}")
        return EXIT_OK
    except TrainingDivergence as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except ResourceError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValidationError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except QSBOError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
