"""Tuning of guidance parameters.

Two objectives: the rank-inversion score over existing training data (how
many proof-irrelevant clauses outrank each proof-relevant one), and the
number of problems solved by the guided prover.  Both are minimised with
particle swarm optimisation.
"""

from __future__ import annotations

import bisect
import dataclasses
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .bayes import ClassifierData, GuidanceParams
from .clauses import is_skolem, label_of
from .saturate import ProverConfig, r_atp
from .training import postprocess, replay_features

TUNED = ("c", "c_p", "c_n", "gamma")
DEFAULT_BOUNDS = ((1e-4, 1.0), (0.0, 2.0), (0.0, 2.0), (0.0, 5.0))


# --------------------------------------------------------------------------
# rank-inversion score

def datum_ranks(d, params: GuidanceParams, classifier: ClassifierData,
                config: ProverConfig) -> list:
    """``(R, used)`` for every processed clause of a (raw) datum.

    Features are replayed from the processing order; a clause's age is its
    position in that order.
    """
    d = postprocess(d, config.postproc_mode, config.skolem_prefix)
    feats = replay_features(d, config.feature_mode, config.postproc_mode,
                            config.skolem_prefix)
    test = is_skolem(config.skolem_prefix)
    out = []
    for age, ((c, used), f) in enumerate(zip(d.processed, feats)):
        c = dataclasses.replace(c, age=age)
        score = r_atp(c, config.w_size, config.w_age)
        score += classifier.rank(params, label_of(c, config.postproc_mode, test), f)
        out.append((score, used))
    return out


def tuning_score(data: Iterable, params: GuidanceParams, classifier: ClassifierData,
                 config: ProverConfig | None = None) -> int:
    """Number of (used, unused) clause pairs of a datum where the unused clause
    ranks strictly higher, summed over all data."""
    config = config or ProverConfig()
    total = 0
    for d in data:
        ranks = datum_ranks(d, params, classifier, config)
        neg = sorted(r for r, used in ranks if not used)
        for r, used in ranks:
            if used:
                total += len(neg) - bisect.bisect_right(neg, r)
    return total


# --------------------------------------------------------------------------
# particle swarm optimisation

@dataclass
class PSOConfig:
    omega: float = 0.4
    phi_p: float = 0.4
    phi_g: float = 3.6
    particles: int = 30
    iterations: int = 200
    bounds: tuple = ((-5.0, 5.0), (-5.0, 5.0))
    seed: int = 0

    def __post_init__(self):
        if self.particles < 1 or self.iterations < 1:
            raise ValueError("need at least one particle and one iteration")
        for lo, hi in self.bounds:
            if not lo <= hi:
                raise ValueError(f"bad bounds ({lo}, {hi})")


@dataclass
class Particle:
    x: np.ndarray
    v: np.ndarray
    best_x: np.ndarray
    best_f: float


@dataclass
class PSOResult:
    best_x: np.ndarray
    best_f: float
    trace: list = field(default_factory=list)   # (iteration, best_f, best_x)
    evaluations: int = 0


def velocity_update(v, x, personal_best, global_best, r_p, r_g,
                    omega: float, phi_p: float, phi_g: float):
    return (omega * v + phi_p * r_p * (personal_best - x)
            + phi_g * r_g * (global_best - x))


def _stream(seed: int, particle: int, iteration: int) -> np.random.Generator:
    return np.random.default_rng([seed, particle, iteration])


def _evaluate(objective, xs: list, map_fn) -> list:
    values = list(map_fn(objective, xs))
    for i, (x, f) in enumerate(zip(xs, values)):
        if not math.isfinite(f):
            raise ValueError(f"objective returned {f} for particle {i} at {list(x)}")
    return [float(f) for f in values]


def pso_minimize(objective: Callable[[np.ndarray], float], config: PSOConfig,
                 map_fn=map) -> PSOResult:
    """Minimise ``objective`` over the box ``config.bounds``.

    Iteration 1 evaluates the random initial swarm; each further iteration
    moves every particle once, so the objective runs exactly
    ``particles * iterations`` times.  ``map_fn`` may evaluate the particles
    of one iteration concurrently; randomness depends only on
    (seed, particle, iteration).
    """
    lo = np.array([b[0] for b in config.bounds], dtype=float)
    hi = np.array([b[1] for b in config.bounds], dtype=float)
    span = hi - lo
    swarm = []
    for i in range(config.particles):
        rng = _stream(config.seed, i, 0)
        x = lo + rng.random(len(lo)) * span
        v = -span + rng.random(len(lo)) * 2 * span
        swarm.append(Particle(x, v, x.copy(), math.inf))
    result = PSOResult(lo.copy(), math.inf)

    def absorb(values, iteration):
        for p, f in zip(swarm, values):
            if f < p.best_f:
                p.best_f, p.best_x = f, p.x.copy()
            if f < result.best_f:
                result.best_f, result.best_x = f, p.x.copy()
        result.evaluations += len(values)
        result.trace.append((iteration, result.best_f, result.best_x.copy()))

    absorb(_evaluate(objective, [p.x for p in swarm], map_fn), 1)
    for t in range(2, config.iterations + 1):
        for i, p in enumerate(swarm):
            rng = _stream(config.seed, i, t)
            r_p, r_g = rng.random(len(lo)), rng.random(len(lo))
            p.v = velocity_update(p.v, p.x, p.best_x, result.best_x, r_p, r_g,
                                  config.omega, config.phi_p, config.phi_g)
            x = p.x + p.v
            clamped = (x < lo) | (x > hi)
            p.x = np.clip(x, lo, hi)
            p.v[clamped] = 0.0
        absorb(_evaluate(objective, [p.x for p in swarm], map_fn), t)
    return result


# --------------------------------------------------------------------------
# parameter tuning

def vector_to_params(x: Sequence[float], base: GuidanceParams | None = None,
                     names: Sequence[str] = TUNED) -> GuidanceParams:
    values = dict(vars(base or GuidanceParams()))
    for name, val in zip(names, x):
        values[name] = float(val)
    values["gamma"] = max(0.0, values["gamma"])
    return GuidanceParams(**values)


def inversion_objective(data: list, classifier: ClassifierData,
                        config: ProverConfig | None = None,
                        base: GuidanceParams | None = None) -> Callable:
    def f(x):
        return float(tuning_score(data, vector_to_params(x, base), classifier, config))
    return f


def solved_count_objective(problems: list, classifier: ClassifierData,
                           config: ProverConfig, base: GuidanceParams | None = None,
                           counter: list | None = None) -> Callable:
    """Negated number of ``problems`` (paths) the guided prover solves."""
    from .learn import run_problem
    from .saturate import Guidance

    def f(x):
        pc = dataclasses.replace(config, guidance=Guidance(classifier,
                                                           vector_to_params(x, base)))
        solved = 0
        for path in problems:
            rec, _ = run_problem(path, pc)
            solved += rec.solved
            if counter is not None:
                counter.append(path)
        return -float(solved)
    return f


def tune_params(mode: str, inputs: dict, pso: PSOConfig | None = None,
                map_fn=map) -> GuidanceParams:
    """Tune (c, c_p, c_n, gamma).

    ``mode`` is ``inversion-score`` (inputs: ``data``, ``classifier``,
    optional ``config``) or ``solved-count`` (inputs: ``problems``,
    ``classifier``, ``config``).
    """
    return tune(mode, inputs, pso, map_fn)[0]


def tune(mode: str, inputs: dict, pso: PSOConfig | None = None, map_fn=map) -> tuple:
    """Like :func:`tune_params` but also returns the :class:`PSOResult`."""
    pso = pso or PSOConfig(particles=10, iterations=10, bounds=DEFAULT_BOUNDS)
    if len(pso.bounds) != len(TUNED):
        raise ValueError(f"tuning needs {len(TUNED)} bounds, got {len(pso.bounds)}")
    base = inputs.get("base")
    if mode == "inversion-score":
        objective = inversion_objective(inputs["data"], inputs["classifier"],
                                        inputs.get("config"), base)
    elif mode == "solved-count":
        objective = solved_count_objective(inputs["problems"], inputs["classifier"],
                                           inputs["config"], base, inputs.get("counter"))
    else:
        raise ValueError(f"unknown tuning mode {mode!r}")
    res = pso_minimize(objective, pso, map_fn)
    return vector_to_params(res.best_x, base), res
