"""Constrained bi-objective evolutionary optimizers over a scalar variable.

Two solvers: the elitist non-dominated sorting genetic algorithm (NSGA-II)
with simulated binary crossover and polynomial mutation, and third-generation
generalized differential evolution (GDE3). Both use fast non-dominated
sorting with crowding-distance diversity preservation and feasibility-first
constrained dominance (feasible beats infeasible, lower total violation beats
higher, Pareto dominance among feasible).

A problem object must expose ``t_lo``, ``t_hi`` and
``evaluate(x) -> (Objectives, ConstraintReport)``. Runs are deterministic for
a fixed (problem, config, seed): evaluations happen in index order from a
single seeded generator.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np


@dataclass
class Individual:
    x: float
    f1: float
    f2: float
    violation: float
    rank: int = 0
    crowding: float = 0.0

    @property
    def feasible(self) -> bool:
        return self.violation == 0.0

    @property
    def objectives(self) -> tuple[float, float]:
        return (self.f1, self.f2)


@dataclass(frozen=True)
class AlgoConfig:
    population: int = 100
    max_evaluations: int = 5000
    seed: int = 0
    # NSGA-II operators
    crossover_prob: float = 0.9
    crossover_eta: float = 20.0
    mutation_prob: float = 0.5
    mutation_eta: float = 20.0
    # GDE3 operators
    de_cr: float = 0.9
    de_f: float = 0.5

    def __post_init__(self):
        if self.population < 4:
            raise ValueError("population must be at least 4")
        if self.max_evaluations < self.population:
            raise ValueError("max_evaluations must cover the initial population")

    def with_seed(self, seed: int) -> "AlgoConfig":
        return replace(self, seed=seed)


@dataclass(frozen=True)
class Provenance:
    algorithm: str
    seed: int
    evaluations: int
    runtime: float  # s


@dataclass
class ParetoSet:
    """Feasible non-dominated members of the final population, sorted by f1.

    When no feasible individual was ever found, members is empty and
    min_violation_member carries the least-violating candidate for
    diagnostics.
    """

    members: list
    provenance: Provenance
    min_violation_member: Individual | None = None

    def __len__(self):
        return len(self.members)

    def objective_arrays(self):
        f1 = np.array([m.f1 for m in self.members])
        f2 = np.array([m.f2 for m in self.members])
        return f1, f2


def dominates(a: Individual, b: Individual) -> bool:
    """Plain Pareto dominance on (f1, f2), minimization."""
    return (a.f1 <= b.f1 and a.f2 <= b.f2) and (a.f1 < b.f1 or a.f2 < b.f2)


def constrained_dominates(a: Individual, b: Individual) -> bool:
    """Feasibility-first dominance."""
    if a.feasible and not b.feasible:
        return True
    if not a.feasible and b.feasible:
        return False
    if not a.feasible and not b.feasible:
        return a.violation < b.violation
    return dominates(a, b)


def _dominance_matrix(pop: list) -> np.ndarray:
    """Boolean matrix D[i, j] = individual i constrained-dominates j."""
    f1 = np.array([m.f1 for m in pop])
    f2 = np.array([m.f2 for m in pop])
    v = np.array([m.violation for m in pop])
    F1, F2, V = f1[:, None], f2[:, None], v[:, None]
    pareto = (F1 <= f1) & (F2 <= f2) & ((F1 < f1) | (F2 < f2))
    feas_i = V == 0.0
    feas_j = (v == 0.0)[None, :]
    return np.where(feas_i & feas_j, pareto,
                    np.where(feas_i & ~feas_j, True,
                             np.where(~feas_i & feas_j, False, V < v)))


def non_dominated_sort(pop: list) -> list:
    """Fast non-dominated sort; returns fronts (lists of Individuals) and
    assigns 1-based ranks."""
    n = len(pop)
    if n == 0:
        return []
    dom = _dominance_matrix(pop)
    dom_count = dom.sum(axis=0).astype(int)
    fronts_idx = []
    current = np.flatnonzero(dom_count == 0)
    rank = 1
    remaining = dom_count.copy()
    assigned = np.zeros(n, dtype=bool)
    while current.size:
        fronts_idx.append(current)
        for i in current:
            pop[i].rank = rank
        assigned[current] = True
        remaining = remaining - dom[current].sum(axis=0)
        remaining[assigned] = -1
        current = np.flatnonzero(remaining == 0)
        rank += 1
    return [[pop[i] for i in idx] for idx in fronts_idx]


def crowding_distance(front: list) -> None:
    """Assign crowding distances within one front (boundaries infinite,
    zero-range objectives contribute nothing)."""
    n = len(front)
    if n == 0:
        return
    for ind in front:
        ind.crowding = 0.0
    if n <= 2:
        for ind in front:
            ind.crowding = math.inf
        return
    for key in ("f1", "f2"):
        order = sorted(front, key=lambda m: getattr(m, key))
        lo = getattr(order[0], key)
        hi = getattr(order[-1], key)
        order[0].crowding = math.inf
        order[-1].crowding = math.inf
        span = hi - lo
        if span == 0.0:
            continue
        for i in range(1, n - 1):
            if math.isinf(order[i].crowding):
                continue
            gap = getattr(order[i + 1], key) - getattr(order[i - 1], key)
            order[i].crowding += gap / span


def _environmental_selection(pop: list, n: int) -> list:
    """Front-fill to size n, crowding-sorting the split front."""
    out = []
    for front in non_dominated_sort(pop):
        crowding_distance(front)
        if len(out) + len(front) <= n:
            out.extend(front)
        else:
            front.sort(key=lambda m: m.crowding, reverse=True)
            out.extend(front[: n - len(out)])
            break
    return out


def _evaluate(problem, x: float) -> Individual:
    obj, report = problem.evaluate(x)
    return Individual(x=x, f1=obj.time, f2=obj.effort,
                      violation=report.total_violation)


def _initial_population(problem, cfg: AlgoConfig, rng) -> list:
    xs = rng.uniform(problem.t_lo, problem.t_hi, cfg.population)
    return [_evaluate(problem, float(x)) for x in xs]


def _pareto_set(pop, algorithm, cfg, evaluations, runtime) -> ParetoSet:
    feasible = [m for m in pop if m.feasible]
    prov = Provenance(algorithm, cfg.seed, evaluations, runtime)
    if not feasible:
        best = min(pop, key=lambda m: m.violation)
        return ParetoSet([], prov, min_violation_member=best)
    fronts = non_dominated_sort(feasible)
    members = sorted(fronts[0], key=lambda m: m.f1)
    # collapse exact duplicates in the decision variable (clamped bounds)
    unique, seen = [], set()
    for m in members:
        if m.x not in seen:
            seen.add(m.x)
            unique.append(m)
    return ParetoSet(unique, prov)


# -- NSGA-II ----------------------------------------------------------------

def _tournament(pop, rng) -> Individual:
    i, j = rng.integers(0, len(pop), 2)
    a, b = pop[int(i)], pop[int(j)]
    if constrained_dominates(a, b):
        return a
    if constrained_dominates(b, a):
        return b
    if a.rank != b.rank:
        return a if a.rank < b.rank else b
    return a if a.crowding >= b.crowding else b


def _sbx(p1: float, p2: float, lo: float, hi: float, cfg: AlgoConfig, rng):
    """Simulated binary crossover on the single decision variable."""
    if rng.random() > cfg.crossover_prob or rng.random() < 0.5:
        return p1, p2
    u = rng.random()
    if u <= 0.5:
        beta = (2.0 * u) ** (1.0 / (cfg.crossover_eta + 1.0))
    else:
        beta = (1.0 / (2.0 * (1.0 - u))) ** (1.0 / (cfg.crossover_eta + 1.0))
    c1 = 0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2)
    c2 = 0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2)
    return min(max(c1, lo), hi), min(max(c2, lo), hi)


def _polynomial_mutation(x: float, lo: float, hi: float, cfg: AlgoConfig, rng) -> float:
    if rng.random() > cfg.mutation_prob:
        return x
    span = hi - lo
    u = rng.random()
    eta = cfg.mutation_eta
    if u < 0.5:
        d = (x - lo) / span
        delta = (2.0 * u + (1.0 - 2.0 * u) * (1.0 - d) ** (eta + 1.0)) \
            ** (1.0 / (eta + 1.0)) - 1.0
    else:
        d = (hi - x) / span
        delta = 1.0 - (2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d) ** (eta + 1.0)) \
            ** (1.0 / (eta + 1.0))
    return min(max(x + delta * span, lo), hi)


def nsga2_run(problem, cfg: AlgoConfig, on_generation=None) -> ParetoSet:
    """Generational elitist NSGA-II; stops when max_evaluations are consumed."""
    start = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    lo, hi = problem.t_lo, problem.t_hi
    pop = _initial_population(problem, cfg, rng)
    evaluations = cfg.population
    for front in non_dominated_sort(pop):
        crowding_distance(front)
    gen = 0
    while evaluations + cfg.population <= cfg.max_evaluations:
        children_x = []
        while len(children_x) < cfg.population:
            p1 = _tournament(pop, rng)
            p2 = _tournament(pop, rng)
            c1, c2 = _sbx(p1.x, p2.x, lo, hi, cfg, rng)
            children_x.append(_polynomial_mutation(c1, lo, hi, cfg, rng))
            if len(children_x) < cfg.population:
                children_x.append(_polynomial_mutation(c2, lo, hi, cfg, rng))
        offspring = [_evaluate(problem, x) for x in children_x]
        evaluations += len(offspring)
        pop = _environmental_selection(pop + offspring, cfg.population)
        gen += 1
        if on_generation is not None:
            on_generation(gen, pop)
    return _pareto_set(pop, "nsga2", cfg, evaluations,
                       time.perf_counter() - start)


# -- GDE3 -------------------------------------------------------------------

def gde3_run(problem, cfg: AlgoConfig, on_generation=None) -> ParetoSet:
    """Generalized differential evolution 3.

    Trial u = x_r3 + F (x_r1 - x_r2) with binomial crossover; on a
    one-variable genome the forced j_rand index makes the trial always take
    the mutant value, so de_cr has no effect here. Selection keeps the
    dominant of (trial, target) and both when they are mutually
    non-dominating; the grown population is trimmed back to size by
    non-dominated sorting and crowding.
    """
    start = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    lo, hi = problem.t_lo, problem.t_hi
    pop = _initial_population(problem, cfg, rng)
    n = cfg.population
    evaluations = n
    gen = 0
    while evaluations + n <= cfg.max_evaluations:
        pool = []
        for k in range(n):
            idx = [i for i in range(n) if i != k]
            r1, r2, r3 = rng.choice(idx, size=3, replace=False)
            mutant = pop[int(r3)].x + cfg.de_f * (pop[int(r1)].x - pop[int(r2)].x)
            # binomial crossover over the 1-D genome: j == j_rand always
            trial_x = min(max(mutant, lo), hi)
            trial = _evaluate(problem, trial_x)
            target = pop[k]
            if constrained_dominates(target, trial):
                pool.append(target)
            elif constrained_dominates(trial, target):
                pool.append(trial)
            else:
                pool.append(target)
                pool.append(trial)
        evaluations += n
        pop = _environmental_selection(pool, n)
        gen += 1
        if on_generation is not None:
            on_generation(gen, pop)
    return _pareto_set(pop, "gde3", cfg, evaluations,
                       time.perf_counter() - start)


RUNNERS = {"nsga2": nsga2_run, "gde3": gde3_run}
