"""Single-flip simulated annealing for Max-Cut.

A move picks a vertex uniformly at random and flips it under the Metropolis
rule. The temperature drops after every ``moves_per_temp`` moves, either
geometrically (``T <- T * (1 - d)``, the default) or linearly
(``T <- T - d``), and the run ends once ``T < min_temp``.

Restart ``r`` draws from a PCG64 generator seeded with
``SeedSequence(seed, spawn_key=(r,))``, so every (seed, restart) pair gets its
own stream. The generator first supplies the initial spins (for
``init="random"``) and then the vertex and acceptance streams in fixed-size
blocks, so results depend only on the graph and the configuration.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Union

import numpy as np

from . import _kernels
from .graph import Graph, as_assignment, cut_value

CHUNK = 1 << 18

InitSpec = Union[str, np.ndarray]


@dataclass(frozen=True)
class SaSchedule:
    initial_temp: float
    decrement: float
    min_temp: float = 0.125
    moves_per_temp: int = 1
    cooling: str = "geometric"

    def __post_init__(self):
        if self.cooling not in ("geometric", "linear"):
            raise ValueError(f"unknown cooling law {self.cooling!r}")
        if not self.min_temp > 0:
            raise ValueError(f"min_temp must be positive, got {self.min_temp}")
        if not self.initial_temp > self.min_temp:
            raise ValueError(
                f"initial_temp {self.initial_temp} must exceed min_temp {self.min_temp}"
            )
        if self.cooling == "geometric" and not 0 < self.decrement < 1:
            raise ValueError(f"decrement must lie in (0, 1), got {self.decrement}")
        if self.cooling == "linear" and not self.decrement > 0:
            raise ValueError(f"decrement must be positive, got {self.decrement}")
        if self.moves_per_temp < 1:
            raise ValueError(f"moves_per_temp must be >= 1, got {self.moves_per_temp}")

    def temperature_levels(self) -> int:
        """Number of temperatures visited before dropping below ``min_temp``."""
        if self.cooling == "geometric":
            r = math.log(self.min_temp / self.initial_temp) / math.log1p(-self.decrement)
        else:
            r = (self.initial_temp - self.min_temp) / self.decrement
        return math.floor(r) + 1

    def total_moves(self) -> int:
        return self.temperature_levels() * self.moves_per_temp


def sa1_preset(**overrides) -> SaSchedule:
    """Fast schedule: start at 10,000 and cool by 2e-4 per step."""
    return replace(SaSchedule(initial_temp=10_000.0, decrement=2e-4), **overrides)


def sa2_preset(**overrides) -> SaSchedule:
    """Slow schedule: start at 40,000 and cool by 2e-6 per step."""
    return replace(SaSchedule(initial_temp=40_000.0, decrement=2e-6), **overrides)


PRESETS = {"sa1": sa1_preset, "sa2": sa2_preset}


@dataclass(frozen=True)
class SaRunConfig:
    schedule: SaSchedule
    seed: int = 0
    restarts: int = 1
    init: InitSpec = "random"
    polish: bool = False

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if isinstance(self.init, str) and self.init not in ("random", "all-plus"):
            raise ValueError(f"unknown init {self.init!r}")


@dataclass
class SolveResult:
    best_value: int
    best_assignment: np.ndarray
    wall_time: float
    moves_attempted: int
    moves_accepted: int
    solver_id: str
    seed: int | None = None
    restart_values: list[int] = field(default_factory=list)


def restart_rng(seed: int, restart: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(restart),))
    return np.random.Generator(np.random.PCG64(ss))


def accept_probability(delta: float, temp: float) -> float:
    return 1.0 if delta >= 0 else math.exp(delta / temp)


def metropolis_accept(delta: float, temp: float, u: float) -> bool:
    """The acceptance test used inside the annealing loop."""
    return bool(_kernels.metropolis(delta, temp, u))


def _initial(g: Graph, init: InitSpec, rng: np.random.Generator) -> np.ndarray:
    if isinstance(init, str):
        if init == "all-plus":
            return np.ones(g.n, dtype=np.int64)
        return (2 * rng.integers(0, 2, size=g.n) - 1).astype(np.int64)
    return as_assignment(init, g.n).copy()


def _anneal_once(g: Graph, schedule: SaSchedule, rng: np.random.Generator,
                 init: InitSpec) -> tuple[int, np.ndarray, int, int]:
    x = _initial(g, init, rng)
    f = _kernels.local_fields(g.indptr, g.nbr, g.nbr_w, x)
    start = cut_value(g, x)
    best_x = x.copy()
    state = np.array([start, start, 0, 0], dtype=np.int64)
    temp = np.array([schedule.initial_temp], dtype=np.float64)
    cooling = _kernels.GEOMETRIC if schedule.cooling == "geometric" else _kernels.LINEAR
    total = schedule.total_moves()
    done = 0
    while done < total:
        size = min(CHUNK, total - done)
        verts = rng.integers(0, g.n, size=size, dtype=np.int64)
        uniforms = rng.random(size)
        _kernels.anneal_chunk(g.indptr, g.nbr, g.nbr_w, x, f, best_x, verts, uniforms,
                              state, temp, schedule.decrement, schedule.moves_per_temp,
                              cooling)
        done += size
    return int(state[1]), best_x, total, int(state[2])


def sa_solve(g: Graph, cfg: SaRunConfig, solver_id: str = "sa") -> SolveResult:
    """Best cut over all restarts; ties go to the lowest restart index."""
    t0 = time.perf_counter()
    if g.n == 0:
        return SolveResult(0, np.zeros(0, dtype=np.int64), time.perf_counter() - t0,
                           0, 0, solver_id, cfg.seed, [0] * cfg.restarts)
    best_value = None
    best_x = None
    attempted = accepted = 0
    values = []
    for r in range(cfg.restarts):
        rng = restart_rng(cfg.seed, r)
        value, x, n_att, n_acc = _anneal_once(g, cfg.schedule, rng, cfg.init)
        if cfg.polish:
            f = _kernels.local_fields(g.indptr, g.nbr, g.nbr_w, x)
            gain, _ = _kernels.steepest_ascent(g.indptr, g.nbr, g.nbr_w, x, f)
            value += int(gain)
        attempted += n_att
        accepted += n_acc
        values.append(value)
        if best_value is None or value > best_value:
            best_value, best_x = value, x
    return SolveResult(best_value, best_x, time.perf_counter() - t0, attempted,
                       accepted, solver_id, cfg.seed, values)


def greedy_descent(g: Graph, x0) -> SolveResult:
    """Steepest single-flip ascent to a 1-flip local maximum of the cut."""
    t0 = time.perf_counter()
    x = as_assignment(x0, g.n).copy()
    f = _kernels.local_fields(g.indptr, g.nbr, g.nbr_w, x)
    gain, flips = _kernels.steepest_ascent(g.indptr, g.nbr, g.nbr_w, x, f)
    return SolveResult(cut_value(g, x), x, time.perf_counter() - t0, int(flips),
                       int(flips), "greedy")
