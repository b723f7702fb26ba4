import logging
import math
from dataclasses import dataclass

import numpy as np

from src.eda.algorithms.base import RunResult, run_pairwise, sample_offspring, select_winner
from src.eda.errors import ConfigError
from src.eda.fitness import FitnessFunction, Individual
from src.eda.rng import PositionStreams

logger = logging.getLogger(__name__)


def default_rho(n: int) -> float:
    """Шаг 1/K для гипотетического размера популяции K = sqrt(n) ln n."""
    if n < 3:
        return 0.5
    return min(0.5, 1.0 / (math.sqrt(n) * math.log(n)))


def cga_update_position(tau: float, x_i: int, y_i: int, rho: float, n: int) -> float:
    """tau + rho * (x_i - y_i), ограниченное отрезком [1/n, 1 - 1/n]."""
    if n < 2:
        return tau
    tau = tau + rho * (x_i - y_i)
    return min(max(tau, 1.0 / n), 1.0 - 1.0 / n)


def cga_update(freq: np.ndarray, winner: np.ndarray, loser: np.ndarray, rho: float, n: int) -> np.ndarray:
    """Векторная версия `cga_update_position` для всех позиций сразу."""
    # при n < 2 границы 1/n и 1 - 1/n меняются местами; частоты замораживаются
    if n < 2:
        return freq.copy()
    diff = winner.astype(np.int8) - loser.astype(np.int8)
    return np.clip(freq + rho * diff, 1.0 / n, 1.0 - 1.0 / n)


@dataclass
class CgaState:
    """Состояние cGA: шаг, вектор частот, потоки случайности и счетчики."""

    rho: float
    freq: np.ndarray
    streams: PositionStreams
    iteration: int = 0
    evaluations: int = 0

    @classmethod
    def create(cls, n: int, rho: float, seed: int) -> "CgaState":
        if not 0 < rho < 1:
            raise ConfigError(f"rho должен быть в (0, 1), получено {rho}")
        return cls(rho=rho, freq=np.full(n, 0.5), streams=PositionStreams(seed, n))


def cga_step(state: CgaState, f: FitnessFunction) -> tuple[Individual, Individual, Individual]:
    """Одна итерация: две особи, сравнение и сдвиг частот к победителю."""
    first, second = state.streams.next_pair()
    x = sample_offspring(state.freq, first)
    y = sample_offspring(state.freq, second)
    winner, loser = select_winner(x, y, f, state.streams)
    state.freq = cga_update(state.freq, winner.bits, loser.bits, state.rho, state.freq.size)
    state.iteration += 1
    state.evaluations += 2
    return x, y, winner


def run_cga(f: FitnessFunction, n: int, rho: float, max_evals: int, seed: int) -> RunResult:
    """Классический cGA с ограничением частот отрезком [1/n, 1 - 1/n]."""
    if f.n != n:
        raise ConfigError(f"Размер функции {f.n} не совпадает с n={n}")
    state = CgaState.create(n, rho, seed)
    return run_pairwise(state, lambda: cga_step(state, f), f, max_evals)
