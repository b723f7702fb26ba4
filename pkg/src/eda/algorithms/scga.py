import logging
import math
from dataclasses import dataclass

import numpy as np

from src.eda.algorithms.base import FailureKind, RunResult, run_pairwise, sample_offspring, select_winner
from src.eda.errors import ConfigError
from src.eda.fitness import FitnessFunction, Individual
from src.eda.rng import PositionStreams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScgaParams:
    """
    Параметры scGA.

    Attributes:
        rho: Шаг обновления, 0 < rho < 1.
        a: Добавка к шагу в сторону 1/2, a >= 0.
        d: Граница фиксации, 1/2 < d < 1: частота >= d становится 1,
           частота <= 1 - d становится 0.
    """

    rho: float
    a: float
    d: float

    def __post_init__(self):
        if not 0 < self.rho < 1:
            raise ConfigError(f"rho должен быть в (0, 1), получено {self.rho}")
        if self.a < 0:
            raise ConfigError(f"a должен быть >= 0, получено {self.a}")
        if not 0.5 < self.d < 1:
            raise ConfigError(f"d должен быть в (1/2, 1), получено {self.d}")
        if self.a > self.rho or self.d > 5 / 6:
            logger.warning("Параметры scGA вне условий теоремы: a=%s, rho=%s, d=%s", self.a, self.rho, self.d)

    @classmethod
    def defaults(cls, n: int, alpha: float = 0.5, d: float = 5 / 6) -> "ScgaParams":
        """rho = 1 / (2 ln n), a = alpha * rho, d = 5/6."""
        rho = 1.0 / (2.0 * math.log(max(n, 2)))
        return cls(rho=rho, a=alpha * rho, d=d)


def scga_update_position(tau: float, x_i: int, y_i: int, params: ScgaParams) -> float:
    """
    Обновление одной частоты scGA (x - победитель, y - проигравший).

    Ветви выбираются по частоте до обновления; граница 1/2 относится и к
    ветви "<= 1/2" при увеличении, и к ветви ">= 1/2" при уменьшении.
    """
    rho, a, d = params.rho, params.a, params.d
    if x_i > y_i:
        if tau <= 0.5:
            tau = tau + rho + a
        elif tau < d:
            tau = tau + rho
        else:
            tau = 1.0
    elif x_i < y_i:
        if tau >= 0.5:
            tau = tau - rho - a
        elif tau > 1 - d:
            tau = tau - rho
        else:
            tau = 0.0
    return min(max(tau, 0.0), 1.0)


def scga_update(freq: np.ndarray, winner: np.ndarray, loser: np.ndarray, params: ScgaParams) -> np.ndarray:
    """Векторная версия `scga_update_position` для всех позиций сразу."""
    rho, a, d = params.rho, params.a, params.d
    diff = winner.astype(np.int8) - loser.astype(np.int8)
    up, down = diff > 0, diff < 0
    new = freq.copy()
    new[up & (freq <= 0.5)] += rho + a
    new[up & (freq > 0.5) & (freq < d)] += rho
    new[up & (freq >= d)] = 1.0
    new[down & (freq >= 0.5)] -= rho + a
    new[down & (freq < 0.5) & (freq > 1 - d)] -= rho
    new[down & (freq <= 1 - d)] = 0.0
    return np.clip(new, 0.0, 1.0)


@dataclass
class ScgaState:
    """Состояние scGA: параметры, вектор частот, потоки случайности и счетчики."""

    params: ScgaParams
    freq: np.ndarray
    streams: PositionStreams
    iteration: int = 0
    evaluations: int = 0
    leave_iteration: int | None = None

    @classmethod
    def create(cls, n: int, params: ScgaParams, seed: int) -> "ScgaState":
        return cls(params=params, freq=np.full(n, 0.5), streams=PositionStreams(seed, n))

    def outside_interval(self) -> bool:
        """Есть ли частота вне интервала (1 - d, d)."""
        d = self.params.d
        return bool(np.any((self.freq <= 1 - d) | (self.freq >= d)))


def scga_step(state: ScgaState, f: FitnessFunction) -> tuple[Individual, Individual, Individual]:
    """Одна итерация scGA: две особи, сравнение и обновление с фиксацией частот."""
    first, second = state.streams.next_pair()
    x = sample_offspring(state.freq, first)
    y = sample_offspring(state.freq, second)
    winner, loser = select_winner(x, y, f, state.streams)
    state.freq = scga_update(state.freq, winner.bits, loser.bits, state.params)
    state.iteration += 1
    state.evaluations += 2
    if state.leave_iteration is None and state.outside_interval():
        state.leave_iteration = state.iteration
        logger.debug("Итерация %d: частота покинула интервал (1-d, d)", state.iteration)
    return x, y, winner


def run_scga(
    f: FitnessFunction,
    n: int,
    params: ScgaParams,
    max_evals: int,
    seed: int,
    stop_on_leave: bool = False,
) -> RunResult:
    """
    Запускает scGA.

    Кроме исхода запуска фиксирует первую итерацию, на которой какая-либо
    частота покинула (1 - d, d). С `stop_on_leave=True` запуск на ней и
    заканчивается (причина `interval_left`), что нужно для измерения
    времени выхода из интервала.
    """
    if f.n != n:
        raise ConfigError(f"Размер функции {f.n} не совпадает с n={n}")
    state = ScgaState.create(n, params, seed)

    def stop() -> FailureKind | None:
        if stop_on_leave and state.leave_iteration is not None:
            return FailureKind.INTERVAL_LEFT
        return None

    return run_pairwise(
        state,
        lambda: scga_step(state, f),
        f,
        max_evals,
        stop=stop,
        leave_iteration=lambda: state.leave_iteration,
    )
