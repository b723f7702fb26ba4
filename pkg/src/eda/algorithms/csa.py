import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from src.eda.algorithms.base import FailureKind, RunResult, check_budget
from src.eda.errors import ConfigError
from src.eda.fitness import FitnessFunction, Individual
from src.eda.rng import PositionStreams

logger = logging.getLogger(__name__)


def default_mu(n: int) -> int:
    """Размер популяции ceil(8 log2(4n^2 + n))."""
    return math.ceil(8 * math.log2(4 * n * n + n))


class CsaBranch(str, Enum):
    TERMINAL = "terminal"
    UNCHANGED = "unchanged"
    RESAMPLED = "resampled"


class CsaStepResult(NamedTuple):
    branch: CsaBranch
    terminal: Individual | None = None


@dataclass
class CsaState:
    """
    Состояние алгоритма выпуклого поиска.

    Attributes:
        population: Матрица mu x n из 0/1, строки - особи.
        streams: Подпотоки; столбец i популяции сэмплируется из подпотока позиции i.
        restarts: Число перезапусков.
        evaluations: Вычисления фитнеса (по mu на каждую оцененную популяцию).
        generations: Число сэмплированных поколений потомков.
    """

    population: np.ndarray
    streams: PositionStreams
    restarts: int = 0
    evaluations: int = 0
    generations: int = 0

    @property
    def mu(self) -> int:
        return int(self.population.shape[0])

    @classmethod
    def create(cls, n: int, mu: int, seed: int) -> "CsaState":
        """Первая популяция из mu случайных особей (учитывается mu вычислений)."""
        if mu < 2:
            raise ConfigError(f"mu должен быть >= 2, получено {mu}")
        streams = PositionStreams(seed, n)
        return cls(population=_random_population(streams, mu), streams=streams, evaluations=mu)

    def reinitialize(self) -> None:
        """Перезапуск со свежей случайной популяцией; вычисления накапливаются."""
        self.population = _random_population(self.streams, self.mu)
        self.restarts += 1
        self.evaluations += self.mu

    def fixed_zero_positions(self) -> np.ndarray:
        """Позиции, где у всей популяции стоит 0: оптимум оттуда недостижим."""
        return np.flatnonzero(~self.population.any(axis=0))

    def optimum_index(self) -> int | None:
        """Индекс первой строки из одних единиц или None."""
        rows = np.flatnonzero(self.population.all(axis=1))
        return int(rows[0]) if rows.size else None


def _random_population(streams: PositionStreams, mu: int) -> np.ndarray:
    return (streams.matrix(mu) < 0.5).astype(np.uint8)


def csa_step(state: CsaState, f: FitnessFunction) -> CsaStepResult:
    """
    Одно поколение алгоритма выпуклого поиска.

    (a) Все особи одинаковы - остановка с этой особью.
    (b) У всех одинаковый фитнес, но особи различаются - потомки равны родителям.
    (c) Иначе удаляются все особи с минимальным фитнесом, и mu потомков
        сэмплируются из выпуклой оболочки оставшихся: бит, общий для всех
        оставшихся родителей, копируется, остальные - равновероятно.
    """
    population = state.population
    if (population == population[0]).all():
        return CsaStepResult(CsaBranch.TERMINAL, Individual(population[0]))

    keys = [f.key(Individual(row)) for row in population]
    worst = min(keys)
    keep = np.array([key != worst for key in keys])
    if not keep.any():
        return CsaStepResult(CsaBranch.UNCHANGED)

    reduced = population[keep]
    all_one = reduced.all(axis=0)
    all_zero = ~reduced.any(axis=0)
    offspring = _random_population(state.streams, state.mu)
    offspring[:, all_one] = 1
    offspring[:, all_zero] = 0

    state.population = offspring
    state.generations += 1
    state.evaluations += state.mu
    return CsaStepResult(CsaBranch.RESAMPLED)


def _best_of(population: np.ndarray, f: FitnessFunction) -> Individual:
    return max((Individual(row) for row in population), key=f.key)


def run_csa(f: FitnessFunction, n: int, mu: int, max_evals: int, seed: int, restart: bool) -> RunResult:
    """
    Запускает алгоритм выпуклого поиска.

    Успех - первая оцененная популяция, содержащая строку из единиц.
    Популяция, застывшая в ветви (a) или (b) без оптимума, больше никогда
    не изменится: с `restart=True` алгоритм начинает заново со свежей
    популяцией, иначе запуск заканчивается с причиной `wrong_fixation`.
    Без перезапусков запуск заканчивается так же, как только какая-то
    позиция у всей популяции равна 0: оптимум с этого момента недостижим,
    и `evaluations` и `iterations` результата относятся к этой остановке.

    Args:
        f: Фитнес-функция.
        n: Размер задачи.
        mu: Размер популяции, >= 2.
        max_evals: Бюджет вычислений фитнеса, >= mu.
        seed: Зерно запуска.
        restart: Перезапускать ли застывшую популяцию.
    """
    if f.n != n:
        raise ConfigError(f"Размер функции {f.n} не совпадает с n={n}")
    if mu < 2:
        raise ConfigError(f"mu должен быть >= 2, получено {mu}")
    check_budget(max_evals, minimum=mu)
    state = CsaState.create(n, mu, seed)

    def finish(kind: FailureKind | None) -> RunResult:
        index = state.optimum_index()
        best = Individual(state.population[index]) if index is not None else _best_of(state.population, f)
        return RunResult(
            success=kind is None,
            evaluations=state.evaluations,
            iterations=state.generations,
            terminal_state=state.population.copy(),
            failure_kind=kind,
            best=best,
            restarts=state.restarts,
        )

    while True:
        if state.optimum_index() is not None:
            return finish(None)
        if not restart and state.fixed_zero_positions().size:
            return finish(FailureKind.WRONG_FIXATION)
        if state.evaluations + mu > max_evals:
            return finish(FailureKind.BUDGET_EXHAUSTED)

        outcome = csa_step(state, f)
        if outcome.branch is CsaBranch.RESAMPLED:
            continue
        logger.debug(
            "Поколение %d: популяция застыла (%s), перезапусков: %d",
            state.generations,
            outcome.branch.value,
            state.restarts,
        )
        if not restart:
            return finish(FailureKind.WRONG_FIXATION)
        if state.evaluations + mu > max_evals:
            return finish(FailureKind.BUDGET_EXHAUSTED)
        state.reinitialize()
