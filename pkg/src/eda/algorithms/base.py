import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Protocol

import numpy as np

from src.eda.errors import ConfigError
from src.eda.fitness import FitnessFunction, Individual, Ordering
from src.eda.rng import PositionStreams

logger = logging.getLogger(__name__)


class FailureKind(str, Enum):
    BUDGET_EXHAUSTED = "budget_exhausted"
    WRONG_FIXATION = "wrong_fixation"
    INTERVAL_LEFT = "interval_left"


@dataclass(frozen=True)
class RunResult:
    """
    Итог одного запуска алгоритма.

    Attributes:
        success: Был ли сэмплирован оптимум.
        evaluations: Число вычислений фитнеса к моменту первого оптимума
                     (или к остановке).
        iterations: Число итераций (поколений для CSA).
        terminal_state: Снимок модели: вектор частот или популяция.
        failure_kind: Причина неудачи (None при успехе).
        best: Лучшая сэмплированная особь.
        restarts: Число перезапусков (только CSA).
        leave_iteration: Итерация, на которой частота впервые покинула
                         интервал (1 - d, d) (только scGA).
        peak_footprint: Наибольшее суммарное число ячеек историй (только sig-cGA).
    """

    success: bool
    evaluations: int
    iterations: int
    terminal_state: np.ndarray
    failure_kind: FailureKind | None = None
    best: Individual | None = None
    restarts: int = 0
    leave_iteration: int | None = None
    peak_footprint: int | None = None

    def __post_init__(self):
        if self.success == (self.failure_kind is not None):
            raise ValueError("Успех и причина неудачи взаимоисключающие")
        if self.success and (self.best is None or not self.best.is_optimal()):
            raise ValueError("При успехе лучшая особь должна быть строкой из единиц")


def sample_offspring(freq: np.ndarray, uniforms: np.ndarray) -> Individual:
    """
    Сэмплирует особь из вектора частот.

    Бит i равен 1 тогда и только тогда, когда равномерное число из
    подпотока позиции i меньше tau_i.
    """
    return Individual(uniforms < freq)


def select_winner(
    x: Individual, y: Individual, f: FitnessFunction, streams: PositionStreams
) -> tuple[Individual, Individual]:
    """
    Турнир двух особей: лучшая побеждает, при равенстве - честная монета.

    Returns:
        Кортеж (победитель, проигравший).
    """
    order = f.compare(x, y)
    if order is Ordering.X_BETTER:
        return x, y
    if order is Ordering.Y_BETTER:
        return y, x
    return (x, y) if streams.coin() else (y, x)


class PairwiseState(Protocol):
    """Состояние алгоритма, сэмплирующего двух потомков за итерацию."""

    freq: np.ndarray
    iteration: int
    evaluations: int


def check_budget(max_evals: int, minimum: int = 2) -> None:
    if max_evals < minimum:
        raise ConfigError(f"Бюджет должен быть >= {minimum} вычислений, получено {max_evals}")


def run_pairwise(
    state: PairwiseState,
    step: Callable[[], tuple[Individual, Individual, Individual]],
    f: FitnessFunction,
    max_evals: int,
    stop: Callable[[], FailureKind | None] | None = None,
    **extra,
) -> RunResult:
    """
    Общий цикл cGA-подобных алгоритмов.

    Выполняет итерации, пока хватает бюджета на двух потомков. Успех
    фиксируется на первой итерации, в которой хотя бы один потомок -
    оптимум; вычисления учитываются по два на итерацию.

    Args:
        state: Состояние алгоритма.
        step: Одна итерация; возвращает (x, y, победитель).
        f: Фитнес-функция (для отслеживания лучшей особи).
        max_evals: Бюджет вычислений фитнеса.
        stop: Дополнительный критерий остановки, возвращающий причину.
        **extra: Дополнительные поля `RunResult` (вычисляются по состоянию
                 в момент остановки, если переданы как callable).
    """
    check_budget(max_evals)
    best: Individual | None = None
    best_key = None

    def finish(success: bool, kind: FailureKind | None) -> RunResult:
        fields = {k: (v() if callable(v) else v) for k, v in extra.items()}
        return RunResult(
            success=success,
            evaluations=state.evaluations,
            iterations=state.iteration,
            terminal_state=state.freq.copy(),
            failure_kind=kind,
            best=best,
            **fields,
        )

    while state.evaluations + 2 <= max_evals:
        x, y, winner = step()
        for child in (x, y):
            if child.is_optimal():
                best = child
                return finish(True, None)
        key = f.key(winner)
        if best_key is None or key > best_key:
            best, best_key = winner, key
        if stop is not None:
            kind = stop()
            if kind is not None:
                return finish(False, kind)
    return finish(False, FailureKind.BUDGET_EXHAUSTED)
