import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.eda.algorithms.base import RunResult, run_pairwise, sample_offspring, select_winner
from src.eda.errors import ConfigError
from src.eda.fitness import FitnessFunction, Individual
from src.eda.history import HistoryBank, HistoryMode, make_history_bank
from src.eda.rng import PositionStreams
from src.eda.significance import Level, SignificanceParams, check_positions

logger = logging.getLogger(__name__)


@dataclass
class SigCgaState:
    """
    Состояние sig-cGA.

    Attributes:
        params: Параметры значимости (epsilon, n).
        freq: Вектор частот, каждая из {1/n, 1/2, 1 - 1/n}.
        levels: Уровни частот (LOW / MID / HIGH) для тех же позиций.
        histories: Истории победивших битов всех позиций с момента
                   последнего изменения частоты позиции.
        streams: Подпотоки случайных чисел.
        iteration: Номер итерации.
        evaluations: Число вычислений фитнеса.
        peak_footprint: Наибольшее суммарное число ячеек историй за запуск.
    """

    params: SignificanceParams
    freq: np.ndarray
    levels: np.ndarray
    histories: HistoryBank
    streams: PositionStreams
    iteration: int = 0
    evaluations: int = 0
    peak_footprint: int = 0

    @classmethod
    def create(
        cls,
        n: int,
        epsilon: float,
        seed: int,
        history_mode: HistoryMode | str = HistoryMode.EXACT,
        order: Sequence[int] | None = None,
    ) -> "SigCgaState":
        """Начальное состояние: все частоты 1/2, истории пусты."""
        return cls(
            params=SignificanceParams(epsilon, n),
            freq=np.full(n, 0.5),
            levels=np.zeros(n, dtype=np.int8),
            histories=make_history_bank(history_mode, n),
            streams=PositionStreams(seed, n, order),
        )

    @property
    def n(self) -> int:
        return self.params.n


def sig_cga_step(state: SigCgaState, f: FitnessFunction) -> tuple[Individual, Individual, Individual]:
    """
    Одна итерация sig-cGA.

    Сэмплирует двух потомков, определяет победителя и дописывает его бит i
    в историю H_i. Затем для всех позиций по частотам текущей итерации
    проверяется значимость: up -> 1 - 1/n, down -> 1/n. История позиции,
    чья частота изменилась, очищается.

    Returns:
        Кортеж (x, y, победитель).
    """
    first, second = state.streams.next_pair()
    x = sample_offspring(state.freq, first)
    y = sample_offspring(state.freq, second)
    winner, _ = select_winner(x, y, f, state.streams)

    params = state.params
    state.histories.append(winner.bits)
    verdicts = check_positions(state.levels, state.histories, params)
    flagged = np.flatnonzero(verdicts)
    if flagged.size:
        targets = np.where(verdicts[flagged] > 0, Level.HIGH, Level.LOW).astype(np.int8)
        values = np.where(targets > 0, params.high, params.low)
        # при n = 2 уровни совпадают по значению: такая частота не меняется
        moved = values != state.freq[flagged]
        positions = flagged[moved]
        if positions.size:
            if logger.isEnabledFor(logging.DEBUG):
                for i, tau in zip(positions.tolist(), values[moved].tolist()):
                    logger.debug("Итерация %d: tau[%d] %.4f -> %.4f", state.iteration + 1, i, state.freq[i], tau)
            state.freq[positions] = values[moved]
            state.levels[positions] = targets[moved]
            state.histories.reset(positions)

    state.peak_footprint = max(state.peak_footprint, state.histories.footprint())
    state.iteration += 1
    state.evaluations += 2
    return x, y, winner


def run_sig_cga(
    f: FitnessFunction,
    n: int,
    epsilon: float,
    max_evals: int,
    seed: int,
    history_mode: HistoryMode | str = HistoryMode.EXACT,
) -> RunResult:
    """
    Запускает sig-cGA до первого сэмплированного оптимума или исчерпания бюджета.

    Кроме исхода запуска фиксирует пиковое суммарное число ячеек историй
    (`peak_footprint`): битов в точном режиме, блоков в сжатом.

    Args:
        f: Фитнес-функция.
        n: Размер задачи (должен совпадать с f.n).
        epsilon: Параметр значимости.
        max_evals: Бюджет вычислений фитнеса, >= 2.
        seed: Зерно запуска.
        history_mode: "exact" или "condensed".
    """
    if f.n != n:
        raise ConfigError(f"Размер функции {f.n} не совпадает с n={n}")
    state = SigCgaState.create(n, epsilon, seed, history_mode)
    return run_pairwise(
        state,
        lambda: sig_cga_step(state, f),
        f,
        max_evals,
        peak_footprint=lambda: state.peak_footprint,
    )
