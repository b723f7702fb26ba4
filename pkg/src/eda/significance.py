import logging
import math
from dataclasses import dataclass, field
from enum import Enum, IntEnum

import numpy as np

from src.eda.errors import ConfigError, InvalidFrequencyError
from src.eda.history import History, HistoryBank

logger = logging.getLogger(__name__)

# Порог, начиная с которого доказаны оценки времени работы sig-cGA
THEORY_EPSILON = 12.0


class Level(IntEnum):
    """Уровень частоты sig-cGA: 1/n, 1/2 или 1 - 1/n."""

    LOW = -1
    MID = 0
    HIGH = 1


class Verdict(str, Enum):
    UP = "up"
    DOWN = "down"
    STAY = "stay"


@dataclass(frozen=True)
class SigVerdict:
    """
    Результат проверки значимости.

    Attributes:
        value: up / down / stay.
        triggering_length: Длина 2^m, на которой обнаружена значимость
                           (None для stay).
    """

    value: Verdict
    triggering_length: int | None = None

    def __post_init__(self):
        if (self.value is Verdict.STAY) != (self.triggering_length is None):
            raise ValueError("triggering_length задается тогда и только тогда, когда вердикт не stay")


STAY = SigVerdict(Verdict.STAY)


def threshold(epsilon: float, mu: float, n: int) -> float:
    """
    Порог значимости s(eps, mu) = eps * max(sqrt(mu * ln n), ln n).

    Args:
        epsilon: Параметр алгоритма, > 0.
        mu: Ожидаемое значение гипотезы, >= 0.
        n: Размер задачи, >= 2.

    Raises:
        ConfigError: если аргументы вне допустимых диапазонов.
    """
    if n < 2:
        raise ConfigError(f"Порог определен только для n >= 2, получено n={n}")
    if epsilon <= 0:
        raise ConfigError(f"epsilon должен быть > 0, получено {epsilon}")
    if mu < 0:
        raise ConfigError(f"mu должен быть >= 0, получено {mu}")
    log_n = math.log(n)
    return epsilon * max(math.sqrt(mu * log_n), log_n)


@dataclass(frozen=True)
class SignificanceParams:
    """
    Параметры проверки значимости.

    Attributes:
        epsilon: Множитель порога; оценки времени работы доказаны для epsilon > 12.
        n: Размер задачи.
    """

    epsilon: float
    n: int
    _limits: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ConfigError(f"epsilon должен быть > 0, получено {self.epsilon}")
        if self.n < 1:
            raise ConfigError(f"n должен быть >= 1, получено {self.n}")
        if self.epsilon <= THEORY_EPSILON:
            logger.warning(
                "epsilon=%s <= %s: гарантии времени работы sig-cGA не действуют", self.epsilon, THEORY_EPSILON
            )
        if self.n < 2:
            logger.warning("n=1: порог значимости не определен, частоты sig-cGA не меняются")

    @property
    def low(self) -> float:
        return 1.0 / self.n

    @property
    def high(self) -> float:
        return 1.0 - 1.0 / self.n

    def frequency(self, level: Level) -> float:
        if level == Level.MID:
            return 0.5
        return self.high if level > 0 else self.low

    def classify(self, tau: float) -> Level:
        """
        Переводит частоту в уровень.

        Raises:
            InvalidFrequencyError: если tau не из {1/n, 1/2, 1 - 1/n}.
        """
        if tau == 0.5:
            return Level.MID
        if tau == self.low:
            return Level.LOW
        if tau == self.high:
            return Level.HIGH
        raise InvalidFrequencyError(f"Частота {tau} не из множества {{1/n, 1/2, 1-1/n}} при n={self.n}")

    def limit(self, length: int, rare: bool) -> float:
        """
        Граница срабатывания для окна длины `length`: ожидание плюс порог.

        Для уровня 1/2 ожидание равно length/2, для крайних уровней -
        length/n (редкое значение бита).
        """
        key = (length, rare)
        cached = self._limits.get(key)
        if cached is None:
            expected = length / self.n if rare else length / 2
            cached = expected + threshold(self.epsilon, expected, self.n)
            self._limits[key] = cached
        return cached

    def limits(self, lengths: np.ndarray, rare: bool) -> np.ndarray:
        """Векторная версия `limit` для окон разной длины."""
        log_n = math.log(self.n)
        expected = lengths / self.n if rare else lengths / 2
        return expected + self.epsilon * np.maximum(np.sqrt(expected * log_n), log_n)


def check_history(level: Level, history: History, params: SignificanceParams) -> SigVerdict:
    """
    Ищет значимость в истории для частоты данного уровня.

    Проверяются суффиксы длины 2^m = 1, 2, 4, ... <= |H| по возрастанию,
    поиск останавливается на первой длине, давшей значимость. Для уровня
    1/2 при одной и той же длине сначала проверяется избыток единиц.
    """
    if params.n < 2:
        return STAY
    length = len(history)
    span = 1
    while span <= length:
        effective, ones = history.suffix_ones(span)
        if level == Level.MID:
            bound = params.limit(effective, rare=False)
            if ones >= bound:
                return SigVerdict(Verdict.UP, span)
            if effective - ones >= bound:
                return SigVerdict(Verdict.DOWN, span)
        elif level == Level.HIGH:
            if effective - ones >= params.limit(effective, rare=True):
                return SigVerdict(Verdict.DOWN, span)
        elif ones >= params.limit(effective, rare=True):
            return SigVerdict(Verdict.UP, span)
        span <<= 1
    return STAY


def check_positions(levels: np.ndarray, histories: HistoryBank, params: SignificanceParams) -> np.ndarray:
    """
    Проверка значимости сразу для всех позиций.

    Тот же просмотр, что в `check_history`: окна 2^m по возрастанию, для
    каждой позиции берется первая длина со значимым отклонением, при
    уровне 1/2 избыток единиц проверяется раньше избытка нулей. На
    каждую длину приходится одна маскированная операция над вектором.

    Args:
        levels: Уровни частот (LOW / MID / HIGH) по позициям.
        histories: Истории позиций.
        params: Параметры значимости.

    Returns:
        Вектор int8: 1 - up, -1 - down, 0 - stay.
    """
    verdicts = np.zeros(len(levels), dtype=np.int8)
    if params.n < 2:
        return verdicts
    lengths = histories.lengths
    max_length = int(lengths.max()) if lengths.size else 0
    mid = levels == Level.MID
    low = levels == Level.LOW
    high = levels == Level.HIGH
    undecided = np.ones(len(levels), dtype=bool)
    span = 1
    while span <= max_length:
        active = undecided & (lengths >= span)
        if active.any():
            effective, ones = histories.window(span, active)
            if isinstance(effective, np.ndarray):
                mid_limit, rare_limit = params.limits(effective, rare=False), params.limits(effective, rare=True)
            else:
                mid_limit, rare_limit = params.limit(effective, rare=False), params.limit(effective, rare=True)
            zeros = effective - ones
            up = active & ((mid & (ones >= mid_limit)) | (low & (ones >= rare_limit)))
            down = active & ~up & ((mid & (zeros >= mid_limit)) | (high & (zeros >= rare_limit)))
            verdicts[up] = 1
            verdicts[down] = -1
            undecided &= ~(up | down)
        span <<= 1
    return verdicts


def sig(tau: float, history: History, params: SignificanceParams) -> SigVerdict:
    """
    Функция значимости sig(tau, H).

    Raises:
        InvalidFrequencyError: если tau не из {1/n, 1/2, 1 - 1/n}.
    """
    return check_history(params.classify(tau), history, params)


def count_false_significances(bits: np.ndarray, level: Level, params: SignificanceParams) -> int:
    """
    Считает итерации, в которых sig вернула бы не stay.

    Моделирует цикл "добавить бит в историю, проверить значимость" по
    потоку `bits` без сбросов: итерация t срабатывает, если хотя бы для
    одного окна 2^m <= t выполнено условие значимости. Вычисляется
    префиксными суммами numpy - по одной векторной операции на окно.

    Args:
        bits: Поток битов (0/1).
        level: Уровень частоты, при котором ведется проверка.
        params: Параметры значимости.

    Returns:
        Число итераций с вердиктом up или down.
    """
    if params.n < 2:
        return 0
    stream = np.asarray(bits, dtype=np.int64)
    prefix = np.concatenate(([0], np.cumsum(stream)))
    total = stream.size
    triggered = np.zeros(total + 1, dtype=bool)
    span = 1
    while span <= total:
        ends = np.arange(span, total + 1)
        ones = prefix[ends] - prefix[ends - span]
        zeros = span - ones
        if level == Level.MID:
            bound = params.limit(span, rare=False)
            hit = (ones >= bound) | (zeros >= bound)
        elif level == Level.HIGH:
            hit = zeros >= params.limit(span, rare=True)
        else:
            hit = ones >= params.limit(span, rare=True)
        triggered[ends] |= hit
        span <<= 1
    return int(triggered.sum())
