import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

import numpy as np

from src.eda.errors import ConfigError, HistoryQueryError

logger = logging.getLogger(__name__)


class HistoryMode(str, Enum):
    EXACT = "exact"
    CONDENSED = "condensed"


def _is_power_of_two(value: int) -> bool:
    return value >= 1 and value & (value - 1) == 0


class History(ABC):
    """
    История победивших битов одной позиции.

    Обе реализации отвечают на вопрос "сколько единиц среди последних
    `length` битов" через `suffix_ones`; точная история возвращает ровно
    `length`, сжатая - ближайший суффикс из целых блоков.
    """

    @abstractmethod
    def append(self, bit: int) -> int:
        """Добавляет бит; возвращает число выполненных слияний блоков."""

    @abstractmethod
    def reset(self) -> None:
        """Очищает историю."""

    @abstractmethod
    def suffix_ones(self, length: int) -> tuple[int, int]:
        """Возвращает (фактическая длина суффикса, число единиц в нем)."""

    @abstractmethod
    def footprint(self) -> int:
        """Число хранимых ячеек (битов или блоков)."""

    @abstractmethod
    def __len__(self) -> int: ...


def _check_bit(bit: int) -> int:
    if bit != 0 and bit != 1:
        raise ValueError(f"В историю можно добавить только 0 или 1, получено {bit!r}")
    return int(bit)


class ExactHistory(History):
    """
    Полная история с подсчетом единиц в суффиксах длины 2^m.

    Для каждого m с 2^m <= |H| хранится скользящая сумма последних 2^m
    битов: при добавлении бита к ней прибавляется новый бит и вычитается
    покинувший окно. Добавление стоит O(log |H|), запрос - O(1).
    """

    __slots__ = ("_bits", "_counts", "_ones")

    def __init__(self):
        self._bits = bytearray()
        self._counts: list[int] = []
        self._ones = 0

    def append(self, bit: int) -> int:
        bit = _check_bit(bit)
        bits = self._bits
        bits.append(bit)
        self._ones += bit
        length = len(bits)
        counts = self._counts
        span = 1
        for m in range(len(counts)):
            counts[m] += bit - bits[length - 1 - span]
            span <<= 1
        if span == length:
            # длина впервые достигла 2^m - окно совпадает со всей историей
            counts.append(self._ones)
        return 0

    def reset(self) -> None:
        self._bits.clear()
        self._counts.clear()
        self._ones = 0

    def ones_in_suffix(self, length: int) -> int:
        """
        Число единиц среди последних `length` битов.

        Args:
            length: Степень двойки, не превосходящая длину истории.

        Raises:
            HistoryQueryError: если длина не степень двойки или больше |H|.
        """
        if not _is_power_of_two(length) or length > len(self._bits):
            raise HistoryQueryError(
                f"Длина суффикса {length} должна быть степенью двойки <= {len(self._bits)}"
            )
        return self._counts[length.bit_length() - 1]

    def suffix_ones(self, length: int) -> tuple[int, int]:
        return length, self.ones_in_suffix(length)

    def footprint(self) -> int:
        return len(self._bits)

    def __len__(self) -> int:
        return len(self._bits)


@dataclass(slots=True)
class Block:
    """Блок сжатой истории: `span` битов (степень двойки), из них `ones` единиц."""

    span: int
    ones: int


class CondensedHistory(History):
    """
    Сжатая история в виде списка блоков, от ранних к поздним.

    Новый бит добавляется блоком длины 1; затем, пока среди трех подряд
    идущих блоков встречается одинаковый размер, два ранних из них
    сливаются в блок двойного размера. В итоге для наибольшего размера
    2^k каждый размер 2^j, j in [0..k], встречается один или два раза,
    а памяти нужно O(log |H|) блоков.
    """

    __slots__ = ("_blocks", "_length", "_ones")

    def __init__(self):
        self._blocks: list[Block] = []
        self._length = 0
        self._ones = 0

    @property
    def blocks(self) -> tuple[Block, ...]:
        return tuple(Block(b.span, b.ones) for b in self._blocks)

    def append(self, bit: int) -> int:
        bit = _check_bit(bit)
        blocks = self._blocks
        blocks.append(Block(1, bit))
        self._length += 1
        self._ones += bit

        merges = 0
        last = len(blocks) - 1
        # Слияние порождает блок двойного размера, который может образовать
        # новую тройку с более ранними блоками; продолжаем до неподвижной точки.
        while last >= 2 and blocks[last].span == blocks[last - 1].span == blocks[last - 2].span:
            early, middle = blocks[last - 2], blocks[last - 1]
            blocks[last - 2 : last] = [Block(early.span * 2, early.ones + middle.ones)]
            merges += 1
            last -= 2
        return merges

    def reset(self) -> None:
        self._blocks.clear()
        self._length = 0
        self._ones = 0

    def ones_in_block_suffix(self, length: int) -> tuple[int, int]:
        """
        Кратчайший суффикс из целых блоков длиной не меньше `length`.

        Гарантируется length <= effective_len < 2 * length.

        Returns:
            Кортеж (effective_len, число единиц в этом суффиксе).

        Raises:
            HistoryQueryError: если length вне [1, |H|].
        """
        if length < 1 or length > self._length:
            raise HistoryQueryError(f"Длина суффикса {length} вне диапазона [1, {self._length}]")
        effective = ones = 0
        for block in reversed(self._blocks):
            effective += block.span
            ones += block.ones
            if effective >= length:
                break
        return effective, ones

    def suffix_ones(self, length: int) -> tuple[int, int]:
        return self.ones_in_block_suffix(length)

    def check_structure(self) -> bool:
        """Проверяет структурный инвариант списка блоков."""
        if sum(b.span for b in self._blocks) != self._length:
            return False
        if sum(b.ones for b in self._blocks) != self._ones:
            return False
        if any(not _is_power_of_two(b.span) or not 0 <= b.ones <= b.span for b in self._blocks):
            return False
        if not self._blocks:
            return True
        occurrences: dict[int, int] = {}
        for block in self._blocks:
            occurrences[block.span] = occurrences.get(block.span, 0) + 1
        largest = max(occurrences)
        return all(1 <= occurrences.get(1 << j, 0) <= 2 for j in range(largest.bit_length()))

    @property
    def ones(self) -> int:
        """Число единиц во всей истории."""
        return self._ones

    def tail(self, count: int) -> tuple[Block, ...]:
        """Копии последних `count` блоков (от ранних к поздним)."""
        return tuple(Block(b.span, b.ones) for b in self._blocks[max(len(self._blocks) - count, 0) :])

    def footprint(self) -> int:
        return len(self._blocks)

    def __len__(self) -> int:
        return self._length


def make_history(mode: HistoryMode | str) -> History:
    """
    Создает пустую историю нужного режима.

    Raises:
        ConfigError: если режим неизвестен.
    """
    try:
        mode = HistoryMode(mode)
    except ValueError:
        raise ConfigError(f"Неизвестный режим истории {mode!r}; доступны: exact, condensed") from None
    return ExactHistory() if mode is HistoryMode.EXACT else CondensedHistory()


class HistoryBank(ABC):
    """
    Истории всех n позиций алгоритма.

    Добавление и сброс выполняются сразу для вектора позиций; запрос
    `window` возвращает суффиксные суммы для всех позиций одной длины.
    """

    @abstractmethod
    def append(self, bits: np.ndarray) -> None:
        """Дописывает бит bits[i] в историю позиции i для всех i."""

    @abstractmethod
    def reset(self, positions: Iterable[int]) -> None:
        """Очищает истории указанных позиций."""

    @property
    @abstractmethod
    def lengths(self) -> np.ndarray:
        """Длины историй по позициям."""

    @abstractmethod
    def window(self, span: int, active: np.ndarray) -> tuple[int | np.ndarray, np.ndarray]:
        """
        Суффикс длины `span` (степень двойки) для позиций из маски `active`.

        Returns:
            Кортеж (фактическая длина суффикса, число единиц по позициям).
            Для неактивных позиций значения не определены.
        """

    @abstractmethod
    def footprint(self) -> int:
        """Суммарное число хранимых ячеек по всем позициям."""

    @abstractmethod
    def __len__(self) -> int: ...


class ExactHistoryBank(HistoryBank):
    """
    Точные истории n позиций в массивах numpy.

    Биты хранятся построчно в матрице n x capacity (емкость удваивается
    по мере роста), скользящие суммы окон 2^m - в матрице n x M. Одно
    добавление стоит O(log |H|) векторных операций над n позициями.
    """

    def __init__(self, n: int, capacity: int = 64):
        if n < 1:
            raise ConfigError(f"n должен быть >= 1, получено {n}")
        self._bits = np.zeros((n, max(capacity, 1)), dtype=np.uint8)
        self._lengths = np.zeros(n, dtype=np.int64)
        self._ones = np.zeros(n, dtype=np.int64)
        self._counts = np.zeros((n, 0), dtype=np.int64)
        self._rows = np.arange(n)

    def append(self, bits: np.ndarray) -> None:
        bits = np.asarray(bits, dtype=np.int64)
        if bits.shape != self._lengths.shape:
            raise ValueError(f"Ожидался вектор из {self._lengths.size} битов, получено {bits.shape}")
        if bits.min() < 0 or bits.max() > 1:
            raise ValueError("В историю можно добавить только 0 или 1")
        lengths = self._lengths
        if int(lengths.max()) >= self._bits.shape[1]:
            self._bits = np.concatenate([self._bits, np.zeros_like(self._bits)], axis=1)
        self._bits[self._rows, lengths] = bits
        lengths += 1
        self._ones += bits

        levels = int(lengths.max()).bit_length()
        if levels > self._counts.shape[1]:
            extra = np.zeros((lengths.size, levels - self._counts.shape[1]), dtype=np.int64)
            self._counts = np.concatenate([self._counts, extra], axis=1)
        for m in range(levels):
            span = 1 << m
            leaving = self._bits[self._rows, np.maximum(lengths - 1 - span, 0)]
            column = self._counts[:, m]
            # окно заполнилось впервые - сумма равна всем единицам истории
            self._counts[:, m] = np.where(
                lengths > span, column + bits - leaving, np.where(lengths == span, self._ones, 0)
            )

    def reset(self, positions: Iterable[int]) -> None:
        positions = np.fromiter(positions, dtype=np.int64)
        self._lengths[positions] = 0
        self._ones[positions] = 0
        self._counts[positions, :] = 0

    @property
    def lengths(self) -> np.ndarray:
        return self._lengths.copy()

    def ones_in_suffix(self, position: int, length: int) -> int:
        """
        Число единиц среди последних `length` битов позиции.

        Raises:
            HistoryQueryError: если длина не степень двойки или больше длины истории.
        """
        if not _is_power_of_two(length) or length > self._lengths[position]:
            raise HistoryQueryError(
                f"Длина суффикса {length} должна быть степенью двойки <= {int(self._lengths[position])}"
            )
        return int(self._counts[position, length.bit_length() - 1])

    def window(self, span: int, active: np.ndarray) -> tuple[int, np.ndarray]:
        m = span.bit_length() - 1
        if m >= self._counts.shape[1]:
            return span, np.zeros(self._lengths.size, dtype=np.int64)
        return span, self._counts[:, m]

    def footprint(self) -> int:
        return int(self._lengths.sum())

    def __len__(self) -> int:
        return int(self._lengths.size)


class HistoryList(HistoryBank):
    """Набор отдельных историй `History`, по одной на позицию (используется для сжатого режима)."""

    def __init__(self, n: int, mode: HistoryMode | str = HistoryMode.CONDENSED):
        self._items = [make_history(mode) for _ in range(n)]

    def __getitem__(self, position: int) -> History:
        return self._items[position]

    def append(self, bits: np.ndarray) -> None:
        for history, bit in zip(self._items, np.asarray(bits).tolist()):
            history.append(bit)

    def reset(self, positions: Iterable[int]) -> None:
        for i in positions:
            self._items[int(i)].reset()

    @property
    def lengths(self) -> np.ndarray:
        return np.fromiter((len(h) for h in self._items), dtype=np.int64, count=len(self._items))

    def window(self, span: int, active: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        effective = np.zeros(len(self._items), dtype=np.int64)
        ones = np.zeros(len(self._items), dtype=np.int64)
        for i in np.flatnonzero(active).tolist():
            effective[i], ones[i] = self._items[i].suffix_ones(span)
        return effective, ones

    def footprint(self) -> int:
        return sum(h.footprint() for h in self._items)

    def __len__(self) -> int:
        return len(self._items)


def make_history_bank(mode: HistoryMode | str, n: int) -> HistoryBank:
    """
    Истории n позиций: точный режим векторизован, сжатый хранит блоки по позициям.

    Raises:
        ConfigError: если режим неизвестен.
    """
    try:
        mode = HistoryMode(mode)
    except ValueError:
        raise ConfigError(f"Неизвестный режим истории {mode!r}; доступны: exact, condensed") from None
    return ExactHistoryBank(n) if mode is HistoryMode.EXACT else HistoryList(n, mode)
