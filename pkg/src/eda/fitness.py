import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from src.eda.errors import ConfigError, LengthMismatchError

logger = logging.getLogger(__name__)

# Число единиц в байте и длина префикса из единиц (старший бит первым)
_POPCOUNT = np.array([bin(b).count("1") for b in range(256)], dtype=np.int64)
_LEADING_ONES = np.array(
    [8 - (b ^ 0xFF).bit_length() for b in range(256)], dtype=np.int64
)


@dataclass(frozen=True, eq=False)
class Individual:
    """
    Особь: битовая строка фиксированной длины n.

    Хранит одновременно распакованный вектор (`bits`, uint8 из 0/1) и
    упакованное представление (`packed`, старший бит первым). Все
    фитнес-функции работают с упакованной формой; распакованная нужна
    для побитовых обновлений моделей.

    Attributes:
        bits: Вектор битов длины n.
        packed: Упакованные байты (`np.packbits`), хвост последнего байта нулевой.
    """

    bits: np.ndarray
    packed: bytes = field(init=False, repr=False)

    def __post_init__(self):
        bits = np.array(self.bits, dtype=np.uint8)
        if bits.ndim != 1 or bits.size < 1:
            raise ValueError("Особь должна быть непустым одномерным вектором битов")
        if np.any(bits > 1):
            raise ValueError("Особь может содержать только 0 и 1")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "packed", np.packbits(bits).tobytes())

    @classmethod
    def from_string(cls, text: str) -> "Individual":
        """Создает особь из строки вида "10110"."""
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"Ожидалась строка из 0 и 1, получено: {text!r}")
        return cls(np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0"))

    @classmethod
    def ones(cls, n: int) -> "Individual":
        """Строка из n единиц (оптимум всех функций)."""
        return cls(np.ones(n, dtype=np.uint8))

    @property
    def n(self) -> int:
        return int(self.bits.size)

    def is_optimal(self) -> bool:
        """Проверяет, что особь - строка из одних единиц."""
        return one_max(self) == self.n

    def permuted(self, permutation: Sequence[int]) -> "Individual":
        """Особь с битами, переставленными по permutation (bits[permutation])."""
        return Individual(self.bits[np.asarray(permutation)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Individual):
            return NotImplemented
        return self.n == other.n and self.packed == other.packed

    def __hash__(self) -> int:
        return hash((self.n, self.packed))

    def __str__(self) -> str:
        return "".join("1" if b else "0" for b in self.bits.tolist())


def _as_bytes(x: Individual) -> np.ndarray:
    return np.frombuffer(x.packed, dtype=np.uint8)


def one_max(x: Individual) -> int:
    """Число единиц в строке."""
    return int(_POPCOUNT[_as_bytes(x)].sum())


def leading_ones(x: Individual) -> int:
    """Длина максимального префикса из единиц."""
    packed = _as_bytes(x)
    broken = np.flatnonzero(packed != 0xFF)
    if broken.size == 0:
        return x.n
    first = int(broken[0])
    return min(8 * first + int(_LEADING_ONES[packed[first]]), x.n)


def bin_val(x: Individual) -> int:
    """
    Двоичное значение строки, левый бит старший.

    Результат - целое произвольной точности; в горячем цикле алгоритмы
    используют `compare`, а точное значение нужно только для отчетов.
    """
    padding = 8 * len(x.packed) - x.n
    return int.from_bytes(x.packed, "big") >> padding


class FunctionKind(str, Enum):
    ONE_MAX = "onemax"
    LEADING_ONES = "leadingones"
    BIN_VAL = "binval"


class Ordering(str, Enum):
    X_BETTER = "x_better"
    Y_BETTER = "y_better"
    EQUAL = "equal"


_EVALUATORS = {
    FunctionKind.ONE_MAX: one_max,
    FunctionKind.LEADING_ONES: leading_ones,
    FunctionKind.BIN_VAL: bin_val,
}


@dataclass(frozen=True)
class FitnessFunction:
    """
    Псевдобулева фитнес-функция из набора OneMax / LeadingOnes / BinVal.

    Необязательная перестановка `permutation` задает функцию
    x -> f(x[permutation]); оптимум (строка из единиц) при этом не меняется.

    Attributes:
        kind: Вид функции.
        n: Размер задачи.
        permutation: Перестановка позиций или None.
    """

    kind: FunctionKind
    n: int
    permutation: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"Размер задачи должен быть >= 1, получено n={self.n}")
        if self.permutation is not None:
            if sorted(self.permutation) != list(range(self.n)):
                raise ConfigError("permutation должна быть перестановкой 0..n-1")
            object.__setattr__(self, "permutation", tuple(int(p) for p in self.permutation))

    @property
    def name(self) -> str:
        return self.kind.value

    def _view(self, x: Individual) -> Individual:
        if x.n != self.n:
            raise LengthMismatchError(f"Длина особи {x.n} не совпадает с n={self.n}")
        if self.permutation is None:
            return x
        return x.permuted(self.permutation)

    def evaluate(self, x: Individual) -> int:
        """Точное значение функции (для BinVal - большое целое)."""
        return _EVALUATORS[self.kind](self._view(x))

    def key(self, x: Individual) -> int | bytes:
        """
        Ключ, упорядоченный так же, как значения функции.

        Для BinVal это упакованные байты: лексикографический порядок байтов
        при одинаковой длине совпадает с порядком двоичных значений.
        """
        view = self._view(x)
        if self.kind is FunctionKind.BIN_VAL:
            return view.packed
        return _EVALUATORS[self.kind](view)

    def compare(self, x: Individual, y: Individual) -> Ordering:
        return compare(self, x, y)


def compare(f: FitnessFunction, x: Individual, y: Individual) -> Ordering:
    """
    Сравнивает две особи по функции f.

    Raises:
        LengthMismatchError: если длина одной из особей отличается от f.n.
    """
    kx, ky = f.key(x), f.key(y)
    if kx > ky:
        return Ordering.X_BETTER
    if ky > kx:
        return Ordering.Y_BETTER
    return Ordering.EQUAL


def get_function(name: str, n: int, permutation: Iterable[int] | None = None) -> FitnessFunction:
    """
    Создает фитнес-функцию по имени ("onemax" | "leadingones" | "binval").

    Raises:
        ConfigError: если имя неизвестно.
    """
    try:
        kind = FunctionKind(name.lower())
    except ValueError:
        known = ", ".join(k.value for k in FunctionKind)
        raise ConfigError(f"Неизвестная функция {name!r}; доступны: {known}") from None
    perm = tuple(permutation) if permutation is not None else None
    return FitnessFunction(kind, n, perm)
