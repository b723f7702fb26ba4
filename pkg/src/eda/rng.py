import hashlib
import logging
from typing import Sequence

import numpy as np

logger = logging.getLogger(__name__)

# Сколько равномерных чисел за раз берется из каждого подпотока позиции
BUFFER_SIZE = 256


def derive_seed(master: int, *keys: int | str) -> int:
    """
    Выводит 63-битное зерно из главного зерна и ключей хешированием.

    Зерно зависит только от самого кортежа (master, *keys), поэтому
    добавление новых размеров или испытаний не меняет зерна уже
    существующих.
    """
    payload = ":".join(str(part) for part in (master, *keys)).encode("utf-8")
    digest = hashlib.sha256(payload).digest()
    return int.from_bytes(digest[:8], "big") >> 1


class PositionStreams:
    """
    Подпотоки случайных чисел, по одному на позицию и роль.

    Схема разбиения: `SeedSequence(seed).spawn(2n + 1)`; потомки
    [0, n) - подпотоки первого потомка, [n, 2n) - второго, потомок 2n -
    общий поток для разрешения ничьих. Позиция k использует потомков с
    номером `order[k]` (по умолчанию k), что позволяет переставить
    подпотоки вместе с позициями.

    Attributes:
        n: Число позиций.
        shared: Общий генератор (ничьи).
    """

    def __init__(self, seed: int, n: int, order: Sequence[int] | None = None):
        if order is None:
            order = range(n)
        order = [int(k) for k in order]
        if sorted(order) != list(range(n)):
            raise ValueError("order должен быть перестановкой 0..n-1")
        children = np.random.SeedSequence(seed).spawn(2 * n + 1)
        self.n = n
        self._first = [np.random.default_rng(children[k]) for k in order]
        self._second = [np.random.default_rng(children[n + k]) for k in order]
        self.shared = np.random.default_rng(children[2 * n])
        self._buffer_first = np.empty((n, BUFFER_SIZE))
        self._buffer_second = np.empty((n, BUFFER_SIZE))
        self._cursor = BUFFER_SIZE

    def _refill(self) -> None:
        for i in range(self.n):
            self._buffer_first[i] = self._first[i].random(BUFFER_SIZE)
            self._buffer_second[i] = self._second[i].random(BUFFER_SIZE)
        self._cursor = 0

    def next_pair(self) -> tuple[np.ndarray, np.ndarray]:
        """Следующая пара векторов равномерных чисел для двух потомков."""
        if self._cursor == BUFFER_SIZE:
            self._refill()
        col = self._cursor
        self._cursor += 1
        return self._buffer_first[:, col].copy(), self._buffer_second[:, col].copy()

    def matrix(self, rows: int) -> np.ndarray:
        """
        Матрица rows x n равномерных чисел; столбец i взят из подпотока
        первого потомка позиции i (используется популяционными алгоритмами).
        """
        out = np.empty((rows, self.n))
        for i, generator in enumerate(self._first):
            out[:, i] = generator.random(rows)
        return out

    def coin(self) -> bool:
        """Честная монета из общего потока."""
        return bool(self.shared.random() < 0.5)
