import logging
import time
from functools import wraps
from typing import Any, Callable

logger = logging.getLogger(__name__)


def timeit_sync(func: Callable) -> Callable:
    """
    Декоратор для измерения времени выполнения синхронной функции.

    Оборачивает функцию, замеряет время от начала до конца ее выполнения
    и логирует результат.

    Args:
        func: Функция для измерения.

    Returns:
        Обновленная функция-обертка.
    """
    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        start_time = time.perf_counter()
        result = func(*args, **kwargs)
        total_time = time.perf_counter() - start_time
        logger.info("Функция %s выполнилась за %.4f секунд", func.__name__, total_time)
        return result
    return wrapper


class Stopwatch:
    """Секундомер для одного испытания; `elapsed_ms` доступен после выхода из блока."""

    def __init__(self):
        self.elapsed_ms = 0.0
        self._start = 0.0

    def __enter__(self) -> "Stopwatch":
        self._start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.elapsed_ms = (time.perf_counter() - self._start) * 1000.0
