import logging
import sys
from typing import Any

DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
WORKER_FORMAT = "%(asctime)s - %(process)d - %(name)s - %(levelname)s - %(message)s"


def setup_logging(config: dict[str, Any] | None = None, level: str | None = None, worker: bool = False):
    """
    Настраивает логирование для всего приложения.

    Уровень и формат берутся из секции `logging` конфигурации; явно
    переданный `level` (флаг --log-level) имеет приоритет. Вывод идет в
    `sys.stdout`. Для процессов пула формат дополняется номером процесса.

    Args:
        config: Загруженная конфигурация проекта.
        level: Уровень логирования поверх конфигурации.
        worker: Настройка выполняется в дочернем процессе пула.
    """
    settings = (config or {}).get("logging", {}) or {}
    fmt = WORKER_FORMAT if worker else settings.get("format", DEFAULT_FORMAT)
    logging.basicConfig(
        level=(level or settings.get("level", "INFO")).upper(),
        format=fmt,
        stream=sys.stdout,
        force=True,
    )
