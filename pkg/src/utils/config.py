import logging
from pathlib import Path
from typing import Any

import yaml

from src.eda.errors import ConfigError

logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent


def load_config(path: str | Path | None = None) -> dict[str, Any]:
    """
    Загружает конфигурацию проекта.

    Если путь не указан, используется `config.local.yaml` из корня проекта,
    а при его отсутствии - `config.yaml`. Отсутствие обоих файлов не
    ошибка: возвращается пустой словарь и действуют значения по умолчанию.

    Args:
        path: Явный путь к YAML-файлу.

    Returns:
        Словарь с настройками.

    Raises:
        ConfigError: если файл не является YAML-словарем.
    """
    if path is None:
        local_path = PROJECT_ROOT / "config.local.yaml"
        default_path = PROJECT_ROOT / "config.yaml"
        path = local_path if local_path.exists() else default_path
        if not path.exists():
            return {}
    path = Path(path)
    with open(path, "r", encoding="utf-8") as f:
        config = yaml.safe_load(f) or {}
    if not isinstance(config, dict):
        raise ConfigError(f"Конфигурация {path} должна быть словарем")
    logger.debug("Конфигурация загружена из %s", path)
    return config


def section(config: dict[str, Any], *keys: str) -> dict[str, Any]:
    """Вложенная секция конфигурации (пустой словарь, если ее нет)."""
    node: Any = config
    for key in keys:
        node = node.get(key) if isinstance(node, dict) else None
        if node is None:
            return {}
    if not isinstance(node, dict):
        raise ConfigError(f"Секция {'.'.join(keys)} должна быть словарем")
    return node
