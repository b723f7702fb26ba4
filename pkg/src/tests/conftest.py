import numpy as np
import pytest

from src.eda.fitness import FitnessFunction, get_function
from src.eda.significance import SignificanceParams


@pytest.fixture
def rng() -> np.random.Generator:
    """
    Фикстура с генератором случайных чисел с фиксированным зерном.

    Фиксированное зерно делает вероятностные тесты воспроизводимыми.

    Returns:
        Экземпляр `numpy.random.Generator`.
    """
    return np.random.default_rng(12345)


@pytest.fixture
def onemax3() -> FitnessFunction:
    """OneMax на трех битах."""
    return get_function("onemax", 3)


@pytest.fixture
def sig_params() -> SignificanceParams:
    """
    Параметры значимости из примеров: n = 100, epsilon = 13.

    Returns:
        Экземпляр SignificanceParams.
    """
    return SignificanceParams(13.0, 100)


@pytest.fixture
def project_config(tmp_path) -> dict:
    """
    Минимальная конфигурация проекта, направляющая результаты во временную директорию.

    Args:
        tmp_path: Встроенная фикстура pytest с временной директорией.

    Returns:
        Словарь конфигурации.
    """
    return {
        "harness": {"seed": 0, "trials": 1, "jobs": 1, "results_dir": str(tmp_path / "results")},
        "logging": {"level": "WARNING"},
    }
