"""
Реестр алгоритмов: имена, параметры по умолчанию и единая точка запуска.
"""
import logging
from typing import Any, Mapping

from src.eda.algorithms.base import FailureKind, RunResult
from src.eda.algorithms.cga import default_rho, run_cga
from src.eda.algorithms.csa import default_mu, run_csa
from src.eda.algorithms.scga import ScgaParams, run_scga
from src.eda.algorithms.sig_cga import run_sig_cga
from src.eda.errors import ConfigError
from src.eda.fitness import FitnessFunction
from src.eda.history import HistoryMode

logger = logging.getLogger(__name__)

ALGORITHMS = ("sigcga", "scga", "cga", "csa")

# Допустимые параметры каждого алгоритма
PARAMETERS: dict[str, tuple[str, ...]] = {
    "sigcga": ("epsilon", "history_mode"),
    "scga": ("rho", "a", "d", "stop_on_leave"),
    "cga": ("rho",),
    "csa": ("mu", "restart"),
}

DEFAULT_EPSILON = 13.0


def resolve_params(algorithm: str, n: int, overrides: Mapping[str, Any] | None = None) -> dict[str, Any]:
    """
    Подставляет значения по умолчанию, зависящие от n, и проверяет параметры.

    Возвращаемый словарь - полный снимок параметров запуска (он же
    попадает в колонку params_json).

    Raises:
        ConfigError: неизвестный алгоритм или параметр, недопустимое значение.
    """
    if algorithm not in PARAMETERS:
        raise ConfigError(f"Неизвестный алгоритм {algorithm!r}; доступны: {', '.join(ALGORITHMS)}")
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    unknown = set(overrides) - set(PARAMETERS[algorithm])
    if unknown:
        raise ConfigError(f"Параметры {sorted(unknown)} не применимы к алгоритму {algorithm}")

    if algorithm == "sigcga":
        params = {"epsilon": DEFAULT_EPSILON, "history_mode": HistoryMode.EXACT.value}
        params.update(overrides)
        params["epsilon"] = float(params["epsilon"])
        if params["epsilon"] <= 0:
            raise ConfigError(f"epsilon должен быть > 0, получено {params['epsilon']}")
        try:
            params["history_mode"] = HistoryMode(params["history_mode"]).value
        except ValueError:
            raise ConfigError(f"Неизвестный режим истории {params['history_mode']!r}") from None
    elif algorithm == "scga":
        base = ScgaParams.defaults(n)
        rho = float(overrides.get("rho", base.rho))
        # a по умолчанию следует за rho (a = rho / 2), даже если rho задан явно
        a = float(overrides.get("a", rho / 2))
        d = float(overrides.get("d", base.d))
        ScgaParams(rho, a, d)
        params = {"rho": rho, "a": a, "d": d, "stop_on_leave": bool(overrides.get("stop_on_leave", False))}
    elif algorithm == "cga":
        params = {"rho": float(overrides.get("rho", default_rho(n)))}
        if not 0 < params["rho"] < 1:
            raise ConfigError(f"rho должен быть в (0, 1), получено {params['rho']}")
    else:
        params = {"mu": int(overrides.get("mu", default_mu(n))), "restart": bool(overrides.get("restart", True))}
        if params["mu"] < 2:
            raise ConfigError(f"mu должен быть >= 2, получено {params['mu']}")
    return params


def run_algorithm(
    algorithm: str, f: FitnessFunction, params: Mapping[str, Any], max_evals: int, seed: int
) -> RunResult:
    """Запускает алгоритм по имени с уже разрешенными параметрами."""
    n = f.n
    if algorithm == "sigcga":
        return run_sig_cga(f, n, params["epsilon"], max_evals, seed, params["history_mode"])
    if algorithm == "scga":
        scga_params = ScgaParams(params["rho"], params["a"], params["d"])
        return run_scga(f, n, scga_params, max_evals, seed, params.get("stop_on_leave", False))
    if algorithm == "cga":
        return run_cga(f, n, params["rho"], max_evals, seed)
    if algorithm == "csa":
        return run_csa(f, n, params["mu"], max_evals, seed, params["restart"])
    raise ConfigError(f"Неизвестный алгоритм {algorithm!r}")


__all__ = ["ALGORITHMS", "PARAMETERS", "FailureKind", "RunResult", "resolve_params", "run_algorithm"]
