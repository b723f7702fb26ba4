import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping

from src.eda.algorithms import ALGORITHMS, PARAMETERS
from src.eda.errors import ConfigError
from src.eda.fitness import FunctionKind
from src.eda.history import HistoryMode
from src.utils.config import section

logger = logging.getLogger(__name__)

# Бюджет по умолчанию: budget_factor * n * ln n вычислений
DEFAULT_BUDGET_FACTOR = 200.0


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Описание серии испытаний.

    Attributes:
        algorithm: Имя алгоритма (sigcga, scga, cga, csa).
        function: Имя функции (onemax, leadingones, binval).
        sizes: Размеры задачи по возрастанию.
        trials: Число испытаний на каждый размер.
        params: Явно заданные параметры алгоритма.
        seed: Главное зерно.
        budget: Бюджет вычислений на испытание; None - по budget_factor.
        budget_factor: Множитель бюджета c в c * n * ln n.
        jobs: Число процессов пула.
        output: Путь к CSV (None - не сохранять).
        history_mode: Режим истории sig-cGA.
        summary_json: Путь к JSON-сводке (None - не сохранять).
        wallclock: Писать ли время испытаний в CSV.
        label: Подпись серии в логах.
    """

    algorithm: str
    function: str
    sizes: tuple[int, ...]
    trials: int = 1
    params: Mapping[str, Any] = field(default_factory=dict)
    seed: int = 0
    budget: int | None = None
    budget_factor: float = DEFAULT_BUDGET_FACTOR
    jobs: int = 1
    output: Path | None = None
    history_mode: str = HistoryMode.EXACT.value
    summary_json: Path | None = None
    wallclock: bool = False
    label: str = ""

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"Неизвестный алгоритм {self.algorithm!r}; доступны: {', '.join(ALGORITHMS)}")
        try:
            FunctionKind(self.function)
        except ValueError:
            raise ConfigError(f"Неизвестная функция {self.function!r}") from None
        object.__setattr__(self, "sizes", tuple(int(n) for n in self.sizes))
        if not self.sizes:
            raise ConfigError("Нужен хотя бы один размер задачи")
        if any(n < 1 for n in self.sizes):
            raise ConfigError(f"Размеры задачи должны быть >= 1: {list(self.sizes)}")
        if any(a >= b for a, b in zip(self.sizes, self.sizes[1:])):
            raise ConfigError(f"Размеры задачи должны строго возрастать: {list(self.sizes)}")
        if self.trials < 1:
            raise ConfigError(f"trials должен быть >= 1, получено {self.trials}")
        if self.budget is not None and self.budget < 2:
            raise ConfigError(f"budget должен быть >= 2, получено {self.budget}")
        if self.budget_factor <= 0:
            raise ConfigError(f"budget_factor должен быть > 0, получено {self.budget_factor}")
        if self.jobs < 1:
            raise ConfigError(f"jobs должен быть >= 1, получено {self.jobs}")
        try:
            HistoryMode(self.history_mode)
        except ValueError:
            raise ConfigError(f"Неизвестный режим истории {self.history_mode!r}") from None
        unknown = set(self.params) - set(PARAMETERS[self.algorithm])
        if unknown:
            raise ConfigError(f"Параметры {sorted(unknown)} не применимы к алгоритму {self.algorithm}")

    def budget_for(self, n: int) -> int:
        """Бюджет испытания для размера n (не меньше 2)."""
        if self.budget is not None:
            return self.budget
        return max(2, math.ceil(self.budget_factor * n * math.log(max(n, 2))))

    def overrides(self) -> dict[str, Any]:
        """Параметры алгоритма с учетом режима истории для sig-cGA."""
        params = dict(self.params)
        if self.algorithm == "sigcga":
            params.setdefault("history_mode", self.history_mode)
        return params

    def with_overrides(self, **changes: Any) -> "ExperimentConfig":
        """Копия с заменой полей; значения None игнорируются."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


def config_from_mapping(data: Mapping[str, Any], config: Mapping[str, Any] | None = None) -> ExperimentConfig:
    """
    Собирает ExperimentConfig из словаря (аргументы CLI или YAML).

    Недостающие поля берутся из секции `harness` конфигурации проекта,
    параметры алгоритма по умолчанию - из секции `algorithms.<имя>`.

    Raises:
        ConfigError: если обязательные поля отсутствуют или значения некорректны.
    """
    harness = section(dict(config or {}), "harness")
    algorithm = data.get("algorithm")
    if not algorithm:
        raise ConfigError("Не задан алгоритм")
    defaults = section(dict(config or {}), "algorithms", algorithm)
    params = {**defaults, **{k: v for k, v in (data.get("params") or {}).items() if v is not None}}

    def pick(key: str, fallback: Any = None) -> Any:
        value = data.get(key)
        return value if value is not None else harness.get(key, fallback)

    try:
        return ExperimentConfig(
            algorithm=algorithm,
            function=data.get("function") or "onemax",
            sizes=tuple(data.get("sizes") or ()),
            trials=int(pick("trials", 1)),
            params=params,
            seed=int(pick("seed", 0)),
            budget=data.get("budget"),
            budget_factor=float(pick("budget_factor", DEFAULT_BUDGET_FACTOR)),
            jobs=int(pick("jobs", 1)),
            output=Path(data["output"]) if data.get("output") else None,
            history_mode=pick("history_mode", HistoryMode.EXACT.value),
            summary_json=Path(data["summary_json"]) if data.get("summary_json") else None,
            wallclock=bool(pick("wallclock", False)),
            label=data.get("label") or "",
        )
    except (TypeError, ValueError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"Некорректная конфигурация эксперимента: {e}") from e
