import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Any, Iterator

from src.bench.config import ExperimentConfig
from src.eda.algorithms import resolve_params, run_algorithm
from src.eda.fitness import get_function
from src.eda.rng import derive_seed
from src.utils.logging import setup_logging
from src.utils.timing import Stopwatch, timeit_sync

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrialSpec:
    """Задание на одно испытание; передается в процесс пула."""

    algorithm: str
    function: str
    n: int
    params: dict[str, Any]
    seed: int
    budget: int
    trial: int
    wallclock: bool = False


@dataclass(frozen=True)
class TrialRecord:
    """
    Результат одного испытания (одна строка CSV).

    Attributes:
        algorithm: Имя алгоритма.
        function: Имя функции.
        n: Размер задачи.
        params: Снимок параметров алгоритма.
        seed: Зерно испытания.
        evaluations: Вычисления фитнеса до первого оптимума (или до остановки).
        iterations: Итерации (поколения для CSA).
        success: Найден ли оптимум.
        failure_kind: Причина неудачи или None.
        wallclock_ms: Время испытания в миллисекундах (None, если не измерялось).
        trial: Номер испытания внутри размера.
        footprint: Пиковое число ячеек историй (только sig-cGA); в CSV не
                   пишется и попадает только в сводку.
    """

    algorithm: str
    function: str
    n: int
    params: dict[str, Any]
    seed: int
    evaluations: int
    iterations: int
    success: bool
    failure_kind: str | None
    wallclock_ms: float | None = None
    trial: int = 0
    footprint: int | None = None

    def __post_init__(self):
        if self.success == (self.failure_kind is not None):
            raise ValueError("Успех и причина неудачи взаимоисключающие")

    @property
    def params_json(self) -> str:
        return json.dumps(self.params, sort_keys=True, separators=(",", ":"))

    @property
    def sort_key(self) -> tuple:
        return self.algorithm, self.function, self.n, self.trial

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def init_worker(log_level: str) -> None:
    """Инициализатор процесса пула: настраивает логирование в дочернем процессе."""
    setup_logging(level=log_level, worker=True)


def run_trial(spec: TrialSpec) -> TrialRecord:
    """
    Выполняет одно испытание.

    Функция верхнего уровня, чтобы ее можно было передать в пул процессов.
    """
    f = get_function(spec.function, spec.n)
    with Stopwatch() as watch:
        result = run_algorithm(spec.algorithm, f, spec.params, spec.budget, spec.seed)
    record = TrialRecord(
        algorithm=spec.algorithm,
        function=spec.function,
        n=spec.n,
        params=spec.params,
        seed=spec.seed,
        evaluations=result.evaluations,
        iterations=result.iterations,
        success=result.success,
        failure_kind=result.failure_kind.value if result.failure_kind is not None else None,
        wallclock_ms=round(watch.elapsed_ms, 3) if spec.wallclock else None,
        trial=spec.trial,
        footprint=result.peak_footprint,
    )
    logger.debug(
        "%s/%s n=%d испытание %d: success=%s evaluations=%d",
        spec.algorithm, spec.function, spec.n, spec.trial, record.success, record.evaluations,
    )
    return record


def iter_trials(cfg: ExperimentConfig) -> Iterator[TrialSpec]:
    """
    Задания на все испытания серии.

    Зерно испытания выводится из (главное зерно, n, номер испытания),
    поэтому не зависит ни от других размеров, ни от порядка выполнения.
    """
    for n in cfg.sizes:
        params = resolve_params(cfg.algorithm, n, cfg.overrides())
        budget = cfg.budget_for(n)
        for trial in range(cfg.trials):
            yield TrialSpec(
                algorithm=cfg.algorithm,
                function=cfg.function,
                n=n,
                params=params,
                seed=derive_seed(cfg.seed, n, trial),
                budget=budget,
                trial=trial,
                wallclock=cfg.wallclock,
            )


@timeit_sync
def run_experiment(cfg: ExperimentConfig) -> list[TrialRecord]:
    """
    Запускает серию испытаний trials x sizes.

    При jobs > 1 испытания распределяются по пулу процессов. Результаты
    сортируются по (алгоритм, функция, n, номер испытания), так что
    порядок и содержимое не зависят от числа процессов.

    Args:
        cfg: Конфигурация серии.

    Returns:
        Список записей TrialRecord.

    Raises:
        ConfigError: неизвестный алгоритм, функция или недопустимые параметры.
    """
    get_function(cfg.function, cfg.sizes[0])
    specs = list(iter_trials(cfg))
    jobs = min(cfg.jobs, len(specs), os.cpu_count() or 1)
    logger.info(
        "Серия %s: %s/%s, размеры %s, испытаний %d, процессов %d",
        cfg.label or "-", cfg.algorithm, cfg.function, list(cfg.sizes), cfg.trials, jobs,
    )

    if jobs <= 1:
        records = [run_trial(spec) for spec in specs]
    else:
        log_level = logging.getLevelName(logging.getLogger().getEffectiveLevel())
        with ProcessPoolExecutor(max_workers=jobs, initializer=init_worker, initargs=(log_level,)) as executor:
            records = list(executor.map(run_trial, specs, chunksize=max(1, len(specs) // (jobs * 4))))

    records.sort(key=lambda r: r.sort_key)
    successes = sum(r.success for r in records)
    logger.info("Серия %s завершена: успехов %d из %d", cfg.label or "-", successes, len(records))
    return records
