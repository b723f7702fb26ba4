"""
Встроенные наборы экспериментов с проверками их результатов.

Каждый пресет - это одна или несколько серий испытаний и функция,
превращающая сводки серий в список вердиктов. Размеры, число испытаний,
зерно, бюджет и число процессов можно переопределить для быстрых прогонов.
"""
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

from src.bench.config import ExperimentConfig
from src.bench.runner import TrialRecord, run_experiment
from src.bench.stats import (
    ScalingSummary,
    Verdict,
    check_failure_rate,
    check_footprint,
    check_growth,
    check_median_agreement,
    check_scaling,
    check_success_rate,
    summarize,
)
from src.bench.storage import emit_csv, write_summary_json
from src.eda.algorithms.csa import default_mu
from src.eda.errors import ConfigError
from src.utils.monitoring import log_resource_usage

logger = logging.getLogger(__name__)

SIG_FUNCTIONS = ("onemax", "leadingones", "binval")
TABLE1_SIZES = (50, 100, 200, 400)
TABLE1_TRIALS = 30
TABLE1_MIN_SUCCESS = 29 / 30
STAGNATION_RHOS = (1 / 8, 1 / 16, 1 / 32)

Evaluator = Callable[[Sequence[list[ScalingSummary]]], list[Verdict]]


@dataclass(frozen=True)
class Preset:
    """
    Attributes:
        name: Имя пресета в CLI.
        description: Что проверяет пресет.
        experiments: Серии испытаний.
        evaluate: Вердикты по сводкам серий (в порядке `experiments`).
    """

    name: str
    description: str
    experiments: tuple[ExperimentConfig, ...]
    evaluate: Evaluator


@dataclass
class PresetOutcome:
    name: str
    records: list[TrialRecord] = field(default_factory=list)
    summaries: list[ScalingSummary] = field(default_factory=list)
    verdicts: list[Verdict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.verdicts) and all(v.passed for v in self.verdicts)


def _sizes_verdicts(summaries: list[ScalingSummary], min_success: float) -> list[Verdict]:
    verdicts = [check_success_rate(s, min_success) for s in summaries]
    verdicts += [check_scaling(a, b) for a, b in zip(summaries, summaries[1:])]
    return verdicts


def _table1_verdicts(groups: Sequence[list[ScalingSummary]]) -> list[Verdict]:
    verdicts: list[Verdict] = []
    by_function: dict[str, list[ScalingSummary]] = {}
    for summaries in groups:
        verdicts += _sizes_verdicts(summaries, TABLE1_MIN_SUCCESS)
        by_function[summaries[0].function] = summaries
    for binval, leading in zip(by_function.get("binval", []), by_function.get("leadingones", [])):
        verdicts.append(check_median_agreement(binval, leading))
    return verdicts


def condensed_footprint_bound(n: int, iterations: int) -> float:
    """
    Верхняя граница числа блоков сжатых историй n позиций.

    Каждый размер блока 2^j встречается не более двух раз, а 2^j не
    превосходит длины истории, которая не больше числа итераций.
    """
    return n * 2 * (math.floor(math.log2(max(iterations, 1))) + 1)


def _condensed_verdicts(groups: Sequence[list[ScalingSummary]]) -> list[Verdict]:
    verdicts = _sizes_verdicts(groups[0], TABLE1_MIN_SUCCESS)
    verdicts += [check_footprint(s, condensed_footprint_bound(s.n, s.max_iterations)) for s in groups[0]]
    return verdicts


def _success_verdicts(groups: Sequence[list[ScalingSummary]]) -> list[Verdict]:
    return [check_success_rate(s, 0.9) for summaries in groups for s in summaries]


def _failure_verdicts(groups: Sequence[list[ScalingSummary]]) -> list[Verdict]:
    return [check_failure_rate(s, 0.9) for summaries in groups for s in summaries]


def _stagnation_verdicts(groups: Sequence[list[ScalingSummary]]) -> list[Verdict]:
    # группы идут по убыванию rho; для каждого n сравниваются медианы итераций
    verdicts = []
    for index, first in enumerate(groups[0]):
        medians = [summaries[index].median_iterations for summaries in groups]
        verdicts.append(check_growth(medians, 2.0, name=f"stagnation scga/{first.function} n={first.n}"))
    return verdicts


def _table1() -> Preset:
    experiments = tuple(
        ExperimentConfig(
            algorithm="sigcga",
            function=function,
            sizes=TABLE1_SIZES,
            trials=TABLE1_TRIALS,
            params={"epsilon": 13.0},
            budget_factor=200.0,
            label=f"table1-sigcga/{function}",
        )
        for function in SIG_FUNCTIONS
    )
    return Preset("table1-sigcga", "sig-cGA: рост n ln n на OneMax, LeadingOnes и BinVal", experiments, _table1_verdicts)


def _condensed() -> Preset:
    experiment = ExperimentConfig(
        algorithm="sigcga",
        function="leadingones",
        sizes=TABLE1_SIZES,
        trials=TABLE1_TRIALS,
        params={"epsilon": 13.0},
        budget_factor=200.0,
        history_mode="condensed",
        label="sigcga-condensed/leadingones",
    )
    return Preset("sigcga-condensed", "sig-cGA со сжатой историей: тот же рост на LeadingOnes", (experiment,), _condensed_verdicts)


def _scga_leadingones() -> Preset:
    experiment = ExperimentConfig(
        algorithm="scga",
        function="leadingones",
        sizes=(50, 100),
        trials=30,
        budget=10**6,
        label="scga-leadingones",
    )
    return Preset("scga-leadingones", "scGA находит оптимум LeadingOnes", (experiment,), _success_verdicts)


def _scga_stagnation() -> Preset:
    experiments = tuple(
        ExperimentConfig(
            algorithm="scga",
            function="onemax",
            sizes=(200,),
            trials=30,
            params={"rho": rho, "a": rho / 2, "d": 5 / 6, "stop_on_leave": True},
            budget=4 * 10**6,
            label=f"scga-onemax-stagnation/rho=1/{round(1 / rho)}",
        )
        for rho in STAGNATION_RHOS
    )
    return Preset(
        "scga-onemax-stagnation",
        "scGA на OneMax: время выхода частоты из (1-d, d) растет экспоненциально по 1/rho",
        experiments,
        _stagnation_verdicts,
    )


def _csa_leadingones() -> Preset:
    experiment = ExperimentConfig(
        algorithm="csa",
        function="leadingones",
        sizes=(50,),
        trials=20,
        params={"restart": True},
        budget=10**6,
        label="csa-leadingones",
    )
    return Preset("csa-leadingones", "CSA с перезапусками находит оптимум LeadingOnes", (experiment,), _success_verdicts)


def _csa_onemax_failure() -> Preset:
    n = 100
    experiment = ExperimentConfig(
        algorithm="csa",
        function="onemax",
        sizes=(n,),
        trials=30,
        params={"restart": False},
        # 10^5 поколений по mu вычислений
        budget=10**5 * default_mu(n),
        label="csa-onemax-failure",
    )
    return Preset("csa-onemax-failure", "CSA без перезапусков не находит оптимум OneMax", (experiment,), _failure_verdicts)


PRESETS: dict[str, Callable[[], Preset]] = {
    "table1-sigcga": _table1,
    "sigcga-condensed": _condensed,
    "scga-leadingones": _scga_leadingones,
    "scga-onemax-stagnation": _scga_stagnation,
    "csa-leadingones": _csa_leadingones,
    "csa-onemax-failure": _csa_onemax_failure,
}


def get_preset(name: str) -> Preset:
    """
    Raises:
        ConfigError: если пресет неизвестен.
    """
    factory = PRESETS.get(name)
    if factory is None:
        raise ConfigError(f"Неизвестный пресет {name!r}; доступны: {', '.join(PRESETS)}")
    return factory()


def _adapt(cfg: ExperimentConfig, overrides: dict[str, Any]) -> ExperimentConfig:
    changes = {k: v for k, v in overrides.items() if v is not None}
    sizes = changes.pop("sizes", None)
    if sizes:
        changes["sizes"] = tuple(sizes)
        if cfg.budget is not None and cfg.algorithm == "csa" and not cfg.params.get("restart", True):
            # бюджет в поколениях сохраняется при смене размера
            changes.setdefault("budget", 10**5 * default_mu(max(sizes)))
    return cfg.with_overrides(**changes)


def run_preset(
    name: str,
    overrides: dict[str, Any] | None = None,
    output: str | Path | None = None,
    summary_json: str | Path | None = None,
    include_wallclock: bool = False,
) -> PresetOutcome:
    """
    Выполняет пресет: все серии, сводки, вердикты и артефакты.

    Args:
        name: Имя пресета.
        overrides: Замены полей ExperimentConfig (sizes, trials, seed, budget, jobs).
        output: Путь к CSV со всеми испытаниями пресета.
        summary_json: Путь к JSON со сводками и вердиктами.
        include_wallclock: Писать ли время испытаний в CSV.

    Returns:
        PresetOutcome; `passed` истинно, только если все вердикты pass.

    Raises:
        ConfigError: неизвестный пресет или недопустимые замены.
        OSError: ошибка записи артефактов.
    """
    preset = get_preset(name)
    logger.info("Пресет %s: %s", preset.name, preset.description)
    outcome = PresetOutcome(name)
    groups: list[list[ScalingSummary]] = []
    for cfg in preset.experiments:
        cfg = _adapt(cfg, {**(overrides or {}), "wallclock": include_wallclock or None})
        records = run_experiment(cfg)
        outcome.records.extend(records)
        groups.append(summarize(records))
    outcome.summaries = [s for summaries in groups for s in summaries]
    outcome.verdicts = preset.evaluate(groups)

    if output:
        emit_csv(outcome.records, output, include_wallclock)
    if summary_json:
        write_summary_json(outcome.summaries, outcome.verdicts, summary_json)
    log_resource_usage(preset.name)
    logger.info("Пресет %s: %s", preset.name, "PASS" if outcome.passed else "FAIL")
    return outcome

