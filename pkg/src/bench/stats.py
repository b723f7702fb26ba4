"""
Сводная статистика по испытаниям и проверки эмпирических законов роста.
"""
import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from src.bench.runner import TrialRecord

logger = logging.getLogger(__name__)

# Допуск на отношение медиан сверх роста n ln n
DEFAULT_SLACK = 1.25
# Минимальная доля успехов, при которой медианам можно доверять
MIN_SUCCESS_RATE = 0.9


def lower_median(values: Sequence[float]) -> float:
    """Нижняя медиана: для четного числа значений берется меньшая из двух средних."""
    return float(np.percentile(np.asarray(values), 50, method="lower"))


def lower_quantile(values: Sequence[float], q: float) -> float:
    """Квантиль q (в процентах) по нижнему соглашению."""
    return float(np.percentile(np.asarray(values), q, method="lower"))


@dataclass(frozen=True)
class ScalingSummary:
    """
    Сводка по одной группе (алгоритм, функция, n).

    Медианы и квартили вычислений считаются только по успешным
    испытаниям; при отсутствии успехов они равны None.

    Attributes:
        algorithm: Имя алгоритма.
        function: Имя функции.
        n: Размер задачи.
        trials: Число испытаний.
        successes: Число успешных испытаний.
        success_rate: successes / trials.
        median: Нижняя медиана вычислений.
        q1: Нижний квартиль вычислений.
        q3: Верхний квартиль вычислений.
        ratio: median / (n ln n).
        median_iterations: Медиана итераций по всем испытаниям.
        failures: Число неудач по причинам.
        max_iterations: Наибольшее число итераций среди испытаний.
        median_footprint: Медиана пикового числа ячеек историй (None, если
                          алгоритм его не сообщает).
    """

    algorithm: str
    function: str
    n: int
    trials: int
    successes: int
    success_rate: float
    median: float | None
    q1: float | None
    q3: float | None
    ratio: float | None
    median_iterations: float
    failures: dict[str, int] = field(default_factory=dict)
    max_iterations: int = 0
    median_footprint: float | None = None

    @property
    def key(self) -> tuple[str, str, int]:
        """Ключ группы (алгоритм, функция, n)."""
        return self.algorithm, self.function, self.n

    @property
    def iqr(self) -> float | None:
        """Межквартильный размах вычислений."""
        if self.q1 is None or self.q3 is None:
            return None
        return self.q3 - self.q1


def _summarize_group(records: Sequence[TrialRecord]) -> ScalingSummary:
    first = records[0]
    evaluations = [r.evaluations for r in records if r.success]
    successes = len(evaluations)
    median = lower_median(evaluations) if evaluations else None
    n_log_n = first.n * math.log(first.n) if first.n > 1 else None
    footprints = [r.footprint for r in records if r.footprint is not None]
    return ScalingSummary(
        algorithm=first.algorithm,
        function=first.function,
        n=first.n,
        trials=len(records),
        successes=successes,
        success_rate=successes / len(records),
        median=median,
        q1=lower_quantile(evaluations, 25) if evaluations else None,
        q3=lower_quantile(evaluations, 75) if evaluations else None,
        ratio=median / n_log_n if median is not None and n_log_n else None,
        median_iterations=lower_median([r.iterations for r in records]),
        failures=dict(sorted(Counter(r.failure_kind for r in records if not r.success).items())),
        max_iterations=max(r.iterations for r in records),
        median_footprint=lower_median(footprints) if footprints else None,
    )


def summarize(records: Iterable[TrialRecord]) -> list[ScalingSummary]:
    """
    Сводка по каждой группе (алгоритм, функция, n), отсортированная по ключу.

    Raises:
        ValueError: если записей нет.
    """
    groups: dict[tuple, list[TrialRecord]] = defaultdict(list)
    for record in records:
        groups[(record.algorithm, record.function, record.n)].append(record)
    if not groups:
        raise ValueError("Нет записей для сводки")
    summaries = [_summarize_group(groups[key]) for key in sorted(groups)]
    for s in summaries:
        logger.info(
            "%s/%s n=%d: успехов %d/%d, медиана %s, r(n)=%s",
            s.algorithm, s.function, s.n, s.successes, s.trials,
            "-" if s.median is None else f"{s.median:.0f}",
            "-" if s.ratio is None else f"{s.ratio:.3f}",
        )
    return summaries


class VerdictStatus(str, Enum):
    """Статус проверки."""

    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    """Итог одной проверки: название, статус, измеренное значение и граница."""

    name: str
    status: VerdictStatus
    value: float | None = None
    bound: float | None = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        """Пройдена ли проверка."""
        return self.status is VerdictStatus.PASS


def _log_verdict(verdict: Verdict) -> Verdict:
    level = logging.WARNING if verdict.status is VerdictStatus.INCONCLUSIVE else logging.INFO
    logger.log(
        level, "Проверка %s: %s (значение=%s, граница=%s) %s",
        verdict.name, verdict.status.value, verdict.value, verdict.bound, verdict.detail,
    )
    return verdict


def scaling_bound(n_small: int, n_large: int, slack: float = DEFAULT_SLACK) -> float:
    """
    Допустимое отношение медиан для роста n ln n с допуском.

    Для n_large = 2 n_small это 2 ln(2n) / ln(n) * slack.

    Raises:
        ValueError: если n_small < 2 (n ln n = 0).
    """
    if n_small < 2:
        raise ValueError(f"Граница определена только для n >= 2, получено n={n_small}")
    return (n_large * math.log(n_large)) / (n_small * math.log(n_small)) * slack


def check_scaling(small: ScalingSummary, large: ScalingSummary, slack: float = DEFAULT_SLACK) -> Verdict:
    """
    Проверяет, что медиана растет не быстрее n ln n (с допуском slack).

    Если у любого из размеров доля успехов меньше 0.9, вердикт -
    inconclusive.
    """
    name = f"scaling {small.algorithm}/{small.function} n={small.n}->{large.n}"
    if small.n < 2:
        # n ln n обращается в 0 при n = 1: отношение не определено
        return _log_verdict(Verdict(name, VerdictStatus.INCONCLUSIVE, detail="n ln n = 0 при n = 1"))
    if min(small.success_rate, large.success_rate) < MIN_SUCCESS_RATE or small.median is None or large.median is None:
        return _log_verdict(Verdict(name, VerdictStatus.INCONCLUSIVE, detail="недостаточно успешных испытаний"))
    ratio = large.median / small.median
    bound = scaling_bound(small.n, large.n, slack)
    status = VerdictStatus.PASS if ratio <= bound else VerdictStatus.FAIL
    return _log_verdict(Verdict(name, status, round(ratio, 4), round(bound, 4)))


def check_success_rate(summary: ScalingSummary, minimum: float) -> Verdict:
    """Доля успешных испытаний должна быть не меньше minimum."""
    name = f"success {summary.algorithm}/{summary.function} n={summary.n}"
    status = VerdictStatus.PASS if summary.success_rate >= minimum else VerdictStatus.FAIL
    return _log_verdict(Verdict(name, status, summary.success_rate, minimum))


def check_failure_rate(summary: ScalingSummary, minimum: float) -> Verdict:
    """Доля запусков, не нашедших оптимум, должна быть не меньше minimum."""
    name = f"failure {summary.algorithm}/{summary.function} n={summary.n}"
    rate = 1.0 - summary.success_rate
    status = VerdictStatus.PASS if rate >= minimum else VerdictStatus.FAIL
    return _log_verdict(Verdict(name, status, rate, minimum, detail=str(summary.failures)))


def check_median_agreement(first: ScalingSummary, second: ScalingSummary, factor: float = 2.0) -> Verdict:
    """Медианы двух групп отличаются не более чем в `factor` раз."""
    name = f"agreement {first.function}~{second.function} n={first.n}"
    if first.median is None or second.median is None:
        return _log_verdict(Verdict(name, VerdictStatus.INCONCLUSIVE, detail="нет успешных испытаний"))
    ratio = max(first.median, second.median) / min(first.median, second.median)
    status = VerdictStatus.PASS if ratio <= factor else VerdictStatus.FAIL
    return _log_verdict(Verdict(name, status, round(ratio, 4), factor))


def check_growth(values: Sequence[float], factor: float = 2.0, name: str = "growth") -> Verdict:
    """
    Каждое следующее значение больше предыдущего хотя бы в `factor` раз.

    Используется для времени выхода частоты из интервала при удвоении 1/rho.
    """
    if len(values) < 2 or any(v <= 0 for v in values):
        return _log_verdict(Verdict(name, VerdictStatus.INCONCLUSIVE, detail=f"значения {list(values)}"))
    worst = min(b / a for a, b in zip(values, values[1:]))
    status = VerdictStatus.PASS if worst >= factor else VerdictStatus.FAIL
    return _log_verdict(Verdict(name, status, round(worst, 4), factor, detail=f"медианы {list(values)}"))


def check_footprint(summary: ScalingSummary, bound: float) -> Verdict:
    """Медиана пикового числа ячеек историй не превышает bound."""
    name = f"footprint {summary.algorithm}/{summary.function} n={summary.n}"
    if summary.median_footprint is None:
        return _log_verdict(Verdict(name, VerdictStatus.INCONCLUSIVE, detail="объем историй не измерялся"))
    status = VerdictStatus.PASS if summary.median_footprint <= bound else VerdictStatus.FAIL
    return _log_verdict(Verdict(name, status, summary.median_footprint, bound))
