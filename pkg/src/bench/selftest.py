"""
Проверки свойств алгоритмов, не требующие длинных серий испытаний:
ложные срабатывания проверки значимости, корректность сжатой истории
и эквивариантность относительно перестановки позиций.
"""
import logging
from dataclasses import dataclass
from itertools import accumulate
from typing import Callable, Sequence

import numpy as np

from src.bench.stats import Verdict, VerdictStatus
from src.eda.algorithms.cga import CgaState, cga_step
from src.eda.algorithms.scga import ScgaParams, ScgaState, scga_step
from src.eda.algorithms.sig_cga import SigCgaState, sig_cga_step
from src.eda.fitness import get_function
from src.eda.history import Block, CondensedHistory
from src.eda.rng import PositionStreams, derive_seed
from src.eda.significance import Level, SignificanceParams, count_false_significances
from src.utils.timing import timeit_sync

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SelftestConfig:
    """
    Размеры проверок.

    Attributes:
        seed: Главное зерно.
        sig_n: n для проверки значимости.
        sig_epsilon: epsilon для проверки значимости.
        sig_length: Длина потока битов k.
        sig_repetitions: Повторов на каждый уровень частоты.
        oracle_streams: Число случайных потоков для сжатой истории.
        oracle_max_length: Максимальная длина потока.
        permutations: Число случайных перестановок.
        equivariance_n: n для проверки эквивариантности.
        equivariance_steps: Итераций в каждой проверке.
    """

    seed: int = 0
    sig_n: int = 100
    sig_epsilon: float = 13.0
    sig_length: int = 10**5
    sig_repetitions: int = 100
    oracle_streams: int = 1000
    oracle_max_length: int = 10**4
    permutations: int = 10
    equivariance_n: int = 20
    equivariance_steps: int = 10**3


def check_false_significance(cfg: SelftestConfig) -> Verdict:
    """
    На несмещенных потоках Bernoulli(tau) проверка значимости не должна
    срабатывать ни разу: для tau из {1/2, 1/n, 1 - 1/n} прогоняется
    `sig_repetitions` потоков длины `sig_length`.
    """
    params = SignificanceParams(cfg.sig_epsilon, cfg.sig_n)
    hits = 0
    for level in (Level.MID, Level.LOW, Level.HIGH):
        tau = params.frequency(level)
        for rep in range(cfg.sig_repetitions):
            rng = np.random.default_rng(derive_seed(cfg.seed, "false-significance", int(level), rep))
            bits = (rng.random(cfg.sig_length) < tau).astype(np.uint8)
            found = count_false_significances(bits, level, params)
            if found:
                logger.warning("Ложная значимость: tau=%.4f, повтор %d, срабатываний %d", tau, rep, found)
            hits += found
    status = VerdictStatus.PASS if hits == 0 else VerdictStatus.FAIL
    return Verdict("false-significance", status, hits, 0)


def tail_consistent(blocks: Sequence[Block], prefix: Sequence[int], t: int) -> bool:
    """
    Локальная проверка последних блоков сжатой истории длины t.

    Последний блок имеет размер 1, соседние размеры равны или отличаются
    вдвое (более ранний больше), трех равных подряд нет, а единицы
    каждого блока совпадают с наивным пересчетом по префиксным суммам.
    """
    if not blocks or blocks[-1].span != 1:
        return False
    for early, late in zip(blocks, blocks[1:]):
        if early.span not in (late.span, 2 * late.span):
            return False
    for a, b, c in zip(blocks, blocks[1:], blocks[2:]):
        if a.span == b.span == c.span:
            return False
    end = t
    for block in reversed(blocks):
        start = end - block.span
        if start < 0 or not 0 <= block.ones <= block.span or block.ones != prefix[end] - prefix[start]:
            return False
        end = start
    return True


def _query_ok(history: CondensedHistory, prefix: Sequence[int], t: int, length: int, expected: int | None = None) -> bool:
    effective, ones = history.suffix_ones(length)
    if expected is not None and effective != expected:
        return False
    return length <= effective < 2 * length and effective <= t and ones == prefix[t] - prefix[t - effective]


def structure_consistent(history: CondensedHistory, prefix: Sequence[int], t: int) -> bool:
    """
    Полная проверка сжатой истории длины t против наивного пересчета.

    Кроме структурного инварианта проверяются все блоки целиком и запросы
    на обеих границах каждого блока: любая длина из (C_{k-1}, C_k], где
    C_k - сумма размеров k последних блоков, должна давать ровно C_k.
    """
    if not history.check_structure() or not tail_consistent(history.blocks, prefix, t):
        return False
    if sum(b.span for b in history.blocks) != t:
        return False
    covered = 0
    for block in reversed(history.blocks):
        boundary = covered + block.span
        for length in (covered + 1, boundary):
            if not _query_ok(history, prefix, t, length, expected=boundary):
                return False
        covered = boundary
    return True


def _condensed_stream_ok(bits: np.ndarray, rng: np.random.Generator) -> bool:
    history = CondensedHistory()
    prefix = list(accumulate(bits.tolist(), initial=0))
    for t, bit in enumerate(bits.tolist(), start=1):
        merges = history.append(bit)
        if len(history) != t or history.ones != prefix[t]:
            return False
        # слияния затрагивают только хвост: merges + 3 блока покрывают все измененные
        if not tail_consistent(history.tail(merges + 3), prefix, t):
            return False
        if not _query_ok(history, prefix, t, 1, expected=1):
            return False
        if not _query_ok(history, prefix, t, int(rng.integers(1, t + 1))):
            return False
        if ((t & (t - 1)) == 0 or t == len(bits)) and not structure_consistent(history, prefix, t):
            return False
    return True


def check_condensed_oracle(cfg: SelftestConfig) -> Verdict:
    """
    Сжатая история против наивного пересчета.

    После каждого добавления проверяются длина, общее число единиц, хвост
    блоков, измененный слияниями, запрос длины 1 и запрос случайной длины.
    На длинах 2^m и в конце потока история проверяется целиком.
    """
    rng = np.random.default_rng(derive_seed(cfg.seed, "condensed-oracle"))
    failures = 0
    for stream in range(cfg.oracle_streams):
        length = int(rng.integers(1, cfg.oracle_max_length + 1))
        bias = rng.random()
        bits = (rng.random(length) < bias).astype(np.uint8)
        if not _condensed_stream_ok(bits, rng):
            logger.warning("Сжатая история расходится с пересчетом на потоке %d (длина %d)", stream, length)
            failures += 1
    status = VerdictStatus.PASS if failures == 0 else VerdictStatus.FAIL
    return Verdict("condensed-oracle", status, failures, 0)


def _pairwise_factories(n: int) -> dict[str, tuple[Callable, Callable]]:
    scga_params = ScgaParams.defaults(n)
    return {
        "sigcga": (lambda seed, order: SigCgaState.create(n, 13.0, seed, order=order), sig_cga_step),
        "cga": (lambda seed, order: CgaState(0.1, np.full(n, 0.5), PositionStreams(seed, n, order)), cga_step),
        "scga": (
            lambda seed, order: ScgaState(scga_params, np.full(n, 0.5), PositionStreams(seed, n, order)),
            scga_step,
        ),
    }


def check_equivariance(cfg: SelftestConfig, function: str = "leadingones") -> Verdict:
    """
    Эквивариантность относительно перестановки позиций.

    Запуск A: функция f, подпотоки в естественном порядке. Запуск B:
    функция f(x[sigma]), позиция sigma[j] использует подпотоки позиции j.
    Траектория частот B, переставленная sigma, должна совпадать с A
    побитно на каждой итерации.
    """
    n = cfg.equivariance_n
    rng = np.random.default_rng(derive_seed(cfg.seed, "equivariance"))
    base = get_function(function, n)
    mismatches = 0
    for index in range(cfg.permutations):
        perm = rng.permutation(n)
        inverse = np.argsort(perm)
        permuted = get_function(function, n, perm)
        seed = derive_seed(cfg.seed, "equivariance", index)
        for name, (create, step) in _pairwise_factories(n).items():
            state_a = create(seed, None)
            state_b = create(seed, inverse)
            for iteration in range(cfg.equivariance_steps):
                step(state_a, base)
                step(state_b, permuted)
                if not np.array_equal(state_b.freq[perm], state_a.freq):
                    logger.warning("%s: траектории разошлись на итерации %d (перестановка %d)", name, iteration, index)
                    mismatches += 1
                    break
    status = VerdictStatus.PASS if mismatches == 0 else VerdictStatus.FAIL
    return Verdict("equivariance", status, mismatches, 0)


@timeit_sync
def run_selftest(cfg: SelftestConfig | None = None) -> list[Verdict]:
    """Выполняет все проверки свойств; вердикты в порядке выполнения."""
    cfg = cfg or SelftestConfig()
    verdicts = []
    for check in (check_false_significance, check_condensed_oracle, check_equivariance):
        verdict = check(cfg)
        logger.info("Самопроверка %s: %s (значение=%s)", verdict.name, verdict.status.value, verdict.value)
        verdicts.append(verdict)
    return verdicts
