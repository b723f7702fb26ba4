import math

import numpy as np
import pytest

from src.eda.errors import ConfigError, InvalidFrequencyError
from src.eda.history import CondensedHistory, ExactHistory, ExactHistoryBank, HistoryList
from src.eda.significance import (
    Level,
    SignificanceParams,
    Verdict,
    check_history,
    check_positions,
    count_false_significances,
    sig,
    threshold,
)


def _history(bits, cls=ExactHistory):
    history = cls()
    for bit in bits:
        history.append(bit)
    return history


def test_threshold_examples():
    """
    Тестирует порог значимости на примерах.

    При mu = 0 порог равен eps * ln n; при mu = ln n обе ветви максимума
    совпадают; при eps = 13, mu = 1024, n = 100 порог около 892.7.
    """
    assert threshold(1.0, 0.0, 50) == pytest.approx(math.log(50))
    assert threshold(7.0, math.log(100), 100) == pytest.approx(7.0 * math.log(100))
    assert threshold(13.0, 1024.0, 100) == pytest.approx(892.7, abs=0.1)


def test_threshold_requires_n_at_least_two():
    with pytest.raises(ConfigError):
        threshold(13.0, 1.0, 1)


@pytest.mark.parametrize("tau", [0.5, 0.01, 0.99])
def test_empty_history_stays(sig_params: SignificanceParams, tau: float):
    """Пустая история дает stay при любой допустимой частоте."""
    assert sig(tau, ExactHistory(), sig_params).value is Verdict.STAY


def test_sig_up_at_half(sig_params: SignificanceParams):
    """
    При tau = 1/2 история из 2048 единиц дает up ровно на длине 2048.

    Граница 1024 + 892.7 достигается только на полной длине; на длине
    1024 нужно около 1143 единиц.
    """
    verdict = sig(0.5, _history([1] * 2048), sig_params)
    assert verdict.value is Verdict.UP
    assert verdict.triggering_length == 2048
    assert sig(0.5, _history([1] * 2047), sig_params).value is Verdict.STAY


def test_sig_down_at_half(sig_params: SignificanceParams):
    """Симметричный случай: 2048 нулей при tau = 1/2 дают down."""
    verdict = sig(0.5, _history([0] * 2048), sig_params)
    assert verdict.value is Verdict.DOWN
    assert verdict.triggering_length == 2048


@pytest.mark.parametrize("ones, expected", [(147, Verdict.UP), (146, Verdict.STAY)])
def test_sig_up_at_low(sig_params: SignificanceParams, ones: int, expected: Verdict):
    """
    При tau = 1/n суффикс длины 2048 со 147 единицами дает up
    (граница 20.48 + 13 * sqrt(20.48 ln 100) около 146.7), а 146 - нет.

    Единицы стоят в начале, так что более короткие суффиксы их не содержат.
    """
    bits = [1] * ones + [0] * (2048 - ones)
    assert sig(0.01, _history(bits), sig_params).value is expected


def test_sig_down_at_high(sig_params: SignificanceParams):
    """Симметрично для tau = 1 - 1/n: избыток нулей дает down."""
    bits = [0] * 147 + [1] * (2048 - 147)
    assert sig(0.99, _history(bits), sig_params).value is Verdict.DOWN


def test_sig_extreme_levels_ignore_wrong_direction(sig_params: SignificanceParams):
    """При tau = 1 - 1/n единицы ожидаемы и никогда не дают up."""
    assert sig(0.99, _history([1] * 4096), sig_params).value is Verdict.STAY
    assert sig(0.01, _history([0] * 4096), sig_params).value is Verdict.STAY


def test_sig_invalid_frequency(sig_params: SignificanceParams):
    with pytest.raises(InvalidFrequencyError):
        sig(0.3, ExactHistory(), sig_params)


def test_sig_condensed_uses_effective_length(sig_params: SignificanceParams):
    """Сжатая история дает тот же вердикт на однородном потоке."""
    verdict = sig(0.5, _history([1] * 2048, CondensedHistory), sig_params)
    assert verdict.value is Verdict.UP


def test_single_position_never_significant():
    """При n = 1 порог не определен, и проверка всегда возвращает stay."""
    params = SignificanceParams(13.0, 1)
    assert sig(0.5, _history([1] * 64), params).value is Verdict.STAY


def test_count_false_significances_matches_loop(sig_params: SignificanceParams):
    """
    Векторный подсчет срабатываний совпадает с циклом
    "добавить бит, проверить значимость" без сбросов.
    """
    params = SignificanceParams(1.0, 100)
    rng = np.random.default_rng(7)
    bits = (rng.random(600) < 0.6).astype(np.uint8)
    history = ExactHistory()
    expected = 0
    for bit in bits.tolist():
        history.append(bit)
        if sig(0.5, history, params).value is not Verdict.STAY:
            expected += 1
    assert count_false_significances(bits, Level.MID, params) == expected
    assert expected > 0


def test_no_false_significance_on_unbiased_streams(sig_params: SignificanceParams):
    """
    На несмещенных потоках Bernoulli(tau) при eps = 13 срабатываний нет.

    Args:
        sig_params: Фикстура с параметрами n = 100, eps = 13.
    """
    rng = np.random.default_rng(2024)
    for level in Level:
        tau = sig_params.frequency(level)
        for _ in range(5):
            bits = (rng.random(20_000) < tau).astype(np.uint8)
            assert count_false_significances(bits, level, sig_params) == 0


def test_small_epsilon_warns(caplog):
    """epsilon <= 12 допустим, но сопровождается предупреждением."""
    with caplog.at_level("WARNING"):
        SignificanceParams(5.0, 100)
    assert "epsilon" in caplog.text


@pytest.mark.parametrize("rare", [False, True])
def test_vector_limits_equal_scalar(sig_params: SignificanceParams, rare: bool):
    """Векторные границы побитно совпадают со скалярными."""
    lengths = np.arange(0, 5000)
    vector = sig_params.limits(lengths, rare)
    assert vector.tolist() == [sig_params.limit(int(length), rare) for length in lengths]


_VERDICT_CODES = {Verdict.UP: 1, Verdict.DOWN: -1, Verdict.STAY: 0}


@pytest.mark.parametrize("n", [2, 3, 16])
@pytest.mark.parametrize("mode", ["exact", "condensed"])
def test_check_positions_matches_check_history(rng, n: int, mode: str):
    """
    Векторная проверка всех позиций совпадает с поштучной `check_history`
    при случайных уровнях, смещенных потоках и сбросах историй.
    """
    params = SignificanceParams(0.5, n)
    if mode == "exact":
        bank = ExactHistoryBank(n)
        histories = [ExactHistory() for _ in range(n)]
    else:
        bank = HistoryList(n)
        histories = [bank[i] for i in range(n)]
    bias = rng.random(n)
    triggered = 0
    for t in range(400):
        bits = (rng.random(n) < bias).astype(np.uint8)
        bank.append(bits)
        if mode == "exact":
            for history, bit in zip(histories, bits.tolist()):
                history.append(bit)
        levels = rng.integers(-1, 2, n).astype(np.int8)
        verdicts = check_positions(levels, bank, params)
        expected = [_VERDICT_CODES[check_history(Level(int(level)), h, params).value] for level, h in zip(levels, histories)]
        assert verdicts.tolist() == expected
        moved = np.flatnonzero(verdicts)
        triggered += moved.size
        if moved.size and t % 3 == 0:
            bank.reset(moved)
            if mode == "exact":
                for i in moved.tolist():
                    histories[i].reset()
    assert triggered > 0


def test_check_positions_single_position():
    params = SignificanceParams(13.0, 1)
    bank = ExactHistoryBank(1)
    for _ in range(64):
        bank.append(np.ones(1, dtype=np.uint8))
    assert check_positions(np.zeros(1, dtype=np.int8), bank, params).tolist() == [0]


def test_up_and_down_are_exclusive_at_half(sig_params: SignificanceParams):
    """
    При tau = 1/2 избыток единиц и избыток нулей не могут выполняться
    одновременно ни для какой длины окна: граница всегда больше L/2.
    """
    lengths = np.arange(1, 4097)
    limits = sig_params.limits(lengths, rare=False)
    assert np.all(2 * limits > lengths)
    for length in range(1, 257):
        ones = np.arange(length + 1)
        bound = sig_params.limit(length, rare=False)
        assert not np.any((ones >= bound) & (length - ones >= bound))


def _flip_zeros(bits: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    zeros = np.flatnonzero(bits == 0)
    flipped = bits.copy()
    flipped[rng.choice(zeros, size=min(count, zeros.size), replace=False)] = 1
    return flipped


@pytest.mark.parametrize("count", [1, 10, 2048])
def test_up_is_monotone_at_low(sig_params: SignificanceParams, rng, count: int):
    """
    tau = 1/n: 147 единиц в начале истории из 2048 битов дают up на длине
    2048; замена любых нулей этого окна на единицы сохраняет up.
    """
    bits = np.zeros(2048, dtype=np.uint8)
    bits[:147] = 1
    base = sig(sig_params.low, _history(bits.tolist()), sig_params)
    assert base.value is Verdict.UP
    assert base.triggering_length == 2048
    flipped = _flip_zeros(bits, count, rng)
    assert sig(sig_params.low, _history(flipped.tolist()), sig_params).value is Verdict.UP


@pytest.mark.parametrize("count", [1, 10, 131])
def test_up_is_monotone_at_half(sig_params: SignificanceParams, rng, count: int):
    """
    tau = 1/2: 1917 единиц, случайно расставленных среди 2048 битов, дают
    up только на длине 2048 (на меньших длинах граница больше длины окна);
    замена нулей на единицы сохраняет up.
    """
    bits = np.zeros(2048, dtype=np.uint8)
    bits[rng.choice(2048, size=1917, replace=False)] = 1
    base = sig(0.5, _history(bits.tolist()), sig_params)
    assert base.value is Verdict.UP
    assert base.triggering_length == 2048
    flipped = _flip_zeros(bits, count, rng)
    verdict = sig(0.5, _history(flipped.tolist()), sig_params)
    assert verdict.value is Verdict.UP
    assert verdict.triggering_length == 2048
