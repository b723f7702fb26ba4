import numpy as np
import pytest

from src.eda.errors import ConfigError, HistoryQueryError
from src.eda.history import (
    Block,
    CondensedHistory,
    ExactHistory,
    ExactHistoryBank,
    HistoryList,
    HistoryMode,
    make_history,
    make_history_bank,
)


def _condensed(bits) -> CondensedHistory:
    history = CondensedHistory()
    for bit in bits:
        history.append(bit)
    return history


def _exact(bits) -> ExactHistory:
    history = ExactHistory()
    for bit in bits:
        history.append(bit)
    return history


def test_condensed_append_examples():
    """
    Тестирует правило слияния блоков на примерах.

    Одна единица - один блок (1, 1); три единицы - [(2, 2), (1, 1)];
    семь единиц - [(4, 4), (2, 2), (1, 1)].
    """
    assert _condensed([1]).blocks == (Block(1, 1),)
    assert _condensed([1, 1, 1]).blocks == (Block(2, 2), Block(1, 1))
    assert _condensed([1] * 7).blocks == (Block(4, 4), Block(2, 2), Block(1, 1))


def test_condensed_cascading_merge():
    """
    Слияние продолжается, пока в конце есть три блока одного размера.

    После 10 битов: [(4), (2), (2), (1), (1)]; одиннадцатый бит дает тройку
    единичных блоков, слияние - тройку двоек, затем тройку четверок нет.
    """
    history = _condensed([1] * 11)
    assert [b.span for b in history.blocks] == [4, 4, 2, 1]
    assert history.check_structure()
    assert len(history) == 11


@pytest.mark.parametrize("length, expected", [(2, 2), (4, 3)])
def test_exact_ones_in_suffix(length: int, expected: int):
    """Тестирует подсчет единиц в суффиксах точной истории 1, 0, 1, 1."""
    assert _exact([1, 0, 1, 1]).ones_in_suffix(length) == expected


def test_exact_single_zero():
    assert _exact([0]).ones_in_suffix(1) == 0


@pytest.mark.parametrize("length", [3, 8, 0])
def test_exact_invalid_length(length: int):
    """Длина не степень двойки или больше истории - ошибка."""
    with pytest.raises(HistoryQueryError):
        _exact([1, 0, 1, 1]).ones_in_suffix(length)


@pytest.mark.parametrize("length, expected", [(1, (1, 1)), (2, (3, 3)), (5, (7, 7))])
def test_condensed_block_suffix(length: int, expected: tuple[int, int]):
    """Тестирует запросы суффиксов для блоков [(4, 4), (2, 2), (1, 1)]."""
    assert _condensed([1] * 7).ones_in_block_suffix(length) == expected


@pytest.mark.parametrize("length", [0, 8])
def test_condensed_invalid_length(length: int):
    with pytest.raises(HistoryQueryError):
        _condensed([1] * 7).ones_in_block_suffix(length)


@pytest.mark.parametrize("mode", list(HistoryMode))
def test_reset(mode: HistoryMode):
    """
    Тестирует очистку истории обоих режимов.

    После очистки длина 0; повторная очистка ничего не меняет; после
    добавления единицы длина 1 и в суффиксе одна единица.
    """
    history = make_history(mode)
    for bit in [1, 0, 1, 1, 0]:
        history.append(bit)
    history.reset()
    assert len(history) == 0
    history.reset()
    assert len(history) == 0
    history.append(1)
    assert len(history) == 1
    assert history.suffix_ones(1) == (1, 1)


def test_append_rejects_non_bits():
    with pytest.raises(ValueError):
        ExactHistory().append(2)


def test_exact_matches_naive_recount(rng):
    """
    Скользящие суммы точной истории совпадают с наивным пересчетом
    после каждого добавления.

    Args:
        rng: Фикстура с генератором случайных чисел.
    """
    bits = rng.integers(0, 2, 300).tolist()
    history = ExactHistory()
    for t, bit in enumerate(bits, start=1):
        history.append(bit)
        span = 1
        while span <= t:
            assert history.ones_in_suffix(span) == sum(bits[t - span:t])
            span <<= 1


def test_condensed_matches_naive_recount(rng):
    """
    Сжатая история после каждого добавления соблюдает структурный
    инвариант, а любой запрос совпадает с наивным пересчетом при
    len <= effective_len < 2 * len.

    Args:
        rng: Фикстура с генератором случайных чисел.
    """
    for _ in range(3):
        bits = (rng.random(150) < rng.random()).astype(int).tolist()
        history = CondensedHistory()
        for t, bit in enumerate(bits, start=1):
            history.append(bit)
            assert history.check_structure()
            for length in range(1, t + 1):
                effective, ones = history.ones_in_block_suffix(length)
                assert length <= effective < 2 * length
                assert ones == sum(bits[t - effective:t])


def test_condensed_footprint_is_logarithmic():
    """Число блоков сжатой истории растет логарифмически, в отличие от точной."""
    bits = np.ones(4096, dtype=int).tolist()
    condensed = _condensed(bits)
    exact = _exact(bits)
    assert exact.footprint() == 4096
    assert condensed.footprint() <= 2 * 13


def test_make_history_unknown_mode():
    with pytest.raises(ConfigError):
        make_history("compressed")


def test_exact_bank_matches_per_position_histories(rng):
    """
    Векторный банк точных историй совпадает с отдельными историями
    позиций: длины, суммы всех окон 2^m и объем, в том числе после сбросов.
    """
    n = 7
    bank = ExactHistoryBank(n, capacity=4)
    histories = [ExactHistory() for _ in range(n)]
    bias = rng.random(n)
    for t in range(700):
        bits = (rng.random(n) < bias).astype(np.uint8)
        bank.append(bits)
        for history, bit in zip(histories, bits.tolist()):
            history.append(bit)
        if t % 37 == 36:
            positions = rng.choice(n, size=rng.integers(1, n + 1), replace=False)
            bank.reset(positions)
            for i in positions.tolist():
                histories[i].reset()
        assert bank.lengths.tolist() == [len(h) for h in histories]
        for i, history in enumerate(histories):
            span = 1
            while span <= len(history):
                assert bank.ones_in_suffix(i, span) == history.ones_in_suffix(span)
                span <<= 1
    assert bank.footprint() == sum(h.footprint() for h in histories)


def test_exact_bank_window_matches_queries(rng):
    n = 5
    bank = ExactHistoryBank(n)
    for _ in range(100):
        bank.append(rng.integers(0, 2, n))
    bank.reset([2])
    bank.append(np.ones(n, dtype=np.uint8))
    active = bank.lengths >= 64
    effective, ones = bank.window(64, active)
    assert effective == 64
    for i in np.flatnonzero(active).tolist():
        assert ones[i] == bank.ones_in_suffix(i, 64)
    assert not active[2]


def test_exact_bank_validation():
    bank = ExactHistoryBank(3)
    with pytest.raises(ValueError):
        bank.append(np.array([0, 1]))
    with pytest.raises(ValueError):
        bank.append(np.array([0, 2, 1]))
    bank.append(np.array([1, 0, 1]))
    with pytest.raises(HistoryQueryError):
        bank.ones_in_suffix(0, 2)
    with pytest.raises(ConfigError):
        ExactHistoryBank(0)


def test_history_list_window_is_block_suffix(rng):
    n = 4
    bank = make_history_bank("condensed", n)
    assert isinstance(bank, HistoryList)
    for _ in range(50):
        bank.append(rng.integers(0, 2, n))
    active = np.array([True, False, True, True])
    effective, ones = bank.window(8, active)
    for i in (0, 2, 3):
        assert (effective[i], ones[i]) == bank[i].suffix_ones(8)
    assert bank.footprint() == sum(bank[i].footprint() for i in range(n))


def test_make_history_bank():
    assert isinstance(make_history_bank(HistoryMode.EXACT, 3), ExactHistoryBank)
    assert len(make_history_bank("condensed", 3)) == 3
    with pytest.raises(ConfigError):
        make_history_bank("compressed", 3)
