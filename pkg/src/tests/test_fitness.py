import numpy as np
import pytest

from src.eda.errors import ConfigError, LengthMismatchError
from src.eda.fitness import (
    FunctionKind,
    Individual,
    Ordering,
    bin_val,
    compare,
    get_function,
    leading_ones,
    one_max,
)


@pytest.mark.parametrize("text, expected", [("11111", 5), ("00000", 0), ("10110", 3)])
def test_one_max(text: str, expected: int):
    """Тестирует подсчет единиц."""
    assert one_max(Individual.from_string(text)) == expected


@pytest.mark.parametrize("text, expected", [("1101", 2), ("0111", 0), ("1111", 4)])
def test_leading_ones(text: str, expected: int):
    """Тестирует длину префикса из единиц."""
    assert leading_ones(Individual.from_string(text)) == expected


@pytest.mark.parametrize("text, expected", [("1010", 10), ("0001", 1), ("1111", 15)])
def test_bin_val(text: str, expected: int):
    """Тестирует двоичное значение, старший бит первым."""
    assert bin_val(Individual.from_string(text)) == expected


def test_leading_ones_across_byte_boundary():
    """
    Проверяет LeadingOnes и BinVal для длин, не кратных 8.

    Упакованное представление дополняется нулями, которые не должны
    влиять на результат.
    """
    x = Individual.from_string("1" * 11 + "0" + "1" * 5)
    assert leading_ones(x) == 11
    assert one_max(x) == 16
    assert bin_val(x) == int("1" * 11 + "0" + "1" * 5, 2)


def test_bin_val_is_exact_for_long_strings():
    """BinVal не теряет точность при n > 64."""
    x = Individual.ones(100)
    assert bin_val(x) == 2**100 - 1


def test_compare_examples():
    """
    Тестирует сравнение особей на примерах.

    OneMax: 110 лучше 100; LeadingOnes: 011 и 010 равны;
    BinVal: 1 и 63 нуля лучше 0 и 63 единиц.
    """
    onemax = get_function("onemax", 3)
    assert compare(onemax, Individual.from_string("110"), Individual.from_string("100")) is Ordering.X_BETTER

    leading = get_function("leadingones", 3)
    assert compare(leading, Individual.from_string("011"), Individual.from_string("010")) is Ordering.EQUAL

    binval = get_function("binval", 64)
    x = Individual.from_string("1" + "0" * 63)
    y = Individual.from_string("0" + "1" * 63)
    assert compare(binval, x, y) is Ordering.X_BETTER
    assert compare(binval, y, x) is Ordering.Y_BETTER


def test_compare_length_mismatch():
    """Сравнение особи другой длины вызывает ошибку."""
    f = get_function("onemax", 3)
    with pytest.raises(LengthMismatchError):
        compare(f, Individual.from_string("110"), Individual.from_string("10"))


def test_key_is_order_equivalent(rng):
    """
    Ключ `FitnessFunction.key` упорядочивает особи так же, как значения функции.

    Args:
        rng: Фикстура с генератором случайных чисел.
    """
    for kind in FunctionKind:
        f = get_function(kind.value, 13)
        for _ in range(200):
            x = Individual(rng.integers(0, 2, 13))
            y = Individual(rng.integers(0, 2, 13))
            assert (f.key(x) > f.key(y)) == (f.evaluate(x) > f.evaluate(y))
            assert (f.key(x) == f.key(y)) == (f.evaluate(x) == f.evaluate(y))


def test_permuted_function_keeps_optimum():
    """Функция на переставленных позициях вычисляет f(x[perm]) и сохраняет оптимум."""
    perm = [2, 0, 1]
    f = get_function("leadingones", 3, perm)
    x = Individual.from_string("011")
    # x[perm] = "101"
    assert f.evaluate(x) == 1
    assert f.evaluate(Individual.ones(3)) == 3


def test_individual_validation():
    """Особь содержит только 0 и 1 и не изменяется после создания."""
    with pytest.raises(ValueError):
        Individual.from_string("10a")
    with pytest.raises(ValueError):
        Individual(np.array([0, 2, 1]))
    x = Individual.from_string("101")
    with pytest.raises(ValueError):
        x.bits[0] = 0
    assert str(x) == "101"
    assert x == Individual.from_string("101")
    assert x.is_optimal() is False
    assert Individual.ones(4).is_optimal() is True


def test_get_function_unknown_name():
    """Неизвестное имя функции вызывает ConfigError."""
    with pytest.raises(ConfigError):
        get_function("jump", 10)


def _all_strings(n: int) -> list[Individual]:
    """Все 2^n строк длины n; строка с индексом k имеет двоичное значение k."""
    rows = (np.arange(2**n)[:, None] >> np.arange(n - 1, -1, -1)) & 1
    return [Individual(row) for row in rows]


@pytest.mark.parametrize("n", [1, 5, 8, 11, 16])
def test_bin_val_key_order_is_exhaustive(n: int):
    """Порядок ключей BinVal совпадает с порядком точных значений на всех строках."""
    f = get_function("binval", n)
    strings = _all_strings(n)
    assert [bin_val(x) for x in strings] == list(range(2**n))
    ordered = sorted(strings, key=f.key)
    assert [bin_val(x) for x in ordered] == list(range(2**n))


@pytest.mark.parametrize("n", [1, 4, 7])
def test_bin_val_compare_all_pairs(n: int):
    f = get_function("binval", n)
    strings = _all_strings(n)
    expected = {1: Ordering.X_BETTER, -1: Ordering.Y_BETTER, 0: Ordering.EQUAL}
    for x in strings:
        for y in strings:
            sign = (bin_val(x) > bin_val(y)) - (bin_val(x) < bin_val(y))
            assert compare(f, x, y) is expected[sign]


def test_bin_val_compare_random_long_pairs(rng):
    """10^4 случайных пар при n = 200 против знака разности больших целых."""
    n = 200
    f = get_function("binval", n)
    expected = {1: Ordering.X_BETTER, -1: Ordering.Y_BETTER, 0: Ordering.EQUAL}
    for index in range(10**4):
        x_bits = rng.integers(0, 2, n)
        if index % 2:
            # отличие в одном бите: сравнение решает именно он
            y_bits = x_bits.copy()
            y_bits[rng.integers(0, n)] ^= 1
        else:
            y_bits = rng.integers(0, 2, n)
        x, y = Individual(x_bits), Individual(y_bits)
        difference = bin_val(x) - bin_val(y)
        assert compare(f, x, y) is expected[(difference > 0) - (difference < 0)]


@pytest.mark.parametrize("kind", [k.value for k in FunctionKind])
@pytest.mark.parametrize("n", [1, 2, 7, 12])
def test_all_ones_is_unique_argmax(kind: str, n: int):
    """Строка из единиц - единственный максимум каждой функции."""
    f = get_function(kind, n)
    strings = _all_strings(n)
    values = [f.evaluate(x) for x in strings]
    best = max(values)
    winners = [x for x, value in zip(strings, values) if value == best]
    assert winners == [Individual.ones(n)]
