class EdaError(Exception):
    """Базовое исключение библиотеки."""


class ConfigError(EdaError, ValueError):
    """Неизвестное имя алгоритма/функции или параметр вне допустимого диапазона."""


class LengthMismatchError(EdaError, ValueError):
    """Особи разной длины (или не той длины, что у фитнес-функции)."""


class HistoryQueryError(EdaError, ValueError):
    """Недопустимая длина суффикса при запросе к истории."""


class InvalidFrequencyError(EdaError, ValueError):
    """Частота вне множества {1/n, 1/2, 1 - 1/n}."""
