import argparse
import logging
import os
import sys
from typing import Any, Sequence

from dotenv import load_dotenv

from src.bench.presets import PRESETS
from src.cli.commands import ALGORITHM_FLAGS, COMMANDS, EXIT_IO_ERROR, EXIT_USAGE
from src.eda.algorithms import ALGORITHMS, PARAMETERS
from src.eda.errors import ConfigError
from src.eda.fitness import FunctionKind
from src.eda.history import HistoryMode
from src.utils.config import load_config, section
from src.utils.logging import setup_logging

logger = logging.getLogger(__name__)


def _bounded(kind, name: str, low=None, high=None, low_open=False, high_open=False):
    def convert(text: str):
        try:
            value = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name}: ожидалось число, получено {text!r}") from None
        if low is not None and (value <= low if low_open else value < low):
            raise argparse.ArgumentTypeError(f"{name} должен быть {'>' if low_open else '>='} {low}, получено {value}")
        if high is not None and (value >= high if high_open else value > high):
            raise argparse.ArgumentTypeError(f"{name} должен быть {'<' if high_open else '<='} {high}, получено {value}")
        return value

    return convert


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML-файл конфигурации (по умолчанию config.local.yaml или config.yaml)")
    common.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="уровень логирования")
    return common


def _output_parser() -> argparse.ArgumentParser:
    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--n", nargs="+", type=_bounded(int, "--n", low=1), help="размер(ы) задачи")
    output.add_argument("--seed", type=_bounded(int, "--seed", low=0), help="главное зерно")
    output.add_argument("--trials", type=_bounded(int, "--trials", low=1), help="испытаний на размер")
    output.add_argument("--budget", type=_bounded(int, "--budget", low=2), help="бюджет вычислений на испытание")
    output.add_argument("--jobs", type=_bounded(int, "--jobs", low=1), help="число процессов (или EDA_LAB_JOBS)")
    output.add_argument("--out", help="путь к CSV с результатами")
    output.add_argument("--summary-json", help="путь к JSON-сводке")
    output.add_argument("--wallclock", action="store_const", const=True, help="писать время испытаний в CSV")
    return output


def _add_algorithm_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--algo", required=True, choices=ALGORITHMS, help="алгоритм")
    parser.add_argument(
        "--function", default=FunctionKind.ONE_MAX.value, choices=[k.value for k in FunctionKind], help="фитнес-функция"
    )
    parser.add_argument("--epsilon", type=_bounded(float, "--epsilon", low=0, low_open=True), help="sigcga: epsilon (по умолчанию 13)")
    parser.add_argument("--history-mode", choices=[m.value for m in HistoryMode], help="sigcga: режим истории")
    parser.add_argument("--rho", type=_bounded(float, "--rho", 0, 1, True, True), help="scga/cga: шаг обновления")
    parser.add_argument("--a", type=_bounded(float, "--a", low=0), help="scga: добавка к шагу в сторону 1/2")
    parser.add_argument("--d", type=_bounded(float, "--d", 0.5, 1, True, True), help="scga: граница фиксации")
    parser.add_argument("--stop-on-leave", action="store_const", const=True, help="scga: остановка при выходе из (1-d, d)")
    parser.add_argument("--mu", type=_bounded(int, "--mu", low=2), help="csa: размер популяции")
    parser.add_argument("--restart", action=argparse.BooleanOptionalAction, default=None, help="csa: перезапуски")


def build_parser() -> argparse.ArgumentParser:
    common, output = _common_parser(), _output_parser()
    parser = argparse.ArgumentParser(prog="eda-lab", description="Эксперименты с sig-cGA, scGA, cGA и CSA")
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", parents=[common, output], help="серия испытаний одного размера")
    _add_algorithm_arguments(run)
    sweep = subparsers.add_parser("sweep", parents=[common, output], help="серия по нескольким размерам")
    _add_algorithm_arguments(sweep)

    preset = subparsers.add_parser("preset", parents=[common, output], help="встроенный эксперимент с проверками")
    preset.add_argument("name", choices=list(PRESETS), help="имя пресета")

    selftest = subparsers.add_parser("selftest", parents=[common], help="проверки свойств алгоритмов")
    selftest.add_argument("--seed", type=_bounded(int, "--seed", low=0), help="главное зерно")
    selftest.add_argument("--quick", action="store_true", help="уменьшенные размеры проверок")
    return parser


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    """
    Разбирает аргументы командной строки.

    Кроме проверки диапазонов отклоняет флаги параметров, не относящиеся
    к выбранному алгоритму (например, --epsilon вместе с --algo csa).
    Ошибки использования завершают процесс с кодом 2.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("run", "sweep"):
        allowed = set(PARAMETERS[args.algo])
        for name, flag in ALGORITHM_FLAGS.items():
            if getattr(args, name) is not None and name not in allowed:
                parser.error(f"флаг {flag} не применим к алгоритму {args.algo}")
        if not args.n:
            parser.error("не задан размер задачи --n")
        if args.command == "run" and len(args.n) != 1:
            parser.error("run принимает один размер --n; для нескольких используйте sweep")
        if any(a >= b for a, b in zip(args.n, args.n[1:])):
            parser.error("размеры --n должны строго возрастать")
    elif args.command == "preset" and args.n and any(a >= b for a, b in zip(args.n, args.n[1:])):
        parser.error("размеры --n должны строго возрастать")
    return args


def resolve_jobs(args: argparse.Namespace, config: dict[str, Any]) -> int:
    """
    Число процессов: флаг --jobs, затем EDA_LAB_JOBS, затем `harness.jobs`, иначе 1.

    Raises:
        ConfigError: если EDA_LAB_JOBS не положительное целое.
    """
    if getattr(args, "jobs", None):
        return args.jobs
    env_value = os.getenv("EDA_LAB_JOBS")
    if env_value:
        try:
            jobs = int(env_value)
        except ValueError:
            raise ConfigError(f"EDA_LAB_JOBS должен быть целым числом, получено {env_value!r}") from None
        if jobs < 1:
            raise ConfigError(f"EDA_LAB_JOBS должен быть >= 1, получено {jobs}")
        return jobs
    return int(section(config, "harness").get("jobs", 1))


def main(argv: Sequence[str] | None = None) -> int:
    """
    Точка входа CLI.

    Коды возврата: 0 - все проверки пройдены, 1 - проверка не пройдена,
    2 - ошибка использования или конфигурации, 3 - ошибка ввода-вывода.
    """
    load_dotenv()
    args = parse_args(argv)
    try:
        config = load_config(args.config)
    except ConfigError as e:
        print(f"eda-lab: ошибка конфигурации: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"eda-lab: не удалось прочитать конфигурацию: {e}", file=sys.stderr)
        return EXIT_IO_ERROR
    setup_logging(config, level=args.log_level)

    try:
        args.jobs = resolve_jobs(args, config)
        return COMMANDS[args.command](args, config)
    except ConfigError as e:
        logger.error("Ошибка конфигурации: %s", e)
        return EXIT_USAGE
    except OSError as e:
        logger.error("Ошибка ввода-вывода: %s", e)
        return EXIT_IO_ERROR


if __name__ == "__main__":
    sys.exit(main())
