import argparse
import logging
from typing import Any, Callable

from src.bench.config import config_from_mapping
from src.bench.presets import run_preset
from src.bench.runner import run_experiment
from src.bench.selftest import SelftestConfig, run_selftest
from src.bench.stats import Verdict, check_scaling, summarize
from src.bench.storage import emit_csv, write_summary_json
from src.eda.errors import ConfigError
from src.utils.config import section
from src.utils.monitoring import log_resource_usage

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERDICT_FAILED = 1
EXIT_USAGE = 2
EXIT_IO_ERROR = 3

# Уменьшенные размеры для `selftest --quick`
QUICK_SELFTEST = {
    "sig_length": 10**4,
    "sig_repetitions": 10,
    "oracle_streams": 20,
    "oracle_max_length": 500,
    "permutations": 3,
    "equivariance_steps": 200,
}

# Параметр алгоритма -> флаг командной строки
ALGORITHM_FLAGS = {
    "epsilon": "--epsilon",
    "history_mode": "--history-mode",
    "rho": "--rho",
    "a": "--a",
    "d": "--d",
    "stop_on_leave": "--stop-on-leave",
    "mu": "--mu",
    "restart": "--restart",
}


def algorithm_params(args: argparse.Namespace) -> dict[str, Any]:
    """Явно заданные параметры алгоритма из аргументов."""
    return {name: getattr(args, name) for name in ALGORITHM_FLAGS if getattr(args, name, None) is not None}


def _experiment(args: argparse.Namespace, config: dict[str, Any]):
    return config_from_mapping(
        {
            "algorithm": args.algo,
            "function": args.function,
            "sizes": args.n,
            "trials": args.trials,
            "params": algorithm_params(args),
            "seed": args.seed,
            "budget": args.budget,
            "jobs": args.jobs,
            "output": args.out,
            "summary_json": args.summary_json,
            "wallclock": args.wallclock,
            "history_mode": getattr(args, "history_mode", None),
        },
        config,
    )


def _exit_code(verdicts: list[Verdict]) -> int:
    return EXIT_OK if all(v.passed for v in verdicts) else EXIT_VERDICT_FAILED


def cmd_run(args: argparse.Namespace, config: dict[str, Any]) -> int:
    """
    Обработчик команды `run`: испытания одного алгоритма на одном размере.

    Печатает по строке на испытание; CSV и сводка пишутся по --out и
    --summary-json.
    """
    cfg = _experiment(args, config)
    records = run_experiment(cfg)
    for record in records:
        print(
            f"{record.algorithm} {record.function} n={record.n} seed={record.seed} "
            f"success={str(record.success).lower()} evaluations={record.evaluations} "
            f"iterations={record.iterations} failure={record.failure_kind or '-'}"
        )
    if cfg.output:
        emit_csv(records, cfg.output, cfg.wallclock)
    if cfg.summary_json:
        write_summary_json(summarize(records), [], cfg.summary_json)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace, config: dict[str, Any]) -> int:
    """
    Обработчик команды `sweep`: серия по нескольким размерам.

    Между соседними размерами вычисляется проверка роста n ln n; ее
    результат только сообщается, код возврата от нее не зависит.
    """
    cfg = _experiment(args, config)
    records = run_experiment(cfg)
    summaries = summarize(records)
    slack = float(section(config, "harness").get("slack", 1.25))
    verdicts = [check_scaling(a, b, slack) for a, b in zip(summaries, summaries[1:])]
    for s in summaries:
        print(
            f"{s.algorithm} {s.function} n={s.n} success={s.successes}/{s.trials} "
            f"median={'-' if s.median is None else int(s.median)} "
            f"ratio={'-' if s.ratio is None else f'{s.ratio:.3f}'}"
            + ('' if s.median_footprint is None else f" cells={int(s.median_footprint)}")
        )
    for v in verdicts:
        print(f"{v.name}: {v.status.value}")
    if cfg.output:
        emit_csv(records, cfg.output, cfg.wallclock)
    if cfg.summary_json:
        write_summary_json(summaries, verdicts, cfg.summary_json)
    log_resource_usage(cfg.label or "sweep")
    return EXIT_OK


def cmd_preset(args: argparse.Namespace, config: dict[str, Any]) -> int:
    """Обработчик команды `preset`: код 0, только если все проверки пройдены."""
    harness = section(config, "harness")
    results_dir = harness.get("results_dir", "results")
    overrides = {
        "sizes": args.n,
        "trials": args.trials,
        "seed": args.seed if args.seed is not None else harness.get("seed"),
        "budget": args.budget,
        "jobs": args.jobs,
    }
    outcome = run_preset(
        args.name,
        overrides,
        output=args.out or f"{results_dir}/{args.name}.csv",
        summary_json=args.summary_json or f"{results_dir}/{args.name}.json",
        include_wallclock=bool(args.wallclock),
    )
    for v in outcome.verdicts:
        print(f"{v.name}: {v.status.value}")
    print(f"{args.name}: {'PASS' if outcome.passed else 'FAIL'}")
    return EXIT_OK if outcome.passed else EXIT_VERDICT_FAILED


def cmd_selftest(args: argparse.Namespace, config: dict[str, Any]) -> int:
    """Обработчик команды `selftest`: проверки свойств, код 0, если все пройдены."""
    settings = dict(section(config, "harness", "selftest"))
    if args.quick:
        settings.update(QUICK_SELFTEST)
    if args.seed is not None:
        settings["seed"] = args.seed
    try:
        selftest_config = SelftestConfig(**settings)
    except TypeError as e:
        raise ConfigError(f"Некорректная секция harness.selftest: {e}") from e
    verdicts = run_selftest(selftest_config)
    for v in verdicts:
        print(f"{v.name}: {v.status.value}")
    return _exit_code(verdicts)


COMMANDS: dict[str, Callable[[argparse.Namespace, dict[str, Any]], int]] = {
    "run": cmd_run,
    "sweep": cmd_sweep,
    "preset": cmd_preset,
    "selftest": cmd_selftest,
}
