import csv
import json
import logging
from collections import Counter
from dataclasses import asdict
from pathlib import Path
from typing import Iterable, Sequence

from src.bench.runner import TrialRecord
from src.bench.stats import ScalingSummary, Verdict

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "algorithm",
    "function",
    "n",
    "params_json",
    "seed",
    "iterations",
    "evaluations",
    "success",
    "failure_kind",
    "wallclock_ms",
)


def _row(record: TrialRecord, include_wallclock: bool) -> list[str]:
    wallclock = "" if not include_wallclock or record.wallclock_ms is None else f"{record.wallclock_ms:.3f}"
    return [
        record.algorithm,
        record.function,
        str(record.n),
        record.params_json,
        str(record.seed),
        str(record.iterations),
        str(record.evaluations),
        "true" if record.success else "false",
        record.failure_kind or "",
        wallclock,
    ]


def emit_csv(records: Iterable[TrialRecord], path: str | Path, include_wallclock: bool = False) -> Path:
    """
    Сохраняет записи в CSV: заголовок и по строке на запись.

    Кодировка UTF-8, перевод строки LF, поля с запятыми и кавычками
    (params_json) экранируются по RFC 4180. Время испытаний пишется
    только при `include_wallclock`, иначе колонка пустая и файл
    побайтно воспроизводим.

    Args:
        records: Записи испытаний.
        path: Путь к файлу; родительские директории создаются.
        include_wallclock: Писать ли колонку wallclock_ms.

    Returns:
        Путь к записанному файлу.

    Raises:
        OSError: при ошибке записи.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
        writer.writerow(CSV_COLUMNS)
        for record in records:
            writer.writerow(_row(record, include_wallclock))
            count += 1
    logger.info("Записано %d строк в %s", count, path)
    return path


def read_csv(path: str | Path) -> list[TrialRecord]:
    """
    Читает CSV, записанный `emit_csv`, обратно в записи.

    Номер испытания восстанавливается по порядку строк внутри группы
    (алгоритм, функция, n).

    Raises:
        OSError: при ошибке чтения.
        ValueError: если заголовок не совпадает с ожидаемым.
    """
    records: list[TrialRecord] = []
    counters: Counter = Counter()
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"Неожиданный заголовок CSV в {path}: {reader.fieldnames}")
        for row in reader:
            key = (row["algorithm"], row["function"], int(row["n"]))
            records.append(
                TrialRecord(
                    algorithm=row["algorithm"],
                    function=row["function"],
                    n=int(row["n"]),
                    params=json.loads(row["params_json"]),
                    seed=int(row["seed"]),
                    evaluations=int(row["evaluations"]),
                    iterations=int(row["iterations"]),
                    success=row["success"] == "true",
                    failure_kind=row["failure_kind"] or None,
                    wallclock_ms=float(row["wallclock_ms"]) if row["wallclock_ms"] else None,
                    trial=counters[key],
                )
            )
            counters[key] += 1
    return records


def write_summary_json(
    summaries: Sequence[ScalingSummary], verdicts: Sequence[Verdict], path: str | Path
) -> Path:
    """
    Сохраняет сводку и вердикты в JSON.

    Raises:
        OSError: при ошибке записи.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "summaries": [asdict(s) for s in summaries],
        "verdicts": [{**asdict(v), "status": v.status.value} for v in verdicts],
        "passed": all(v.passed for v in verdicts),
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=4, ensure_ascii=False, sort_keys=True)
        f.write("\n")
    logger.info("Сводка сохранена в %s", path)
    return path
