import os
import psutil
import logging

logger = logging.getLogger(__name__)

def get_resource_usage():
    """
    Возвращает текущее использование CPU и оперативной памяти процессом.

    Загрузка CPU считается с момента предыдущего вызова (без блокирующего
    интервала), поэтому первый вызов в процессе возвращает 0.

    Returns:
        Словарь, содержащий:
        - `cpu_percent`: процент загрузки CPU текущим процессом.
        - `memory_mb`: объем используемой оперативной памяти (RSS) в мегабайтах.
    """
    process = psutil.Process(os.getpid())
    cpu_usage = process.cpu_percent(interval=None)
    rss_mb = process.memory_info().rss / (1024 * 1024)
    return {"cpu_percent": cpu_usage, "memory_mb": rss_mb}

def log_resource_usage(context: str = ""):
    """
    Логирует текущее использование ресурсов после эксперимента.

    Args:
        context: Подпись к записи в логе (например, имя пресета).
    """
    usage = get_resource_usage()
    prefix = f"[{context}] " if context else ""
    logger.info(
        "%sИспользование ресурсов: CPU=%.2f%%, Память=%.2f МБ",
        prefix, usage["cpu_percent"], usage["memory_mb"],
    )
    return usage
