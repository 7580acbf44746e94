import logging
from datetime import date, datetime
from pathlib import Path
from typing import Union

LOG_FORMAT = "%(asctime)s | %(levelname)s | %(filename)s - ln %(lineno)d | %(message)s"


def setup_logger(
    log_level: Union[int, str] = logging.INFO,
    log_to_file: bool = False,
    base_log_name: str = "kplexpart",
    log_dir: Union[str, Path] = None,
) -> None:
    """Configure the root logger for kplexpart runs.

    Messages always go to a stream handler (standard error). When `log_to_file`
    is set, a dated log file is also written in `log_dir` (default "logs").

    Args:
        log_level (Union[int, str], optional): Logging level, either a logging constant or its name (e.g., "DEBUG"). Defaults to logging.INFO.
        log_to_file (bool, optional): Also write the log to a file. Defaults to False.
        base_log_name (str, optional): Prefix of the log file name. Defaults to "kplexpart".
        log_dir (Union[str, Path], optional): Folder for log files. Defaults to None ("logs").
    """
    if isinstance(log_level, str):
        level = logging.getLevelName(log_level.upper())
        if not isinstance(level, int):
            raise ValueError(f"Unknown log level {log_level}")
        log_level = level

    handlers = [logging.StreamHandler()]
    if log_to_file:
        log_dir = Path("logs") if log_dir is None else Path(log_dir)
        log_dir.mkdir(exist_ok=True, parents=True)
        today = date.today()
        now = datetime.now()
        current_date = f"{today.strftime('%Y_%m_%d')}_{now.strftime('%H-%M')}"
        log_file = log_dir / f"{base_log_name}_{current_date}.log"
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=log_level,
        format=LOG_FORMAT,
        datefmt="%Y-%m-%d %H:%M:%S",
        handlers=handlers,
        force=True,
    )
