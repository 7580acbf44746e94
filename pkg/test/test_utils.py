import logging
import time

import pytest

from kplexpart.utils.logger import setup_logger
from kplexpart.utils.timer import StageTimer, Timer, timeit


def test_setup_logger_level():
    setup_logger("debug")
    assert logging.getLogger().level == logging.DEBUG
    setup_logger(logging.WARNING)
    assert logging.getLogger().level == logging.WARNING


def test_setup_logger_file(tmp_path):
    setup_logger("INFO", log_to_file=True, base_log_name="run", log_dir=tmp_path / "logs")
    logging.getLogger("kplexpart.test").info("hello")
    for handler in logging.getLogger().handlers:
        handler.flush()
    files = list((tmp_path / "logs").glob("run_*.log"))
    assert len(files) == 1
    assert "hello" in files[0].read_text()
    setup_logger("WARNING")


def test_setup_logger_unknown_level():
    with pytest.raises(ValueError):
        setup_logger("LOUD")


def test_timer_deadline():
    timer = Timer()
    assert not timer.expired()
    assert timer.remaining == float("inf")

    timer = Timer(0.01)
    time.sleep(0.02)
    assert timer.expired()
    assert timer.remaining == 0.0
    assert timer.elapsed >= 0.01


def test_stage_timer(caplog):
    timer = StageTimer(logging.getLogger("kplexpart.test"))
    timer.update("read")
    timer.update("solve")
    timer.update("solve")
    assert list(timer.times) == ["read", "solve"]
    with caplog.at_level(logging.INFO, logger="kplexpart.test"):
        total = timer.print("run")
    assert total == pytest.approx(timer.get_total_time())
    assert "[run] | read=" in caplog.text


def test_timeit(caplog):
    @timeit
    def square(x):
        return x * x

    with caplog.at_level(logging.DEBUG, logger="kplexpart.utils.timer"):
        assert square(3) == 9
    assert "square took" in caplog.text
