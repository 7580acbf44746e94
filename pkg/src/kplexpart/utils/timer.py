import logging
import time
from collections import OrderedDict
from functools import wraps

logger = logging.getLogger(__name__)


def timeit(func):
    """Log the wall time of every call to `func` at DEBUG level."""

    @wraps(func)
    def timeit_wrapper(*args, **kwargs):
        start_time = time.perf_counter()
        result = func(*args, **kwargs)
        total_time = time.perf_counter() - start_time
        logger.debug(f"Function {func.__name__} took {total_time:.4f} seconds")
        return result

    return timeit_wrapper


class Timer:
    """Wall-clock timer with an optional deadline.

    Args:
        time_limit (float, optional): Seconds allowed from construction. None means no deadline.
    """

    def __init__(self, time_limit: float = None) -> None:
        self.time_limit = time_limit
        self.start = time.perf_counter()
        self.deadline = None if time_limit is None else self.start + time_limit

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.start

    @property
    def remaining(self) -> float:
        if self.deadline is None:
            return float("inf")
        return max(0.0, self.deadline - time.perf_counter())

    def expired(self) -> bool:
        return self.deadline is not None and time.perf_counter() >= self.deadline


class StageTimer:
    """Accumulate named stage durations (parse, build, solve, ...) of a run and log them."""

    def __init__(self, logger: logging.Logger = None):
        self.times = OrderedDict()
        self.logger = logger
        self.reset()

    def reset(self):
        self.last_time = time.perf_counter()

    def update(self, name: str = "") -> float:
        now = time.perf_counter()
        dt = now - self.last_time
        self.times[name] = self.times.get(name, 0.0) + dt
        self.last_time = now
        return dt

    def get_total_time(self) -> float:
        return sum(self.times.values())

    def print(self, text: str = "Timer") -> float:
        msg = f"[{text}] | " + ", ".join(f"{k}={v:.3f}" for k, v in self.times.items())
        (self.logger or logger).info(msg)
        return self.get_total_time()
