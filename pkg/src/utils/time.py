import time
import datetime
import numpy as np
from functools import wraps
from typing import List

def timeit(func):
    """wraps func so that it returns (result, elapsed seconds)"""
    @wraps(func)
    def timeit_wrapper(*args, **kwargs):
        start_time = time.perf_counter()
        result = func(*args, **kwargs)
        return result, time.perf_counter() - start_time
    return timeit_wrapper

def _hms(seconds: float) -> str:
    return str(datetime.timedelta(seconds=float(seconds))).split(".")[0]

class TimeMonitor:

    def __init__(self, max_steps: int) -> None:
        """wall times of the steps of an iterative solve and the projected time
        of a run that uses its whole iteration budget

        Args:
            max_steps (int): iteration budget of the monitored loop
        """
        self.max_steps = max_steps
        self.steps: List[float] = []

    def update(self, seconds: float):
        self.steps.append(seconds)

    def estimate(self) -> str:
        """mean step time times the budget, as h:mm:ss"""
        return _hms(np.mean(self.steps)*self.max_steps if self.steps else 0.0)

    def elapsed(self) -> str:
        return _hms(self.total)

    @property
    def total(self) -> float:
        return float(np.sum(self.steps))
