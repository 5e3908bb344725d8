import time
import pytest
from src.utils import TimeMonitor, child_seeds, timeit, workers


def test_timeit():
    @timeit
    def slow(x):
        time.sleep(0.01)
        return 2*x

    result, elapsed = slow(3)
    assert result == 6
    assert elapsed >= 0.01


class TestTimeMonitor:

    def test_empty(self):
        monitor = TimeMonitor(10)
        assert monitor.estimate() == "0:00:00"
        assert monitor.total == 0.0

    def test_estimate(self):
        monitor = TimeMonitor(10)
        for t in [30.0, 90.0]:
            monitor.update(t)
        assert monitor.elapsed() == "0:02:00"
        assert monitor.estimate() == "0:10:00"
        assert monitor.total == 120.0


class TestSeeds:

    def test_reproducible(self):
        assert child_seeds(0, 4) == child_seeds(0, 4)

    def test_distinct(self):
        seeds = child_seeds(0, 50)
        assert len(set(seeds)) == 50
        assert seeds != child_seeds(1, 50)

    def test_prefix_stable(self):
        assert child_seeds(3, 5)[:3] == child_seeds(3, 3)


class TestWorkers:

    def test_default(self, monkeypatch):
        monkeypatch.delenv("QLAB_THREADS", raising=False)
        assert workers() >= 1

    def test_cap(self, monkeypatch):
        monkeypatch.setenv("QLAB_THREADS", "1")
        assert workers() == 1

    @pytest.mark.parametrize("value", ["0", "two", "-3"])
    def test_invalid(self, monkeypatch, value):
        monkeypatch.setenv("QLAB_THREADS", value)
        with pytest.raises(ValueError, match="QLAB_THREADS"):
            workers()
