from .time import timeit, TimeMonitor
from .seed import child_seeds
from .threads import workers
