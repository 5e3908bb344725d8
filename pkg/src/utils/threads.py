import os

ENV_VAR = "QLAB_THREADS"

def workers() -> int:
    """number of worker threads for transforms and per-seed experiments.
    QLAB_THREADS caps it, default is the cpu count.
    """
    cpus = os.cpu_count() or 1
    value = os.environ.get(ENV_VAR)
    if value is None or value.strip() == "":
        return cpus
    try:
        n = int(value)
    except ValueError:
        raise ValueError(f"{ENV_VAR} must be a positive integer, not {value!r}")
    if n < 1:
        raise ValueError(f"{ENV_VAR} must be a positive integer, not {n}")
    return min(n, cpus)
