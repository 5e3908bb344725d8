import numpy as np
from typing import List

def child_seeds(seed: int, count: int) -> List[int]:
    """derives independent, reproducible integer seeds from a base seed

    Args:
        seed (int): base seed
        count (int): number of seeds to derive

    Returns:
        List[int]: derived seeds (same base seed -> same list)
    """
    sequence = np.random.SeedSequence(seed)
    return [int(s.generate_state(1)[0]) for s in sequence.spawn(count)]
