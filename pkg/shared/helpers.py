import math
from typing import Iterable
import numpy as np

from shared import const


def make_rng(seed: int | None) -> np.random.Generator:
    """Gets the seeded generator every engine draws from.

    Args:
        seed (int | None): The run seed. None draws fresh entropy.

    Returns:
        np.random.Generator: A PCG64 generator.
    """
    return np.random.default_rng(seed)


def mean(values: Iterable[float]) -> float:
    """Averages a finite, nonempty collection of reals.

    Args:
        values (Iterable[float]): The values.

    Raises:
        ValueError: If `values` is empty.

    Returns:
        float: The arithmetic mean.
    """
    values = list(values)
    if not values:
        raise ValueError("Cannot average an empty collection.")
    return math.fsum(values) / len(values)


def progress(iterable, **kwargs):
    """Wraps an iterable in a tqdm bar when progress output is enabled."""
    if not const.PROGRESS:
        return iterable

    from tqdm import tqdm
    return tqdm(iterable, leave=False, **kwargs)
