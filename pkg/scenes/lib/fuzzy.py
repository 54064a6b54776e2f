from typing import Callable, Dict

from algebra.utils.errors import ArityMismatch

CONNECTIVE_ARITY: Dict[str, int] = {"and": 2, "or": 2, "implies": 2, "not": 1}


def clamp(value: float) -> float:
    return min(max(float(value), 0.0), 1.0)


def fuzzy_and(a: float, b: float) -> float:
    return min(a, b)


def fuzzy_or(a: float, b: float) -> float:
    return max(a, b)


def fuzzy_not(a: float) -> float:
    return 1.0 - a


def fuzzy_implies(a: float, b: float) -> float:
    return max(1.0 - a, b)


CONNECTIVES: Dict[str, Callable[..., float]] = {
    "and": fuzzy_and,
    "or": fuzzy_or,
    "implies": fuzzy_implies,
    "not": fuzzy_not,
}


def fuzzy_apply(connective: str, *args: float) -> float:
    """Gödel-style connectives on [0, 1]: and = min, or = max, implies = max(1 − a, b), not = 1 − a.

    Arguments outside [0, 1] are clamped first.

    Raises:
        ArityMismatch: Wrong argument count for the connective.
        KeyError: Unknown connective.
    """
    arity = CONNECTIVE_ARITY[connective]
    if len(args) != arity:
        raise ArityMismatch(f"'{connective}' takes {arity} arguments, got {len(args)}")
    return CONNECTIVES[connective](*(clamp(a) for a in args))
