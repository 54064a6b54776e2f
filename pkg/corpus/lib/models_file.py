import os
import re

import numpy as np

from algebra.utils.errors import CorpusSyntaxError
from scenes.lib.models import PredicateModels
from ..utils.atomic import write_text
from .term_text import NAME


def _reals(fields, number: int) -> list:
    try:
        values = [float(token) for token in fields]
    except ValueError as e:
        raise CorpusSyntaxError(f"Bad number: {e}", number) from e
    if not all(np.isfinite(values)):
        raise CorpusSyntaxError("Parameters must be finite", number)
    return values


def parse_models(text: str) -> PredicateModels:
    """One `name w1 … wn b` record per predicate, all of the same length.

    Raises:
        CorpusSyntaxError: Bad names, non-finite numbers, repeated predicates or ragged rows.
    """
    names, rows = [], []
    for number, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split("#", 1)[0].split()
        if not fields:
            continue
        if not re.fullmatch(NAME, fields[0]):
            raise CorpusSyntaxError(f"Expected a predicate name, found '{fields[0]}'", number, 1)
        if fields[0] in names:
            raise CorpusSyntaxError(f"Predicate '{fields[0]}' appears twice", number)
        values = _reals(fields[1:], number)
        if len(values) < 2:
            raise CorpusSyntaxError("A predicate record needs at least one weight and a bias", number)
        if rows and len(values) != len(rows[0]):
            raise CorpusSyntaxError(f"Expected {len(rows[0])} numbers, got {len(values)}", number)
        names.append(fields[0])
        rows.append(values)
    if not rows:
        raise CorpusSyntaxError("No predicate records")
    table = np.array(rows)
    return PredicateModels(names, table[:, :-1], table[:, -1])


def format_models(models: PredicateModels) -> str:
    return "".join(
        " ".join([name] + [repr(float(w)) for w in models.weights[i]] + [repr(float(models.bias[i]))]) + "\n"
        for i, name in enumerate(models.names)
    )


def read_models(path: str | os.PathLike) -> PredicateModels:
    with open(path, encoding="utf-8") as handle:
        return parse_models(handle.read())


def write_models(models: PredicateModels, path: str | os.PathLike):
    write_text(path, format_models(models))


def parse_params(text: str) -> np.ndarray:
    """Whitespace-separated reals over any number of lines."""
    values = []
    for number, raw in enumerate(text.splitlines(), start=1):
        values.extend(_reals(raw.split("#", 1)[0].split(), number))
    if not values:
        raise CorpusSyntaxError("No parameters")
    return np.array(values)


def format_params(params) -> str:
    return " ".join(repr(float(p)) for p in params) + "\n"


def read_params(path: str | os.PathLike) -> np.ndarray:
    with open(path, encoding="utf-8") as handle:
        return parse_params(handle.read())


def write_params(params, path: str | os.PathLike):
    write_text(path, format_params(params))
