import os
from typing import Dict, List

from algebra.utils.errors import CorpusSyntaxError
from regular.lib.dfa import Dfa
from ..utils.atomic import write_text

KEYWORDS = ("alphabet", "states", "initial", "final", "trans")


def _states(words: List[str], line: int) -> List[int]:
    try:
        return [int(word) for word in words]
    except ValueError:
        raise CorpusSyntaxError(f"States must be integers, got {' '.join(words)}", line)


def parse_dfa(text: str) -> Dfa:
    """Reads the line format `alphabet a b`, `states 0 1`, `initial 0`, `final 0`, `trans 0 a 1`.

    Raises:
        CorpusSyntaxError: Unknown keywords, malformed lines or an inconsistent automaton.
    """
    fields: Dict[str, List[str]] = {}
    where: Dict[str, int] = {}
    delta = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        keyword, args = line[0], line[1:]
        if keyword not in KEYWORDS:
            raise CorpusSyntaxError(f"Unknown keyword '{keyword}'", number, raw.index(keyword) + 1)

        if keyword == "trans":
            if len(args) != 3:
                raise CorpusSyntaxError(f"'trans' takes source, symbol and target, got {len(args)} fields", number)
            source, target = _states([args[0], args[2]], number)
            if (source, args[1]) in delta:
                raise CorpusSyntaxError(f"Second transition from {source} on '{args[1]}'", number)
            delta[(source, args[1])] = target
            continue

        if keyword in fields:
            raise CorpusSyntaxError(f"Repeated '{keyword}' line", number)
        if keyword == "initial" and len(args) != 1:
            raise CorpusSyntaxError("'initial' takes exactly one state", number)
        fields[keyword] = args
        where[keyword] = number

    for keyword in ("alphabet", "initial"):
        if keyword not in fields:
            raise CorpusSyntaxError(f"Missing '{keyword}' line")

    initial = _states(fields["initial"], where["initial"])[0]
    finals = _states(fields.get("final", []), where.get("final"))
    states = set(_states(fields.get("states", []), where.get("states")))
    states |= {initial} | set(finals) | {s for s, _ in delta} | set(delta.values())
    try:
        return Dfa(tuple(fields["alphabet"]), frozenset(states), delta, initial, frozenset(finals))
    except ValueError as e:
        raise CorpusSyntaxError(f"Inconsistent automaton: {e}") from e


def format_dfa(m: Dfa) -> str:
    rank = {symbol: i for i, symbol in enumerate(m.alphabet)}
    lines = [
        f"alphabet {' '.join(m.alphabet)}",
        f"states {' '.join(str(q) for q in sorted(m.states))}",
        f"initial {m.initial}",
        " ".join(["final"] + [str(q) for q in sorted(m.finals)]),
    ]
    for (source, symbol), target in sorted(m.delta.items(), key=lambda item: (item[0][0], rank[item[0][1]])):
        lines.append(f"trans {source} {symbol} {target}")
    return "\n".join(lines) + "\n"


def read_dfa(path: str | os.PathLike) -> Dfa:
    with open(path, encoding="utf-8") as handle:
        return parse_dfa(handle.read())


def write_dfa(m: Dfa, path: str | os.PathLike):
    write_text(path, format_dfa(m))
