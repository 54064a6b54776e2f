from typing import Dict, List, Optional

from shared.helpers import make_rng
from .canonical import access_strings, canonical_dfa, coreachable
from .dfa import Dfa, run
from .examples import Accept, Equiv, NotEquiv, RegularExampleSet, RegularRecord
from ..utils.strings import lex_key
from ..utils.union_find import shuffled


def generate_sufficient(target: Dfa, seed: Optional[int] = None) -> RegularExampleSet:
    """Builds an example set sufficient for L(target).

    The strings used are the shortlex access string of every live class together with
    every access string extended by one defined transition. Accepting classes get an
    Accept, each class links its strings to its least one by Equiv, and every pair of
    live classes gets a NotEquiv of their access strings. `seed` only shuffles record
    order.

    Args:
        target (Dfa): Any automaton; its canonical form is used.
        seed (int, optional): Record order seed.

    Returns:
        RegularExampleSet: A set passing every sufficiency condition.
    """
    c = canonical_dfa(target)
    access = access_strings(c)
    live = sorted(coreachable(c) | {c.initial})

    cover = set(access.values())
    for (source, symbol) in c.delta:
        cover.add(access[source] + symbol)

    records: List[RegularRecord] = [Accept(access[state]) for state in sorted(c.finals)]

    key = lex_key(c.alphabet)
    by_class: Dict[int, List[str]] = {}
    for word in cover:
        by_class.setdefault(run(c, word), []).append(word)
    for state in sorted(by_class):
        members = sorted(by_class[state], key=key)
        records.extend(Equiv(members[0], word) for word in members[1:])

    for i, first in enumerate(live):
        for second in live[i + 1:]:
            records.append(NotEquiv((access[first], access[second])))

    return RegularExampleSet(c.alphabet, tuple(shuffled(records, make_rng(seed))))
