from collections import deque
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from .dfa import Dfa, Transition, coreachable, reachable, run
from ..utils.strings import EPSILON, shortlex_key, words_up_to


def renumber(m: Dfa) -> Dfa:
    # breadth-first in alphabet order, so numbering follows shortlex access strings
    order = {m.initial: 0}
    queue = deque([m.initial])
    while queue:
        state = queue.popleft()
        for _, target in m.successors(state):
            if target not in order:
                order[target] = len(order)
                queue.append(target)
    delta = {(order[s], x): order[t] for (s, x), t in m.delta.items() if s in order}
    finals = frozenset(order[q] for q in m.finals if q in order)
    return Dfa(m.alphabet, frozenset(order.values()), delta, 0, finals)


def canonical_dfa(m: Dfa) -> Dfa:
    """The minimal partial automaton of L(m): every state reachable and live, the
    dead class left implicit, states numbered by shortlex access string.

    Two automata accept the same language iff their canonical forms are equal.
    """
    live = reachable(m) & coreachable(m)
    keep = live | {m.initial}
    delta = {(s, x): t for (s, x), t in m.delta.items() if s in live and t in live}

    # Moore refinement; a missing transition goes to the implicit dead class (-1)
    block = {q: int(q in m.finals) for q in keep}
    while True:
        signatures: Dict[Tuple, int] = {}
        refined = {}
        for q in sorted(keep):
            signature = (block[q],) + tuple(block[delta[(q, x)]] if (q, x) in delta else -1 for x in m.alphabet)
            refined[q] = signatures.setdefault(signature, len(signatures))
        if len(signatures) == len(set(block.values())):
            block = refined
            break
        block = refined

    merged = {(block[s], x): block[t] for (s, x), t in delta.items()}
    finals = frozenset(block[q] for q in m.finals if q in keep)
    quotient = Dfa(m.alphabet, frozenset(block.values()), merged, block[m.initial], finals)
    return renumber(quotient)


def access_strings(c: Dfa) -> Dict[int, str]:
    """Shortlex-least string reaching each reachable state."""
    access = {c.initial: EPSILON}
    queue = deque([c.initial])
    while queue:
        state = queue.popleft()
        for symbol, target in c.successors(state):
            if target not in access:
                access[target] = access[state] + symbol
                queue.append(target)
    return access


def is_live(c: Dfa, word: str) -> bool:
    """ε is always live; otherwise `word` must lead to a state from which F is reachable."""
    if word == EPSILON:
        return True
    state = run(c, word)
    return state is not None and state in coreachable(c)


def pred_map(c: Dfa) -> Dict[int, Set[Transition]]:
    """pred(B) = {(D, ξ) : δ(D, ξ) = B} for every state B."""
    pred: Dict[int, Set[Transition]] = {q: set() for q in c.states}
    for (source, symbol), target in c.delta.items():
        pred[target].add((source, symbol))
    return pred


def is_convergence(c: Dfa, state: int, pred: Optional[Dict[int, Set[Transition]]] = None) -> bool:
    """A state entered in more than one way, counting the initial state's empty entry."""
    pred = pred_map(c) if pred is None else pred
    return int(state == c.initial) + len(pred[state]) > 1


def convergences(c: Dfa) -> List[int]:
    pred = pred_map(c)
    return [q for q in sorted(c.states) if is_convergence(c, q, pred)]


def _accepts_from(m: Dfa, state: Optional[int], suffix: str) -> bool:
    for symbol in suffix:
        state = m.step(state, symbol)
        if state is None:
            return False
    return state in m.finals


def nerode_classes(m: Dfa, words: Iterable[str], *, suffix_bound: Optional[int] = None) -> List[FrozenSet[str]]:
    """Groups `words` by ∼_L(m) by testing every suffix up to `suffix_bound`.

    The default bound is |Q|: an automaton with |Q| states plus a sink separates any two
    inequivalent states with a suffix of length at most |Q| − 1. Pass
    `suffix_bound=len(m.states) ** 2 + 1` for the longer, slower bound.

    Returns:
        List[FrozenSet[str]]: Classes ordered by their shortlex-least member.
    """
    bound = len(m.states) if suffix_bound is None else suffix_bound
    suffixes = words_up_to(m.alphabet, bound)
    cache: Dict[Optional[int], Tuple[bool, ...]] = {}
    groups: Dict[Tuple[bool, ...], Set[str]] = {}
    for word in words:
        state = run(m, word)
        if state not in cache:
            cache[state] = tuple(_accepts_from(m, state, suffix) for suffix in suffixes)
        groups.setdefault(cache[state], set()).add(word)
    classes = [frozenset(group) for group in groups.values()]
    key = shortlex_key(m.alphabet)
    return sorted(classes, key=lambda group: key(min(group, key=key)))
