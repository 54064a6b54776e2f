from collections import deque
from typing import Dict, List, Optional

from .dfa import Dfa

Mapping = Dict[int, int]


def _consistent(a: Dfa, b: Dfa, pi: Mapping) -> bool:
    for (source, symbol), target in a.delta.items():
        if source in pi and target in pi and b.delta.get((pi[source], symbol)) != pi[target]:
            return False
        if source in pi and (pi[source], symbol) not in b.delta:
            return False
    return all(pi[q] in b.finals for q in a.finals if q in pi)


def embedding(a: Dfa, b: Dfa) -> Optional[Mapping]:
    """An injective π: Q_a → Q_b with π(q₀) = q₀′, π(F) ⊆ F′ and
    δ_b(π(q), ξ) = π(δ_a(q, ξ)) wherever δ_a is defined.

    The reachable part is forced by simulation; unreachable states are placed by search.

    Returns:
        Optional[Mapping]: π, or None if no embedding exists.
    """
    if len(a.states) > len(b.states):
        return None

    pi: Mapping = {a.initial: b.initial}
    queue = deque([a.initial])
    while queue:
        state = queue.popleft()
        for symbol, target in a.successors(state):
            image = b.delta.get((pi[state], symbol))
            if image is None:
                return None
            if target in pi:
                if pi[target] != image:
                    return None
                continue
            pi[target] = image
            queue.append(target)
    if len(set(pi.values())) != len(pi) or not _consistent(a, b, pi):
        return None

    rest: List[int] = sorted(a.states - pi.keys())

    def place(position: int) -> bool:
        if position == len(rest):
            return True
        used = set(pi.values())
        for image in sorted(b.states - used):
            pi[rest[position]] = image
            if _consistent(a, b, pi) and place(position + 1):
                return True
            del pi[rest[position]]
        return False

    return dict(pi) if place(0) else None


def dfa_isomorphic(a: Dfa, b: Dfa) -> Optional[Mapping]:
    """A bijection between the automata preserving the initial state, finals and the
    transition graph including where it is undefined; None if there is none."""
    if set(a.alphabet) != set(b.alphabet):
        return None
    if len(a.states) != len(b.states) or len(a.finals) != len(b.finals) or len(a.delta) != len(b.delta):
        return None
    return embedding(a, b)
