from dataclasses import dataclass
from types import MappingProxyType
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Set, Tuple

from shared.helpers import make_rng
from ..utils.strings import check_word

Transition = Tuple[int, str]


@dataclass(frozen=True)
class Dfa:
    """A possibly partial deterministic automaton; a missing transition rejects.

    Attributes:
        alphabet (Tuple[str, ...]): Ξ in its total order, one character per symbol.
        states (FrozenSet[int]): Q.
        delta (Mapping[Transition, int]): The partial transition function.
        initial (int): q₀.
        finals (FrozenSet[int]): F ⊆ Q.
    """
    alphabet: Tuple[str, ...]
    states: FrozenSet[int]
    delta: Mapping[Transition, int]
    initial: int
    finals: FrozenSet[int]

    __hash__ = None

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(self, "delta", MappingProxyType(dict(self.delta)))

        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError(f"Alphabet has repeated symbols: {self.alphabet}")
        for symbol in self.alphabet:
            if len(symbol) != 1:
                raise ValueError(f"Alphabet symbols must be single characters, got '{symbol}'")
        if self.initial not in self.states:
            raise ValueError(f"Initial state {self.initial} is not a state.")
        if not self.finals <= self.states:
            raise ValueError(f"Final states {sorted(self.finals - self.states)} are not states.")
        for (source, symbol), target in self.delta.items():
            if source not in self.states or target not in self.states:
                raise ValueError(f"Transition {source} -{symbol}-> {target} leaves the state set.")
            if symbol not in self.alphabet:
                raise ValueError(f"Transition {source} -{symbol}-> {target} uses a symbol outside {self.alphabet}.")

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Dfa) and self.alphabet == other.alphabet and self.states == other.states
                and dict(self.delta) == dict(other.delta) and self.initial == other.initial and self.finals == other.finals)

    def step(self, state: Optional[int], symbol: str) -> Optional[int]:
        if state is None:
            return None
        return self.delta.get((state, symbol))

    def successors(self, state: int) -> List[Tuple[str, int]]:
        """Outgoing transitions of `state` in alphabet order."""
        return [(symbol, self.delta[(state, symbol)]) for symbol in self.alphabet if (state, symbol) in self.delta]


def run(m: Dfa, word: str) -> Optional[int]:
    """The state reached on `word`, or None if a transition is missing.

    Raises:
        SymbolNotInAlphabet: `word` uses a symbol outside Ξ.
    """
    check_word(word, m.alphabet)
    state: Optional[int] = m.initial
    for symbol in word:
        state = m.step(state, symbol)
        if state is None:
            return None
    return state


def accepts(m: Dfa, word: str) -> bool:
    return run(m, word) in m.finals


def reachable(m: Dfa) -> Set[int]:
    seen = {m.initial}
    frontier = [m.initial]
    while frontier:
        state = frontier.pop()
        for _, target in m.successors(state):
            if target not in seen:
                seen.add(target)
                frontier.append(target)
    return seen


def coreachable(m: Dfa) -> Set[int]:
    """States from which some final state is reachable."""
    incoming: Dict[int, Set[int]] = {}
    for (source, _), target in m.delta.items():
        incoming.setdefault(target, set()).add(source)
    seen = set(m.finals)
    frontier = list(m.finals)
    while frontier:
        state = frontier.pop()
        for source in incoming.get(state, ()):
            if source not in seen:
                seen.add(source)
                frontier.append(source)
    return seen


def complete_dfa(m: Dfa) -> Dfa:
    """Adds a rejecting sink so that δ is total. Already complete automata are returned unchanged."""
    missing = [(q, symbol) for q in sorted(m.states) for symbol in m.alphabet if (q, symbol) not in m.delta]
    if not missing:
        return m
    sink = max(m.states) + 1
    delta = dict(m.delta)
    for key in missing:
        delta[key] = sink
    for symbol in m.alphabet:
        delta[(sink, symbol)] = sink
    return Dfa(m.alphabet, m.states | {sink}, delta, m.initial, m.finals)


def add_transition(m: Dfa, source: int, symbol: str, target: int) -> Dfa:
    """Returns `m` with δ(source, symbol) = target, adding either state if new."""
    delta = dict(m.delta)
    delta[(source, symbol)] = target
    return Dfa(m.alphabet, m.states | {source, target}, delta, m.initial, m.finals)


def random_dfa(num_states: int, alphabet: Sequence[str], seed: int | None = None, density: float = 0.7) -> Dfa:
    """Draws a partial automaton with states 0..num_states−1 and initial state 0.

    Each transition is present with probability `density` and points to a uniform
    state. At least one state is final.
    """
    if num_states < 1:
        raise ValueError(f"An automaton needs at least one state, got {num_states}")
    rng = make_rng(seed)
    delta = {}
    for state in range(num_states):
        for symbol in alphabet:
            if rng.random() < density:
                delta[(state, symbol)] = int(rng.integers(num_states))
    finals = {state for state in range(num_states) if rng.random() < 0.5}
    if not finals:
        finals = {int(rng.integers(num_states))}
    return Dfa(tuple(alphabet), frozenset(range(num_states)), delta, 0, frozenset(finals))


def dfa_from_table(alphabet: Sequence[str], transitions: Sequence[Tuple[int, str, int]], initial: int = 0,
                   finals: Sequence[int] = (), states: Sequence[int] = ()) -> Dfa:
    """Convenience constructor from (source, symbol, target) triples."""
    all_states = set(states) | {initial} | set(finals)
    for source, _, target in transitions:
        all_states |= {source, target}
    return Dfa(tuple(alphabet), frozenset(all_states), {(s, x): t for s, x, t in transitions}, initial, frozenset(finals))
